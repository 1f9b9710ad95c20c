//! Closed-form evaluators and root finders for the kissing-number exponent
//! formulas, entropy bounds and related constants.
//!
//! Every evaluator works in the precision of an [`Evaluator`] and returns a
//! [`BoundReport`] carrying the value, an absolute error bound and the
//! formula text. Logarithms are base 2 throughout.

mod real;

use std::collections::BTreeMap;

use serde::Serialize;

pub use real::{Evaluator, Real, DEFAULT_BITS};

use crate::error::{Error, Result};

/// Decimal places printed in [`BoundReport::value`].
const PRINT_DIGITS: usize = 24;

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct BoundReport {
    pub name: String,
    pub inputs: BTreeMap<String, String>,
    /// Fixed-point decimal rendering of the value.
    pub value: String,
    pub approx: f64,
    /// Absolute error bound on `value`.
    pub tolerance: f64,
    pub formula: String,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub details: BTreeMap<String, String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub holds: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl BoundReport {
    pub(crate) fn new(ev: &Evaluator, name: impl Into<String>, formula: &str, value: &Real, tolerance: f64) -> Self {
        let approx = ev.to_f64(value);
        BoundReport {
            name: name.into(),
            inputs: BTreeMap::new(),
            value: ev.to_fixed(value, PRINT_DIGITS),
            approx,
            tolerance: tolerance.max(ev.epsilon() * approx.abs().max(1.0)),
            formula: formula.into(),
            details: BTreeMap::new(),
            holds: None,
            note: None,
        }
    }

    pub(crate) fn input(mut self, k: &str, v: impl ToString) -> Self {
        self.inputs.insert(k.into(), v.to_string());
        self
    }

    pub(crate) fn detail(mut self, k: &str, v: impl ToString) -> Self {
        self.details.insert(k.into(), v.to_string());
        self
    }

    pub(crate) fn with_note(mut self, note: &str) -> Self {
        self.note = Some(note.into());
        self
    }
}

fn check_unit(delta: f64) -> Result<()> {
    if (0.0..=1.0).contains(&delta) {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("delta = {delta} outside [0, 1]")))
    }
}

/// H(delta) for an exact rational delta = num/den.
pub fn entropy_ratio(ev: &Evaluator, num: i64, den: i64) -> Result<BoundReport> {
    check_unit(num as f64 / den as f64)?;
    let v = ev.entropy(&ev.ratio(num, den));
    Ok(BoundReport::new(ev, "entropy", "-d log d - (1-d) log(1-d)", &v, 0.0).input("delta", format!("{num}/{den}")))
}

pub fn entropy(ev: &Evaluator, delta: f64) -> Result<BoundReport> {
    check_unit(delta)?;
    let v = ev.entropy(&ev.from_f64(delta));
    Ok(BoundReport::new(ev, "entropy", "-d log d - (1-d) log(1-d)", &v, 0.0).input("delta", delta))
}

/// q-ary entropy (delta log(q-1) + H(delta)) / log q.
pub fn entropy_q_value(ev: &Evaluator, q: u64, delta: &Real) -> Real {
    let lq1 = ev.log2(&ev.int(q as i64 - 1));
    let num = ev.add(&ev.mul(delta, &lq1), &ev.entropy(delta));
    ev.div(&num, &ev.log2(&ev.int(q as i64)))
}

pub fn entropy_q(ev: &Evaluator, q: u64, delta: f64) -> Result<BoundReport> {
    check_unit(delta)?;
    if q < 2 {
        return Err(Error::InvalidParameter("q must be at least 2".into()));
    }
    let v = entropy_q_value(ev, q, &ev.from_f64(delta));
    Ok(BoundReport::new(ev, "entropy_q", "(d log(q-1) + H(d)) / log q", &v, 0.0).input("q", q).input("delta", delta))
}

/// log(2^{2s} / (2^{2s} - 1)).
fn log_ratio(ev: &Evaluator, s: u32) -> Real {
    let t = ev.pow2(2 * s as i64);
    ev.log2(&ev.div(&t, &ev.sub(&t, &ev.int(1))))
}

/// E_s(delta) = H(delta) - 2s/(2^s - 1) - log(2^{2s}/(2^{2s} - 1)).
pub fn e_s_value(ev: &Evaluator, s: u32, delta: &Real) -> Real {
    let c = ev.div(&ev.int(2 * s as i64), &ev.sub(&ev.pow2(s as i64), &ev.int(1)));
    ev.sub(&ev.sub(&ev.entropy(delta), &c), &log_ratio(ev, s))
}

const E_S_FORMULA: &str = "H(d) - 2s/(2^s-1) - log(2^(2s)/(2^(2s)-1))";

pub fn e_s(ev: &Evaluator, s: u32, delta: f64) -> Result<BoundReport> {
    check_unit(delta)?;
    let v = e_s_value(ev, s, &ev.from_f64(delta));
    Ok(BoundReport::new(ev, format!("e{s}"), E_S_FORMULA, &v, 0.0).input("s", s).input("delta", delta))
}

/// E_s(1/2), optionally divided by 2^{2s}.
pub fn e_s_half(ev: &Evaluator, s: u32, per_symbol: bool) -> BoundReport {
    let mut v = e_s_value(ev, s, &ev.ratio(1, 2));
    let mut formula = E_S_FORMULA.to_string() + " at d = 1/2";
    if per_symbol {
        v = ev.div(&v, &ev.pow2(2 * s as i64));
        formula = format!("({formula}) / 2^(2s)");
    }
    let name = if per_symbol { format!("e{s}.half_per_symbol") } else { format!("e{s}.half") };
    BoundReport::new(ev, name, &formula, &v, 0.0).input("s", s).input("delta", "1/2")
}

/// The two zeros delta_1 < 1/2 < delta_2 of E_s inside (0, 1 - 2^{-2s}).
pub fn e_s_zeros(ev: &Evaluator, s: u32) -> Result<(BoundReport, BoundReport)> {
    if s < 3 {
        return Err(Error::Precondition(format!("s = {s}: E_s has no positive part below s = 3")));
    }
    let f = |d: &Real| e_s_value(ev, s, d);
    let half = ev.ratio(1, 2);
    let top = ev.sub(&ev.int(1), &ev.pow2(-2 * s as i64));
    let (d1, w1) = ev.bisect(f, ev.pow2(-60), half.clone(), 1e-30)?;
    let (d2, w2) = ev.bisect(f, half, top, 1e-30)?;
    let mk = |name: &str, d: &Real, w: f64| {
        BoundReport::new(ev, format!("e{s}.{name}"), &format!("root of {E_S_FORMULA}"), d, w)
            .input("s", s)
            .detail("residual", ev.to_f64(&f(d)))
    };
    Ok((mk("delta1", &d1, w1), mk("delta2", &d2, w2)))
}

/// (2 + 2 log N) / N.
fn finite_length_term(ev: &Evaluator, n: u64) -> Real {
    let nn = ev.int(n as i64);
    ev.div(&ev.add(&ev.int(2), &ev.mul(&ev.int(2), &ev.log2(&nn))), &nn)
}

/// (1/4m)(1 - 2 log(2^m + 1)/(2^m - 1)), minus (2 + 2 log N)/N when N is given.
pub fn family_bound_m(ev: &Evaluator, m: u32, n: Option<u64>) -> Result<BoundReport> {
    if !(1..=40).contains(&m) {
        return Err(Error::InvalidParameter(format!("m = {m} out of range")));
    }
    let two_m = ev.pow2(m as i64);
    let frac = ev.div(&ev.mul(&ev.int(2), &ev.log2(&ev.add(&two_m, &ev.int(1)))), &ev.sub(&two_m, &ev.int(1)));
    let mut v = ev.div(&ev.sub(&ev.int(1), &frac), &ev.int(4 * m as i64));
    let mut formula = "(1/4m)(1 - 2 log(2^m+1)/(2^m-1))".to_string();
    let mut rep_name = format!("family.m{m}");
    if let Some(n) = n {
        if n < 2 {
            return Err(Error::InvalidParameter("N must be at least 2".into()));
        }
        v = ev.sub(&v, &finite_length_term(ev, n));
        formula.push_str(" - (2 + 2 log N)/N");
        rep_name.push_str(".finite");
    }
    let mut r = BoundReport::new(ev, rep_name, &formula, &v, 0.0).input("m", m);
    if let Some(n) = n {
        r = r.input("N", n);
    }
    Ok(r)
}

/// (1/4m)(1 - 2m/(2^m - 1) - log(2^{2m}/(2^{2m} - 1))).
pub fn sharp_bound_m(ev: &Evaluator, m: u32) -> Result<BoundReport> {
    if !(1..=40).contains(&m) {
        return Err(Error::InvalidParameter(format!("m = {m} out of range")));
    }
    let c = ev.div(&ev.int(2 * m as i64), &ev.sub(&ev.pow2(m as i64), &ev.int(1)));
    let inner = ev.sub(&ev.sub(&ev.int(1), &c), &log_ratio(ev, m));
    let v = ev.div(&inner, &ev.int(4 * m as i64));
    Ok(BoundReport::new(ev, format!("sharp.m{m}"), "(1/4m)(1 - 2m/(2^m-1) - log(2^(2m)/(2^(2m)-1)))", &v, 0.0)
        .input("m", m))
}

pub fn family_constants(ev: &Evaluator) -> Result<Vec<BoundReport>> {
    (5..=7).map(|m| family_bound_m(ev, m, None)).collect()
}

pub fn sharp_constants(ev: &Evaluator) -> Result<Vec<BoundReport>> {
    (5..=7).map(|m| sharp_bound_m(ev, m)).collect()
}

/// Asymptotic family term for each m, flagging values above 0.03.
pub fn m_scan(ev: &Evaluator, ms: impl IntoIterator<Item = u32>) -> Result<Vec<BoundReport>> {
    let threshold = ev.ratio(3, 100);
    ms.into_iter()
        .map(|m| {
            let mut r = family_bound_m(ev, m, None)?;
            let v = family_value(ev, m);
            r.holds = Some(ev.cmp(&v, &threshold) == std::cmp::Ordering::Greater);
            Ok(r.detail("exceeds", "0.03"))
        })
        .collect()
}

fn family_value(ev: &Evaluator, m: u32) -> Real {
    let two_m = ev.pow2(m as i64);
    let frac = ev.div(&ev.mul(&ev.int(2), &ev.log2(&ev.add(&two_m, &ev.int(1)))), &ev.sub(&two_m, &ev.int(1)));
    ev.div(&ev.sub(&ev.int(1), &frac), &ev.int(4 * m as i64))
}

/// A = log(4096/4095).
fn a_const(ev: &Evaluator) -> Real {
    ev.log2(&ev.ratio(4096, 4095))
}

/// 21 H(d) - 2d(4 + 21A + (17 - 21A) d).
fn minimax_equation(ev: &Evaluator, d: &Real) -> Real {
    let a21 = ev.mul(&ev.int(21), &a_const(ev));
    let lin = ev.add(&ev.int(4), &a21);
    let quad = ev.sub(&ev.int(17), &a21);
    let rhs = ev.mul(&ev.mul(&ev.int(2), d), &ev.add(&lin, &ev.mul(&quad, d)));
    ev.sub(&ev.mul(&ev.int(21), &ev.entropy(d)), &rhs)
}

/// Root delta_0 in (1/2, 1) of 21 H(d) = 2d(4 + 21A + (17 - 21A) d) and the
/// bound (17 - 21A) delta_0 / 504. Uniqueness on the interval is checked by
/// counting sign changes on a 10^4-point grid.
pub fn minimax_root(ev: &Evaluator) -> Result<(BoundReport, BoundReport)> {
    let f = |d: &Real| minimax_equation(ev, d);
    let grid = 10_000i64;
    let mut changes = 0;
    let mut prev = f(&ev.ratio(1, 2)).is_negative();
    for i in 1..=grid {
        let cur = f(&ev.add(&ev.ratio(1, 2), &ev.ratio(i, 2 * grid))).is_negative();
        if cur != prev {
            changes += 1;
        }
        prev = cur;
    }
    if changes != 1 {
        return Err(Error::Degenerate(format!("expected one sign change on (1/2, 1), found {changes}")));
    }
    let (d0, w) = ev.bisect(f, ev.ratio(1, 2), ev.int(1), 1e-30)?;
    let coeff = ev.div(&ev.sub(&ev.int(17), &ev.mul(&ev.int(21), &a_const(ev))), &ev.int(504));
    let bound = ev.mul(&coeff, &d0);
    let eq = "21 H(d) = 2d(4 + 21A + (17 - 21A) d), A = log(4096/4095)";
    let root = BoundReport::new(ev, "minimax.delta0", &format!("root in (1/2, 1) of {eq}"), &d0, w)
        .detail("residual", ev.to_f64(&f(&d0)))
        .detail("grid_sign_changes", changes);
    let b = BoundReport::new(ev, "minimax.bound", "(17 - 21A) d0 / 504", &bound, w);
    Ok((root, b))
}

/// Crossing of f(1/(2d)) = (1/24)(H(d)/(2d) - 4/21 - A) with
/// g(d) = (1/24)(17/21 - A) d on d in [1/2, 1]; the minimax value is g at
/// the crossing.
pub fn minimax_62(ev: &Evaluator) -> Result<BoundReport> {
    let a = a_const(ev);
    let f = |lambda: &Real| {
        let h = ev.entropy(&ev.div(&ev.int(1), &ev.mul(&ev.int(2), lambda)));
        ev.div(&ev.sub(&ev.sub(&ev.mul(lambda, &h), &ev.ratio(4, 21)), &a), &ev.int(24))
    };
    let g = |d: &Real| ev.div(&ev.mul(&ev.sub(&ev.ratio(17, 21), &a), d), &ev.int(24));
    let diff = |d: &Real| ev.sub(&f(&ev.div(&ev.int(1), &ev.mul(&ev.int(2), d))), &g(d));
    let (d, w) = ev.bisect(diff, ev.ratio(1, 2), ev.int(1), 1e-30)?;
    let v = g(&d);
    let (_, bound) = minimax_root(ev)?;
    let agrees = (ev.to_f64(&v) - bound.approx).abs() < 1e-4;
    let mut r = BoundReport::new(
        ev,
        "minimax.crossing",
        "max over d of min(f(1/(2d)), g(d)), f(l) = (1/24)(l H(1/(2l)) - 4/21 - A), g(d) = (1/24)(17/21 - A) d",
        &v,
        w,
    )
    .detail("delta", ev.to_fixed(&d, 12))
    .detail("f_at_half", ev.to_fixed(&f(&ev.ratio(1, 2)), 12))
    .detail("g_at_one", ev.to_fixed(&g(&ev.int(1)), 12));
    r.holds = Some(agrees);
    Ok(r)
}

/// Gilbert-Varshamov rate 1 - H_q(delta).
pub fn gv_rate(ev: &Evaluator, q: u64, delta: f64) -> Result<BoundReport> {
    check_unit(delta)?;
    let v = ev.sub(&ev.int(1), &entropy_q_value(ev, q, &ev.from_f64(delta)));
    Ok(BoundReport::new(ev, "gv_rate", "1 - H_q(d)", &v, 0.0).input("q", q).input("delta", delta))
}

/// AG rate form 1 - 1/(sqrt q - 1), evaluated exactly as stated (without a
/// -delta term).
pub fn ag_rate_printed(ev: &Evaluator, q: u64) -> Result<BoundReport> {
    let sq = ev.sqrt(&ev.int(q as i64));
    if q < 5 {
        return Err(Error::InvalidParameter("q must exceed 4".into()));
    }
    let v = ev.sub(&ev.int(1), &ev.div(&ev.int(1), &ev.sub(&sq, &ev.int(1))));
    Ok(BoundReport::new(ev, "ag_rate", "1 - 1/(sqrt q - 1)", &v, 0.0)
        .input("q", q)
        .with_note("evaluated as stated; the usual form of this bound also subtracts delta"))
}

/// q + (sqrt q - 1) log(q/(q-1)), the asymptotic log|J(F_q)|/g as stated.
pub fn jacobian_rate(ev: &Evaluator, q: u64) -> BoundReport {
    let qq = ev.int(q as i64);
    let sq = ev.sqrt(&qq);
    let v = ev.add(&qq, &ev.mul(&ev.sub(&sq, &ev.int(1)), &ev.log2(&ev.ratio(q as i64, q as i64 - 1))));
    BoundReport::new(ev, "jacobian_rate", "q + (sqrt q - 1) log(q/(q-1))", &v, 0.0).input("q", q)
}

/// log of the effective Jacobian bound (sqrt q + 1)^{2g}.
pub fn jacobian_effective_log(ev: &Evaluator, q: u64, g: u64) -> BoundReport {
    let v = ev.mul(&ev.int(2 * g as i64), &ev.log2(&ev.add(&ev.sqrt(&ev.int(q as i64)), &ev.int(1))));
    BoundReport::new(ev, "jacobian_effective_log", "2g log(sqrt q + 1)", &v, 0.0).input("q", q).input("g", g)
}

/// 1 - 2 log(sqrt q + 1)/(sqrt q - 1), minus (2 + 2 log N)/N when N is given.
pub fn light_rate(ev: &Evaluator, q: u64, n: Option<u64>) -> Result<BoundReport> {
    if q < 5 {
        return Err(Error::InvalidParameter("q must exceed 4".into()));
    }
    let sq = ev.sqrt(&ev.int(q as i64));
    let frac = ev.div(&ev.mul(&ev.int(2), &ev.log2(&ev.add(&sq, &ev.int(1)))), &ev.sub(&sq, &ev.int(1)));
    let mut v = ev.sub(&ev.int(1), &frac);
    let mut formula = "1 - 2 log(sqrt q + 1)/(sqrt q - 1)".to_string();
    if let Some(n) = n {
        v = ev.sub(&v, &finite_length_term(ev, n));
        formula.push_str(" - (2 + 2 log N)/N");
    }
    let mut r = BoundReport::new(ev, "light_rate", &formula, &v, 0.0).input("q", q);
    if let Some(n) = n {
        r = r.input("N", n);
    }
    Ok(r)
}

/// Per-symbol light-vector lower bound
/// H(d) - (2g/N) log(sqrt q + 1) - log(2 pi a d)/(2N) - 1/(12 a d)
/// with d = N - a and delta = d/N.
pub fn light_per_symbol(ev: &Evaluator, q: u64, g: u64, n: u64, a: u64) -> Result<Real> {
    if a == 0 || a >= n {
        return Err(Error::InvalidParameter(format!("need 1 <= a < N, got a = {a}, N = {n}")));
    }
    let d = n - a;
    let nn = ev.int(n as i64);
    let h = ev.entropy(&ev.ratio(d as i64, n as i64));
    let jac = ev.div(&ev.mul(&ev.int(2 * g as i64), &ev.log2(&ev.add(&ev.sqrt(&ev.int(q as i64)), &ev.int(1)))), &nn);
    let pi = ev.from_f64(std::f64::consts::PI);
    let ad = ev.int((a * d) as i64);
    let stirling = ev.div(&ev.log2(&ev.mul(&ev.mul(&ev.int(2), &pi), &ad)), &ev.mul(&ev.int(2), &nn));
    let tail = ev.div(&ev.int(1), &ev.mul(&ev.int(12), &ad));
    Ok(ev.sub(&ev.sub(&ev.sub(&h, &jac), &stirling), &tail))
}

/// (sqrt q - 1)/(2 + 1/log q).
pub fn a_minus(ev: &Evaluator, q: u64) -> BoundReport {
    let sq = ev.sqrt(&ev.int(q as i64));
    let den = ev.add(&ev.int(2), &ev.div(&ev.int(1), &ev.log2(&ev.int(q as i64))));
    let v = ev.div(&ev.sub(&sq, &ev.int(1)), &den);
    BoundReport::new(ev, format!("a_minus.q{q}"), "(sqrt q - 1)/(2 + 1/log q)", &v, 0.0).input("q", q)
}

/// Per-symbol exponent with distance 32/63 instead of 1/2 over GF(64), and
/// the 1/2 baseline it is compared with.
pub fn gs_swap_pair(ev: &Evaluator) -> (BoundReport, BoundReport) {
    let tail = ev.add(&ev.ratio(6, 7), &ev.log2(&ev.ratio(64, 63)));
    let swapped = ev.div(&ev.sub(&ev.entropy(&ev.ratio(32, 63)), &tail), &ev.int(64));
    let base = ev.div(&ev.sub(&ev.ratio(1, 7), &ev.log2(&ev.ratio(64, 63))), &ev.int(64));
    (
        BoundReport::new(ev, "gs_swap.value", "(1/64)(H(32/63) - 6/7 - log(64/63))", &swapped, 0.0),
        BoundReport::new(ev, "gs_swap.baseline", "(1/64)(1/7 - log(64/63))", &base, 0.0),
    )
}

/// Exponent obtained from the lattices of dimension 4m with codes on curves
/// meeting N/g = (sqrt q - 1)/(2 + 1/log q), q = 2^{2m}:
/// c = (2 + 1/(2m)) 2m/(2^m - 1) + log(2^{2m}/(2^{2m}-1)), d0 the root in
/// (1/2, 1) of H(d) - c = (1 - c) d, value (1 - c) d0 / (4m).
pub fn tilde_route(ev: &Evaluator, m: u32) -> Result<BoundReport> {
    if !(2..=20).contains(&m) {
        return Err(Error::InvalidParameter(format!("m = {m} out of range")));
    }
    let genus_ratio = ev.div(&ev.add(&ev.int(2), &ev.ratio(1, 2 * m as i64)), &ev.sub(&ev.pow2(m as i64), &ev.int(1)));
    let c = ev.add(&ev.mul(&genus_ratio, &ev.int(2 * m as i64)), &log_ratio(ev, m));
    let one_c = ev.sub(&ev.int(1), &c);
    let f = |d: &Real| ev.sub(&ev.sub(&ev.entropy(d), &c), &ev.mul(&one_c, d));
    let (d0, w) = ev.bisect(f, ev.ratio(1, 2), ev.sub(&ev.int(1), &ev.pow2(-60)), 1e-30)?;
    let v = ev.div(&ev.mul(&one_c, &d0), &ev.int(4 * m as i64));
    Ok(BoundReport::new(
        ev,
        format!("tilde_route.m{m}"),
        "(1-c) d0/(4m), H(d0) - c = (1-c) d0, c = (2+1/(2m)) 2m/(2^m-1) + log(2^(2m)/(2^(2m)-1))",
        &v,
        w,
    )
    .input("m", m)
    .detail("delta0", ev.to_fixed(&d0, 12))
    .detail("c", ev.to_fixed(&c, 12)))
}

/// Stored or directly computed reference exponents.
pub fn reference_constants(ev: &Evaluator) -> Vec<BoundReport> {
    let random = ev.log2(&ev.div(&ev.int(2), &ev.sqrt(&ev.int(3))));
    vec![
        BoundReport::new(ev, "ref.random_packing", "log(2/sqrt 3)", &random, 0.0),
        BoundReport::new(ev, "ref.kl_kissing", "stored reference value", &ev.ratio(4041, 10000), 5e-5)
            .with_note("upper bound on the kissing exponent, stored to four places"),
        BoundReport::new(ev, "ref.kl_density", "stored reference value", &ev.ratio(599, 1000), 5e-4)
            .with_note("lower bound on the density exponent, stored to three places"),
    ]
}

/// Every named constant, in a fixed order.
pub fn all_constants(ev: &Evaluator) -> Result<Vec<BoundReport>> {
    let mut out = vec![entropy_ratio(ev, 32, 63)?, e_s_half(ev, 3, false), e_s_half(ev, 3, true)];
    let (z1, z2) = e_s_zeros(ev, 3)?;
    out.extend([z1, z2]);
    out.extend(family_constants(ev)?);
    out.push(family_bound_m(ev, 5, Some(5 << 22))?);
    out.extend(sharp_constants(ev)?);
    let (d0, b) = minimax_root(ev)?;
    out.extend([d0, b, minimax_62(ev)?]);
    let (gs, base) = gs_swap_pair(ev);
    out.extend([gs, base, tilde_route(ev, 7)?, a_minus(ev, 64)]);
    let mut lr = light_rate(ev, 4096, None)?;
    lr.name = "light_rate.q4096".into();
    out.push(lr);
    out.extend(reference_constants(ev));
    Ok(out)
}

/// Alternative names accepted by [`named_constant`].
pub const CONSTANT_ALIASES: &[(&str, &str)] = &[("theorem15.delta0", "minimax.delta0")];

/// Looks a constant up by name or alias.
pub fn named_constant(ev: &Evaluator, name: &str) -> Result<BoundReport> {
    let name = CONSTANT_ALIASES.iter().find(|(a, _)| *a == name).map_or(name, |(_, n)| n);
    all_constants(ev)?
        .into_iter()
        .find(|r| r.name == name)
        .ok_or_else(|| Error::InvalidParameter(format!("unknown constant {name:?}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ev() -> Evaluator {
        Evaluator::new(DEFAULT_BITS).unwrap()
    }

    #[test]
    fn entropy_values() {
        let e = ev();
        assert_eq!(entropy(&e, 0.5).unwrap().approx, 1.0);
        assert_eq!(entropy(&e, 0.0).unwrap().approx, 0.0);
        let h = entropy_ratio(&e, 32, 63).unwrap().approx;
        assert!((h - 0.999818).abs() < 1e-6, "{h}");
        assert!(entropy(&e, 1.5).is_err());
    }

    #[test]
    fn entropy_q_reduces_to_binary() {
        let e = ev();
        assert!((entropy_q(&e, 2, 0.3).unwrap().approx - entropy(&e, 0.3).unwrap().approx).abs() < 1e-15);
    }

    #[test]
    fn entropy_is_concave() {
        let e = ev();
        let n = 1000;
        let h: Vec<f64> = (0..=n).map(|i| e.to_f64(&e.entropy(&e.ratio(i, n)))).collect();
        for i in 1..n as usize {
            assert!(h[i - 1] - 2.0 * h[i] + h[i + 1] <= 1e-15);
        }
    }

    #[test]
    fn e_s_zero_brackets() {
        let e = ev();
        for s in 3..=6 {
            let (a, b) = e_s_zeros(&e, s).unwrap();
            assert!(a.approx < 0.5 && b.approx > 0.5);
            for r in [&a, &b] {
                let res: f64 = r.details["residual"].parse().unwrap();
                assert!(res.abs() < 1e-10);
                assert!(r.tolerance < 1e-10);
            }
        }
        assert!(e_s_zeros(&e, 2).is_err());
    }

    #[test]
    fn light_rate_matches_family() {
        let e = ev();
        for m in 3..=9u32 {
            let lr = light_rate(&e, 1 << (2 * m), None).unwrap();
            let fam = family_bound_m(&e, m, None).unwrap();
            assert!((lr.approx / (4 * m) as f64 - fam.approx).abs() < 1e-15);
        }
    }

    #[test]
    fn a_minus_64() {
        let e = ev();
        assert!((a_minus(&e, 64).approx - 42.0 / 13.0).abs() < 1e-15);
    }

    #[test]
    fn minimax_agrees_with_root() {
        let e = ev();
        let r = minimax_62(&e).unwrap();
        assert_eq!(r.holds, Some(true));
    }

    #[test]
    fn precision_is_reproducible() {
        let a = all_constants(&ev()).unwrap();
        let b = all_constants(&ev()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn named_lookup() {
        let e = ev();
        assert!(named_constant(&e, "minimax.delta0").is_ok());
        assert_eq!(named_constant(&e, "theorem15.delta0").unwrap().name, "minimax.delta0");
        assert!(named_constant(&e, "nope").is_err());
    }
}
