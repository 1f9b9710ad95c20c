use std::collections::BTreeMap;

use serde::Serialize;

use crate::algebra::{irreducible_monics, FieldElem, FiniteField, Polynomial};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Family {
    #[serde(rename = "GS")]
    Gs,
    #[serde(rename = "Drinfeld-T-power")]
    DrinfeldTPower,
    #[serde(rename = "X0(M)")]
    X0M,
}

/// Genus and rational-point lower bound of one curve.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GenusRecord {
    pub family: Family,
    pub q: u32,
    pub params: BTreeMap<String, String>,
    pub genus: u128,
    pub point_bound: u128,
}

impl GenusRecord {
    fn new(family: Family, q: u32, genus: u128, point_bound: u128) -> Self {
        GenusRecord { family, q, params: BTreeMap::new(), genus, point_bound }
    }

    fn param(mut self, k: &str, v: impl ToString) -> Self {
        self.params.insert(k.into(), v.to_string());
        self
    }
}

fn pow(q: u32, e: u32) -> Result<u128> {
    (q as u128).checked_pow(e).ok_or(Error::Overflow("genus formula"))
}

/// Level `n` of the Garcia-Stichtenoth tower over GF(q^2):
/// g = (q^m - 1)^2 for n = 2m, (q^m - 1)(q^{m-1} - 1) for n = 2m - 1, and at
/// least (q - 1) q^n rational points.
pub fn gs_genus(q: u32, n: u32) -> Result<GenusRecord> {
    if n == 0 || q < 2 {
        return Err(Error::InvalidParameter(format!("need q >= 2 and n >= 1, got q={q} n={n}")));
    }
    let m = n.div_ceil(2);
    let g = if n.is_multiple_of(2) { (pow(q, m)? - 1).pow(2) } else { (pow(q, m)? - 1) * (pow(q, m - 1)? - 1) };
    let bound = (q as u128 - 1) * pow(q, n)?;
    Ok(GenusRecord::new(Family::Gs, q, g, bound).param("n", n))
}

/// Level `k` of the Elkies tower, the curve X0(T^{k+1}):
/// g = (q^m - 1)^2/(q - 1) for k = 2m, (q^{m+1} - 1)(q^m - 1)/(q - 1) for
/// k = 2m + 1. Point bound q^k + 4 for k >= 2 and q^2 + 1 on the genus-0
/// level k = 1.
pub fn drinfeld_genus(q: u32, k: u32) -> Result<GenusRecord> {
    if k == 0 || q < 2 {
        return Err(Error::InvalidParameter(format!("need q >= 2 and k >= 1, got q={q} k={k}")));
    }
    let m = k / 2;
    let num = if k.is_multiple_of(2) { (pow(q, m)? - 1).pow(2) } else { (pow(q, m + 1)? - 1) * (pow(q, m)? - 1) };
    let g = num / (q as u128 - 1);
    let bound = if k >= 2 { pow(q, k)? + 4 } else { pow(q, 2)? + 1 };
    Ok(GenusRecord::new(Family::DrinfeldTPower, q, g, bound).param("k", k))
}

/// The arithmetic invariants of X0(M).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct X0mInvariants {
    pub epsilon: u128,
    pub kappa: u128,
    /// Number of distinct prime factors of M.
    pub distinct: u32,
    pub record: GenusRecord,
}

/// Evaluates eps, kappa and g0 for M with prime factors of the given
/// `(degree, multiplicity)` shape, without checking smoothness conditions.
pub fn x0m_raw(q: u32, shape: &[(u32, u32)]) -> Result<X0mInvariants> {
    if q < 2 || shape.is_empty() || shape.iter().any(|&(d, r)| d == 0 || r == 0) {
        return Err(Error::InvalidParameter("need q >= 2 and a nonempty factor shape".into()));
    }
    let mut eps: u128 = 1;
    let mut kappa: u128 = 1;
    for &(d, r) in shape {
        let qi = pow(q, d)?;
        let pw = |e: u32| qi.checked_pow(e).ok_or(Error::Overflow("genus formula"));
        eps = eps.checked_mul(pw(r - 1)? * (qi + 1)).ok_or(Error::Overflow("genus formula"))?;
        kappa = kappa.checked_mul(pw(r / 2)? + pw((r - 1) / 2)?).ok_or(Error::Overflow("genus formula"))?;
    }
    let s = shape.len() as u32;
    let q1 = q as i128 + 1;
    let num = eps as i128 - q1 * kappa as i128 - (1i128 << (s - 1)) * q1 * (q as i128 - 2);
    let den = (q as i128).pow(2) - 1;
    if num % den != 0 || num + den < 0 {
        return Err(Error::Degenerate(format!("genus numerator {num} not a nonnegative multiple of {den}")));
    }
    let genus = (1 + num / den) as u128;
    let bound = eps.div_ceil(q as u128 + 1);
    let shape_str = shape.iter().map(|(d, r)| format!("{d}^{r}")).collect::<Vec<_>>().join(",");
    let record = GenusRecord::new(Family::X0M, q, genus, bound).param("shape", shape_str);
    Ok(X0mInvariants { epsilon: eps, kappa, distinct: s, record })
}

/// Human-readable polynomial in T with coefficients given by field index.
fn poly_name(p: &Polynomial) -> String {
    let mut terms = Vec::new();
    for (i, c) in p.coeffs().iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let mono = match i {
            0 => String::new(),
            1 => "T".into(),
            _ => format!("T^{i}"),
        };
        terms.push(match (c.index(), mono.is_empty()) {
            (_, true) => c.to_string(),
            (1, false) => mono,
            (_, false) => format!("{c}{mono}"),
        });
    }
    terms.join("+")
}

fn factored_name(factors: &[(Polynomial, u32)]) -> String {
    factors
        .iter()
        .map(|(p, r)| {
            let base = if p.coeffs().iter().filter(|c| !c.is_zero()).count() > 1 {
                format!("({})", poly_name(p))
            } else {
                poly_name(p)
            };
            if *r > 1 {
                format!("{base}^{r}")
            } else {
                base
            }
        })
        .collect::<Vec<_>>()
        .join("*")
}

fn checked_from_factors(field: &FiniteField, factors: &[(Polynomial, u32)]) -> Result<X0mInvariants> {
    let q = field.order();
    let deg: u32 = factors.iter().map(|(p, r)| p.degree().unwrap_or(0) as u32 * r).sum();
    if deg < 3 {
        return Err(Error::Precondition(format!("X0(M) needs deg M >= 3, got {deg}")));
    }
    if factors.iter().any(|(p, _)| p.eval(field, FieldElem::ONE).is_zero()) {
        return Err(Error::Precondition("X0(M) needs M(1) != 0".into()));
    }
    if factors.iter().all(|(p, _)| p.degree().unwrap_or(0) % 2 == 0) {
        return Err(Error::Precondition("X0(M) needs a prime factor of odd degree".into()));
    }
    let shape: Vec<(u32, u32)> = factors.iter().map(|(p, r)| (p.degree().unwrap_or(0) as u32, *r)).collect();
    let mut inv = x0m_raw(q, &shape)?;
    inv.record = inv.record.param("M", factored_name(factors)).param("deg", deg);
    Ok(inv)
}

/// Invariants of X0(M) for monic M over GF(q). Requires deg M >= 3,
/// M(1) != 0 and a prime factor of odd degree.
pub fn x0m_invariants(field: &FiniteField, m: &Polynomial) -> Result<X0mInvariants> {
    if !m.is_monic() {
        return Err(Error::InvalidParameter("M must be monic".into()));
    }
    checked_from_factors(field, &m.factor(field)?)
}

/// Genus ladder from X0(T^{k_start+1}) to X0(T^{k_end+1}). Within each step
/// k -> k+1 the T-power is traded, lowest degree first, for distinct monic
/// irreducibles P != T with P(1) != 0; a replacement is kept when it raises
/// the genus strictly but stays below the next tower level.
pub fn densify_ladder(q: u32, k_start: u32, k_end: u32) -> Result<Vec<GenusRecord>> {
    if k_start < 2 || k_end <= k_start {
        return Err(Error::InvalidParameter(format!("need 2 <= k_start < k_end, got {k_start}..{k_end}")));
    }
    let field = FiniteField::of_order(q)?;
    let mut out = vec![drinfeld_genus(q, k_start)?];
    for k in k_start..k_end {
        let target = drinfeld_genus(q, k + 1)?;
        let mut last = out.last().expect("nonempty").genus;
        let mut r = k + 1;
        let mut used: Vec<Polynomial> = Vec::new();
        let mut s = 1;
        'level: while s <= r {
            for p in irreducible_monics(&field, s as usize)? {
                if s > r {
                    break;
                }
                if p == Polynomial::t() || p.eval(&field, FieldElem::ONE).is_zero() {
                    continue;
                }
                let mut factors: Vec<(Polynomial, u32)> = Vec::new();
                if r - s > 0 {
                    factors.push((Polynomial::t(), r - s));
                }
                factors.extend(used.iter().cloned().map(|u| (u, 1)));
                factors.push((p.clone(), 1));
                let Ok(inv) = checked_from_factors(&field, &factors) else { continue };
                let g = inv.record.genus;
                if g >= target.genus {
                    break 'level;
                }
                if g > last {
                    last = g;
                    r -= s;
                    used.push(p);
                    out.push(inv.record);
                }
            }
            s += 1;
        }
        out.push(target);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn gs_examples() {
        assert_eq!(gs_genus(2, 2).unwrap().genus, 1);
        assert_eq!(gs_genus(3, 3).unwrap().genus, 16);
        assert_eq!(gs_genus(2, 1).unwrap().genus, 0);
        assert_eq!(gs_genus(2, 2).unwrap().point_bound, 4);
    }

    #[test]
    fn drinfeld_examples() {
        let r = drinfeld_genus(2, 2).unwrap();
        assert_eq!((r.genus, r.point_bound), (1, 8));
        assert_eq!(drinfeld_genus(2, 4).unwrap().genus, 9);
        let r = drinfeld_genus(4, 2).unwrap();
        assert_eq!((r.genus, r.point_bound), (3, 20));
    }

    #[test]
    fn x0m_examples() {
        let f = FiniteField::of_order(2).unwrap();
        let t = Polynomial::t();
        let inv = x0m_invariants(&f, &t.pow(&f, 3)).unwrap();
        assert_eq!((inv.epsilon, inv.kappa, inv.record.genus), (12, 4, 1));
        let inv = x0m_invariants(&f, &t.pow(&f, 5)).unwrap();
        assert_eq!((inv.epsilon, inv.kappa, inv.record.genus), (48, 8, 9));
        assert_eq!(inv.record.params["M"], "T^5");
    }

    #[test]
    fn t_cubed_times_t_plus_one() {
        let raw = x0m_raw(2, &[(1, 3), (1, 1)]).unwrap();
        assert_eq!((raw.epsilon, raw.kappa, raw.record.genus), (36, 8, 5));
        let f = FiniteField::of_order(2).unwrap();
        let t = Polynomial::t();
        let m = t.pow(&f, 3).mul(&f, &t.add(&f, &Polynomial::one()));
        assert!(matches!(x0m_invariants(&f, &m), Err(Error::Precondition(_))));
    }

    #[test]
    fn rejects_even_degree_only() {
        let f = FiniteField::of_order(2).unwrap();
        let p = Polynomial::from_coeffs(vec![FieldElem(1), FieldElem(1), FieldElem(1)]);
        assert!(matches!(x0m_invariants(&f, &p.pow(&f, 2)), Err(Error::Precondition(_))));
    }

    #[test]
    fn t_power_matches_tower() {
        for q in [2u32, 3, 4] {
            let f = FiniteField::of_order(q).unwrap();
            for k in 2..=6 {
                let g0 = x0m_invariants(&f, &Polynomial::t().pow(&f, k + 1)).unwrap().record.genus;
                assert_eq!(g0, drinfeld_genus(q, k).unwrap().genus, "q={q} k={k}");
            }
        }
    }

    #[test]
    fn ladder_q2_4_to_5() {
        let ladder = densify_ladder(2, 4, 5).unwrap();
        let gs: Vec<u128> = ladder.iter().map(|r| r.genus).collect();
        assert_eq!(gs, vec![9, 13, 21]);
        assert_eq!(ladder[1].params["M"], "T^3*(T^2+T+1)");
    }

    #[test]
    fn ladder_increasing_with_point_bounds() {
        for (q, a, b) in [(2, 2, 9), (3, 2, 6), (4, 2, 5)] {
            let ladder = densify_ladder(q, a, b).unwrap();
            assert!(ladder.windows(2).all(|w| w[0].genus < w[1].genus));
            for r in ladder.iter().filter(|r| r.family == Family::X0M) {
                assert!(r.point_bound >= (q as u128 - 1) * r.genus);
            }
        }
    }

    #[test]
    fn record_json_shape() {
        let v = serde_json::to_value(drinfeld_genus(2, 2).unwrap()).unwrap();
        assert_eq!(v["family"], "Drinfeld-T-power");
        assert_eq!(v["params"]["k"], "2");
        assert_eq!(v["genus"], 1);
    }

    proptest! {
        #[test]
        fn point_bound_dominates_genus(q in prop::sample::select(vec![2u32, 3, 4, 5]), deg in 3usize..8, idx in any::<u64>()) {
            let f = FiniteField::of_order(q).unwrap();
            let m = Polynomial::monic_from_index(q, deg, idx % (q as u64).pow(deg as u32));
            if let Ok(inv) = x0m_invariants(&f, &m) {
                prop_assert!(inv.record.point_bound >= (q as u128 - 1) * inv.record.genus);
            }
        }
    }
}
