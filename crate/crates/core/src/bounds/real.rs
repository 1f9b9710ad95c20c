//! Extended-precision real arithmetic on top of `astro-float`.

use std::cell::RefCell;
use std::cmp::Ordering;

use astro_float::{BigFloat, Consts, Radix, RoundingMode};

use crate::error::{Error, Result};

/// Default working precision in bits.
pub const DEFAULT_BITS: usize = 128;

const RM: RoundingMode = RoundingMode::ToEven;

/// Evaluation context: a fixed binary precision plus the constant cache
/// astro-float needs for transcendental functions.
pub struct Evaluator {
    p: usize,
    cc: RefCell<Consts>,
}

pub type Real = BigFloat;

impl Evaluator {
    pub fn new(bits: usize) -> Result<Self> {
        if !(64..=4096).contains(&bits) {
            return Err(Error::InvalidParameter(format!("precision {bits} bits outside 64..=4096")));
        }
        let cc = Consts::new().map_err(|e| Error::InvalidParameter(format!("constant cache: {e:?}")))?;
        Ok(Evaluator { p: bits, cc: RefCell::new(cc) })
    }

    pub fn bits(&self) -> usize {
        self.p
    }

    /// Relative rounding unit 2^-(p - 8), a safe per-formula error budget.
    pub fn epsilon(&self) -> f64 {
        2f64.powi(-(self.p as i32 - 8))
    }

    pub fn int(&self, n: i64) -> Real {
        BigFloat::from_i64(n, self.p)
    }

    pub fn ratio(&self, a: i64, b: i64) -> Real {
        self.div(&self.int(a), &self.int(b))
    }

    pub fn from_u128(&self, n: u128) -> Real {
        BigFloat::from_u128(n, self.p)
    }

    pub fn powi(&self, a: &Real, n: usize) -> Real {
        a.powi(n, self.p, RM)
    }

    pub fn from_f64(&self, x: f64) -> Real {
        BigFloat::from_f64(x, self.p)
    }

    pub fn add(&self, a: &Real, b: &Real) -> Real {
        a.add(b, self.p, RM)
    }

    pub fn sub(&self, a: &Real, b: &Real) -> Real {
        a.sub(b, self.p, RM)
    }

    pub fn mul(&self, a: &Real, b: &Real) -> Real {
        a.mul(b, self.p, RM)
    }

    pub fn div(&self, a: &Real, b: &Real) -> Real {
        a.div(b, self.p, RM)
    }

    pub fn sqrt(&self, a: &Real) -> Real {
        a.sqrt(self.p, RM)
    }

    /// Base-2 logarithm.
    pub fn log2(&self, a: &Real) -> Real {
        a.log2(self.p, RM, &mut self.cc.borrow_mut())
    }

    /// 2^k for integer k.
    pub fn pow2(&self, k: i64) -> Real {
        if k >= 0 {
            self.int(2).powi(k as usize, self.p, RM)
        } else {
            self.div(&self.int(1), &self.int(2).powi((-k) as usize, self.p, RM))
        }
    }

    pub fn cmp(&self, a: &Real, b: &Real) -> Ordering {
        match a.cmp(b) {
            Some(x) if x < 0 => Ordering::Less,
            Some(0) => Ordering::Equal,
            _ => Ordering::Greater,
        }
    }

    pub fn is_negative(&self, a: &Real) -> bool {
        a.is_negative()
    }

    /// Decimal representation as produced by astro-float.
    pub fn to_string(&self, a: &Real) -> String {
        a.format(Radix::Dec, RM, &mut self.cc.borrow_mut()).unwrap_or_else(|_| "NaN".into())
    }

    pub fn to_f64(&self, a: &Real) -> f64 {
        self.to_string(a).parse().unwrap_or(f64::NAN)
    }

    /// Fixed-point decimal with `digits` places after the point.
    pub fn to_fixed(&self, a: &Real, digits: usize) -> String {
        let scale = self.int(10).powi(digits, self.p, RM);
        let scaled = self.mul(&a.abs(), &scale);
        let half = self.ratio(1, 2);
        let rounded = self.add(&scaled, &half).floor();
        let s = self.to_string(&rounded);
        let int_part = decimal_integer(&s);
        let padded = format!("{int_part:0>width$}", width = digits + 1);
        let (i, f) = padded.split_at(padded.len() - digits);
        let sign = if a.is_negative() && int_part.chars().any(|c| c != '0') { "-" } else { "" };
        format!("{sign}{i}.{f}")
    }

    /// Binary entropy H(x), with H(0) = H(1) = 0.
    pub fn entropy(&self, x: &Real) -> Real {
        let one = self.int(1);
        let y = self.sub(&one, x);
        let term = |t: &Real| {
            if t.is_zero() || t.is_negative() {
                self.int(0)
            } else {
                self.mul(t, &self.log2(t))
            }
        };
        self.sub(&self.int(0), &self.add(&term(x), &term(&y)))
    }

    /// Bisection for a sign change of `f` on `[lo, hi]`. Stops when the
    /// bracket is narrower than `width`; returns the midpoint and the final
    /// bracket width.
    pub fn bisect(&self, f: impl Fn(&Real) -> Real, lo: Real, hi: Real, width: f64) -> Result<(Real, f64)> {
        let (mut lo, mut hi) = (lo, hi);
        let flo = f(&lo);
        let fhi = f(&hi);
        if flo.is_negative() == fhi.is_negative() {
            return Err(Error::Precondition("no sign change on the bracket".into()));
        }
        let lo_neg = flo.is_negative();
        let half = self.ratio(1, 2);
        let w = self.from_f64(width);
        let mut cur = self.sub(&hi, &lo);
        let mut steps = 0;
        while self.cmp(&cur, &w) == Ordering::Greater && steps < 4 * self.p {
            let mid = self.mul(&self.add(&lo, &hi), &half);
            if f(&mid).is_negative() == lo_neg {
                lo = mid;
            } else {
                hi = mid;
            }
            cur = self.sub(&hi, &lo);
            steps += 1;
        }
        let mid = self.mul(&self.add(&lo, &hi), &half);
        Ok((mid, self.to_f64(&cur)))
    }
}

/// Integer part of an astro-float decimal string such as `1.234e+5`.
fn decimal_integer(s: &str) -> String {
    let s = s.trim_start_matches('-');
    let (mant, exp) = match s.split_once('e') {
        Some((m, e)) => (m, e.parse::<i64>().unwrap_or(0)),
        None => (s, 0),
    };
    let (ip, fp) = mant.split_once('.').unwrap_or((mant, ""));
    let digits: String = format!("{ip}{fp}");
    let point = ip.len() as i64 + exp;
    if point <= 0 {
        return "0".into();
    }
    let point = point as usize;
    let mut out: String = digits.chars().take(point).collect();
    while out.len() < point {
        out.push('0');
    }
    let trimmed = out.trim_start_matches('0');
    if trimmed.is_empty() {
        "0".into()
    } else {
        trimmed.into()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn entropy_endpoints() {
        let ev = Evaluator::new(128).unwrap();
        assert_eq!(ev.to_f64(&ev.entropy(&ev.ratio(1, 2))), 1.0);
        assert_eq!(ev.to_f64(&ev.entropy(&ev.int(0))), 0.0);
        assert_eq!(ev.to_f64(&ev.entropy(&ev.int(1))), 0.0);
    }

    #[test]
    fn fixed_formatting() {
        let ev = Evaluator::new(128).unwrap();
        assert_eq!(ev.to_fixed(&ev.ratio(1, 3), 6), "0.333333");
        assert_eq!(ev.to_fixed(&ev.ratio(-2, 3), 3), "-0.667");
        assert_eq!(ev.to_fixed(&ev.int(12345), 2), "12345.00");
        assert_eq!(ev.to_fixed(&ev.ratio(1, 1000), 2), "0.00");
    }

    #[test]
    fn bisection_finds_sqrt2() {
        let ev = Evaluator::new(128).unwrap();
        let (r, w) = ev.bisect(|x| ev.sub(&ev.mul(x, x), &ev.int(2)), ev.int(1), ev.int(2), 1e-15).unwrap();
        assert!(w < 1e-15);
        assert!((ev.to_f64(&r) - 2f64.sqrt()).abs() < 1e-14);
    }
}
