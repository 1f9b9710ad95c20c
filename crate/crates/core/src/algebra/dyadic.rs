//! Exact dyadic rationals n / 2^e.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The value `num / 2^exp`, always kept canonical: `num` odd, or zero with
/// `exp == 0`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct DyadicRational {
    num: i128,
    exp: u32,
}

impl DyadicRational {
    pub const ZERO: DyadicRational = DyadicRational { num: 0, exp: 0 };
    pub const ONE: DyadicRational = DyadicRational { num: 1, exp: 0 };

    /// Canonicalises `num / 2^exp`.
    pub fn new(num: i128, exp: u32) -> Self {
        if num == 0 {
            return Self::ZERO;
        }
        let shift = num.trailing_zeros().min(exp);
        DyadicRational { num: num >> shift, exp: exp - shift }
    }

    pub fn from_int(n: i128) -> Self {
        Self::new(n, 0)
    }

    /// 2^k for any integer k.
    pub fn pow2(k: i32) -> Self {
        if k >= 0 {
            Self::from_int(1i128 << k)
        } else {
            Self::new(1, (-k) as u32)
        }
    }

    pub fn numerator(self) -> i128 {
        self.num
    }

    pub fn exponent(self) -> u32 {
        self.exp
    }

    pub fn is_zero(self) -> bool {
        self.num == 0
    }

    pub fn is_integer(self) -> bool {
        self.exp == 0
    }

    /// The numerator after rescaling to denominator 2^e, if exact.
    pub fn scaled_numerator(self, e: u32) -> Result<i128> {
        if e < self.exp {
            return Err(Error::Precondition(format!("{self} is not a multiple of 2^-{e}")));
        }
        self.num
            .checked_shl(e - self.exp)
            .filter(|v| v >> (e - self.exp) == self.num)
            .ok_or(Error::Overflow("dyadic rescale"))
    }

    pub fn checked_add(self, o: Self) -> Result<Self> {
        let e = self.exp.max(o.exp);
        let a = self.scaled_numerator(e)?;
        let b = o.scaled_numerator(e)?;
        Ok(Self::new(a.checked_add(b).ok_or(Error::Overflow("dyadic add"))?, e))
    }

    pub fn checked_sub(self, o: Self) -> Result<Self> {
        self.checked_add(-o)
    }

    pub fn checked_mul(self, o: Self) -> Result<Self> {
        let n = self.num.checked_mul(o.num).ok_or(Error::Overflow("dyadic mul"))?;
        Ok(Self::new(n, self.exp + o.exp))
    }

    /// Multiplies by 2^k.
    pub fn mul_pow2(self, k: i32) -> Self {
        if self.is_zero() {
            return self;
        }
        if k >= 0 {
            let k = k as u32;
            let drop = k.min(self.exp);
            let rest = k - drop;
            DyadicRational { num: self.num << rest, exp: self.exp - drop }
        } else {
            Self::new(self.num, self.exp + (-k) as u32)
        }
    }

    pub fn to_f64(self) -> f64 {
        self.num as f64 / 2f64.powi(self.exp as i32)
    }

    pub fn abs(self) -> Self {
        DyadicRational { num: self.num.abs(), exp: self.exp }
    }
}

impl std::ops::Neg for DyadicRational {
    type Output = Self;
    fn neg(self) -> Self {
        DyadicRational { num: -self.num, exp: self.exp }
    }
}

impl std::ops::Add for DyadicRational {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        self.checked_add(o).expect("dyadic overflow")
    }
}

impl std::ops::Sub for DyadicRational {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        self.checked_sub(o).expect("dyadic overflow")
    }
}

impl std::ops::Mul for DyadicRational {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        self.checked_mul(o).expect("dyadic overflow")
    }
}

impl Ord for DyadicRational {
    fn cmp(&self, o: &Self) -> Ordering {
        let e = self.exp.max(o.exp);
        match (self.scaled_numerator(e), o.scaled_numerator(e)) {
            (Ok(a), Ok(b)) => a.cmp(&b),
            _ => self.to_f64().partial_cmp(&o.to_f64()).unwrap_or(Ordering::Equal),
        }
    }
}

impl PartialOrd for DyadicRational {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl From<i64> for DyadicRational {
    fn from(n: i64) -> Self {
        Self::from_int(n as i128)
    }
}

impl fmt::Display for DyadicRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exp == 0 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, 1u128 << self.exp.min(127))
        }
    }
}

impl FromStr for DyadicRational {
    type Err = Error;

    /// Accepts `n` or `n/d` with d a power of two.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidParameter(format!("not a dyadic rational: {s:?}"));
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (n, d.trim().parse::<u128>().map_err(|_| bad())?),
            None => (s, 1),
        };
        let n: i128 = n.trim().parse().map_err(|_| bad())?;
        if d == 0 || !d.is_power_of_two() {
            return Err(bad());
        }
        Ok(Self::new(n, d.trailing_zeros()))
    }
}

impl Serialize for DyadicRational {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for DyadicRational {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn canonical_form() {
        assert_eq!(DyadicRational::new(4, 3), DyadicRational::new(1, 1));
        assert_eq!(DyadicRational::new(0, 5), DyadicRational::ZERO);
        assert_eq!(DyadicRational::new(6, 0).exponent(), 0);
        assert_eq!(DyadicRational::new(6, 1).numerator(), 3);
    }

    #[test]
    fn display_and_parse() {
        let x = DyadicRational::new(-3, 2);
        assert_eq!(x.to_string(), "-3/4");
        assert_eq!("-3/4".parse::<DyadicRational>().unwrap(), x);
        assert_eq!("6/4".parse::<DyadicRational>().unwrap(), DyadicRational::new(3, 1));
        assert!("1/3".parse::<DyadicRational>().is_err());
    }

    #[test]
    fn pow2_scaling() {
        let half = DyadicRational::pow2(-1);
        assert_eq!(half * half, DyadicRational::pow2(-2));
        assert_eq!(DyadicRational::new(3, 2).mul_pow2(3), DyadicRational::from_int(6));
        assert_eq!(DyadicRational::from_int(3).mul_pow2(-2), DyadicRational::new(3, 2));
    }

    fn arb() -> impl Strategy<Value = DyadicRational> {
        (-1_000_000i128..1_000_000, 0u32..20).prop_map(|(n, e)| DyadicRational::new(n, e))
    }

    proptest! {
        #[test]
        fn ring_laws(a in arb(), b in arb(), c in arb()) {
            prop_assert_eq!((a + b) + c, a + (b + c));
            prop_assert_eq!((a * b) * c, a * (b * c));
            prop_assert_eq!(a * (b + c), a * b + a * c);
            prop_assert_eq!(a + b, b + a);
            prop_assert_eq!(a - a, DyadicRational::ZERO);
        }

        #[test]
        fn order_matches_float(a in arb(), b in arb()) {
            prop_assert_eq!(a.cmp(&b), a.to_f64().partial_cmp(&b.to_f64()).unwrap());
        }
    }
}
