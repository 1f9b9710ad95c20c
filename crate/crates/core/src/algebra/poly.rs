//! Univariate polynomials over a [`FiniteField`].
//!
//! A polynomial does not own its field; every operation that needs field
//! arithmetic takes it explicitly. Coefficients are stored low degree first
//! with no trailing zeros, so the zero polynomial has an empty vector.

use std::fmt;

use crate::algebra::field::{FieldElem, FiniteField};
use crate::error::{Error, Result};

/// Upper bound on q^s for exhaustive irreducible enumeration.
pub const IRREDUCIBLE_BUDGET: u64 = 1 << 20;

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Polynomial {
    coeffs: Vec<FieldElem>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Polynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Polynomial { coeffs: vec![FieldElem::ONE] }
    }

    /// The monomial T.
    pub fn t() -> Self {
        Polynomial { coeffs: vec![FieldElem::ZERO, FieldElem::ONE] }
    }

    pub fn from_coeffs(mut coeffs: Vec<FieldElem>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    /// Monic polynomial of degree `deg` whose lower coefficients are the
    /// base-`q` digits of `index`.
    pub fn monic_from_index(q: u32, deg: usize, mut index: u64) -> Self {
        let mut coeffs = Vec::with_capacity(deg + 1);
        for _ in 0..deg {
            coeffs.push(FieldElem((index % q as u64) as u32));
            index /= q as u64;
        }
        coeffs.push(FieldElem::ONE);
        Polynomial { coeffs }
    }

    /// Inverse of [`Polynomial::monic_from_index`] for a monic polynomial.
    pub fn monic_index(&self, q: u32) -> u64 {
        let d = self.coeffs.len().saturating_sub(1);
        self.coeffs[..d].iter().rev().fold(0u64, |acc, c| acc * q as u64 + c.0 as u64)
    }

    pub fn coeffs(&self) -> &[FieldElem] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> FieldElem {
        self.coeffs.last().copied().unwrap_or(FieldElem::ZERO)
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == FieldElem::ONE
    }

    pub fn coeff(&self, i: usize) -> FieldElem {
        self.coeffs.get(i).copied().unwrap_or(FieldElem::ZERO)
    }

    /// Comma-separated coefficient indices, low degree first.
    pub fn to_csv(&self) -> String {
        if self.coeffs.is_empty() {
            return "0".into();
        }
        self.coeffs.iter().map(|c| c.0.to_string()).collect::<Vec<_>>().join(",")
    }

    pub fn parse_csv(field: &FiniteField, s: &str) -> Result<Self> {
        let coeffs = s
            .split(',')
            .map(|t| {
                let v: u32 = t.trim().parse().map_err(|_| Error::InvalidParameter(format!("bad coefficient {t:?}")))?;
                field.elem(v)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_coeffs(coeffs))
    }

    pub fn add(&self, f: &FiniteField, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::from_coeffs((0..n).map(|i| f.add(self.coeff(i), other.coeff(i))).collect())
    }

    pub fn sub(&self, f: &FiniteField, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::from_coeffs((0..n).map(|i| f.sub(self.coeff(i), other.coeff(i))).collect())
    }

    pub fn scale(&self, f: &FiniteField, c: FieldElem) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|&a| f.mul(a, c)).collect())
    }

    pub fn mul(&self, f: &FiniteField, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![FieldElem::ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(a, b));
            }
        }
        Self::from_coeffs(out)
    }

    pub fn pow(&self, f: &FiniteField, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(f, &base);
            }
            base = base.mul(f, &base);
            e >>= 1;
        }
        acc
    }

    /// Quotient and remainder. Panics on division by zero.
    pub fn div_rem(&self, f: &FiniteField, divisor: &Self) -> (Self, Self) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let inv_lead = f.inv(divisor.leading()).expect("nonzero leading coefficient");
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let mut quot = vec![FieldElem::ZERO; rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = f.mul(rem[k + dd], inv_lead);
            quot[k] = c;
            if c.is_zero() {
                continue;
            }
            for (j, &b) in divisor.coeffs.iter().enumerate() {
                rem[k + j] = f.sub(rem[k + j], f.mul(c, b));
            }
        }
        rem.truncate(dd);
        (Self::from_coeffs(quot), Self::from_coeffs(rem))
    }

    pub fn rem(&self, f: &FiniteField, divisor: &Self) -> Self {
        self.div_rem(f, divisor).1
    }

    /// Monic gcd.
    pub fn gcd(&self, f: &FiniteField, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(f, &b);
            a = b;
            b = r;
        }
        a.make_monic(f)
    }

    pub fn make_monic(&self, f: &FiniteField) -> Self {
        match f.inv(self.leading()) {
            Some(il) => self.scale(f, il),
            None => Self::zero(),
        }
    }

    pub fn eval(&self, f: &FiniteField, x: FieldElem) -> FieldElem {
        self.coeffs.iter().rev().fold(FieldElem::ZERO, |acc, &c| f.add(f.mul(acc, x), c))
    }

    /// Smallest-index monic factor of degree between 1 and deg/2, if any.
    /// Degree-0 and zero polynomials return `None`.
    pub fn find_factor(&self, f: &FiniteField) -> Option<Polynomial> {
        let deg = self.degree()?;
        let q = f.order();
        for d in 1..=deg / 2 {
            let count = (q as u64).pow(d as u32);
            for idx in 0..count {
                let cand = Self::monic_from_index(q, d, idx);
                if self.rem(f, &cand).is_zero() {
                    return Some(cand);
                }
            }
        }
        None
    }

    pub fn is_irreducible(&self, f: &FiniteField) -> bool {
        self.degree().is_some_and(|d| d >= 1) && self.find_factor(f).is_none()
    }

    /// Factorisation of a monic polynomial into monic irreducibles with
    /// multiplicities, by trial division. Factors are sorted by degree then
    /// encoding.
    pub fn factor(&self, f: &FiniteField) -> Result<Vec<(Polynomial, u32)>> {
        if !self.is_monic() {
            return Err(Error::InvalidParameter("factorisation needs a monic polynomial".into()));
        }
        let mut rest = self.clone();
        let mut out: Vec<(Polynomial, u32)> = Vec::new();
        while rest.degree().is_some_and(|d| d > 0) {
            let p = rest.find_factor(f).unwrap_or_else(|| rest.clone());
            let mut e = 0;
            loop {
                let (quot, r) = rest.div_rem(f, &p);
                if !r.is_zero() {
                    break;
                }
                rest = quot;
                e += 1;
            }
            out.push((p, e));
        }
        out.sort_by_key(|a| (a.0.degree(), a.0.monic_index(f.order())));
        Ok(out)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_csv())
    }
}

/// All monic irreducible polynomials of degree `s` over `field`, ordered by
/// encoding index.
pub fn irreducible_monics(field: &FiniteField, s: usize) -> Result<Vec<Polynomial>> {
    if s == 0 {
        return Err(Error::InvalidParameter("degree must be >= 1".into()));
    }
    let q = field.order() as u64;
    let total = q.checked_pow(s as u32).filter(|&t| t <= IRREDUCIBLE_BUDGET).ok_or(Error::BudgetExceeded {
        what: "irreducible enumeration",
        needed: (q as u128).saturating_pow(s as u32),
        budget: IRREDUCIBLE_BUDGET as u128,
    })?;
    if s == 1 {
        return Ok((0..q).map(|i| Polynomial::monic_from_index(q as u32, 1, i)).collect());
    }
    // Sieve: strike every product of an irreducible of degree d <= s/2 with
    // any monic of degree s - d.
    let mut reducible = vec![false; total as usize];
    for d in 1..=s / 2 {
        let low = irreducible_monics(field, d)?;
        let cofactors = q.pow((s - d) as u32);
        for p in &low {
            for idx in 0..cofactors {
                let g = Polynomial::monic_from_index(q as u32, s - d, idx);
                reducible[p.mul(field, &g).monic_index(q as u32) as usize] = true;
            }
        }
    }
    Ok((0..total).filter(|&i| !reducible[i as usize]).map(|i| Polynomial::monic_from_index(q as u32, s, i)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(q: u32) -> FiniteField {
        FiniteField::of_order(q).unwrap()
    }

    #[test]
    fn linears_over_gf2() {
        let f = gf(2);
        let ps = irreducible_monics(&f, 1).unwrap();
        assert_eq!(ps.iter().map(|p| p.to_csv()).collect::<Vec<_>>(), vec!["0,1", "1,1"]);
    }

    #[test]
    fn cubics_over_gf2() {
        let f = gf(2);
        let ps = irreducible_monics(&f, 3).unwrap();
        assert_eq!(ps.iter().map(|p| p.to_csv()).collect::<Vec<_>>(), vec!["1,1,0,1", "1,0,1,1"]);
    }

    #[test]
    fn quartic_count_over_gf2() {
        assert_eq!(irreducible_monics(&gf(2), 4).unwrap().len(), 3);
    }

    #[test]
    fn sieve_matches_trial_division() {
        for (q, s) in [(2, 5), (3, 3), (4, 2), (5, 2), (2, 6)] {
            let f = gf(q);
            let sieve = irreducible_monics(&f, s).unwrap();
            let count = (q as u64).pow(s as u32);
            let trial: Vec<_> =
                (0..count).map(|i| Polynomial::monic_from_index(q, s, i)).filter(|p| p.is_irreducible(&f)).collect();
            assert_eq!(sieve, trial, "q={q} s={s}");
        }
    }

    #[test]
    fn budget_guard() {
        assert!(matches!(irreducible_monics(&gf(2), 21), Err(Error::BudgetExceeded { .. })));
    }

    #[test]
    fn div_rem_reconstructs() {
        let f = gf(9);
        let a = Polynomial::from_coeffs([3, 1, 4, 1, 5, 8].map(FieldElem).to_vec());
        let b = Polynomial::from_coeffs([2, 7, 1].map(FieldElem).to_vec());
        let (qt, r) = a.div_rem(&f, &b);
        assert!(r.degree().is_none_or(|d| d < 2));
        assert_eq!(qt.mul(&f, &b).add(&f, &r), a);
    }

    #[test]
    fn factor_t3_t_plus_1() {
        let f = gf(2);
        let t = Polynomial::t();
        let m = t.pow(&f, 3).mul(&f, &t.add(&f, &Polynomial::one()));
        let fac = m.factor(&f).unwrap();
        assert_eq!(fac, vec![(t.clone(), 3), (Polynomial::monic_from_index(2, 1, 1), 1)]);
    }

    #[test]
    fn csv_roundtrip() {
        let f = gf(2);
        let p = Polynomial::parse_csv(&f, "1,1,0,1").unwrap();
        assert_eq!(p.degree(), Some(3));
        assert_eq!(p.to_csv(), "1,1,0,1");
    }
}
