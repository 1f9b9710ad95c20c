//! Finite fields GF(p^h) for p^h <= 2^16.
//!
//! Elements are stored as their index in the polynomial-basis enumeration:
//! the element `c_0 + c_1 w + ... + c_{h-1} w^{h-1}` (with `w` a root of the
//! modulus) has index `c_0 + c_1 p + ... + c_{h-1} p^{h-1}`. That index is
//! also the on-disk symbol encoding used by the code file format.
//!
//! Multiplication goes through exp/log tables built once per field, so every
//! element operation is a couple of table lookups.

use std::fmt;

use crate::algebra::poly::Polynomial;
use crate::error::{Error, Result};

/// Largest supported field order.
pub const MAX_FIELD_ORDER: u32 = 1 << 16;

/// An element of some [`FiniteField`], identified by its polynomial-basis index.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElem(pub u32);

impl FieldElem {
    pub const ZERO: FieldElem = FieldElem(0);
    pub const ONE: FieldElem = FieldElem(1);

    #[inline]
    pub fn index(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

pub struct FiniteField {
    p: u32,
    h: u32,
    q: u32,
    /// Monic modulus over GF(p), low degree first, length h + 1.
    modulus: Vec<u32>,
    /// exp[i] = g^i for i in 0..2(q-1).
    exp: Vec<u32>,
    /// log[a] for nonzero a; log[0] unused.
    log: Vec<u32>,
    generator: FieldElem,
    /// Digit-wise addition table, only for odd characteristic and q <= 256.
    add_table: Option<Vec<u16>>,
}

impl fmt::Debug for FiniteField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteField").field("p", &self.p).field("h", &self.h).field("modulus", &self.modulus).finish()
    }
}

impl PartialEq for FiniteField {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.h == other.h && self.modulus == other.modulus
    }
}

impl Eq for FiniteField {}

pub(crate) fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Splits q into (p, h) with q = p^h, if q is a prime power.
pub fn prime_power(q: u32) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2;
    while !q.is_multiple_of(p) {
        p += 1;
    }
    let (mut r, mut h) = (q, 0);
    while r % p == 0 {
        r /= p;
        h += 1;
    }
    (r == 1).then_some((p, h))
}

impl FiniteField {
    /// Builds GF(p^h). Without an explicit modulus the lexicographically-least
    /// monic irreducible of degree h is used.
    pub fn new(p: u32, h: u32, modulus: Option<&[u32]>) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::InvalidParameter(format!("characteristic {p} is not prime")));
        }
        if h == 0 {
            return Err(Error::InvalidParameter("extension degree must be >= 1".into()));
        }
        let q = (p as u64)
            .checked_pow(h)
            .filter(|&q| q <= MAX_FIELD_ORDER as u64)
            .ok_or_else(|| Error::InvalidParameter(format!("GF({p}^{h}) exceeds order {MAX_FIELD_ORDER}")))?
            as u32;

        let prime = Self::prime_field(p);
        let modulus = match modulus {
            Some(m) => {
                if m.len() != h as usize + 1 || m[h as usize] != 1 || m.iter().any(|&c| c >= p) {
                    return Err(Error::InvalidParameter(format!(
                        "modulus must be a monic degree-{h} polynomial with coefficients in 0..{p}"
                    )));
                }
                let poly = Polynomial::from_coeffs(m.iter().map(|&c| FieldElem(c)).collect());
                if let Some(factor) = poly.find_factor(&prime) {
                    return Err(Error::ReducibleModulus { factor: factor.to_csv() });
                }
                m.to_vec()
            }
            None => {
                let count = p.pow(h);
                (0..count)
                    .map(|idx| Polynomial::monic_from_index(p, h as usize, idx as u64))
                    .find(|f| f.find_factor(&prime).is_none())
                    .expect("irreducible polynomials exist in every degree")
                    .coeffs()
                    .iter()
                    .map(|c| c.0)
                    .collect()
            }
        };
        Ok(Self::with_modulus(p, h, q, modulus))
    }

    /// Convenience constructor from the field order.
    pub fn of_order(q: u32) -> Result<Self> {
        let (p, h) = prime_power(q).ok_or_else(|| Error::InvalidParameter(format!("{q} is not a prime power")))?;
        Self::new(p, h, None)
    }

    fn prime_field(p: u32) -> Self {
        Self::with_modulus(p, 1, p, vec![0, 1])
    }

    fn with_modulus(p: u32, h: u32, q: u32, modulus: Vec<u32>) -> Self {
        let mut field = FiniteField {
            p,
            h,
            q,
            modulus,
            exp: Vec::new(),
            log: Vec::new(),
            generator: FieldElem::ONE,
            add_table: None,
        };
        if p != 2 && q <= 256 {
            let mut t = vec![0u16; (q * q) as usize];
            for a in 0..q {
                for b in 0..q {
                    t[(a * q + b) as usize] = field.add_digits(a, b) as u16;
                }
            }
            field.add_table = Some(t);
        }
        field.build_tables();
        field
    }

    fn build_tables(&mut self) {
        let n = self.q - 1;
        let factors = distinct_prime_factors(n);
        let generator =
            (1..self.q).find(|&g| factors.iter().all(|&r| self.pow_slow(g, (n / r) as u64) != 1)).unwrap_or(1);
        let mut exp = vec![0u32; 2 * n as usize];
        let mut log = vec![0u32; self.q as usize];
        let mut x = 1u32;
        for i in 0..n {
            exp[i as usize] = x;
            exp[(i + n) as usize] = x;
            log[x as usize] = i;
            x = self.mul_slow(x, generator);
        }
        self.exp = exp;
        self.log = log;
        self.generator = FieldElem(generator);
    }

    fn digits(&self, mut a: u32) -> Vec<u32> {
        (0..self.h)
            .map(|_| {
                let d = a % self.p;
                a /= self.p;
                d
            })
            .collect()
    }

    fn pack_digits(&self, d: &[u32]) -> u32 {
        d.iter().rev().fold(0, |acc, &c| acc * self.p + c)
    }

    fn add_digits(&self, a: u32, b: u32) -> u32 {
        let (da, db) = (self.digits(a), self.digits(b));
        let sum: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % self.p).collect();
        self.pack_digits(&sum)
    }

    fn mul_slow(&self, a: u32, b: u32) -> u32 {
        let (p, h) = (self.p as u64, self.h as usize);
        let (da, db) = (self.digits(a), self.digits(b));
        let mut prod = vec![0u64; 2 * h];
        for (i, &x) in da.iter().enumerate() {
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p;
            }
        }
        for deg in (h..2 * h).rev() {
            let c = prod[deg];
            if c == 0 {
                continue;
            }
            for i in 0..h {
                let m = self.modulus[i] as u64;
                prod[deg - h + i] = (prod[deg - h + i] + (p - c) * m % p) % p;
            }
            prod[deg] = 0;
        }
        let out: Vec<u32> = prod[..h].iter().map(|&c| c as u32).collect();
        self.pack_digits(&out)
    }

    fn pow_slow(&self, a: u32, mut e: u64) -> u32 {
        let (mut base, mut acc) = (a, 1u32);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_slow(acc, base);
            }
            base = self.mul_slow(base, base);
            e >>= 1;
        }
        acc
    }

    #[inline]
    pub fn characteristic(&self) -> u32 {
        self.p
    }

    #[inline]
    pub fn degree(&self) -> u32 {
        self.h
    }

    #[inline]
    pub fn order(&self) -> u32 {
        self.q
    }

    /// Modulus coefficients, low degree first.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// A generator of the multiplicative group.
    pub fn generator(&self) -> FieldElem {
        self.generator
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElem> {
        (0..self.q).map(FieldElem)
    }

    pub fn elem(&self, index: u32) -> Result<FieldElem> {
        if index < self.q {
            Ok(FieldElem(index))
        } else {
            Err(Error::InvalidParameter(format!("symbol {index} not in GF({})", self.q)))
        }
    }

    /// The prime-field element n mod p.
    pub fn from_int(&self, n: i64) -> FieldElem {
        FieldElem(n.rem_euclid(self.p as i64) as u32)
    }

    #[inline]
    pub fn add(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        if self.p == 2 {
            return FieldElem(a.0 ^ b.0);
        }
        match &self.add_table {
            Some(t) => FieldElem(t[(a.0 * self.q + b.0) as usize] as u32),
            None => FieldElem(self.add_digits(a.0, b.0)),
        }
    }

    #[inline]
    pub fn neg(&self, a: FieldElem) -> FieldElem {
        if self.p == 2 || a.is_zero() {
            return a;
        }
        let d: Vec<u32> = self.digits(a.0).iter().map(|&c| (self.p - c) % self.p).collect();
        FieldElem(self.pack_digits(&d))
    }

    #[inline]
    pub fn sub(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        if a.is_zero() || b.is_zero() {
            return FieldElem::ZERO;
        }
        FieldElem(self.exp[(self.log[a.0 as usize] + self.log[b.0 as usize]) as usize])
    }

    pub fn inv(&self, a: FieldElem) -> Option<FieldElem> {
        if a.is_zero() {
            return None;
        }
        let n = self.q - 1;
        Some(FieldElem(self.exp[((n - self.log[a.0 as usize]) % n) as usize]))
    }

    pub fn div(&self, a: FieldElem, b: FieldElem) -> Option<FieldElem> {
        self.inv(b).map(|ib| self.mul(a, ib))
    }

    pub fn pow(&self, a: FieldElem, e: u64) -> FieldElem {
        if e == 0 {
            return FieldElem::ONE;
        }
        if a.is_zero() {
            return FieldElem::ZERO;
        }
        let n = (self.q - 1) as u64;
        let l = (self.log[a.0 as usize] as u64 * (e % n)) % n;
        FieldElem(self.exp[l as usize])
    }

    /// x -> x^p.
    pub fn frobenius(&self, a: FieldElem) -> FieldElem {
        self.pow(a, self.p as u64)
    }

    /// Coordinates of `a` in the basis (1, w, ..., w^{h-1}).
    pub fn coords(&self, a: FieldElem) -> Vec<u32> {
        self.digits(a.0)
    }

    pub fn from_coords(&self, coords: &[u32]) -> FieldElem {
        FieldElem(self.pack_digits(coords))
    }

    /// The basis element w^t, t < h.
    pub fn basis_elem(&self, t: u32) -> FieldElem {
        FieldElem(self.p.pow(t))
    }

    /// Multiplicative order of a nonzero element.
    pub fn mult_order(&self, a: FieldElem) -> Option<u32> {
        if a.is_zero() {
            return None;
        }
        let n = self.q - 1;
        let l = self.log[a.0 as usize];
        Some(n / gcd(n, l))
    }
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn distinct_prime_factors(mut n: u32) -> Vec<u32> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gf2_has_minus_one_equal_one() {
        let f = FiniteField::new(2, 1, None).unwrap();
        assert_eq!(f.order(), 2);
        assert_eq!(f.neg(FieldElem::ONE), FieldElem::ONE);
    }

    #[test]
    fn gf4_default_modulus_is_x2_x_1() {
        let f = FiniteField::new(2, 2, None).unwrap();
        assert_eq!(f.modulus(), &[1, 1, 1]);
    }

    #[test]
    fn gf64_elements_are_fixed_by_q_power() {
        let f = FiniteField::new(2, 6, None).unwrap();
        for a in f.elements() {
            assert_eq!(f.pow(a, 64), a);
        }
    }

    #[test]
    fn reducible_modulus_names_a_factor() {
        // x^2 + 1 = (x + 1)^2 over GF(2)
        match FiniteField::new(2, 2, Some(&[1, 0, 1])) {
            Err(Error::ReducibleModulus { factor }) => assert_eq!(factor, "1,1"),
            other => panic!("expected rejection, got {other:?}"),
        }
    }

    #[test]
    fn rejects_oversized_and_composite() {
        assert!(FiniteField::new(2, 17, None).is_err());
        assert!(FiniteField::new(4, 1, None).is_err());
        assert!(FiniteField::new(3, 0, None).is_err());
    }

    #[test]
    fn generator_has_full_order() {
        for (p, h) in [(2, 4), (3, 2), (5, 2), (2, 8), (7, 1)] {
            let f = FiniteField::new(p, h, None).unwrap();
            assert_eq!(f.mult_order(f.generator()), Some(f.order() - 1));
        }
    }

    #[test]
    fn frobenius_is_additive_and_multiplicative() {
        for (p, h) in [(2, 3), (3, 2), (2, 8), (5, 2), (3, 5)] {
            let f = FiniteField::new(p, h, None).unwrap();
            for a in f.elements() {
                for b in f.elements() {
                    let fa = f.frobenius(a);
                    let fb = f.frobenius(b);
                    assert_eq!(f.frobenius(f.add(a, b)), f.add(fa, fb));
                    assert_eq!(f.frobenius(f.mul(a, b)), f.mul(fa, fb));
                }
            }
        }
    }

    #[test]
    fn inverse_and_negation() {
        let f = FiniteField::new(3, 3, None).unwrap();
        for a in f.elements().skip(1) {
            assert_eq!(f.mul(a, f.inv(a).unwrap()), FieldElem::ONE);
            assert_eq!(f.add(a, f.neg(a)), FieldElem::ZERO);
        }
        assert_eq!(f.inv(FieldElem::ZERO), None);
    }

    #[test]
    fn coords_roundtrip_and_basis() {
        let f = FiniteField::new(3, 2, None).unwrap();
        for a in f.elements() {
            assert_eq!(f.from_coords(&f.coords(a)), a);
        }
        assert_eq!(f.coords(f.basis_elem(1)), vec![0, 1]);
    }

    #[test]
    fn prime_power_split() {
        assert_eq!(prime_power(64), Some((2, 6)));
        assert_eq!(prime_power(9), Some((3, 2)));
        assert_eq!(prime_power(12), None);
    }
}
