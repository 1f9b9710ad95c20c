use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};

use crate::algebra::{DyadicRational, IntMatrix};
use crate::codes::linear::{data_lines, parse_nums};
use crate::error::{Error, Result};

/// A positive-definite lattice with dyadic scaling.
///
/// The working data are integers: basis rows are `basis / 2^exp` and Gram
/// entries are `gram / 4^exp`. Lattices given by a Gram matrix alone carry
/// no basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DyadicLattice {
    name: Option<String>,
    exp: u32,
    basis: Option<IntMatrix>,
    gram: IntMatrix,
}

/// Leading principal minors all positive (Sylvester).
fn positive_definite(g: &IntMatrix) -> bool {
    let n = g.rows();
    (1..=n).all(|k| {
        let rows: Vec<Vec<i128>> = (0..k).map(|i| g.row(i)[..k].to_vec()).collect();
        IntMatrix::from_rows(&rows).det().is_positive()
    })
}

impl DyadicLattice {
    /// Lattice spanned by the rows of `basis / 2^exp`; rows must be
    /// independent.
    pub fn from_basis(basis: IntMatrix, exp: u32) -> Result<Self> {
        if basis.rows() == 0 || basis.rows() > basis.cols() {
            return Err(Error::InvalidParameter(format!(
                "basis must have 1..={} rows, got {}",
                basis.cols(),
                basis.rows()
            )));
        }
        let gram = basis.gram()?;
        if !positive_definite(&gram) {
            return Err(Error::Degenerate("basis rows are linearly dependent".into()));
        }
        Ok(DyadicLattice { name: None, exp, basis: Some(basis), gram }.normalized())
    }

    /// Lattice given by the Gram matrix `gram / 4^exp`.
    pub fn from_gram(gram: IntMatrix, exp: u32) -> Result<Self> {
        if !gram.is_square() || gram.rows() == 0 {
            return Err(Error::InvalidParameter("Gram matrix must be square and nonempty".into()));
        }
        if gram != gram.transpose() {
            return Err(Error::InvalidParameter("Gram matrix must be symmetric".into()));
        }
        if !positive_definite(&gram) {
            return Err(Error::Degenerate("Gram matrix is not positive definite".into()));
        }
        Ok(DyadicLattice { name: None, exp, basis: None, gram })
    }

    /// Strips common factors of two from a basis-form lattice.
    fn normalized(mut self) -> Self {
        while self.exp > 0 {
            let Some(b) = &self.basis else { break };
            if b.row_vecs().iter().flatten().any(|x| x % 2 != 0) {
                break;
            }
            let halved: Vec<Vec<i128>> = b.row_vecs().iter().map(|r| r.iter().map(|x| x / 2).collect()).collect();
            let hb = IntMatrix::from_rows(&halved);
            self.gram = hb.gram().expect("entries shrank");
            self.basis = Some(hb);
            self.exp -= 1;
        }
        self
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    /// Rank of the lattice.
    pub fn dim(&self) -> usize {
        self.gram.rows()
    }

    /// Ambient dimension of the basis rows (equal to `dim` for Gram-only).
    pub fn ambient_dim(&self) -> usize {
        self.basis.as_ref().map_or(self.dim(), |b| b.cols())
    }

    pub fn exp(&self) -> u32 {
        self.exp
    }

    /// Integer basis numerators, if the lattice has an embedding.
    pub fn basis(&self) -> Option<&IntMatrix> {
        self.basis.as_ref()
    }

    /// Integer Gram numerators (true Gram = gram / 4^exp).
    pub fn gram(&self) -> &IntMatrix {
        &self.gram
    }

    /// A true squared norm from its integer numerator.
    pub fn norm_value(&self, num: i128) -> DyadicRational {
        DyadicRational::new(num, 2 * self.exp)
    }

    /// Integer numerator of a dyadic squared norm at this lattice's scale.
    pub fn norm_numerator(&self, norm: DyadicRational) -> Result<i128> {
        norm.scaled_numerator(2 * self.exp)
    }

    /// Exact determinant of the true Gram matrix.
    pub fn det(&self) -> BigRational {
        let den = BigInt::one() << (2 * self.exp as usize * self.dim());
        BigRational::new(self.gram.det(), den)
    }

    /// Squared center density (min_norm/4)^m / det for a given minimum norm.
    pub fn center_density_sq(&self, min_norm: DyadicRational) -> BigRational {
        let m = self.dim() as i32;
        let r = BigRational::new(min_norm.numerator().into(), BigInt::one() << (min_norm.exponent() as usize + 2));
        num_traits::pow::pow(r, m as usize) / self.det()
    }

    /// log2 of the center density.
    pub fn center_density_log2(&self, min_norm: DyadicRational) -> f64 {
        let sq = self.center_density_sq(min_norm);
        0.5 * (log2_big(sq.numer()) - log2_big(sq.denom()))
    }

    /// Applies a unimodular change of basis `u` (new rows = u * old rows).
    pub fn transform(&self, u: &IntMatrix) -> Result<Self> {
        let d = u.det();
        if !(d.abs().is_one() && u.rows() == self.dim()) {
            return Err(Error::InvalidParameter("change of basis is not unimodular".into()));
        }
        let gram = u.checked_mul(&self.gram)?.checked_mul(&u.transpose())?;
        let basis = self.basis.as_ref().map(|b| u.checked_mul(b)).transpose()?;
        Ok(DyadicLattice { name: self.name.clone(), exp: self.exp, basis, gram })
    }

    /// The same lattice scaled by 2^k (k may be negative).
    pub fn scaled_pow2(&self, k: i32) -> Result<Self> {
        let mut out = self.clone();
        if k >= 0 {
            let c = 1i128 << k;
            out.basis = self.basis.as_ref().map(|b| b.scale(c)).transpose()?;
            out.gram = self.gram.scale(c * c)?;
        } else if let Some(b) = &self.basis {
            out.exp += (-k) as u32;
            out.gram = b.gram()?;
        } else {
            out.exp += (-k) as u32;
        }
        Ok(if out.basis.is_some() { out.normalized() } else { out })
    }

    /// Text form: `m e` then m rows (basis numerators at scale 2^-e), or
    /// `gram m` then m rows of the integer Gram matrix.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let (head, rows) = match &self.basis {
            Some(b) if b.is_square() => (format!("{} {}", b.rows(), self.exp), b),
            _ => (format!("gram {}", self.dim()), &self.gram),
        };
        let _ = writeln!(s, "{head}");
        for r in rows.row_vecs() {
            let _ = writeln!(s, "{}", r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" "));
        }
        s
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = data_lines(text);
        let (ln, head) = lines.next().ok_or_else(|| Error::parse(0, "empty lattice file"))?;
        let (m, exp, gram_form) = if let Some(rest) = head.strip_prefix("gram") {
            let v = parse_nums::<usize>(ln, rest)?;
            let [m] = v[..] else { return Err(Error::parse(ln, "header must be `gram m`")) };
            (m, 0, true)
        } else {
            let v = parse_nums::<u64>(ln, head)?;
            let [m, e] = v[..] else { return Err(Error::parse(ln, "header must be `m e`")) };
            (m as usize, e as u32, false)
        };
        if m == 0 || m > 64 {
            return Err(Error::parse(ln, format!("dimension {m} out of range")));
        }
        let mut rows = Vec::with_capacity(m);
        for _ in 0..m {
            let (ln, l) = lines.next().ok_or_else(|| Error::parse(ln, "too few rows"))?;
            let r = parse_nums::<i128>(ln, l)?;
            if r.len() != m {
                return Err(Error::parse(ln, format!("expected {m} entries, found {}", r.len())));
            }
            rows.push(r);
        }
        if let Some((ln, _)) = lines.next() {
            return Err(Error::parse(ln, "trailing data"));
        }
        let mat = IntMatrix::from_rows(&rows);
        if gram_form {
            Self::from_gram(mat, 0)
        } else {
            Self::from_basis(mat, exp)
        }
    }
}

pub(crate) fn log2_big(x: &BigInt) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        let f: f64 = num_traits::ToPrimitive::to_f64(x).unwrap_or(f64::NAN);
        return f.abs().log2();
    }
    let shift = bits - 60;
    let top: f64 = num_traits::ToPrimitive::to_f64(&(x >> shift as usize)).unwrap_or(f64::NAN);
    top.abs().log2() + shift as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basis_roundtrip() {
        let l = DyadicLattice::from_basis(IntMatrix::from_rows(&[vec![2, 0], vec![1, 1]]), 1).unwrap();
        let back = DyadicLattice::parse(&l.to_text()).unwrap();
        assert_eq!(back, l);
        assert_eq!(l.det(), BigRational::new(4.into(), 16.into()));
    }

    #[test]
    fn normalizes_even_basis() {
        let l = DyadicLattice::from_basis(IntMatrix::from_rows(&[vec![2, 0], vec![0, 2]]), 1).unwrap();
        assert_eq!(l.exp(), 0);
        assert_eq!(l.gram(), &IntMatrix::identity(2));
    }

    #[test]
    fn gram_roundtrip_and_checks() {
        let g = IntMatrix::from_rows(&[vec![2, -1], vec![-1, 2]]);
        let l = DyadicLattice::from_gram(g.clone(), 0).unwrap();
        assert_eq!(DyadicLattice::parse(&l.to_text()).unwrap(), l);
        assert!(DyadicLattice::from_gram(IntMatrix::from_rows(&[vec![1, 2], vec![2, 1]]), 0).is_err());
        assert!(DyadicLattice::from_basis(IntMatrix::from_rows(&[vec![1, 1], vec![2, 2]]), 0).is_err());
    }

    #[test]
    fn parse_errors_carry_lines() {
        let e = DyadicLattice::parse("2 0\n1 0\n0\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 3, .. }), "{e}");
    }

    #[test]
    fn density_of_z2() {
        let l = DyadicLattice::from_gram(IntMatrix::identity(2), 0).unwrap();
        let d = l.center_density_sq(DyadicRational::from_int(1));
        assert_eq!(d, BigRational::new(1.into(), 16.into()));
        assert!((l.center_density_log2(DyadicRational::from_int(1)) + 2.0).abs() < 1e-12);
    }
}
