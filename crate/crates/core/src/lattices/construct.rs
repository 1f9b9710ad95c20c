use crate::algebra::intmat::hnf;
use crate::algebra::{DyadicRational, IntMatrix};
use crate::codes::{LinearCode, NestedCodeChain};
use crate::error::{Error, Result};
use crate::lattices::DyadicLattice;

/// A vector `num / 2^exp`, kept with the smallest exponent.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DyadicVector {
    num: Vec<i128>,
    exp: u32,
}

impl DyadicVector {
    pub fn new(mut num: Vec<i128>, mut exp: u32) -> Self {
        while exp > 0 && num.iter().all(|x| x % 2 == 0) {
            num.iter_mut().for_each(|x| *x /= 2);
            exp -= 1;
        }
        DyadicVector { num, exp }
    }

    pub fn zeros(n: usize) -> Self {
        DyadicVector { num: vec![0; n], exp: 0 }
    }

    pub fn len(&self) -> usize {
        self.num.len()
    }

    pub fn is_empty(&self) -> bool {
        self.num.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(|&x| x == 0)
    }

    pub fn numerators(&self) -> &[i128] {
        &self.num
    }

    pub fn exp(&self) -> u32 {
        self.exp
    }

    pub fn entries(&self) -> Vec<DyadicRational> {
        self.num.iter().map(|&x| DyadicRational::new(x, self.exp)).collect()
    }

    /// Numerators at scale 2^-e (e >= exp).
    pub fn at_scale(&self, e: u32) -> Result<Vec<i128>> {
        let k = e.checked_sub(self.exp).ok_or(Error::InvalidParameter("scale below vector exponent".into()))?;
        self.num.iter().map(|&x| x.checked_mul(1i128 << k).ok_or(Error::Overflow("dyadic vector scaling"))).collect()
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        let e = self.exp.max(o.exp);
        let (a, b) = (self.at_scale(e)?, o.at_scale(e)?);
        let num = a
            .iter()
            .zip(&b)
            .map(|(x, y)| x.checked_add(*y).ok_or(Error::Overflow("dyadic vector sum")))
            .collect::<Result<_>>()?;
        Ok(DyadicVector::new(num, e))
    }

    pub fn neg(&self) -> Self {
        DyadicVector { num: self.num.iter().map(|x| -x).collect(), exp: self.exp }
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.add(&o.neg())
    }

    pub fn norm(&self) -> DyadicRational {
        DyadicRational::new(self.num.iter().map(|x| x * x).sum(), 2 * self.exp)
    }

    /// Concatenation of blocks.
    pub fn concat(blocks: &[DyadicVector]) -> Result<Self> {
        let e = blocks.iter().map(|b| b.exp).max().unwrap_or(0);
        let mut num = Vec::new();
        for b in blocks {
            num.extend(b.at_scale(e)?);
        }
        Ok(DyadicVector::new(num, e))
    }
}

/// Basis of the lattice generated by dyadic vectors, via Hermite reduction
/// of the integer numerators at a common scale.
pub fn lattice_from_generators(gens: &[DyadicVector]) -> Result<DyadicLattice> {
    let n = gens.first().map(|g| g.len()).ok_or_else(|| Error::Degenerate("no generators".into()))?;
    if gens.iter().any(|g| g.len() != n) {
        return Err(Error::InvalidParameter("generators of unequal length".into()));
    }
    let e = gens.iter().map(|g| g.exp()).max().unwrap_or(0);
    let rows = gens.iter().map(|g| g.at_scale(e)).collect::<Result<Vec<_>>>()?;
    let h = hnf(n, rows.iter().map(|r| r.as_slice()))?;
    DyadicLattice::from_basis(h, e)
}

fn lift(word: &[crate::algebra::FieldElem], scale: i128) -> Vec<i128> {
    word.iter().map(|c| c.0 as i128 * scale).collect()
}

fn require_binary(q: u32) -> Result<()> {
    if q != 2 {
        return Err(Error::FieldMismatch { expected: 2, found: q });
    }
    Ok(())
}

/// Construction A: (2Z)^n plus the 0/1 lifts of a binary code.
pub fn construction_a(code: &LinearCode) -> Result<DyadicLattice> {
    require_binary(code.q())?;
    let n = code.n();
    let mut rows: Vec<Vec<i128>> = (0..n).map(|i| (0..n).map(|j| 2 * (i == j) as i128).collect()).collect();
    rows.extend(code.generator().row_vecs().iter().map(|r| lift(r, 1)));
    let h = hnf(n, rows.iter().map(|r| r.as_slice()))?;
    DyadicLattice::from_basis(h, 0)
}

/// Generators of Construction D at scale 2^-(a-1): 2^a e_i and
/// 2^{a-i} c_j for the rows c_j first added at level i.
fn construction_d_generators(chain: &NestedCodeChain) -> (Vec<Vec<i128>>, u32) {
    let n = chain.n();
    let a = chain.depth();
    let top = 1i128 << a.max(1);
    let mut rows: Vec<Vec<i128>> = (0..n).map(|i| (0..n).map(|j| top * (i == j) as i128).collect()).collect();
    let basis = chain.basis().row_vecs();
    for i in 1..=a {
        for j in chain.level_rows(i) {
            rows.push(lift(&basis[j], 1i128 << (a.max(1) - i)));
        }
    }
    (rows, a.max(1) as u32 - 1)
}

/// Construction D on a binary chain with distance floors d_i >= 4^i: the
/// lattice generated by (2Z)^n and c_j 2^{1-i} for the joint-basis rows
/// c_j of level i. Its minimum norm is 4.
pub fn construction_d(chain: &NestedCodeChain) -> Result<DyadicLattice> {
    require_binary(chain.q())?;
    for (i, &d) in chain.distances().iter().enumerate().skip(1) {
        if (d as u128) < 4u128.pow(i as u32) {
            return Err(Error::Precondition(format!("level {i} distance {d} is below 4^{i}")));
        }
    }
    let report = chain.verify()?;
    if !report.passed {
        return Err(Error::Precondition("chain does not verify".into()));
    }
    construction_d_unchecked(chain)
}

/// Construction D without re-certifying the chain.
pub fn construction_d_unchecked(chain: &NestedCodeChain) -> Result<DyadicLattice> {
    require_binary(chain.q())?;
    let (rows, exp) = construction_d_generators(chain);
    let h = hnf(chain.n(), rows.iter().map(|r| r.as_slice()))?;
    DyadicLattice::from_basis(h, exp)
}

/// The lattice vector of Construction D attached to a level-i codeword:
/// the 0/1 lift scaled by 2^{1-i}, as a dyadic vector.
pub fn construction_d_lift(word: &[crate::algebra::FieldElem], level: usize) -> DyadicVector {
    DyadicVector::new(lift(word, 1), level as u32 - 1)
}

/// Integer coordinates of a dyadic vector in a basis-form lattice, if it is
/// a lattice vector.
pub fn lattice_coordinates(lat: &DyadicLattice, v: &DyadicVector) -> Result<Option<Vec<i128>>> {
    let b = lat.basis().ok_or_else(|| Error::InvalidParameter("lattice has no basis".into()))?;
    let e = lat.exp().max(v.exp());
    let be = b.scale(1i128 << (e - lat.exp()))?;
    let ve = v.at_scale(e)?;
    let Some(sol) = be.solve_left(&ve) else { return Ok(None) };
    if sol.iter().all(|x| x.is_integer()) {
        Ok(Some(sol.iter().map(|x| crate::algebra::intmat::big_to_i128(&x.to_integer())).collect::<Result<_>>()?))
    } else {
        Ok(None)
    }
}

/// Whether `v` lies in the lattice.
pub fn contains(lat: &DyadicLattice, v: &DyadicVector) -> Result<bool> {
    let b = lat.basis().ok_or_else(|| Error::InvalidParameter("lattice has no basis".into()))?;
    let e = lat.exp().max(v.exp());
    let h = hnf(b.cols(), b.scale(1i128 << (e - lat.exp()))?.row_vecs().iter().map(|r| r.as_slice()))?;
    crate::algebra::intmat::hnf_contains(&h, &v.at_scale(e)?)
}

/// Block-diagonal matrix with the given square blocks.
pub(crate) fn block_diag(blocks: &[&IntMatrix]) -> IntMatrix {
    let n: usize = blocks.iter().map(|b| b.rows()).sum();
    let mut out = IntMatrix::zeros(n, n);
    let mut off = 0;
    for b in blocks {
        for i in 0..b.rows() {
            for j in 0..b.cols() {
                out[(off + i, off + j)] = b[(i, j)];
            }
        }
        off += b.rows();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::{chain_complete, extended_hamming_8, LinearCode};
    use crate::lattices::{shortest_vectors, EnumOptions};
    use num_rational::BigRational;
    use std::sync::Arc;

    fn kiss(l: &DyadicLattice) -> (DyadicRational, u128) {
        let s = shortest_vectors(l, &EnumOptions::default()).unwrap();
        (s.min_norm, s.count)
    }

    #[test]
    fn construction_a_examples() {
        let e8 = construction_a(&extended_hamming_8()).unwrap();
        assert_eq!(kiss(&e8), (DyadicRational::from_int(4), 240));
        let f2 = Arc::new(crate::algebra::FiniteField::of_order(2).unwrap());
        let full = construction_a(&LinearCode::full_space(f2.clone(), 5)).unwrap();
        assert_eq!(kiss(&full), (DyadicRational::from_int(1), 10));
        let zero = construction_a(&LinearCode::zero_code(f2, 5)).unwrap();
        assert_eq!(kiss(&zero), (DyadicRational::from_int(4), 10));
    }

    #[test]
    fn construction_d_e8() {
        let chain = chain_complete(&extended_hamming_8(), &[1, 4]).unwrap();
        let l = construction_d(&chain).unwrap();
        let (m, k) = kiss(&l);
        assert_eq!((m, k), (DyadicRational::from_int(4), 240));
        assert_eq!(l.center_density_sq(m), BigRational::new(1.into(), 256.into()));
        assert_eq!(l.det(), BigRational::from_integer(256.into()));
    }

    #[test]
    fn construction_d_rejects_weak_levels() {
        let code = crate::codes::even_weight(4).unwrap();
        let chain = chain_complete(&code, &[1, 2]).unwrap();
        assert!(matches!(construction_d(&chain), Err(Error::Precondition(_))));
    }

    #[test]
    fn dyadic_vector_ops() {
        let v = DyadicVector::new(vec![2, 4], 2);
        assert_eq!((v.numerators(), v.exp()), (&[1i128, 2][..], 1));
        let w = v.add(&DyadicVector::new(vec![1, 0], 2)).unwrap();
        assert_eq!(w.entries()[0], DyadicRational::new(3, 2));
        assert_eq!(v.norm(), DyadicRational::new(5, 2));
    }
}
