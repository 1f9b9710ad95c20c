//! Nested code chains C_0 ⊇ C_1 ⊇ ... ⊇ C_a with a joint basis.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::sync::Arc;

use itertools::Itertools;
use serde::Serialize;

use crate::algebra::{FieldElem, FiniteField, Matrix};
use crate::codes::families::rs_code;
use crate::codes::linear::{binomial, data_lines, parse_nums, LinearCode, ENUMERATION_BUDGET};
use crate::error::{Error, Result};

/// A chain of codes sharing one basis: the first `dims[i]` rows of `basis`
/// span C_i, and each C_i is claimed to have minimum distance `distances[i]`.
#[derive(Clone, Debug)]
pub struct NestedCodeChain {
    field: Arc<FiniteField>,
    basis: Matrix,
    dims: Vec<usize>,
    distances: Vec<usize>,
    codes: Vec<LinearCode>,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct LevelReport {
    pub level: usize,
    pub k: usize,
    pub claimed_distance: usize,
    pub contains_next: bool,
    pub distance_certified: bool,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct ChainReport {
    pub q: u32,
    pub n: usize,
    pub levels: Vec<LevelReport>,
    pub passed: bool,
}

impl NestedCodeChain {
    pub fn new(field: Arc<FiniteField>, basis: Matrix, dims: Vec<usize>, distances: Vec<usize>) -> Result<Self> {
        if dims.is_empty() || dims.len() != distances.len() {
            return Err(Error::InvalidParameter("dims and distances must be nonempty and of equal length".into()));
        }
        if dims.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidParameter("dimensions must be non-increasing".into()));
        }
        if distances.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::InvalidParameter("distance profile must be non-decreasing".into()));
        }
        if dims[0] != basis.rows() {
            return Err(Error::InvalidParameter(format!(
                "top dimension {} differs from basis size {}",
                dims[0],
                basis.rows()
            )));
        }
        if basis.rows() > 0 && basis.rank(&field) != basis.rows() {
            return Err(Error::Degenerate("joint basis is not linearly independent".into()));
        }
        let n = basis.cols();
        let codes = dims
            .iter()
            .map(|&k| {
                if k == 0 {
                    Ok(LinearCode::zero_code(field.clone(), n))
                } else {
                    LinearCode::new(field.clone(), Matrix::from_rows(basis.row_vecs()[..k].to_vec()))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(NestedCodeChain { field, basis, dims, distances, codes })
    }

    pub fn field(&self) -> &Arc<FiniteField> {
        &self.field
    }

    pub fn q(&self) -> u32 {
        self.field.order()
    }

    pub fn n(&self) -> usize {
        self.basis.cols()
    }

    /// Index of the deepest code, a.
    pub fn depth(&self) -> usize {
        self.dims.len() - 1
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn distances(&self) -> &[usize] {
        &self.distances
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn code(&self, i: usize) -> &LinearCode {
        &self.codes[i]
    }

    /// K = k_1 + ... + k_a.
    pub fn k_sum(&self) -> usize {
        self.dims[1..].iter().sum()
    }

    /// Joint-basis rows first added at level i: indices k_{i+1} .. k_i.
    pub fn level_rows(&self, i: usize) -> std::ops::Range<usize> {
        let lo = self.dims.get(i + 1).copied().unwrap_or(0);
        lo..self.dims[i]
    }

    /// Re-checks inclusions by row-space membership and every distance
    /// floor exactly.
    pub fn verify(&self) -> Result<ChainReport> {
        let mut levels = Vec::with_capacity(self.dims.len());
        for i in 0..self.dims.len() {
            let contains_next = self.codes.get(i + 1).is_none_or(|next| self.codes[i].contains_code(next));
            let distance_certified = self.codes[i].certify_min_distance(self.distances[i])?;
            levels.push(LevelReport {
                level: i,
                k: self.dims[i],
                claimed_distance: self.distances[i],
                contains_next,
                distance_certified,
            });
        }
        let passed = levels.iter().all(|l| l.contains_next && l.distance_certified);
        Ok(ChainReport { q: self.q(), n: self.n(), levels, passed })
    }

    /// Text form:
    /// ```text
    /// chain q n
    /// dims k_0 .. k_a
    /// dist d_0 .. d_a
    /// <k_0 rows of n symbols>
    /// ```
    pub fn to_text(&self) -> String {
        let mut s = format!("chain {} {}\n", self.q(), self.n());
        let _ = writeln!(s, "dims {}", self.dims.iter().join(" "));
        let _ = writeln!(s, "dist {}", self.distances.iter().join(" "));
        for r in self.basis.row_vecs() {
            let _ = writeln!(s, "{}", r.iter().map(|c| c.0).join(" "));
        }
        s
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = data_lines(text);
        let mut tagged = |tag: &str| -> Result<(usize, Vec<u64>)> {
            let (ln, l) = lines.next().ok_or_else(|| Error::parse(0, format!("missing `{tag}` line")))?;
            let rest = l.strip_prefix(tag).ok_or_else(|| Error::parse(ln, format!("expected `{tag}`")))?;
            Ok((ln, parse_nums(ln, rest)?))
        };
        let (ln, head) = tagged("chain")?;
        let [q, n] = head[..] else {
            return Err(Error::parse(ln, "header must be `chain q n`"));
        };
        let (_, dims) = tagged("dims")?;
        let (_, dist) = tagged("dist")?;
        let field = Arc::new(FiniteField::of_order(q as u32)?);
        let k0 = *dims.first().ok_or_else(|| Error::parse(ln, "empty dims"))? as usize;
        let mut rows = Vec::with_capacity(k0);
        for _ in 0..k0 {
            let (ln, l) = lines.next().ok_or_else(|| Error::parse(ln, "too few basis rows"))?;
            let r = parse_nums::<u32>(ln, l)?;
            if r.len() != n as usize {
                return Err(Error::parse(ln, format!("expected {n} symbols, found {}", r.len())));
            }
            rows.push(r.into_iter().map(|x| field.elem(x)).collect::<Result<Vec<_>>>()?);
        }
        let basis = if rows.is_empty() { Matrix::zeros(0, n as usize) } else { Matrix::from_rows(rows) };
        Self::new(
            field,
            basis,
            dims.into_iter().map(|x| x as usize).collect(),
            dist.into_iter().map(|x| x as usize).collect(),
        )
    }
}

/// Nested Reed-Muller chain GF(2)^{2^m} ⊇ RM(r_1, m) ⊇ ... ⊇ RM(r_a, m)
/// for strictly decreasing orders r_i, with distances 2^{m - r_i}. The
/// joint basis is the monomial basis ordered by degree.
pub fn reed_muller_chain(m: usize, orders: &[usize]) -> Result<NestedCodeChain> {
    if orders.windows(2).any(|w| w[0] <= w[1]) || orders.first().is_some_and(|&r| r >= m) {
        return Err(Error::InvalidParameter("orders must decrease strictly and stay below m".into()));
    }
    let full = crate::codes::families::reed_muller(m, m)?;
    let mut dims = vec![1usize << m];
    let mut distances = vec![1usize];
    for &r in orders {
        dims.push((0..=r).map(|i| binomial(m as u64, i as u64) as usize).sum());
        distances.push(1 << (m - r));
    }
    NestedCodeChain::new(full.field().clone(), full.generator().clone(), dims, distances)
}

/// Nested Reed-Solomon chain RS(a_max) ⊇ ... ⊇ RS(0) over GF(q), with
/// monomial joint basis 1, x, ..., x^{a_max}.
pub fn rs_nested(q: u32, a_max: usize) -> Result<NestedCodeChain> {
    let field = Arc::new(FiniteField::of_order(q)?);
    let top = rs_code(field.clone(), a_max)?;
    let dims = (0..=a_max).map(|i| a_max - i + 1).collect();
    let distances = (0..=a_max).map(|i| q as usize - a_max + i).collect();
    NestedCodeChain::new(field, top.generator().clone(), dims, distances)
}

/// Two-level chain GF(q)^n ⊇ C.
pub fn two_level(code: &LinearCode) -> Result<NestedCodeChain> {
    let d = code.min_distance()?;
    chain_complete(code, &[1, d])
}

/// Cost of the syndrome ball of radius d-1 around zero.
fn ball_size(n: usize, q: u32, d: usize) -> u128 {
    (0..d).map(|w| binomial(n as u64, w as u64) * ((q - 1) as u128).pow(w as u32)).sum()
}

/// Syndromes of all vectors of weight < d.
fn syndrome_ball(f: &FiniteField, h: &Matrix, d: usize) -> HashSet<Vec<FieldElem>> {
    let (r, n) = (h.rows(), h.cols());
    let q = f.order();
    let mut out = HashSet::new();
    for w in 0..d {
        for sup in (0..n).combinations(w) {
            let combos = (q as u64 - 1).pow(w as u32);
            for idx in 0..combos {
                let mut x = idx;
                let mut syn = vec![FieldElem::ZERO; r];
                for &c in &sup {
                    let v = FieldElem(1 + (x % (q as u64 - 1)) as u32);
                    x /= q as u64 - 1;
                    for (i, s) in syn.iter_mut().enumerate() {
                        *s = f.add(*s, f.mul(v, h[(i, c)]));
                    }
                }
                out.insert(syn);
            }
        }
    }
    out
}

fn syndrome(f: &FiniteField, h: &Matrix, v: &[FieldElem]) -> Vec<FieldElem> {
    (0..h.rows())
        .map(|i| v.iter().enumerate().fold(FieldElem::ZERO, |acc, (j, &x)| f.add(acc, f.mul(x, h[(i, j)]))))
        .collect()
}

/// Completes `top` to a chain with distance floors `profile = (1, d_1, .., d_a)`.
///
/// Working downwards from C_a = top, each C_i is C_{i+1} plus greedily
/// chosen weight-d_i vectors (scanned in lexicographic support order, with
/// all-one entries on the support) whose distance to the current code is at
/// least d_i. C_0 is the full space. `targets[i]`, when set, caps dim C_i.
pub fn chain_complete_with_targets(
    top: &LinearCode,
    profile: &[usize],
    targets: &[Option<usize>],
) -> Result<NestedCodeChain> {
    let a = profile
        .len()
        .checked_sub(1)
        .filter(|&a| a >= 1)
        .ok_or_else(|| Error::InvalidParameter("profile needs at least two entries".into()))?;
    if profile[0] != 1 {
        return Err(Error::InvalidParameter("d_0 must be 1 (C_0 is the full space)".into()));
    }
    if profile.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::InvalidParameter("distance profile must be non-decreasing".into()));
    }
    if !top.certify_min_distance(profile[a])? {
        return Err(Error::Precondition(format!("top code has distance below d_a = {}", profile[a])));
    }
    let f = top.field().clone();
    let n = top.n();
    let mut basis: Vec<Vec<FieldElem>> = top.generator().row_vecs();
    let mut dims = vec![0usize; a + 1];
    dims[a] = basis.len();
    for i in (1..a).rev() {
        let d = profile[i];
        let cap = targets.get(i).copied().flatten().unwrap_or(n);
        let mut current = LinearCode::from_spanning(f.clone(), n, &Matrix::from_rows(basis.clone()))
            .unwrap_or_else(|_| LinearCode::zero_code(f.clone(), n));
        // Coset enumeration is cheaper while the code is smaller than the
        // syndrome ball of radius d-1; afterwards the ball wins.
        let bsize = ball_size(n, f.order(), d);
        let ball_fits = bsize <= ENUMERATION_BUDGET as u128;
        let prefer_ball = |c: &LinearCode| {
            ball_fits && (bsize <= c.size().unwrap_or(u64::MAX) as u128 || !c.within_enumeration_budget())
        };
        let mut ball = prefer_ball(&current).then(|| syndrome_ball(&f, current.parity_check(), d));
        for sup in (0..n).combinations(d) {
            if basis.len() >= cap {
                break;
            }
            let mut c = vec![FieldElem::ZERO; n];
            for &j in &sup {
                c[j] = FieldElem::ONE;
            }
            let far = match &ball {
                Some(b) => !b.contains(&syndrome(&f, current.parity_check(), &c)),
                None => current.distance_to(&c)? >= d,
            };
            if far {
                basis.push(c);
                current = LinearCode::from_spanning(f.clone(), n, &Matrix::from_rows(basis.clone()))?;
                if ball.is_some() || prefer_ball(&current) {
                    ball = Some(syndrome_ball(&f, current.parity_check(), d));
                }
            }
        }
        dims[i] = basis.len();
    }
    for j in 0..n {
        let mut e = vec![FieldElem::ZERO; n];
        e[j] = FieldElem::ONE;
        let m = Matrix::from_rows(basis.clone());
        if !m.row_space_contains(&f, &e) {
            basis.push(e);
        }
    }
    dims[0] = basis.len();
    NestedCodeChain::new(f, Matrix::from_rows(basis), dims, profile.to_vec())
}

pub fn chain_complete(top: &LinearCode, profile: &[usize]) -> Result<NestedCodeChain> {
    chain_complete_with_targets(top, profile, &[])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::families::{even_weight, extended_hamming_8, reed_muller};

    #[test]
    fn rs_chain_verifies() {
        let c = rs_nested(8, 4).unwrap();
        assert_eq!(c.dims(), &[5, 4, 3, 2, 1]);
        assert_eq!(c.distances(), &[4, 5, 6, 7, 8]);
        assert!(c.verify().unwrap().passed);
        assert!(rs_nested(4, 4).is_err());
    }

    #[test]
    fn e8_two_level_chain() {
        let c = chain_complete(&extended_hamming_8(), &[1, 4]).unwrap();
        assert_eq!(c.dims(), &[8, 4]);
        assert!(c.verify().unwrap().passed);
        assert_eq!(c.k_sum(), 4);
    }

    #[test]
    fn even_weight_chain() {
        let c = chain_complete(&even_weight(6).unwrap(), &[1, 2]).unwrap();
        assert_eq!(c.dims(), &[6, 5]);
        assert!(c.verify().unwrap().passed);
    }

    #[test]
    fn rejects_weak_top() {
        assert!(chain_complete(&even_weight(6).unwrap(), &[1, 4]).is_err());
    }

    #[test]
    fn rm_three_level_completion() {
        let top = reed_muller(1, 5).unwrap();
        let c = chain_complete(&top, &[1, 4, 16]).unwrap();
        assert_eq!(c.dims()[0], 32);
        assert_eq!(c.dims()[2], 6);
        assert!(c.dims()[1] > 6);
        let rep = c.verify().unwrap();
        assert!(rep.passed, "{rep:?}");
    }

    #[test]
    fn text_roundtrip() {
        let c = chain_complete(&extended_hamming_8(), &[1, 4]).unwrap();
        let back = NestedCodeChain::parse(&c.to_text()).unwrap();
        assert_eq!(back.basis(), c.basis());
        assert_eq!(back.dims(), c.dims());
    }

    #[test]
    fn reed_muller_chain_verifies() {
        let c = reed_muller_chain(5, &[3, 1]).unwrap();
        assert_eq!(c.dims(), &[32, 26, 6]);
        assert_eq!(c.distances(), &[1, 4, 16]);
        assert!(c.verify().unwrap().passed);
        assert!(reed_muller_chain(5, &[1, 3]).is_err());
    }
}
