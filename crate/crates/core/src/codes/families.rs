//! Concrete code families: Reed-Solomon, evaluation (AG) codes, Reed-Muller,
//! and the binary simplex concatenation.

use std::sync::Arc;

use crate::algebra::{FieldElem, FiniteField, Matrix};
use crate::codes::linear::LinearCode;
use crate::error::{Error, Result};

/// Reed-Solomon code of length q: evaluations of polynomials of degree
/// `<= a` at every field element, in index order.
pub fn rs_code(field: Arc<FiniteField>, a: usize) -> Result<LinearCode> {
    let q = field.order() as usize;
    if a >= q {
        return Err(Error::InvalidParameter(format!(
            "degree bound {a} must be below q = {q} for the evaluation map to be injective"
        )));
    }
    let rows: Vec<Vec<FieldElem>> =
        (0..=a).map(|j| field.elements().map(|x| field.pow(x, j as u64)).collect()).collect();
    LinearCode::new(field, Matrix::from_rows(rows))
}

/// The [8,4,4] extended Hamming code.
pub fn extended_hamming_8() -> LinearCode {
    reed_muller(1, 3).expect("RM(1,3) is well defined")
}

/// Binary Reed-Muller code RM(r, m). Rows are the monomials of degree at
/// most r, ordered by degree and then lexicographically, evaluated at the
/// points of GF(2)^m in index order (bit j of the index is x_j).
pub fn reed_muller(r: usize, m: usize) -> Result<LinearCode> {
    if m > 16 || r > m {
        return Err(Error::InvalidParameter(format!("RM({r},{m}) is out of range")));
    }
    let field = Arc::new(FiniteField::of_order(2)?);
    let n = 1usize << m;
    let mut rows = Vec::new();
    for deg in 0..=r {
        for vars in itertools::Itertools::combinations(0..m, deg) {
            let mask: usize = vars.iter().map(|&v| 1 << v).sum();
            rows.push((0..n).map(|x| FieldElem((x & mask == mask) as u32)).collect());
        }
    }
    LinearCode::new(field, Matrix::from_rows(rows))
}

/// The extended binary Golay code [24,12,8]: the cyclic code generated by
/// x^11+x^10+x^6+x^5+x^4+x^2+1 followed by an overall parity bit.
pub fn extended_golay() -> LinearCode {
    const G: [u32; 12] = [1, 0, 1, 0, 1, 1, 1, 0, 0, 0, 1, 1];
    let field = Arc::new(FiniteField::of_order(2).expect("GF(2)"));
    let rows: Vec<Vec<FieldElem>> = (0..12)
        .map(|shift| {
            let mut r = vec![FieldElem::ZERO; 24];
            for (i, &c) in G.iter().enumerate() {
                r[shift + i] = FieldElem(c);
            }
            r[23] = FieldElem(G.iter().sum::<u32>() % 2);
            r
        })
        .collect();
    LinearCode::new(field, Matrix::from_rows(rows)).expect("cyclic shifts are independent")
}

/// The binary even-weight code of length n.
pub fn even_weight(n: usize) -> Result<LinearCode> {
    let field = Arc::new(FiniteField::of_order(2)?);
    let rows: Vec<Vec<FieldElem>> =
        (0..n - 1).map(|i| (0..n).map(|j| FieldElem((j == i || j == n - 1) as u32)).collect()).collect();
    LinearCode::new(field, Matrix::from_rows(rows))
}

/// The [n, n-1, 2] single parity-check code over any field.
pub fn parity_check_code(field: Arc<FiniteField>, n: usize) -> Result<LinearCode> {
    let minus_one = field.neg(FieldElem::ONE);
    let rows: Vec<Vec<FieldElem>> = (0..n - 1)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if j == i {
                        FieldElem::ONE
                    } else if j == n - 1 {
                        minus_one
                    } else {
                        FieldElem::ZERO
                    }
                })
                .collect()
        })
        .collect();
    LinearCode::new(field, Matrix::from_rows(rows))
}

/// Evaluation data for an AG code: points on a curve, a monomial function
/// basis, the divisor degree and the curve genus.
#[derive(Clone, Debug)]
pub struct EvaluationData {
    pub field: Arc<FiniteField>,
    /// Affine points, one coordinate vector each.
    pub points: Vec<Vec<FieldElem>>,
    /// Monomial exponents, one entry per point coordinate.
    pub functions: Vec<Vec<u32>>,
    pub a: usize,
    pub genus: usize,
}

impl EvaluationData {
    pub fn evaluate(&self, f: &[u32], p: &[FieldElem]) -> FieldElem {
        f.iter().zip(p).fold(FieldElem::ONE, |acc, (&e, &x)| self.field.mul(acc, self.field.pow(x, e as u64)))
    }

    pub fn evaluation_matrix(&self) -> Matrix {
        Matrix::from_rows(
            self.functions.iter().map(|f| self.points.iter().map(|p| self.evaluate(f, p)).collect()).collect(),
        )
    }

    /// Genus-zero data: all of GF(q) as points and the basis 1, x, ..., x^a.
    pub fn projective_line(field: Arc<FiniteField>, a: usize) -> Self {
        let points = field.elements().map(|x| vec![x]).collect();
        EvaluationData { field, points, functions: (0..=a as u32).map(|j| vec![j]).collect(), a, genus: 0 }
    }

    /// The genus-one curve y^2 + y = x^3 over GF(4) with its 8 affine points
    /// and the one-point basis {x^i y^j : 2i + 3j <= a, j <= 1}.
    pub fn hermitian_gf4(a: usize) -> Result<Self> {
        let field = Arc::new(FiniteField::of_order(4)?);
        let f = &field;
        let mut points = Vec::new();
        for x in f.elements() {
            for y in f.elements() {
                if f.add(f.mul(y, y), y) == f.pow(x, 3) {
                    points.push(vec![x, y]);
                }
            }
        }
        let mut functions: Vec<(usize, Vec<u32>)> = Vec::new();
        for j in 0..=1usize {
            for i in 0..=a / 2 {
                if 2 * i + 3 * j <= a {
                    functions.push((2 * i + 3 * j, vec![i as u32, j as u32]));
                }
            }
        }
        functions.sort();
        Ok(EvaluationData { field, points, functions: functions.into_iter().map(|(_, e)| e).collect(), a, genus: 1 })
    }
}

/// The evaluation code of `ev`. Its dimension is checked against a - g + 1
/// and, when enumeration is affordable, its distance against N - a.
pub fn ag_code(ev: &EvaluationData) -> Result<LinearCode> {
    let n = ev.points.len();
    if ev.a >= n {
        return Err(Error::Precondition(format!("divisor degree {} must be below N = {n}", ev.a)));
    }
    let m = ev.evaluation_matrix();
    let rank = if m.rows() == 0 { 0 } else { m.rank(&ev.field) };
    let required = ev.a as i64 - ev.genus as i64 + 1;
    if (rank as i64) < required {
        return Err(Error::InvalidFunctionBasis { rank, required });
    }
    let code = LinearCode::from_spanning(ev.field.clone(), n, &m)?;
    if code.within_enumeration_budget() && code.k() > 0 {
        let d = code.min_distance()?;
        if d < n - ev.a {
            return Err(Error::Degenerate(format!("distance {d} is below N - a = {}", n - ev.a)));
        }
    }
    Ok(code)
}

/// phi: GF(4^s) -> C_0, the binary [q, 2s, q/2] augmented simplex code.
/// Position j < q - 1 carries the parity of (j + 1) & alpha, the last
/// position is the appended zero.
pub fn simplex_phi(q: u32, alpha: FieldElem) -> Vec<FieldElem> {
    (0..q).map(|j| if j + 1 == q { FieldElem::ZERO } else { FieldElem(((j + 1) & alpha.0).count_ones() & 1) }).collect()
}

/// The augmented simplex code C_0 for q = 2^{2s}, or the binary image of an
/// outer code over GF(q) under coordinatewise phi.
pub fn simplex_concat(s: u32, inner_only: bool, outer: Option<&LinearCode>) -> Result<LinearCode> {
    if s == 0 || 2 * s > 16 {
        return Err(Error::InvalidParameter(format!("half-exponent {s} out of range")));
    }
    let q = 1u32 << (2 * s);
    let binary = Arc::new(FiniteField::of_order(2)?);
    match outer {
        Some(outer) if !inner_only => {
            if outer.q() != q {
                return Err(Error::FieldMismatch { expected: q, found: outer.q() });
            }
            let f = outer.field();
            let mut rows = Vec::with_capacity(outer.k() * 2 * s as usize);
            for i in 0..outer.k() {
                for t in 0..2 * s {
                    let w = f.basis_elem(t);
                    let word: Vec<FieldElem> = outer.generator().row(i).iter().map(|&c| f.mul(c, w)).collect();
                    rows.push(binary_image(q, &word));
                }
            }
            LinearCode::new(binary, Matrix::from_rows(rows))
        }
        _ => {
            let rows: Vec<Vec<FieldElem>> = (0..2 * s).map(|t| simplex_phi(q, FieldElem(1 << t))).collect();
            LinearCode::new(binary, Matrix::from_rows(rows))
        }
    }
}

/// Coordinatewise phi image of a word over GF(q).
pub fn binary_image(q: u32, word: &[FieldElem]) -> Vec<FieldElem> {
    word.iter().flat_map(|&c| simplex_phi(q, c)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(q: u32) -> Arc<FiniteField> {
        Arc::new(FiniteField::of_order(q).unwrap())
    }

    #[test]
    fn rs_parameters() {
        let c = rs_code(gf(4), 1).unwrap();
        assert_eq!((c.n(), c.k(), c.min_distance().unwrap()), (4, 2, 3));
        let r = rs_code(gf(4), 0).unwrap();
        assert_eq!((r.n(), r.k(), r.min_distance().unwrap()), (4, 1, 4));
        assert!(rs_code(gf(4), 4).is_err());
    }

    #[test]
    fn rs_8_4_light_vectors() {
        let c = rs_code(gf(8), 4).unwrap();
        assert_eq!(c.min_distance().unwrap(), 4);
        assert_eq!(c.weight_distribution().unwrap()[4], 7 * 70);
    }

    #[test]
    fn projective_line_reproduces_rs() {
        let ev = EvaluationData::projective_line(gf(8), 3);
        let c = ag_code(&ev).unwrap();
        assert!(c.same_code(&rs_code(gf(8), 3).unwrap()));
    }

    #[test]
    fn hermitian_codes() {
        let ev = EvaluationData::hermitian_gf4(3).unwrap();
        assert_eq!(ev.points.len(), 8);
        let c = ag_code(&ev).unwrap();
        assert_eq!((c.n(), c.k()), (8, 3));
        assert!(c.min_distance().unwrap() >= 5);
        let c7 = ag_code(&EvaluationData::hermitian_gf4(7).unwrap()).unwrap();
        assert!(c7.k() >= 7);
    }

    #[test]
    fn invalid_basis_is_rejected() {
        let mut ev = EvaluationData::hermitian_gf4(4).unwrap();
        ev.functions.truncate(2);
        assert!(matches!(ag_code(&ev), Err(Error::InvalidFunctionBasis { .. })));
    }

    #[test]
    fn simplex_inner_weights() {
        for (s, n) in [(1u32, 4usize), (2, 16), (3, 64)] {
            let c = simplex_concat(s, true, None).unwrap();
            assert_eq!((c.n(), c.k()), (n, 2 * s as usize));
            let w = c.weight_distribution().unwrap();
            assert_eq!(w[n / 2], (1 << (2 * s)) - 1);
        }
    }

    #[test]
    fn concatenation_weight_law() {
        for s in [1u32, 2] {
            let q = 1 << (2 * s);
            let outer = rs_code(gf(q), 1).unwrap();
            let bin = simplex_concat(s, false, Some(&outer)).unwrap();
            assert_eq!(bin.n(), (q * q) as usize);
            let wo = outer.weight_distribution().unwrap();
            let wb = bin.weight_distribution().unwrap();
            for (w, &c) in wo.iter().enumerate() {
                assert_eq!(wb[w * q as usize / 2], c);
            }
        }
    }

    #[test]
    fn field_mismatch() {
        let outer = rs_code(gf(8), 1).unwrap();
        assert!(matches!(simplex_concat(1, false, Some(&outer)), Err(Error::FieldMismatch { .. })));
    }

    #[test]
    fn reed_muller_parameters() {
        let rm = reed_muller(1, 5).unwrap();
        assert_eq!((rm.n(), rm.k(), rm.min_distance().unwrap()), (32, 6, 16));
        let rm3 = reed_muller(3, 5).unwrap();
        assert_eq!(rm3.k(), 26);
        assert!(rm3.contains_code(&rm));
        assert!(rm3.certify_min_distance(4).unwrap());
        assert_eq!(rm3.min_weight_by_supports().unwrap().0, 4);
    }

    #[test]
    fn golay_weights() {
        let w = extended_golay().weight_distribution().unwrap().to_vec();
        assert_eq!((w[0], w[8], w[12], w[16], w[24]), (1, 759, 2576, 759, 1));
        assert_eq!(w.iter().sum::<u64>(), 4096);
    }
}
