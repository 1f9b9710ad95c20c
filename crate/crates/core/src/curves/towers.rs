use rayon::prelude::*;

use crate::algebra::{FieldElem, FiniteField};
use crate::error::{Error, Result};

/// Cap on candidate evaluations during a tower enumeration.
pub const POINT_BUDGET: u64 = 1 << 26;

/// Affine point (x_1, .., x_k) of a tower over GF(q^2).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TowerPoint {
    pub coords: Vec<FieldElem>,
    pub supersingular: bool,
}

/// Result of a tower enumeration.
#[derive(Clone, Debug)]
pub struct TowerPoints {
    pub q: u32,
    pub level: usize,
    pub points: Vec<TowerPoint>,
    /// Informational lower bound on all rational points of the level.
    pub point_bound: u128,
}

impl TowerPoints {
    pub fn supersingular(&self) -> impl Iterator<Item = &TowerPoint> {
        self.points.iter().filter(|p| p.supersingular)
    }

    pub fn supersingular_count(&self) -> usize {
        self.supersingular().count()
    }
}

/// One CSV row per point: coordinate indices then the supersingular flag.
pub fn points_csv(points: &[TowerPoint]) -> String {
    let mut out = String::new();
    for p in points {
        for c in &p.coords {
            out.push_str(&c.index().to_string());
            out.push(',');
        }
        out.push(if p.supersingular { '1' } else { '0' });
        out.push('\n');
    }
    out
}

fn check_params(q: u32, level: usize) -> Result<FiniteField> {
    if level < 2 {
        return Err(Error::InvalidParameter(format!("level must be >= 2, got {level}")));
    }
    if crate::algebra::field::prime_power(q).is_none() {
        return Err(Error::InvalidParameter(format!("{q} is not a prime power")));
    }
    let q2 = q.checked_mul(q).ok_or(Error::Overflow("q^2"))?;
    FiniteField::of_order(q2)
}

/// Depth-first extension of partial points. `next(x)` lists the admissible
/// values of the following coordinate. Work is split on x_1.
fn enumerate<F>(f: &FiniteField, level: usize, next: F) -> Result<Vec<Vec<FieldElem>>>
where
    F: Fn(FieldElem) -> Vec<FieldElem> + Sync,
{
    let budget = std::sync::atomic::AtomicU64::new(0);
    let q2 = f.order() as u64;
    let per_x1: Vec<Result<Vec<Vec<FieldElem>>>> = f
        .elements()
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|x1| {
            let mut layer = vec![vec![x1]];
            for _ in 1..level {
                let spent = budget.fetch_add(q2 * layer.len() as u64, std::sync::atomic::Ordering::Relaxed);
                if spent > POINT_BUDGET {
                    return Err(Error::BudgetExceeded {
                        what: "tower point enumeration",
                        needed: spent as u128,
                        budget: POINT_BUDGET as u128,
                    });
                }
                let mut out = Vec::new();
                for p in layer {
                    for y in next(*p.last().expect("nonempty")) {
                        let mut np = p.clone();
                        np.push(y);
                        out.push(np);
                    }
                }
                layer = out;
            }
            Ok(layer)
        })
        .collect();
    let mut all = Vec::new();
    for r in per_x1 {
        all.extend(r?);
    }
    Ok(all)
}

/// Affine points of level `k` of the Elkies tower over GF(q^2):
/// x_{j+1}(x_{j+1}+1)^{q-1}(x_j+1)^{q-1} = x_j^q. A point is supersingular
/// when every coordinate satisfies x^{q+1} = 1 with x != -1. The excluded
/// root -1 has no successor in the tower; for even q it is the root 1.
pub fn elkies_points(q: u32, k: usize) -> Result<TowerPoints> {
    let f = check_params(q, k)?;
    let e = (q - 1) as u64;
    let minus_one = f.neg(FieldElem::ONE);
    let ss_roots: Vec<bool> =
        f.elements().map(|x| x != minus_one && f.pow(x, q as u64 + 1) == FieldElem::ONE).collect();
    let one = FieldElem::ONE;
    let all: Vec<FieldElem> = f.elements().collect();
    let raw = enumerate(&f, k, |x| {
        let lhs_factor = f.pow(f.add(x, one), e);
        let rhs = f.pow(x, q as u64);
        all.iter().copied().filter(|&y| f.mul(f.mul(y, f.pow(f.add(y, one), e)), lhs_factor) == rhs).collect()
    })?;
    let points = raw
        .into_iter()
        .map(|coords| {
            let supersingular = coords.iter().all(|c| ss_roots[c.index() as usize]);
            TowerPoint { coords, supersingular }
        })
        .collect();
    let bound = (q as u128).pow(k as u32) + 4;
    Ok(TowerPoints { q, level: k, points, point_bound: bound })
}

/// Affine points of level `n` of the Garcia-Stichtenoth tower over GF(q^2):
/// x_{i+1}^q + x_{i+1} = x_i^q / (x_i^{q-1} + 1). Branches through a zero
/// denominator are dropped.
pub fn gs_points(q: u32, n: usize) -> Result<TowerPoints> {
    let f = check_params(q, n)?;
    let all: Vec<FieldElem> = f.elements().collect();
    let raw = enumerate(&f, n, |x| {
        let den = f.add(f.pow(x, (q - 1) as u64), FieldElem::ONE);
        let Some(rhs) = f.div(f.pow(x, q as u64), den) else {
            return Vec::new();
        };
        all.iter().copied().filter(|&y| f.add(f.pow(y, q as u64), y) == rhs).collect()
    })?;
    let points = raw.into_iter().map(|coords| TowerPoint { coords, supersingular: false }).collect();
    let bound = (q as u128 - 1) * (q as u128).pow(n as u32);
    Ok(TowerPoints { q, level: n, points, point_bound: bound })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_elkies(q: u32, k: usize) -> usize {
        let f = FiniteField::of_order(q * q).unwrap();
        let e = (q - 1) as u64;
        let mut count = 0;
        let total = (q * q).pow(k as u32);
        for mut idx in 0..total {
            let mut xs = Vec::new();
            for _ in 0..k {
                xs.push(FieldElem(idx % (q * q)));
                idx /= q * q;
            }
            let ok = xs.windows(2).all(|w| {
                f.mul(f.mul(w[1], f.pow(f.add(w[1], FieldElem::ONE), e)), f.pow(f.add(w[0], FieldElem::ONE), e))
                    == f.pow(w[0], q as u64)
            });
            if ok {
                count += 1;
            }
        }
        count
    }

    #[test]
    fn supersingular_counts() {
        for (q, k) in [(2, 2), (2, 3), (2, 4), (3, 2), (3, 3), (4, 2), (5, 2)] {
            let pts = elkies_points(q, k).unwrap();
            assert_eq!(pts.supersingular_count() as u64, (q as u64).pow(k as u32), "q={q} k={k}");
        }
    }

    #[test]
    fn matches_brute_force() {
        for (q, k) in [(2, 2), (2, 3), (3, 2), (4, 2)] {
            assert_eq!(elkies_points(q, k).unwrap().points.len(), brute_elkies(q, k));
        }
    }

    #[test]
    fn supersingular_coordinates_are_cyclotomic() {
        let pts = elkies_points(3, 3).unwrap();
        let f = FiniteField::of_order(9).unwrap();
        for p in pts.supersingular() {
            for &c in &p.coords {
                assert_eq!(f.pow(c, 4), FieldElem::ONE);
                assert_ne!(c, f.neg(FieldElem::ONE));
            }
        }
    }

    #[test]
    fn gs_points_satisfy_relation() {
        for (q, n) in [(2, 2), (2, 4), (3, 2), (3, 3)] {
            let f = FiniteField::of_order(q * q).unwrap();
            let pts = gs_points(q, n).unwrap();
            assert!(!pts.points.is_empty());
            for p in &pts.points {
                for w in p.coords.windows(2) {
                    let den = f.add(f.pow(w[0], (q - 1) as u64), FieldElem::ONE);
                    let lhs = f.mul(f.add(f.pow(w[1], q as u64), w[1]), den);
                    assert_eq!(lhs, f.pow(w[0], q as u64));
                    assert!(!den.is_zero());
                }
            }
        }
        assert_eq!(gs_points(3, 2).unwrap().point_bound, 18);
    }

    #[test]
    fn csv_rows() {
        let pts = elkies_points(2, 2).unwrap();
        let csv = points_csv(&pts.points);
        assert_eq!(csv.lines().count(), pts.points.len());
        assert!(csv.lines().all(|l| l.split(',').count() == 3));
    }

    #[test]
    fn rejects_bad_params() {
        assert!(elkies_points(6, 2).is_err());
        assert!(gs_points(2, 1).is_err());
    }
}
