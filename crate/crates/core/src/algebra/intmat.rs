//! Integer matrices: exact determinants, Hermite normal form of a row
//! lattice, membership and rational solves.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i128>,
}

fn ck(x: Option<i128>) -> Result<i128> {
    x.ok_or(Error::Overflow("integer matrix"))
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1;
        }
        m
    }

    pub fn scalar(n: usize, c: i128) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = c;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i128>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        IntMatrix { rows: rows.len(), cols, data: rows.iter().flatten().copied().collect() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[i128] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<i128>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn checked_mul(&self, o: &Self) -> Result<Self> {
        assert_eq!(self.cols, o.rows, "shape mismatch");
        let mut out = Self::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0 {
                    continue;
                }
                for j in 0..o.cols {
                    let p = ck(a.checked_mul(o[(k, j)]))?;
                    out[(i, j)] = ck(out[(i, j)].checked_add(p))?;
                }
            }
        }
        Ok(out)
    }

    /// Row vector times matrix.
    pub fn vec_mul(&self, v: &[i128]) -> Result<Vec<i128>> {
        assert_eq!(v.len(), self.rows);
        let mut out = vec![0i128; self.cols];
        for (i, &a) in v.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, o) in out.iter_mut().enumerate() {
                *o = ck(o.checked_add(ck(a.checked_mul(self[(i, j)]))?))?;
            }
        }
        Ok(out)
    }

    /// B Bᵀ.
    pub fn gram(&self) -> Result<Self> {
        self.checked_mul(&self.transpose())
    }

    pub fn scale(&self, c: i128) -> Result<Self> {
        Ok(IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&x| ck(x.checked_mul(c))).collect::<Result<_>>()?,
        })
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> BigInt {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut m: Vec<Vec<BigInt>> = (0..n).map(|i| self.row(i).iter().map(|&x| BigInt::from(x)).collect()).collect();
        let mut sign = 1i32;
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if m[k][k].is_zero() {
                match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                    Some(p) => {
                        m.swap(k, p);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                    m[i][j] = v / &prev;
                }
            }
            prev = m[k][k].clone();
        }
        let d = m[n - 1][n - 1].clone();
        if sign < 0 {
            -d
        } else {
            d
        }
    }

    /// Inverse over the rationals, `None` if singular.
    pub fn inverse_rational(&self) -> Option<Vec<Vec<BigRational>>> {
        assert!(self.is_square());
        let n = self.rows;
        let mut a: Vec<Vec<BigRational>> = (0..n)
            .map(|i| {
                let mut r: Vec<BigRational> =
                    self.row(i).iter().map(|&x| BigRational::from_integer(x.into())).collect();
                r.extend((0..n).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }));
                r
            })
            .collect();
        for c in 0..n {
            let p = (c..n).find(|&i| !a[i][c].is_zero())?;
            a.swap(c, p);
            let inv = a[c][c].recip();
            for x in a[c].iter_mut() {
                *x = &*x * &inv;
            }
            for i in 0..n {
                if i == c || a[i][c].is_zero() {
                    continue;
                }
                let f = a[i][c].clone();
                for j in 0..2 * n {
                    let sub = &f * &a[c][j];
                    a[i][j] -= sub;
                }
            }
        }
        Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
    }

    /// Coordinates x with x B = v over the rationals, for square nonsingular B.
    pub fn solve_left(&self, v: &[i128]) -> Option<Vec<BigRational>> {
        let inv = self.inverse_rational()?;
        let n = self.rows;
        Some(
            (0..n)
                .map(|j| {
                    (0..n).fold(BigRational::zero(), |acc, i| acc + BigRational::from_integer(v[i].into()) * &inv[i][j])
                })
                .collect(),
        )
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = i128;
    fn index(&self, (i, j): (usize, usize)) -> &i128 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut i128 {
        &mut self.data[i * self.cols + j]
    }
}

/// Extended gcd: (g, s, t) with s a + t b = g >= 0.
fn xgcd(a: i128, b: i128) -> (i128, i128, i128) {
    let e = a.extended_gcd(&b);
    if e.gcd < 0 {
        (-e.gcd, -e.x, -e.y)
    } else {
        (e.gcd, e.x, e.y)
    }
}

fn axpy(y: &mut [i128], a: i128, x: &[i128]) -> Result<()> {
    if a == 0 {
        return Ok(());
    }
    for (yi, &xi) in y.iter_mut().zip(x) {
        *yi = ck(yi.checked_add(ck(a.checked_mul(xi))?))?;
    }
    Ok(())
}

/// Hermite normal form of a row lattice, built incrementally.
///
/// Pivot rows are kept upper triangular with positive pivots and with the
/// entries above each pivot reduced into `[0, pivot)`. Inserting a full-rank
/// set first keeps intermediate entries bounded by the pivots.
#[derive(Clone, Debug)]
pub struct HermiteBuilder {
    cols: usize,
    pivots: Vec<Option<Vec<i128>>>,
}

impl HermiteBuilder {
    pub fn new(cols: usize) -> Self {
        HermiteBuilder { cols, pivots: vec![None; cols] }
    }

    pub fn insert(&mut self, v: &[i128]) -> Result<()> {
        assert_eq!(v.len(), self.cols);
        let mut v = v.to_vec();
        for c in 0..self.cols {
            if v[c] == 0 {
                continue;
            }
            let Some(p) = self.pivots[c].as_ref() else {
                if v[c] < 0 {
                    for x in v.iter_mut() {
                        *x = -*x;
                    }
                }
                self.pivots[c] = Some(v);
                self.reduce_column(c)?;
                return Ok(());
            };
            let (pc, vc) = (p[c], v[c]);
            if vc % pc == 0 {
                axpy(&mut v, -(vc / pc), p)?;
                continue;
            }
            let (g, s, t) = xgcd(pc, vc);
            let mut new_p = vec![0i128; self.cols];
            axpy(&mut new_p, s, p)?;
            axpy(&mut new_p, t, &v)?;
            let mut rest = vec![0i128; self.cols];
            axpy(&mut rest, vc / g, p)?;
            axpy(&mut rest, -(pc / g), &v)?;
            debug_assert_eq!(rest[c], 0);
            self.pivots[c] = Some(new_p);
            self.reduce_column(c)?;
            v = rest;
        }
        Ok(())
    }

    /// Reduces pivot row `c` against later pivots, then reduces every
    /// earlier pivot row at column `c`.
    fn reduce_column(&mut self, c: usize) -> Result<()> {
        let mut row = self.pivots[c].take().expect("pivot present");
        for c2 in c + 1..self.cols {
            if let Some(p2) = &self.pivots[c2] {
                let qt = row[c2].div_euclid(p2[c2]);
                axpy(&mut row, -qt, p2)?;
            }
        }
        let pc = row[c];
        for r in 0..c {
            if let Some(upper) = self.pivots[r].as_mut() {
                let qt = upper[c].div_euclid(pc);
                axpy(upper, -qt, &row)?;
            }
        }
        self.pivots[c] = Some(row);
        Ok(())
    }

    pub fn rank(&self) -> usize {
        self.pivots.iter().flatten().count()
    }

    pub fn basis(&self) -> IntMatrix {
        let rows: Vec<Vec<i128>> = self.pivots.iter().flatten().cloned().collect();
        if rows.is_empty() {
            return IntMatrix::zeros(0, self.cols);
        }
        IntMatrix::from_rows(&rows)
    }
}

/// Hermite normal form basis of the lattice generated by `rows`.
pub fn hnf<'a>(cols: usize, rows: impl IntoIterator<Item = &'a [i128]>) -> Result<IntMatrix> {
    let mut b = HermiteBuilder::new(cols);
    for r in rows {
        b.insert(r)?;
    }
    Ok(b.basis())
}

/// Integer coordinates of `v` against a matrix already in Hermite normal
/// form, or `None` if `v` is outside its row lattice.
pub fn hnf_coordinates(h: &IntMatrix, v: &[i128]) -> Result<Option<Vec<i128>>> {
    let mut v = v.to_vec();
    let mut coords = vec![0i128; h.rows()];
    let mut col = 0;
    for (i, coord) in coords.iter_mut().enumerate() {
        let row = h.row(i);
        let pc = (col..h.cols()).find(|&c| row[c] != 0).expect("nonzero HNF row");
        if v[col..pc].iter().any(|&x| x != 0) {
            return Ok(None);
        }
        if v[pc] % row[pc] != 0 {
            return Ok(None);
        }
        let qt = v[pc] / row[pc];
        axpy(&mut v, -qt, row)?;
        *coord = qt;
        col = pc + 1;
    }
    Ok(v.iter().all(|&x| x == 0).then_some(coords))
}

pub fn hnf_contains(h: &IntMatrix, v: &[i128]) -> Result<bool> {
    Ok(hnf_coordinates(h, v)?.is_some())
}

/// Converts a BigInt known to fit into i128.
pub fn big_to_i128(x: &BigInt) -> Result<i128> {
    x.to_i128().ok_or(Error::Overflow("big integer narrowing"))
}

/// Absolute value of a determinant as an exact power of two, if it is one.
pub fn log2_exact(x: &BigInt) -> Option<u64> {
    let a = x.abs();
    if a.is_zero() {
        return None;
    }
    let tz = a.trailing_zeros()?;
    (a >> tz as usize == BigInt::one()).then_some(tz)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn det_small() {
        let m = IntMatrix::from_rows(&[vec![2, 1], vec![1, 2]]);
        assert_eq!(m.det(), BigInt::from(3));
        let s = IntMatrix::from_rows(&[vec![0, 1], vec![1, 0]]);
        assert_eq!(s.det(), BigInt::from(-1));
    }

    #[test]
    fn hnf_of_d4_generators() {
        // D4 = integer vectors of even sum.
        let gens = [vec![2, 0, 0, 0], vec![1, 1, 0, 0], vec![0, 1, 1, 0], vec![0, 0, 1, 1], vec![1, -1, 0, 0]];
        let h = hnf(4, gens.iter().map(Vec::as_slice)).unwrap();
        assert_eq!(h.rows(), 4);
        assert_eq!(h.det().abs(), BigInt::from(2));
        assert!(hnf_contains(&h, &[1, 0, 0, 1]).unwrap());
        assert!(!hnf_contains(&h, &[1, 0, 0, 0]).unwrap());
    }

    #[test]
    fn inverse_roundtrip() {
        let m = IntMatrix::from_rows(&[vec![2, 1, 0], vec![1, 3, 1], vec![0, 1, 4]]);
        let x = m.solve_left(&[5, 10, 9]).unwrap();
        let back: Vec<BigRational> = (0..3)
            .map(|j| (0..3).fold(BigRational::zero(), |a, i| a + &x[i] * BigRational::from_integer(m[(i, j)].into())))
            .collect();
        assert_eq!(back, [5, 10, 9].map(|v| BigRational::from_integer(v.into())).to_vec());
    }

    #[test]
    fn log2_exact_detects_powers() {
        assert_eq!(log2_exact(&BigInt::from(-16)), Some(4));
        assert_eq!(log2_exact(&BigInt::from(12)), None);
    }

    proptest! {
        #[test]
        fn hnf_preserves_lattice(rows in proptest::collection::vec(proptest::collection::vec(-9i128..10, 3), 3..6)) {
            let m = IntMatrix::from_rows(&rows[..3]);
            prop_assume!(!m.det().is_zero());
            let h = hnf(3, rows.iter().map(Vec::as_slice)).unwrap();
            prop_assert_eq!(h.rows(), 3);
            for r in &rows {
                prop_assert!(hnf_contains(&h, r).unwrap());
            }
            // Every HNF row is an integer combination of the generators: the
            // generator lattice index equals |det h|, which divides det of any full-rank subset.
            let d = h.det().abs();
            prop_assert!((m.det().abs() % &d).is_zero());
        }
    }
}
