//! Dense matrices over a [`FiniteField`].

use crate::algebra::field::{FieldElem, FiniteField};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<FieldElem>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![FieldElem::ZERO; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = FieldElem::ONE;
        }
        m
    }

    /// Builds a matrix from rows; all rows must share one length.
    pub fn from_rows(rows: Vec<Vec<FieldElem>>) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        Matrix { rows: rows.len(), cols, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_u32_rows(rows: &[Vec<u32>]) -> Self {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&x| FieldElem(x)).collect()).collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[FieldElem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<FieldElem>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    /// Stacks `other` below `self`.
    pub fn vstack(&self, other: &Matrix) -> Matrix {
        assert!(self.rows == 0 || other.rows == 0 || self.cols == other.cols);
        let cols = if self.rows == 0 { other.cols } else { self.cols };
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Matrix { rows: self.rows + other.rows, cols, data }
    }

    pub fn push_row(&mut self, row: &[FieldElem]) {
        if self.rows == 0 {
            self.cols = row.len();
        }
        assert_eq!(row.len(), self.cols);
        self.data.extend_from_slice(row);
        self.rows += 1;
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn mul(&self, f: &FiniteField, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows);
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] = f.add(out[(i, j)], f.mul(a, other[(k, j)]));
                }
            }
        }
        out
    }

    /// Row vector times matrix.
    pub fn vec_mul(&self, f: &FiniteField, v: &[FieldElem]) -> Vec<FieldElem> {
        assert_eq!(v.len(), self.rows);
        let mut out = vec![FieldElem::ZERO; self.cols];
        for (i, &a) in v.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, o) in out.iter_mut().enumerate() {
                *o = f.add(*o, f.mul(a, self[(i, j)]));
            }
        }
        out
    }

    /// Reduced row echelon form, rank and the (leftmost) pivot columns.
    /// Zero rows are kept at the bottom.
    pub fn rref(&self, f: &FiniteField) -> (Matrix, usize, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = f.inv(m[(r, c)]).expect("pivot is nonzero");
            for j in 0..m.cols {
                m[(r, j)] = f.mul(m[(r, j)], inv);
            }
            for i in 0..m.rows {
                let factor = m[(i, c)];
                if i == r || factor.is_zero() {
                    continue;
                }
                for j in 0..m.cols {
                    let sub = f.mul(factor, m[(r, j)]);
                    m[(i, j)] = f.sub(m[(i, j)], sub);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, r, pivots)
    }

    pub fn rank(&self, f: &FiniteField) -> usize {
        self.rref(f).1
    }

    /// Nonzero rows of the RREF: a canonical basis of the row space.
    pub fn row_space_basis(&self, f: &FiniteField) -> Matrix {
        let (r, rank, _) = self.rref(f);
        Matrix { rows: rank, cols: self.cols, data: r.data[..rank * self.cols].to_vec() }
    }

    /// Basis of {x : M x^T = 0}, i.e. the dual of the row space.
    pub fn nullspace(&self, f: &FiniteField) -> Matrix {
        let (r, rank, pivots) = self.rref(f);
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut out = Matrix::zeros(free.len(), self.cols);
        for (k, &fc) in free.iter().enumerate() {
            out[(k, fc)] = FieldElem::ONE;
            for (i, &pc) in pivots.iter().enumerate().take(rank) {
                out[(k, pc)] = f.neg(r[(i, fc)]);
            }
        }
        out
    }

    /// Whether `v` lies in the row space.
    pub fn row_space_contains(&self, f: &FiniteField, v: &[FieldElem]) -> bool {
        let base = self.rank(f);
        let mut ext = self.clone();
        ext.push_row(v);
        ext.rank(f) == base
    }

    /// Whether every row of `other` lies in the row space of `self`.
    pub fn contains_row_space(&self, f: &FiniteField, other: &Matrix) -> bool {
        self.vstack(other).rank(f) == self.rank(f)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = FieldElem;
    fn index(&self, (i, j): (usize, usize)) -> &FieldElem {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut FieldElem {
        &mut self.data[i * self.cols + j]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_is_reduced() {
        let f = FiniteField::of_order(2).unwrap();
        let id = Matrix::identity(3);
        let (r, rank, piv) = id.rref(&f);
        assert_eq!(r, id);
        assert_eq!(rank, 3);
        assert_eq!(piv, vec![0, 1, 2]);
    }

    #[test]
    fn zero_matrix_has_rank_zero() {
        let f = FiniteField::of_order(5).unwrap();
        assert_eq!(Matrix::zeros(3, 4).rank(&f), 0);
    }

    #[test]
    fn duplicated_repetition_rows() {
        let f = FiniteField::of_order(2).unwrap();
        let m = Matrix::from_u32_rows(&[vec![1, 1, 1, 1], vec![1, 1, 1, 1]]);
        assert_eq!(m.rank(&f), 1);
    }

    #[test]
    fn nullspace_is_orthogonal() {
        let f = FiniteField::of_order(9).unwrap();
        let m = Matrix::from_u32_rows(&[vec![1, 2, 3, 4, 5], vec![0, 7, 1, 8, 2]]);
        let n = m.nullspace(&f);
        assert_eq!(n.rows(), 3);
        let prod = m.mul(&f, &n.transpose());
        assert!((0..2).all(|i| (0..3).all(|j| prod[(i, j)].is_zero())));
    }

    #[test]
    fn membership() {
        let f = FiniteField::of_order(2).unwrap();
        let m = Matrix::from_u32_rows(&[vec![1, 1, 0, 0], vec![0, 0, 1, 1]]);
        assert!(m.row_space_contains(&f, &[1, 1, 1, 1].map(FieldElem)));
        assert!(!m.row_space_contains(&f, &[1, 0, 0, 0].map(FieldElem)));
    }
}
