use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::algebra::intmat::big_to_i128;
use crate::algebra::IntMatrix;
use crate::error::{Error, Result};
use crate::lattices::DyadicLattice;

/// Exact LLL (delta = 99/100) on an integral Gram matrix, using the
/// all-integer variant with subdeterminants d_i and scaled coefficients.
/// Returns the reduced Gram matrix and the unimodular U with
/// reduced = U G U^T.
pub fn lll_gram(g: &IntMatrix) -> Result<(IntMatrix, IntMatrix)> {
    let n = g.rows();
    let big = |x: i128| BigInt::from(x);
    // 1-indexed working copies.
    let mut gm: Vec<Vec<BigInt>> = vec![vec![BigInt::zero(); n + 1]; n + 1];
    for i in 0..n {
        for j in 0..n {
            gm[i + 1][j + 1] = big(g[(i, j)]);
        }
    }
    let mut h: Vec<Vec<BigInt>> = vec![vec![BigInt::zero(); n + 1]; n + 1];
    for (i, row) in h.iter_mut().enumerate().skip(1) {
        row[i] = BigInt::one();
    }
    let mut d = vec![BigInt::zero(); n + 1];
    let mut lam = vec![vec![BigInt::zero(); n + 1]; n + 1];
    d[0] = BigInt::one();
    if n == 0 {
        return Ok((g.clone(), IntMatrix::identity(0)));
    }
    d[1] = gm[1][1].clone();
    if !d[1].is_positive() {
        return Err(Error::Degenerate("Gram matrix is not positive definite".into()));
    }

    fn red(k: usize, l: usize, d: &[BigInt], lam: &mut [Vec<BigInt>], gm: &mut [Vec<BigInt>], h: &mut [Vec<BigInt>]) {
        if BigInt::from(2) * lam[k][l].abs() <= d[l] {
            return;
        }
        let q = (BigInt::from(2) * &lam[k][l] + &d[l]).div_floor(&(BigInt::from(2) * &d[l]));
        let hl = h[l].clone();
        for (x, y) in h[k].iter_mut().zip(&hl) {
            *x -= &q * y;
        }
        // b_k <- b_k - q b_l on the Gram matrix.
        let n = gm.len() - 1;
        let gkl = gm[k][l].clone();
        let gll = gm[l][l].clone();
        gm[k][k] = &gm[k][k] - BigInt::from(2) * &q * &gkl + &q * &q * &gll;
        for j in 1..=n {
            if j != k {
                let v = &gm[k][j] - &q * &gm[l][j];
                gm[k][j] = v.clone();
                gm[j][k] = v;
            }
        }
        lam[k][l] = &lam[k][l] - &q * &d[l];
        for i in 1..l {
            let v = &lam[k][i] - &q * &lam[l][i];
            lam[k][i] = v;
        }
    }

    let mut k = 2;
    let mut kmax = 1;
    while k <= n {
        if k > kmax {
            kmax = k;
            for j in 1..=k {
                let mut u = gm[k][j].clone();
                for i in 1..j {
                    u = (&d[i] * &u - &lam[k][i] * &lam[j][i]) / &d[i - 1];
                }
                if j < k {
                    lam[k][j] = u;
                } else {
                    if !u.is_positive() {
                        return Err(Error::Degenerate("Gram matrix is not positive definite".into()));
                    }
                    d[k] = u;
                }
            }
        }
        red(k, k - 1, &d, &mut lam, &mut gm, &mut h);
        let lhs = BigInt::from(100) * &d[k] * &d[k - 2];
        let rhs = BigInt::from(99) * &d[k - 1] * &d[k - 1] - BigInt::from(100) * &lam[k][k - 1] * &lam[k][k - 1];
        if lhs < rhs {
            h.swap(k, k - 1);
            gm.swap(k, k - 1);
            for row in gm.iter_mut() {
                row.swap(k, k - 1);
            }
            for j in 1..k - 1 {
                let t = lam[k][j].clone();
                lam[k][j] = lam[k - 1][j].clone();
                lam[k - 1][j] = t;
            }
            let l = lam[k][k - 1].clone();
            let b = (&d[k - 2] * &d[k] + &l * &l) / &d[k - 1];
            for i in k + 1..=kmax {
                let t = lam[i][k].clone();
                lam[i][k] = (&d[k] * &lam[i][k - 1] - &l * &t) / &d[k - 1];
                lam[i][k - 1] = (&b * &t + &l * &lam[i][k]) / &d[k];
            }
            d[k - 1] = b;
            k = (k - 1).max(2);
        } else {
            for l in (1..k - 1).rev() {
                red(k, l, &d, &mut lam, &mut gm, &mut h);
            }
            k += 1;
        }
    }
    let to_mat = |m: &[Vec<BigInt>]| -> Result<IntMatrix> {
        let rows = (1..=n).map(|i| (1..=n).map(|j| big_to_i128(&m[i][j])).collect()).collect::<Result<Vec<_>>>()?;
        Ok(IntMatrix::from_rows(&rows))
    };
    Ok((to_mat(&gm)?, to_mat(&h)?))
}

/// LLL-reduces a lattice; returns the reduced lattice and the unimodular
/// change of basis applied.
pub fn lll_reduce(lat: &DyadicLattice) -> Result<(DyadicLattice, IntMatrix)> {
    let (_, u) = lll_gram(lat.gram())?;
    Ok((lat.transform(&u)?, u))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn random_basis(n: usize, seed: &[i8]) -> IntMatrix {
        let mut rows = vec![vec![0i128; n]; n];
        for i in 0..n {
            for j in 0..n {
                rows[i][j] = seed[(i * n + j) % seed.len()] as i128;
            }
            rows[i][i] += 40;
        }
        IntMatrix::from_rows(&rows)
    }

    #[test]
    fn reduces_skewed_basis() {
        let b = IntMatrix::from_rows(&[vec![1, 0], vec![1000, 1]]);
        let (r, u) = lll_gram(&b.gram().unwrap()).unwrap();
        assert_eq!(r[(0, 0)] + r[(1, 1)], 2);
        assert_eq!(u.det().abs(), BigInt::one());
    }

    proptest! {
        #[test]
        fn unimodular_and_consistent(n in 2usize..6, seed in prop::collection::vec(-30i8..30, 36)) {
            let g = random_basis(n, &seed).gram().unwrap();
            let (r, u) = lll_gram(&g).unwrap();
            prop_assert_eq!(u.det().abs(), BigInt::one());
            prop_assert_eq!(&u.checked_mul(&g).unwrap().checked_mul(&u.transpose()).unwrap(), &r);
            prop_assert_eq!(r.det(), g.det());
            let gs = crate::lattices::enumerate::gso(&r).unwrap();
            for i in 1..n {
                for j in 0..i {
                    prop_assert!(gs.mu[i][j].abs() <= 0.5 + 1e-9);
                }
                let mu = gs.mu[i][i - 1];
                prop_assert!(gs.b[i] >= (0.99 - mu * mu) * gs.b[i - 1] - 1e-9);
            }
        }
    }
}
