use std::sync::{Arc, OnceLock};

use crate::algebra::intmat::hnf;
use crate::algebra::{DyadicRational, FieldElem, FiniteField, IntMatrix, Matrix};
use crate::codes::{chain_complete, extended_golay, parity_check_code, LinearCode, NestedCodeChain};
use crate::error::{Error, Result};
use crate::lattices::tlattice::{construction_e, construction_e_tlattice, TLattice};
use crate::lattices::DyadicLattice;

/// Z^2 in T-form: Λ = 2Z^2 (M = 4), T = [[1/2, -1/2], [1/2, 1/2]],
/// A = rotation by a quarter turn, nu = 2, b = 1, R^2 = 2.
pub fn z2_t() -> Result<TLattice> {
    let lat = DyadicLattice::from_basis(IntMatrix::scalar(2, 2), 0)?.with_name("Z2");
    let t = IntMatrix::from_rows(&[vec![1, -1], vec![1, 1]]);
    let a = IntMatrix::from_rows(&[vec![0, -1], vec![1, 0]]);
    TLattice::new(lat, t, 1, a, 2, DyadicRational::from_int(2))
}

/// The chain GF(q)^2 ⊇ {(x, x)}.
pub fn repetition_chain(q: u32) -> Result<NestedCodeChain> {
    let f = Arc::new(FiniteField::of_order(q)?);
    let rep = LinearCode::new(f, Matrix::from_rows(vec![vec![FieldElem::ONE, FieldElem::ONE]]))?;
    chain_complete(&rep, &[1, 2])
}

/// The chain GF(q)^n ⊇ [n, n-1, 2] single parity check.
pub fn parity_chain(q: u32, n: usize) -> Result<NestedCodeChain> {
    let f = Arc::new(FiniteField::of_order(q)?);
    chain_complete(&parity_check_code(f, n)?, &[1, 2])
}

fn cached(
    cell: &'static OnceLock<std::result::Result<TLattice, String>>,
    build: impl FnOnce() -> Result<TLattice>,
) -> Result<TLattice> {
    cell.get_or_init(|| build().map_err(|e| e.to_string())).clone().map_err(Error::Degenerate)
}

/// D4 = Construction E on Z^2 with the binary repetition chain (b = 2).
pub fn d4_t() -> Result<TLattice> {
    static CELL: OnceLock<std::result::Result<TLattice, String>> = OnceLock::new();
    cached(&CELL, || Ok(construction_e_tlattice(&z2_t()?, &repetition_chain(2)?)?.named("D4")))
}

/// E8 = Construction E on D4 with the repetition chain over GF(4) (b = 4).
pub fn e8_t() -> Result<TLattice> {
    static CELL: OnceLock<std::result::Result<TLattice, String>> = OnceLock::new();
    cached(&CELL, || Ok(construction_e_tlattice(&d4_t()?, &repetition_chain(4)?)?.named("E8")))
}

/// Λ16 = Construction E on E8 with the repetition chain over GF(16) (b = 8).
pub fn lambda16_t() -> Result<TLattice> {
    static CELL: OnceLock<std::result::Result<TLattice, String>> = OnceLock::new();
    cached(&CELL, || Ok(construction_e_tlattice(&e8_t()?, &repetition_chain(16)?)?.named("L16")))
}

/// Λ̄32 = Construction E on Λ16 with the repetition chain over GF(256).
pub fn lambda32() -> Result<DyadicLattice> {
    Ok(construction_e(&lambda16_t()?, &repetition_chain(256)?)?.with_name("L32"))
}

/// Λ̃_{4m}: Construction E on D4 with the [m, m-1, 2] parity-check chain
/// over GF(4); m = 1 is D4 itself.
pub fn lambda_tilde(m: usize) -> Result<DyadicLattice> {
    if !(1..=6).contains(&m) {
        return Err(Error::InvalidParameter(format!("m must be in 1..=6, got {m}")));
    }
    let name = format!("Lt{}", 4 * m);
    if m == 1 {
        return Ok(d4_t()?.lattice().clone().with_name(name));
    }
    Ok(construction_e(&d4_t()?, &parity_chain(4, m)?)?.with_name(name))
}

/// Leech lattice as an integral Gram matrix (min norm 4, det 1), built from
/// sqrt(8) times the lattice: 2 * Golay codewords, 4 * even-sum vectors and
/// (-3, 1^23), with the Gram divided by 8.
pub fn leech() -> Result<DyadicLattice> {
    let golay = extended_golay();
    let mut gens: Vec<Vec<i128>> =
        golay.generator().row_vecs().iter().map(|r| r.iter().map(|c| 2 * c.0 as i128).collect()).collect();
    for i in 0..23 {
        let mut v = vec![0i128; 24];
        v[i] = 4;
        v[i + 1] = 4;
        gens.push(v);
    }
    let mut v = vec![0i128; 24];
    v[0] = 8;
    gens.push(v);
    let mut odd = vec![1i128; 24];
    odd[0] = -3;
    gens.push(odd);
    let b = hnf(24, gens.iter().map(|r| r.as_slice()))?;
    let g = b.gram()?;
    let mut rows = g.row_vecs();
    for r in rows.iter_mut() {
        for x in r.iter_mut() {
            if *x % 8 != 0 {
                return Err(Error::Degenerate("Leech generators are not integral after scaling".into()));
            }
            *x /= 8;
        }
    }
    Ok(DyadicLattice::from_gram(IntMatrix::from_rows(&rows), 0)?.with_name("Leech"))
}

/// A catalog entry: T-lattices keep their map.
#[derive(Clone, Debug)]
pub enum CatalogEntry {
    T(TLattice),
    Plain(DyadicLattice),
}

impl CatalogEntry {
    pub fn lattice(&self) -> &DyadicLattice {
        match self {
            CatalogEntry::T(t) => t.lattice(),
            CatalogEntry::Plain(l) => l,
        }
    }
}

/// Names accepted by [`catalog`].
pub const CATALOG_NAMES: &[&str] =
    &["Z2", "D4", "E8", "L16", "L32", "Lt4", "Lt8", "Lt12", "Lt16", "Lt20", "Lt24", "Leech"];

/// Looks up a catalog lattice by name.
pub fn catalog(name: &str) -> Result<CatalogEntry> {
    Ok(match name {
        "Z2" => CatalogEntry::T(z2_t()?),
        "D4" => CatalogEntry::T(d4_t()?),
        "E8" => CatalogEntry::T(e8_t()?),
        "L16" => CatalogEntry::T(lambda16_t()?),
        "L32" => CatalogEntry::Plain(lambda32()?),
        "Leech" => CatalogEntry::Plain(leech()?),
        _ => match name.strip_prefix("Lt").and_then(|k| k.parse::<usize>().ok()) {
            Some(k) if k % 4 == 0 => CatalogEntry::Plain(lambda_tilde(k / 4)?),
            _ => {
                return Err(Error::InvalidParameter(format!(
                    "unknown lattice `{name}`; known: {}",
                    CATALOG_NAMES.join(", ")
                )))
            }
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattices::{shortest_vectors, EnumOptions};
    use num_traits::One;

    fn kiss(l: &DyadicLattice) -> (DyadicRational, u128) {
        let s = shortest_vectors(l, &EnumOptions::default()).unwrap();
        (s.min_norm, s.count)
    }

    #[test]
    fn leech_is_unimodular() {
        let l = leech().unwrap();
        assert!(l.det().is_one());
        assert!((0..24).all(|i| l.gram()[(i, i)] % 2 == 0));
    }

    #[test]
    fn ladder_kissing_numbers() {
        let four = DyadicRational::from_int(4);
        assert_eq!(kiss(d4_t().unwrap().lattice()), (four, 24));
        assert_eq!(kiss(e8_t().unwrap().lattice()), (four, 240));
        assert_eq!(kiss(lambda16_t().unwrap().lattice()), (four, 4320));
    }

    #[test]
    fn ladder_b_grows() {
        assert_eq!(d4_t().unwrap().b(), 2);
        assert_eq!(e8_t().unwrap().b(), 4);
        assert_eq!(d4_t().unwrap().dim(), 4);
    }

    #[test]
    fn inherited_maps_pass_axioms() {
        for tl in [d4_t().unwrap(), e8_t().unwrap()] {
            let rep = tl.verify().unwrap();
            assert!(rep.passed, "{rep:#?}");
        }
    }

    #[test]
    fn lambda_tilde_12() {
        let l = lambda_tilde(3).unwrap();
        assert_eq!(l.dim(), 12);
        assert_eq!(kiss(&l).0, DyadicRational::from_int(4));
    }

    #[test]
    fn unknown_name() {
        assert!(catalog("E7").is_err());
        assert!(catalog("Lt28").is_err());
    }
}
