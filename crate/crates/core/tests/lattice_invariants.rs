use std::collections::BTreeMap;

use kf_core::algebra::{DyadicRational, FieldElem, FiniteField, IntMatrix, Matrix};
use kf_core::codes::{chain_complete, extended_hamming_8, reed_muller_chain, NestedCodeChain};
use kf_core::lattices::*;
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn kiss(l: &DyadicLattice) -> (DyadicRational, u128) {
    let s = shortest_vectors(l, &EnumOptions::default()).unwrap();
    (s.min_norm, s.count)
}

/// Minimum and count over nonzero coefficient vectors with |x_i| <= r.
fn brute(g: &IntMatrix, r: i64) -> (i128, u128) {
    let n = g.rows();
    let mut best = (i128::MAX, 0u128);
    let total = (2 * r + 1).pow(n as u32);
    for idx in 0..total {
        let mut t = idx;
        let x: Vec<i128> = (0..n)
            .map(|_| {
                let d = t % (2 * r + 1);
                t /= 2 * r + 1;
                (d - r) as i128
            })
            .collect();
        if x.iter().all(|&c| c == 0) {
            continue;
        }
        let s: i128 = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).map(|(i, j)| x[i] * g[(i, j)] * x[j]).sum();
        if s < best.0 {
            best = (s, 1);
        } else if s == best.0 {
            best.1 += 1;
        }
    }
    best
}

fn random_unimodular(n: usize, rng: &mut ChaCha8Rng) -> IntMatrix {
    let mut u = IntMatrix::identity(n);
    for _ in 0..3 * n {
        let (i, j) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if i == j {
            continue;
        }
        let c: i128 = rng.gen_range(-2..=2);
        let mut rows = u.row_vecs();
        let src = rows[j].clone();
        for (x, s) in rows[i].iter_mut().zip(src) {
            *x += c * s;
        }
        u = IntMatrix::from_rows(&rows);
    }
    u
}

fn d_chains() -> Vec<(&'static str, NestedCodeChain)> {
    vec![
        ("E8", chain_complete(&extended_hamming_8(), &[1, 4]).unwrap()),
        ("BW32", reed_muller_chain(5, &[3, 1]).unwrap()),
    ]
}

#[test]
fn construction_d_sandwich_and_determinant() {
    for (name, chain) in d_chains() {
        let lat = construction_d(&chain).unwrap();
        let (n, a) = (chain.n(), chain.depth());
        // 2^{a-1} L sits between 2^a Z^n and Z^n.
        let scaled = lat.scaled_pow2(a as i32 - 1).unwrap();
        for i in 0..n {
            let mut e = vec![0i128; n];
            e[i] = 1 << a;
            assert!(contains(&scaled, &DyadicVector::new(e, 0)).unwrap(), "{name}: 2^a e_{i}");
        }
        assert_eq!(scaled.exp(), 0, "{name}: 2^(a-1) L is integral");
        let k: usize = chain.dims()[1..].iter().sum();
        let expected = BigRational::new(BigInt::from(1) << (2 * n), BigInt::from(1) << (2 * k));
        assert_eq!(lat.det(), expected, "{name}: det = 2^(2n - 2K)");
    }
}

#[test]
fn construction_d_without_codes_is_2zn() {
    let f = std::sync::Arc::new(FiniteField::of_order(2).unwrap());
    let chain = NestedCodeChain::new(f, Matrix::identity(5), vec![5], vec![1]).unwrap();
    let lat = construction_d(&chain).unwrap();
    assert_eq!(kiss(&lat), (DyadicRational::from_int(4), 10));
}

#[test]
fn kissing_is_invariant_under_basis_change() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let lats = vec![
        d4_t().unwrap().lattice().clone(),
        e8_t().unwrap().lattice().clone(),
        lambda_tilde(3).unwrap(),
        construction_d(&d_chains()[0].1).unwrap(),
    ];
    for lat in lats {
        let base = kiss(&lat);
        for _ in 0..5 {
            let u = random_unimodular(lat.dim(), &mut rng);
            assert_eq!(kiss(&lat.transform(&u).unwrap()), base);
        }
    }
}

#[test]
fn lll_preserves_det_and_minimum_on_the_catalog() {
    for name in CATALOG_NAMES {
        let lat = catalog(name).unwrap().lattice().clone();
        let (red, u) = lll_reduce(&lat).unwrap();
        assert_eq!(red.det(), lat.det(), "{name}");
        assert!(u.det().magnitude() == &num_bigint::BigUint::from(1u32), "{name}");
        if lat.dim() <= 24 {
            assert_eq!(kiss(&red), kiss(&lat), "{name}");
        }
    }
}

#[test]
fn theta_of_d4_at_minimum_two() {
    let d4 = d4_t().unwrap().lattice().clone();
    let half = DyadicLattice::from_gram(d4.gram().scale(2).unwrap(), d4.exp() + 1).unwrap();
    let theta = theta_prefix(&half, DyadicRational::from_int(2)).unwrap();
    let expected: BTreeMap<DyadicRational, u128> =
        [(DyadicRational::from_int(0), 1), (DyadicRational::from_int(2), 24)].into_iter().collect();
    assert_eq!(theta, expected);
}

#[test]
fn e8_from_both_constructions_agree() {
    let from_e = e8_t().unwrap().lattice().clone();
    let from_a = construction_a(&extended_hamming_8()).unwrap();
    let bound = DyadicRational::from_int(8);
    assert_eq!(theta_prefix(&from_e, bound).unwrap(), theta_prefix(&from_a, bound).unwrap());
}

#[test]
fn construction_e_meets_the_predicted_minimum() {
    let cases = [
        (z2_t().unwrap(), repetition_chain(2).unwrap()),
        (d4_t().unwrap(), repetition_chain(4).unwrap()),
        (d4_t().unwrap(), parity_chain(4, 3).unwrap()),
        (d4_t().unwrap(), parity_chain(4, 5).unwrap()),
    ];
    for (base, chain) in cases {
        let lat = construction_e(&base, &chain).unwrap();
        let (min, _) = kiss(&lat);
        let predicted = construction_e_min_norm(&base, &chain);
        assert_eq!(BigRational::new(min.numerator().into(), BigInt::from(1) << min.exponent()), predicted);
    }
}

#[test]
fn construction_e_inherits_a_t_structure() {
    let d4 = d4_t().unwrap();
    assert_eq!(d4.b(), 2);
    let rep = d4.verify().unwrap();
    assert!(rep.passed, "{rep:#?}");
    assert_eq!(rep.index.as_deref(), Some("4"));
}

#[test]
fn leech_gram_is_unimodular_and_even() {
    let l = leech().unwrap();
    assert_eq!(l.det(), BigRational::from_integer(1.into()));
    assert!((0..24).all(|i| l.gram()[(i, i)] % 2 == 0));
}

#[test]
fn text_round_trip() {
    let l = e8_t().unwrap().lattice().clone();
    assert_eq!(DyadicLattice::parse(&l.to_text()).unwrap().gram(), l.gram());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn enumeration_matches_brute_force(seed in any::<u64>(), n in 2usize..=4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rows: Vec<Vec<i128>> = (0..n).map(|_| (0..n).map(|_| rng.gen_range(-3..=3)).collect()).collect();
        let b = IntMatrix::from_rows(&rows);
        prop_assume!(b.det() != BigInt::from(0));
        let (red, _) = lll_reduce(&DyadicLattice::from_basis(b, 0).unwrap()).unwrap();
        let (min, count) = kiss(&red);
        let (bmin, bcount) = brute(red.gram(), 6);
        prop_assert_eq!(min, DyadicRational::from_int(bmin));
        prop_assert_eq!(count, bcount);
    }

    #[test]
    fn sigma_is_additive_modulo_the_base(x in 0u32..16, y in 0u32..16) {
        let e8 = e8_t().unwrap();
        let f = FiniteField::of_order(16).unwrap();
        let (a, b) = (FieldElem(x), FieldElem(y));
        let lhs = e8.sigma(&f, 1, f.add(a, b)).unwrap();
        let rhs = e8.sigma(&f, 1, a).unwrap().add(&e8.sigma(&f, 1, b).unwrap()).unwrap();
        prop_assert!(contains(e8.lattice(), &lhs.sub(&rhs).unwrap()).unwrap());
    }

    #[test]
    fn lifts_of_codewords_lie_in_construction_a(msg in proptest::collection::vec(0u32..2, 4)) {
        let code = extended_hamming_8();
        let lat = construction_a(&code).unwrap();
        let word = code.encode(&msg.iter().map(|&m| FieldElem(m)).collect::<Vec<_>>());
        prop_assert!(contains(&lat, &construction_d_lift(&word, 1)).unwrap());
    }
}
