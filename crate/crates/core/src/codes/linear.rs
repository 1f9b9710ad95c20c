//! Linear codes over GF(q) with exact weight enumeration.

use std::fmt::Write as _;
use std::sync::{Arc, OnceLock};

use itertools::Itertools;
use rayon::prelude::*;

use crate::algebra::{FieldElem, FiniteField, Matrix};
use crate::error::{Error, Result};

/// Maximum number of codewords enumerated exhaustively.
pub const ENUMERATION_BUDGET: u64 = 1 << 24;

/// Maximum number of support sets inspected by the support-based routes.
pub const SUPPORT_BUDGET: u64 = 1 << 22;

/// Cap on codewords materialized by [`LinearCode::words_of_weight`].
pub const WORD_LIST_BUDGET: u64 = 1 << 20;

#[derive(Debug)]
pub struct LinearCode {
    field: Arc<FiniteField>,
    generator: Matrix,
    weights: OnceLock<Vec<u64>>,
    parity_check: OnceLock<Matrix>,
}

impl Clone for LinearCode {
    fn clone(&self) -> Self {
        LinearCode {
            field: self.field.clone(),
            generator: self.generator.clone(),
            weights: self.weights.clone(),
            parity_check: self.parity_check.clone(),
        }
    }
}

pub(crate) fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

impl LinearCode {
    /// A code from a full-rank generator matrix.
    pub fn new(field: Arc<FiniteField>, generator: Matrix) -> Result<Self> {
        if generator.rows() > 0 && generator.rank(&field) != generator.rows() {
            return Err(Error::Degenerate("generator matrix is not full rank".into()));
        }
        if generator.rows() > 0 && generator.cols() == 0 {
            return Err(Error::Degenerate("code of length zero".into()));
        }
        if generator.row_vecs().iter().flatten().any(|e| e.0 >= field.order()) {
            return Err(Error::InvalidParameter("symbol outside the field".into()));
        }
        Ok(LinearCode { field, generator, weights: OnceLock::new(), parity_check: OnceLock::new() })
    }

    /// The code spanned by arbitrary rows, reduced to a basis in RREF.
    pub fn from_spanning(field: Arc<FiniteField>, n: usize, rows: &Matrix) -> Result<Self> {
        let generator = if rows.rows() == 0 { Matrix::zeros(0, n) } else { rows.row_space_basis(&field) };
        let mut code = Self::new(field, generator)?;
        if code.generator.rows() == 0 {
            code.generator = Matrix::zeros(0, n);
        }
        Ok(code)
    }

    /// The whole space GF(q)^n.
    pub fn full_space(field: Arc<FiniteField>, n: usize) -> Self {
        Self::new(field, Matrix::identity(n)).expect("identity is full rank")
    }

    /// The zero code of length n.
    pub fn zero_code(field: Arc<FiniteField>, n: usize) -> Self {
        LinearCode { field, generator: Matrix::zeros(0, n), weights: OnceLock::new(), parity_check: OnceLock::new() }
    }

    pub fn field(&self) -> &Arc<FiniteField> {
        &self.field
    }

    pub fn q(&self) -> u32 {
        self.field.order()
    }

    pub fn n(&self) -> usize {
        self.generator.cols()
    }

    pub fn k(&self) -> usize {
        self.generator.rows()
    }

    pub fn generator(&self) -> &Matrix {
        &self.generator
    }

    /// Number of codewords, if it fits in 64 bits.
    pub fn size(&self) -> Option<u64> {
        (self.q() as u64).checked_pow(self.k() as u32)
    }

    pub fn encode(&self, msg: &[FieldElem]) -> Vec<FieldElem> {
        self.generator.vec_mul(&self.field, msg)
    }

    pub fn contains(&self, word: &[FieldElem]) -> bool {
        word.len() == self.n()
            && (self.k() == 0 && word.iter().all(|c| c.is_zero())
                || self.generator.row_space_contains(&self.field, word))
    }

    /// Whether every codeword of `other` is a codeword of `self`.
    pub fn contains_code(&self, other: &LinearCode) -> bool {
        other.k() == 0 || self.k() > 0 && self.generator.contains_row_space(&self.field, &other.generator)
    }

    /// Parity-check matrix, a basis of the dual code.
    pub fn parity_check(&self) -> &Matrix {
        self.parity_check.get_or_init(|| {
            if self.k() == 0 {
                Matrix::identity(self.n())
            } else {
                self.generator.nullspace(&self.field)
            }
        })
    }

    pub fn dual(&self) -> LinearCode {
        let h = self.parity_check().clone();
        if h.rows() == 0 {
            return Self::zero_code(self.field.clone(), self.n());
        }
        Self::new(self.field.clone(), h).expect("nullspace basis is full rank")
    }

    /// Same row space (generator matrices may differ).
    pub fn same_code(&self, other: &LinearCode) -> bool {
        self.n() == other.n() && self.k() == other.k() && self.contains_code(other)
    }

    /// Exact weight distribution A_0..A_n by exhaustive enumeration.
    pub fn weight_distribution(&self) -> Result<&[u64]> {
        if let Some(w) = self.weights.get() {
            return Ok(w);
        }
        let w = self.coset_weights(None)?;
        Ok(self.weights.get_or_init(|| w))
    }

    /// Minimum distance (weight of the lightest nonzero codeword). The zero
    /// code reports n + 1.
    pub fn min_distance(&self) -> Result<usize> {
        if self.k() == 0 {
            return Ok(self.n() + 1);
        }
        if self.within_enumeration_budget() {
            let w = self.weight_distribution()?;
            return Ok((1..w.len()).find(|&i| w[i] > 0).expect("nonzero codewords exist"));
        }
        Ok(self.min_weight_by_supports()?.0)
    }

    /// Minimum distance d and the number A_d of weight-d codewords.
    pub fn min_weight_count(&self) -> Result<(usize, u128)> {
        if self.within_enumeration_budget() {
            let d = self.min_distance()?;
            let w = self.weight_distribution()?;
            return Ok((d, w.get(d).copied().unwrap_or(0) as u128));
        }
        self.min_weight_by_supports()
    }

    /// Whether every nonzero codeword has weight at least `d`.
    pub fn certify_min_distance(&self, d: usize) -> Result<bool> {
        if self.k() == 0 || d <= 1 {
            return Ok(true);
        }
        if d > self.n() {
            return Ok(false);
        }
        if self.within_enumeration_budget() {
            return Ok(self.min_distance()? >= d);
        }
        let needed = binomial(self.n() as u64, (d - 1) as u64);
        self.check_support_budget(needed)?;
        let s = d - 1;
        Ok((0..self.n()).combinations(s).par_bridge().all(|sup| self.support_dim(&sup) == 0))
    }

    /// Every codeword of weight exactly `w`, in message order.
    pub fn words_of_weight(&self, w: usize) -> Result<Vec<Vec<FieldElem>>> {
        let size = self.size().filter(|&s| s <= WORD_LIST_BUDGET).ok_or(Error::BudgetExceeded {
            what: "codeword listing",
            needed: (self.q() as u128).saturating_pow(self.k() as u32),
            budget: WORD_LIST_BUDGET as u128,
        })?;
        let q = self.q();
        Ok((0..size)
            .map(|x| {
                let msg: Vec<FieldElem> = to_digits(x, q, self.k()).into_iter().take(self.k()).map(FieldElem).collect();
                self.encode(&msg)
            })
            .filter(|c| c.iter().filter(|s| !s.is_zero()).count() == w)
            .collect())
    }

    pub fn within_enumeration_budget(&self) -> bool {
        self.size().is_some_and(|s| s <= ENUMERATION_BUDGET)
    }

    /// Dimension of the subcode supported inside `support`.
    pub fn support_dim(&self, support: &[usize]) -> usize {
        let (n, k, s) = (self.n(), self.k(), support.len());
        if k == 0 {
            return 0;
        }
        if (n - k) * s <= k * (n - s) {
            let h = self.parity_check();
            let cols: Vec<Vec<FieldElem>> =
                (0..h.rows()).map(|i| support.iter().map(|&c| h[(i, c)]).collect()).collect();
            let r = if cols.is_empty() { 0 } else { Matrix::from_rows(cols).rank(&self.field) };
            s - r
        } else {
            let mut mask = vec![true; n];
            for &c in support {
                mask[c] = false;
            }
            let rows: Vec<Vec<FieldElem>> =
                (0..k).map(|i| (0..n).filter(|&c| mask[c]).map(|c| self.generator[(i, c)]).collect()).collect();
            let r = if n == s { 0 } else { Matrix::from_rows(rows).rank(&self.field) };
            k - r
        }
    }

    fn check_support_budget(&self, needed: u128) -> Result<()> {
        if needed > SUPPORT_BUDGET as u128 {
            return Err(Error::BudgetExceeded { what: "support enumeration", needed, budget: SUPPORT_BUDGET as u128 });
        }
        Ok(())
    }

    /// Minimum distance and its multiplicity from support sets: at the
    /// minimum distance every nonzero codeword inside a d-set has support
    /// exactly that set, so A_d = sum over d-sets S of (q^dim(C|S) - 1).
    pub fn min_weight_by_supports(&self) -> Result<(usize, u128)> {
        let n = self.n();
        if self.k() == 0 {
            return Err(Error::Degenerate("zero code has no nonzero words".into()));
        }
        let mut spent = 0u128;
        for w in 1..=n {
            spent += binomial(n as u64, w as u64);
            self.check_support_budget(spent)?;
            let q = self.q() as u128;
            let count: u128 = (0..n)
                .combinations(w)
                .par_bridge()
                .map(|sup| {
                    let d = self.support_dim(&sup);
                    q.pow(d as u32) - 1
                })
                .sum();
            if count > 0 {
                return Ok((w, count));
            }
        }
        unreachable!("a nonzero code has a word of weight <= n")
    }

    /// Weight histogram of `offset + C` (or of C itself) by Gray-code
    /// enumeration, split across worker threads by counter ranges.
    pub fn coset_weights(&self, offset: Option<&[FieldElem]>) -> Result<Vec<u64>> {
        let size = self.size().filter(|&s| s <= ENUMERATION_BUDGET).ok_or(Error::BudgetExceeded {
            what: "codeword enumeration",
            needed: (self.q() as u128).saturating_pow(self.k() as u32),
            budget: ENUMERATION_BUDGET as u128,
        })?;
        let n = self.n();
        if self.field.order() == 2 {
            return Ok(self.binary_weights(size, offset));
        }
        let f = &*self.field;
        let p = f.characteristic();
        let h = f.degree();
        let gens: Vec<Vec<FieldElem>> = (0..self.k())
            .flat_map(|i| {
                (0..h).map(move |t| {
                    let w = f.basis_elem(t);
                    self.generator.row(i).iter().map(|&c| f.mul(c, w)).collect()
                })
            })
            .collect();
        let digits = gens.len();
        let base: Vec<FieldElem> = offset.map_or_else(|| vec![FieldElem::ZERO; n], <[_]>::to_vec);
        let chunks = chunk_ranges(size);
        let hists: Vec<Vec<u64>> = chunks
            .into_par_iter()
            .map(|(start, end)| {
                let mut hist = vec![0u64; n + 1];
                let mut d = to_digits(start, p, digits);
                let mut word = base.clone();
                for j in 0..digits {
                    let g = (d[j] + p - d.get(j + 1).copied().unwrap_or(0)) % p;
                    if g != 0 {
                        let s = FieldElem(g);
                        for (x, &y) in word.iter_mut().zip(&gens[j]) {
                            *x = f.add(*x, f.mul(s, y));
                        }
                    }
                }
                let mut wt = word.iter().filter(|c| !c.is_zero()).count();
                hist[wt] += 1;
                for _ in start + 1..end {
                    // Incrementing the counter bumps exactly one Gray digit:
                    // the one at the number of trailing (p-1) digits.
                    let mut t = 0;
                    while d[t] == p - 1 {
                        d[t] = 0;
                        t += 1;
                    }
                    d[t] += 1;
                    for (x, &y) in word.iter_mut().zip(&gens[t]) {
                        if y.is_zero() {
                            continue;
                        }
                        let before = x.is_zero();
                        *x = f.add(*x, y);
                        match (before, x.is_zero()) {
                            (true, false) => wt += 1,
                            (false, true) => wt -= 1,
                            _ => {}
                        }
                    }
                    hist[wt] += 1;
                }
                hist
            })
            .collect();
        Ok(merge(hists, n))
    }

    fn binary_weights(&self, size: u64, offset: Option<&[FieldElem]>) -> Vec<u64> {
        let n = self.n();
        let limbs = n.div_ceil(64);
        let pack = |row: &[FieldElem]| {
            let mut v = vec![0u64; limbs];
            for (j, c) in row.iter().enumerate() {
                if !c.is_zero() {
                    v[j / 64] |= 1 << (j % 64);
                }
            }
            v
        };
        let gens: Vec<Vec<u64>> = (0..self.k()).map(|i| pack(self.generator.row(i))).collect();
        let base = offset.map_or_else(|| vec![0u64; limbs], pack);
        let hists: Vec<Vec<u64>> = chunk_ranges(size)
            .into_par_iter()
            .map(|(start, end)| {
                let mut hist = vec![0u64; n + 1];
                let gray = start ^ (start >> 1);
                let mut word = base.clone();
                for (j, g) in gens.iter().enumerate() {
                    if gray >> j & 1 == 1 {
                        for (x, y) in word.iter_mut().zip(g) {
                            *x ^= y;
                        }
                    }
                }
                hist[word.iter().map(|x| x.count_ones() as usize).sum::<usize>()] += 1;
                for i in start..end - 1 {
                    let g = &gens[i.trailing_ones() as usize];
                    let mut wt = 0;
                    for (x, y) in word.iter_mut().zip(g) {
                        *x ^= y;
                        wt += x.count_ones() as usize;
                    }
                    hist[wt] += 1;
                }
                hist
            })
            .collect();
        merge(hists, n)
    }

    /// Minimum Hamming distance from `word` to the code.
    pub fn distance_to(&self, word: &[FieldElem]) -> Result<usize> {
        let h = self.coset_weights(Some(word))?;
        Ok(h.iter().position(|&c| c > 0).expect("coset is nonempty"))
    }

    /// Text form: `q n k` then k rows of symbol indices.
    pub fn to_text(&self) -> String {
        let mut s = format!("{} {} {}\n", self.q(), self.n(), self.k());
        for i in 0..self.k() {
            let row = self.generator.row(i).iter().map(|c| c.0.to_string()).join(" ");
            let _ = writeln!(s, "{row}");
        }
        s
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = data_lines(text);
        let (ln, header) = lines.next().ok_or_else(|| Error::parse(1, "missing header"))?;
        let hv = parse_nums::<u64>(ln, header)?;
        let [q, n, k] = hv[..] else {
            return Err(Error::parse(ln, "header must be `q n k`"));
        };
        let field = Arc::new(FiniteField::of_order(q as u32)?);
        let mut rows = Vec::with_capacity(k as usize);
        for _ in 0..k {
            let (ln, l) = lines.next().ok_or_else(|| Error::parse(ln, "too few rows"))?;
            let r = parse_nums::<u32>(ln, l)?;
            if r.len() != n as usize {
                return Err(Error::parse(ln, format!("expected {n} symbols, found {}", r.len())));
            }
            rows.push(r.into_iter().map(|x| field.elem(x)).collect::<Result<Vec<_>>>()?);
        }
        if k == 0 {
            return Ok(Self::zero_code(field, n as usize));
        }
        Self::new(field, Matrix::from_rows(rows))
    }

    /// `w,count` lines for every weight with a nonzero count, plus a header.
    pub fn weights_csv(&self) -> Result<String> {
        let mut s = String::from("w,count\n");
        for (w, &c) in self.weight_distribution()?.iter().enumerate() {
            if c > 0 {
                let _ = writeln!(s, "{w},{c}");
            }
        }
        Ok(s)
    }
}

fn to_digits(mut x: u64, p: u32, len: usize) -> Vec<u32> {
    // One spare digit so the carry loop never runs off the end.
    let mut d = vec![0u32; len + 1];
    for slot in d.iter_mut().take(len) {
        *slot = (x % p as u64) as u32;
        x /= p as u64;
    }
    d
}

fn chunk_ranges(size: u64) -> Vec<(u64, u64)> {
    let parts = (rayon::current_num_threads() as u64 * 8).clamp(1, size.max(1));
    let step = size.div_ceil(parts).max(1);
    (0..size).step_by(step as usize).map(|s| (s, (s + step).min(size))).collect()
}

fn merge(hists: Vec<Vec<u64>>, n: usize) -> Vec<u64> {
    hists.into_iter().fold(vec![0u64; n + 1], |mut acc, h| {
        for (a, b) in acc.iter_mut().zip(h) {
            *a += b;
        }
        acc
    })
}

/// Non-empty, non-comment lines with their 1-based line numbers.
pub(crate) fn data_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty())
}

pub(crate) fn parse_nums<T: std::str::FromStr>(ln: usize, l: &str) -> Result<Vec<T>> {
    l.split(|c: char| c.is_whitespace() || c == ',')
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<T>().map_err(|_| Error::parse(ln, format!("bad number {t:?}"))))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::families;
    use proptest::prelude::*;

    fn gf(q: u32) -> Arc<FiniteField> {
        Arc::new(FiniteField::of_order(q).unwrap())
    }

    /// Plain nested-loop enumeration over all messages.
    fn brute_weights(c: &LinearCode) -> Vec<u64> {
        let q = c.q();
        let mut hist = vec![0u64; c.n() + 1];
        let total = (q as u64).pow(c.k() as u32);
        for idx in 0..total {
            let mut x = idx;
            let msg: Vec<FieldElem> = (0..c.k())
                .map(|_| {
                    let d = (x % q as u64) as u32;
                    x /= q as u64;
                    FieldElem(d)
                })
                .collect();
            let w = c.encode(&msg).iter().filter(|e| !e.is_zero()).count();
            hist[w] += 1;
        }
        hist
    }

    #[test]
    fn repetition_code() {
        let f = gf(2);
        let c = LinearCode::new(f, Matrix::from_u32_rows(&[vec![1; 5]])).unwrap();
        assert_eq!(c.weight_distribution().unwrap(), &[1, 0, 0, 0, 0, 1]);
    }

    #[test]
    fn extended_hamming_weights() {
        let c = families::extended_hamming_8();
        let w = c.weight_distribution().unwrap();
        assert_eq!(w[4], 14);
        assert_eq!(w.iter().sum::<u64>(), 16);
        assert_eq!(c.min_distance().unwrap(), 4);
    }

    #[test]
    fn listed_words_match_counts() {
        let c = families::rs_code(gf(4), 2).unwrap();
        let words = c.words_of_weight(3).unwrap();
        assert_eq!(words.len() as u64, c.weight_distribution().unwrap()[3]);
        assert!(words.iter().all(|w| c.contains(w)));
    }

    #[test]
    fn gray_matches_brute_force_nonbinary() {
        for q in [3, 4, 5, 8, 9] {
            let c = families::rs_code(gf(q), 2).unwrap();
            assert_eq!(c.weight_distribution().unwrap(), brute_weights(&c).as_slice(), "q={q}");
        }
    }

    #[test]
    fn support_route_agrees_with_enumeration() {
        for (q, a) in [(4, 2), (8, 4), (5, 1)] {
            let c = families::rs_code(gf(q), a).unwrap();
            let (d, ad) = c.min_weight_by_supports().unwrap();
            let w = c.weight_distribution().unwrap();
            assert_eq!(d, c.min_distance().unwrap());
            assert_eq!(ad, w[d] as u128);
        }
    }

    #[test]
    fn budget_is_enforced() {
        let c = families::rs_code(gf(16), 8).unwrap();
        assert!(matches!(c.weight_distribution(), Err(Error::BudgetExceeded { .. })));
    }

    #[test]
    fn text_roundtrip() {
        let c = families::rs_code(gf(8), 3).unwrap();
        let back = LinearCode::parse(&c.to_text()).unwrap();
        assert_eq!(back.generator(), c.generator());
    }

    #[test]
    fn distance_to_code() {
        let c = families::extended_hamming_8();
        let mut v = vec![FieldElem::ZERO; 8];
        v[0] = FieldElem::ONE;
        assert_eq!(c.distance_to(&v).unwrap(), 1);
        v[1] = FieldElem::ONE;
        assert_eq!(c.distance_to(&v).unwrap(), 2);
    }

    fn arb_code(q: u32) -> impl Strategy<Value = LinearCode> {
        (2usize..12, 1usize..5).prop_flat_map(move |(n, k)| {
            let k = k.min(n);
            proptest::collection::vec(proptest::collection::vec(0..q, n), k)
                .prop_filter_map("rank deficient", move |rows| {
                    LinearCode::new(gf(q), Matrix::from_u32_rows(&rows)).ok()
                })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn dual_is_an_involution(c in prop_oneof![arb_code(2), arb_code(3), arb_code(4)]) {
            prop_assert!(c.dual().dual().same_code(&c));
            prop_assert_eq!(c.dual().k(), c.n() - c.k());
        }

        #[test]
        fn singleton_and_totals(c in prop_oneof![arb_code(2), arb_code(4)]) {
            let d = c.min_distance().unwrap();
            prop_assert!(d <= c.n() - c.k() + 1);
            let w = c.weight_distribution().unwrap();
            prop_assert_eq!(w[0], 1);
            prop_assert_eq!(w.iter().sum::<u64>(), c.size().unwrap());
            let brute = brute_weights(&c);
            prop_assert_eq!(w, brute.as_slice());
        }
    }
}
