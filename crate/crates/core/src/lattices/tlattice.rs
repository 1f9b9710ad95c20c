use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::algebra::intmat::{big_to_i128, hnf, log2_exact};
use crate::algebra::{DyadicRational, FieldElem, FiniteField, IntMatrix, Matrix};
use crate::codes::linear::{data_lines, parse_nums};
use crate::codes::NestedCodeChain;
use crate::error::{Error, Result};
use crate::lattices::construct::{block_diag, lattice_from_generators, DyadicVector};
use crate::lattices::{shortest_vectors, ClosestSolver, DyadicLattice, EnumOptions};

/// A lattice with a dyadic linear map T (acting on column vectors) and the
/// data tying T to the lattice: T^nu = A/2, [TΛ : Λ] = 2^b, |Tv|^2 = R^2 on
/// minimal vectors.
#[derive(Clone, Debug)]
pub struct TLattice {
    lattice: DyadicLattice,
    t: IntMatrix,
    t_exp: u32,
    a: IntMatrix,
    nu: u32,
    b: u32,
    min_norm: DyadicRational,
    r2: DyadicRational,
    minimal: Vec<DyadicVector>,
    selected: Vec<DyadicVector>,
}

/// Minimum norm and all minimal vectors (both signs) in ambient coordinates.
pub fn minimal_vectors(lat: &DyadicLattice) -> Result<(DyadicRational, Vec<DyadicVector>)> {
    let b = lat.basis().ok_or_else(|| Error::InvalidParameter("lattice has no basis".into()))?;
    let s = shortest_vectors(lat, &EnumOptions { collect: true, ..Default::default() })?;
    let vs = s
        .vectors
        .unwrap_or_default()
        .iter()
        .map(|x| Ok(DyadicVector::new(b.vec_mul(x)?, lat.exp())))
        .collect::<Result<Vec<_>>>()?;
    Ok((s.min_norm, vs))
}

fn rational(d: DyadicRational) -> BigRational {
    BigRational::new(d.numerator().into(), BigInt::one() << d.exponent() as usize)
}

fn mat_pow(m: &IntMatrix, k: u32) -> Result<IntMatrix> {
    let mut out = IntMatrix::identity(m.rows());
    for _ in 0..k {
        out = out.checked_mul(m)?;
    }
    Ok(out)
}

/// Coordinates against a square rational-invertible integer basis.
struct Coordinates {
    inv: Vec<Vec<BigRational>>,
    exp: u32,
}

impl Coordinates {
    fn new(basis: &IntMatrix, exp: u32) -> Result<Self> {
        let inv = basis.inverse_rational().ok_or_else(|| Error::Degenerate("singular basis".into()))?;
        Ok(Coordinates { inv, exp })
    }

    /// Integer coordinates of v, or None if v is not in the lattice.
    fn of(&self, v: &DyadicVector) -> Result<Option<Vec<i128>>> {
        let n = self.inv.len();
        let (num, den) = if v.exp() <= self.exp {
            (v.at_scale(self.exp)?, BigInt::one())
        } else {
            (v.numerators().to_vec(), BigInt::one() << (v.exp() - self.exp) as usize)
        };
        let mut out = Vec::with_capacity(n);
        for j in 0..n {
            let c = (0..n)
                .fold(BigRational::zero(), |acc, i| acc + BigRational::from_integer(num[i].into()) * &self.inv[i][j])
                / BigRational::from_integer(den.clone());
            if !c.is_integer() {
                return Ok(None);
            }
            out.push(big_to_i128(&c.to_integer())?);
        }
        Ok(Some(out))
    }
}

/// One line of an axiom report.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct AxiomCheck {
    pub axiom: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct TAxiomReport {
    pub checks: Vec<AxiomCheck>,
    /// [TΛ : Λ] when Λ ⊆ TΛ.
    pub index: Option<String>,
    pub passed: bool,
}

impl TAxiomReport {
    pub fn check(&self, prefix: &str) -> Option<&AxiomCheck> {
        self.checks.iter().find(|c| c.axiom.starts_with(prefix))
    }
}

impl TLattice {
    /// Builds a T-lattice candidate. The minimum norm M is computed by
    /// enumeration; b = m/nu; minimal vectors v with Tv independent in
    /// TΛ/Λ are selected greedily in enumeration order.
    pub fn new(
        lattice: DyadicLattice,
        t: IntMatrix,
        t_exp: u32,
        a: IntMatrix,
        nu: u32,
        r2: DyadicRational,
    ) -> Result<Self> {
        let m = lattice.dim();
        let basis = lattice.basis().ok_or_else(|| Error::InvalidParameter("T-lattice needs a basis".into()))?;
        if !basis.is_square() {
            return Err(Error::InvalidParameter("T-lattice needs a full-rank basis".into()));
        }
        if t.rows() != m || !t.is_square() || a.rows() != m || !a.is_square() {
            return Err(Error::InvalidParameter("T and A must be m x m".into()));
        }
        if nu == 0 || !(m as u32).is_multiple_of(nu) {
            return Err(Error::InvalidParameter(format!("nu = {nu} must divide m = {m}")));
        }
        let b = m as u32 / nu;
        let (min_norm, minimal) = minimal_vectors(&lattice)?;
        let mut tl = TLattice { lattice, t, t_exp, a, nu, b, min_norm, r2, minimal, selected: Vec::new() };
        tl.selected = tl.select()?;
        Ok(tl)
    }

    pub fn lattice(&self) -> &DyadicLattice {
        &self.lattice
    }

    pub fn named(mut self, name: &str) -> Self {
        self.lattice = self.lattice.with_name(name);
        self
    }

    pub fn dim(&self) -> usize {
        self.lattice.dim()
    }

    /// Numerators of T and their exponent: T = t / 2^t_exp.
    pub fn t(&self) -> (&IntMatrix, u32) {
        (&self.t, self.t_exp)
    }

    pub fn automorphism(&self) -> &IntMatrix {
        &self.a
    }

    pub fn nu(&self) -> u32 {
        self.nu
    }

    pub fn b(&self) -> u32 {
        self.b
    }

    /// Order of the code alphabet, 2^b.
    pub fn q(&self) -> u32 {
        1 << self.b
    }

    pub fn min_norm(&self) -> DyadicRational {
        self.min_norm
    }

    pub fn r2(&self) -> DyadicRational {
        self.r2
    }

    pub fn minimal(&self) -> &[DyadicVector] {
        &self.minimal
    }

    pub fn selected(&self) -> &[DyadicVector] {
        &self.selected
    }

    /// T^power v.
    pub fn apply_t(&self, v: &DyadicVector, power: u32) -> Result<DyadicVector> {
        let mut num = v.numerators().to_vec();
        let tt = self.t.transpose();
        for _ in 0..power {
            num = tt.vec_mul(&num)?;
        }
        Ok(DyadicVector::new(num, v.exp() + power * self.t_exp))
    }

    fn basis_vectors(&self) -> Vec<DyadicVector> {
        let b = self.lattice.basis().expect("checked at construction");
        b.row_vecs().into_iter().map(|r| DyadicVector::new(r, self.lattice.exp())).collect()
    }

    /// The lattice TΛ.
    pub fn t_lattice(&self) -> Result<DyadicLattice> {
        let gens = self.basis_vectors().iter().map(|v| self.apply_t(v, 1)).collect::<Result<Vec<_>>>()?;
        lattice_from_generators(&gens)
    }

    /// Quotient data for TΛ/Λ: coordinates in TΛ and the image of Λ mod 2.
    fn quotient(&self) -> Result<(Coordinates, Matrix, Arc<FiniteField>)> {
        let tl = self.t_lattice()?;
        let coords = Coordinates::new(tl.basis().expect("basis form"), tl.exp())?;
        let f2 = Arc::new(FiniteField::of_order(2)?);
        let mut rows = Vec::new();
        for v in self.basis_vectors() {
            let c = coords.of(&v)?.ok_or_else(|| Error::Precondition("Λ is not contained in TΛ".into()))?;
            rows.push(c.iter().map(|x| FieldElem(x.rem_euclid(2) as u32)).collect());
        }
        Ok((coords, Matrix::from_rows(rows), f2))
    }

    fn class(coords: &Coordinates, w: &DyadicVector) -> Result<Vec<FieldElem>> {
        let c = coords.of(w)?.ok_or_else(|| Error::Precondition("vector not in TΛ".into()))?;
        Ok(c.iter().map(|x| FieldElem(x.rem_euclid(2) as u32)).collect())
    }

    fn select(&self) -> Result<Vec<DyadicVector>> {
        let Ok((coords, w, f2)) = self.quotient() else { return Ok(Vec::new()) };
        let base_rank = w.rank(&f2);
        let mut acc = w.clone();
        let mut out = Vec::new();
        for v in &self.minimal {
            if out.len() as u32 == self.b {
                break;
            }
            let cls = Self::class(&coords, &self.apply_t(v, 1)?)?;
            let mut trial = acc.clone();
            trial.push_row(&cls);
            if trial.rank(&f2) > base_rank + out.len() {
                acc = trial;
                out.push(v.clone());
            }
        }
        Ok(out)
    }

    /// sigma_i(x) = sum_j x_j T^i v_{r_j}, with x_j the coordinates of
    /// `elem` in the polynomial basis of GF(2^b).
    pub fn sigma(&self, field: &FiniteField, level: u32, elem: FieldElem) -> Result<DyadicVector> {
        if field.order() != self.q() {
            return Err(Error::FieldMismatch { expected: self.q(), found: field.order() });
        }
        if level == 0 {
            return Err(Error::InvalidParameter("sigma level must be >= 1".into()));
        }
        if self.selected.len() as u32 != self.b {
            return Err(Error::Precondition("T-lattice lacks b independent selected vectors".into()));
        }
        let mut out = DyadicVector::zeros(self.dim());
        for (j, &c) in field.coords(elem).iter().enumerate() {
            if c == 1 {
                out = out.add(&self.apply_t(&self.selected[j], level)?)?;
            }
        }
        Ok(out)
    }

    /// Text form:
    /// ```text
    /// tlattice
    /// m e
    /// <m rows: basis numerators at scale 2^-e>
    /// t t_exp
    /// <m rows: numerators of T at scale 2^-t_exp>
    /// a
    /// <m rows of A>
    /// nu nu
    /// r2 R^2
    /// ```
    pub fn to_text(&self) -> String {
        let rows = |m: &IntMatrix| {
            m.row_vecs()
                .iter()
                .map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ") + "\n")
                .collect::<String>()
        };
        let basis = self.lattice.basis().expect("basis form");
        format!(
            "tlattice\n{} {}\n{}t {}\n{}a\n{}nu {}\nr2 {}\n",
            self.dim(),
            self.lattice.exp(),
            rows(basis),
            self.t_exp,
            rows(&self.t),
            rows(&self.a),
            self.nu,
            self.r2
        )
    }

    pub fn parse(text: &str) -> Result<Self> {
        let lines: Vec<(usize, &str)> = data_lines(text).collect();
        let mut pos = 0;
        let (ln, head) = take(&lines, &mut pos, "header")?;
        if head != "tlattice" {
            return Err(Error::parse(ln, "header must be `tlattice`"));
        }
        let (ln, dims) = take(&lines, &mut pos, "`m e` line")?;
        let v = parse_nums::<u32>(ln, dims)?;
        let [m, e] = v[..] else { return Err(Error::parse(ln, "expected `m e`")) };
        let m = m as usize;
        if m == 0 || m > crate::lattices::MAX_ENUM_DIM {
            return Err(Error::parse(ln, format!("dimension {m} out of range")));
        }
        let basis = take_matrix(&lines, &mut pos, m)?;
        let (ln, t_exp) = take_tagged(&lines, &mut pos, "t")?;
        let t_exp: u32 = t_exp.parse().map_err(|_| Error::parse(ln, "bad T exponent"))?;
        let t = take_matrix(&lines, &mut pos, m)?;
        let (ln, rest) = take_tagged(&lines, &mut pos, "a")?;
        if !rest.is_empty() {
            return Err(Error::parse(ln, "`a` takes no arguments"));
        }
        let a = take_matrix(&lines, &mut pos, m)?;
        let (ln, nu) = take_tagged(&lines, &mut pos, "nu")?;
        let nu: u32 = nu.parse().map_err(|_| Error::parse(ln, "bad nu"))?;
        let (ln, r2) = take_tagged(&lines, &mut pos, "r2")?;
        let r2: DyadicRational = r2.parse().map_err(|_| Error::parse(ln, "bad R^2"))?;
        if let Some(&(ln, _)) = lines.get(pos) {
            return Err(Error::parse(ln, "trailing data"));
        }
        TLattice::new(DyadicLattice::from_basis(basis, e)?, t, t_exp, a, nu, r2)
    }

    /// For each element x of GF(2^b) (by index), a vector T v with v minimal
    /// and T v ≡ sigma_1(x) mod Λ, if one exists. By axiom (ii) it is a
    /// minimal-norm representative of its class. Index 0 maps to zero.
    pub fn sigma_representatives(&self, field: &FiniteField) -> Result<Vec<Option<DyadicVector>>> {
        let coords = Coordinates::new(self.lattice.basis().expect("basis form"), self.lattice.exp())?;
        // Class of w in TΛ/Λ: coordinates of 2w in Λ, reduced mod 2.
        let key = |w: &DyadicVector| -> Result<Vec<i128>> {
            let twice = DyadicVector::new(w.numerators().iter().map(|x| 2 * x).collect(), w.exp());
            let c = coords.of(&twice)?.ok_or_else(|| Error::Precondition("2TΛ is not contained in Λ".into()))?;
            Ok(c.iter().map(|x| x.rem_euclid(2)).collect())
        };
        let mut by_class = std::collections::HashMap::new();
        for v in &self.minimal {
            let tv = self.apply_t(v, 1)?;
            by_class.entry(key(&tv)?).or_insert(tv);
        }
        field
            .elements()
            .map(|x| {
                if x.is_zero() {
                    return Ok(Some(DyadicVector::zeros(self.dim())));
                }
                Ok(by_class.get(&key(&self.sigma(field, 1, x)?)?).cloned())
            })
            .collect()
    }

    /// Checks the T-lattice axioms exactly and itemizes the outcome.
    pub fn verify(&self) -> Result<TAxiomReport> {
        let mut checks = Vec::new();
        let mut push =
            |axiom: &str, passed: bool, detail: String| checks.push(AxiomCheck { axiom: axiom.into(), passed, detail });
        let m = self.dim() as u32;
        let e = self.lattice.exp();

        // (i) minimal vectors span Λ.
        let basis = self.lattice.basis().expect("basis form");
        let h_basis = hnf(basis.cols(), basis.row_vecs().iter().map(|r| r.as_slice()))?;
        let mins = self.minimal.iter().map(|v| v.at_scale(e)).collect::<Result<Vec<_>>>()?;
        let h_min = hnf(basis.cols(), mins.iter().map(|r| r.as_slice()))?;
        push(
            "(i) minimal vectors span",
            h_min == h_basis,
            format!("{} minimal vectors of norm {}", self.minimal.len(), self.min_norm),
        );

        // (ii) |Tv|^2 = R^2 and dist(Tv, Λ)^2 = R^2 on minimal vectors.
        let solver = ClosestSolver::new(&self.lattice)?;
        let mut bad_norm = 0usize;
        let mut bad_dist = 0usize;
        let mut seen = std::collections::HashSet::new();
        for v in &self.minimal {
            if seen.contains(&v.neg()) {
                continue;
            }
            seen.insert(v.clone());
            let tv = self.apply_t(v, 1)?;
            if tv.norm() != self.r2 {
                bad_norm += 1;
                continue;
            }
            if solver.distance(&tv.entries(), self.r2)? != Some(self.r2) {
                bad_dist += 1;
            }
        }
        push(
            "(ii) |Tv|^2 = dist(Tv, Λ)^2 = R^2",
            bad_norm == 0 && bad_dist == 0,
            format!("R^2 = {}; {bad_norm} norm failures, {bad_dist} distance failures", self.r2),
        );

        // (iii) T^nu = A/2 with A an automorphism of Λ.
        let tn = mat_pow(&self.t, self.nu)?;
        let lhs = tn.scale(2)?;
        let rhs = self.a.scale(1i128 << (self.nu * self.t_exp))?;
        let aat = self.a.checked_mul(&self.a.transpose())?;
        let coords_l = Coordinates::new(basis, e)?;
        let mut preserves = true;
        for v in self.basis_vectors() {
            let av = DyadicVector::new(self.a.transpose().vec_mul(v.numerators())?, v.exp());
            preserves &= coords_l.of(&av)?.is_some();
        }
        push(
            "(iii) T^nu = A/2, A automorphism",
            lhs == rhs && aat == IntMatrix::identity(m as usize) && preserves,
            format!(
                "T^nu = A/2: {}, A orthogonal: {}, AΛ = Λ: {preserves}",
                lhs == rhs,
                aat == IntMatrix::identity(m as usize)
            ),
        );

        // (iv) Λ ⊆ TΛ with index 2^b, and (v) |det T| = 2^-b.
        let det_t = BigRational::new(self.t.det(), BigInt::one() << (m * self.t_exp) as usize);
        let index_value = det_t.abs().recip();
        let quotient = self.quotient();
        let contained = quotient.is_ok();
        let index = contained.then(|| index_value.to_string());
        let q = BigRational::from_integer(BigInt::from(self.q()));
        push(
            "(iv) Λ ⊆ TΛ, [TΛ:Λ] = 2^b",
            contained && index_value == q,
            format!("contained: {contained}, index {index_value}, 2^b = {}", self.q()),
        );
        push("(v) |det T| = 2^-b", det_t.abs() == q.recip(), format!("|det T| = {}", det_t.abs()));

        // t = R/sqrt(M): t^m = 2^-b and the sign of the exponent in t = 2^(±1/nu).
        let t2 = rational(self.r2) / rational(self.min_norm);
        let tm2 = num_traits::pow::pow(t2.clone(), m as usize);
        push("t^m = 2^-b", tm2 == q.clone().recip() * q.clone().recip(), format!("t^2 = R^2/M = {t2}"));
        let t2nu = num_traits::pow::pow(t2.clone(), self.nu as usize);
        let quarter = BigRational::new(1.into(), 4.into());
        push(
            "t-exponent",
            t2nu == quarter,
            format!("t^nu = 2^-1 requires t = 2^(-1/nu); t^(2 nu) = {t2nu}; the exponent +1/nu would contradict (v)"),
        );

        // TΛ/Λ elementary abelian and generated by the selected T v_r.
        let (elementary, rank) = match &quotient {
            Ok((coords_t, w, f2)) => {
                let tl = self.t_lattice()?;
                let tlb = tl.basis().expect("basis form");
                let mut elem = true;
                for r in tlb.row_vecs() {
                    let twice = DyadicVector::new(r.iter().map(|x| 2 * x).collect(), tl.exp());
                    elem &= coords_l.of(&twice)?.is_some();
                }
                let mut acc = w.clone();
                for v in &self.selected {
                    acc.push_row(&Self::class(coords_t, &self.apply_t(v, 1)?)?);
                }
                (elem, acc.rank(f2) - w.rank(f2))
            }
            Err(_) => (false, 0),
        };
        push(
            "TΛ/Λ generated by T v_r",
            elementary && rank as u32 == self.b && self.selected.len() as u32 == self.b,
            format!("2TΛ ⊆ Λ: {elementary}, GF(2)-rank of selected classes {rank}, b = {}", self.b),
        );

        let passed = checks.iter().all(|c| c.passed);
        Ok(TAxiomReport { checks, index, passed })
    }
}

/// The minimum norm predicted for Construction E:
/// min(M, min_i d_i R^{2i} M^{1-i}).
pub fn construction_e_min_norm(base: &TLattice, chain: &NestedCodeChain) -> BigRational {
    let m = rational(base.min_norm);
    let r2 = rational(base.r2);
    let mut best = m.clone();
    for i in 1..=chain.depth() {
        let d = BigRational::from_integer(BigInt::from(chain.distances()[i]));
        let v = d * num_traits::pow::pow(r2.clone(), i) / num_traits::pow::pow(m.clone(), i - 1);
        if v < best {
            best = v;
        }
    }
    best
}

fn check_chain_field(base: &TLattice, chain: &NestedCodeChain) -> Result<()> {
    if chain.q() != base.q() {
        return Err(Error::FieldMismatch { expected: base.q(), found: chain.q() });
    }
    if base.selected.len() as u32 != base.b {
        return Err(Error::Precondition("base T-lattice lacks b independent selected vectors".into()));
    }
    Ok(())
}

/// Construction E: Λ^n plus sigma_i(w^t c) for every level i >= 1, every
/// basis element w^t of GF(2^b) and every joint-basis row c of C_i.
pub fn construction_e(base: &TLattice, chain: &NestedCodeChain) -> Result<DyadicLattice> {
    check_chain_field(base, chain)?;
    let field = chain.field();
    let (m, n) = (base.dim(), chain.n());
    if m * n > crate::lattices::MAX_ENUM_DIM {
        return Err(Error::BudgetExceeded {
            what: "Construction E dimension",
            needed: (m * n) as u128,
            budget: crate::lattices::MAX_ENUM_DIM as u128,
        });
    }
    let mut gens = Vec::new();
    for k in 0..n {
        for v in base.basis_vectors() {
            let mut blocks = vec![DyadicVector::zeros(m); n];
            blocks[k] = v;
            gens.push(DyadicVector::concat(&blocks)?);
        }
    }
    let rows = chain.basis().row_vecs();
    for i in 1..=chain.depth() {
        for c in &rows[..chain.dims()[i]] {
            for t in 0..base.b {
                let w = field.basis_elem(t);
                let blocks =
                    c.iter().map(|&x| base.sigma(field, i as u32, field.mul(w, x))).collect::<Result<Vec<_>>>()?;
                gens.push(DyadicVector::concat(&blocks)?);
            }
        }
    }
    lattice_from_generators(&gens)
}

/// Construction E with the block-diagonal T and A inherited from the base,
/// giving a T-lattice with b' = n b.
pub fn construction_e_tlattice(base: &TLattice, chain: &NestedCodeChain) -> Result<TLattice> {
    let lat = construction_e(base, chain)?;
    let n = chain.n();
    let t = block_diag(&vec![&base.t; n]);
    let a = block_diag(&vec![&base.a; n]);
    let (min_norm, _) = minimal_vectors(&lat)?;
    // R'^2 = t^2 M' with t^2 = R^2/M of the base.
    let t2 = rational(base.r2) / rational(base.min_norm);
    let r2 = t2 * rational(min_norm);
    let r2 = to_dyadic(&r2).ok_or_else(|| Error::Degenerate(format!("R^2 = {r2} is not dyadic")))?;
    TLattice::new(lat, t, base.t_exp, a, base.nu, r2)
}

fn to_dyadic(r: &BigRational) -> Option<DyadicRational> {
    let den = r.denom();
    let e = log2_exact(den)?;
    Some(DyadicRational::new(r.numer().to_i128()?, e as u32))
}

fn take<'a>(lines: &[(usize, &'a str)], pos: &mut usize, what: &str) -> Result<(usize, &'a str)> {
    let l = lines
        .get(*pos)
        .copied()
        .ok_or_else(|| Error::parse(lines.last().map_or(0, |l| l.0), format!("missing {what}")))?;
    *pos += 1;
    Ok(l)
}

fn take_tagged<'a>(lines: &[(usize, &'a str)], pos: &mut usize, tag: &str) -> Result<(usize, &'a str)> {
    let (ln, l) = take(lines, pos, tag)?;
    let mut parts = l.splitn(2, char::is_whitespace);
    if parts.next() != Some(tag) {
        return Err(Error::parse(ln, format!("expected `{tag}`")));
    }
    Ok((ln, parts.next().unwrap_or("").trim()))
}

fn take_matrix(lines: &[(usize, &str)], pos: &mut usize, m: usize) -> Result<IntMatrix> {
    let mut rows = Vec::with_capacity(m);
    for _ in 0..m {
        let (ln, l) = take(lines, pos, "matrix row")?;
        let r = parse_nums::<i128>(ln, l)?;
        if r.len() != m {
            return Err(Error::parse(ln, format!("expected {m} entries, found {}", r.len())));
        }
        rows.push(r);
    }
    Ok(IntMatrix::from_rows(&rows))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattices::catalog::z2_t;

    #[test]
    fn z2_passes_all_axioms() {
        let z2 = z2_t().unwrap();
        let rep = z2.verify().unwrap();
        assert!(rep.passed, "{rep:#?}");
        assert_eq!(rep.index.as_deref(), Some("2"));
        assert_eq!(z2.selected().len(), 1);
    }

    #[test]
    fn text_round_trip() {
        let d4 = crate::lattices::catalog::d4_t().unwrap();
        let back = TLattice::parse(&d4.to_text()).unwrap();
        assert_eq!(back.lattice().gram(), d4.lattice().gram());
        assert_eq!(back.to_text(), d4.to_text());
        assert!(back.verify().unwrap().passed);
        assert!(matches!(TLattice::parse("tlattice\n2 0\n2 0\n0 2\nt 1\n1 -1\n"), Err(Error::Parse { .. })));
    }

    #[test]
    fn identity_map_fails_index() {
        let l = DyadicLattice::from_basis(IntMatrix::identity(2), 0).unwrap();
        let tl = TLattice::new(l, IntMatrix::identity(2), 0, IntMatrix::identity(2), 2, DyadicRational::from_int(1))
            .unwrap();
        let rep = tl.verify().unwrap();
        assert!(!rep.passed);
        assert!(!rep.check("(iv)").unwrap().passed);
    }

    #[test]
    fn sigma_basics() {
        let z2 = z2_t().unwrap();
        let f = FiniteField::of_order(2).unwrap();
        assert!(z2.sigma(&f, 1, FieldElem::ZERO).unwrap().is_zero());
        let s = z2.sigma(&f, 1, FieldElem::ONE).unwrap();
        assert_eq!(s.norm(), z2.r2());
        assert!(matches!(
            z2.sigma(&FiniteField::of_order(4).unwrap(), 1, FieldElem::ONE),
            Err(Error::FieldMismatch { .. })
        ));
    }
}
