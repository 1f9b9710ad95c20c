use std::collections::BTreeMap;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};

use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{DyadicRational, IntMatrix};
use crate::error::{Error, Result};
use crate::lattices::lll::lll_gram;
use crate::lattices::DyadicLattice;

/// Largest lattice dimension the enumerator accepts.
pub const MAX_ENUM_DIM: usize = 32;

/// Default cap on visited enumeration nodes.
pub const NODE_BUDGET: u64 = 1 << 38;

/// Minimum norm and its multiplicity.
#[derive(Clone, Debug, Serialize)]
pub struct ShortVectors {
    pub min_norm: DyadicRational,
    /// Number of lattice vectors of norm `min_norm`, both signs counted.
    pub count: u128,
    /// The vectors themselves in coordinates of the input basis, when
    /// requested.
    #[serde(skip)]
    pub vectors: Option<Vec<Vec<i128>>>,
    pub nodes: u64,
}

/// Enumeration knobs.
#[derive(Clone, Debug)]
pub struct EnumOptions {
    /// Search radius (squared norm). Defaults to the shortest reduced basis
    /// vector, which always contains a minimal vector.
    pub norm_bound: Option<DyadicRational>,
    pub collect: bool,
    pub node_budget: u64,
}

impl Default for EnumOptions {
    fn default() -> Self {
        EnumOptions { norm_bound: None, collect: false, node_budget: NODE_BUDGET }
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Mode {
    /// Nonzero vectors up to sign; the bound shrinks to the best seen.
    Shortest,
    /// Nonzero vectors up to sign with a fixed bound.
    Theta,
    /// All lattice points near a target.
    Closest,
}

/// Gram-Schmidt data of an integral Gram matrix in floating point.
pub(crate) struct Gso {
    pub(crate) mu: Vec<Vec<f64>>,
    pub(crate) b: Vec<f64>,
}

pub(crate) fn gso(g: &IntMatrix) -> Result<Gso> {
    let n = g.rows();
    let mut mu = vec![vec![0f64; n]; n];
    let mut b = vec![0f64; n];
    for i in 0..n {
        for j in 0..i {
            let mut s = g[(i, j)] as f64;
            for k in 0..j {
                s -= mu[i][k] * mu[j][k] * b[k];
            }
            mu[i][j] = s / b[j];
        }
        let mut s = g[(i, i)] as f64;
        for k in 0..i {
            s -= mu[i][k] * mu[i][k] * b[k];
        }
        if s <= 0.0 {
            return Err(Error::Degenerate("Gram matrix is numerically singular".into()));
        }
        b[i] = s;
    }
    Ok(Gso { mu, b })
}

/// Per-job accumulator.
#[derive(Default)]
struct Acc {
    best: Option<i128>,
    count: u128,
    hist: BTreeMap<i128, u128>,
    vectors: Vec<Vec<i64>>,
}

struct Engine<'a> {
    n: usize,
    gso: Gso,
    center: Vec<f64>,
    mode: Mode,
    collect: bool,
    /// Float units per exact unit of the leaf function.
    unit: f64,
    bound: AtomicU64,
    leaf: &'a (dyn Fn(&[i64]) -> i128 + Sync),
    nodes: AtomicU64,
    budget: u64,
    abort: AtomicBool,
}

struct Job {
    x: Vec<i64>,
    level: usize,
    partial: f64,
    zero_above: bool,
}

impl Engine<'_> {
    fn bound_f(&self) -> f64 {
        let b = self.bound.load(Ordering::Relaxed) as f64 * self.unit;
        b + 1e-9 * b.max(1.0)
    }

    fn center_at(&self, x: &[i64], i: usize) -> f64 {
        let mut c = self.center[i];
        for j in i + 1..self.n {
            c -= self.gso.mu[j][i] * (x[j] as f64 - self.center[j]);
        }
        c
    }

    /// Admissible values at level i, in scan order, with their partial sums.
    fn children(&self, x: &[i64], i: usize, partial: f64, zero_above: bool) -> Vec<(i64, f64)> {
        let c = self.center_at(x, i);
        let bi = self.gso.b[i];
        let mut out = Vec::new();
        let halve = self.mode != Mode::Closest && zero_above;
        let x0 = c.round() as i64;
        for dir in [1i64, -1] {
            let mut v = if dir == 1 { x0 } else { x0 - 1 };
            loop {
                if halve && v < 0 {
                    break;
                }
                let t = bi * (v as f64 - c).powi(2);
                if partial + t > self.bound_f() {
                    break;
                }
                out.push((v, partial + t));
                v += dir;
            }
        }
        out
    }

    fn tick(&self, local: &mut u64) -> Result<()> {
        *local += 1;
        if *local >= 4096 {
            let total = self.nodes.fetch_add(*local, Ordering::Relaxed) + *local;
            *local = 0;
            if total > self.budget {
                self.abort.store(true, Ordering::Relaxed);
            }
        }
        if self.abort.load(Ordering::Relaxed) {
            return Err(Error::BudgetExceeded {
                what: "lattice enumeration nodes",
                needed: self.nodes.load(Ordering::Relaxed) as u128,
                budget: self.budget as u128,
            });
        }
        Ok(())
    }

    fn dfs(
        &self,
        x: &mut Vec<i64>,
        i: usize,
        partial: f64,
        zero_above: bool,
        acc: &mut Acc,
        local: &mut u64,
    ) -> Result<()> {
        self.tick(local)?;
        for (v, p) in self.children(x, i, partial, zero_above) {
            if p > self.bound_f() {
                continue;
            }
            x[i] = v;
            let za = zero_above && v == 0;
            if i == 0 {
                if self.mode != Mode::Closest && za {
                    continue;
                }
                self.visit_leaf(x, acc);
            } else {
                self.dfs(x, i - 1, p, za, acc, local)?;
            }
        }
        x[i] = 0;
        Ok(())
    }

    fn visit_leaf(&self, x: &[i64], acc: &mut Acc) {
        let norm = (self.leaf)(x);
        let bound = self.bound.load(Ordering::Relaxed) as i128;
        if norm > bound {
            return;
        }
        match self.mode {
            Mode::Theta => {
                *acc.hist.entry(norm).or_default() += 1;
                if self.collect {
                    acc.vectors.push(x.to_vec());
                }
            }
            Mode::Shortest | Mode::Closest => {
                match acc.best {
                    Some(b) if norm > b => return,
                    Some(b) if norm == b => acc.count += 1,
                    _ => {
                        acc.best = Some(norm);
                        acc.count = 1;
                        acc.vectors.clear();
                        if self.mode == Mode::Shortest {
                            self.bound.fetch_min(norm as u64, Ordering::Relaxed);
                        }
                    }
                }
                if self.collect {
                    acc.vectors.push(x.to_vec());
                }
            }
        }
    }

    /// Expands the top of the tree breadth-first into independent jobs.
    fn jobs(&self) -> Vec<Job> {
        let mut jobs = vec![Job { x: vec![0; self.n], level: self.n - 1, partial: 0.0, zero_above: true }];
        let target = 4 * rayon::current_num_threads().max(1) * 16;
        while jobs.len() < target && jobs.iter().all(|j| j.level > 2) {
            let mut next = Vec::new();
            for j in jobs {
                for (v, p) in self.children(&j.x, j.level, j.partial, j.zero_above) {
                    let mut x = j.x.clone();
                    x[j.level] = v;
                    next.push(Job { x, level: j.level - 1, partial: p, zero_above: j.zero_above && v == 0 });
                }
            }
            jobs = next;
            if jobs.is_empty() {
                break;
            }
        }
        jobs
    }

    fn run(&self) -> Result<(Vec<Acc>, u64)> {
        let jobs = self.jobs();
        let accs: Vec<Result<Acc>> = jobs
            .into_par_iter()
            .map(|mut j| {
                let mut acc = Acc::default();
                let mut local = 0;
                self.dfs(&mut j.x, j.level, j.partial, j.zero_above, &mut acc, &mut local)?;
                self.nodes.fetch_add(local, Ordering::Relaxed);
                Ok(acc)
            })
            .collect();
        let accs = accs.into_iter().collect::<Result<Vec<_>>>()?;
        let nodes = self.nodes.load(Ordering::Relaxed);
        if nodes > self.budget {
            return Err(Error::BudgetExceeded {
                what: "lattice enumeration nodes",
                needed: nodes as u128,
                budget: self.budget as u128,
            });
        }
        Ok((accs, nodes))
    }
}

fn check_dim(lat: &DyadicLattice) -> Result<()> {
    if lat.dim() > MAX_ENUM_DIM {
        return Err(Error::BudgetExceeded {
            what: "enumeration dimension",
            needed: lat.dim() as u128,
            budget: MAX_ENUM_DIM as u128,
        });
    }
    Ok(())
}

fn quad_form(g: &IntMatrix, x: &[i64]) -> i128 {
    let n = g.rows();
    let mut s = 0i128;
    for i in 0..n {
        if x[i] == 0 {
            continue;
        }
        let mut r = 0i128;
        for j in 0..n {
            r += g[(i, j)] * x[j] as i128;
        }
        s += x[i] as i128 * r;
    }
    s
}

/// x_red U: coordinates in the original basis.
fn to_original(x: &[i64], u: &IntMatrix) -> Vec<i128> {
    let n = u.rows();
    (0..n).map(|j| (0..n).map(|i| x[i] as i128 * u[(i, j)]).sum()).collect()
}

fn bound_numerator(lat: &DyadicLattice, b: DyadicRational) -> Result<u64> {
    let num = lat.norm_numerator(b)?;
    u64::try_from(num).map_err(|_| Error::InvalidParameter("norm bound must be nonnegative".into()))
}

/// Exact minimum norm and kissing number by Fincke-Pohst enumeration on
/// the LLL-reduced Gram matrix.
pub fn shortest_vectors(lat: &DyadicLattice, opts: &EnumOptions) -> Result<ShortVectors> {
    check_dim(lat)?;
    let (g, u) = lll_gram(lat.gram())?;
    let n = g.rows();
    let start = match opts.norm_bound {
        Some(b) => bound_numerator(lat, b)?,
        None => (0..n).map(|i| g[(i, i)]).min().unwrap_or(0) as u64,
    };
    let leaf = |x: &[i64]| quad_form(&g, x);
    let eng = Engine {
        n,
        gso: gso(&g)?,
        center: vec![0.0; n],
        mode: Mode::Shortest,
        collect: opts.collect,
        unit: 1.0,
        bound: AtomicU64::new(start),
        leaf: &leaf,
        nodes: AtomicU64::new(0),
        budget: opts.node_budget,
        abort: AtomicBool::new(false),
    };
    let (accs, nodes) = eng.run()?;
    let best = accs
        .iter()
        .filter_map(|a| a.best)
        .min()
        .ok_or_else(|| Error::Degenerate("no nonzero lattice vector within the norm bound".into()))?;
    let winners = accs.iter().filter(|a| a.best == Some(best));
    let count: u128 = winners.clone().map(|a| a.count).sum::<u128>() * 2;
    let vectors = opts.collect.then(|| {
        winners
            .flat_map(|a| a.vectors.iter())
            .flat_map(|x| {
                let v = to_original(x, &u);
                let neg: Vec<i128> = v.iter().map(|c| -c).collect();
                [v, neg]
            })
            .collect()
    });
    Ok(ShortVectors { min_norm: lat.norm_value(best), count, vectors, nodes })
}

/// Number of lattice vectors at each squared norm up to `bound`,
/// including the zero vector.
pub fn theta_prefix(lat: &DyadicLattice, bound: DyadicRational) -> Result<BTreeMap<DyadicRational, u128>> {
    Ok(theta_vectors(lat, bound, false)?.0)
}

/// Like [`theta_prefix`], also returning every nonzero vector (both signs)
/// in coordinates of the input basis when `collect` is set.
pub fn theta_vectors(
    lat: &DyadicLattice,
    bound: DyadicRational,
    collect: bool,
) -> Result<(BTreeMap<DyadicRational, u128>, Vec<Vec<i128>>)> {
    check_dim(lat)?;
    let (g, u) = lll_gram(lat.gram())?;
    let n = g.rows();
    let leaf = |x: &[i64]| quad_form(&g, x);
    let eng = Engine {
        n,
        gso: gso(&g)?,
        center: vec![0.0; n],
        mode: Mode::Theta,
        collect,
        unit: 1.0,
        bound: AtomicU64::new(bound_numerator(lat, bound)?),
        leaf: &leaf,
        nodes: AtomicU64::new(0),
        budget: NODE_BUDGET,
        abort: AtomicBool::new(false),
    };
    let (accs, _) = eng.run()?;
    let mut out = BTreeMap::new();
    out.insert(DyadicRational::from_int(0), 1);
    let mut vecs = Vec::new();
    for a in &accs {
        for (&k, &c) in &a.hist {
            *out.entry(lat.norm_value(k)).or_insert(0) += 2 * c;
        }
        for x in &a.vectors {
            let v = to_original(x, &u);
            vecs.push(v.iter().map(|c| -c).collect());
            vecs.push(v);
        }
    }
    Ok((out, vecs))
}

/// Closest-vector searches against one lattice, sharing the reduction.
pub struct ClosestSolver {
    exp: u32,
    red: IntMatrix,
    gso: Gso,
    inv: Vec<Vec<num_rational::BigRational>>,
}

impl ClosestSolver {
    pub fn new(lat: &DyadicLattice) -> Result<Self> {
        check_dim(lat)?;
        let basis = lat.basis().ok_or_else(|| Error::InvalidParameter("closest-vector search needs a basis".into()))?;
        if !basis.is_square() {
            return Err(Error::InvalidParameter("closest-vector search needs a full-rank square basis".into()));
        }
        let (g, u) = lll_gram(lat.gram())?;
        let red = u.checked_mul(basis)?;
        let inv = red.inverse_rational().ok_or_else(|| Error::Degenerate("singular basis".into()))?;
        Ok(ClosestSolver { exp: lat.exp(), gso: gso(&g)?, red, inv })
    }

    /// Squared distance from `target` (ambient coordinates) to the nearest
    /// lattice point, if some lattice point lies within `bound`.
    pub fn distance(&self, target: &[DyadicRational], bound: DyadicRational) -> Result<Option<DyadicRational>> {
        let n = self.red.rows();
        if target.len() != n {
            return Err(Error::InvalidParameter(format!("target has length {}, expected {n}", target.len())));
        }
        let te = target.iter().map(|t| t.exponent()).max().unwrap_or(0);
        let e = te.max(self.exp);
        let shift = e - self.exp;
        let red_e = self.red.scale(1i128 << shift)?;
        let t_e: Vec<i128> = target.iter().map(|t| t.scaled_numerator(e)).collect::<Result<_>>()?;
        // Coordinates of the target: t_e / 2^shift against the unscaled basis.
        let scale = num_rational::BigRational::from_integer((1i128 << shift).into());
        let center: Vec<f64> = (0..n)
            .map(|j| {
                let c = (0..n).fold(num_rational::BigRational::from_integer(0.into()), |acc, i| {
                    acc + num_rational::BigRational::from_integer(t_e[i].into()) * &self.inv[i][j]
                }) / &scale;
                c.to_f64().unwrap_or(f64::NAN)
            })
            .collect();
        let leaf = |x: &[i64]| {
            (0..n)
                .map(|j| {
                    let v: i128 = (0..n).map(|i| x[i] as i128 * red_e[(i, j)]).sum::<i128>() - t_e[j];
                    v * v
                })
                .sum()
        };
        let bound_num = bound.scaled_numerator(2 * e)?;
        let eng = Engine {
            n,
            gso: Gso { mu: self.gso.mu.clone(), b: self.gso.b.clone() },
            center,
            mode: Mode::Closest,
            collect: false,
            unit: 1.0 / 4f64.powi(shift as i32),
            bound: AtomicU64::new(
                u64::try_from(bound_num).map_err(|_| Error::InvalidParameter("negative bound".into()))?,
            ),
            leaf: &leaf,
            nodes: AtomicU64::new(0),
            budget: NODE_BUDGET,
            abort: AtomicBool::new(false),
        };
        let (accs, _) = eng.run()?;
        Ok(accs.iter().filter_map(|a| a.best).min().map(|b| DyadicRational::new(b, 2 * e)))
    }
}

/// One-shot form of [`ClosestSolver::distance`].
pub fn closest_distance(
    lat: &DyadicLattice,
    target: &[DyadicRational],
    bound: DyadicRational,
) -> Result<Option<DyadicRational>> {
    ClosestSolver::new(lat)?.distance(target, bound)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gram(rows: &[Vec<i128>]) -> DyadicLattice {
        DyadicLattice::from_gram(IntMatrix::from_rows(rows), 0).unwrap()
    }

    #[test]
    fn cubic_lattice() {
        for n in 1..6 {
            let l = DyadicLattice::from_gram(IntMatrix::identity(n), 0).unwrap();
            let s = shortest_vectors(&l, &EnumOptions::default()).unwrap();
            assert_eq!(s.min_norm, DyadicRational::from_int(1));
            assert_eq!(s.count, 2 * n as u128);
        }
    }

    #[test]
    fn hexagonal() {
        let s = shortest_vectors(&gram(&[vec![2, 1], vec![1, 2]]), &EnumOptions::default()).unwrap();
        assert_eq!((s.min_norm, s.count), (DyadicRational::from_int(2), 6));
    }

    #[test]
    fn theta_of_z2() {
        let l = DyadicLattice::from_gram(IntMatrix::identity(2), 0).unwrap();
        let t = theta_prefix(&l, DyadicRational::from_int(2)).unwrap();
        let v: Vec<(i128, u128)> = t.iter().map(|(k, c)| (k.numerator(), *c)).collect();
        assert_eq!(v, vec![(0, 1), (1, 4), (2, 4)]);
    }

    #[test]
    fn collected_vectors_have_min_norm() {
        let l = gram(&[vec![2, 1, 0], vec![1, 2, 1], vec![0, 1, 2]]);
        let s = shortest_vectors(&l, &EnumOptions { collect: true, ..Default::default() }).unwrap();
        let vs = s.vectors.unwrap();
        assert_eq!(vs.len() as u128, s.count);
        for v in vs {
            let x: Vec<i64> = v.iter().map(|&c| c as i64).collect();
            assert_eq!(quad_form(l.gram(), &x), 2);
        }
    }

    #[test]
    fn closest_point_in_z2() {
        let l = DyadicLattice::from_basis(IntMatrix::identity(2), 0).unwrap();
        let half = DyadicRational::new(1, 1);
        let d = closest_distance(&l, &[half, half], DyadicRational::from_int(1)).unwrap();
        assert_eq!(d, Some(DyadicRational::new(1, 1)));
        let d = closest_distance(&l, &[half, half], DyadicRational::new(1, 2)).unwrap();
        assert_eq!(d, None);
    }

    #[test]
    fn budget_is_enforced() {
        let l = DyadicLattice::from_gram(IntMatrix::identity(8), 0).unwrap();
        let opts = EnumOptions { norm_bound: Some(DyadicRational::from_int(6)), node_budget: 10, collect: false };
        assert!(matches!(shortest_vectors(&l, &opts), Err(Error::BudgetExceeded { .. })));
    }
}
