use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{bail, Result};
use clap::{Args, Subcommand};
use kf_core::algebra::DyadicRational;
use kf_core::codes::{LinearCode, NestedCodeChain};
use kf_core::lattices::{
    catalog, construction_a, construction_d, construction_e, construction_e_min_norm, construction_e_tlattice,
    lll_reduce, shortest_vectors, theta_prefix, CatalogEntry, DyadicLattice, EnumOptions, TLattice, CATALOG_NAMES,
};
use serde::Serialize;

use crate::{emit, Ctx, Outcome};

#[derive(Subcommand, Debug)]
pub enum LatticeCmd {
    /// Construction A from a code file.
    ConstructA {
        #[arg(long)]
        code: PathBuf,
        #[command(flatten)]
        out: BuildOut,
    },
    /// Construction D from a chain file.
    ConstructD {
        #[arg(long)]
        chain: PathBuf,
        #[command(flatten)]
        out: BuildOut,
    },
    /// Construction E over a T-lattice base from a chain file.
    ConstructE {
        /// Catalog T-lattice (Z2, D4, E8, L16) or a .tlat file.
        #[arg(long)]
        base: String,
        #[arg(long)]
        chain: PathBuf,
        #[command(flatten)]
        out: BuildOut,
        /// Also write the inherited T-lattice structure (one-level chains).
        #[arg(long)]
        t_out: Option<PathBuf>,
    },
    /// Minimum norm and kissing number by exhaustive enumeration.
    Kiss(Source),
    /// Vector counts at each norm up to a bound.
    Theta {
        #[command(flatten)]
        src: Source,
        /// Largest squared norm, e.g. `4` or `5/2`.
        #[arg(long)]
        bound: DyadicRational,
    },
    /// LLL-reduce a lattice and print it.
    Reduce {
        #[command(flatten)]
        src: Source,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check the T-lattice axioms of a .tlat file or catalog entry.
    VerifyT {
        file: Option<PathBuf>,
        #[arg(long, conflicts_with = "file", required_unless_present = "file")]
        catalog: Option<String>,
    },
    /// Print a catalog lattice (T-lattices in .tlat form with --t).
    Export {
        name: String,
        #[arg(long)]
        t: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List the catalog names.
    Catalog,
}

#[derive(Args, Debug)]
pub struct BuildOut {
    /// Write the lattice file here.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Skip the enumeration of minimal vectors.
    #[arg(long)]
    no_enum: bool,
}

#[derive(Args, Debug)]
pub struct Source {
    /// Lattice file (`m e` basis or `gram m` form).
    file: Option<PathBuf>,
    /// Catalog lattice instead of a file.
    #[arg(long, conflicts_with = "file", required_unless_present = "file")]
    catalog: Option<String>,
}

impl Source {
    fn load(&self, ctx: &mut Ctx) -> Result<DyadicLattice> {
        match (&self.file, &self.catalog) {
            (Some(f), _) => Ok(DyadicLattice::parse(&ctx.read(f)?)?),
            (None, Some(name)) => Ok(catalog(name)?.lattice().clone()),
            (None, None) => bail!("give a lattice file or --catalog"),
        }
    }
}

#[derive(Serialize)]
struct Enumeration {
    min_norm: String,
    kissing: u128,
    runtime_ms: u64,
}

#[derive(Serialize)]
struct BuildReport {
    construction: &'static str,
    dim: usize,
    det: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    predicted_min_norm: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    enumeration: Option<Enumeration>,
    #[serde(skip_serializing_if = "Option::is_none")]
    lattice: Option<String>,
}

fn enumerate(ctx: &Ctx, lat: &DyadicLattice) -> Result<Enumeration> {
    let start = Instant::now();
    let s = shortest_vectors(lat, &EnumOptions::default())?;
    Ok(Enumeration { min_norm: s.min_norm.to_string(), kissing: s.count, runtime_ms: ctx.elapsed_ms(start) })
}

fn build_report(
    ctx: &Ctx,
    construction: &'static str,
    lat: &DyadicLattice,
    predicted: Option<String>,
    out: &BuildOut,
) -> Result<Outcome> {
    let enumeration = if out.no_enum { None } else { Some(enumerate(ctx, lat)?) };
    let text = emit(out.out.as_deref(), lat.to_text())?;
    let report = BuildReport {
        construction,
        dim: lat.dim(),
        det: lat.det().to_string(),
        predicted_min_norm: predicted,
        enumeration,
        lattice: (!text.is_empty()).then_some(text),
    };
    Outcome::json(&report, true)
}

fn load_t(ctx: &mut Ctx, source: &str) -> Result<TLattice> {
    let path = Path::new(source);
    if path.exists() {
        return Ok(TLattice::parse(&ctx.read(path)?)?);
    }
    match catalog(source) {
        Ok(CatalogEntry::T(t)) => Ok(t),
        Ok(CatalogEntry::Plain(_)) => bail!("catalog lattice {source} carries no T map"),
        Err(_) => bail!("{source} is neither a file nor a catalog T-lattice"),
    }
}

pub fn run(ctx: &mut Ctx, cmd: &LatticeCmd) -> Result<Outcome> {
    match cmd {
        LatticeCmd::ConstructA { code, out } => {
            let lat = construction_a(&LinearCode::parse(&ctx.read(code)?)?)?;
            build_report(ctx, "A", &lat, None, out)
        }
        LatticeCmd::ConstructD { chain, out } => {
            let lat = construction_d(&NestedCodeChain::parse(&ctx.read(chain)?)?)?;
            build_report(ctx, "D", &lat, None, out)
        }
        LatticeCmd::ConstructE { base, chain, out, t_out } => {
            let base = load_t(ctx, base)?;
            let chain = NestedCodeChain::parse(&ctx.read(chain)?)?;
            let predicted = construction_e_min_norm(&base, &chain).to_string();
            let lat = match t_out {
                Some(p) => {
                    let t = construction_e_tlattice(&base, &chain)?;
                    emit(Some(p), t.to_text())?;
                    t.lattice().clone()
                }
                None => construction_e(&base, &chain)?,
            };
            build_report(ctx, "E", &lat, Some(predicted), out)
        }
        LatticeCmd::Kiss(src) => {
            let lat = src.load(ctx)?;
            Outcome::json(&enumerate(ctx, &lat)?, true)
        }
        LatticeCmd::Theta { src, bound } => {
            let lat = src.load(ctx)?;
            let counts: BTreeMap<String, u128> =
                theta_prefix(&lat, *bound)?.into_iter().map(|(n, c)| (n.to_string(), c)).collect();
            Outcome::json(&counts, true)
        }
        LatticeCmd::Reduce { src, out } => {
            let (red, _) = lll_reduce(&src.load(ctx)?)?;
            Ok(Outcome::ok(emit(out.as_deref(), red.to_text())?))
        }
        LatticeCmd::VerifyT { file, catalog } => {
            let t = match (file, catalog) {
                (Some(f), _) => TLattice::parse(&ctx.read(f)?)?,
                (None, Some(name)) => load_t(ctx, name)?,
                (None, None) => bail!("give a .tlat file or --catalog"),
            };
            let report = t.verify()?;
            Outcome::json(&report, report.passed)
        }
        LatticeCmd::Export { name, t, out } => {
            let text = match (catalog(name)?, t) {
                (CatalogEntry::T(tl), true) => tl.to_text(),
                (CatalogEntry::Plain(_), true) => bail!("catalog lattice {name} carries no T map"),
                (entry, false) => entry.lattice().to_text(),
            };
            Ok(Outcome::ok(emit(out.as_deref(), text)?))
        }
        LatticeCmd::Catalog => Ok(Outcome::ok(CATALOG_NAMES.join("\n") + "\n")),
    }
}
