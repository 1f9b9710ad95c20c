use std::path::PathBuf;
use std::sync::Arc;

use anyhow::Result;
use clap::{Subcommand, ValueEnum};
use kf_core::algebra::FiniteField;
use kf_core::codes::{
    ag_code, chain_complete, extended_golay, extended_hamming_8, light_vector_bound, reed_muller, reed_muller_chain,
    rs_code, rs_nested, simplex_concat, EvaluationData, LinearCode, NestedCodeChain,
};
use kf_core::lattices::{parity_chain, repetition_chain};
use serde::Serialize;

use crate::{emit, Ctx, Outcome};

#[derive(Subcommand, Debug)]
pub enum CodeCmd {
    /// Reed-Solomon code over GF(q): all of GF(q) as points, degree <= a.
    Rs {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        a: usize,
        /// Print the weight distribution as CSV instead of the generator.
        #[arg(long)]
        weights: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluation code on a genus-0 or genus-1 curve.
    Ag {
        #[arg(long, value_enum)]
        curve: CurveKind,
        /// Field order (line only; the genus-1 curve lives over GF(4)).
        #[arg(long, default_value_t = 4)]
        q: u32,
        #[arg(long)]
        a: usize,
        #[arg(long)]
        weights: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Binary augmented simplex code for q = 4^s, or the binary image of an
    /// outer RS code of degree <= outer-a.
    Simplex {
        #[arg(long)]
        s: u32,
        #[arg(long)]
        outer_a: Option<usize>,
        #[arg(long)]
        weights: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// A named binary code.
    Family {
        #[arg(value_enum)]
        name: Family,
        /// Reed-Muller order.
        #[arg(long, default_value_t = 1)]
        r: usize,
        /// Reed-Muller length exponent.
        #[arg(long, default_value_t = 3)]
        m: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Parameters [n, k, d] and the minimum-weight count of a code file.
    Info { file: PathBuf },
    /// Weight distribution of a code file as CSV `w,count`.
    Weights { file: PathBuf },
    /// Light-vector bound of a code file on a curve of the given genus.
    Light {
        file: PathBuf,
        #[arg(long, default_value_t = 0)]
        genus: u64,
        /// Divisor degree.
        #[arg(long)]
        a: usize,
    },
    /// Build a nested code chain file.
    Chain {
        #[command(subcommand)]
        kind: ChainKind,
        #[arg(long, global = true)]
        out: Option<PathBuf>,
    },
    /// Check nesting and distances of a chain file, level by level.
    VerifyChain { file: PathBuf },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum CurveKind {
    Line,
    Hermitian,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Family {
    Hamming8,
    Golay,
    Rm,
}

#[derive(Subcommand, Debug)]
pub enum ChainKind {
    /// GF(q)^2 above the repetition code.
    Rep {
        #[arg(long)]
        q: u32,
    },
    /// GF(q)^n above the [n, n-1, 2] parity-check code.
    Parity {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        n: usize,
    },
    /// GF(2)^{2^m} above RM(r_1, m) above RM(r_2, m) ...
    Rm {
        #[arg(long)]
        m: usize,
        #[arg(long, value_delimiter = ',', required = true)]
        orders: Vec<usize>,
    },
    /// Nested Reed-Solomon codes RS(a_max) above ... above RS(0).
    Rs {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        a_max: usize,
    },
    /// Complete a code file into a chain with the given distance profile.
    Complete {
        file: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        profile: Vec<usize>,
    },
}

#[derive(Serialize)]
struct CodeInfo {
    q: u32,
    n: usize,
    k: usize,
    d: usize,
    min_weight_count: String,
}

fn code_output(code: &LinearCode, weights: bool, out: Option<&std::path::Path>) -> Result<Outcome> {
    if weights {
        if let Some(p) = out {
            emit(Some(p), code.to_text())?;
        }
        return Ok(Outcome::ok(code.weights_csv()?));
    }
    Ok(Outcome::ok(emit(out, code.to_text())?))
}

fn build_chain(ctx: &mut Ctx, kind: &ChainKind) -> Result<NestedCodeChain> {
    Ok(match kind {
        ChainKind::Rep { q } => repetition_chain(*q)?,
        ChainKind::Parity { q, n } => parity_chain(*q, *n)?,
        ChainKind::Rm { m, orders } => reed_muller_chain(*m, orders)?,
        ChainKind::Rs { q, a_max } => rs_nested(*q, *a_max)?,
        ChainKind::Complete { file, profile } => chain_complete(&LinearCode::parse(&ctx.read(file)?)?, profile)?,
    })
}

pub fn run(ctx: &mut Ctx, cmd: &CodeCmd) -> Result<Outcome> {
    match cmd {
        CodeCmd::Rs { q, a, weights, out } => {
            let code = rs_code(Arc::new(FiniteField::of_order(*q)?), *a)?;
            code_output(&code, *weights, out.as_deref())
        }
        CodeCmd::Ag { curve, q, a, weights, out } => {
            let ev = match curve {
                CurveKind::Line => EvaluationData::projective_line(Arc::new(FiniteField::of_order(*q)?), *a),
                CurveKind::Hermitian => EvaluationData::hermitian_gf4(*a)?,
            };
            code_output(&ag_code(&ev)?, *weights, out.as_deref())
        }
        CodeCmd::Simplex { s, outer_a, weights, out } => {
            let code = match outer_a {
                Some(a) => {
                    let outer = rs_code(Arc::new(FiniteField::of_order(1 << (2 * s))?), *a)?;
                    simplex_concat(*s, false, Some(&outer))?
                }
                None => simplex_concat(*s, true, None)?,
            };
            code_output(&code, *weights, out.as_deref())
        }
        CodeCmd::Family { name, r, m, out } => {
            let code = match name {
                Family::Hamming8 => extended_hamming_8(),
                Family::Golay => extended_golay(),
                Family::Rm => reed_muller(*r, *m)?,
            };
            Ok(Outcome::ok(emit(out.as_deref(), code.to_text())?))
        }
        CodeCmd::Info { file } => {
            let code = LinearCode::parse(&ctx.read(file)?)?;
            let (d, count) = if code.within_enumeration_budget() {
                code.min_weight_count()?
            } else {
                code.min_weight_by_supports()?
            };
            let info = CodeInfo { q: code.q(), n: code.n(), k: code.k(), d, min_weight_count: count.to_string() };
            Outcome::json(&info, true)
        }
        CodeCmd::Weights { file } => {
            let code = LinearCode::parse(&ctx.read(file)?)?;
            Ok(Outcome::ok(code.weights_csv()?))
        }
        CodeCmd::Light { file, genus, a } => {
            let code = LinearCode::parse(&ctx.read(file)?)?;
            Outcome::json(&light_vector_bound(&code, *genus, *a)?, true)
        }
        CodeCmd::Chain { kind, out } => {
            let chain = build_chain(ctx, kind)?;
            Ok(Outcome::ok(emit(out.as_deref(), chain.to_text())?))
        }
        CodeCmd::VerifyChain { file } => {
            let report = NestedCodeChain::parse(&ctx.read(file)?)?.verify()?;
            Outcome::json(&report, report.passed)
        }
    }
}
