mod code;
mod curve;
mod lattice;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{Context, Result};
use clap::{ArgMatches, Args, CommandFactory, FromArgMatches, Parser, Subcommand};
use kf_core::bounds::{self, Evaluator, DEFAULT_BITS};
use kf_core::verify::{run_check, Scorecard, Suite};
use serde::Serialize;
use sha2::{Digest, Sha256};

#[derive(Parser)]
#[command(name = "kf", version, about = "Lattices from nested codes: constructions, enumeration, towers and bounds")]
struct Cli {
    /// Worker threads for enumeration (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Working precision of bound evaluation, in bits.
    #[arg(long, global = true, env = "KF_PRECISION_BITS", default_value_t = DEFAULT_BITS)]
    bits: usize,
    /// Write a JSON run manifest to this path.
    #[arg(long, global = true)]
    manifest: Option<PathBuf>,
    /// Report every runtime_ms field as 0 so reruns are byte-identical.
    #[arg(long, global = true)]
    no_timing: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build codes and chains, print weight distributions, verify chains.
    Code {
        #[command(subcommand)]
        cmd: code::CodeCmd,
    },
    /// Construct, enumerate, reduce and export lattices; check T-axioms.
    Lattice {
        #[command(subcommand)]
        cmd: lattice::LatticeCmd,
    },
    /// Tower point enumeration and genus records.
    Curve {
        #[command(subcommand)]
        cmd: curve::CurveCmd,
    },
    /// Evaluate the bound constants (JSON array of reports).
    Bounds(BoundsArgs),
    /// Run the acceptance suite and print a JSON scorecard.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct BoundsArgs {
    /// Report a single named constant.
    #[arg(long = "const", value_name = "NAME")]
    constant: Option<String>,
    /// With --const, print only the decimal value.
    #[arg(long, requires = "constant")]
    value: bool,
    /// Scan the asymptotic family term over m = 2..=12 instead.
    #[arg(long, conflicts_with = "constant")]
    scan: bool,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, default_value = "fast", value_parser = parse_suite)]
    suite: Suite,
    /// Run only these criteria.
    #[arg(long, value_delimiter = ',')]
    only: Vec<u32>,
}

fn parse_suite(s: &str) -> std::result::Result<Suite, String> {
    s.parse().map_err(|e: kf_core::Error| e.to_string())
}

/// Shared state of one invocation.
pub struct Ctx {
    pub bits: usize,
    timing: bool,
    inputs: Vec<InputHash>,
}

#[derive(Serialize)]
struct InputHash {
    path: String,
    sha256: String,
}

impl Ctx {
    /// Reads an input file and records its hash for the manifest.
    pub fn read(&mut self, path: &Path) -> Result<String> {
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        self.inputs.push(InputHash { path: path.display().to_string(), sha256: sha256(text.as_bytes()) });
        Ok(text)
    }

    pub fn elapsed_ms(&self, start: Instant) -> u64 {
        if self.timing {
            start.elapsed().as_millis() as u64
        } else {
            0
        }
    }
}

/// What a command produced: its stdout and whether its checks passed.
pub struct Outcome {
    pub stdout: String,
    pub passed: bool,
}

impl Outcome {
    pub fn ok(stdout: String) -> Self {
        Outcome { stdout, passed: true }
    }

    pub fn json<T: Serialize>(value: &T, passed: bool) -> Result<Self> {
        Ok(Outcome { stdout: serde_json::to_string_pretty(value)? + "\n", passed })
    }
}

/// Writes `text` to `out` when given, else returns it for stdout.
pub fn emit(out: Option<&Path>, text: String) -> Result<String> {
    match out {
        Some(p) => {
            fs::write(p, text).with_context(|| format!("writing {}", p.display()))?;
            Ok(String::new())
        }
        None => Ok(text),
    }
}

fn sha256(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

#[derive(Serialize)]
struct RunManifest<'a> {
    command: &'a str,
    parameters: Vec<String>,
    inputs: &'a [InputHash],
    version: &'static str,
    precision_bits: usize,
    jobs: Option<usize>,
    exit_code: u8,
    output_sha256: String,
    wall_clock_ms: u64,
}

/// The subcommand path, e.g. `lattice kiss`.
fn command_name(m: &ArgMatches) -> String {
    let mut parts = Vec::new();
    let mut cur = m;
    while let Some((name, sub)) = cur.subcommand() {
        parts.push(name);
        cur = sub;
    }
    parts.join(" ")
}

fn run_bounds(ctx: &Ctx, args: &BoundsArgs) -> Result<Outcome> {
    let ev = Evaluator::new(ctx.bits)?;
    if let Some(name) = &args.constant {
        let r = bounds::named_constant(&ev, name)?;
        if args.value {
            return Ok(Outcome::ok(format!("{}\n", r.value)));
        }
        return Outcome::json(&r, true);
    }
    if args.scan {
        return Outcome::json(&bounds::m_scan(&ev, 2..=12)?, true);
    }
    Outcome::json(&bounds::all_constants(&ev)?, true)
}

fn run_verify(ctx: &Ctx, args: &VerifyArgs) -> Result<Outcome> {
    let ids = if args.only.is_empty() { args.suite.ids() } else { args.only.clone() };
    let checks: Vec<_> = ids
        .into_iter()
        .map(|id| {
            let mut c = run_check(id, ctx.bits);
            if !ctx.timing {
                c.runtime_ms = 0;
            }
            c
        })
        .collect();
    let card = Scorecard { suite: args.suite, passed: checks.iter().all(|c| c.passed), checks };
    Outcome::json(&card, card.passed)
}

fn dispatch(ctx: &mut Ctx, cmd: &Cmd) -> Result<Outcome> {
    match cmd {
        Cmd::Code { cmd } => code::run(ctx, cmd),
        Cmd::Lattice { cmd } => lattice::run(ctx, cmd),
        Cmd::Curve { cmd } => curve::run(ctx, cmd),
        Cmd::Bounds(a) => run_bounds(ctx, a),
        Cmd::Verify(a) => run_verify(ctx, a),
    }
}

fn main() -> ExitCode {
    let matches = Cli::command().get_matches();
    let cli = match Cli::from_arg_matches(&matches) {
        Ok(c) => c,
        Err(e) => e.exit(),
    };
    let start = Instant::now();
    if let Some(n) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global() {
            eprintln!("error: worker pool: {e}");
            return ExitCode::from(2);
        }
    }
    let mut ctx = Ctx { bits: cli.bits, timing: !cli.no_timing, inputs: Vec::new() };
    let (code, stdout) = match dispatch(&mut ctx, &cli.cmd) {
        Ok(o) => (if o.passed { 0 } else { 1 }, o.stdout),
        Err(e) => {
            eprintln!("error: {e:#}");
            (2, String::new())
        }
    };
    print!("{stdout}");
    if let Some(path) = &cli.manifest {
        let name = command_name(&matches);
        let m = RunManifest {
            command: &name,
            parameters: std::env::args().skip(1).collect(),
            inputs: &ctx.inputs,
            version: env!("CARGO_PKG_VERSION"),
            precision_bits: ctx.bits,
            jobs: cli.jobs,
            exit_code: code,
            output_sha256: sha256(stdout.as_bytes()),
            wall_clock_ms: ctx.elapsed_ms(start),
        };
        let written = serde_json::to_string_pretty(&m)
            .map_err(anyhow::Error::from)
            .and_then(|s| fs::write(path, s + "\n").with_context(|| format!("writing {}", path.display())));
        if let Err(e) = written {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    }
    ExitCode::from(code)
}
