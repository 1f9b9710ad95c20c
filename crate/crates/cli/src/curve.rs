use anyhow::Result;
use clap::{Args, Subcommand, ValueEnum};
use kf_core::algebra::{FiniteField, Polynomial};
use kf_core::curves::{
    densify_ladder, drinfeld_genus, elkies_points, gs_genus, gs_points, points_csv, x0m_invariants, TowerPoints,
};
use serde::Serialize;

use crate::Outcome;

#[derive(Subcommand, Debug)]
pub enum CurveCmd {
    /// Rational points of level k of the Elkies tower over GF(q^2).
    Elkies {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        k: usize,
        #[command(flatten)]
        view: PointView,
    },
    /// Rational points of level n of the Garcia-Stichtenoth tower.
    Gs {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        view: PointView,
    },
    /// Genus record of a tower level.
    Genus {
        #[arg(value_enum)]
        family: GenusFamily,
        #[arg(long)]
        q: u32,
        /// Level (n for GS, k for the T-power family).
        #[arg(long)]
        k: u32,
    },
    /// Invariants of X0(M) for M given by its coefficients, low degree first.
    X0m {
        #[arg(long)]
        q: u32,
        /// Comma-separated coefficient indices, e.g. `0,0,1` for T^2.
        #[arg(long)]
        m: String,
    },
    /// Genus ladder between two T-power levels, filled by replacements.
    Densify {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        from: u32,
        #[arg(long)]
        to: u32,
    },
}

#[derive(Args, Debug)]
pub struct PointView {
    /// Keep only supersingular points.
    #[arg(long)]
    supersingular: bool,
    /// Print counts as JSON instead of the CSV point list.
    #[arg(long)]
    summary: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum GenusFamily {
    Gs,
    Drinfeld,
}

#[derive(Serialize)]
struct PointSummary {
    q: u32,
    level: usize,
    points: usize,
    supersingular: usize,
    point_bound: u128,
}

fn points_output(tp: &TowerPoints, view: &PointView) -> Result<Outcome> {
    if view.summary {
        let s = PointSummary {
            q: tp.q,
            level: tp.level,
            points: tp.points.len(),
            supersingular: tp.supersingular_count(),
            point_bound: tp.point_bound,
        };
        return Outcome::json(&s, true);
    }
    let pts: Vec<_> = if view.supersingular { tp.supersingular().cloned().collect() } else { tp.points.clone() };
    Ok(Outcome::ok(points_csv(&pts)))
}

pub fn run(_ctx: &mut crate::Ctx, cmd: &CurveCmd) -> Result<Outcome> {
    match cmd {
        CurveCmd::Elkies { q, k, view } => points_output(&elkies_points(*q, *k)?, view),
        CurveCmd::Gs { q, n, view } => points_output(&gs_points(*q, *n)?, view),
        CurveCmd::Genus { family, q, k } => {
            let r = match family {
                GenusFamily::Gs => gs_genus(*q, *k)?,
                GenusFamily::Drinfeld => drinfeld_genus(*q, *k)?,
            };
            Outcome::json(&r, true)
        }
        CurveCmd::X0m { q, m } => {
            let f = FiniteField::of_order(*q)?;
            let m = Polynomial::parse_csv(&f, m)?;
            Outcome::json(&x0m_invariants(&f, &m)?, true)
        }
        CurveCmd::Densify { q, from, to } => Outcome::json(&densify_ladder(*q, *from, *to)?, true),
    }
}
