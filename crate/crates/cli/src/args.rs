use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use pextremal_core::radial::Geometry;
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(
    name = "pextremal",
    version,
    about = "Critical radii, planar p-Laplacian eigenvalues, extremal flows and hyperbolic sweeps",
    after_help = "Each run prints one JSON envelope on stdout. Exit codes: 0 ok, 1 file IO, \
                  2 usage, 3 no convergence, 4 invalid parameters.\n\
                  PEXTREMAL_THREADS caps internal parallelism (0 = auto)."
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Critical radius R_λ of the radial eigenfunction.
    Rlambda(RlambdaArgs),
    /// First eigenvalue and eigenfunction of a planar domain.
    Eig2d(Eig2dArgs),
    /// Extremal shape flow from a planar domain.
    Flow(FlowArgs),
    /// Compare the inradius of a planar domain with R_λ of its eigenvalue.
    CheckNarrow(NarrowArgs),
    /// Moving-geodesic sweep of a hyperbolic domain toward a geodesic.
    Hsweep(HsweepArgs),
    /// Conical point test at an ideal point of a hyperbolic domain.
    Cone(ConeArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Rlambda(_) => "rlambda",
            Command::Eig2d(_) => "eig2d",
            Command::Flow(_) => "flow",
            Command::CheckNarrow(_) => "check-narrow",
            Command::Hsweep(_) => "hsweep",
            Command::Cone(_) => "cone",
        }
    }
}

/// A point given as `X,Y`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(transparent)]
pub struct Xy(pub [f64; 2]);

impl FromStr for Xy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (a, b) = s
            .split_once(',')
            .ok_or_else(|| format!("expected X,Y, got {s:?}"))?;
        let parse = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("{t:?}: {e}"));
        Ok(Xy([parse(a)?, parse(b)?]))
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct OutArg {
    /// Directory for auxiliary files (created if missing).
    #[arg(long, value_name = "DIR")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct RlambdaArgs {
    #[arg(long)]
    pub n: u32,
    #[arg(long)]
    pub p: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: f64,
    #[arg(long, value_parser = parse_geometry, default_value = "euclidean")]
    pub geometry: Geometry,
    /// Integrator tolerance.
    #[arg(long)]
    pub tol: Option<f64>,
    #[command(flatten)]
    #[serde(flatten)]
    pub out: OutArg,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct PlanarArgs {
    /// JSON domain spec, e.g. {"type": "disk", "center": [0, 0], "radius": 1}.
    #[arg(long, value_name = "FILE")]
    pub domain: PathBuf,
    #[arg(long, default_value_t = 2.0)]
    pub p: f64,
    /// Grid spacing.
    #[arg(long, default_value_t = 1.0 / 128.0)]
    pub h: f64,
    /// Relative stopping tolerance of the eigensolver.
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub max_iters: Option<usize>,
    #[command(flatten)]
    #[serde(flatten)]
    pub out: OutArg,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct Eig2dArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub planar: PlanarArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct NarrowArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub planar: PlanarArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct FlowArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub planar: PlanarArgs,
    /// Stop once the extremality defect falls below this.
    #[arg(long, default_value_t = 0.05)]
    pub defect_tol: f64,
    #[arg(long, default_value_t = 300)]
    pub max_steps: usize,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct HsweepArgs {
    /// JSON hyperbolic domain, e.g. {"type": "gball", "center": [0, 0], "radius": 1}.
    #[arg(long, value_name = "FILE")]
    pub domain: PathBuf,
    /// The geodesic γ runs from this point...
    #[arg(
        long,
        value_name = "X,Y",
        allow_hyphen_values = true,
        default_value = "-1,0"
    )]
    pub from: Xy,
    /// ...to this one. Either may be ideal.
    #[arg(
        long,
        value_name = "X,Y",
        allow_hyphen_values = true,
        default_value = "1,0"
    )]
    pub to: Xy,
    /// Raster spacing on [-1, 1]².
    #[arg(long, default_value_t = 1.0 / 64.0)]
    pub h: f64,
    #[command(flatten)]
    #[serde(flatten)]
    pub out: OutArg,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ConeArgs {
    #[arg(long, value_name = "FILE")]
    pub domain: PathBuf,
    /// Ideal point under test.
    #[arg(long, value_name = "X,Y", allow_hyphen_values = true)]
    pub z: Xy,
    /// Tube radius.
    #[arg(long)]
    pub r: f64,
    /// Test the single cone from this ideal point instead of searching.
    #[arg(long, value_name = "X,Y", allow_hyphen_values = true)]
    pub y: Option<Xy>,
    /// Start parameter of the single cone.
    #[arg(
        long,
        allow_hyphen_values = true,
        default_value_t = 0.0,
        requires = "y"
    )]
    pub s: f64,
    /// Ray sampling step (default r/4).
    #[arg(long)]
    pub step: Option<f64>,
    #[arg(long, default_value_t = 32)]
    pub ball_samples: usize,
    /// Length of the sampled ray (default 10r + 10).
    #[arg(long)]
    pub horizon: Option<f64>,
    /// Far ends tried by the search.
    #[arg(long, default_value_t = 64)]
    pub directions: usize,
}

fn parse_geometry(s: &str) -> Result<Geometry, String> {
    match s {
        "euclidean" => Ok(Geometry::Euclidean),
        "hyperbolic" => Ok(Geometry::Hyperbolic),
        _ => Err(format!("unknown geometry {s:?} (euclidean or hyperbolic)")),
    }
}
