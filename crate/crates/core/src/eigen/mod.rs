//! First Dirichlet eigenpair of the p-Laplacian on a rasterized domain.
//!
//! `λ_{1,p}(Ω)` is the minimum of the discrete Rayleigh quotient. Besides the
//! solver this module extracts the outward normal derivative along the
//! boundary, measures how far it is from constant (the overdetermined
//! condition), and compares the inradius with the critical radius.

mod field;
mod mg;
mod narrow;
mod rayleigh;
mod solver;
mod trace;

pub use field::{CellMetric, ScalarField};
pub use narrow::{narrowness_check, NarrownessReport};
pub use rayleigh::{rayleigh_quotient, rayleigh_quotient_mapped};
pub use solver::{minimize_eigenvalue, Eigenpair, SolverOptions};
pub use trace::{boundary_normal_trace, extremality_defect, BoundaryTrace, ProbeScheme};

use alloc::vec::Vec;

use crate::domain::DomainError;
use crate::geom::Point;
use crate::radial::RadialError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum EigenError {
    #[error("field vanishes identically")]
    ZeroField,
    #[error("exponent p = {0} must exceed 1")]
    Exponent(f64),
    #[error("no stabilization after {iterations} iterations (last quotient {lambda})")]
    NonConvergence { iterations: usize, lambda: f64 },
    #[error("normal derivative has zero mean magnitude")]
    ZeroMean,
    #[error("domain is thinner than the probe at {} boundary samples", .locations.len())]
    ProbeOutsideDomain { locations: Vec<Point> },
    #[error(transparent)]
    Domain(#[from] DomainError),
    #[error(transparent)]
    Radial(#[from] RadialError),
}
