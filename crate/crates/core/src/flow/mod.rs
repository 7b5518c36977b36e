//! Hadamard shape derivative of `λ_{1,p}` and a volume-preserving flow
//! towards domains whose eigenfunction has constant normal derivative.
//!
//! The first variation of `λ_{1,p}` under a boundary velocity `V` is
//! `-(p-1) ∫ ⟨V,ν⟩ |∂u/∂ν|^p`. Moving the boundary with the mean-free part
//! of `|∂u/∂ν|^p` makes that integral a negative square, so the flow lowers
//! `λ` at fixed area and stops exactly when the trace is constant.
//!
//! The driver solves every iterate on the raster of the starting domain,
//! pulled back through a radial map (see [`StarMap`]). Re-rasterizing each
//! polygon would make `λ` jump by more than a flow step changes it.

mod driver;
mod map;
mod speed;
mod step;

pub use driver::{run_extremal_flow, FlowOptions, FlowRecord, FlowResult};
pub use map::{pullback_metric, push_forward_trace, Deformation, RadialTable, StarMap};
pub use speed::{extremal_speed, shape_derivative, SpeedField};
pub use step::flow_step;

use alloc::boxed::Box;

use crate::domain::DomainError;
use crate::eigen::EigenError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FlowError {
    #[error("speed has {speed} samples but the trace has {trace}, or their positions differ")]
    SampleMismatch { trace: usize, speed: usize },
    #[error("step produced a self-intersecting boundary")]
    SelfIntersection,
    #[error("boundary is not star-shaped about its reference centre")]
    NotStarShaped,
    #[error("flow needs a simply connected domain")]
    NotSimplyConnected,
    #[error("defect still {last_defect} after {} steps", .history.steps)]
    NonConvergence {
        last_defect: f64,
        history: Box<FlowResult>,
    },
    #[error(transparent)]
    Eigen(#[from] EigenError),
    #[error(transparent)]
    Domain(#[from] DomainError),
}
