//! The hyperbolic plane in the Poincaré disk model, curvature `-1`.
//!
//! Distances, geodesics and reflections; regions assembled from geodesic
//! balls, horoballs and halfplanes; cones at infinity and the conical point
//! search; and the moving-geodesic sweep along the leaves orthogonal to an
//! axis.

mod cone;
mod model;
mod region;
mod sweep;

pub use cone::{
    cone_region_contains, conical_point_test, conical_witness, ConeSampling, ConeSearch, ConeSpec,
};
pub use model::{
    geodesic_ball, geodesic_through, hdist, ideal, is_ideal, reflect, Geodesic, GeodesicKind,
    HPoint, IDEAL_TOL,
};
pub use region::{HDomain, HRaster};
pub use sweep::{hyperbolic_sweep, HSweepEvent, HSweepPass, HSweepReport};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum HyperbolicError {
    #[error("the two points coincide")]
    DegeneratePair,
    #[error("({x}, {y}) lies outside the closed unit disk")]
    OutsideDisk { x: f64, y: f64 },
    #[error("invalid cone: {0}")]
    InvalidCone(&'static str),
    #[error("invalid domain: {0}")]
    InvalidDomain(&'static str),
    #[error("the sweep would start inside the domain")]
    SweepFromInside,
}
