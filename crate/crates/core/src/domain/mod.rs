//! Planar domains on a cell-centred raster.
//!
//! A [`DomainSpec`] is rasterized into a [`PlanarDomain`]: an outer polygon
//! (plus holes for differences), and a mask whose inside cells are those with
//! their centre in the region. All geometry on the raster (inradius,
//! halfplane caps, the moving-plane sweep) is accurate to a cell or so.

mod edt;
mod raster;
mod spec;
mod sweep;

pub use edt::{boundary_distance_field, inradius, squared_distance_to, Inradius};
pub use raster::{
    label_components, rasterize, rasterize_polygon, Grid, PlanarDomain, MIN_INRADIUS_CELLS,
    PAD_CELLS,
};
pub use spec::DomainSpec;
pub use sweep::{
    halfplane_components, moving_plane_sweep, wrap_angle, HalfplaneComponent, Line, SweepEvent,
    SweepReport, ORTHOGONALITY_DEG,
};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum DomainError {
    #[error("degenerate domain: {0}")]
    DegenerateSpec(&'static str),
    #[error("grid spacing {h} is too coarse for inradius {inradius} (need at least 16 cells)")]
    ResolutionTooCoarse { h: f64, inradius: f64 },
}
