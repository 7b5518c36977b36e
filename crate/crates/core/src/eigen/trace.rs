use alloc::vec::Vec;

#[allow(unused_imports)] // shadowed by std when a dependent links it
use num_traits::Float;

use super::{EigenError, ScalarField};
use crate::domain::PlanarDomain;
use crate::geom::Point;

/// How `∂u/∂ν` is estimated from interior samples along the inward normal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum ProbeScheme {
    /// Quadratic through `u(d)`, `u(2d)`, `u(3d)` with a free value at the
    /// boundary. Insensitive to where the raster puts the zero level.
    #[default]
    FreeIntercept,
    /// `-(4u(d) - u(2d)) / (2d)`, which assumes `u = 0` exactly on the polygon.
    Anchored,
}

impl ProbeScheme {
    fn depths(self) -> usize {
        match self {
            ProbeScheme::FreeIntercept => 3,
            ProbeScheme::Anchored => 2,
        }
    }
}

/// Outward normal derivative along the boundary.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct BoundaryTrace {
    pub points: Vec<Point>,
    /// Arclength of each sample along its own boundary loop.
    pub arclength: Vec<f64>,
    /// Outward unit normals.
    pub normals: Vec<Point>,
    /// `∂u/∂ν`, non-positive.
    pub normal_derivative: Vec<f64>,
    /// Arclength carried by each sample; they sum to the perimeter.
    pub weights: Vec<f64>,
    /// Index of the boundary loop (0 is the outer one).
    pub loop_index: Vec<usize>,
}

impl BoundaryTrace {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn perimeter(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// Weighted mean of `|∂u/∂ν|`.
    pub fn mean_magnitude(&self) -> f64 {
        let wsum = self.perimeter();
        self.normal_derivative
            .iter()
            .zip(&self.weights)
            .map(|(q, w)| q.abs() * w)
            .sum::<f64>()
            / wsum
    }
}

/// Sample every boundary loop at arclength spacing about `h` and estimate
/// the outward normal derivative from values at depths `d, 2d(, 3d)` along
/// the inward normal. `depth` defaults to `2h`.
pub fn boundary_normal_trace(
    u: &ScalarField,
    domain: &PlanarDomain,
    depth: Option<f64>,
    scheme: ProbeScheme,
) -> Result<BoundaryTrace, EigenError> {
    let h = domain.h;
    let d = depth.unwrap_or(2.0 * h).max(2.0 * h);
    let mut tr = BoundaryTrace::default();
    let mut bad = Vec::new();
    for (li, lp) in domain.loops().enumerate() {
        let per = lp.perimeter();
        let count = ((per / h).round() as usize).max(8);
        let w = per / count as f64;
        for s in lp.arclength_samples(count) {
            // inside lies to the left of every loop
            let inward = s.tangent.perp();
            let at = |k: f64| s.point + (k * d) * inward;
            if !domain.is_inside_point(at(scheme.depths() as f64)) {
                bad.push(s.point);
                continue;
            }
            let u1 = u.sample(at(1.0));
            let u2 = u.sample(at(2.0));
            let dudn = match scheme {
                ProbeScheme::FreeIntercept => {
                    let u3 = u.sample(at(3.0));
                    -(-2.5 * u1 + 4.0 * u2 - 1.5 * u3) / d
                }
                ProbeScheme::Anchored => -(4.0 * u1 - u2) / (2.0 * d),
            };
            tr.points.push(s.point);
            tr.arclength.push(s.arclength);
            tr.normals.push(-inward);
            tr.normal_derivative.push(dudn.min(0.0));
            tr.weights.push(w);
            tr.loop_index.push(li);
        }
    }
    if bad.is_empty() {
        Ok(tr)
    } else {
        Err(EigenError::ProbeOutsideDomain { locations: bad })
    }
}

/// Weighted coefficient of variation of `|∂u/∂ν|`; zero exactly when the
/// trace is constant.
pub fn extremality_defect(trace: &BoundaryTrace) -> Result<f64, EigenError> {
    if trace.is_empty() {
        return Err(EigenError::ZeroMean);
    }
    let m = trace.mean_magnitude();
    if !(m > 0.0) {
        return Err(EigenError::ZeroMean);
    }
    let wsum = trace.perimeter();
    let var = trace
        .normal_derivative
        .iter()
        .zip(&trace.weights)
        .map(|(q, w)| w * (q.abs() - m).powi(2))
        .sum::<f64>()
        / wsum;
    Ok(var.sqrt() / m)
}
