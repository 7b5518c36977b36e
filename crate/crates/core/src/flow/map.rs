use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::TAU;

#[allow(unused_imports)] // shadowed by std when a dependent links it
use num_traits::Float;

use super::FlowError;
use crate::domain::{wrap_angle, Grid};
use crate::eigen::{BoundaryTrace, CellMetric};
use crate::geom::{Point, Polygon};

/// A smooth, orientation-preserving map from a reference domain onto the
/// one being solved.
pub trait Deformation {
    fn apply(&self, x: Point) -> Point;
    /// `DΦ(x)` row-major.
    fn jacobian(&self, x: Point) -> [f64; 4];
}

/// Per-cell `G = DΦ^{-T}` and `J = det DΦ`, evaluated at cell centres.
pub fn pullback_metric(grid: &Grid, map: &impl Deformation) -> CellMetric {
    let mut g = Vec::with_capacity(grid.len());
    let mut jac = Vec::with_capacity(grid.len());
    for k in 0..grid.len() {
        let [a, b, c, d] = map.jacobian(grid.center(k));
        let det = a * d - b * c;
        g.push([d / det, -c / det, -b / det, a / det]);
        jac.push(det);
    }
    CellMetric { g, jac }
}

/// Carry a trace taken on the reference raster over to the mapped domain.
///
/// With `u = 0` on the boundary the reference gradient is `q₀ n₀`, so the
/// physical gradient is `q₀ G n₀`: the normal turns to `G n₀ / |G n₀|` and
/// the derivative scales by `|G n₀|`. Weights stretch by `|DΦ t₀|`.
pub fn push_forward_trace(trace: &BoundaryTrace, map: &impl Deformation) -> BoundaryTrace {
    let mut out = BoundaryTrace::default();
    let mut run = 0.0;
    for k in 0..trace.len() {
        if k > 0 && trace.loop_index[k] != trace.loop_index[k - 1] {
            run = 0.0;
        }
        let x = trace.points[k];
        let n0 = trace.normals[k];
        let t0 = n0.perp();
        let [a, b, c, d] = map.jacobian(x);
        let det = a * d - b * c;
        let gn = (1.0 / det) * Point::new(d * n0.x - c * n0.y, -b * n0.x + a * n0.y);
        let stretch = Point::new(a * t0.x + b * t0.y, c * t0.x + d * t0.y).norm();
        let w = trace.weights[k] * stretch;
        out.points.push(map.apply(x));
        out.normals.push(gn.normalized());
        out.normal_derivative
            .push(trace.normal_derivative[k] * gn.norm());
        out.weights.push(w);
        out.arclength.push(run);
        out.loop_index.push(trace.loop_index[k]);
        run += w;
    }
    out
}

/// Radius of a star-shaped polygon along `M` equally spaced directions from
/// a centre.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialTable {
    pub center: Point,
    pub radii: Vec<f64>,
}

impl RadialTable {
    pub fn new(polygon: &Polygon, center: Point, size: usize) -> Result<Self, FlowError> {
        let poly = polygon.clone().to_ccw();
        let dth = TAU / size as f64;
        let mut radii = vec![f64::NAN; size];
        for (a, b) in poly.edges() {
            let (ra, rb) = (a - center, b - center);
            if !(ra.cross(rb) > 0.0) {
                return Err(FlowError::NotStarShaped);
            }
            let alpha = wrap_angle(ra.y.atan2(ra.x));
            let span = wrap_angle(rb.y.atan2(rb.x) - alpha);
            // a little slack on both ends so rounding leaves no direction out
            let mut j = (alpha / dth - 1e-9).ceil().max(0.0) as usize;
            while (j as f64) * dth <= alpha + span + 1e-12 {
                let th = j as f64 * dth;
                let e = Point::from_polar(1.0, th);
                radii[j % size] = ra.cross(b - a) / e.cross(b - a);
                j += 1;
            }
        }
        if radii.iter().any(|r| !(*r > 0.0)) {
            return Err(FlowError::NotStarShaped);
        }
        Ok(Self { center, radii })
    }

    pub fn len(&self) -> usize {
        self.radii.len()
    }

    pub fn is_empty(&self) -> bool {
        self.radii.is_empty()
    }
}

/// `Φ(c + r e(θ)) = c + r s(θ) e(θ)` with `s` the ratio of the current
/// polygon's radial function to the reference one, interpolated linearly
/// in `θ`. It maps the reference boundary onto the current one and is
/// Lipschitz (smooth away from the centre).
#[derive(Debug, Clone, PartialEq)]
pub struct StarMap {
    pub center: Point,
    ratio: Vec<f64>,
}

impl StarMap {
    pub fn new(reference: &RadialTable, current: &Polygon) -> Result<Self, FlowError> {
        let cur = RadialTable::new(current, reference.center, reference.len())?;
        let ratio = cur
            .radii
            .iter()
            .zip(&reference.radii)
            .map(|(r, r0)| r / r0)
            .collect();
        Ok(Self {
            center: reference.center,
            ratio,
        })
    }

    pub fn identity(reference: &RadialTable) -> Self {
        Self {
            center: reference.center,
            ratio: vec![1.0; reference.len()],
        }
    }

    /// `(s(θ), s'(θ))`.
    fn ratio_at(&self, th: f64) -> (f64, f64) {
        let m = self.ratio.len();
        let dth = TAU / m as f64;
        let u = wrap_angle(th) / dth;
        let j = (u.floor() as usize).min(m - 1);
        let t = u - j as f64;
        let (s0, s1) = (self.ratio[j], self.ratio[(j + 1) % m]);
        (s0 + t * (s1 - s0), (s1 - s0) / dth)
    }
}

impl Deformation for StarMap {
    fn apply(&self, x: Point) -> Point {
        let r = x - self.center;
        let (s, _) = self.ratio_at(r.y.atan2(r.x));
        self.center + s * r
    }

    fn jacobian(&self, x: Point) -> [f64; 4] {
        let r = x - self.center;
        let th = r.y.atan2(r.x);
        let (s, ds) = self.ratio_at(th);
        let (sn, cs) = th.sin_cos();
        // s I + s' e_r e_θᵀ
        [
            s - ds * cs * sn,
            ds * cs * cs,
            -ds * sn * sn,
            s + ds * sn * cs,
        ]
    }
}
