use alloc::vec::Vec;

#[allow(unused_imports)] // shadowed by std when a dependent links it
use num_traits::Float;

use super::{FlowError, SpeedField};
use crate::geom::Polygon;

/// Move every sample by `tau · vᵢ` along its outward normal, resample the
/// result uniformly by arclength, and scale it about its centroid back to
/// the area of `polygon`.
///
/// A step that moves nothing returns `polygon` unchanged.
pub fn flow_step(polygon: &Polygon, speed: &SpeedField, tau: f64) -> Result<Polygon, FlowError> {
    if speed.len() < 3 || speed.points.len() != speed.len() || speed.normals.len() != speed.len() {
        return Err(FlowError::SampleMismatch {
            trace: speed.points.len(),
            speed: speed.len(),
        });
    }
    if speed.values.iter().all(|&v| tau * v == 0.0) {
        return Ok(polygon.clone());
    }
    let moved: Vec<_> = speed
        .points
        .iter()
        .zip(&speed.normals)
        .zip(&speed.values)
        .map(|((&x, &n), &v)| x + (tau * v) * n)
        .collect();
    let moved = Polygon::new(moved);
    if !moved.is_ccw() || !moved.is_simple() {
        return Err(FlowError::SelfIntersection);
    }
    let resampled = moved.resample(speed.len());
    let c = resampled.centroid();
    let s = (polygon.area() / resampled.area()).sqrt();
    let out = resampled.map(|x| c + s * (x - c));
    if !out.is_simple() {
        return Err(FlowError::SelfIntersection);
    }
    Ok(out)
}
