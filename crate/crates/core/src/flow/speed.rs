use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)] // shadowed by std when a dependent links it
use num_traits::Float;

use super::FlowError;
use crate::eigen::BoundaryTrace;
use crate::geom::Point;

/// Normal velocity at each boundary sample of a trace.
#[derive(Debug, Clone, PartialEq)]
pub struct SpeedField {
    /// Outward normal speed; length per unit flow time.
    pub values: Vec<f64>,
    /// Arclength weights, copied from the trace.
    pub weights: Vec<f64>,
    pub points: Vec<Point>,
    /// Outward unit normals the speed acts along.
    pub normals: Vec<Point>,
}

impl SpeedField {
    /// Speed `f(point, normal)` at every sample of `trace`.
    pub fn from_fn(trace: &BoundaryTrace, f: impl Fn(Point, Point) -> f64) -> Self {
        Self {
            values: trace
                .points
                .iter()
                .zip(&trace.normals)
                .map(|(&x, &n)| f(x, n))
                .collect(),
            weights: trace.weights.clone(),
            points: trace.points.clone(),
            normals: trace.normals.clone(),
        }
    }

    pub fn zero(trace: &BoundaryTrace) -> Self {
        Self::from_fn(trace, |_, _| 0.0)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// `Σ wᵢ vᵢ`, the first-order rate of change of the enclosed area.
    pub fn flux(&self) -> f64 {
        self.values
            .iter()
            .zip(&self.weights)
            .map(|(v, w)| v * w)
            .sum()
    }

    pub fn is_volume_preserving(&self) -> bool {
        let wsum: f64 = self.weights.iter().sum();
        self.flux().abs() <= 1e-12 * wsum * self.max_abs()
    }

    /// Gaussian filter of width `sigma` along arclength on every boundary
    /// loop, followed by mean removal. The kernel's Fourier transform is
    /// positive, so `Σ wᵢ vᵢ ṽᵢ ≥ 0`: a descent direction stays one.
    /// `loops[i]` is the loop index of sample `i`; samples of one loop are
    /// contiguous and ordered.
    pub fn smoothed(&self, sigma: f64, loops: &[usize]) -> Self {
        if !(sigma > 0.0) || self.is_empty() {
            return self.clone();
        }
        let n = self.len();
        let mut values = vec![0.0; n];
        let mut start = 0;
        while start < n {
            let mut end = start + 1;
            while end < n && loops[end] == loops[start] {
                end += 1;
            }
            // sample positions at the midpoints of their arclength cells
            let mut pos = Vec::with_capacity(end - start);
            let mut run = 0.0;
            for w in &self.weights[start..end] {
                pos.push(run + 0.5 * w);
                run += w;
            }
            let per = run;
            let m = end - start;
            let reach = 4.0 * sigma;
            // a fixed normalization keeps the operator symmetric in the
            // weighted inner product
            let norm = 1.0 / (sigma * (2.0 * core::f64::consts::PI).sqrt());
            for i in 0..m {
                let mut acc = 0.0;
                for j in 0..m {
                    let mut d = (pos[j] - pos[i]).abs();
                    d = d.min(per - d);
                    if d > reach {
                        continue;
                    }
                    let k = (-0.5 * (d / sigma).powi(2)).exp() * self.weights[start + j];
                    acc += k * self.values[start + j];
                }
                values[start + i] = acc * norm;
            }
            start = end;
        }
        Self {
            values,
            ..self.clone()
        }
        .mean_free()
    }

    /// The same speed with its weighted mean removed.
    pub fn mean_free(&self) -> Self {
        let wsum: f64 = self.weights.iter().sum();
        let mean = if wsum > 0.0 { self.flux() / wsum } else { 0.0 };
        Self {
            values: self.values.iter().map(|v| v - mean).collect(),
            ..self.clone()
        }
    }
}

fn matches(trace: &BoundaryTrace, speed: &SpeedField) -> bool {
    trace.len() == speed.len()
        && speed.weights.len() == speed.len()
        && trace
            .points
            .iter()
            .zip(&speed.points)
            .all(|(a, b)| a.dist(*b) <= 1e-12 * (1.0 + a.norm()))
}

/// `-(p-1) Σ wᵢ vᵢ |qᵢ|^p`: the predicted `dλ/dt` when the boundary moves
/// with `speed`.
pub fn shape_derivative(
    trace: &BoundaryTrace,
    speed: &SpeedField,
    p: f64,
) -> Result<f64, FlowError> {
    if !matches(trace, speed) {
        return Err(FlowError::SampleMismatch {
            trace: trace.len(),
            speed: speed.len(),
        });
    }
    let s: f64 = trace
        .normal_derivative
        .iter()
        .zip(&speed.values)
        .zip(&speed.weights)
        .map(|((q, v), w)| w * v * q.abs().powf(p))
        .sum();
    Ok(-(p - 1.0) * s)
}

/// `vᵢ = φᵢ - φ̄` with `φ = |q|^p`. Outward where the boundary is steep,
/// inward where it is shallow; the predicted derivative is
/// `-(p-1) Σ wᵢ (φᵢ - φ̄)² ≤ 0`.
pub fn extremal_speed(trace: &BoundaryTrace, p: f64) -> SpeedField {
    let phi: Vec<f64> = trace
        .normal_derivative
        .iter()
        .map(|q| q.abs().powf(p))
        .collect();
    let wsum: f64 = trace.weights.iter().sum();
    let mean = if wsum > 0.0 {
        phi.iter()
            .zip(&trace.weights)
            .map(|(f, w)| f * w)
            .sum::<f64>()
            / wsum
    } else {
        0.0
    };
    let mut values: Vec<f64> = phi.iter().map(|f| f - mean).collect();
    // a constant trace must give exactly zero, not rounding residue
    let scale = phi.iter().fold(0.0, |m: f64, f| m.max(f.abs()));
    if values.iter().all(|v| v.abs() <= 1e-14 * scale) {
        values.iter_mut().for_each(|v| *v = 0.0);
    }
    SpeedField {
        values,
        weights: trace.weights.clone(),
        points: trace.points.clone(),
        normals: trace.normals.clone(),
    }
}
