//! Deformation families and finite-difference helpers shared by test
//! targets.

#![allow(dead_code)]

use pextremal_core::domain::PlanarDomain;
use pextremal_core::eigen::{minimize_eigenvalue, BoundaryTrace, Eigenpair, SolverOptions};
use pextremal_core::flow::{pullback_metric, Deformation, SpeedField};
use pextremal_core::geom::Point;

/// `x ↦ x + δ g(x) x` with `g = Σ aₖ Re zᵏ + bₖ Im zᵏ`.
///
/// On the unit circle the displacement is normal with speed
/// `Σ aₖ cos kθ + bₖ sin kθ`, which has zero mean.
#[derive(Debug, Clone)]
pub struct RadialHarmonics {
    pub coeffs: Vec<(f64, f64)>,
    pub delta: f64,
}

impl RadialHarmonics {
    fn g(&self, x: Point) -> (f64, Point) {
        // z^{k-1} as (re, im)
        let (mut zr, mut zi) = (1.0, 0.0);
        let (mut g, mut gx, mut gy) = (0.0, 0.0, 0.0);
        for (k, &(a, b)) in self.coeffs.iter().enumerate() {
            let k = (k + 1) as f64;
            // ∇ Re zᵏ = k (Re z^{k-1}, -Im z^{k-1}), ∇ Im zᵏ = k (Im z^{k-1}, Re z^{k-1})
            gx += k * (a * zr + b * zi);
            gy += k * (b * zr - a * zi);
            let (nr, ni) = (zr * x.x - zi * x.y, zr * x.y + zi * x.x);
            zr = nr;
            zi = ni;
            g += a * zr + b * zi;
        }
        (g, Point::new(gx, gy))
    }

    pub fn normal_speed(&self, x: Point, n: Point) -> f64 {
        self.g(x).0 * x.dot(n)
    }
}

impl Deformation for RadialHarmonics {
    fn apply(&self, x: Point) -> Point {
        x + (self.delta * self.g(x).0) * x
    }

    fn jacobian(&self, x: Point) -> [f64; 4] {
        let (g, d) = self.g(x);
        let e = self.delta;
        [
            1.0 + e * (g + x.x * d.x),
            e * x.x * d.y,
            e * x.y * d.x,
            1.0 + e * (g + x.y * d.y),
        ]
    }
}

/// `x ↦ x + δ W(x)` with a quadratic vector field `W`.
#[derive(Debug, Clone)]
pub struct QuadraticField {
    /// Coefficients of `1, x, y, x², xy, y²` for each component.
    pub cx: [f64; 6],
    pub cy: [f64; 6],
    pub delta: f64,
}

impl QuadraticField {
    fn eval(c: &[f64; 6], x: Point) -> (f64, f64, f64) {
        let v =
            c[0] + c[1] * x.x + c[2] * x.y + c[3] * x.x * x.x + c[4] * x.x * x.y + c[5] * x.y * x.y;
        let dx = c[1] + 2.0 * c[3] * x.x + c[4] * x.y;
        let dy = c[2] + c[4] * x.x + 2.0 * c[5] * x.y;
        (v, dx, dy)
    }

    pub fn normal_speed(&self, x: Point, n: Point) -> f64 {
        let (wx, _, _) = Self::eval(&self.cx, x);
        let (wy, _, _) = Self::eval(&self.cy, x);
        wx * n.x + wy * n.y
    }
}

impl Deformation for QuadraticField {
    fn apply(&self, x: Point) -> Point {
        let (wx, _, _) = Self::eval(&self.cx, x);
        let (wy, _, _) = Self::eval(&self.cy, x);
        x + self.delta * Point::new(wx, wy)
    }

    fn jacobian(&self, x: Point) -> [f64; 4] {
        let (_, ax, ay) = Self::eval(&self.cx, x);
        let (_, bx, by) = Self::eval(&self.cy, x);
        let e = self.delta;
        [1.0 + e * ax, e * ay, e * bx, 1.0 + e * by]
    }
}

/// Uniform dilation `x ↦ (1 + δ) x`.
#[derive(Debug, Clone, Copy)]
pub struct Dilation(pub f64);

impl Deformation for Dilation {
    fn apply(&self, x: Point) -> Point {
        (1.0 + self.0) * x
    }

    fn jacobian(&self, _: Point) -> [f64; 4] {
        [1.0 + self.0, 0.0, 0.0, 1.0 + self.0]
    }
}

pub fn tight_solver() -> SolverOptions {
    SolverOptions {
        rel_tol: 1e-13,
        window: 20,
        ..SolverOptions::default()
    }
}

/// `λ` of the domain pulled back through `map`, warm-started from `base`.
pub fn mapped_lambda(
    domain: &PlanarDomain,
    p: f64,
    base: &Eigenpair,
    map: &impl Deformation,
) -> f64 {
    let opts = SolverOptions {
        metric: Some(pullback_metric(&domain.grid, map)),
        initial: Some(base.field.clone()),
        ..tight_solver()
    };
    minimize_eigenvalue(domain, p, &opts).unwrap().lambda
}

/// Central difference of `λ` along a one-parameter deformation family.
pub fn fd_derivative<D: Deformation>(
    domain: &PlanarDomain,
    p: f64,
    base: &Eigenpair,
    family: impl Fn(f64) -> D,
    delta: f64,
) -> f64 {
    let up = mapped_lambda(domain, p, base, &family(delta));
    let down = mapped_lambda(domain, p, base, &family(-delta));
    (up - down) / (2.0 * delta)
}

/// `(p-1) Σ wᵢ |vᵢ| |qᵢ|^p`: the size of the terms the shape derivative
/// sums, against which a near-cancelling derivative is compared.
pub fn derivative_scale(trace: &BoundaryTrace, speed: &SpeedField, p: f64) -> f64 {
    (p - 1.0)
        * trace
            .normal_derivative
            .iter()
            .zip(&speed.values)
            .zip(&speed.weights)
            .map(|((q, v), w)| w * v.abs() * q.abs().powf(p))
            .sum::<f64>()
}
