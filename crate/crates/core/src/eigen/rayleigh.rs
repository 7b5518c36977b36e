//! The discrete Rayleigh quotient `Σ |∇_h u|^p h² / Σ |u|^p h²`.
//!
//! `∇_h` is the forward difference at every cell of the grid; values beyond
//! the mask are zero, which is all the discrete `W^{1,p}_0` amounts to. The
//! padded grid guarantees that cells next to the grid edge carry no
//! gradient, so the sums skip the last row and column.

#[allow(unused_imports)] // shadowed by std when a dependent links it
use num_traits::Float;

use super::{CellMetric, EigenError, ScalarField};
use crate::domain::Grid;

#[derive(Clone, Copy)]
pub(crate) struct Rayleigh<'a> {
    pub grid: &'a Grid,
    pub p: f64,
    pub metric: Option<&'a CellMetric>,
}

#[inline]
fn pow_half(s: f64, p: f64) -> f64 {
    // (|v|²)^{p/2}
    if p == 2.0 {
        s
    } else {
        s.powf(0.5 * p)
    }
}

impl<'a> Rayleigh<'a> {
    #[inline]
    fn cell_gradient(&self, u: &[f64], c: usize) -> (f64, f64) {
        let g = self.grid;
        let gx = (u[c + 1] - u[c]) / g.h;
        let gy = (u[c + g.nx] - u[c]) / g.h;
        match self.metric {
            None => (gx, gy),
            Some(m) => {
                let a = &m.g[c];
                (a[0] * gx + a[1] * gy, a[2] * gx + a[3] * gy)
            }
        }
    }

    #[inline]
    fn jac(&self, c: usize) -> f64 {
        self.metric.map_or(1.0, |m| m.jac[c])
    }

    fn cells(&self) -> impl Iterator<Item = usize> + '_ {
        let g = self.grid;
        (0..g.ny - 1).flat_map(move |j| (0..g.nx - 1).map(move |i| j * g.nx + i))
    }

    /// Numerator and denominator.
    pub fn parts(&self, u: &[f64]) -> (f64, f64) {
        let h2 = self.grid.h * self.grid.h;
        let p = self.p;
        let mut num = 0.0;
        let mut den = 0.0;
        for c in self.cells() {
            let (vx, vy) = self.cell_gradient(u, c);
            let s = vx * vx + vy * vy;
            let j = self.jac(c);
            if s > 0.0 {
                num += pow_half(s, p) * j;
            }
            if u[c] != 0.0 {
                den += pow_half(u[c] * u[c], p) * j;
            }
        }
        (num * h2, den * h2)
    }

    pub fn quotient(&self, u: &[f64]) -> Result<f64, EigenError> {
        let (n, d) = self.parts(u);
        if d <= 0.0 || !d.is_finite() {
            return Err(EigenError::ZeroField);
        }
        Ok(n / d)
    }

    pub fn max_gradient(&self, u: &[f64]) -> f64 {
        self.cells()
            .map(|c| {
                let (vx, vy) = self.cell_gradient(u, c);
                vx * vx + vy * vy
            })
            .fold(0.0, f64::max)
            .sqrt()
    }

    /// Gradients of numerator and denominator with respect to every cell
    /// value, using the weight `p (|G g|² + ε²)^{(p-2)/2}`. Returns the
    /// numerator and denominator themselves as well.
    pub fn gradient(&self, u: &[f64], eps: f64, gn: &mut [f64], gd: &mut [f64]) -> (f64, f64) {
        let g = self.grid;
        let (h, h2, p) = (g.h, g.h * g.h, self.p);
        gn.iter_mut().for_each(|v| *v = 0.0);
        gd.iter_mut().for_each(|v| *v = 0.0);
        let eps2 = eps * eps;
        let mut num = 0.0;
        let mut den = 0.0;
        for c in self.cells() {
            let j = self.jac(c);
            if u[c] != 0.0 {
                let a = u[c].abs();
                let ap = pow_half(a * a, p);
                den += ap * j;
                gd[c] += p * ap / u[c] * j * h2;
            }
            let (vx, vy) = self.cell_gradient(u, c);
            let s = vx * vx + vy * vy;
            if s == 0.0 {
                continue;
            }
            num += pow_half(s, p) * j;
            let wgt = if p == 2.0 {
                2.0
            } else {
                p * (s + eps2).powf(0.5 * p - 1.0)
            } * j;
            // m = weight · Gᵀ v, the derivative with respect to (gx, gy)
            let (mx, my) = match self.metric {
                None => (wgt * vx, wgt * vy),
                Some(m) => {
                    let a = &m.g[c];
                    (wgt * (a[0] * vx + a[2] * vy), wgt * (a[1] * vx + a[3] * vy))
                }
            };
            gn[c + 1] += mx * h;
            gn[c + g.nx] += my * h;
            gn[c] -= (mx + my) * h;
        }
        (num * h2, den * h2)
    }
}

/// Discrete Rayleigh quotient of a field.
pub fn rayleigh_quotient(u: &ScalarField, p: f64) -> Result<f64, EigenError> {
    Rayleigh {
        grid: &u.grid,
        p,
        metric: None,
    }
    .quotient(&u.values)
}

/// Rayleigh quotient pulled back through a per-cell metric.
pub fn rayleigh_quotient_mapped(
    u: &ScalarField,
    p: f64,
    metric: &CellMetric,
) -> Result<f64, EigenError> {
    Rayleigh {
        grid: &u.grid,
        p,
        metric: Some(metric),
    }
    .quotient(&u.values)
}
