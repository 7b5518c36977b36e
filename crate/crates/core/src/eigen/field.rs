use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)] // shadowed by std when a dependent links it
use num_traits::Float;

use crate::domain::Grid;
use crate::geom::Point;

/// One value per grid cell. Solver output vanishes outside the mask.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarField {
    pub grid: Grid,
    pub values: Vec<f64>,
}

impl ScalarField {
    pub fn zeros(grid: Grid) -> Self {
        Self {
            grid,
            values: vec![0.0; grid.len()],
        }
    }

    pub fn from_fn(grid: Grid, f: impl Fn(usize, Point) -> f64) -> Self {
        Self {
            grid,
            values: (0..grid.len()).map(|k| f(k, grid.center(k))).collect(),
        }
    }

    pub fn max(&self) -> f64 {
        self.values
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self {
            grid: self.grid,
            values: self.values.iter().map(|v| s * v).collect(),
        }
    }

    /// `Σ |u|^p h²`.
    pub fn lp_mass(&self, p: f64) -> f64 {
        let h2 = self.grid.h * self.grid.h;
        self.values.iter().map(|v| v.abs().powf(p)).sum::<f64>() * h2
    }

    /// Bilinear interpolation between cell centres, zero beyond the grid.
    pub fn sample(&self, p: Point) -> f64 {
        let g = &self.grid;
        let fx = (p.x - g.origin.x) / g.h - 0.5;
        let fy = (p.y - g.origin.y) / g.h - 0.5;
        let i0 = fx.floor();
        let j0 = fy.floor();
        let tx = fx - i0;
        let ty = fy - j0;
        let at = |i: f64, j: f64| -> f64 {
            if i < 0.0 || j < 0.0 || i >= g.nx as f64 || j >= g.ny as f64 {
                0.0
            } else {
                self.values[g.index(i as usize, j as usize)]
            }
        };
        (1.0 - tx) * (1.0 - ty) * at(i0, j0)
            + tx * (1.0 - ty) * at(i0 + 1.0, j0)
            + (1.0 - tx) * ty * at(i0, j0 + 1.0)
            + tx * ty * at(i0 + 1.0, j0 + 1.0)
    }

    /// Transfer onto another grid by bilinear sampling at its cell centres.
    pub fn resampled(&self, grid: Grid) -> Self {
        Self::from_fn(grid, |_, c| self.sample(c))
    }
}

/// A per-cell change of variables for the discrete Rayleigh quotient: the
/// forward-difference gradient `g` at cell `c` is replaced by `G_c g` and
/// both sums carry the weight `J_c`. This is the pull-back of the quotient
/// under a map `Φ` with `G = DΦ^{-T}` and `J = det DΦ`.
#[derive(Debug, Clone, PartialEq)]
pub struct CellMetric {
    /// Row-major `[g11, g12, g21, g22]`.
    pub g: Vec<[f64; 4]>,
    pub jac: Vec<f64>,
}
