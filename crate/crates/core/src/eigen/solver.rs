use alloc::vec;

#[allow(unused_imports)] // shadowed by std when a dependent links it
use num_traits::Float;

use super::mg::Multigrid;
use super::rayleigh::Rayleigh;
use super::{CellMetric, EigenError, ScalarField};
use crate::domain::{boundary_distance_field, PlanarDomain};

/// Controls for [`minimize_eigenvalue`].
#[derive(Debug, Clone, PartialEq)]
pub struct SolverOptions {
    pub max_iters: usize,
    /// Stop once the relative change of the quotient stays below this...
    pub rel_tol: f64,
    /// ...for this many consecutive steps.
    pub window: usize,
    /// Armijo sufficient-decrease constant.
    pub armijo: f64,
    /// Starting field; resampled onto the domain's grid when it lives on
    /// another one. Defaults to the distance to the boundary.
    pub initial: Option<ScalarField>,
    /// Pull-back metric, for quotients on a mapped domain.
    pub metric: Option<CellMetric>,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            max_iters: 50_000,
            rel_tol: 1e-8,
            window: 10,
            armijo: 1e-4,
            initial: None,
            metric: None,
        }
    }
}

impl SolverOptions {
    pub fn warm_start(field: ScalarField) -> Self {
        Self {
            initial: Some(field),
            ..Self::default()
        }
    }
}

/// First eigenvalue, a non-negative eigenfunction with `Σ u^p h² = 1`, and
/// what it took to get there.
#[derive(Debug, Clone, PartialEq)]
pub struct Eigenpair {
    pub lambda: f64,
    pub field: ScalarField,
    pub p: f64,
    pub iterations: usize,
}

/// Multigrid for the plain Dirichlet Laplacian on the inside cells.
fn laplacian_preconditioner(domain: &PlanarDomain, cells: &[usize], slot: &[u32]) -> Multigrid {
    let g = domain.grid;
    let coords = cells.iter().map(|&k| {
        let (i, j) = g.coords(k);
        (i as u32, j as u32)
    });
    Multigrid::new(coords.collect(), |c, dir| {
        let k = cells[c];
        let nb = match dir {
            0 => k + 1,
            1 => k - 1,
            2 => k + g.nx,
            _ => k - g.nx,
        };
        let s = slot[nb];
        ((s != u32::MAX).then_some(s as usize), 1.0)
    })
}

/// Minimize the discrete Rayleigh quotient over fields supported on the
/// mask.
///
/// Each step moves along the negative gradient taken in the discrete `H¹₀`
/// inner product (the Euclidean gradient preconditioned by one multigrid
/// V-cycle of the raster Laplacian), with Armijo backtracking by halving.
/// The accepted field is replaced by `|u|`, which cannot raise the
/// quotient, and rescaled to unit `p`-mass. Gradient weights are
/// regularized by `ε = 10⁻¹⁰ max |∇_h u|`.
pub fn minimize_eigenvalue(
    domain: &PlanarDomain,
    p: f64,
    opts: &SolverOptions,
) -> Result<Eigenpair, EigenError> {
    if !(p > 1.0 && p.is_finite()) {
        return Err(EigenError::Exponent(p));
    }
    let g = domain.grid;
    let cells = domain.inside_cells();
    let mut slot = vec![u32::MAX; g.len()];
    for (s, &k) in cells.iter().enumerate() {
        slot[k] = s as u32;
    }
    let mg = laplacian_preconditioner(domain, &cells, &slot);
    let functional = Rayleigh {
        grid: &domain.grid,
        p,
        metric: opts.metric.as_ref(),
    };

    let mut u = vec![0.0; g.len()];
    if let Some(init) = &opts.initial {
        let src = if init.grid == g {
            init.clone()
        } else {
            init.resampled(g)
        };
        for &k in &cells {
            u[k] = src.values[k].abs();
        }
    }
    if cells.iter().all(|&k| u[k] == 0.0) {
        let dist = boundary_distance_field(domain);
        for &k in &cells {
            // the raw field is 0 on the first ring; keep it positive
            u[k] = dist[k] + 0.5 * g.h;
        }
    }
    normalize(&functional, &mut u)?;
    let mut q = functional.quotient(&u)?;

    let n = cells.len();
    let mut gn = vec![0.0; g.len()];
    let mut gd = vec![0.0; g.len()];
    let mut r = vec![0.0; n];
    let mut dir = vec![0.0; n];
    let mut trial = u.clone();
    let mut alpha = 0.25;
    let mut streak = 0;
    for it in 1..=opts.max_iters {
        let eps = 1e-10 * functional.max_gradient(&u);
        let (num, den) = functional.gradient(&u, eps, &mut gn, &mut gd);
        for (s, &k) in cells.iter().enumerate() {
            r[s] = (gn[k] - q * gd[k]) / den;
        }
        debug_assert!((num / den - q).abs() <= 1e-9 * q);
        mg.vcycle(&r, &mut dir);
        let slope: f64 = -r.iter().zip(&dir).map(|(a, b)| a * b).sum::<f64>();

        let mut accepted = None;
        if slope < 0.0 {
            let mut a = 2.0 * alpha;
            while a > 1e-30 {
                for (s, &k) in cells.iter().enumerate() {
                    trial[k] = u[k] - a * dir[s];
                }
                if let Ok(qt) = functional.quotient(&trial) {
                    if qt <= q + opts.armijo * a * slope {
                        accepted = Some(a);
                        break;
                    }
                }
                a *= 0.5;
            }
        }
        let q_new = match accepted {
            Some(a) => {
                alpha = a;
                for &k in &cells {
                    u[k] = trial[k].abs();
                }
                normalize(&functional, &mut u)?;
                functional.quotient(&u)?
            }
            // no descent left at rounding level
            None => q,
        };
        let rel = (q - q_new).abs() / q_new;
        q = q_new;
        streak = if rel < opts.rel_tol { streak + 1 } else { 0 };
        if streak >= opts.window {
            log::debug!("eigen solve converged: λ = {q}, {it} iterations, {n} cells");
            return Ok(Eigenpair {
                lambda: q,
                field: ScalarField { grid: g, values: u },
                p,
                iterations: it,
            });
        }
    }
    Err(EigenError::NonConvergence {
        iterations: opts.max_iters,
        lambda: q,
    })
}

fn normalize(functional: &Rayleigh<'_>, u: &mut [f64]) -> Result<(), EigenError> {
    let (_, den) = functional.parts(u);
    if !(den > 0.0 && den.is_finite()) {
        return Err(EigenError::ZeroField);
    }
    let s = den.powf(-1.0 / functional.p);
    u.iter_mut().for_each(|v| *v *= s);
    Ok(())
}
