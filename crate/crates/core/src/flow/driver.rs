use alloc::boxed::Box;
use alloc::vec::Vec;

#[allow(unused_imports)] // shadowed by std when a dependent links it
use num_traits::Float;

use super::{
    extremal_speed, flow_step, pullback_metric, push_forward_trace, FlowError, RadialTable, StarMap,
};
use crate::domain::{rasterize, DomainSpec};
use crate::eigen::{
    boundary_normal_trace, extremality_defect, minimize_eigenvalue, ProbeScheme, SolverOptions,
};
use crate::geom::Polygon;

#[derive(Debug, Clone, PartialEq)]
pub struct FlowOptions {
    pub h: f64,
    pub defect_tol: f64,
    pub max_steps: usize,
    /// Largest boundary displacement per step, in cells.
    pub cfl: f64,
    /// Width of the arclength filter applied to the speed, relative to the
    /// radius of the disk with the starting area.
    pub smoothing: f64,
    /// Step halvings allowed when a step self-intersects.
    pub max_halvings: usize,
    pub probe_depth: Option<f64>,
    pub probe: ProbeScheme,
    /// Directions in the radial tables behind [`StarMap`].
    pub table_size: usize,
    /// Options for the inner eigensolves; `initial` and `metric` are set by
    /// the driver.
    pub solver: SolverOptions,
}

impl Default for FlowOptions {
    fn default() -> Self {
        Self {
            h: 1.0 / 128.0,
            defect_tol: 0.05,
            max_steps: 300,
            cfl: 0.5,
            smoothing: 0.1,
            max_halvings: 20,
            probe_depth: None,
            probe: ProbeScheme::default(),
            table_size: 2048,
            solver: SolverOptions::default(),
        }
    }
}

/// History of a flow run. Entry `k` of each sequence describes the domain
/// after `k` steps.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct FlowResult {
    pub polygons: Vec<Polygon>,
    pub lambdas: Vec<f64>,
    pub defects: Vec<f64>,
    pub converged: bool,
    pub steps: usize,
}

/// One line of the flow history.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FlowRecord {
    pub step: usize,
    pub lambda: f64,
    pub defect: f64,
    pub area: f64,
    pub roundness: f64,
}

impl FlowResult {
    pub fn records(&self) -> Vec<FlowRecord> {
        (0..self.lambdas.len())
            .map(|k| FlowRecord {
                step: k,
                lambda: self.lambdas[k],
                defect: self.defects[k],
                area: self.polygons[k].area(),
                roundness: self.polygons[k].roundness(),
            })
            .collect()
    }

    pub fn final_polygon(&self) -> Option<&Polygon> {
        self.polygons.last()
    }

    pub fn final_lambda(&self) -> Option<f64> {
        self.lambdas.last().copied()
    }

    pub fn final_defect(&self) -> Option<f64> {
        self.defects.last().copied()
    }

    /// Largest relative increase of `λ` between consecutive steps (zero or
    /// negative for a strictly descending run).
    pub fn worst_ascent(&self) -> f64 {
        self.lambdas
            .windows(2)
            .map(|w| (w[1] - w[0]) / w[0])
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Flow the boundary of `spec` with [`extremal_speed`] until the extremality
/// defect drops below `opts.defect_tol`.
///
/// Every iterate is solved on the raster of `spec` through the [`StarMap`]
/// that carries the starting boundary onto the current one, warm-started
/// from the previous eigenfunction; the map is taken about the starting
/// centroid, so every iterate must stay star-shaped about it.
///
/// The boundary moves with the extremal speed filtered along arclength at
/// width `ℓ` (see [`SpeedField::smoothed`]); the raw speed is rough at the
/// grid scale, where an explicit step would amplify it. The step length `τ`
/// keeps the largest displacement under `opts.cfl · h` and also under
/// `ℓ / (p φ̄)`, the stable limit for the filtered flow linearized about a
/// disk, where `φ̄` is the mean of `|∂u/∂ν|^p`.
///
/// [`SpeedField::smoothed`]: super::SpeedField::smoothed
pub fn run_extremal_flow(
    spec: &DomainSpec,
    p: f64,
    opts: &FlowOptions,
) -> Result<FlowResult, FlowError> {
    if p <= 1.5 {
        log::warn!("p = {p}: the flow's rigidity statement assumes p > 3/2");
    }
    let reference = rasterize(spec, opts.h)?;
    if !reference.holes.is_empty() {
        return Err(FlowError::NotSimplyConnected);
    }
    let start = reference.boundary.clone();
    let ell = opts.smoothing * (start.area() / core::f64::consts::PI).sqrt();
    let table = RadialTable::new(&start, start.centroid(), opts.table_size)?;
    let mut poly = start;
    let mut map = StarMap::identity(&table);
    let mut warm = None;
    let mut out = FlowResult::default();
    loop {
        let solver = SolverOptions {
            initial: warm.take(),
            metric: Some(pullback_metric(&reference.grid, &map)),
            ..opts.solver.clone()
        };
        let eig = minimize_eigenvalue(&reference, p, &solver)?;
        let trace0 = boundary_normal_trace(&eig.field, &reference, opts.probe_depth, opts.probe)?;
        let trace = push_forward_trace(&trace0, &map);
        let defect = extremality_defect(&trace)?;
        log::debug!(
            "flow step {}: λ = {}, defect = {defect}, roundness = {}",
            out.steps,
            eig.lambda,
            poly.roundness()
        );
        out.polygons.push(poly.clone());
        out.lambdas.push(eig.lambda);
        out.defects.push(defect);
        if defect < opts.defect_tol {
            out.converged = true;
            return Ok(out);
        }
        if out.steps == opts.max_steps {
            return Err(FlowError::NonConvergence {
                last_defect: defect,
                history: Box::new(out),
            });
        }

        let raw = extremal_speed(&trace, p);
        let phi_mean = trace
            .normal_derivative
            .iter()
            .zip(&trace.weights)
            .map(|(q, w)| q.abs().powf(p) * w)
            .sum::<f64>()
            / trace.perimeter();
        let speed = raw.smoothed(ell, &trace.loop_index);
        let mut tau = (opts.cfl * opts.h / speed.max_abs()).min(ell / (p * phi_mean));
        let mut next = None;
        for _ in 0..=opts.max_halvings {
            let attempt =
                flow_step(&poly, &speed, tau).and_then(|q| Ok((StarMap::new(&table, &q)?, q)));
            match attempt {
                Ok(found) => {
                    next = Some(found);
                    break;
                }
                Err(FlowError::SelfIntersection | FlowError::NotStarShaped) => tau *= 0.5,
                Err(e) => return Err(e),
            }
        }
        let (m, q) = next.ok_or(FlowError::SelfIntersection)?;
        map = m;
        poly = q;
        warm = Some(eig.field);
        out.steps += 1;
    }
}
