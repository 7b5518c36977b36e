use std::fs;
use std::path::{Path, PathBuf};

use pextremal_core::domain::{rasterize, DomainSpec, PlanarDomain};
use pextremal_core::eigen::{
    boundary_normal_trace, extremality_defect, minimize_eigenvalue, narrowness_check, ProbeScheme,
    SolverOptions,
};
use pextremal_core::flow::{run_extremal_flow, FlowError, FlowOptions, FlowResult};
use pextremal_core::geom::Point;
use pextremal_core::hyperbolic::{
    cone_region_contains, conical_witness, geodesic_through, hyperbolic_sweep, ConeSampling,
    ConeSearch, ConeSpec, HDomain, HRaster,
};
use pextremal_core::radial::{find_r_lambda, integrate_profile, PLaplaceParams, DEFAULT_TOL};
use serde::de::DeserializeOwned;
use serde_json::{json, Value};

use crate::args::{
    ConeArgs, Eig2dArgs, FlowArgs, HsweepArgs, NarrowArgs, OutArg, PlanarArgs, RlambdaArgs, Xy,
};
use crate::error::CliError;
use crate::output::{self, PlotData};

/// What a command has produced so far. Filled in place so a failing command
/// still reports its partial outputs and the files it managed to write.
#[derive(Debug, Default)]
pub struct Run {
    pub inputs: Value,
    pub outputs: Value,
    pub iterations: Option<u64>,
    pub residual: Option<f64>,
    pub files: Vec<PathBuf>,
}

impl Run {
    fn add_input(&mut self, key: &str, value: Value) {
        if let Value::Object(map) = &mut self.inputs {
            map.insert(key.into(), value);
        }
    }

    fn write(&mut self, dir: &Path, name: &str, contents: &str) -> Result<(), CliError> {
        let path = dir.join(name);
        output::write_file(&path, contents)?;
        self.files.push(path);
        Ok(())
    }
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("plain data serializes")
}

fn out_dir(out: &OutArg) -> Result<Option<&Path>, CliError> {
    match &out.out {
        Some(dir) => {
            fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
            Ok(Some(dir.as_path()))
        }
        None => Ok(None),
    }
}

fn load_json<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::InvalidParams(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::InvalidParams(format!("{}: {e}", path.display())))
}

fn check_tol(tol: Option<f64>) -> Result<(), CliError> {
    match tol {
        Some(t) if !(t > 0.0 && t.is_finite()) => Err(CliError::InvalidParams(format!(
            "tolerance {t} must be positive and finite"
        ))),
        _ => Ok(()),
    }
}

fn pt(xy: Xy) -> Point {
    Point::new(xy.0[0], xy.0[1])
}

pub fn rlambda(a: &RlambdaArgs, run: &mut Run) -> Result<(), CliError> {
    let tol = a.tol.unwrap_or(DEFAULT_TOL);
    run.add_input("tol", json!(tol));
    let params = PLaplaceParams::new(a.n, a.p, a.lambda, a.geometry)?;
    let cr = find_r_lambda(&params, tol)?;
    run.iterations = Some(cr.evaluations as u64);
    run.outputs = json!({
        "n": a.n,
        "p": a.p,
        "lambda": a.lambda,
        "geometry": a.geometry,
        "R": cr.radius,
        "tol": tol,
        "evaluations": cr.evaluations,
    });
    if let Some(dir) = out_dir(&a.out)? {
        // the integration stops at the first zero, so any horizon past R will do
        let profile = integrate_profile(&params, 2.0 * cr.radius, tol)?;
        run.files
            .extend(output::emit_plot_data(PlotData::Profile(&profile), dir)?);
    }
    Ok(())
}

fn solver_options(a: &PlanarArgs) -> Result<SolverOptions, CliError> {
    check_tol(a.tol)?;
    let mut opts = SolverOptions::default();
    if let Some(t) = a.tol {
        opts.rel_tol = t;
    }
    if let Some(m) = a.max_iters {
        opts.max_iters = m;
    }
    Ok(opts)
}

fn planar_domain(a: &PlanarArgs, run: &mut Run) -> Result<(DomainSpec, PlanarDomain), CliError> {
    let spec: DomainSpec = load_json(&a.domain)?;
    run.add_input("domain_spec", to_value(&spec));
    let domain = rasterize(&spec, a.h)?;
    Ok((spec, domain))
}

pub fn eig2d(a: &Eig2dArgs, run: &mut Run) -> Result<(), CliError> {
    let a = &a.planar;
    let opts = solver_options(a)?;
    let (_, domain) = planar_domain(a, run)?;
    let eig = minimize_eigenvalue(&domain, a.p, &opts)?;
    run.iterations = Some(eig.iterations as u64);
    let trace = boundary_normal_trace(&eig.field, &domain, None, ProbeScheme::default());
    let defect = trace.as_ref().ok().and_then(|t| extremality_defect(t).ok());
    run.outputs = json!({
        "lambda": eig.lambda,
        "p": eig.p,
        "h": domain.h,
        "iterations": eig.iterations,
        "inside_cells": domain.inside_count(),
        "area": domain.mask_area(),
        "defect": defect,
    });
    if let Err(e) = &trace {
        if let Value::Object(map) = &mut run.outputs {
            map.insert("trace_error".into(), json!(e.to_string()));
        }
    }
    if let Some(dir) = out_dir(&a.out)? {
        run.write(dir, "field.csv", &output::field_csv(&eig.field, &domain))?;
        run.write(dir, "field.pgm", &output::heatmap_pgm(&eig.field))?;
        run.write(dir, "mask.pgm", &output::mask_pgm(&domain))?;
        if let Ok(t) = &trace {
            run.files
                .extend(output::emit_plot_data(PlotData::Trace(t), dir)?);
        }
    }
    Ok(())
}

pub fn check_narrow(a: &NarrowArgs, run: &mut Run) -> Result<(), CliError> {
    let a = &a.planar;
    let opts = solver_options(a)?;
    let (_, domain) = planar_domain(a, run)?;
    let report = narrowness_check(&domain, a.p, &opts)?;
    run.outputs = to_value(&report);
    if let Some(dir) = out_dir(&a.out)? {
        run.write(dir, "mask.pgm", &output::mask_pgm(&domain))?;
    }
    Ok(())
}

fn flow_summary(r: &FlowResult) -> Value {
    let last = r.final_polygon();
    json!({
        "converged": r.converged,
        "steps": r.steps,
        "final_lambda": r.final_lambda(),
        "final_defect": r.final_defect(),
        "final_area": last.map(|p| p.area()),
        "final_roundness": last.map(|p| p.roundness()),
        "worst_ascent": (r.lambdas.len() > 1).then(|| r.worst_ascent()),
    })
}

pub fn flow(a: &FlowArgs, run: &mut Run) -> Result<(), CliError> {
    let opts = FlowOptions {
        h: a.planar.h,
        defect_tol: a.defect_tol,
        max_steps: a.max_steps,
        solver: solver_options(&a.planar)?,
        ..FlowOptions::default()
    };
    let spec: DomainSpec = load_json(&a.planar.domain)?;
    run.add_input("domain_spec", to_value(&spec));
    let dir = out_dir(&a.planar.out)?;
    let (history, failure) = match run_extremal_flow(&spec, a.planar.p, &opts) {
        Ok(r) => (r, None),
        Err(FlowError::NonConvergence {
            last_defect,
            history,
        }) => {
            let msg = format!(
                "flow did not converge: defect still {last_defect} after {} steps",
                history.steps
            );
            (*history, Some(CliError::NonConvergence(msg)))
        }
        Err(e) => return Err(e.into()),
    };
    run.iterations = Some(history.steps as u64);
    run.residual = history.final_defect();
    run.outputs = flow_summary(&history);
    if let Some(dir) = dir {
        run.files
            .extend(output::emit_plot_data(PlotData::Flow(&history), dir)?);
    }
    failure.map_or(Ok(()), Err)
}

fn hdomain(path: &Path, run: &mut Run) -> Result<HDomain, CliError> {
    let d: HDomain = load_json(path)?;
    d.validate()?;
    run.add_input("domain_spec", to_value(&d));
    Ok(d)
}

pub fn hsweep(a: &HsweepArgs, run: &mut Run) -> Result<(), CliError> {
    let domain = hdomain(&a.domain, run)?;
    let gamma = geodesic_through(pt(a.from), pt(a.to))?;
    let report = hyperbolic_sweep(&domain, &gamma, a.h)?;
    let checked =
        report.forward.offsets_checked + report.backward.as_ref().map_or(0, |b| b.offsets_checked);
    run.iterations = Some(checked as u64);
    let mut outputs = to_value(&report);
    if let Value::Object(map) = &mut outputs {
        map.insert("terminal_event".into(), to_value(&report.terminal_event()));
        map.insert("first_tangency".into(), json!(report.first_tangency()));
    }
    run.outputs = outputs;
    if let Some(dir) = out_dir(&a.out)? {
        let raster = HRaster::new(&domain, a.h)?;
        run.write(dir, "raster.pgm", &output::hraster_pgm(&raster))?;
    }
    Ok(())
}

pub fn cone(a: &ConeArgs, run: &mut Run) -> Result<(), CliError> {
    let domain = hdomain(&a.domain, run)?;
    let sampling = ConeSampling {
        step: a.step,
        ball_samples: a.ball_samples,
        horizon: a.horizon,
    };
    run.outputs = match a.y {
        Some(y) => {
            let spec = ConeSpec {
                z: pt(a.z),
                y: pt(y),
                r: a.r,
                s: a.s,
            };
            let contained = cone_region_contains(&domain, &spec, &sampling)?;
            json!({ "cone": spec, "contained": contained })
        }
        None => {
            let search = ConeSearch {
                directions: a.directions,
                sampling,
                ..ConeSearch::default()
            };
            let witness = conical_witness(&domain, pt(a.z), a.r, &search)?;
            json!({
                "conical": witness.is_some(),
                "witness": witness,
                "directions": search.directions,
                "starts": search.starts,
            })
        }
    };
    Ok(())
}
