//! Plot-ready data files: CSV, JSON-lines and plain PGM.
//!
//! Every number goes through [`num`], so identical inputs give identical
//! bytes. Lines end in LF.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use pextremal_core::domain::PlanarDomain;
use pextremal_core::eigen::{BoundaryTrace, ScalarField};
use pextremal_core::flow::FlowResult;
use pextremal_core::hyperbolic::HRaster;
use pextremal_core::radial::RadialProfile;

use crate::error::CliError;

/// Twelve significant digits in scientific notation. Non-finite values are
/// spelled `nan`, `inf` and `-inf`.
pub fn num(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.11e}")
    } else if x.is_nan() {
        "nan".into()
    } else if x > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

/// Like [`num`] but valid JSON: non-finite values become `null`.
fn json_num(x: f64) -> String {
    if x.is_finite() {
        num(x)
    } else {
        "null".into()
    }
}

pub fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|e| CliError::io(path, e))
}

pub fn profile_csv(profile: &RadialProfile) -> String {
    let mut s = String::from("t,z,w\n");
    for k in 0..profile.len() {
        let _ = writeln!(
            s,
            "{},{},{}",
            num(profile.t[k]),
            num(profile.z[k]),
            num(profile.w[k])
        );
    }
    s
}

pub fn field_csv(field: &ScalarField, domain: &PlanarDomain) -> String {
    let mut s = String::from("x,y,u\n");
    for k in domain.inside_cells() {
        let c = field.grid.center(k);
        let _ = writeln!(s, "{},{},{}", num(c.x), num(c.y), num(field.values[k]));
    }
    s
}

pub fn trace_csv(trace: &BoundaryTrace) -> String {
    let mut s = String::from("arclength,x,y,dudn,weight\n");
    for k in 0..trace.len() {
        let p = trace.points[k];
        let _ = writeln!(
            s,
            "{},{},{},{},{}",
            num(trace.arclength[k]),
            num(p.x),
            num(p.y),
            num(trace.normal_derivative[k]),
            num(trace.weights[k])
        );
    }
    s
}

/// All boundary snapshots of a flow in one table, keyed by step.
pub fn polygons_csv(result: &FlowResult) -> String {
    let mut s = String::from("step,x,y\n");
    for (step, poly) in result.polygons.iter().enumerate() {
        for v in &poly.vertices {
            let _ = writeln!(s, "{step},{},{}", num(v.x), num(v.y));
        }
    }
    s
}

/// A header line naming the fields and the record count, then one record
/// per step.
pub fn history_jsonl(result: &FlowResult) -> String {
    let records = result.records();
    let mut s = format!(
        "{{\"format\":\"pextremal-flow-history\",\"schema_version\":\"1\",\
         \"fields\":[\"step\",\"lambda\",\"defect\",\"area\",\"roundness\"],\
         \"records\":{}}}\n",
        records.len()
    );
    for r in &records {
        let _ = writeln!(
            s,
            "{{\"step\":{},\"lambda\":{},\"defect\":{},\"area\":{},\"roundness\":{}}}",
            r.step,
            json_num(r.lambda),
            json_num(r.defect),
            json_num(r.area),
            json_num(r.roundness)
        );
    }
    s
}

/// Plain PGM, top row first, at most 17 values per line.
fn pgm(width: usize, height: usize, value: impl Fn(usize, usize) -> u8) -> String {
    let mut s = format!("P2\n{width} {height}\n255\n");
    for row in (0..height).rev() {
        for start in (0..width).step_by(17) {
            let line: Vec<String> = (start..(start + 17).min(width))
                .map(|col| value(col, row).to_string())
                .collect();
            s.push_str(&line.join(" "));
            s.push('\n');
        }
    }
    s
}

pub fn mask_pgm(domain: &PlanarDomain) -> String {
    let g = &domain.grid;
    pgm(
        g.nx,
        g.ny,
        |i, j| if domain.mask[g.index(i, j)] { 255 } else { 0 },
    )
}

/// The field scaled so its maximum is white.
pub fn heatmap_pgm(field: &ScalarField) -> String {
    let g = &field.grid;
    let top = field.max();
    let scale = if top > 0.0 { 255.0 / top } else { 0.0 };
    pgm(g.nx, g.ny, |i, j| {
        let v = field.values[g.index(i, j)].max(0.0) * scale;
        v.round().min(255.0) as u8
    })
}

/// Inside cells white, the rest of the disk grey, outside the disk black.
pub fn hraster_pgm(raster: &HRaster) -> String {
    let n = raster.n;
    pgm(n, n, |i, j| {
        let k = j * n + i;
        if raster.mask[k] {
            255
        } else if raster.in_disk(k) {
            128
        } else {
            0
        }
    })
}

/// Results that have a plot-data file form.
pub enum PlotData<'a> {
    Flow(&'a FlowResult),
    Profile(&'a RadialProfile),
    Trace(&'a BoundaryTrace),
}

/// Write `data` into the directory `dir` under its standard file names and
/// return the paths written.
pub fn emit_plot_data(data: PlotData<'_>, dir: &Path) -> Result<Vec<PathBuf>, CliError> {
    let files: Vec<(&str, String)> = match data {
        PlotData::Flow(r) => vec![
            ("history.jsonl", history_jsonl(r)),
            ("polygons.csv", polygons_csv(r)),
        ],
        PlotData::Profile(p) => vec![("profile.csv", profile_csv(p))],
        PlotData::Trace(t) => vec![("trace.csv", trace_csv(t))],
    };
    let mut written = Vec::with_capacity(files.len());
    for (name, contents) in files {
        let path = dir.join(name);
        write_file(&path, &contents)?;
        written.push(path);
    }
    Ok(written)
}
