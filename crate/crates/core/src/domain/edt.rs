//! Exact squared Euclidean distance transform (Felzenszwalb–Huttenlocher),
//! separable over columns and rows.

use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)] // shadowed by std when a dependent links it
use num_traits::Float;

use super::{Grid, PlanarDomain};
use crate::geom::Point;

/// One-dimensional lower envelope of parabolas `(q - i)² + f(i)`.
fn dt_1d(f: &[f64], out: &mut [f64], v: &mut [usize], z: &mut [f64]) {
    let n = f.len();
    if n == 0 {
        return;
    }
    let mut k = 0usize;
    v[0] = 0;
    z[0] = f64::NEG_INFINITY;
    z[1] = f64::INFINITY;
    for q in 1..n {
        if f[q] == f64::INFINITY {
            continue;
        }
        loop {
            let p = v[k];
            if f[p] == f64::INFINITY {
                // an infinite parabola never contributes; replace it
                v[k] = q;
                z[k + 1] = f64::INFINITY;
                break;
            }
            let s = ((f[q] + (q * q) as f64) - (f[p] + (p * p) as f64)) / (2.0 * (q - p) as f64);
            if s <= z[k] {
                if k == 0 {
                    v[0] = q;
                    z[1] = f64::INFINITY;
                    break;
                }
                k -= 1;
                continue;
            }
            k += 1;
            v[k] = q;
            z[k] = s;
            z[k + 1] = f64::INFINITY;
            break;
        }
    }
    k = 0;
    for (q, o) in out.iter_mut().enumerate() {
        while z[k + 1] < q as f64 {
            k += 1;
        }
        let p = v[k];
        let d = q as f64 - p as f64;
        *o = d * d + f[p];
    }
}

/// Squared distance, in cell units, from each cell centre to the nearest
/// cell centre where `seed` holds.
pub fn squared_distance_to(grid: &Grid, seed: impl Fn(usize) -> bool) -> Vec<f64> {
    let (nx, ny) = (grid.nx, grid.ny);
    let mut d: Vec<f64> = (0..grid.len())
        .map(|k| if seed(k) { 0.0 } else { f64::INFINITY })
        .collect();
    let m = nx.max(ny);
    let mut buf = vec![0.0; m];
    let mut out = vec![0.0; m];
    let mut v = vec![0usize; m];
    let mut z = vec![0.0; m + 1];
    for i in 0..nx {
        for j in 0..ny {
            buf[j] = d[j * nx + i];
        }
        dt_1d(&buf[..ny], &mut out[..ny], &mut v, &mut z);
        for j in 0..ny {
            d[j * nx + i] = out[j];
        }
    }
    for j in 0..ny {
        let row = &mut d[j * nx..(j + 1) * nx];
        buf[..nx].copy_from_slice(row);
        dt_1d(&buf[..nx], &mut out[..nx], &mut v, &mut z);
        row.copy_from_slice(&out[..nx]);
    }
    d
}

/// Largest inscribed radius and where it is attained.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Inradius {
    pub radius: f64,
    /// Cell achieving the maximum (the first one in scan order).
    pub cell: usize,
    pub center: Point,
}

/// Distance from every inside cell centre to the nearest outside cell
/// centre, less half a cell so that it estimates the distance to the
/// boundary itself. Outside cells get 0.
pub fn boundary_distance_field(domain: &PlanarDomain) -> Vec<f64> {
    let sq = squared_distance_to(&domain.grid, |k| !domain.mask[k]);
    let h = domain.h;
    sq.iter()
        .zip(&domain.mask)
        .map(|(&s, &m)| if m { (s.sqrt() - 0.5) * h } else { 0.0 })
        .collect()
}

pub fn inradius(domain: &PlanarDomain) -> Inradius {
    let field = boundary_distance_field(domain);
    let mut best = Inradius {
        radius: 0.0,
        cell: 0,
        center: domain.grid.center(0),
    };
    for (k, &d) in field.iter().enumerate() {
        if domain.mask[k] && d > best.radius {
            best = Inradius {
                radius: d,
                cell: k,
                center: domain.grid.center(k),
            };
        }
    }
    best
}
