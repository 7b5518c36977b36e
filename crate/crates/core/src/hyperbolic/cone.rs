use alloc::vec::Vec;
use core::f64::consts::TAU;

use num_complex::Complex64;
#[allow(unused_imports)] // shadowed by std when a dependent links it
use num_traits::Float;

use super::model::{geodesic_through, is_ideal, Mobius};
use super::{HDomain, HyperbolicError};
use crate::geom::Point;

/// The tube of radius `r` about the geodesic ray from parameter `s` toward
/// the ideal point `z`, on the geodesic from `y`. Arclength is measured from
/// the geodesic's point nearest the origin.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ConeSpec {
    pub z: Point,
    pub y: Point,
    pub r: f64,
    pub s: f64,
}

/// How densely a tube is probed. `None` picks `r/4` for the step and
/// `10 r + 10` for the horizon.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ConeSampling {
    pub step: Option<f64>,
    pub ball_samples: usize,
    pub horizon: Option<f64>,
}

impl Default for ConeSampling {
    fn default() -> Self {
        Self {
            step: None,
            ball_samples: 32,
            horizon: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ConeSearch {
    /// Far ends tried: this many ideal points, equally spaced with `z` as
    /// the one left out.
    pub directions: usize,
    pub starts: Vec<f64>,
    pub sampling: ConeSampling,
}

impl Default for ConeSearch {
    fn default() -> Self {
        let mut starts = alloc::vec![0.0];
        starts.extend((0..7).map(|k| (1u32 << k) as f64));
        Self {
            directions: 64,
            starts,
            sampling: ConeSampling::default(),
        }
    }
}

fn check(cone: &ConeSpec) -> Result<(), HyperbolicError> {
    if !is_ideal(cone.z) || !is_ideal(cone.y) {
        return Err(HyperbolicError::InvalidCone("z and y must be ideal points"));
    }
    if cone.z.dist(cone.y) <= 1e-12 {
        return Err(HyperbolicError::InvalidCone("z and y coincide"));
    }
    if !(cone.r > 0.0) || !cone.r.is_finite() || !cone.s.is_finite() {
        return Err(HyperbolicError::InvalidCone(
            "r must be positive and s finite",
        ));
    }
    Ok(())
}

/// Do the sampled balls of the tube all lie in `domain`?
///
/// The test runs in the half-plane chart where the ray is `i eᵗ`, so the
/// ball about `γ(t)` is the Euclidean circle of centre `i eᵗ cosh r` and
/// radius `eᵗ sinh r`. In disk coordinates the samples would crowd against
/// the rim and lose all precision by `t ≈ 35`.
pub fn cone_region_contains(
    domain: &HDomain,
    cone: &ConeSpec,
    sampling: &ConeSampling,
) -> Result<bool, HyperbolicError> {
    check(cone)?;
    let g = geodesic_through(cone.y.normalized(), cone.z.normalized())
        .map_err(|_| HyperbolicError::InvalidCone("z and y coincide"))?;
    let chart = Mobius::chart(g.endpoints[0], g.endpoints[1], g.foot());
    let region = domain.compile(Some(&chart))?;
    let step = sampling.step.unwrap_or(0.25 * cone.r);
    let horizon = sampling.horizon.unwrap_or(10.0 * cone.r + 10.0);
    if !(step > 0.0) {
        return Err(HyperbolicError::InvalidCone("step must be positive"));
    }
    let (sh, ch) = (cone.r.sinh(), cone.r.cosh());
    let ring: Vec<Complex64> = (0..sampling.ball_samples)
        .map(|k| Complex64::from_polar(sh, TAU * k as f64 / sampling.ball_samples as f64))
        .collect();
    let count = (horizon / step).ceil() as usize;
    for k in 0..=count {
        let t = cone.s + (k as f64 * step).min(horizon);
        let scale = t.exp();
        let mid = Complex64::new(0.0, ch);
        if !region.contains(scale * Complex64::i()) {
            return Ok(false);
        }
        if ring.iter().any(|&q| !region.contains(scale * (mid + q))) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A cone witnessing that `z` is a conical point of radius `r`, from the
/// search set. `None` means no witness was found, not that none exists.
pub fn conical_witness(
    domain: &HDomain,
    z: Point,
    r: f64,
    search: &ConeSearch,
) -> Result<Option<ConeSpec>, HyperbolicError> {
    let base = z.y.atan2(z.x);
    let m = search.directions + 1;
    for k in 1..m {
        let y = super::model::ideal(base + TAU * k as f64 / m as f64);
        for &s in &search.starts {
            let cone = ConeSpec { z, y, r, s };
            if cone_region_contains(domain, &cone, &search.sampling)? {
                return Ok(Some(cone));
            }
        }
    }
    Ok(None)
}

/// Is `z` a conical point of radius `r` for `domain`, as far as the search
/// set can tell?
pub fn conical_point_test(
    domain: &HDomain,
    z: Point,
    r: f64,
    search: &ConeSearch,
) -> Result<bool, HyperbolicError> {
    conical_witness(domain, z, r, search).map(|w| w.is_some())
}
