//! First Dirichlet eigenfunction of the p-Laplacian on geodesic balls.
//!
//! The radial equation `(|z'|^{p-2} z')' + (n-1) a(t) |z'|^{p-2} z' + λ |z|^{p-2} z = 0`
//! with `a(t) = 1/t` in ℝⁿ and `a(t) = coth t` in ℍⁿ is integrated in flux
//! form, with state `(z, w)` and `w = |z'|^{p-2} z'`:
//!
//! ```text
//! z' = sgn(w) |w|^{1/(p-1)}
//! w' = -(n-1) a(t) w - λ |z|^{p-2} z
//! ```
//!
//! which stays a regular first-order system for every `p > 1`. The first
//! positive zero of `z` is the critical radius `R_λ`: the radius of the ball
//! whose first eigenvalue is exactly `λ`.

use alloc::vec::Vec;
use core::fmt;

#[allow(unused_imports)] // shadowed by std when a dependent links it
use num_traits::Float;

use crate::ode::{DenseSegment, Dopri5, StepError};

/// Default relative tolerance of the radial integrator.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Relative accuracy of the bisection on the dense output.
pub const ROOT_TOL: f64 = 1e-12;

/// First search horizon for the zero of `z`; doubled twice before giving up.
pub const ROOT_HORIZON: f64 = 50.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Geometry {
    Euclidean,
    Hyperbolic,
}

impl fmt::Display for Geometry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Geometry::Euclidean => f.write_str("euclidean"),
            Geometry::Hyperbolic => f.write_str("hyperbolic"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ParamError {
    #[error("dimension n = {0} must be at least 2")]
    Dimension(u32),
    #[error("exponent p = {0} must exceed 1")]
    Exponent(f64),
    #[error("lambda = {0} must be positive")]
    NonPositiveLambda(f64),
    #[error(
        "lambda = {lambda} must exceed the bottom of the hyperbolic spectrum (n-1)^p/p^p = {threshold}"
    )]
    BelowSpectralThreshold { lambda: f64, threshold: f64 },
    #[error("radius {0} must be positive and finite")]
    Radius(f64),
    #[error("tolerance {0} must lie in (0, 1e-3]")]
    Tolerance(f64),
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum RadialError {
    #[error(transparent)]
    InvalidParams(#[from] ParamError),
    #[error("adaptive step size underflow at t = {t}")]
    StepFailure { t: f64 },
    #[error("flux w reached zero at t = {t} before z vanished")]
    AnomalousFlux { t: f64 },
    #[error("z has no sign change before t = {horizon}")]
    NoRoot { horizon: f64 },
}

/// `(n, p, λ)` together with the ambient geometry.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PLaplaceParams {
    pub n: u32,
    pub p: f64,
    pub lambda: f64,
    pub geometry: Geometry,
}

/// `((n-1)/p)^p`, the bottom of the spectrum of the p-Laplacian on ℍⁿ.
pub fn hyperbolic_threshold(n: u32, p: f64) -> f64 {
    ((n as f64 - 1.0) / p).powf(p)
}

impl PLaplaceParams {
    pub fn new(n: u32, p: f64, lambda: f64, geometry: Geometry) -> Result<Self, ParamError> {
        let params = Self {
            n,
            p,
            lambda,
            geometry,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn euclidean(n: u32, p: f64, lambda: f64) -> Result<Self, ParamError> {
        Self::new(n, p, lambda, Geometry::Euclidean)
    }

    pub fn hyperbolic(n: u32, p: f64, lambda: f64) -> Result<Self, ParamError> {
        Self::new(n, p, lambda, Geometry::Hyperbolic)
    }

    pub fn validate(&self) -> Result<(), ParamError> {
        if self.n < 2 {
            return Err(ParamError::Dimension(self.n));
        }
        if !(self.p > 1.0) || !self.p.is_finite() {
            return Err(ParamError::Exponent(self.p));
        }
        if !(self.lambda > 0.0) || !self.lambda.is_finite() {
            return Err(ParamError::NonPositiveLambda(self.lambda));
        }
        if self.geometry == Geometry::Hyperbolic {
            let threshold = hyperbolic_threshold(self.n, self.p);
            if !(self.lambda > threshold) {
                return Err(ParamError::BelowSpectralThreshold {
                    lambda: self.lambda,
                    threshold,
                });
            }
        }
        Ok(())
    }

    /// Whether `p > (2n+2)/(n+2)`, the range where the strong comparison
    /// principle behind the narrowness bounds is available.
    pub fn scp_valid(&self) -> bool {
        comparison_principle_holds(self.n, self.p)
    }

    /// Series start point `ε = 1e-6 / (1+λ)^{1/p}`.
    pub fn series_start(&self) -> f64 {
        1e-6 / (1.0 + self.lambda).powf(1.0 / self.p)
    }

    /// Two-term expansion of `(z, w)` near the origin.
    pub fn series_state(&self, t: f64) -> [f64; 2] {
        let n = self.n as f64;
        let p = self.p;
        let z =
            1.0 - (p - 1.0) / p * (self.lambda / n).powf(1.0 / (p - 1.0)) * t.powf(p / (p - 1.0));
        let w = -self.lambda * t / n;
        [z, w]
    }
}

pub fn comparison_principle_holds(n: u32, p: f64) -> bool {
    let n = n as f64;
    p > (2.0 * n + 2.0) / (n + 2.0)
}

/// Right-hand side of the flux system at radius `t > 0`.
pub fn radial_rhs(state: [f64; 2], t: f64, params: &PLaplaceParams) -> [f64; 2] {
    let [z, w] = state;
    let p = params.p;
    let a = match params.geometry {
        Geometry::Euclidean => 1.0 / t,
        Geometry::Hyperbolic => 1.0 / t.tanh(),
    };
    let dz = signed_pow(w, 1.0 / (p - 1.0));
    let dw = -(params.n as f64 - 1.0) * a * w - params.lambda * signed_pow(z, p - 1.0);
    [dz, dw]
}

/// `sgn(x) |x|^e`.
fn signed_pow(x: f64, e: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else if e == 1.0 {
        x
    } else {
        x.signum() * x.abs().powf(e)
    }
}

/// Sampled radial eigenfunction with its dense interpolant.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialProfile {
    pub params: PLaplaceParams,
    pub t: Vec<f64>,
    pub z: Vec<f64>,
    pub w: Vec<f64>,
    pub first_zero: Option<f64>,
    pub evaluations: usize,
    segments: Vec<DenseSegment<2>>,
}

impl RadialProfile {
    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }

    /// Dense evaluation of `(z, w)` anywhere in the integrated range.
    pub fn eval(&self, t: f64) -> Option<[f64; 2]> {
        let first = self.segments.first()?;
        let last = self.segments.last()?;
        if t < first.t0 || t > last.t1() {
            return None;
        }
        let idx = self.segments.partition_point(|s| s.t1() < t);
        let seg = &self.segments[idx.min(self.segments.len() - 1)];
        Some(seg.eval(t))
    }

    pub fn t_end(&self) -> f64 {
        *self.t.last().unwrap_or(&0.0)
    }
}

/// Integrates from the series start until `z` first changes sign or `t_max`.
pub fn integrate_profile(
    params: &PLaplaceParams,
    t_max: f64,
    tol: f64,
) -> Result<RadialProfile, RadialError> {
    params.validate()?;
    check_tol(tol)?;
    if !(t_max > 0.0) || !t_max.is_finite() {
        return Err(ParamError::Radius(t_max).into());
    }
    let mut shooter = Shooter::start(params, tol);
    shooter.advance_to(t_max)?;
    Ok(shooter.finish())
}

struct Shooter {
    params: PLaplaceParams,
    stepper: Dopri5<2>,
    t: Vec<f64>,
    z: Vec<f64>,
    w: Vec<f64>,
    segments: Vec<DenseSegment<2>>,
    first_zero: Option<f64>,
}

impl Shooter {
    fn start(params: &PLaplaceParams, tol: f64) -> Self {
        let eps = params.series_start();
        let y0 = params.series_state(eps);
        let params = *params;
        let mut rhs = |t: f64, y: &[f64; 2]| radial_rhs(*y, t, &params);
        let stepper = Dopri5::new(&mut rhs, eps, y0, 0.1 * eps, tol);
        Self {
            params,
            stepper,
            t: alloc::vec![eps],
            z: alloc::vec![y0[0]],
            w: alloc::vec![y0[1]],
            segments: Vec::new(),
            first_zero: None,
        }
    }

    /// Steps until `z` changes sign or `t_end` is reached; returns whether a
    /// root was found.
    fn advance_to(&mut self, t_end: f64) -> Result<bool, RadialError> {
        if self.first_zero.is_some() {
            return Ok(true);
        }
        let params = self.params;
        let mut rhs = |t: f64, y: &[f64; 2]| radial_rhs(*y, t, &params);
        while self.stepper.t < t_end {
            let seg = self
                .stepper
                .step(&mut rhs, t_end)
                .map_err(|StepError::Underflow { t }| RadialError::StepFailure { t })?;
            let [z1, w1] = self.stepper.y;
            self.segments.push(seg);
            if z1 <= 0.0 {
                let root = bisect_dense(&seg, |y| y[0]);
                let [_, w_root] = seg.eval(root);
                if w_root >= 0.0 {
                    return Err(RadialError::AnomalousFlux { t: root });
                }
                self.t.push(root);
                self.z.push(0.0);
                self.w.push(w_root);
                self.first_zero = Some(root);
                return Ok(true);
            }
            if w1 >= 0.0 {
                return Err(RadialError::AnomalousFlux { t: self.stepper.t });
            }
            self.t.push(self.stepper.t);
            self.z.push(z1);
            self.w.push(w1);
        }
        Ok(false)
    }

    fn finish(self) -> RadialProfile {
        RadialProfile {
            params: self.params,
            t: self.t,
            z: self.z,
            w: self.w,
            first_zero: self.first_zero,
            evaluations: self.stepper.evaluations,
            segments: self.segments,
        }
    }
}

/// Bisection on a segment whose left end is positive and right end is not.
fn bisect_dense(seg: &DenseSegment<2>, f: impl Fn(&[f64; 2]) -> f64) -> f64 {
    let (mut lo, mut hi) = (seg.t0, seg.t1());
    while hi - lo > ROOT_TOL * hi {
        let mid = 0.5 * (lo + hi);
        if f(&seg.eval(mid)) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn check_tol(tol: f64) -> Result<(), ParamError> {
    if tol > 0.0 && tol <= 1e-3 {
        Ok(())
    } else {
        Err(ParamError::Tolerance(tol))
    }
}

/// Critical radius with the work it took.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CriticalRadius {
    pub radius: f64,
    pub evaluations: usize,
}

/// First positive zero of the radial profile, i.e. `R_λ`.
pub fn find_r_lambda(params: &PLaplaceParams, tol: f64) -> Result<CriticalRadius, RadialError> {
    params.validate()?;
    check_tol(tol)?;
    let mut shooter = Shooter::start(params, tol);
    let mut horizon = ROOT_HORIZON;
    for _ in 0..3 {
        if shooter.advance_to(horizon)? {
            let profile = shooter.finish();
            return Ok(CriticalRadius {
                radius: profile.first_zero.unwrap_or(f64::NAN),
                evaluations: profile.evaluations,
            });
        }
        horizon *= 2.0;
    }
    Err(RadialError::NoRoot {
        horizon: horizon / 2.0,
    })
}

/// `λ_{1,p}(B_1)` in ℝⁿ, from which every other ball follows by `λ/R^p`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EuclideanBallSpectrum {
    pub n: u32,
    pub p: f64,
    pub unit_eigenvalue: f64,
}

impl EuclideanBallSpectrum {
    /// Bisects `λ` until `R_λ = 1` to relative accuracy `tol`.
    pub fn new(n: u32, p: f64, tol: f64) -> Result<Self, RadialError> {
        check_tol(tol)?;
        let inner = (0.1 * tol).max(1e-12);
        let radius = |lambda: f64| -> Result<f64, RadialError> {
            Ok(find_r_lambda(&PLaplaceParams::euclidean(n, p, lambda)?, inner)?.radius)
        };
        let (mut lo, mut hi) = (1.0, 1.0);
        while radius(lo)? < 1.0 {
            lo *= 0.5;
        }
        while radius(hi)? > 1.0 {
            hi *= 2.0;
        }
        for _ in 0..200 {
            if hi / lo - 1.0 <= tol {
                break;
            }
            let mid = (lo * hi).sqrt();
            if radius(mid)? > 1.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(Self {
            n,
            p,
            unit_eigenvalue: (lo * hi).sqrt(),
        })
    }

    pub fn eigenvalue(&self, radius: f64) -> f64 {
        self.unit_eigenvalue / radius.powf(self.p)
    }

    /// Inverse of [`Self::eigenvalue`].
    pub fn critical_radius(&self, lambda: f64) -> f64 {
        (self.unit_eigenvalue / lambda).powf(1.0 / self.p)
    }
}

/// `λ_{1,p}` of the geodesic ball of radius `radius`.
pub fn eigenvalue_of_ball(
    n: u32,
    p: f64,
    radius: f64,
    geometry: Geometry,
    tol: f64,
) -> Result<f64, RadialError> {
    if !(radius > 0.0) || !radius.is_finite() {
        return Err(ParamError::Radius(radius).into());
    }
    check_tol(tol)?;
    match geometry {
        Geometry::Euclidean => Ok(EuclideanBallSpectrum::new(n, p, tol)?.eigenvalue(radius)),
        Geometry::Hyperbolic => hyperbolic_ball_eigenvalue(n, p, radius, tol),
    }
}

fn hyperbolic_ball_eigenvalue(n: u32, p: f64, radius: f64, tol: f64) -> Result<f64, RadialError> {
    let threshold = hyperbolic_threshold(n, p);
    let inner = (0.1 * tol).max(1e-12);
    // NoRoot means the ball is larger than any horizon: treat as +∞.
    let r_of = |lambda: f64| -> Result<f64, RadialError> {
        match find_r_lambda(&PLaplaceParams::hyperbolic(n, p, lambda)?, inner) {
            Ok(r) => Ok(r.radius),
            Err(RadialError::NoRoot { .. }) => Ok(f64::INFINITY),
            Err(e) => Err(e),
        }
    };
    let mut lo = threshold * (1.0 + 1e-9) + f64::MIN_POSITIVE;
    let mut gap = 1.0 / (radius * radius) + threshold;
    let mut hi = threshold + gap;
    while r_of(hi)? > radius {
        lo = hi;
        gap *= 2.0;
        hi = threshold + gap;
    }
    let mut mid = hi;
    for _ in 0..300 {
        mid = 0.5 * (lo + hi);
        let r = r_of(mid)?;
        if (r - radius).abs() <= tol * radius {
            break;
        }
        if r > radius {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(mid)
}
