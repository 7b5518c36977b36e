use super::{minimize_eigenvalue, EigenError, SolverOptions};
use crate::domain::{inradius, PlanarDomain};
use crate::radial::{comparison_principle_holds, find_r_lambda, PLaplaceParams, DEFAULT_TOL};

/// Inradius against the critical radius of the domain's own eigenvalue.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct NarrownessReport {
    pub lambda: f64,
    #[cfg_attr(feature = "serde", serde(rename = "R_lambda"))]
    pub r_lambda: f64,
    pub inradius: f64,
    /// `R_λ - inradius`.
    pub margin: f64,
    /// `margin > -2h`.
    pub pass: bool,
    pub h: f64,
}

/// A ball of radius `R_λ` inside `Ω` would force `λ₁(Ω) ≤ λ` by domain
/// monotonicity, so with `λ = λ₁(Ω)` no larger ball fits: on the raster,
/// the inradius may exceed `R_λ` by at most `2h`.
pub fn narrowness_check(
    domain: &PlanarDomain,
    p: f64,
    opts: &SolverOptions,
) -> Result<NarrownessReport, EigenError> {
    if !comparison_principle_holds(2, p) {
        log::warn!("p = {p}: the comparison principle is not known to hold in the plane");
    }
    let eig = minimize_eigenvalue(domain, p, opts)?;
    let params =
        PLaplaceParams::euclidean(2, p, eig.lambda).map_err(crate::radial::RadialError::from)?;
    let r = find_r_lambda(&params, DEFAULT_TOL)?.radius;
    let ir = inradius(domain).radius;
    let margin = r - ir;
    Ok(NarrownessReport {
        lambda: eig.lambda,
        r_lambda: r,
        inradius: ir,
        margin,
        pass: margin > -2.0 * domain.h,
        h: domain.h,
    })
}
