//! Numerical kernels for extremal domains of the p-Laplacian.
//!
//! * [`radial`]: critical radius `R_λ` and ball eigenvalues in ℝⁿ and ℍⁿ.
//! * [`domain`]: rasterized planar domains, inradius, halfplane caps and the
//!   Euclidean moving-plane sweep.
//! * [`eigen`]: first Dirichlet eigenpair on a raster, boundary normal
//!   derivatives, extremality defect and the narrowness check.
//! * [`flow`]: Hadamard shape derivative and the volume-preserving flow.
//! * [`hyperbolic`]: Poincaré-disk kernel, cones at infinity and the
//!   moving-geodesic sweep.
//!
//! The crate is `no_std` and needs only `alloc`.

#![no_std]
// `!(x > 0.0)` is used on purpose: it rejects NaN along with the rest
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod domain;
pub mod eigen;
pub mod flow;
pub mod geom;
pub mod hyperbolic;
pub mod radial;

mod ode;
