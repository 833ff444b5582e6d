//! torusflux: a periodic-domain laboratory for a regularized compressible
//! viscous fluid model.
//!
//! The crate couples a damped, mollified transport equation for the density
//! with a forced heat equation for the velocity on the d-dimensional torus,
//! and computes the structural functionals that govern the model's
//! convergence behaviour (energy budget, effective viscous flux, transported
//! weights, kernel compactness functionals, oscillation defect, pressure
//! monitors) as runtime diagnostics.

pub mod error;
pub mod numeric;
pub mod fields;
pub mod harness;
pub mod diagnostics;
pub mod pressure;
pub mod scheme;

pub use error::{Error, Result};
