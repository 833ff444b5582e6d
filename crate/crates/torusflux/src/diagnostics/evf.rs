//! Effective viscous flux G = div u - [pi_mu(rho)]_eps and the residual of
//! its evolution identity d_t (-Delta)^{-1} div u = -G.
//!
//! G carries a nonzero spatial mean (-<[pi]_eps>), while (-Delta)^{-1} acts
//! on the zero-mean part only, so the computable residual compares the
//! backward difference of the stored potential against the zero-mean
//! projection of -G.

use crate::error::Result;
use crate::fields::{spectral, Mollifier, PeriodicField};
use crate::scheme::{pressure_of, SchemeState};

/// G on the grid for the current state.
pub fn effective_viscous_flux(state: &SchemeState, moll: &Mollifier) -> Result<PeriodicField> {
    let div_u = spectral::divergence(&state.u)?;
    let pi = pressure_of(&state.rho, &state.law)?;
    let pi_eps = moll.apply(&pi)?;
    div_u.add_scaled(&pi_eps, -1.0)
}

/// (-Delta)^{-1} div u, the potential whose time derivative is -G.
pub fn evf_potential(u: &PeriodicField) -> Result<PeriodicField> {
    let div_u = spectral::divergence(u)?;
    spectral::inv_laplacian(&div_u, true)
}

/// Tracks the potential across steps and reports the identity residual
/// r = (Phi_n - Phi_{n-1})/dt + (G - <G>) by first-order backward
/// difference. Needs at least two stored steps.
#[derive(Debug, Default)]
pub struct EvfTracker {
    prev: Option<PeriodicField>,
}

impl EvfTracker {
    pub fn new() -> Self {
        Self::default()
    }

    /// Advance the tracker; returns ||r||_2 once history exists.
    pub fn step(
        &mut self,
        state: &SchemeState,
        g_field: &PeriodicField,
        dt: f64,
    ) -> Result<Option<f64>> {
        let phi = evf_potential(&state.u)?;
        let residual = match &self.prev {
            None => None,
            Some(prev) => {
                let mut r = phi.add_scaled(prev, -1.0)?.map(|v| v / dt);
                let g_mean = g_field.mean();
                r = r.add_scaled(g_field, 1.0)?.map(|v| v - g_mean);
                Some(r.l2_norm())
            }
        };
        self.prev = Some(phi);
        Ok(residual)
    }
}
