//! Coupled advance over one step via the fixed-point map behind the
//! velocity construction: given an iterate u~, solve continuity with [u~]_eps,
//! then the momentum equation with the resulting pressure; repeat until the
//! velocity iterates settle.

use super::momentum::momentum_step;
use super::params::{pressure_of, SchemeState};
use super::transport::continuity_step;
use crate::error::{Error, Result};
use crate::fields::Mollifier;

#[derive(Debug, Clone, Copy, Default)]
pub struct PicardStats {
    pub iterations: usize,
    pub residual: f64,
}

pub fn picard_coupled_step(state: &SchemeState, moll: &Mollifier) -> Result<(SchemeState, PicardStats)> {
    picard_coupled_step_dt(state, moll, state.params.dt)
}

/// Advance by an explicit dt (the run loop truncates the final step).
pub fn picard_coupled_step_dt(
    state: &SchemeState,
    moll: &Mollifier,
    dt: f64,
) -> Result<(SchemeState, PicardStats)> {
    let p = &state.params;
    let pi_start = if p.pressure_midpoint {
        Some(pressure_of(&state.rho, &state.law)?)
    } else {
        None
    };

    let mut candidate = state.u.clone();
    let mut residual = f64::INFINITY;

    for iter in 1..=p.picard_max {
        let v = moll.apply(&candidate)?;
        let rho_next = continuity_step(&state.rho, &v, p.delta, p.m, dt)?;
        let mut pi = pressure_of(&rho_next, &state.law)?;
        if let Some(pi0) = &pi_start {
            pi = pi.add_scaled(pi0, 1.0)?.map(|x| 0.5 * x);
        }
        let u_next = momentum_step(&state.u, &pi, moll, dt)?;

        let diff = u_next.add_scaled(&candidate, -1.0)?.l2_norm();
        let scale = candidate.l2_norm().max(1e-14);
        residual = diff / scale;

        let accepted = residual <= p.picard_tol;
        candidate = if p.under_relax < 1.0 && !accepted {
            u_next
                .map(|x| p.under_relax * x)
                .add_scaled(&candidate, 1.0 - p.under_relax)?
        } else {
            u_next
        };
        if accepted {
            let mut next = state.clone();
            next.t = state.t + dt;
            rho_next.check_nonnegative()?;
            next.rho = rho_next;
            next.u = candidate;
            return Ok((next, PicardStats { iterations: iter, residual }));
        }
    }
    Err(Error::PicardDiverged { iterations: p.picard_max, residual })
}
