use crate::error::Result;
use crate::fields::{spectral, PeriodicField};
use crate::numeric::pairwise_sum_by;
use crate::pressure::PressureLaw;
use crate::scheme::SchemeState;

/// E(t) = int (|u|^2/2 + Pi_mu(rho)) dx, trapezoidal quadrature (exact mean
/// times volume on the torus).
pub fn energy(state: &SchemeState) -> Result<f64> {
    energy_of(&state.rho, &state.u, &state.law)
}

pub fn energy_of(rho: &PeriodicField, u: &PeriodicField, law: &PressureLaw) -> Result<f64> {
    let grid = rho.grid();
    let n = grid.points();
    let mut kinetic = vec![0.0; n];
    for c in 0..u.components() {
        for (k, v) in kinetic.iter_mut().zip(u.component(c)) {
            *k += 0.5 * v * v;
        }
    }
    let rv = rho.component(0);
    let mut vals = kinetic;
    for i in 0..n {
        vals[i] += law.potential(rv[i].max(0.0))?;
    }
    Ok(pairwise_sum_by(n, |i| vals[i]) * grid.cell_volume())
}

/// ||grad u||_2^2 over all components.
pub fn enstrophy(u: &PeriodicField) -> Result<f64> {
    let grid = u.grid();
    let mut acc = 0.0;
    for c in 0..u.components() {
        let plane = PeriodicField::from_component_planes(grid, vec![u.component(c).to_vec()])?;
        let g = spectral::gradient(&plane)?;
        acc += g.l2_norm_squared();
    }
    Ok(acc)
}

/// delta int rho^m Pi_mu'(rho) dx, the damping contribution to the energy
/// budget.
pub fn damping_rate(rho: &PeriodicField, law: &PressureLaw, delta: f64, m: f64) -> Result<f64> {
    if delta == 0.0 {
        return Ok(0.0);
    }
    let n = rho.grid().points();
    let rv = rho.component(0);
    let mut vals = vec![0.0; n];
    for i in 0..n {
        let r = rv[i].max(0.0);
        vals[i] = if r > 0.0 {
            r.powf(m) * law.potential_deriv(r)?
        } else {
            0.0
        };
    }
    Ok(delta * pairwise_sum_by(n, |i| vals[i]) * rho.grid().cell_volume())
}
