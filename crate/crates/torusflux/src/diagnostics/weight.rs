//! Transported weight: d_t w + u . grad w + Lambda w = 0 with w(0) = 1 (or
//! the mass-capped profile min(1, M/rho0)), advanced by semi-Lagrangian
//! trace-back with multilinear interpolation followed by the exact decay
//! factor exp(-Lambda dt). Both substeps map [0, 1] into itself, so the
//! weight bounds hold pointwise at every step by construction.

use crate::error::{Error, Result};
use crate::fields::{maximal_function, singular::gradient_magnitude, PeriodicField};
use crate::numeric::pairwise_sum_by;

/// Coefficients of the absorbing rate Lambda = c1 + c2 M(|grad u|) + c3 |G|
/// + c4 M(rho^gamma). The constants are never pinned upstream; defaults are
/// c1 = c2 = c3 = 1, c4 = 0.
#[derive(Debug, Clone, Copy)]
pub struct WeightParams {
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub c4: f64,
}

impl Default for WeightParams {
    fn default() -> Self {
        Self { c1: 1.0, c2: 1.0, c3: 1.0, c4: 0.0 }
    }
}

/// Initial weight: 1 everywhere, or the mass-capped variant
/// min(1, M/rho0) used for unbounded initial densities.
pub fn initial_weight(rho0: &PeriodicField, cap: Option<f64>) -> PeriodicField {
    let mut w = PeriodicField::constant(rho0.grid(), 1.0);
    if let Some(m) = cap {
        for (wv, &r) in w.values_mut().iter_mut().zip(rho0.component(0)) {
            if r > m {
                *wv = m / r;
            }
        }
    }
    w.nonnegative = true;
    w
}

/// Assemble Lambda on the grid.
pub fn absorbing_rate(
    u: &PeriodicField,
    g_field: &PeriodicField,
    params: &WeightParams,
    rho_gamma: Option<&PeriodicField>,
) -> Result<PeriodicField> {
    let grid = u.grid();
    let m_grad = maximal_function(&gradient_magnitude(u)?)?;
    let mut lam = PeriodicField::constant(grid, params.c1);
    for (l, m) in lam.values_mut().iter_mut().zip(m_grad.component(0)) {
        *l += params.c2 * m;
    }
    for (l, g) in lam.values_mut().iter_mut().zip(g_field.component(0)) {
        *l += params.c3 * g.abs();
    }
    if params.c4 != 0.0 {
        let rg = rho_gamma.ok_or_else(|| {
            Error::domain("c4 > 0 needs the rho^gamma field for the absorbing rate")
        })?;
        let m_rg = maximal_function(rg)?;
        for (l, m) in lam.values_mut().iter_mut().zip(m_rg.component(0)) {
            *l += params.c4 * m;
        }
    }
    lam.nonnegative = true;
    Ok(lam)
}

/// Periodic multilinear interpolation of a scalar field at the traced-back
/// point x - u(x) dt. Convex combination of nodal values: preserves [0, 1].
fn interp_at(field: &PeriodicField, pos: &[f64]) -> f64 {
    let grid = field.grid();
    let n = grid.n_per_axis();
    let dx = grid.spacing();
    let dim = grid.dim();
    let vals = field.component(0);

    let mut base = [0usize; 3];
    let mut frac = [0.0f64; 3];
    for a in 0..dim {
        let s = pos[a] / dx;
        let f = s.floor();
        base[a] = ((f as i64).rem_euclid(n as i64)) as usize;
        frac[a] = s - f;
    }
    let mut acc = 0.0;
    for corner in 0..(1usize << dim) {
        let mut idx = [0usize; 3];
        let mut w = 1.0;
        for a in 0..dim {
            if corner & (1 << a) != 0 {
                idx[a] = (base[a] + 1) % n;
                w *= frac[a];
            } else {
                idx[a] = base[a];
                w *= 1.0 - frac[a];
            }
        }
        acc += w * vals[grid.flatten(&idx[..dim])];
    }
    acc
}

/// One weight step with a precomputed Lambda field.
pub fn weight_step(
    w: &PeriodicField,
    u: &PeriodicField,
    lambda: &PeriodicField,
    dt: f64,
) -> Result<PeriodicField> {
    let grid = w.grid();
    if u.grid() != grid || lambda.grid() != grid {
        return Err(Error::domain("weight step fields must share one grid"));
    }
    let mut out = PeriodicField::scalar(grid);
    let dim = grid.dim();
    let mut pos = [0.0f64; 3];
    for idx in 0..grid.points() {
        let ix = grid.unflatten(idx);
        for a in 0..dim {
            pos[a] = grid.coord(ix[a]) - u.component(a)[idx] * dt;
        }
        let traced = interp_at(w, &pos[..dim]);
        out.values_mut()[idx] = traced * (-lambda.component(0)[idx] * dt).exp();
    }
    out.nonnegative = true;
    Ok(out)
}

/// Full step: assemble Lambda from (u, G, rho^gamma), advance w, and return
/// the new weight together with int rho Lambda dx (the budget increment of
/// the rho |log w| bound).
pub fn weight_evolve(
    w: &PeriodicField,
    u: &PeriodicField,
    g_field: &PeriodicField,
    params: &WeightParams,
    rho: &PeriodicField,
    rho_gamma: Option<&PeriodicField>,
    dt: f64,
) -> Result<(PeriodicField, f64)> {
    let lambda = absorbing_rate(u, g_field, params, rho_gamma)?;
    let next = weight_step(w, u, &lambda, dt)?;
    let n = rho.grid().points();
    let budget = pairwise_sum_by(n, |i| rho.component(0)[i] * lambda.component(0)[i])
        * rho.grid().cell_volume();
    Ok((next, budget))
}

/// int rho |log w| dx; w is clamped away from zero at the representable
/// floor so the integral stays finite.
pub fn rho_log_weight_integral(rho: &PeriodicField, w: &PeriodicField) -> f64 {
    let n = rho.grid().points();
    pairwise_sum_by(n, |i| {
        let wv = w.component(0)[i].max(f64::MIN_POSITIVE);
        rho.component(0)[i] * wv.ln().abs()
    }) * rho.grid().cell_volume()
}
