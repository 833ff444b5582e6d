use super::config::Config;
use crate::error::{Error, Result};
use crate::fields::{Mollifier, MollifierSpec, PeriodicField, TorusGrid};
use crate::scheme::{cfl_dt_max, SchemeParams, SchemeState};

/// Build the initial state from the config recipe: clamp the target profile
/// into [rho_min, rho_max], smooth it with eps0 = mollify_cells * dx, start
/// the velocity at rest.
pub fn build_initial_state(cfg: &Config) -> Result<SchemeState> {
    let grid = TorusGrid::new(cfg.grid.dim, cfg.grid.n, cfg.grid.length)?;
    let ini = &cfg.initial;
    let mut rho = match ini.kind.as_str() {
        "sine" => {
            let a = ini.amplitude;
            PeriodicField::scalar_from_fn(grid, |x| 1.0 + a * x[0].sin())
        }
        "constant" => PeriodicField::constant(grid, ini.value),
        other => {
            return Err(Error::config(format!(
                "initial.kind: unknown recipe {other:?} (expected sine or constant)"
            )))
        }
    };
    let (lo, hi) = (ini.rho_min, ini.rho_max);
    if !(lo >= 0.0 && hi > lo) {
        return Err(Error::config("initial clamp needs 0 <= rho_min < rho_max"));
    }
    for v in rho.values_mut() {
        *v = v.clamp(lo, hi);
    }
    if ini.mollify_cells > 0 {
        let eps0 = ini.mollify_cells as f64 * grid.spacing();
        let moll = Mollifier::build(grid, MollifierSpec::new(eps0))?;
        rho = moll.apply(&rho)?;
    }
    rho.nonnegative = true;

    let u = PeriodicField::vector(grid);

    let law = cfg.law.build()?;
    let mut params = SchemeParams::new(
        cfg.scheme.epsilon,
        cfg.scheme.delta,
        cfg.law.big_gamma,
        1.0, // placeholder, resolved below
        cfg.scheme.t_end,
    );
    params.m = cfg.resolved_m();
    params.picard_tol = cfg.scheme.picard_tol;
    params.picard_max = cfg.scheme.picard_max;
    params.under_relax = cfg.scheme.under_relax;
    params.pressure_midpoint = cfg.scheme.pressure_midpoint;
    params.dt = match cfg.scheme.dt {
        Some(dt) => dt,
        None => default_dt(&rho, &u, &law, grid)?,
    };

    SchemeState::new(rho, u, params, law)
}

/// Default time step: an advective CFL estimate with a crude forcing-speed
/// proxy sqrt(max pi_mu'(rho0)), floored so resting initial data still gets
/// a sensible step.
pub fn default_dt(
    rho: &PeriodicField,
    u: &PeriodicField,
    law: &crate::pressure::PressureLaw,
    grid: TorusGrid,
) -> Result<f64> {
    let mut speed = 0.0f64;
    for &r in rho.component(0) {
        speed = speed.max(law.pressure_deriv(r.max(0.0)).max(0.0));
    }
    let speed = speed.sqrt() + u.linf_norm();
    let advective = cfl_dt_max(u).min(0.25 * grid.spacing() / speed.max(0.5));
    Ok(advective.min(0.25 * grid.spacing()))
}
