//! Velocity step for d_t u + grad [pi]_eps = Delta u: the diffusion factor
//! exp(-|k|^2 dt) is applied exactly per mode, the pressure gradient enters
//! through the Duhamel weight phi1(-|k|^2 dt) so a constant-in-time forcing
//! is integrated exactly.

use crate::error::{Error, Result};
use crate::fields::{spectral, Mollifier, PeriodicField};

/// phi1(z) = (e^z - 1)/z, continuous at 0.
fn phi1(z: f64) -> f64 {
    if z.abs() < 1e-6 {
        1.0 + 0.5 * z + z * z / 6.0
    } else {
        z.exp_m1() / z
    }
}

/// One IMEX step. `forcing_pressure` is pi_mu(rho) in physical space; pass
/// the field the caller wants frozen over the step (start value for first
/// order, Picard midpoint for the second-order option).
pub fn momentum_step(
    u: &PeriodicField,
    forcing_pressure: &PeriodicField,
    moll: &Mollifier,
    dt: f64,
) -> Result<PeriodicField> {
    let grid = u.grid();
    if u.components() != grid.dim() {
        return Err(Error::domain("momentum step expects a vector velocity"));
    }
    if forcing_pressure.grid() != grid || !forcing_pressure.is_scalar() {
        return Err(Error::domain("forcing pressure must be a scalar on the same grid"));
    }
    let p_eps = moll.apply(forcing_pressure)?;
    let source = spectral::gradient(&p_eps)?; // grad [pi]_eps; applied with a minus sign

    let mut planes = Vec::with_capacity(u.components());
    for c in 0..u.components() {
        let mut uhat = spectral::forward(grid, u.component(c));
        let shat = spectral::forward(grid, source.component(c));
        for (idx, (uc, sc)) in uhat.iter_mut().zip(shat.iter()).enumerate() {
            let ix = grid.unflatten(idx);
            let mut k2 = 0.0;
            for a in 0..grid.dim() {
                let k = grid.wavenumber(ix[a]);
                k2 += k * k;
            }
            let z = -k2 * dt;
            *uc = *uc * z.exp() - *sc * dt * phi1(z);
        }
        planes.push(spectral::inverse(grid, uhat));
    }
    PeriodicField::from_component_planes(grid, planes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::{MollifierSpec, TorusGrid};

    fn setup(n: usize) -> (TorusGrid, Mollifier) {
        let g = TorusGrid::standard(1, n).unwrap();
        let m = Mollifier::build(g, MollifierSpec::new(0.4)).unwrap();
        (g, m)
    }

    #[test]
    fn heat_mode_decay_is_exact() {
        // u0 = sin(x) e1, zero forcing, t = 1 -> e^{-1} sin(x)
        let (g, moll) = setup(64);
        let mut u = PeriodicField::vector_from_fn(g, |x, _| x[0].sin());
        let zero = PeriodicField::scalar(g);
        let dt = 1e-2;
        for _ in 0..100 {
            u = momentum_step(&u, &zero, &moll, dt).unwrap();
        }
        let decay = (-1.0f64).exp();
        for (i, v) in u.component(0).iter().enumerate() {
            let expect = decay * g.coord(i).sin();
            assert!(
                (v - expect).abs() <= 1e-10 * decay.max(expect.abs()),
                "rel err too large at {i}: {v} vs {expect}"
            );
        }
    }

    #[test]
    fn uniform_pressure_exerts_no_force() {
        let (g, moll) = setup(32);
        let u0 = PeriodicField::vector_from_fn(g, |x, _| (2.0 * x[0]).cos());
        let p = PeriodicField::constant(g, 7.0);
        let stepped = momentum_step(&u0, &p, &moll, 0.05).unwrap();
        let free = momentum_step(&u0, &PeriodicField::scalar(g), &moll, 0.05).unwrap();
        for (a, b) in stepped.values().iter().zip(free.values()) {
            assert!((a - b).abs() < 1e-13);
        }
    }

    #[test]
    fn mean_velocity_is_conserved() {
        let (g, moll) = setup(64);
        let u0 = PeriodicField::vector_from_fn(g, |x, _| 0.7 + x[0].sin());
        let p = PeriodicField::scalar_from_fn(g, |x| (2.0 * x[0]).sin());
        let mut u = u0.clone();
        for _ in 0..20 {
            u = momentum_step(&u, &p, &moll, 0.01).unwrap();
        }
        assert!((u.component_mean(0) - 0.7).abs() < 1e-13);
    }

    #[test]
    fn manufactured_solution_first_order_in_time() {
        // target u*(t, x) = e^{-t} sin(t + x): solves d_t u - Delta u = S with
        // S = d_t u* - Delta u* = e^{-t} cos(t+x); we feed S = -grad [pi]_eps
        // by choosing pi-hat = -S-hat premultiplied by the inverse mollifier
        // symbol at mode 1, and freeze S at the step start (first order).
        let errs: Vec<f64> = [40usize, 80, 160]
            .iter()
            .map(|&steps| {
                let (g, moll) = setup(64);
                let t_end = 0.5;
                let dt = t_end / steps as f64;
                let sym = moll.multiplier_at(&[1]);
                let mut u = PeriodicField::vector_from_fn(g, |x, _| x[0].sin());
                for s in 0..steps {
                    let t = s as f64 * dt;
                    // S(t,x) = e^{-t} cos(t + x) = -grad(pi) with
                    // pi = -e^{-t} sin(t + x); undo the mollifier on mode 1
                    let p = PeriodicField::scalar_from_fn(g, |x| {
                        -(-t).exp() * (t + x[0]).sin() / sym
                    });
                    u = momentum_step(&u, &p, &moll, dt).unwrap();
                }
                let expect =
                    PeriodicField::vector_from_fn(g, |x, _| (-t_end).exp() * (t_end + x[0]).sin());
                u.add_scaled(&expect, -1.0).unwrap().l2_norm()
            })
            .collect();
        for w in errs.windows(2) {
            let order = (w[0] / w[1]).log2();
            assert!(order >= 0.9, "temporal order {order} too low: {errs:?}");
        }
    }
}
