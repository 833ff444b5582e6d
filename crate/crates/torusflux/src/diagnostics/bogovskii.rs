//! Pressure-integrability monitor built on the periodic Poisson problem
//! Delta psi = rho^alpha - <rho^alpha>: reports the extra-integrability
//! integral int pi_mu(rho) rho^alpha dx, the raw moment int rho^(Gamma+alpha),
//! and the two test-function pairings whose boundedness drives the estimate.

use crate::error::{Error, Result};
use crate::fields::{spectral, PeriodicField};
use crate::numeric::pairwise_sum_by;
use crate::pressure::PressureLaw;

#[derive(Debug, Clone, Copy)]
pub struct BogovskiiRecord {
    pub alpha: f64,
    /// int pi_mu(rho) rho^alpha dx
    pub pressure_pairing: f64,
    /// int rho^(Gamma + alpha) dx
    pub rho_moment: f64,
    /// int u . grad B(div(rho^alpha u)) dx
    pub convective_pairing: f64,
    /// int grad u : grad^2 B(rho^alpha - <rho^alpha>) dx
    pub gradient_pairing: f64,
}

/// grad B(f) for the solution operator B of Delta psi = f (f zero-mean).
fn grad_b(f: &PeriodicField) -> Result<PeriodicField> {
    // Delta psi = f  <=>  -Delta psi = -f
    let psi = spectral::inv_laplacian(&f.map(|v| -v), true)?;
    spectral::gradient(&psi)
}

pub fn bogovskii_monitor(
    rho: &PeriodicField,
    u: &PeriodicField,
    law: &PressureLaw,
    alpha: f64,
) -> Result<BogovskiiRecord> {
    if !(alpha > 0.0) {
        return Err(Error::domain("Bogovskii exponent alpha must be positive"));
    }
    if !rho.is_scalar() || u.components() != u.grid().dim() {
        return Err(Error::domain("Bogovskii monitor expects scalar rho, vector u"));
    }
    rho.assert_compatible(&{
        let mut probe = PeriodicField::scalar(u.grid());
        probe.nonnegative = rho.nonnegative;
        probe
    })
    .map_err(|_| Error::domain("rho and u must share one grid"))?;

    let grid = rho.grid();
    let n = grid.points();
    let cell = grid.cell_volume();

    let rho_alpha = rho.map(|v| v.max(0.0).powf(alpha));
    let mean = rho_alpha.mean();
    let fluct = rho_alpha.map(|v| v - mean);

    // int pi_mu(rho) rho^alpha
    let rvals = rho.component(0);
    let pressure_pairing = pairwise_sum_by(n, |i| {
        law.pressure_unchecked(rvals[i].max(0.0)) * rho_alpha.component(0)[i]
    }) * cell;

    // int rho^(Gamma + alpha)
    let ga = law.big_gamma + alpha;
    let rho_moment = pairwise_sum_by(n, |i| rvals[i].max(0.0).powf(ga)) * cell;

    // convective pairing: u . grad B(div(rho^alpha u))
    let mut ra_u = PeriodicField::vector(grid);
    for c in 0..grid.dim() {
        let src = u.component(c);
        let dst = ra_u.component_mut(c);
        for i in 0..n {
            dst[i] = rho_alpha.component(0)[i] * src[i];
        }
    }
    let div_rau = spectral::divergence(&ra_u)?;
    let phi_conv = grad_b(&div_rau)?;
    let convective_pairing = pairwise_sum_by(n, |i| {
        let mut acc = 0.0;
        for c in 0..grid.dim() {
            acc += u.component(c)[i] * phi_conv.component(c)[i];
        }
        acc
    }) * cell;

    // gradient pairing: grad u : grad^2 B(fluct)
    let phi = grad_b(&fluct)?; // = grad B(fluct); its gradient is the Hessian
    let mut gradient_pairing = 0.0;
    for c in 0..grid.dim() {
        let u_c = PeriodicField::from_component_planes(grid, vec![u.component(c).to_vec()])?;
        let grad_uc = spectral::gradient(&u_c)?;
        let phi_c = PeriodicField::from_component_planes(grid, vec![phi.component(c).to_vec()])?;
        let hess_c = spectral::gradient(&phi_c)?;
        gradient_pairing += pairwise_sum_by(n, |i| {
            let mut acc = 0.0;
            for a in 0..grid.dim() {
                acc += grad_uc.component(a)[i] * hess_c.component(a)[i];
            }
            acc
        }) * cell;
    }

    Ok(BogovskiiRecord {
        alpha,
        pressure_pairing,
        rho_moment,
        convective_pairing,
        gradient_pairing,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::TorusGrid;
    use approx::assert_abs_diff_eq;

    #[test]
    fn constant_density_collapses_pairings() {
        let g = TorusGrid::standard(2, 16).unwrap();
        let rho = PeriodicField::constant(g, 2.0);
        let u = PeriodicField::vector_from_fn(g, |x, c| if c == 0 { x[1].sin() } else { 0.1 });
        let law = PressureLaw::regularized(2.0, 4.0, 0.5);
        let alpha = 1.5;
        let rec = bogovskii_monitor(&rho, &u, &law, alpha).unwrap();
        // rho^alpha - <rho^alpha> = 0 kills the gradient pairing
        assert_abs_diff_eq!(rec.gradient_pairing, 0.0, epsilon = 1e-10);
        // int pi(c) c^alpha = V pi(c) c^alpha
        let expect = g.volume() * law.pressure(2.0).unwrap() * 2.0f64.powf(alpha);
        assert_abs_diff_eq!(rec.pressure_pairing, expect, epsilon = 1e-9 * expect);
        assert_abs_diff_eq!(rec.rho_moment, g.volume() * 2.0f64.powf(4.0 + alpha), epsilon = 1e-9);
        // div(c^alpha u) has zero mean automatically; the convective pairing
        // survives but must be finite
        assert!(rec.convective_pairing.is_finite());
    }

    #[test]
    fn rejects_bad_alpha() {
        let g = TorusGrid::standard(1, 16).unwrap();
        let rho = PeriodicField::constant(g, 1.0);
        let u = PeriodicField::vector(g);
        let law = PressureLaw::isentropic(2.0);
        assert!(bogovskii_monitor(&rho, &u, &law, 0.0).is_err());
        assert!(bogovskii_monitor(&rho, &u, &law, -1.0).is_err());
    }
}
