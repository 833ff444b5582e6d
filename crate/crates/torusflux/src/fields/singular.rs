use super::field::PeriodicField;
use super::spectral;
use crate::error::{Error, Result};
use std::f64::consts::PI;

/// Averaged singular-kernel gradient operator
///
///   D_r f(x) = (1/r) int_{B(0,r)} |grad f(x+z)| / |z|^{d-1} dz,
///
/// discretized by the midpoint rule over cells whose centers lie in the
/// ball. The singular cell at z = 0 is integrated analytically over the
/// ball of equal cell volume, contributing |grad f(x)| times a closed-form
/// measure.
pub fn d_r(f: &PeriodicField, r: f64) -> Result<PeriodicField> {
    let gmag = gradient_magnitude(f)?;
    d_r_of_gradient(&gmag, r)
}

/// |grad f| for a scalar field, or the Frobenius magnitude of the Jacobian
/// for a vector field.
pub fn gradient_magnitude(f: &PeriodicField) -> Result<PeriodicField> {
    let grid = f.grid();
    let n = grid.points();
    let mut acc = vec![0.0; n];
    for c in 0..f.components() {
        let plane = PeriodicField::from_component_planes(grid, vec![f.component(c).to_vec()])?;
        let g = spectral::gradient(&plane)?;
        for a in 0..grid.dim() {
            for (s, v) in acc.iter_mut().zip(g.component(a)) {
                *s += v * v;
            }
        }
    }
    let mut out = PeriodicField::from_component_planes(grid, vec![acc])?;
    for v in out.values_mut() {
        *v = v.sqrt();
    }
    out.nonnegative = true;
    Ok(out)
}

/// D_r applied to a precomputed gradient-magnitude field.
pub fn d_r_of_gradient(gmag: &PeriodicField, r: f64) -> Result<PeriodicField> {
    if !gmag.is_scalar() {
        return Err(Error::domain("D_r expects a scalar gradient-magnitude field"));
    }
    let grid = gmag.grid();
    let dx = grid.spacing();
    if r < 2.0 * dx {
        return Err(Error::resolution(format!(
            "D_r radius {r:.4e} under-resolved: needs r >= 2 dx = {:.4e}",
            2.0 * dx
        )));
    }
    if r > 0.5 * grid.length() {
        return Err(Error::domain(format!(
            "D_r radius {r:.4e} exceeds half the period"
        )));
    }

    // kernel weights: cell measure / |z|^{d-1} for cell centers inside the
    // ball, analytic equal-volume-ball value at z = 0
    let d = grid.dim();
    let cell = grid.cell_volume();
    let mut kernel = vec![0.0; grid.points()];
    for (idx, w) in kernel.iter_mut().enumerate() {
        let ix = grid.unflatten(idx);
        let mut r2 = 0.0;
        for a in 0..d {
            let z = grid.min_image(grid.coord(ix[a]));
            r2 += z * z;
        }
        let dist = r2.sqrt();
        if idx == 0 {
            *w = singular_cell_measure(d, dx);
        } else if dist <= r * (1.0 + 1e-12) {
            *w = cell / dist.powi(d as i32 - 1);
        }
    }

    // even kernel: correlation equals convolution, done spectrally
    let mut kspec = spectral::forward(grid, &kernel);
    let fspec = spectral::forward(grid, gmag.component(0));
    for (k, v) in kspec.iter_mut().zip(fspec.iter()) {
        *k *= v;
    }
    let vals = spectral::inverse(grid, kspec);
    let mut out = PeriodicField::from_component_planes(grid, vec![vals])?;
    for v in out.values_mut() {
        *v /= r;
    }
    out.nonnegative = true;
    Ok(out)
}

/// Integral of |z|^{1-d} over the ball with the same volume as one grid
/// cell: 1D gives dx, 2D gives 2 sqrt(pi) dx, 3D gives 4 pi (3/(4 pi))^{1/3} dx.
fn singular_cell_measure(d: usize, dx: f64) -> f64 {
    match d {
        1 => dx,
        2 => 2.0 * PI * (dx / PI.sqrt()),
        3 => 4.0 * PI * (3.0 / (4.0 * PI)).cbrt() * dx,
        _ => unreachable!(),
    }
}
