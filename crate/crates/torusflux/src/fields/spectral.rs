//! Trigonometric-collocation calculus on the torus. Derivatives are exact
//! for the trigonometric interpolant, so div(grad f) = laplacian f and the
//! inverse Laplacian round-trip hold at the discrete level to rounding.

use super::field::PeriodicField;
use super::grid::TorusGrid;
use crate::error::{Error, Result};
use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;

/// Forward d-dimensional DFT of a real sample plane (no normalization).
pub fn forward(grid: TorusGrid, values: &[f64]) -> Vec<Complex64> {
    let mut buf: Vec<Complex64> = values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    transform(grid, &mut buf, false);
    buf
}

/// Inverse transform with the 1/N^d normalization, returning real parts.
pub fn inverse(grid: TorusGrid, mut spectrum: Vec<Complex64>) -> Vec<f64> {
    transform(grid, &mut spectrum, true);
    let scale = 1.0 / grid.points() as f64;
    spectrum.iter().map(|c| c.re * scale).collect()
}

fn transform(grid: TorusGrid, buf: &mut [Complex64], inverse: bool) {
    let n = grid.n_per_axis();
    let mut planner = FftPlanner::new();
    let fft = if inverse {
        planner.plan_fft_inverse(n)
    } else {
        planner.plan_fft_forward(n)
    };
    let mut scratch = vec![Complex64::new(0.0, 0.0); n];
    for axis in 0..grid.dim() {
        let stride = grid.stride(axis);
        let lines = grid.points() / n;
        for line in 0..lines {
            // base index of this line: distribute `line` over the other axes
            let block = line / stride;
            let offset = line % stride;
            let base = block * stride * n + offset;
            for j in 0..n {
                scratch[j] = buf[base + j * stride];
            }
            fft.process(&mut scratch);
            for j in 0..n {
                buf[base + j * stride] = scratch[j];
            }
        }
    }
}

/// Apply a per-mode complex multiplier to one component plane.
fn apply_multiplier(
    grid: TorusGrid,
    values: &[f64],
    mul: impl Fn(&[usize]) -> Complex64,
) -> Vec<f64> {
    let mut spec = forward(grid, values);
    for (idx, c) in spec.iter_mut().enumerate() {
        let ix = grid.unflatten(idx);
        *c *= mul(&ix[..grid.dim()]);
    }
    inverse(grid, spec)
}

/// Odd-order spectral derivatives zero the Nyquist bin, keeping the result
/// real and the operator skew-adjoint.
fn deriv_wavenumber(grid: TorusGrid, j: usize) -> f64 {
    if grid.n_per_axis() % 2 == 0 && j == grid.n_per_axis() / 2 {
        0.0
    } else {
        grid.wavenumber(j)
    }
}

/// Gradient of a scalar field (returns a vector field).
pub fn gradient(f: &PeriodicField) -> Result<PeriodicField> {
    if !f.is_scalar() {
        return Err(Error::domain("gradient expects a scalar field"));
    }
    let grid = f.grid();
    let mut planes = Vec::with_capacity(grid.dim());
    for axis in 0..grid.dim() {
        planes.push(apply_multiplier(grid, f.component(0), |ix| {
            Complex64::new(0.0, deriv_wavenumber(grid, ix[axis]))
        }));
    }
    PeriodicField::from_component_planes(grid, planes)
}

/// Divergence of a vector field (returns a scalar field).
pub fn divergence(v: &PeriodicField) -> Result<PeriodicField> {
    let grid = v.grid();
    if v.components() != grid.dim() {
        return Err(Error::domain("divergence expects a vector field"));
    }
    let mut acc = vec![0.0; grid.points()];
    for axis in 0..grid.dim() {
        let d = apply_multiplier(grid, v.component(axis), |ix| {
            Complex64::new(0.0, deriv_wavenumber(grid, ix[axis]))
        });
        for (a, x) in acc.iter_mut().zip(d.iter()) {
            *a += x;
        }
    }
    PeriodicField::from_component_planes(grid, vec![acc])
}

/// Componentwise Laplacian.
pub fn laplacian(f: &PeriodicField) -> Result<PeriodicField> {
    let grid = f.grid();
    let mut planes = Vec::with_capacity(f.components());
    for c in 0..f.components() {
        planes.push(apply_multiplier(grid, f.component(c), |ix| {
            let mut k2 = 0.0;
            for a in 0..grid.dim() {
                let k = grid.wavenumber(ix[a]);
                k2 += k * k;
            }
            Complex64::new(-k2, 0.0)
        }));
    }
    PeriodicField::from_component_planes(grid, planes)
}

/// Unique zero-mean solution of -Delta psi = f.
///
/// The input must have zero mean unless `zero_mean` is set, in which case
/// the mean is projected out first. The output sample mean is removed
/// exactly.
pub fn inv_laplacian(f: &PeriodicField, zero_mean: bool) -> Result<PeriodicField> {
    if !f.is_scalar() {
        return Err(Error::domain("inv_laplacian expects a scalar field"));
    }
    let grid = f.grid();
    let mean = f.mean();
    let scale = f.linf_norm().max(1.0);
    if !zero_mean && mean.abs() > 1e-12 * scale {
        return Err(Error::domain(format!(
            "inv_laplacian input has nonzero mean {mean:.3e}; set the zero-mean flag to project"
        )));
    }
    let mut spec = forward(grid, f.component(0));
    for (idx, c) in spec.iter_mut().enumerate() {
        let ix = grid.unflatten(idx);
        let mut k2 = 0.0;
        for a in 0..grid.dim() {
            let k = grid.wavenumber(ix[a]);
            k2 += k * k;
        }
        if k2 == 0.0 {
            *c = Complex64::new(0.0, 0.0);
        } else {
            *c /= k2;
        }
    }
    let mut vals = inverse(grid, spec);
    let m = crate::numeric::pairwise_sum(&vals) / vals.len() as f64;
    for v in &mut vals {
        *v -= m;
    }
    PeriodicField::from_component_planes(grid, vec![vals])
}

/// Fraction of spectral energy carried by the two highest retained
/// frequencies per axis. Above 1e-6 the field counts as under-resolved.
pub fn resolution_defect(f: &PeriodicField) -> f64 {
    let grid = f.grid();
    let n = grid.n_per_axis();
    let top = n as i64 / 2;
    let mut worst: f64 = 0.0;
    for c in 0..f.components() {
        let spec = forward(grid, f.component(c));
        let mut total = 0.0;
        let mut high = 0.0;
        for (idx, v) in spec.iter().enumerate() {
            let e = v.norm_sqr();
            let ix = grid.unflatten(idx);
            total += e;
            let is_high = (0..grid.dim()).any(|a| {
                let fq = grid.frequency(ix[a]).abs();
                fq >= top - 1
            });
            if is_high {
                high += e;
            }
        }
        if total > 0.0 {
            worst = worst.max(high / total);
        }
    }
    worst
}

pub fn is_resolved(f: &PeriodicField) -> bool {
    resolution_defect(f) <= 1e-6
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn linf(a: &[f64], b: &[f64]) -> f64 {
        a.iter().zip(b).fold(0.0f64, |m, (x, y)| m.max((x - y).abs()))
    }

    #[test]
    fn gradient_of_sine() {
        let g = TorusGrid::standard(1, 64).unwrap();
        let f = PeriodicField::scalar_from_fn(g, |x| x[0].sin());
        let df = gradient(&f).unwrap();
        let expect = PeriodicField::scalar_from_fn(g, |x| x[0].cos());
        assert!(linf(df.component(0), expect.component(0)) < 1e-12);
    }

    #[test]
    fn divergence_of_constant_vanishes() {
        let g = TorusGrid::standard(2, 16).unwrap();
        let v = PeriodicField::vector_from_fn(g, |_, c| 1.0 + c as f64);
        let d = divergence(&v).unwrap();
        assert!(d.linf_norm() < 1e-13);
    }

    #[test]
    fn laplacian_eigenmode() {
        let g = TorusGrid::standard(1, 64).unwrap();
        let f = PeriodicField::scalar_from_fn(g, |x| (2.0 * x[0]).sin());
        let lf = laplacian(&f).unwrap();
        let expect = PeriodicField::scalar_from_fn(g, |x| -4.0 * (2.0 * x[0]).sin());
        assert!(linf(lf.component(0), expect.component(0)) < 1e-12);
    }

    #[test]
    fn div_grad_equals_laplacian() {
        let g = TorusGrid::standard(2, 32).unwrap();
        let f = PeriodicField::scalar_from_fn(g, |x| {
            (x[0].sin() + 0.3 * (2.0 * x[1]).cos()) * (1.0 + 0.1 * (x[0] - x[1]).cos())
        });
        let via_divgrad = divergence(&gradient(&f).unwrap()).unwrap();
        let direct = laplacian(&f).unwrap();
        assert!(linf(via_divgrad.component(0), direct.component(0)) < 1e-12);
    }

    #[test]
    fn inv_laplacian_eigenmodes_and_roundtrip() {
        let g = TorusGrid::standard(1, 64).unwrap();
        let f = PeriodicField::scalar_from_fn(g, |x| x[0].sin());
        let psi = inv_laplacian(&f, false).unwrap();
        assert!(linf(psi.component(0), f.component(0)) < 1e-13);

        let f2 = PeriodicField::scalar_from_fn(g, |x| (2.0 * x[0]).cos());
        let psi2 = inv_laplacian(&f2, false).unwrap();
        let expect = PeriodicField::scalar_from_fn(g, |x| (2.0 * x[0]).cos() / 4.0);
        assert!(linf(psi2.component(0), expect.component(0)) < 1e-13);

        // random-ish zero-mean field: -Delta (inv_laplacian f) = f
        let g2 = TorusGrid::standard(2, 32).unwrap();
        let mut f3 = PeriodicField::scalar_from_fn(g2, |x| {
            (3.0 * x[0]).sin() * (2.0 * x[1]).cos() + 0.5 * (x[0] + 2.0 * x[1]).sin()
        });
        let m = f3.mean();
        for v in f3.component_mut(0) {
            *v -= m;
        }
        let psi3 = inv_laplacian(&f3, false).unwrap();
        assert_abs_diff_eq!(psi3.mean(), 0.0, epsilon = 1e-15);
        let back = laplacian(&psi3).unwrap().map(|v| -v);
        assert!(linf(back.component(0), f3.component(0)) < 1e-11);
    }

    #[test]
    fn inv_laplacian_rejects_nonzero_mean() {
        let g = TorusGrid::standard(1, 16).unwrap();
        let f = PeriodicField::constant(g, 1.0);
        assert!(inv_laplacian(&f, false).is_err());
        assert!(inv_laplacian(&f, true).is_ok());
    }

    #[test]
    fn resolution_defect_flags_nyquist_content() {
        let g = TorusGrid::standard(1, 32).unwrap();
        let smooth = PeriodicField::scalar_from_fn(g, |x| x[0].sin());
        assert!(is_resolved(&smooth));
        let rough = PeriodicField::scalar_from_fn(g, |x| (15.0 * x[0]).sin());
        assert!(!is_resolved(&rough));
    }
}
