//! Kernel compactness functional: the log-singular kernel
//! K_h(z) = (|z|+h)^{-d} for |z| <= 1/2 and (1/2+h)^{-d} otherwise, the
//! smoothed modulus, and the (optionally weighted) double integral
//!
//!   R~_h = (1/||K_h||_1) sum_t dt sum_{x,y} K_h(x-y) |rho(x)-rho(y)|^p w(x) dx dy.

use crate::error::{Error, Result};
use crate::fields::{spectral, PeriodicField};
use crate::numeric::pairwise_sum;
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy)]
pub struct KernelSpec {
    /// scale parameter, 0 < h < 1/2
    pub h: f64,
    /// modulus smoothing; 0 selects the plain absolute value
    pub sigma: f64,
    /// divide the functional by ||K_h||_L1
    pub normalized: bool,
}

impl KernelSpec {
    pub fn new(h: f64) -> Result<Self> {
        if !(h > 0.0 && h < 0.5) {
            return Err(Error::domain(format!("kernel scale must lie in (0, 1/2), got {h}")));
        }
        Ok(Self { h, sigma: 0.0, normalized: true })
    }

    pub fn with_sigma(mut self, sigma: f64) -> Self {
        self.sigma = sigma;
        self
    }

    /// K_h at separation |z|.
    pub fn eval(&self, dist: f64, dim: usize) -> f64 {
        let d = dim as i32;
        if dist <= 0.5 {
            (dist + self.h).powi(-d)
        } else {
            (0.5 + self.h).powi(-d)
        }
    }

    /// Analytic L1 norm of K_h over the d-torus of period L >= 1:
    /// the ball part integrates in closed form, the remainder is flat.
    pub fn l1_norm(&self, dim: usize, length: f64) -> Result<f64> {
        if length < 1.0 {
            return Err(Error::domain("kernel L1 closed form needs period >= 1"));
        }
        let h = self.h;
        let edge = 0.5 + h;
        let lg = (edge / h).ln();
        let ball = match dim {
            1 => 2.0 * lg,
            2 => 2.0 * PI * (lg - 0.5 / edge),
            3 => {
                4.0 * PI
                    * (lg - 1.5 + 2.0 * h / edge - 0.5 * h * h / (edge * edge))
            }
            _ => return Err(Error::domain("kernel defined for d in {1,2,3}")),
        };
        let ball_volume = match dim {
            1 => 1.0,
            2 => PI * 0.25,
            3 => PI / 6.0,
            _ => unreachable!(),
        };
        let flat = (length.powi(dim as i32) - ball_volume) * edge.powi(-(dim as i32));
        Ok(ball + flat)
    }
}

/// C^1 smoothing of the absolute value: |w| - sigma/2 beyond sigma,
/// quadratic w^2/(2 sigma) inside. sigma = 0 gives |w| itself.
pub fn smoothed_modulus(w: f64, sigma: f64) -> f64 {
    if sigma <= 0.0 {
        return w.abs();
    }
    if w.abs() > sigma {
        w.abs() - 0.5 * sigma
    } else {
        0.5 * w * w / sigma
    }
}

/// Derivative of the smoothed modulus: sign outside, linear ramp inside.
pub fn smoothed_sign(w: f64, sigma: f64) -> f64 {
    if sigma <= 0.0 {
        return if w > 0.0 {
            1.0
        } else if w < 0.0 {
            -1.0
        } else {
            0.0
        };
    }
    if w.abs() > sigma {
        w.signum()
    } else {
        w / sigma
    }
}

/// One time slice of the (optionally weighted) kernel functional:
/// sum_{x,y} K_h(x-y) |rho(x)-rho(y)|^p w(x) dx dy, by direct tiled
/// summation for p = 1 (with or without smoothed modulus) and by three
/// spectral convolutions for p = 2 with the plain modulus.
pub fn kernel_double_integral(
    rho: &PeriodicField,
    weight: Option<&PeriodicField>,
    spec: &KernelSpec,
    p: f64,
) -> Result<f64> {
    if !rho.is_scalar() {
        return Err(Error::domain("kernel functional expects a scalar field"));
    }
    if let Some(w) = weight {
        rho.assert_compatible(w)?;
    }
    let grid = rho.grid();
    if p == 2.0 && spec.sigma == 0.0 {
        return kernel_p2_convolution(rho, weight, spec);
    }
    let n = grid.points();
    let vals = rho.component(0);
    let cell2 = grid.cell_volume() * grid.cell_volume();

    // precompute K_h at every offset index
    let mut koff = vec![0.0; n];
    for (idx, k) in koff.iter_mut().enumerate() {
        let ix = grid.unflatten(idx);
        let mut r2 = 0.0;
        for a in 0..grid.dim() {
            let z = grid.min_image(grid.coord(ix[a]));
            r2 += z * z;
        }
        *k = spec.eval(r2.sqrt(), grid.dim());
    }

    let nax = grid.n_per_axis();
    let dim = grid.dim();
    let total = pairwise_sum(
        &(0..n)
            .map(|x| {
                let wx = weight.map_or(1.0, |w| w.component(0)[x]);
                if wx == 0.0 {
                    return 0.0;
                }
                let ix = grid.unflatten(x);
                let mut acc = 0.0;
                for y in 0..n {
                    let iy = grid.unflatten(y);
                    let mut off = [0usize; 3];
                    for a in 0..dim {
                        off[a] = (iy[a] + nax - ix[a]) % nax;
                    }
                    let k = koff[grid.flatten(&off[..dim])];
                    let d = vals[x] - vals[y];
                    let m = if spec.sigma > 0.0 {
                        smoothed_modulus(d, spec.sigma)
                    } else {
                        d.abs()
                    };
                    acc += k * if p == 1.0 { m } else { m.powf(p) };
                }
                acc * wx
            })
            .collect::<Vec<_>>(),
    );
    Ok(total * cell2)
}

/// p = 2 expansion: |a-b|^2 = a^2 - 2ab + b^2 reduces the double sum to
/// three kernel convolutions.
fn kernel_p2_convolution(
    rho: &PeriodicField,
    weight: Option<&PeriodicField>,
    spec: &KernelSpec,
) -> Result<f64> {
    let grid = rho.grid();
    let n = grid.points();
    let mut kernel = vec![0.0; n];
    for (idx, k) in kernel.iter_mut().enumerate() {
        let ix = grid.unflatten(idx);
        let mut r2 = 0.0;
        for a in 0..grid.dim() {
            let z = grid.min_image(grid.coord(ix[a]));
            r2 += z * z;
        }
        *k = spec.eval(r2.sqrt(), grid.dim());
    }
    let kspec = spectral::forward(grid, &kernel);
    let conv = |f: &[f64]| -> Vec<f64> {
        let mut s = spectral::forward(grid, f);
        for (a, b) in s.iter_mut().zip(kspec.iter()) {
            *a *= b; // even kernel
        }
        spectral::inverse(grid, s)
    };
    let vals = rho.component(0);
    let sq: Vec<f64> = vals.iter().map(|v| v * v).collect();
    let ones = vec![1.0; n];
    let k_one = conv(&ones);
    let k_rho = conv(vals);
    let k_sq = conv(&sq);
    let cell2 = grid.cell_volume() * grid.cell_volume();
    let total = pairwise_sum(
        &(0..n)
            .map(|x| {
                let wx = weight.map_or(1.0, |w| w.component(0)[x]);
                wx * (sq[x] * k_one[x] - 2.0 * vals[x] * k_rho[x] + k_sq[x])
            })
            .collect::<Vec<_>>(),
    );
    Ok(total * cell2)
}

/// Time-weighted, normalized functional over a family of snapshots:
/// each entry is (dt-weight, field, optional weight field).
pub fn kolmogorov_functional(
    snapshots: &[(f64, &PeriodicField, Option<&PeriodicField>)],
    spec: &KernelSpec,
    p: f64,
) -> Result<f64> {
    if snapshots.is_empty() {
        return Err(Error::domain("kolmogorov functional needs at least one snapshot"));
    }
    let grid = snapshots[0].1.grid();
    let mut acc = 0.0;
    for (dtw, rho, w) in snapshots {
        acc += dtw * kernel_double_integral(rho, *w, spec, p)?;
    }
    if spec.normalized {
        acc /= spec.l1_norm(grid.dim(), grid.length())?;
    }
    Ok(acc)
}

/// Evaluate the normalized functional across a list of scales.
pub fn kolmogorov_table(
    snapshots: &[(f64, &PeriodicField, Option<&PeriodicField>)],
    h_list: &[f64],
    sigma: f64,
    p: f64,
) -> Result<Vec<(f64, f64)>> {
    let mut out = Vec::with_capacity(h_list.len());
    for &h in h_list {
        let spec = KernelSpec::new(h)?.with_sigma(sigma);
        out.push((h, kolmogorov_functional(snapshots, &spec, p)?));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::TorusGrid;
    use crate::numeric::adaptive_simpson;
    use approx::assert_abs_diff_eq;

    #[test]
    fn modulus_branches_and_bounds() {
        let s = 0.3;
        assert_eq!(smoothed_modulus(0.0, s), 0.0);
        assert_eq!(smoothed_sign(0.0, s), 0.0);
        // w = 2 sigma -> modulus 3 sigma/2, sign 1
        assert_abs_diff_eq!(smoothed_modulus(2.0 * s, s), 1.5 * s, epsilon = 1e-15);
        assert_eq!(smoothed_sign(2.0 * s, s), 1.0);
        // branch agreement at w = sigma
        assert_abs_diff_eq!(smoothed_modulus(s - 1e-12, s), 0.5 * s, epsilon = 1e-9);
        assert_abs_diff_eq!(smoothed_modulus(s + 1e-12, s), 0.5 * s, epsilon = 1e-9);
        // 0 <= |w| - |w|^sigma <= sigma/2 and |w sgn - |w|^sigma| <= sigma
        for i in -40..=40 {
            let w = i as f64 * 0.05;
            let gap = w.abs() - smoothed_modulus(w, s);
            assert!((-1e-15..=0.5 * s + 1e-15).contains(&gap));
            let pair = (w * smoothed_sign(w, s) - smoothed_modulus(w, s)).abs();
            assert!(pair <= s + 1e-15);
        }
    }

    #[test]
    fn kernel_l1_matches_quadrature_in_1d() {
        // oracle: adaptive quadrature of the kernel over the circle
        for &h in &[0.25, 0.125, 1.0 / 128.0] {
            let spec = KernelSpec::new(h).unwrap();
            let l = 2.0 * PI;
            let quad = 2.0
                * adaptive_simpson(&|z: f64| spec.eval(z, 1), 0.0, 0.5 * l, 1e-13).unwrap();
            let closed = spec.l1_norm(1, l).unwrap();
            assert!(
                (quad - closed).abs() <= 1e-10 * closed,
                "h={h}: quad {quad} vs closed {closed}"
            );
        }
    }

    #[test]
    fn kernel_l1_matches_quadrature_in_2d_and_3d() {
        // radial quadrature oracle for the ball part plus the flat remainder
        for &(dim, len) in &[(2usize, 2.0 * PI), (3usize, 2.0)] {
            for &h in &[0.25, 0.0625] {
                let spec = KernelSpec::new(h).unwrap();
                let surface = if dim == 2 { 2.0 * PI } else { 4.0 * PI };
                let ball = adaptive_simpson(
                    &|r: f64| surface * r.powi(dim as i32 - 1) * (r + h).powi(-(dim as i32)),
                    0.0,
                    0.5,
                    1e-13,
                )
                .unwrap();
                let ball_vol = if dim == 2 { PI * 0.25 } else { PI / 6.0 };
                let flat = (len.powi(dim as i32) - ball_vol) * (0.5 + h).powi(-(dim as i32));
                let closed = spec.l1_norm(dim, len).unwrap();
                assert!(
                    (ball + flat - closed).abs() <= 1e-10 * closed,
                    "dim={dim} h={h}: {} vs {closed}",
                    ball + flat
                );
            }
        }
    }

    #[test]
    fn constant_field_gives_zero() {
        let g = TorusGrid::standard(1, 64).unwrap();
        let c = PeriodicField::constant(g, 4.2);
        for &h in &[0.25, 0.03125] {
            let spec = KernelSpec::new(h).unwrap();
            assert_eq!(
                kolmogorov_functional(&[(1.0, &c, None)], &spec, 1.0).unwrap(),
                0.0
            );
        }
    }

    #[test]
    fn symmetric_in_x_and_y_without_weight() {
        // swapping the roles of x and y leaves the double sum unchanged;
        // evaluate on the reflected field as the swap surrogate
        let g = TorusGrid::standard(1, 32).unwrap();
        let f = PeriodicField::scalar_from_fn(g, |x| x[0].sin() + 0.3 * (2.0 * x[0]).cos());
        let reflected = PeriodicField::scalar_from_fn(g, |x| {
            let xr = (g.length() - x[0]) % g.length();
            xr.sin() + 0.3 * (2.0 * xr).cos()
        });
        let spec = KernelSpec::new(0.1).unwrap();
        let a = kernel_double_integral(&f, None, &spec, 1.0).unwrap();
        let b = kernel_double_integral(&reflected, None, &spec, 1.0).unwrap();
        assert_abs_diff_eq!(a, b, epsilon = 1e-10 * a.abs());
    }

    #[test]
    fn p2_convolution_matches_direct_sum() {
        let g = TorusGrid::standard(1, 64).unwrap();
        let f = PeriodicField::scalar_from_fn(g, |x| 1.0 + 0.5 * x[0].sin() + 0.1 * (3.0 * x[0]).cos());
        let w = PeriodicField::scalar_from_fn(g, |x| 0.5 + 0.4 * x[0].cos().abs());
        let spec = KernelSpec::new(0.125).unwrap();
        // direct path forced via a tiny sigma-free p != 2 trick: replicate by
        // computing the p = 2 sum with the generic tiled code
        let direct = {
            let mut spec_direct = spec;
            spec_direct.sigma = 0.0;
            // generic loop with p = 2 by calling the tiled branch through p = 2.0 + 0
            // (kernel_double_integral would route to convolution, so inline here)
            let grid = f.grid();
            let n = grid.points();
            let vals = f.component(0);
            let mut total = 0.0;
            for x in 0..n {
                for y in 0..n {
                    let z = grid.min_image(grid.coord(x) - grid.coord(y));
                    let k = spec.eval(z.abs(), 1);
                    let d = vals[x] - vals[y];
                    total += k * d * d * w.component(0)[x];
                }
            }
            total * grid.cell_volume() * grid.cell_volume()
        };
        let fast = kernel_double_integral(&f, Some(&w), &spec, 2.0).unwrap();
        assert_abs_diff_eq!(fast, direct, epsilon = 1e-9 * direct.abs());
    }

    #[test]
    fn h_out_of_range_rejected() {
        assert!(KernelSpec::new(0.5).is_err());
        assert!(KernelSpec::new(0.0).is_err());
        assert!(KernelSpec::new(-0.1).is_err());
    }
}
