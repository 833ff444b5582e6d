use super::field::PeriodicField;
use super::grid::TorusGrid;
use super::spectral;
use crate::error::{Error, Result};
use crate::numeric::pairwise_sum;

/// Mollification scale and kernel profile. The profile is the standard
/// compactly supported even bump exp(-1/(1 - |z/eps|^2)) on |z| < eps,
/// renormalized on the grid so the discrete weights sum exactly to one.
#[derive(Debug, Clone, Copy)]
pub struct MollifierSpec {
    pub epsilon: f64,
}

impl MollifierSpec {
    pub fn new(epsilon: f64) -> Self {
        Self { epsilon }
    }
}

/// Grid-bound mollifier: the kernel's discrete transform, applied by
/// spectral multiplication. The k=0 multiplier is pinned to 1 so means are
/// preserved exactly.
#[derive(Debug, Clone)]
pub struct Mollifier {
    pub spec: MollifierSpec,
    grid: TorusGrid,
    multiplier: Vec<f64>,
}

impl Mollifier {
    pub fn build(grid: TorusGrid, spec: MollifierSpec) -> Result<Self> {
        let eps = spec.epsilon;
        if !(eps > 0.0) {
            return Err(Error::domain("mollifier scale must be positive"));
        }
        if eps < 2.0 * grid.spacing() {
            return Err(Error::resolution(format!(
                "mollifier scale {eps:.4e} under-resolved: needs eps >= 2 dx = {:.4e}",
                2.0 * grid.spacing()
            )));
        }
        if eps > 0.5 * grid.length() {
            return Err(Error::domain(format!(
                "mollifier scale {eps:.4e} exceeds half the period {:.4e}",
                0.5 * grid.length()
            )));
        }
        let weights = Self::kernel_weights(grid, eps);
        let spectrum = spectral::forward(grid, &weights);
        let mut multiplier: Vec<f64> = spectrum
            .iter()
            .map(|c| c.re * grid.cell_volume())
            .collect();
        multiplier[0] = 1.0;
        Ok(Self { spec, grid, multiplier })
    }

    /// Discrete kernel samples kappa_eps(z) at grid offsets (minimal image),
    /// normalized so sum * cell_volume = 1.
    pub fn kernel_weights(grid: TorusGrid, eps: f64) -> Vec<f64> {
        let mut w = vec![0.0; grid.points()];
        for (idx, v) in w.iter_mut().enumerate() {
            let ix = grid.unflatten(idx);
            let mut r2 = 0.0;
            for a in 0..grid.dim() {
                let z = grid.min_image(grid.coord(ix[a])) / eps;
                r2 += z * z;
            }
            if r2 < 1.0 {
                *v = (-1.0 / (1.0 - r2)).exp();
            }
        }
        let total = pairwise_sum(&w) * grid.cell_volume();
        for v in &mut w {
            *v /= total;
        }
        w
    }

    pub fn grid(&self) -> TorusGrid {
        self.grid
    }

    /// [f]_eps: componentwise convolution with the kernel.
    pub fn apply(&self, f: &PeriodicField) -> Result<PeriodicField> {
        if f.grid() != self.grid {
            return Err(Error::domain("mollifier built for a different grid"));
        }
        let mut planes = Vec::with_capacity(f.components());
        for c in 0..f.components() {
            let mut spec = spectral::forward(self.grid, f.component(c));
            for (s, m) in spec.iter_mut().zip(self.multiplier.iter()) {
                *s *= m;
            }
            planes.push(spectral::inverse(self.grid, spec));
        }
        let mut out = PeriodicField::from_component_planes(self.grid, planes)?;
        out.nonnegative = f.nonnegative;
        Ok(out)
    }

    /// The real multiplier at a given mode index (for tests and the
    /// manufactured-solution forcing).
    pub fn multiplier_at(&self, mode: &[usize]) -> f64 {
        self.multiplier[self.grid.flatten(mode)]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn constant_is_fixed_point() {
        let g = TorusGrid::standard(1, 64).unwrap();
        let m = Mollifier::build(g, MollifierSpec::new(0.5)).unwrap();
        let c = PeriodicField::constant(g, 2.5);
        let out = m.apply(&c).unwrap();
        for v in out.component(0) {
            assert_abs_diff_eq!(*v, 2.5, epsilon = 1e-13);
        }
    }

    #[test]
    fn single_mode_scales_by_real_symbol() {
        let g = TorusGrid::standard(1, 64).unwrap();
        let m = Mollifier::build(g, MollifierSpec::new(0.7)).unwrap();
        let f = PeriodicField::scalar_from_fn(g, |x| (3.0 * x[0]).sin());
        let out = m.apply(&f).unwrap();
        let sym = m.multiplier_at(&[3]);
        assert!(sym > 0.0 && sym < 1.0);
        for (o, v) in out.component(0).iter().zip(f.component(0)) {
            assert_abs_diff_eq!(*o, sym * v, epsilon = 1e-12);
        }
        // even kernel: symbol at -k equals symbol at +k
        assert_abs_diff_eq!(sym, m.multiplier_at(&[61]), epsilon = 1e-15);
    }

    #[test]
    fn mean_preserved_to_high_precision() {
        let g = TorusGrid::standard(2, 32).unwrap();
        let m = Mollifier::build(g, MollifierSpec::new(0.6)).unwrap();
        let f = PeriodicField::scalar_from_fn(g, |x| {
            1.0 + 0.4 * x[0].sin() * (2.0 * x[1]).cos() + 0.05 * (3.0 * x[1]).sin()
        });
        let out = m.apply(&f).unwrap();
        // direct-summation oracle on both sides
        assert_abs_diff_eq!(out.mean(), f.mean(), epsilon = 1e-13);
    }

    #[test]
    fn l2_contraction_and_smoothing_monotone_in_eps() {
        let g = TorusGrid::standard(1, 256).unwrap();
        let f = PeriodicField::scalar_from_fn(g, |x| {
            x[0].sin() + 0.5 * (4.0 * x[0]).cos() + 0.25 * (9.0 * x[0]).sin()
        });
        let mut prev_err = f64::INFINITY;
        for k in 0..4 {
            let eps = 0.8 / 2f64.powi(k);
            let m = Mollifier::build(g, MollifierSpec::new(eps)).unwrap();
            let out = m.apply(&f).unwrap();
            assert!(out.l2_norm() <= f.l2_norm() + 1e-13, "mollify must contract L2");
            let err = out.add_scaled(&f, -1.0).unwrap().l2_norm();
            assert!(err < prev_err, "smoothing error must shrink as eps halves");
            prev_err = err;
        }
    }

    #[test]
    fn under_resolved_scale_is_rejected() {
        let g = TorusGrid::standard(1, 8).unwrap(); // dx = 2pi/8
        assert!(matches!(
            Mollifier::build(g, MollifierSpec::new(0.5)),
            Err(Error::Resolution(_))
        ));
    }

    #[test]
    fn nonnegative_flag_propagates_and_holds() {
        let g = TorusGrid::standard(1, 64).unwrap();
        let mut f = PeriodicField::scalar_from_fn(g, |x| (x[0].sin() + 1.0).max(0.0));
        f.nonnegative = true;
        let m = Mollifier::build(g, MollifierSpec::new(0.4)).unwrap();
        let out = m.apply(&f).unwrap();
        assert!(out.nonnegative);
        assert!(out.check_nonnegative().is_ok());
    }
}
