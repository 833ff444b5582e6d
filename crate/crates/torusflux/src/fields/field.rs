use super::grid::TorusGrid;
use crate::error::{Error, Result};
use crate::numeric::{pairwise_sum, pairwise_sum_by};

/// Real scalar or vector field sampled on a torus grid. Data is stored as
/// one contiguous plane per component, last axis fastest.
#[derive(Debug, Clone, PartialEq)]
pub struct PeriodicField {
    grid: TorusGrid,
    components: usize,
    data: Vec<f64>,
    /// scalar fields carrying a positivity contract set this flag;
    /// enforcement tolerance is min >= -1e-12
    pub nonnegative: bool,
}

pub const NONNEGATIVE_TOL: f64 = -1e-12;

impl PeriodicField {
    pub fn scalar(grid: TorusGrid) -> Self {
        Self { grid, components: 1, data: vec![0.0; grid.points()], nonnegative: false }
    }

    pub fn vector(grid: TorusGrid) -> Self {
        let c = grid.dim();
        Self { grid, components: c, data: vec![0.0; c * grid.points()], nonnegative: false }
    }

    pub fn scalar_from_fn(grid: TorusGrid, f: impl Fn(&[f64]) -> f64) -> Self {
        let mut field = Self::scalar(grid);
        let mut x = [0.0f64; 3];
        for idx in 0..grid.points() {
            let ix = grid.unflatten(idx);
            for a in 0..grid.dim() {
                x[a] = grid.coord(ix[a]);
            }
            field.data[idx] = f(&x[..grid.dim()]);
        }
        field
    }

    pub fn vector_from_fn(grid: TorusGrid, f: impl Fn(&[f64], usize) -> f64) -> Self {
        let mut field = Self::vector(grid);
        let n = grid.points();
        let mut x = [0.0f64; 3];
        for idx in 0..n {
            let ix = grid.unflatten(idx);
            for a in 0..grid.dim() {
                x[a] = grid.coord(ix[a]);
            }
            for c in 0..field.components {
                field.data[c * n + idx] = f(&x[..grid.dim()], c);
            }
        }
        field
    }

    pub fn constant(grid: TorusGrid, value: f64) -> Self {
        let mut f = Self::scalar(grid);
        f.data.fill(value);
        f
    }

    pub fn grid(&self) -> TorusGrid {
        self.grid
    }

    pub fn components(&self) -> usize {
        self.components
    }

    pub fn is_scalar(&self) -> bool {
        self.components == 1
    }

    pub fn component(&self, c: usize) -> &[f64] {
        let n = self.grid.points();
        &self.data[c * n..(c + 1) * n]
    }

    pub fn component_mut(&mut self, c: usize) -> &mut [f64] {
        let n = self.grid.points();
        &mut self.data[c * n..(c + 1) * n]
    }

    pub fn values(&self) -> &[f64] {
        &self.data
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn from_component_planes(
        grid: TorusGrid,
        planes: Vec<Vec<f64>>,
    ) -> Result<Self> {
        let components = planes.len();
        if components != 1 && components != grid.dim() {
            return Err(Error::domain("field must have 1 or dim components"));
        }
        let mut data = Vec::with_capacity(components * grid.points());
        for p in planes {
            if p.len() != grid.points() {
                return Err(Error::domain("component plane size mismatch"));
            }
            data.extend_from_slice(&p);
        }
        Ok(Self { grid, components, data, nonnegative: false })
    }

    pub fn assert_compatible(&self, other: &Self) -> Result<()> {
        if self.grid != other.grid || self.components != other.components {
            return Err(Error::domain("incompatible field shapes"));
        }
        Ok(())
    }

    pub fn min(&self) -> f64 {
        self.data.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.data.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn all_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    /// Mean of one component (pairwise reduction).
    pub fn component_mean(&self, c: usize) -> f64 {
        pairwise_sum(self.component(c)) / self.grid.points() as f64
    }

    pub fn mean(&self) -> f64 {
        self.component_mean(0)
    }

    /// Integral over the torus of component 0: sum * cell volume.
    pub fn integral(&self) -> f64 {
        pairwise_sum(self.component(0)) * self.grid.cell_volume()
    }

    /// L^p norm over all components, quadrature by cell sums.
    pub fn lp_norm(&self, p: f64) -> f64 {
        let s = pairwise_sum_by(self.data.len(), |i| self.data[i].abs().powf(p));
        (s * self.grid.cell_volume()).powf(1.0 / p)
    }

    pub fn l1_norm(&self) -> f64 {
        let s = pairwise_sum_by(self.data.len(), |i| self.data[i].abs());
        s * self.grid.cell_volume()
    }

    pub fn l2_norm(&self) -> f64 {
        self.l2_norm_squared().sqrt()
    }

    pub fn l2_norm_squared(&self) -> f64 {
        let s = pairwise_sum_by(self.data.len(), |i| self.data[i] * self.data[i]);
        s * self.grid.cell_volume()
    }

    pub fn linf_norm(&self) -> f64 {
        self.data.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    /// Pointwise magnitude across components: sqrt(sum_c f_c^2).
    pub fn magnitude(&self) -> PeriodicField {
        let n = self.grid.points();
        let mut out = PeriodicField::scalar(self.grid);
        for i in 0..n {
            let mut acc = 0.0;
            for c in 0..self.components {
                let v = self.data[c * n + i];
                acc += v * v;
            }
            out.data[i] = acc.sqrt();
        }
        out.nonnegative = true;
        out
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> PeriodicField {
        let mut out = self.clone();
        out.nonnegative = false;
        for v in &mut out.data {
            *v = f(*v);
        }
        out
    }

    /// self + scale * other.
    pub fn add_scaled(&self, other: &PeriodicField, scale: f64) -> Result<PeriodicField> {
        self.assert_compatible(other)?;
        let mut out = self.clone();
        for (o, v) in out.data.iter_mut().zip(other.data.iter()) {
            *o += scale * v;
        }
        Ok(out)
    }

    /// Check the nonnegativity contract: min >= -1e-12.
    pub fn check_nonnegative(&self) -> Result<()> {
        let m = self.min();
        if m < NONNEGATIVE_TOL {
            return Err(Error::numeric(format!(
                "nonnegative field dropped to {m:.3e}"
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn norms_and_means_on_known_fields() {
        let g = TorusGrid::standard(1, 64).unwrap();
        let f = PeriodicField::scalar_from_fn(g, |x| x[0].sin());
        assert_abs_diff_eq!(f.mean(), 0.0, epsilon = 1e-15);
        // ||sin||_2^2 = pi on [0, 2pi)
        assert_abs_diff_eq!(f.l2_norm_squared(), std::f64::consts::PI, epsilon = 1e-12);
        let c = PeriodicField::constant(g, 3.0);
        assert_abs_diff_eq!(c.integral(), 3.0 * g.volume(), epsilon = 1e-12);
    }

    #[test]
    fn vector_magnitude() {
        let g = TorusGrid::standard(2, 8).unwrap();
        let v = PeriodicField::vector_from_fn(g, |_, c| if c == 0 { 3.0 } else { 4.0 });
        let m = v.magnitude();
        assert_abs_diff_eq!(m.min(), 5.0, epsilon = 1e-14);
        assert_abs_diff_eq!(m.max(), 5.0, epsilon = 1e-14);
    }

    #[test]
    fn nonnegativity_contract() {
        let g = TorusGrid::standard(1, 8).unwrap();
        let mut f = PeriodicField::constant(g, 1.0);
        f.nonnegative = true;
        assert!(f.check_nonnegative().is_ok());
        f.component_mut(0)[3] = -1e-13;
        assert!(f.check_nonnegative().is_ok());
        f.component_mut(0)[3] = -1e-9;
        assert!(f.check_nonnegative().is_err());
    }
}
