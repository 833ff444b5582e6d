use crate::error::{Error, Result};
use std::f64::consts::PI;

/// Uniform periodic grid on the d-dimensional torus, same point count and
/// period per axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TorusGrid {
    dim: usize,
    n: usize,
    length: f64,
}

/// Default memory budget: total point count cap.
const MAX_POINTS: usize = 1 << 24;

impl TorusGrid {
    pub fn new(dim: usize, n_per_axis: usize, length: f64) -> Result<Self> {
        if !(1..=3).contains(&dim) {
            return Err(Error::domain(format!("grid dimension must be 1, 2 or 3, got {dim}")));
        }
        if n_per_axis < 8 || !n_per_axis.is_power_of_two() {
            return Err(Error::domain(format!(
                "points per axis must be a power of two >= 8, got {n_per_axis}"
            )));
        }
        if !(length > 0.0) || !length.is_finite() {
            return Err(Error::domain(format!("period must be positive, got {length}")));
        }
        let points = n_per_axis.pow(dim as u32);
        if points > MAX_POINTS {
            return Err(Error::domain(format!(
                "total point count {points} exceeds the memory budget {MAX_POINTS}"
            )));
        }
        Ok(Self { dim, n: n_per_axis, length })
    }

    /// Grid with the default period 2 pi per axis.
    pub fn standard(dim: usize, n_per_axis: usize) -> Result<Self> {
        Self::new(dim, n_per_axis, 2.0 * PI)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn n_per_axis(&self) -> usize {
        self.n
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn spacing(&self) -> f64 {
        self.length / self.n as f64
    }

    pub fn points(&self) -> usize {
        self.n.pow(self.dim as u32)
    }

    pub fn volume(&self) -> f64 {
        self.length.powi(self.dim as i32)
    }

    pub fn cell_volume(&self) -> f64 {
        self.spacing().powi(self.dim as i32)
    }

    /// Coordinate of index i along one axis.
    pub fn coord(&self, i: usize) -> f64 {
        i as f64 * self.spacing()
    }

    /// Signed integer frequency of DFT bin j: 0..n/2-1, then -n/2..-1.
    pub fn frequency(&self, j: usize) -> i64 {
        if j <= self.n / 2 {
            j as i64
        } else {
            j as i64 - self.n as i64
        }
    }

    /// Angular wavenumber of DFT bin j: 2 pi freq / L.
    pub fn wavenumber(&self, j: usize) -> f64 {
        2.0 * PI * self.frequency(j) as f64 / self.length
    }

    /// Map a separation to the minimal image in [-L/2, L/2).
    pub fn min_image(&self, z: f64) -> f64 {
        let l = self.length;
        let mut z = z % l;
        if z >= 0.5 * l {
            z -= l;
        } else if z < -0.5 * l {
            z += l;
        }
        z
    }

    /// Decompose a flat index into per-axis indices (last axis fastest).
    pub fn unflatten(&self, mut idx: usize) -> [usize; 3] {
        let mut out = [0usize; 3];
        for a in (0..self.dim).rev() {
            out[a] = idx % self.n;
            idx /= self.n;
        }
        out
    }

    pub fn flatten(&self, ix: &[usize]) -> usize {
        let mut idx = 0;
        for a in 0..self.dim {
            idx = idx * self.n + (ix[a] % self.n);
        }
        idx
    }

    /// Stride of axis a in the flat layout.
    pub fn stride(&self, axis: usize) -> usize {
        self.n.pow((self.dim - 1 - axis) as u32)
    }

    /// Euclidean minimal-image distance between two flat indices.
    pub fn distance(&self, a: usize, b: usize) -> f64 {
        let ia = self.unflatten(a);
        let ib = self.unflatten(b);
        let mut acc = 0.0;
        for ax in 0..self.dim {
            let d = self.min_image((ia[ax] as f64 - ib[ax] as f64) * self.spacing());
            acc += d * d;
        }
        acc.sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_grids() {
        assert!(TorusGrid::new(0, 64, 1.0).is_err());
        assert!(TorusGrid::new(4, 64, 1.0).is_err());
        assert!(TorusGrid::new(1, 48, 1.0).is_err());
        assert!(TorusGrid::new(1, 4, 1.0).is_err());
        assert!(TorusGrid::new(3, 1024, 1.0).is_err()); // budget
        assert!(TorusGrid::new(2, 64, -1.0).is_err());
    }

    #[test]
    fn wavenumbers_and_indexing() {
        let g = TorusGrid::standard(2, 8).unwrap();
        assert_eq!(g.frequency(0), 0);
        assert_eq!(g.frequency(3), 3);
        assert_eq!(g.frequency(4), 4); // Nyquist kept positive
        assert_eq!(g.frequency(5), -3);
        assert_eq!(g.points(), 64);
        let idx = g.flatten(&[2, 5]);
        assert_eq!(g.unflatten(idx)[..2], [2, 5]);
        assert_eq!(g.stride(0), 8);
        assert_eq!(g.stride(1), 1);
    }

    #[test]
    fn min_image_wraps() {
        let g = TorusGrid::new(1, 8, 2.0).unwrap();
        assert_eq!(g.min_image(1.5), -0.5);
        assert_eq!(g.min_image(-1.25), 0.75);
        assert_eq!(g.min_image(0.25), 0.25);
    }
}
