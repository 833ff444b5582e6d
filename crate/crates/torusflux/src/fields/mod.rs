//! Periodic grids and the spatial calculus used by the scheme and the
//! diagnostics: spectral derivatives, mollification, inverse Laplacian,
//! discrete maximal function and the averaged singular-gradient operator.

pub mod field;
pub mod grid;
pub mod io;
pub mod maximal;
pub mod mollify;
pub mod singular;
pub mod spectral;

pub use field::PeriodicField;
pub use grid::TorusGrid;
pub use maximal::maximal_function;
pub use mollify::{Mollifier, MollifierSpec};
pub use singular::{d_r, d_r_of_gradient, gradient_magnitude};
pub use spectral::{divergence, gradient, inv_laplacian, laplacian};
