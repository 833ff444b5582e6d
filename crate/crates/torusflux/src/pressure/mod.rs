//! Constitutive pressure laws, their potentials, the monotone/compact
//! splitting of the potential, and the truncation machinery used for
//! renormalization diagnostics.

mod law;
mod split;
mod truncation;

pub use law::{BumpPerturbation, GrowthEnvelope, LawKind, PressureLaw, TabulatedPressure};
pub use split::PotentialSplit;
pub use truncation::{renorm_l, t_base, t_base_deriv, truncation_t};
