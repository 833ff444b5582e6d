//! Time integration of the damped, mollified continuity equation coupled to
//! the forced heat equation for the velocity, advanced per step by a Picard
//! fixed-point loop.

pub mod momentum;
pub mod params;
pub mod picard;
pub mod run;
pub mod transport;

pub use momentum::momentum_step;
pub use params::{pressure_of, SchemeParams, SchemeState};
pub use picard::{picard_coupled_step, PicardStats};
pub use run::{run, RunOutcome, StepHook};
pub use transport::{cfl_dt_max, continuity_step, damping_exact};
