//! Proof-side functionals as runtime monitors: the energy budget and the
//! uniform-estimate norms, the effective viscous flux and its evolution
//! identity, the transported weight with its log bound, kernel compactness
//! functionals, the oscillation defect measure and the pressure monitor
//! built on a periodic Poisson solve.

pub mod bogovskii;
pub mod energy;
pub mod engine;
pub mod evf;
pub mod exponents;
pub mod kernel;
pub mod oscillation;
pub mod record;
pub mod weight;

pub use bogovskii::{bogovskii_monitor, BogovskiiRecord};
pub use energy::{damping_rate, energy, energy_of, enstrophy};
pub use engine::{MonitorConfig, MonitorEngine, WeightMonitorConfig};
pub use evf::{effective_viscous_flux, evf_potential, EvfTracker};
pub use exponents::ExponentTable;
pub use kernel::{
    kernel_double_integral, kolmogorov_functional, kolmogorov_table, smoothed_modulus,
    smoothed_sign, KernelSpec,
};
pub use oscillation::{default_k_list, oscillation_defect};
pub use record::{csv_header, DiagnosticsRecord, MONITORS_SCHEMA};
pub use weight::{
    absorbing_rate, initial_weight, rho_log_weight_integral, weight_evolve, weight_step,
    WeightParams,
};
