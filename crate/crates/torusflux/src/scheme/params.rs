use crate::error::{Error, Result};
use crate::fields::PeriodicField;
use crate::pressure::PressureLaw;

/// Scheme parameters: mollification scale, density damping, time stepping
/// and the fixed-point controls.
#[derive(Debug, Clone)]
pub struct SchemeParams {
    pub epsilon: f64,
    pub delta: f64,
    /// damping exponent; defaults to (5/2) Gamma + 3/2
    pub m: f64,
    pub dt: f64,
    pub t_end: f64,
    pub picard_tol: f64,
    pub picard_max: usize,
    /// 1.0 means no relaxation; 0.5 recommended for stiff laws
    pub under_relax: f64,
    /// evaluate the pressure forcing at the step midpoint inside the
    /// Picard loop (second-order option) instead of the step start
    pub pressure_midpoint: bool,
}

impl SchemeParams {
    pub fn damping_exponent(big_gamma: f64) -> f64 {
        2.5 * big_gamma + 1.5
    }

    pub fn new(epsilon: f64, delta: f64, big_gamma: f64, dt: f64, t_end: f64) -> Self {
        Self {
            epsilon,
            delta,
            m: Self::damping_exponent(big_gamma),
            dt,
            t_end,
            picard_tol: 1e-8,
            picard_max: 25,
            under_relax: 1.0,
            pressure_midpoint: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.delta < 0.0 {
            return Err(Error::domain("damping weight delta must be nonnegative"));
        }
        if self.delta > 0.0 && !(self.m > 1.0) {
            return Err(Error::domain("damping exponent must satisfy m > 1 when delta > 0"));
        }
        if !(self.dt > 0.0) {
            return Err(Error::domain("time step must be positive"));
        }
        if !(self.epsilon > 0.0) {
            return Err(Error::domain("mollification scale must be positive"));
        }
        if self.picard_max == 0 {
            return Err(Error::domain("picard_max must be at least 1"));
        }
        if !(self.under_relax > 0.0 && self.under_relax <= 1.0) {
            return Err(Error::domain("under-relaxation factor must lie in (0, 1]"));
        }
        Ok(())
    }
}

/// Evolving state: density, velocity, time, plus the law and parameters
/// the trajectory was generated with.
#[derive(Debug, Clone)]
pub struct SchemeState {
    pub t: f64,
    pub rho: PeriodicField,
    pub u: PeriodicField,
    pub params: SchemeParams,
    pub law: PressureLaw,
}

impl SchemeState {
    pub fn new(rho: PeriodicField, u: PeriodicField, params: SchemeParams, law: PressureLaw) -> Result<Self> {
        params.validate()?;
        if !rho.is_scalar() || u.components() != u.grid().dim() {
            return Err(Error::domain("state needs scalar rho and vector u"));
        }
        rho.assert_compatible(&{
            let mut probe = PeriodicField::scalar(u.grid());
            probe.nonnegative = rho.nonnegative;
            probe
        })
        .map_err(|_| Error::domain("rho and u must share one grid"))?;
        let mut rho = rho;
        rho.nonnegative = true;
        rho.check_nonnegative()?;
        Ok(Self { t: 0.0, rho, u, params, law })
    }

    /// Evaluate pi_mu(rho) on the grid.
    pub fn pressure_field(&self) -> Result<PeriodicField> {
        pressure_of(&self.rho, &self.law)
    }
}

pub fn pressure_of(rho: &PeriodicField, law: &PressureLaw) -> Result<PeriodicField> {
    let mut out = PeriodicField::scalar(rho.grid());
    for (o, &r) in out.values_mut().iter_mut().zip(rho.component(0).iter()) {
        *o = law.pressure(r.max(0.0))?;
    }
    out.nonnegative = true;
    Ok(out)
}
