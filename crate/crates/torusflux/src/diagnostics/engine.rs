//! Step-hook implementation that evaluates every registered monitor along a
//! run: cumulative estimate norms every step, full records at a configured
//! stride, per-step extreme tracking for the invariant checks.

use super::bogovskii::{bogovskii_monitor, BogovskiiRecord};
use super::energy::{damping_rate, energy_of, enstrophy};
use super::evf::{effective_viscous_flux, EvfTracker};
use super::exponents::ExponentTable;
use super::record::DiagnosticsRecord;
use super::weight::{initial_weight, rho_log_weight_integral, weight_evolve, WeightParams};
use crate::error::Result;
use crate::fields::{Mollifier, MollifierSpec, PeriodicField};
use crate::scheme::{pressure_of, PicardStats, SchemeState, StepHook};

#[derive(Debug, Clone)]
pub struct WeightMonitorConfig {
    pub params: WeightParams,
    /// mass cap M for the initial weight min(1, M/rho0); None means w0 = 1
    pub cap: Option<f64>,
    /// include M(rho^gamma) in Lambda (the c4 term)
    pub use_rho_gamma: bool,
}

impl Default for WeightMonitorConfig {
    fn default() -> Self {
        Self { params: WeightParams::default(), cap: None, use_rho_gamma: false }
    }
}

#[derive(Debug, Clone)]
pub struct MonitorConfig {
    /// emit a full record every `stride` steps (plus start and finish)
    pub stride: usize,
    pub evf: bool,
    pub weight: Option<WeightMonitorConfig>,
    /// evaluate the Bogovskii monitor with this alpha at record times
    pub bogovskii_alpha: Option<f64>,
}

impl Default for MonitorConfig {
    fn default() -> Self {
        Self { stride: 10, evf: true, weight: None, bogovskii_alpha: None }
    }
}

#[derive(Debug)]
pub struct MonitorEngine {
    config: MonitorConfig,
    exponents: ExponentTable,
    moll: Option<Mollifier>,
    steps: usize,
    // cumulative integrals (end-of-step rectangle rule)
    enstrophy_integral: f64,
    damping_integral: f64,
    u_w12_sq_integral: f64,
    pi_p2_integral: f64,
    rho_m_pi_s_integral: f64,
    // per-step extreme tracking
    prev_mass: Option<f64>,
    prev_energy: Option<f64>,
    pub max_mass_increase: f64,
    pub min_rho_seen: f64,
    /// max over steps of E_{n+1} + increments - E_n (positive part)
    pub max_energy_violation: f64,
    pub weight_bounds_ok: bool,
    // EVF
    evf_tracker: EvfTracker,
    evf_residual_sum: f64,
    evf_residual_count: usize,
    last_evf_l2: f64,
    last_evf_residual: Option<f64>,
    // weight state
    weight: Option<PeriodicField>,
    rho_lambda_budget: f64,
    pub records: Vec<DiagnosticsRecord>,
    pub bogovskii_records: Vec<(f64, BogovskiiRecord)>,
}

impl MonitorEngine {
    pub fn new(config: MonitorConfig, big_gamma: f64, m: f64) -> Self {
        Self {
            config,
            exponents: ExponentTable::with_m(big_gamma, m),
            moll: None,
            steps: 0,
            enstrophy_integral: 0.0,
            damping_integral: 0.0,
            u_w12_sq_integral: 0.0,
            pi_p2_integral: 0.0,
            rho_m_pi_s_integral: 0.0,
            prev_mass: None,
            prev_energy: None,
            max_mass_increase: f64::NEG_INFINITY,
            min_rho_seen: f64::INFINITY,
            max_energy_violation: 0.0,
            weight_bounds_ok: true,
            evf_tracker: EvfTracker::new(),
            evf_residual_sum: 0.0,
            evf_residual_count: 0,
            last_evf_l2: 0.0,
            last_evf_residual: None,
            weight: None,
            rho_lambda_budget: 0.0,
            records: Vec::new(),
            bogovskii_records: Vec::new(),
        }
    }

    pub fn for_state(config: MonitorConfig, state: &SchemeState) -> Self {
        Self::new(config, state.law.big_gamma, state.params.m)
    }

    pub fn weight_field(&self) -> Option<&PeriodicField> {
        self.weight.as_ref()
    }

    pub fn mean_evf_residual(&self) -> Option<f64> {
        if self.evf_residual_count == 0 {
            None
        } else {
            Some(self.evf_residual_sum / self.evf_residual_count as f64)
        }
    }

    fn ensure_moll(&mut self, state: &SchemeState) -> Result<()> {
        if self.moll.is_none() {
            self.moll = Some(Mollifier::build(
                state.rho.grid(),
                MollifierSpec::new(state.params.epsilon),
            )?);
        }
        Ok(())
    }

    fn rho_gamma_field(&self, state: &SchemeState) -> PeriodicField {
        let gamma = state.law.gamma;
        state.rho.map(|r| r.max(0.0).powf(gamma))
    }

    fn make_record(&mut self, state: &SchemeState) -> Result<DiagnosticsRecord> {
        let pi = pressure_of(&state.rho, &state.law)?;
        let (wmin, wmax, rlogw, budget) = match &self.weight {
            Some(w) => (
                Some(w.min()),
                Some(w.max()),
                Some(rho_log_weight_integral(&state.rho, w)),
                Some(self.rho_lambda_budget),
            ),
            None => (None, None, None, None),
        };
        if let Some(alpha) = self.config.bogovskii_alpha {
            let rec = bogovskii_monitor(&state.rho, &state.u, &state.law, alpha)?;
            self.bogovskii_records.push((state.t, rec));
        }
        Ok(DiagnosticsRecord {
            t: state.t,
            mass: state.rho.integral(),
            energy: energy_of(&state.rho, &state.u, &state.law)?,
            enstrophy_integral: self.enstrophy_integral,
            damping_integral: self.damping_integral,
            evf_l2: self.last_evf_l2,
            evf_residual_l2: self.last_evf_residual,
            u_l2w12: self.u_w12_sq_integral.sqrt(),
            pi_lp1: pi.lp_norm(self.exponents.p1),
            pi_lp2: self.pi_p2_integral.powf(1.0 / self.exponents.p2),
            rho_m_pi_ls: self.rho_m_pi_s_integral.powf(1.0 / self.exponents.s),
            weight_min: wmin,
            weight_max: wmax,
            rho_logw_integral: rlogw,
            rho_lambda_budget: budget,
        })
    }
}

impl StepHook for MonitorEngine {
    fn on_start(&mut self, state: &SchemeState) -> Result<()> {
        self.ensure_moll(state)?;
        if self.config.weight.is_some() {
            let cfg = self.config.weight.as_ref().unwrap();
            self.weight = Some(initial_weight(&state.rho, cfg.cap));
        }
        self.prev_mass = Some(state.rho.integral());
        self.prev_energy = Some(energy_of(&state.rho, &state.u, &state.law)?);
        self.min_rho_seen = self.min_rho_seen.min(state.rho.min());
        if self.config.evf {
            let moll = self.moll.as_ref().unwrap();
            let g = effective_viscous_flux(state, moll)?;
            self.last_evf_l2 = g.l2_norm();
            self.last_evf_residual = self.evf_tracker.step(state, &g, state.params.dt)?;
        }
        let rec = self.make_record(state)?;
        self.records.push(rec);
        Ok(())
    }

    fn after_step(&mut self, state: &SchemeState, dt: f64, _stats: &PicardStats) -> Result<()> {
        self.ensure_moll(state)?;
        self.steps += 1;

        // cumulative estimate norms, end-of-step rectangle rule
        let ens = enstrophy(&state.u)?;
        self.enstrophy_integral += dt * ens;
        let damp = damping_rate(&state.rho, &state.law, state.params.delta, state.params.m)?;
        self.damping_integral += dt * damp;
        self.u_w12_sq_integral += dt * (state.u.l2_norm_squared() + ens);
        let pi = pressure_of(&state.rho, &state.law)?;
        self.pi_p2_integral += dt * pi.lp_norm(self.exponents.p2).powf(self.exponents.p2);
        let rho_m_pi = {
            let m = state.params.m;
            let law = state.law.clone();
            state
                .rho
                .map(|r| {
                    let r = r.max(0.0);
                    if r > 0.0 {
                        r.powf(m) * law.pressure_deriv(r)
                    } else {
                        0.0
                    }
                })
        };
        self.rho_m_pi_s_integral += dt * rho_m_pi.lp_norm(self.exponents.s).powf(self.exponents.s);

        // per-step invariants
        let mass = state.rho.integral();
        if let Some(prev) = self.prev_mass {
            self.max_mass_increase = self.max_mass_increase.max(mass - prev);
        }
        self.prev_mass = Some(mass);
        self.min_rho_seen = self.min_rho_seen.min(state.rho.min());

        let energy_now = energy_of(&state.rho, &state.u, &state.law)?;
        if let Some(prev) = self.prev_energy {
            let violation = energy_now + dt * (ens + damp) - prev;
            self.max_energy_violation = self.max_energy_violation.max(violation);
        }
        self.prev_energy = Some(energy_now);

        // effective viscous flux and its identity residual
        let g_field = if self.config.evf || self.config.weight.is_some() {
            let moll = self.moll.as_ref().unwrap();
            Some(effective_viscous_flux(state, moll)?)
        } else {
            None
        };
        if self.config.evf {
            let g = g_field.as_ref().unwrap();
            self.last_evf_l2 = g.l2_norm();
            self.last_evf_residual = self.evf_tracker.step(state, g, dt)?;
            if let Some(r) = self.last_evf_residual {
                self.evf_residual_sum += r;
                self.evf_residual_count += 1;
            }
        }

        // transported weight
        if let Some(cfg) = self.config.weight.clone() {
            let g = g_field.as_ref().expect("weight monitor computes G");
            let rho_gamma = if cfg.use_rho_gamma || cfg.params.c4 != 0.0 {
                Some(self.rho_gamma_field(state))
            } else {
                None
            };
            let w = self.weight.take().expect("weight initialized in on_start");
            let (w_next, budget_rate) =
                weight_evolve(&w, &state.u, g, &cfg.params, &state.rho, rho_gamma.as_ref(), dt)?;
            self.rho_lambda_budget += dt * budget_rate;
            if w_next.min() < 0.0 || w_next.max() > 1.0 {
                self.weight_bounds_ok = false;
            }
            self.weight = Some(w_next);
        }

        if self.steps % self.config.stride == 0 {
            let rec = self.make_record(state)?;
            self.records.push(rec);
        }
        Ok(())
    }

    fn on_finish(&mut self, state: &SchemeState) -> Result<()> {
        if self.steps % self.config.stride != 0 {
            let rec = self.make_record(state)?;
            self.records.push(rec);
        }
        Ok(())
    }
}
