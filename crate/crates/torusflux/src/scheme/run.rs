use super::params::SchemeState;
use super::picard::{picard_coupled_step_dt, PicardStats};
use crate::error::Result;
use crate::fields::{spectral, Mollifier, MollifierSpec, PeriodicField};

/// Per-step hook invoked by the run loop; diagnostics engines implement
/// this to accumulate integrals every step and emit records at their own
/// stride.
pub trait StepHook {
    fn on_start(&mut self, _state: &SchemeState) -> Result<()> {
        Ok(())
    }
    fn after_step(&mut self, state: &SchemeState, dt: f64, stats: &PicardStats) -> Result<()>;
    fn on_finish(&mut self, _state: &SchemeState) -> Result<()> {
        Ok(())
    }
}

#[derive(Debug)]
pub struct RunOutcome {
    pub final_state: SchemeState,
    pub steps: usize,
    pub picard_iterations_total: usize,
    /// exact-time snapshots (t, rho, u); the step preceding a snapshot time
    /// is truncated so the capture lands on the requested instant
    pub snapshots: Vec<(f64, PeriodicField, PeriodicField)>,
    pub warnings: Vec<String>,
    /// set when a step error aborted the run; the outcome then carries the
    /// partial trajectory up to the failure
    pub failure: Option<String>,
}

/// Step the coupled system to t_end, truncating steps at snapshot times and
/// the horizon so events land exactly.
pub fn run(
    initial: SchemeState,
    hooks: &mut [&mut dyn StepHook],
    snapshot_times: &[f64],
) -> Result<RunOutcome> {
    let params = initial.params.clone();
    let moll = Mollifier::build(initial.rho.grid(), MollifierSpec::new(params.epsilon))?;

    let mut warnings = Vec::new();
    for (name, defect) in [
        ("rho", spectral::resolution_defect(&initial.rho)),
        ("u", spectral::resolution_defect(&initial.u)),
    ] {
        if defect > 1e-6 {
            warnings.push(format!(
                "initial {name} under-resolved: top-mode energy fraction {defect:.3e}"
            ));
        }
    }

    let mut outcome = RunOutcome {
        final_state: initial.clone(),
        steps: 0,
        picard_iterations_total: 0,
        snapshots: Vec::new(),
        warnings,
        failure: None,
    };
    if params.t_end <= initial.t {
        return Ok(outcome);
    }

    let mut events: Vec<f64> = snapshot_times
        .iter()
        .copied()
        .filter(|&s| s > initial.t && s <= params.t_end)
        .collect();
    events.push(params.t_end);
    events.sort_by(|a, b| a.partial_cmp(b).unwrap());
    events.dedup();

    for hook in hooks.iter_mut() {
        hook.on_start(&initial)?;
    }
    if snapshot_times.contains(&initial.t) {
        outcome
            .snapshots
            .push((initial.t, initial.rho.clone(), initial.u.clone()));
    }

    let mut state = initial;
    for &event in &events {
        while event - state.t > 1e-9 * params.dt {
            let dt = params.dt.min(event - state.t);
            match picard_coupled_step_dt(&state, &moll, dt) {
                Ok((next, stats)) => {
                    state = next;
                    outcome.steps += 1;
                    outcome.picard_iterations_total += stats.iterations;
                    for hook in hooks.iter_mut() {
                        hook.after_step(&state, dt, &stats)?;
                    }
                }
                Err(e) => {
                    outcome.failure = Some(format!("step {} at t = {}: {e}", outcome.steps + 1, state.t));
                    outcome.final_state = state;
                    return Ok(outcome);
                }
            }
        }
        state.t = event; // absorb rounding at event boundaries
        if snapshot_times.iter().any(|&s| (s - event).abs() <= 1e-14 * event.abs().max(1.0)) {
            outcome.snapshots.push((event, state.rho.clone(), state.u.clone()));
        }
    }

    for hook in hooks.iter_mut() {
        hook.on_finish(&state)?;
    }
    outcome.final_state = state;
    Ok(outcome)
}
