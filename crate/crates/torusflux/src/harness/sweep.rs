//! Sweep orchestration: expand the axis cross-product into independent
//! runs, execute them on a bounded worker pool, and persist snapshots,
//! monitor streams and metadata underneath the output directory.

use super::config::Config;
use super::initial::build_initial_state;
use crate::diagnostics::{MonitorConfig, MonitorEngine, WeightMonitorConfig, WeightParams};
use crate::error::{Error, Result};
use crate::fields::PeriodicField;
use crate::scheme::{run, RunOutcome};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Axis values one run was instantiated with.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct RunPoint {
    pub id: String,
    pub epsilon: f64,
    pub delta: f64,
    pub mu: f64,
    pub n: usize,
    pub dt: Option<f64>,
}

/// Completed (or failed) run with everything the report assembly needs.
#[derive(Debug)]
pub struct RunResult {
    pub point: RunPoint,
    pub config: Config,
    pub outcome: RunOutcome,
    pub engine: MonitorEngine,
    pub weight_final: Option<PeriodicField>,
    pub rho_initial: PeriodicField,
}

/// Expand the sweep cross-product (epsilon x delta x mu x n x dt); the h
/// axis parameterizes the kernel table per run instead of multiplying runs.
pub fn expand_runs(cfg: &Config) -> Vec<(RunPoint, Config)> {
    let axes = &cfg.sweep.axes;
    let eps = axes.epsilon.clone().unwrap_or_else(|| vec![cfg.scheme.epsilon]);
    let deltas = axes.delta.clone().unwrap_or_else(|| vec![cfg.scheme.delta]);
    let mus = axes.mu.clone().unwrap_or_else(|| vec![cfg.law.mu]);
    let ns = axes.n.clone().unwrap_or_else(|| vec![cfg.grid.n]);
    let dts: Vec<Option<f64>> = match &axes.dt {
        Some(list) => list.iter().map(|&d| Some(d)).collect(),
        None => vec![cfg.scheme.dt],
    };

    let mut out = Vec::new();
    let mut idx = 0usize;
    for &e in &eps {
        for &d in &deltas {
            for &mu in &mus {
                for &n in &ns {
                    for &dt in &dts {
                        let mut c = cfg.clone();
                        c.scheme.epsilon = e;
                        c.scheme.delta = d;
                        c.law.mu = mu;
                        c.grid.n = n;
                        c.scheme.dt = dt;
                        let point = RunPoint {
                            id: format!("run{idx:03}"),
                            epsilon: e,
                            delta: d,
                            mu,
                            n,
                            dt,
                        };
                        out.push((point, c));
                        idx += 1;
                    }
                }
            }
        }
    }
    out
}

fn monitor_config(cfg: &Config) -> MonitorConfig {
    let weight = if cfg.monitors.weight.enabled {
        Some(WeightMonitorConfig {
            params: WeightParams {
                c1: cfg.monitors.weight.c1,
                c2: cfg.monitors.weight.c2,
                c3: cfg.monitors.weight.c3,
                c4: cfg.monitors.weight.c4,
            },
            cap: cfg.monitors.weight.cap,
            use_rho_gamma: cfg.monitors.weight.c4 != 0.0,
        })
    } else {
        None
    };
    MonitorConfig {
        stride: cfg.monitors.stride,
        evf: cfg.monitors.evf,
        weight,
        bogovskii_alpha: if cfg.monitors.bogovskii.enabled {
            Some(cfg.resolved_alpha())
        } else {
            None
        },
    }
}

/// Execute one run to completion. Scheme-step failures are captured inside
/// the outcome; hard setup errors surface as Err.
pub fn execute_run(point: RunPoint, cfg: Config) -> Result<RunResult> {
    let state = build_initial_state(&cfg)?;
    let rho_initial = state.rho.clone();
    let mut engine = MonitorEngine::for_state(monitor_config(&cfg), &state);
    let outcome = run(state, &mut [&mut engine], &cfg.output.snapshot_times)?;
    let weight_final = engine_weight(&engine);
    Ok(RunResult { point, config: cfg, outcome, engine, weight_final, rho_initial })
}

fn engine_weight(engine: &MonitorEngine) -> Option<PeriodicField> {
    engine.weight_field().cloned()
}

/// Execute the whole sweep on a bounded pool; per-run failures are recorded
/// without aborting the sweep.
pub fn run_sweep_plan(cfg: &Config) -> Result<Vec<Result<RunResult>>> {
    cfg.validate()?;
    let plan = expand_runs(cfg);
    let workers = cfg.sweep.workers.max(1).min(plan.len().max(1));
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::numeric(format!("worker pool: {e}")))?;
    let results: Vec<Result<RunResult>> = pool.install(|| {
        plan.into_par_iter()
            .map(|(point, c)| execute_run(point, c))
            .collect()
    });
    Ok(results)
}
