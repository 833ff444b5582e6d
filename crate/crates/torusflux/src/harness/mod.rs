//! Configuration, CLI-facing orchestration, sweep execution over
//! (epsilon, delta, mu, grid, dt), persistence and report generation.

pub mod certify;
pub mod config;
pub mod initial;
pub mod report;
pub mod restrict;
pub mod sweep;

pub use certify::{certify_law, CertificationOutcome};
pub use config::Config;
pub use initial::build_initial_state;
pub use report::{analyze, build_report, emit_report, ConvergenceReport, RunView};
pub use sweep::{execute_run, expand_runs, RunPoint, RunResult};

use crate::error::{Error, Result};
use std::path::Path;

/// Deterministic float formatting for CSV output (shortest round-trip form).
pub fn fmt_f64(v: f64) -> String {
    if v.is_nan() {
        "nan".to_string()
    } else if v.is_infinite() {
        if v > 0.0 {
            "inf".to_string()
        } else {
            "-inf".to_string()
        }
    } else if v != 0.0 && (v.abs() < 1e-4 || v.abs() >= 1e16) {
        format!("{v:e}")
    } else {
        let mut s = format!("{v}");
        if !s.contains('.') && !s.contains('e') {
            s.push_str(".0");
        }
        s
    }
}

fn prepare_out_dir(dir: &Path, force: bool) -> Result<()> {
    if dir.exists() {
        let occupied = std::fs::read_dir(dir)?.next().is_some();
        if occupied && !force {
            return Err(Error::config(format!(
                "output directory {} is not empty; pass --force to overwrite",
                dir.display()
            )));
        }
    }
    std::fs::create_dir_all(dir)?;
    Ok(())
}

/// Execute the full sweep pipeline: expand, run, persist, report.
pub fn run_sweep(cfg: &Config) -> Result<ConvergenceReport> {
    let dir = Path::new(&cfg.output.dir).to_path_buf();
    prepare_out_dir(&dir, cfg.output.force)?;
    std::fs::write(dir.join("resolved_config.toml"), cfg.to_toml())?;

    let results = sweep::run_sweep_plan(cfg)?;
    let mut ok_results = Vec::new();
    let mut views = Vec::new();
    for r in &results {
        match r {
            Ok(res) => {
                report::persist_run(&dir, res)?;
                views.push(report::view_of(res));
                ok_results.push(res);
            }
            Err(e) => {
                // setup failures leave no snapshots; record them in the log
                std::fs::write(
                    dir.join(format!("failed_{}.txt", views.len())),
                    e.to_string(),
                )?;
            }
        }
    }
    std::fs::write(dir.join("run_stats.csv"), report::run_stats_csv(&ok_results))?;
    let report = report::build_report(cfg, &views)?;
    report::emit_report(&report, &dir)?;
    Ok(report)
}

/// Execute a single run (the sweep axes are ignored) and persist it under
/// the output directory.
pub fn run_single(cfg: &Config) -> Result<RunResult> {
    let dir = Path::new(&cfg.output.dir).to_path_buf();
    prepare_out_dir(&dir, cfg.output.force)?;
    let mut single = cfg.clone();
    single.sweep.axes = Default::default();
    std::fs::write(dir.join("resolved_config.toml"), single.to_toml())?;
    let (point, run_cfg) = expand_runs(&single).remove(0);
    let result = execute_run(point, run_cfg)?;
    report::persist_run(&dir, &result)?;
    let report = report::build_report(&single, &[report::view_of(&result)])?;
    report::emit_report(&report, &dir)?;
    std::fs::write(dir.join("run_stats.csv"), report::run_stats_csv(&[&result]))?;
    Ok(result)
}
