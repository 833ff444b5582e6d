//! Report assembly and persistence. Everything in sweep_summary.csv,
//! kernel_table.csv and report.md derives from the resolved config plus the
//! persisted snapshots, so `analyze` reproduces those files bit-for-bit
//! from an output directory.

use super::config::Config;
use super::restrict::{l1_diff_on_coarsest, l2_diff_on_coarsest};
use super::sweep::{expand_runs, RunPoint, RunResult};
use super::fmt_f64;
use crate::diagnostics::{
    bogovskii_monitor, effective_viscous_flux, energy_of, kolmogorov_functional,
    rho_log_weight_integral, DiagnosticsRecord, KernelSpec,
};
use crate::error::{Error, Result};
use crate::fields::{io as field_io, Mollifier, MollifierSpec, PeriodicField};
use crate::pressure::PressureLaw;
use crate::scheme::{SchemeParams, SchemeState};
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

/// Snapshot-level view of one run: the inputs report assembly is allowed to
/// use. Built in memory after a sweep or reloaded from disk by `analyze`.
#[derive(Debug)]
pub struct RunView {
    pub point: RunPoint,
    pub config: Config,
    pub rho_initial: PeriodicField,
    pub rho_final: PeriodicField,
    pub u_final: PeriodicField,
    pub weight_final: Option<PeriodicField>,
    pub failure: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MetaSidecar {
    pub schema: String,
    pub point: RunPoint,
    pub t_final: f64,
    pub steps: usize,
    pub picard_iterations_total: usize,
    pub warnings: Vec<String>,
    pub failure: Option<String>,
    pub snapshot_times: Vec<f64>,
}

pub const META_SCHEMA: &str = "torusflux-run-meta-v1";

#[derive(Debug, Clone)]
pub struct SummaryRow {
    pub point: RunPoint,
    pub resolved_dt: Option<f64>,
    pub t_final: f64,
    pub mass_initial: f64,
    pub mass_final: f64,
    pub mass_loss: f64,
    pub energy_final: f64,
    pub min_rho_final: f64,
    pub evf_l2_final: f64,
    pub bogovskii_rho_moment: Option<f64>,
    pub bogovskii_pressure_pairing: Option<f64>,
    pub rho_logw_final: Option<f64>,
    pub failure: Option<String>,
}

#[derive(Debug, Clone)]
pub struct AxisRow {
    pub id_a: String,
    pub id_b: String,
    pub value_a: f64,
    pub value_b: f64,
    pub rho_l1: f64,
    pub u_l2: f64,
    /// observed order against the next row, present with >= 3 axis points
    pub order: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct AxisTable {
    pub axis: String,
    pub rows: Vec<AxisRow>,
}

#[derive(Debug, Clone)]
pub struct KernelRow {
    pub run: String,
    pub h: f64,
    pub value: f64,
    pub weighted: Option<f64>,
}

#[derive(Debug)]
pub struct ConvergenceReport {
    pub summary: Vec<SummaryRow>,
    pub axis_tables: Vec<AxisTable>,
    pub kernel_rows: Vec<KernelRow>,
}

fn law_of(cfg: &Config) -> Result<PressureLaw> {
    let mut law = cfg.law.build()?;
    law.mu = cfg.law.mu;
    Ok(law)
}

/// Everything in the summary row is computed from config + snapshots.
pub fn summarize(view: &RunView) -> Result<SummaryRow> {
    let cfg = &view.config;
    let law = law_of(cfg)?;
    let mass_initial = view.rho_initial.integral();
    let mass_final = view.rho_final.integral();
    let energy_final = energy_of(&view.rho_final, &view.u_final, &law)?;

    let moll = Mollifier::build(view.rho_final.grid(), MollifierSpec::new(cfg.scheme.epsilon))?;
    let state = SchemeState::new(
        view.rho_final.clone(),
        view.u_final.clone(),
        {
            let mut p = SchemeParams::new(
                cfg.scheme.epsilon,
                cfg.scheme.delta,
                cfg.law.big_gamma,
                cfg.scheme.dt.unwrap_or(1e-3),
                cfg.scheme.t_end,
            );
            p.m = cfg.resolved_m();
            p
        },
        law.clone(),
    )?;
    let evf_l2_final = effective_viscous_flux(&state, &moll)?.l2_norm();

    let (bog_moment, bog_pairing) = if cfg.monitors.bogovskii.enabled {
        let rec = bogovskii_monitor(&view.rho_final, &view.u_final, &law, cfg.resolved_alpha())?;
        (Some(rec.rho_moment), Some(rec.pressure_pairing))
    } else {
        (None, None)
    };
    let rho_logw_final = view
        .weight_final
        .as_ref()
        .map(|w| rho_log_weight_integral(&view.rho_final, w));

    Ok(SummaryRow {
        point: view.point.clone(),
        resolved_dt: cfg.scheme.dt,
        t_final: cfg.scheme.t_end,
        mass_initial,
        mass_final,
        mass_loss: mass_initial - mass_final,
        energy_final,
        min_rho_final: view.rho_final.min(),
        evf_l2_final,
        bogovskii_rho_moment: bog_moment,
        bogovskii_pressure_pairing: bog_pairing,
        rho_logw_final,
        failure: view.failure.clone(),
    })
}

/// One-factor-at-a-time slices: for each axis with more than one value,
/// order the runs that keep every other axis at its first value.
fn axis_slices<'a>(cfg: &Config, views: &'a [RunView]) -> Vec<(String, Vec<&'a RunView>)> {
    let axes = &cfg.sweep.axes;
    let mut out = Vec::new();
    let base = match views.first() {
        Some(v) => &v.point,
        None => return out,
    };
    let same = |a: f64, b: f64| (a - b).abs() <= 1e-15 * a.abs().max(b.abs()).max(1.0);

    if let Some(vals) = &axes.epsilon {
        if vals.len() > 1 {
            let slice: Vec<&RunView> = vals
                .iter()
                .filter_map(|&e| {
                    views.iter().find(|v| {
                        same(v.point.epsilon, e)
                            && same(v.point.delta, base.delta)
                            && same(v.point.mu, base.mu)
                            && v.point.n == base.n
                    })
                })
                .collect();
            out.push(("epsilon".to_string(), slice));
        }
    }
    if let Some(vals) = &axes.delta {
        if vals.len() > 1 {
            let slice: Vec<&RunView> = vals
                .iter()
                .filter_map(|&d| {
                    views.iter().find(|v| {
                        same(v.point.delta, d)
                            && same(v.point.epsilon, base.epsilon)
                            && same(v.point.mu, base.mu)
                            && v.point.n == base.n
                    })
                })
                .collect();
            out.push(("delta".to_string(), slice));
        }
    }
    if let Some(vals) = &axes.mu {
        if vals.len() > 1 {
            let slice: Vec<&RunView> = vals
                .iter()
                .filter_map(|&m| {
                    views.iter().find(|v| {
                        same(v.point.mu, m)
                            && same(v.point.epsilon, base.epsilon)
                            && same(v.point.delta, base.delta)
                            && v.point.n == base.n
                    })
                })
                .collect();
            out.push(("mu".to_string(), slice));
        }
    }
    if let Some(vals) = &axes.n {
        if vals.len() > 1 {
            let slice: Vec<&RunView> = vals
                .iter()
                .filter_map(|&n| {
                    views.iter().find(|v| {
                        v.point.n == n
                            && same(v.point.epsilon, base.epsilon)
                            && same(v.point.delta, base.delta)
                            && same(v.point.mu, base.mu)
                    })
                })
                .collect();
            out.push(("n".to_string(), slice));
        }
    }
    if let Some(vals) = &axes.dt {
        if vals.len() > 1 {
            let slice: Vec<&RunView> = vals
                .iter()
                .filter_map(|&d| {
                    views.iter().find(|v| {
                        v.point.dt.map_or(false, |x| same(x, d))
                            && same(v.point.epsilon, base.epsilon)
                            && same(v.point.delta, base.delta)
                            && same(v.point.mu, base.mu)
                            && v.point.n == base.n
                    })
                })
                .collect();
            out.push(("dt".to_string(), slice));
        }
    }
    out
}

fn axis_value(axis: &str, p: &RunPoint) -> f64 {
    match axis {
        "epsilon" => p.epsilon,
        "delta" => p.delta,
        "mu" => p.mu,
        "n" => p.n as f64,
        "dt" => p.dt.unwrap_or(f64::NAN),
        _ => f64::NAN,
    }
}

pub fn build_report(cfg: &Config, views: &[RunView]) -> Result<ConvergenceReport> {
    let mut summary = Vec::with_capacity(views.len());
    for v in views {
        summary.push(summarize(v)?);
    }

    let mut axis_tables = Vec::new();
    for (axis, slice) in axis_slices(cfg, views) {
        if slice.len() < 2 {
            continue;
        }
        let mut diffs = Vec::new();
        for w in slice.windows(2) {
            let rho_l1 = l1_diff_on_coarsest(&w[0].rho_final, &w[1].rho_final)?;
            let u_l2 = l2_diff_on_coarsest(&w[0].u_final, &w[1].u_final)?;
            diffs.push((w[0], w[1], rho_l1, u_l2));
        }
        let mut rows = Vec::new();
        for i in 0..diffs.len() {
            let (a, b, rho_l1, u_l2) = &diffs[i];
            // observed order against the next difference, when >= 3 points
            let order = if i + 1 < diffs.len() {
                let d_next = diffs[i + 1].2;
                let va = axis_value(&axis, &a.point);
                let vb = axis_value(&axis, &b.point);
                let ratio = if axis == "n" { vb / va } else { va / vb };
                if *rho_l1 > 0.0 && d_next > 0.0 && ratio > 1.0 {
                    Some((rho_l1 / d_next).ln() / ratio.ln())
                } else {
                    None
                }
            } else {
                None
            };
            rows.push(AxisRow {
                id_a: a.point.id.clone(),
                id_b: b.point.id.clone(),
                value_a: axis_value(&axis, &a.point),
                value_b: axis_value(&axis, &b.point),
                rho_l1: *rho_l1,
                u_l2: *u_l2,
                order,
            });
        }
        axis_tables.push(AxisTable { axis, rows });
    }

    // kernel functional table over the h-list, on final density snapshots
    let h_list: Vec<f64> = cfg
        .sweep
        .axes
        .h
        .clone()
        .or_else(|| {
            if cfg.monitors.kernel.enabled {
                Some(cfg.monitors.kernel.h_list.clone())
            } else {
                None
            }
        })
        .unwrap_or_default();
    let mut kernel_rows = Vec::new();
    for view in views {
        for &h in &h_list {
            let spec = KernelSpec::new(h)?.with_sigma(cfg.monitors.kernel.sigma);
            let p = cfg.monitors.kernel.p;
            let value = kolmogorov_functional(&[(1.0, &view.rho_final, None)], &spec, p)?;
            let weighted = match &view.weight_final {
                Some(w) => Some(kolmogorov_functional(
                    &[(1.0, &view.rho_final, Some(w))],
                    &spec,
                    p,
                )?),
                None => None,
            };
            kernel_rows.push(KernelRow { run: view.point.id.clone(), h, value, weighted });
        }
    }

    Ok(ConvergenceReport { summary, axis_tables, kernel_rows })
}

pub fn summary_csv(report: &ConvergenceReport) -> String {
    let mut s = String::from(
        "# schema: torusflux-sweep-summary-v1\n\
         run,epsilon,delta,mu,n,dt,t_final,mass_initial,mass_final,mass_loss,energy_final,\
         min_rho_final,evf_l2_final,bogovskii_rho_moment,bogovskii_pressure_pairing,rho_logw_final,failure\n",
    );
    for r in &report.summary {
        s.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
            r.point.id,
            fmt_f64(r.point.epsilon),
            fmt_f64(r.point.delta),
            fmt_f64(r.point.mu),
            r.point.n,
            r.resolved_dt.map(fmt_f64).unwrap_or_default(),
            fmt_f64(r.t_final),
            fmt_f64(r.mass_initial),
            fmt_f64(r.mass_final),
            fmt_f64(r.mass_loss),
            fmt_f64(r.energy_final),
            fmt_f64(r.min_rho_final),
            fmt_f64(r.evf_l2_final),
            r.bogovskii_rho_moment.map(fmt_f64).unwrap_or_default(),
            r.bogovskii_pressure_pairing.map(fmt_f64).unwrap_or_default(),
            r.rho_logw_final.map(fmt_f64).unwrap_or_default(),
            r.failure.clone().unwrap_or_default().replace(',', ";"),
        ));
    }
    s
}

pub fn kernel_csv(report: &ConvergenceReport) -> String {
    let mut s = String::from("# schema: torusflux-kernel-table-v1\nrun,h,r_h,r_h_weighted\n");
    for r in &report.kernel_rows {
        s.push_str(&format!(
            "{},{},{},{}\n",
            r.run,
            fmt_f64(r.h),
            fmt_f64(r.value),
            r.weighted.map(fmt_f64).unwrap_or_default(),
        ));
    }
    s
}

pub fn report_markdown(report: &ConvergenceReport) -> String {
    let mut s = String::from("# Sweep report\n\n");
    s.push_str(&format!("{} run(s).\n\n## Runs\n\n", report.summary.len()));
    s.push_str("| run | epsilon | delta | mu | n | mass loss | energy (T) | min rho | status |\n");
    s.push_str("|---|---|---|---|---|---|---|---|---|\n");
    for r in &report.summary {
        s.push_str(&format!(
            "| {} | {} | {} | {} | {} | {} | {} | {} | {} |\n",
            r.point.id,
            fmt_f64(r.point.epsilon),
            fmt_f64(r.point.delta),
            fmt_f64(r.point.mu),
            r.point.n,
            fmt_f64(r.mass_loss),
            fmt_f64(r.energy_final),
            fmt_f64(r.min_rho_final),
            r.failure.as_deref().unwrap_or("ok"),
        ));
    }
    for t in &report.axis_tables {
        s.push_str(&format!("\n## Axis: {}\n\n", t.axis));
        s.push_str("| pair | values | ||rho_a - rho_b||_L1 | ||u_a - u_b||_L2 | observed order |\n");
        s.push_str("|---|---|---|---|---|\n");
        for row in &t.rows {
            s.push_str(&format!(
                "| {} vs {} | {} -> {} | {} | {} | {} |\n",
                row.id_a,
                row.id_b,
                fmt_f64(row.value_a),
                fmt_f64(row.value_b),
                fmt_f64(row.rho_l1),
                fmt_f64(row.u_l2),
                row.order.map(fmt_f64).unwrap_or_else(|| "-".into()),
            ));
        }
    }
    if !report.kernel_rows.is_empty() {
        s.push_str("\n## Kernel functional (final snapshots)\n\n");
        s.push_str("| run | h | R~_h | R~_h weighted |\n|---|---|---|---|\n");
        for r in &report.kernel_rows {
            s.push_str(&format!(
                "| {} | {} | {} | {} |\n",
                r.run,
                fmt_f64(r.h),
                fmt_f64(r.value),
                r.weighted.map(fmt_f64).unwrap_or_else(|| "-".into()),
            ));
        }
    }
    s
}

/// Write the deterministic report file set into `dir`.
pub fn emit_report(report: &ConvergenceReport, dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    std::fs::write(dir.join("sweep_summary.csv"), summary_csv(report))?;
    std::fs::write(dir.join("kernel_table.csv"), kernel_csv(report))?;
    std::fs::write(dir.join("report.md"), report_markdown(report))?;
    Ok(())
}

fn run_dir(dir: &Path, id: &str) -> PathBuf {
    dir.join("runs").join(id)
}

/// Persist one finished run: snapshots, metadata sidecar and the monitor
/// stream.
pub fn persist_run(dir: &Path, result: &RunResult) -> Result<()> {
    let rd = run_dir(dir, &result.point.id);
    std::fs::create_dir_all(&rd)?;
    field_io::save_field(&rd.join("rho_initial.tflx"), &result.rho_initial)?;
    field_io::save_field(&rd.join("rho_final.tflx"), &result.outcome.final_state.rho)?;
    field_io::save_field(&rd.join("u_final.tflx"), &result.outcome.final_state.u)?;
    if let Some(w) = &result.weight_final {
        field_io::save_field(&rd.join("w_final.tflx"), w)?;
    }
    for (t, rho, u) in &result.outcome.snapshots {
        field_io::save_field(&rd.join(format!("rho_t{}.tflx", fmt_f64(*t))), rho)?;
        field_io::save_field(&rd.join(format!("u_t{}.tflx", fmt_f64(*t))), u)?;
    }
    let meta = MetaSidecar {
        schema: META_SCHEMA.to_string(),
        point: result.point.clone(),
        t_final: result.outcome.final_state.t,
        steps: result.outcome.steps,
        picard_iterations_total: result.outcome.picard_iterations_total,
        warnings: result.outcome.warnings.clone(),
        failure: result.outcome.failure.clone(),
        snapshot_times: result.outcome.snapshots.iter().map(|s| s.0).collect(),
    };
    std::fs::write(
        rd.join("meta.json"),
        serde_json::to_string_pretty(&meta).map_err(|e| Error::numeric(e.to_string()))?,
    )?;
    if result.config.output.monitors_csv {
        std::fs::write(
            dir.join(format!("monitors_{}.csv", result.point.id)),
            DiagnosticsRecord::csv(&result.engine.records),
        )?;
    }
    // per-run resolved config for provenance
    std::fs::write(rd.join("resolved_config.toml"), result.config.to_toml())?;
    Ok(())
}

/// Reload the snapshot view of one run from disk.
pub fn load_run_view(dir: &Path, point: RunPoint) -> Result<RunView> {
    let rd = run_dir(dir, &point.id);
    let cfg_text = std::fs::read_to_string(rd.join("resolved_config.toml"))?;
    let (config, _) = Config::parse(&cfg_text)?;
    let meta: MetaSidecar = serde_json::from_str(&std::fs::read_to_string(rd.join("meta.json"))?)
        .map_err(|e| Error::config(format!("meta.json: {e}")))?;
    let rho_initial = field_io::load_field(&rd.join("rho_initial.tflx"))?;
    let rho_final = field_io::load_field(&rd.join("rho_final.tflx"))?;
    let u_final = field_io::load_field(&rd.join("u_final.tflx"))?;
    let wpath = rd.join("w_final.tflx");
    let weight_final = if wpath.exists() {
        Some(field_io::load_field(&wpath)?)
    } else {
        None
    };
    Ok(RunView {
        point,
        config,
        rho_initial,
        rho_final,
        u_final,
        weight_final,
        failure: meta.failure,
    })
}

pub fn view_of(result: &RunResult) -> RunView {
    RunView {
        point: result.point.clone(),
        config: result.config.clone(),
        rho_initial: result.rho_initial.clone(),
        rho_final: result.outcome.final_state.rho.clone(),
        u_final: result.outcome.final_state.u.clone(),
        weight_final: result.weight_final.clone(),
        failure: result.outcome.failure.clone(),
    }
}

/// Sweep-time-only statistics that cannot be reproduced from snapshots.
pub fn run_stats_csv(results: &[&RunResult]) -> String {
    let mut s = String::from(
        "# schema: torusflux-run-stats-v1\n\
         run,steps,picard_iterations,max_mass_increase,min_rho_seen,max_energy_violation,\
         mean_evf_residual,weight_bounds_ok\n",
    );
    for r in results {
        s.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            r.point.id,
            r.outcome.steps,
            r.outcome.picard_iterations_total,
            fmt_f64(r.engine.max_mass_increase),
            fmt_f64(r.engine.min_rho_seen),
            fmt_f64(r.engine.max_energy_violation),
            r.engine.mean_evf_residual().map(fmt_f64).unwrap_or_default(),
            r.engine.weight_bounds_ok,
        ));
    }
    s
}

/// Recompute the report files from a persisted output directory.
pub fn analyze(dir: &Path) -> Result<ConvergenceReport> {
    let cfg_text = std::fs::read_to_string(dir.join("resolved_config.toml"))?;
    let (cfg, _) = Config::parse(&cfg_text)?;
    let plan = expand_runs(&cfg);
    let mut views = Vec::new();
    for (point, _) in plan {
        views.push(load_run_view(dir, point)?);
    }
    let report = build_report(&cfg, &views)?;
    emit_report(&report, dir)?;
    Ok(report)
}
