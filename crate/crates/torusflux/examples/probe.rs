use std::time::Instant;
use torusflux::diagnostics::*;
use torusflux::fields::*;
use torusflux::pressure::PressureLaw;
use torusflux::scheme::*;

fn smoke_state(dim: usize, n: usize, delta: f64, dt: f64, t_end: f64) -> SchemeState {
    let g = TorusGrid::standard(dim, n).unwrap();
    let mut rho = PeriodicField::scalar_from_fn(g, |x| 1.0 + 0.5 * x[0].sin());
    rho.nonnegative = true;
    // initial recipe: clamp + mollify with 4 dx
    let moll0 = Mollifier::build(g, MollifierSpec::new(4.0 * g.spacing())).unwrap();
    rho = moll0.apply(&rho).unwrap();
    rho.nonnegative = true;
    let u = PeriodicField::vector(g);
    let params = SchemeParams::new(0.2, delta, 4.0, dt, t_end);
    SchemeState::new(rho, u, params, PressureLaw::isentropic(2.0)).unwrap()
}

fn smoke_run(dim: usize, n: usize, delta: f64, dt: f64, t_end: f64, weight: bool) -> (MonitorEngine, RunOutcome, f64) {
    let state = smoke_state(dim, n, delta, dt, t_end);
    let e0 = energy(&state).unwrap();
    let cfg = MonitorConfig {
        stride: 10,
        evf: true,
        weight: if weight { Some(WeightMonitorConfig::default()) } else { None },
        bogovskii_alpha: None,
    };
    let mut engine = MonitorEngine::for_state(cfg, &state);
    let out = run(state, &mut [&mut engine], &[]).unwrap();
    (engine, out, e0)
}

fn main() {
    // criterion 3 probe: energy violation under refinement
    let t0 = Instant::now();
    let (eng_a, _, e0) = smoke_run(2, 64, 0.1, 1e-3, 0.5, true);
    let t_smoke = t0.elapsed().as_secs_f64();
    println!("2D 64^2 smoke with weight: {:.2}s", t_smoke);
    println!("E0 = {:.4}, max energy violation (64^2, dt 1e-3) = {:.4e} rel {:.4e}",
        e0, eng_a.max_energy_violation, eng_a.max_energy_violation / e0.abs());
    println!("evf mean residual (dt 1e-3) = {:.6e}", eng_a.mean_evf_residual().unwrap());
    println!("mass increase max = {:.3e}, min rho = {:.3e}", eng_a.max_mass_increase, eng_a.min_rho_seen);
    let last = eng_a.records.last().unwrap();
    println!("rho_logw = {:.6} vs budget = {:.6} ratio {:.4}",
        last.rho_logw_integral.unwrap(), last.rho_lambda_budget.unwrap(),
        last.rho_logw_integral.unwrap() / last.rho_lambda_budget.unwrap());
    // all records ratio check
    let mut worst_ratio = 0.0f64;
    for r in &eng_a.records[1..] {
        let ratio = r.rho_logw_integral.unwrap() / r.rho_lambda_budget.unwrap().max(1e-300);
        worst_ratio = worst_ratio.max(ratio);
    }
    println!("worst rho_logw/budget over records = {:.4}", worst_ratio);

    let t1 = Instant::now();
    let (eng_b, _, _) = smoke_run(2, 128, 0.1, 5e-4, 0.5, false);
    println!("2D 128^2 refined (no weight): {:.2}s", t1.elapsed().as_secs_f64());
    println!("max energy violation (128^2, dt 5e-4) = {:.4e}; shrink factor = {:.3}",
        eng_b.max_energy_violation, eng_a.max_energy_violation / eng_b.max_energy_violation.max(1e-300));

    // criterion 5 probe: EVF residual halving
    let t2 = Instant::now();
    let (eng_c, _, _) = smoke_run(2, 64, 0.1, 5e-4, 0.5, false);
    println!("2D 64^2 dt-half: {:.2}s", t2.elapsed().as_secs_f64());
    let r1 = eng_a.mean_evf_residual().unwrap();
    let r2 = eng_c.mean_evf_residual().unwrap();
    println!("evf residual dt 1e-3: {:.5e}, dt 5e-4: {:.5e}, ratio {:.4}", r1, r2, r2 / r1);

    // criterion 2a probe: delta = 0 conservation
    let (eng_d, _, _) = smoke_run(2, 64, 0.0, 1e-3, 0.5, false);
    let m0 = eng_d.records.first().unwrap().mass;
    let mt = eng_d.records.last().unwrap().mass;
    println!("delta=0: mass drift rel = {:.3e}, min rho = {:.3e}, max incr = {:.3e}",
        ((mt - m0) / m0).abs(), eng_d.min_rho_seen, eng_d.max_mass_increase);

    // criterion 7 probe
    let g = TorusGrid::standard(1, 256).unwrap();
    let smooth = PeriodicField::scalar_from_fn(g, |x| x[0].sin());
    let h_list: Vec<f64> = (2..=7).map(|k| 0.5f64.powi(k)).collect();
    let table = kolmogorov_table(&[(1.0, &smooth, None)], &h_list, 0.0, 1.0).unwrap();
    println!("smooth sin(x) R~_h: {:?}", table.iter().map(|(h, v)| format!("{h:.4}:{v:.4}")).collect::<Vec<_>>());
    println!("  ratio last/first = {:.4}", table.last().unwrap().1 / table[0].1);
    for j in [2, 3, 4, 5] {
        let f = 2f64.powi(j);
        let osc = PeriodicField::scalar_from_fn(g, |x| 1.0 + 0.5 * (f * x[0]).sin());
        let t = kolmogorov_table(&[(1.0, &osc, None)], &[h_list[0], *h_list.last().unwrap()], 0.0, 1.0).unwrap();
        println!("  osc 2^{j}: R at h=1/4: {:.4}, at 1/128: {:.4}, ratio {:.4}", t[0].1, t[1].1, t[1].1 / t[0].1);
    }
    println!("total probe time: {:.1}s", t0.elapsed().as_secs_f64());
}
