//! Pressure-law certification: the sampled invariant suite behind the
//! `certify-law` verb. Checks the potential identity, the growth envelope,
//! the truncation Lipschitz property and (for regularized laws) the
//! convexity certificate of the potential split.

use crate::error::Result;
use crate::numeric::{log_space, richardson_derivative, second_difference};
use crate::pressure::{truncation_t, PotentialSplit, PressureLaw};

#[derive(Debug, Clone)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone)]
pub struct CertificationOutcome {
    pub checks: Vec<CheckResult>,
}

impl CertificationOutcome {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        for c in &self.checks {
            s.push_str(&format!(
                "{}: {} ({})\n",
                if c.passed { "PASS" } else { "FAIL" },
                c.name,
                c.detail
            ));
        }
        s
    }
}

fn sample_rho() -> Vec<f64> {
    log_space(1e-3, 1e3, 200)
}

/// Identity rho Pi' - Pi = pi to 1e-8 relative, derivative by
/// Richardson-extrapolated central differences.
pub fn check_potential_identity(law: &PressureLaw) -> CheckResult {
    let mut worst = 0.0f64;
    for &rho in &sample_rho() {
        let h = (rho * 1e-3).max(1e-6).min(0.45 * rho);
        let dpi = richardson_derivative(&|x| law.potential(x).unwrap(), rho, h);
        let pi = law.pressure(rho).unwrap();
        let err = (rho * dpi - law.potential(rho).unwrap() - pi).abs() / (1.0 + pi.abs());
        worst = worst.max(err);
    }
    CheckResult {
        name: "potential identity rho Pi' - Pi = pi".into(),
        passed: worst <= 1e-8,
        detail: format!("max relative residual {worst:.3e}"),
    }
}

/// pre-type growth envelope of the base pressure on the sample grid.
pub fn check_growth_envelope(law: &PressureLaw) -> CheckResult {
    let env = law.envelope;
    let mut ok = law.base_pressure(0.0).abs() <= 1e-12;
    let mut detail = String::new();
    for &rho in &sample_rho() {
        let pi = law.base_pressure(rho);
        let g = rho.powf(law.gamma);
        if pi <= 0.0 || env.a2 * g - env.c > pi + 1e-12 || pi > env.c + env.a1 * g + 1e-12 {
            ok = false;
            detail = format!("envelope violated at rho = {rho}: pi = {pi}");
            break;
        }
    }
    if ok {
        detail = "pi(0) = 0, positivity and two-sided gamma-growth hold on 200 samples".into();
    }
    CheckResult { name: "growth envelope".into(), passed: ok, detail }
}

/// Convexity certificate: sampled second differences of
/// lambda_q P_mu +- p_mu stay above -1e-10 (up to the fp floor of the
/// sample magnitudes).
pub fn check_split_convexity(law: &PressureLaw) -> Result<CheckResult> {
    let split = PotentialSplit::build(law)?;
    let mut worst = f64::INFINITY;
    for &rho in &sample_rho() {
        let h = (rho * 1e-3).max(1e-6);
        for sign in [1.0, -1.0] {
            let f = |x: f64| {
                split.lambda_q * split.convex_part(x).unwrap()
                    + sign * split.convex_pressure(x).unwrap()
            };
            let d2 = second_difference(&f, rho, h) * h * h;
            let floor = 8.0 * f(rho).abs() * f64::EPSILON;
            worst = worst.min(d2 + floor);
        }
    }
    Ok(CheckResult {
        name: "split convexity of lambda_q P +- p".into(),
        passed: worst >= -1e-10,
        detail: format!(
            "lambda_q = {:.4}, M = {:.3}, min fp-adjusted second difference {worst:.3e}",
            split.lambda_q, split.m_level
        ),
    })
}

/// Split reconstruction identity p_mu + q = pi_mu at the spot checks.
pub fn check_split_identity(law: &PressureLaw) -> Result<CheckResult> {
    let split = PotentialSplit::build(law)?;
    let mut worst = 0.0f64;
    for &rho in &[0.5, 1.0, 3.0, 10.0] {
        let p = split.convex_pressure(rho)?;
        let q = split.compact_pressure(rho)?;
        let pi = law.pressure(rho)?;
        worst = worst.max((p + q - pi).abs() / (1.0 + pi.abs()));
    }
    Ok(CheckResult {
        name: "split reconstruction p_mu + q = pi_mu".into(),
        passed: worst <= 1e-8,
        detail: format!("max relative residual {worst:.3e} at rho in {{0.5, 1, 3, 10}}"),
    })
}

/// T_k is 1-Lipschitz on deterministic sample pairs.
pub fn check_truncation_lipschitz() -> CheckResult {
    let mut ok = true;
    let mut seed = 0x2545F4914F6CDD1Du64;
    let mut next = move || {
        // xorshift for deterministic sample pairs
        seed ^= seed << 13;
        seed ^= seed >> 7;
        seed ^= seed << 17;
        (seed >> 11) as f64 / (1u64 << 53) as f64
    };
    for _ in 0..500 {
        let k = 1.0 + 9.0 * next();
        let a = 40.0 * next();
        let b = 40.0 * next();
        let ta = truncation_t(k, a).unwrap();
        let tb = truncation_t(k, b).unwrap();
        if (ta - tb).abs() > (a - b).abs() + 1e-12 {
            ok = false;
            break;
        }
    }
    CheckResult {
        name: "truncation 1-Lipschitz".into(),
        passed: ok,
        detail: "500 random pairs".into(),
    }
}

/// Run the full certification suite for one law.
pub fn certify_law(law: &PressureLaw) -> Result<CertificationOutcome> {
    let mut checks = vec![
        check_potential_identity(law),
        check_growth_envelope(law),
        check_truncation_lipschitz(),
    ];
    if law.mu > 0.0 && law.big_gamma > 3.0 {
        checks.push(check_split_identity(law)?);
        checks.push(check_split_convexity(law)?);
    }
    Ok(CertificationOutcome { checks })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn built_in_laws_certify() {
        for law in [
            PressureLaw::isentropic(1.4),
            PressureLaw::isentropic(2.0),
            PressureLaw::regularized(1.4, 3.5, 0.1),
            PressureLaw::regularized(2.0, 4.0, 1.0),
            PressureLaw::default_non_monotone(),
        ] {
            let out = certify_law(&law).unwrap();
            assert!(out.all_passed(), "{:?}:\n{}", law.kind, out.render());
        }
    }
}
