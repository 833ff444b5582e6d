//! Declarative run/sweep configuration: TOML with sections, validated and
//! resolved against documented defaults. The fully resolved form is echoed
//! into every output directory so a run can be reproduced bit-for-bit.

use crate::diagnostics::ExponentTable;
use crate::error::{Error, Result};
use crate::fields::TorusGrid;
use crate::pressure::{BumpPerturbation, GrowthEnvelope, LawKind, PressureLaw, TabulatedPressure};
use crate::scheme::SchemeParams;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct GridConfig {
    pub dim: usize,
    pub n: usize,
    pub length: f64,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self { dim: 1, n: 64, length: 2.0 * std::f64::consts::PI }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct BumpConfig {
    pub center: f64,
    pub width: f64,
    pub amplitude: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct LawConfig {
    /// "isentropic" | "non-monotone" | "tabulated"
    pub kind: String,
    pub gamma: f64,
    #[serde(rename = "Gamma")]
    pub big_gamma: f64,
    pub mu: f64,
    pub bump: Option<BumpConfig>,
    /// inline two-column table text for tabulated laws
    pub table: Option<String>,
    /// path to a two-column table file
    pub table_path: Option<String>,
}

impl Default for LawConfig {
    fn default() -> Self {
        Self {
            kind: "isentropic".to_string(),
            gamma: 2.0,
            big_gamma: 4.0,
            mu: 0.0,
            bump: None,
            table: None,
            table_path: None,
        }
    }
}

impl LawConfig {
    pub fn build(&self) -> Result<PressureLaw> {
        match self.kind.as_str() {
            "isentropic" => {
                let mut law = PressureLaw::regularized(self.gamma, self.big_gamma, self.mu);
                if self.mu == 0.0 {
                    law.kind = LawKind::Isentropic;
                }
                Ok(law)
            }
            "non-monotone" => {
                let b = self.bump.clone().unwrap_or(BumpConfig {
                    center: 1.5,
                    width: 0.5,
                    amplitude: 0.9,
                });
                Ok(PressureLaw::non_monotone(
                    self.gamma,
                    self.big_gamma,
                    self.mu,
                    BumpPerturbation::new(b.center, b.width, b.amplitude)?,
                ))
            }
            "tabulated" => {
                let text = match (&self.table, &self.table_path) {
                    (Some(t), _) => t.clone(),
                    (None, Some(p)) => std::fs::read_to_string(p)?,
                    (None, None) => {
                        return Err(Error::config(
                            "law.kind = \"tabulated\" needs law.table or law.table_path",
                        ))
                    }
                };
                let tab = TabulatedPressure::from_text(&text)?;
                let mut law = PressureLaw::tabulated(
                    tab,
                    self.gamma,
                    GrowthEnvelope { a1: 2.0, a2: 0.5, c: 2.0 },
                );
                law.big_gamma = self.big_gamma;
                law.mu = self.mu;
                Ok(law)
            }
            other => Err(Error::config(format!(
                "law.kind: unknown value {other:?} (expected isentropic, non-monotone or tabulated)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct SchemeConfig {
    pub epsilon: f64,
    pub delta: f64,
    /// damping exponent; None resolves to (5/2) Gamma + 3/2
    pub m: Option<f64>,
    /// None resolves to the advective CFL estimate of the initial data
    pub dt: Option<f64>,
    pub t_end: f64,
    pub picard_tol: f64,
    pub picard_max: usize,
    pub under_relax: f64,
    pub pressure_midpoint: bool,
}

impl Default for SchemeConfig {
    fn default() -> Self {
        Self {
            epsilon: 0.2,
            delta: 0.0,
            m: None,
            dt: None,
            t_end: 0.5,
            picard_tol: 1e-8,
            picard_max: 25,
            under_relax: 1.0,
            pressure_midpoint: false,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct InitialConfig {
    /// "sine" (1 + amplitude sin x1) or "constant"
    pub kind: String,
    pub amplitude: f64,
    pub value: f64,
    pub rho_min: f64,
    pub rho_max: f64,
    /// initial smoothing scale in cells (eps0 = cells * dx)
    pub mollify_cells: usize,
}

impl Default for InitialConfig {
    fn default() -> Self {
        Self {
            kind: "sine".to_string(),
            amplitude: 0.5,
            value: 1.0,
            rho_min: 0.1,
            rho_max: 10.0,
            mollify_cells: 4,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct WeightConfig {
    pub enabled: bool,
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub c4: f64,
    /// mass cap M for w0 = min(1, M/rho0)
    pub cap: Option<f64>,
}

impl Default for WeightConfig {
    fn default() -> Self {
        Self { enabled: false, c1: 1.0, c2: 1.0, c3: 1.0, c4: 0.0, cap: None }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct BogovskiiConfig {
    pub enabled: bool,
    /// None resolves to (13/20) Gamma - 1/20 when mu or delta is active,
    /// else (2/3) gamma
    pub alpha: Option<f64>,
}

impl Default for BogovskiiConfig {
    fn default() -> Self {
        Self { enabled: false, alpha: None }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct KernelConfig {
    pub enabled: bool,
    pub h_list: Vec<f64>,
    pub sigma: f64,
    pub p: f64,
}

impl Default for KernelConfig {
    fn default() -> Self {
        Self {
            enabled: false,
            h_list: vec![0.25, 0.125, 0.0625, 0.03125, 0.015625, 0.0078125],
            sigma: 0.0,
            p: 1.0,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct MonitorsConfig {
    pub stride: usize,
    pub evf: bool,
    pub weight: WeightConfig,
    pub bogovskii: BogovskiiConfig,
    pub kernel: KernelConfig,
}

impl Default for MonitorsConfig {
    fn default() -> Self {
        Self {
            stride: 10,
            evf: true,
            weight: WeightConfig::default(),
            bogovskii: BogovskiiConfig::default(),
            kernel: KernelConfig::default(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct OutputConfig {
    pub dir: String,
    pub snapshot_times: Vec<f64>,
    pub monitors_csv: bool,
    pub force: bool,
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self {
            dir: "out".to_string(),
            snapshot_times: Vec::new(),
            monitors_csv: true,
            force: false,
        }
    }
}

#[derive(Debug, Clone, Default, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct SweepAxes {
    pub epsilon: Option<Vec<f64>>,
    pub delta: Option<Vec<f64>>,
    pub mu: Option<Vec<f64>>,
    pub n: Option<Vec<usize>>,
    pub dt: Option<Vec<f64>>,
    /// kernel scales for the per-run functional table; does not multiply runs
    pub h: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct SweepSection {
    pub cap: usize,
    pub workers: usize,
    pub axes: SweepAxes,
}

impl Default for SweepSection {
    fn default() -> Self {
        Self { cap: 64, workers: 4, axes: SweepAxes::default() }
    }
}

/// Full configuration document.
#[derive(Debug, Clone, Default, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct Config {
    pub grid: GridConfig,
    pub law: LawConfig,
    pub scheme: SchemeConfig,
    pub initial: InitialConfig,
    pub monitors: MonitorsConfig,
    pub output: OutputConfig,
    pub sweep: SweepSection,
    /// reserved: the solver is deterministic, the seed is recorded only
    pub seed: u64,
}

impl Config {
    /// Parse, validate and resolve a TOML document. Returns the config and
    /// any advisory warnings (for example an m inconsistent with the
    /// damping-exponent relation).
    pub fn parse(text: &str) -> Result<(Config, Vec<String>)> {
        let cfg: Config = toml::from_str(text).map_err(|e| Error::config(e.to_string()))?;
        let warnings = cfg.validate()?;
        Ok((cfg, warnings))
    }

    pub fn validate(&self) -> Result<Vec<String>> {
        let mut warnings = Vec::new();
        TorusGrid::new(self.grid.dim, self.grid.n, self.grid.length)?;
        self.law.build()?;
        if !(self.law.gamma > 1.0) {
            return Err(Error::config("law.gamma must exceed 1"));
        }
        if self.scheme.delta < 0.0 {
            return Err(Error::config("scheme.delta must be nonnegative"));
        }
        if let Some(m) = self.scheme.m {
            let canonical = SchemeParams::damping_exponent(self.law.big_gamma);
            if (m - canonical).abs() > 1e-12 {
                warnings.push(format!(
                    "scheme.m = {m} overrides the damping-exponent relation m = (5/2) Gamma + 3/2 \
                     = {canonical} for Gamma = {}",
                    self.law.big_gamma
                ));
            }
        }
        if self.law.mu > 0.0 && !(self.law.big_gamma > 3.0) {
            warnings.push(format!(
                "law.Gamma = {} is outside the Gamma > 3 regime of the regularized construction",
                self.law.big_gamma
            ));
        }
        if self.monitors.stride == 0 {
            return Err(Error::config("monitors.stride must be positive"));
        }
        for &h in self.sweep.axes.h.iter().flatten() {
            if !(h > 0.0 && h < 0.5) {
                return Err(Error::config(format!("sweep.axes.h entries must lie in (0, 1/2), got {h}")));
            }
        }
        let runs = self.run_count();
        if runs > self.sweep.cap {
            return Err(Error::config(format!(
                "sweep cross-product has {runs} runs, exceeding the cap {}",
                self.sweep.cap
            )));
        }
        Ok(warnings)
    }

    fn axis_len<T>(axis: &Option<Vec<T>>) -> Result<usize> {
        match axis {
            None => Ok(1),
            Some(v) if v.is_empty() => Err(Error::config("sweep axes must be nonempty when given")),
            Some(v) => Ok(v.len()),
        }
    }

    pub fn run_count(&self) -> usize {
        let a = &self.sweep.axes;
        [
            Self::axis_len(&a.epsilon).unwrap_or(1),
            Self::axis_len(&a.delta).unwrap_or(1),
            Self::axis_len(&a.mu).unwrap_or(1),
            Self::axis_len(&a.n).unwrap_or(1),
            Self::axis_len(&a.dt).unwrap_or(1),
        ]
        .iter()
        .product()
    }

    /// Resolved damping exponent.
    pub fn resolved_m(&self) -> f64 {
        self.scheme
            .m
            .unwrap_or_else(|| SchemeParams::damping_exponent(self.law.big_gamma))
    }

    /// Resolved Bogovskii exponent.
    pub fn resolved_alpha(&self) -> f64 {
        self.monitors.bogovskii.alpha.unwrap_or_else(|| {
            if self.law.mu > 0.0 || self.scheme.delta > 0.0 {
                ExponentTable::alpha_delta_regime(self.law.big_gamma)
            } else {
                ExponentTable::alpha_mu_regime(self.law.gamma)
            }
        })
    }

    /// Environment overrides, namespaced TORUSFLUX_*.
    pub fn apply_env(&mut self, lookup: impl Fn(&str) -> Option<String>) -> Result<()> {
        if let Some(v) = lookup("TORUSFLUX_OUT") {
            self.output.dir = v;
        }
        if let Some(v) = lookup("TORUSFLUX_STRIDE") {
            self.monitors.stride = v
                .parse()
                .map_err(|_| Error::config("TORUSFLUX_STRIDE must be a positive integer"))?;
        }
        if let Some(v) = lookup("TORUSFLUX_WORKERS") {
            self.sweep.workers = v
                .parse()
                .map_err(|_| Error::config("TORUSFLUX_WORKERS must be a positive integer"))?;
        }
        if let Some(v) = lookup("TORUSFLUX_FORCE") {
            self.output.force = matches!(v.as_str(), "1" | "true" | "yes");
        }
        Ok(())
    }

    /// Deterministic TOML echo of the fully resolved configuration.
    pub fn to_toml(&self) -> String {
        let mut resolved = self.clone();
        resolved.scheme.m = Some(self.resolved_m());
        toml::to_string_pretty(&resolved).expect("config serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_config_fills_defaults() {
        let (cfg, warnings) = Config::parse("").unwrap();
        assert!(warnings.is_empty());
        assert_eq!(cfg.grid.dim, 1);
        assert_eq!(cfg.grid.n, 64);
        assert_eq!(cfg.scheme.epsilon, 0.2);
        assert_eq!(cfg.scheme.delta, 0.0);
        assert_eq!(cfg.law.mu, 0.0);
        assert!(cfg.scheme.dt.is_none()); // resolved later from the CFL estimate
        assert_eq!(cfg.law.gamma, 2.0);
    }

    #[test]
    fn axis_plan_counts_runs() {
        let text = r#"
[sweep.axes]
epsilon = [0.4, 0.2, 0.1]
"#;
        let (cfg, _) = Config::parse(text).unwrap();
        assert_eq!(cfg.run_count(), 3);
    }

    #[test]
    fn unknown_keys_are_rejected_with_field_name() {
        let err = Config::parse("[grid]\nnn = 64\n").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("nn"), "message should name the field: {msg}");
    }

    #[test]
    fn type_mismatch_is_reported_with_location() {
        let err = Config::parse("[grid]\nn = \"a lot\"\n").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("grid") || msg.contains("line"), "{msg}");
    }

    #[test]
    fn inconsistent_m_warns_with_relation() {
        let text = "[law]\nGamma = 4.0\n\n[scheme]\nm = 7.0\n";
        let (_, warnings) = Config::parse(text).unwrap();
        assert_eq!(warnings.len(), 1);
        assert!(warnings[0].contains("(5/2) Gamma + 3/2"));
        assert!(warnings[0].contains("11.5"));
    }

    #[test]
    fn axis_cap_enforced() {
        let text = r#"
[sweep]
cap = 4
[sweep.axes]
epsilon = [0.4, 0.2, 0.1]
delta = [0.1, 0.01]
"#;
        let err = Config::parse(text).unwrap_err();
        assert!(err.to_string().contains("cap"));
    }

    #[test]
    fn env_overrides() {
        let (mut cfg, _) = Config::parse("").unwrap();
        cfg.apply_env(|k| match k {
            "TORUSFLUX_OUT" => Some("elsewhere".into()),
            "TORUSFLUX_WORKERS" => Some("2".into()),
            _ => None,
        })
        .unwrap();
        assert_eq!(cfg.output.dir, "elsewhere");
        assert_eq!(cfg.sweep.workers, 2);
    }

    #[test]
    fn resolved_alpha_follows_regimes()
    {
        let (mut cfg, _) = Config::parse("").unwrap();
        // mu = 0, delta = 0: alpha = (2/3) gamma
        assert!((cfg.resolved_alpha() - 2.0 * 2.0 / 3.0).abs() < 1e-14);
        cfg.scheme.delta = 0.1;
        // delta regime: alpha = (13/20) Gamma - 1/20 = 2.55 for Gamma = 4
        assert!((cfg.resolved_alpha() - 2.55).abs() < 1e-14);
    }

    #[test]
    fn toml_echo_roundtrips() {
        let text = "[scheme]\nepsilon = 0.4\ndelta = 0.1\n";
        let (cfg, _) = Config::parse(text).unwrap();
        let echo = cfg.to_toml();
        let (back, _) = Config::parse(&echo).unwrap();
        assert_eq!(back.scheme.epsilon, 0.4);
        assert_eq!(back.scheme.delta, 0.1);
        assert_eq!(back.resolved_m(), cfg.resolved_m());
        // echoing the echo is a fixed point
        assert_eq!(echo, back.to_toml());
    }
}
