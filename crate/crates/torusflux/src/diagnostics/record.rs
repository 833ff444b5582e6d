use crate::harness::fmt_f64;

/// One monitored time slice. Optional entries stay empty in CSV output
/// until the monitor that produces them has enough history or is enabled.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagnosticsRecord {
    pub t: f64,
    pub mass: f64,
    pub energy: f64,
    /// cumulative int_0^t ||grad u||_2^2
    pub enstrophy_integral: f64,
    /// cumulative delta int rho^m Pi_mu'(rho)
    pub damping_integral: f64,
    pub evf_l2: f64,
    pub evf_residual_l2: Option<f64>,
    /// cumulative L^2_t W^{1,2}_x norm of u
    pub u_l2w12: f64,
    /// instantaneous ||pi_mu(rho)||_{L^{p1}_x}
    pub pi_lp1: f64,
    /// cumulative L^{p2}_{t,x} norm of pi_mu(rho)
    pub pi_lp2: f64,
    /// cumulative L^s_{t,x} norm of rho^m pi_mu'(rho)
    pub rho_m_pi_ls: f64,
    pub weight_min: Option<f64>,
    pub weight_max: Option<f64>,
    pub rho_logw_integral: Option<f64>,
    /// cumulative int int rho Lambda, the budget bounding the above
    pub rho_lambda_budget: Option<f64>,
}

pub const MONITORS_SCHEMA: &str = "torusflux-monitors-v1";

pub fn csv_header() -> String {
    format!(
        "# schema: {MONITORS_SCHEMA}\n\
         t,mass,energy,enstrophy_integral,damping_integral,evf_l2,evf_residual_l2,\
         u_l2w12,pi_lp1,pi_lp2,rho_m_pi_ls,weight_min,weight_max,rho_logw_integral,rho_lambda_budget\n"
    )
}

fn opt(v: Option<f64>) -> String {
    v.map(fmt_f64).unwrap_or_default()
}

impl DiagnosticsRecord {
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
            fmt_f64(self.t),
            fmt_f64(self.mass),
            fmt_f64(self.energy),
            fmt_f64(self.enstrophy_integral),
            fmt_f64(self.damping_integral),
            fmt_f64(self.evf_l2),
            opt(self.evf_residual_l2),
            fmt_f64(self.u_l2w12),
            fmt_f64(self.pi_lp1),
            fmt_f64(self.pi_lp2),
            fmt_f64(self.rho_m_pi_ls),
            opt(self.weight_min),
            opt(self.weight_max),
            opt(self.rho_logw_integral),
            opt(self.rho_lambda_budget),
        )
    }

    pub fn csv(records: &[DiagnosticsRecord]) -> String {
        let mut out = csv_header();
        for r in records {
            out.push_str(&r.csv_row());
        }
        out
    }
}
