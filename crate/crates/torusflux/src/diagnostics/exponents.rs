/// Integrability exponents induced by the damping exponent m and the
/// pressure growth Gamma:
///   p1 = (m-1)/Gamma,  p2 = 2(m-1)/Gamma,  s = 2(m-1)/(m+Gamma-1),
/// with m = (5/2) Gamma + 3/2 by default. The admissible m-interval is
/// ((5/2)Gamma + 1, (5/2)Gamma + 2); at its lower endpoint the exponents
/// hit the thresholds 5/2, 5, 10/7 exactly, for every Gamma.
#[derive(Debug, Clone, Copy)]
pub struct ExponentTable {
    pub big_gamma: f64,
    pub m: f64,
    pub p1: f64,
    pub p2: f64,
    pub s: f64,
    /// Bogovskii exponent of the delta-regime, (13/20) Gamma - 1/20
    pub alpha: f64,
    /// set when Gamma is outside the Gamma > 3 regime
    pub regime_warning: bool,
}

impl ExponentTable {
    pub fn new(big_gamma: f64) -> Self {
        Self::with_m(big_gamma, 2.5 * big_gamma + 1.5)
    }

    pub fn with_m(big_gamma: f64, m: f64) -> Self {
        let p1 = (m - 1.0) / big_gamma;
        let p2 = 2.0 * (m - 1.0) / big_gamma;
        let s = 2.0 * (m - 1.0) / (m + big_gamma - 1.0);
        Self {
            big_gamma,
            m,
            p1,
            p2,
            s,
            alpha: Self::alpha_delta_regime(big_gamma),
            regime_warning: !(big_gamma > 3.0),
        }
    }

    /// alpha = (13/20) Gamma - 1/20; exceeds 1 once Gamma > 21/13.
    pub fn alpha_delta_regime(big_gamma: f64) -> f64 {
        0.65 * big_gamma - 0.05
    }

    /// alpha bound of the mu-regime: alpha <= (2/3) gamma.
    pub fn alpha_mu_regime(gamma: f64) -> f64 {
        2.0 * gamma / 3.0
    }

    /// Strict threshold inequalities p1 > 5/2, p2 > 5, s > 10/7.
    pub fn strict_bounds_hold(&self) -> bool {
        self.p1 > 2.5 && self.p2 > 5.0 && self.s > 10.0 / 7.0
    }

    /// Lower endpoint of the admissible damping-exponent interval.
    pub fn m_lower_endpoint(big_gamma: f64) -> f64 {
        2.5 * big_gamma + 1.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn gamma_four_values() {
        let t = ExponentTable::new(4.0);
        assert_abs_diff_eq!(t.m, 11.5, epsilon = 1e-14);
        assert_abs_diff_eq!(t.p1, 2.625, epsilon = 1e-14);
        assert_abs_diff_eq!(t.p2, 5.25, epsilon = 1e-14);
        assert_abs_diff_eq!(t.s, 21.0 / 14.5, epsilon = 1e-14);
        assert!(t.s > 10.0 / 7.0);
        assert!(t.strict_bounds_hold());
        assert!(!t.regime_warning);
    }

    #[test]
    fn alpha_values() {
        assert_abs_diff_eq!(ExponentTable::new(10.0).alpha, 6.45, epsilon = 1e-14);
        // threshold Gamma = 21/13 puts alpha exactly at 1
        assert_abs_diff_eq!(
            ExponentTable::alpha_delta_regime(21.0 / 13.0),
            1.0,
            epsilon = 1e-14
        );
    }

    #[test]
    fn thresholds_attained_at_interval_endpoint() {
        // with m at the lower endpoint (5/2)Gamma + 1, the exponent
        // formulas reproduce the thresholds exactly for any Gamma
        for &g in &[3.0, 3.5, 4.0, 10.0] {
            let t = ExponentTable::with_m(g, ExponentTable::m_lower_endpoint(g));
            assert_abs_diff_eq!(t.p1, 2.5, epsilon = 1e-12);
            assert_abs_diff_eq!(t.p2, 5.0, epsilon = 1e-12);
            assert_abs_diff_eq!(t.s, 10.0 / 7.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn warns_outside_regime() {
        assert!(ExponentTable::new(3.0).regime_warning);
        assert!(ExponentTable::new(2.0).regime_warning);
    }
}
