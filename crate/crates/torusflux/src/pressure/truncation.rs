use crate::error::{Error, Result};

/// Base truncation profile: identity below 1, the fixed concave C^1
/// interpolant 1 + 2s - s^2 (s = (x-1)/2) on [1, 3], constant 2 above 3.
pub fn t_base(x: f64) -> f64 {
    if x <= 1.0 {
        x
    } else if x >= 3.0 {
        2.0
    } else {
        let s = 0.5 * (x - 1.0);
        1.0 + 2.0 * s - s * s
    }
}

pub fn t_base_deriv(x: f64) -> f64 {
    if x <= 1.0 {
        1.0
    } else if x >= 3.0 {
        0.0
    } else {
        1.0 - 0.5 * (x - 1.0)
    }
}

/// Scaled truncation T_k(x) = k T(x/k); requires k >= 1.
pub fn truncation_t(k: f64, x: f64) -> Result<f64> {
    if !(k >= 1.0) {
        return Err(Error::domain(format!("truncation level must satisfy k >= 1, got {k}")));
    }
    if x < 0.0 {
        return Err(Error::domain(format!("truncation input must be nonnegative, got {x}")));
    }
    Ok(k * t_base(x / k))
}

/// Renormalization function L_k(rho) = rho * int_1^rho T_k(xi)/xi^2 dxi.
///
/// Equals rho log rho for rho <= k; satisfies rho L_k' - L_k = T_k
/// everywhere. L_k(0) = 0 by continuity.
pub fn renorm_l(k: f64, rho: f64) -> Result<f64> {
    if !(k >= 1.0) {
        return Err(Error::domain(format!("truncation level must satisfy k >= 1, got {k}")));
    }
    if rho < 0.0 {
        return Err(Error::domain(format!("density must be nonnegative, got {rho}")));
    }
    if rho == 0.0 {
        return Ok(0.0);
    }
    Ok(rho * integral_tk_over_xi2(k, rho))
}

/// int_1^rho T_k(xi)/xi^2 dxi, piecewise closed form.
fn integral_tk_over_xi2(k: f64, rho: f64) -> f64 {
    // on [k, 3k]: T_k(xi) = xi - (xi-k)^2/(4k), so
    // T_k/xi^2 = -1/(4k) + (3/2)/xi - (k/4)/xi^2
    let a2 = |xi: f64| -xi / (4.0 * k) + 1.5 * xi.ln() + 0.25 * k / xi;
    let a3 = |xi: f64| -2.0 * k / xi;
    if rho <= k {
        rho.ln()
    } else if rho <= 3.0 * k {
        k.ln() + a2(rho) - a2(k)
    } else {
        k.ln() + (a2(3.0 * k) - a2(k)) + (a3(rho) - a3(3.0 * k))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::{adaptive_simpson, richardson_derivative};
    use approx::assert_abs_diff_eq;

    #[test]
    fn truncation_branches() {
        assert_abs_diff_eq!(truncation_t(5.0, 2.0).unwrap(), 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(truncation_t(1.0, 10.0).unwrap(), 2.0, epsilon = 1e-15);
        // middle piece: 2 T(2.5) with T(2.5) = 1.9375, inside (1.75, 2)
        let mid = truncation_t(2.0, 5.0).unwrap();
        assert_abs_diff_eq!(mid, 2.0 * 1.9375, epsilon = 1e-14);
        assert!(1.75 < mid / 2.0 && mid / 2.0 < 2.0);
        assert!(truncation_t(0.5, 1.0).is_err());
        assert!(truncation_t(1.0, -1.0).is_err());
    }

    #[test]
    fn truncation_is_concave_monotone_lipschitz() {
        for &k in &[1.0, 2.0, 7.5] {
            let mut prev = 0.0;
            let mut prev_slope = f64::INFINITY;
            let n = 4000;
            for i in 0..=n {
                let x = 4.0 * k * i as f64 / n as f64;
                let v = truncation_t(k, x).unwrap();
                if i > 0 {
                    let slope = (v - prev) / (4.0 * k / n as f64);
                    assert!(slope >= -1e-12, "T_k must be nondecreasing");
                    assert!(slope <= 1.0 + 1e-12, "T_k must be 1-Lipschitz");
                    assert!(slope <= prev_slope + 1e-10, "T_k must be concave");
                    prev_slope = slope;
                }
                prev = v;
            }
        }
    }

    #[test]
    fn renorm_matches_rho_log_rho_below_k() {
        assert_abs_diff_eq!(renorm_l(4.0, 2.0).unwrap(), 2.0 * 2.0f64.ln(), epsilon = 1e-14);
        assert_abs_diff_eq!(renorm_l(1.0, 0.5).unwrap(), 0.5 * 0.5f64.ln(), epsilon = 1e-14);
        assert_eq!(renorm_l(3.0, 1.0).unwrap(), 0.0);
        assert_eq!(renorm_l(2.0, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn renorm_closed_form_matches_quadrature_and_identity() {
        // quadrature of the defining integral as independent oracle
        for &(k, rho) in &[(1.0, 8.0), (2.0, 5.0), (1.5, 100.0), (3.0, 2.5)] {
            let quad = rho
                * adaptive_simpson(
                    &|xi| truncation_t(k, xi).unwrap() / (xi * xi),
                    1.0,
                    rho,
                    1e-13,
                )
                .unwrap();
            assert_abs_diff_eq!(renorm_l(k, rho).unwrap(), quad, epsilon = 1e-9);

            // rho L' - L = T_k by finite differences
            let l = |x: f64| renorm_l(k, x).unwrap();
            let dl = richardson_derivative(&l, rho, rho * 1e-5);
            let lhs = rho * dl - l(rho);
            let tk = truncation_t(k, rho).unwrap();
            assert_abs_diff_eq!(lhs, tk, epsilon = 1e-6 * (1.0 + tk.abs()));
        }
    }
}
