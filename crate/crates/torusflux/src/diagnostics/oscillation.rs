use crate::error::{Error, Result};
use crate::fields::PeriodicField;
use crate::numeric::pairwise_sum_by;
use crate::pressure::truncation_t;

/// Oscillation defect measure at desk scale: the sup over truncation levels
/// is replaced by a max over `k_list`, the limsup over the family by a max
/// over the supplied tail, and each member contributes its spatial integral
/// of |T_k(rho_i) - T_k(rho_limit)|^alpha times `time_weight` (the horizon
/// the snapshot stands in for).
pub fn oscillation_defect(
    sequence: &[&PeriodicField],
    limit: &PeriodicField,
    alpha: f64,
    k_list: &[f64],
    time_weight: f64,
) -> Result<f64> {
    if sequence.is_empty() {
        return Err(Error::domain("oscillation defect needs a nonempty sequence"));
    }
    if !(alpha > 0.0) {
        return Err(Error::domain("oscillation exponent alpha must be positive"));
    }
    if k_list.is_empty() {
        return Err(Error::domain("oscillation defect needs at least one truncation level"));
    }
    let mut worst: f64 = 0.0;
    for member in sequence {
        member.assert_compatible(limit)?;
        let n = member.grid().points();
        let cell = member.grid().cell_volume();
        for &k in k_list {
            let a = member.component(0);
            let b = limit.component(0);
            let sum = pairwise_sum_by(n, |i| {
                let ta = truncation_t(k, a[i].max(0.0)).expect("k checked below");
                let tb = truncation_t(k, b[i].max(0.0)).expect("k checked below");
                (ta - tb).abs().powf(alpha)
            });
            worst = worst.max(time_weight * sum * cell);
        }
    }
    Ok(worst)
}

/// Default truncation ladder {1, 2, 4, 8, 16}; a lower bound for the true
/// sup over all k >= 1.
pub fn default_k_list() -> Vec<f64> {
    vec![1.0, 2.0, 4.0, 8.0, 16.0]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::TorusGrid;
    use approx::assert_abs_diff_eq;

    #[test]
    fn identical_sequence_has_zero_defect() {
        let g = TorusGrid::standard(1, 64).unwrap();
        let f = PeriodicField::scalar_from_fn(g, |x| 1.0 + 0.3 * x[0].sin());
        let out = oscillation_defect(&[&f, &f], &f, 2.0, &default_k_list(), 1.0).unwrap();
        assert_eq!(out, 0.0);
    }

    #[test]
    fn oscillatory_family_closed_form() {
        // rho_i = 1 + sin(i x)/2 against limit 1, alpha = 2, k >= 2:
        // T_k is the identity below k, so the integrand is sin^2(ix)/4 with
        // mean 1/8: integral = time_weight * volume / 8
        let g = TorusGrid::standard(1, 256).unwrap();
        let limit = PeriodicField::constant(g, 1.0);
        let members: Vec<PeriodicField> = [4.0, 8.0, 16.0]
            .iter()
            .map(|&f| PeriodicField::scalar_from_fn(g, |x| 1.0 + 0.5 * (f * x[0]).sin()))
            .collect();
        let refs: Vec<&PeriodicField> = members.iter().collect();
        let t = 0.7;
        let out = oscillation_defect(&refs, &limit, 2.0, &[2.0, 4.0], t).unwrap();
        assert_abs_diff_eq!(out, t * g.volume() / 8.0, epsilon = 1e-12);
    }

    #[test]
    fn alpha_monotonicity_via_jensen() {
        // power-mean inequality: for alpha1 <= alpha2,
        // osc_a1 <= (T V)^(1 - a1/a2) * osc_a2^(a1/a2) on each member
        let g = TorusGrid::standard(1, 128).unwrap();
        let limit = PeriodicField::constant(g, 1.0);
        let f = PeriodicField::scalar_from_fn(g, |x| 1.0 + 0.4 * (3.0 * x[0]).sin());
        let ks = default_k_list();
        let (a1, a2) = (1.0, 2.0);
        let o1 = oscillation_defect(&[&f], &limit, a1, &ks, 1.0).unwrap();
        let o2 = oscillation_defect(&[&f], &limit, a2, &ks, 1.0).unwrap();
        let bound = g.volume().powf(1.0 - a1 / a2) * o2.powf(a1 / a2);
        assert!(o1 <= bound * (1.0 + 1e-12), "{o1} > {bound}");
    }

    #[test]
    fn empty_sequence_rejected() {
        let g = TorusGrid::standard(1, 64).unwrap();
        let f = PeriodicField::constant(g, 1.0);
        assert!(oscillation_defect(&[], &f, 2.0, &default_k_list(), 1.0).is_err());
    }
}
