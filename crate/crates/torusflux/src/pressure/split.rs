use super::law::PressureLaw;
use crate::error::{Error, Result};
use crate::numeric::{lin_space, log_space, SmoothStep};

/// Monotone/compact splitting of the pressure potential,
/// Pi_mu = P_mu + Q, with
///
///   P_mu(rho) = mu rho^Gamma / (Gamma - 1) + chi(rho) F(rho),
///   F(rho)    = Pi_mu(rho) - mu rho^Gamma / (Gamma - 1),
///   Q         = (1 - chi) F,
///
/// where chi is a C^3 smoothstep that is 0 below the scanned level M and 1
/// above 2M. The induced pressures are p_mu = rho P_mu' - P_mu and
/// q = rho Q' - Q, and p_mu + q = pi_mu identically.
#[derive(Debug, Clone)]
pub struct PotentialSplit {
    law: PressureLaw,
    /// cutoff level; chi ramps on [m_level, 2 m_level]. Zero means no cutoff
    /// (Q identically zero).
    pub m_level: f64,
    chi: Option<SmoothStep>,
    /// convexity constant: lambda_q P_mu +- p_mu has nonnegative curvature
    pub lambda_q: f64,
    /// sup of |Q| + |Q'| over the sample grid
    pub c_q: f64,
}

const SAMPLE_TOL: f64 = 1e-9;

fn sample_grid(m: f64) -> Vec<f64> {
    let mut g = log_space(1e-3, 1e3, 160);
    g.extend(lin_space(1e-3, (8.0 * m).max(20.0), 240));
    g.sort_by(|a, b| a.partial_cmp(b).unwrap());
    g
}

impl PotentialSplit {
    /// Scan for the smallest admissible cutoff level and assemble the split.
    ///
    /// The no-cutoff candidate (Q = 0) is tried first; it is admissible only
    /// when Pi_mu itself already has nonnegative value and first three
    /// derivatives on the sample grid.
    pub fn build(law: &PressureLaw) -> Result<Self> {
        if !(law.mu > 0.0) {
            return Err(Error::domain("potential split requires mu > 0"));
        }
        if !(law.big_gamma > 3.0) {
            return Err(Error::domain("potential split requires Gamma > 3"));
        }
        let mut candidates = vec![0.0];
        let mut m = 0.5;
        while m < 512.0 {
            candidates.push(m);
            m *= 1.3;
        }
        for &m in &candidates {
            let split = Self::with_level(law.clone(), m);
            if split.admissible()? {
                return split.finalize();
            }
        }
        Err(Error::construction(
            "no admissible cutoff level below the scan limit: potential split failed",
        ))
    }

    fn with_level(law: PressureLaw, m_level: f64) -> Self {
        let chi = if m_level > 0.0 {
            Some(SmoothStep::new(m_level, 2.0 * m_level))
        } else {
            None
        };
        Self { law, m_level, chi, lambda_q: 0.0, c_q: 0.0 }
    }

    fn spine(&self, rho: f64, order: u32) -> f64 {
        let g = self.law.big_gamma;
        let c = self.law.mu / (g - 1.0);
        match order {
            0 => c * rho.powf(g),
            1 => c * g * rho.powf(g - 1.0),
            2 => c * g * (g - 1.0) * rho.powf(g - 2.0),
            3 => c * g * (g - 1.0) * (g - 2.0) * rho.powf(g - 3.0),
            _ => unreachable!(),
        }
    }

    /// F = Pi_mu - spine and its derivatives.
    fn rest(&self, rho: f64, order: u32) -> Result<f64> {
        let pot = match order {
            0 => self.law.potential(rho)?,
            1 => self.law.potential_deriv(rho)?,
            2 => self.law.potential_deriv2(rho)?,
            3 => self.law.potential_deriv3(rho)?,
            _ => unreachable!(),
        };
        Ok(pot - self.spine(rho, order))
    }

    fn chi_eval(&self, rho: f64, order: u32) -> f64 {
        match &self.chi {
            None => {
                if order == 0 {
                    1.0
                } else {
                    0.0
                }
            }
            Some(s) => {
                if order == 0 {
                    s.eval(rho)
                } else {
                    s.deriv(rho, order)
                }
            }
        }
    }

    /// P_mu and its first three derivatives (rho > 0 for orders >= 2).
    pub fn convex_part_deriv(&self, rho: f64, order: u32) -> Result<f64> {
        let s = self.spine(rho, order);
        // chi vanishes identically below m_level: F need not be evaluated there
        if self.chi.is_some() && rho <= self.m_level {
            return Ok(s);
        }
        let v = match order {
            0 => self.chi_eval(rho, 0) * self.rest(rho, 0)?,
            1 => {
                self.chi_eval(rho, 1) * self.rest(rho, 0)?
                    + self.chi_eval(rho, 0) * self.rest(rho, 1)?
            }
            2 => {
                self.chi_eval(rho, 2) * self.rest(rho, 0)?
                    + 2.0 * self.chi_eval(rho, 1) * self.rest(rho, 1)?
                    + self.chi_eval(rho, 0) * self.rest(rho, 2)?
            }
            3 => {
                self.chi_eval(rho, 3) * self.rest(rho, 0)?
                    + 3.0 * self.chi_eval(rho, 2) * self.rest(rho, 1)?
                    + 3.0 * self.chi_eval(rho, 1) * self.rest(rho, 2)?
                    + self.chi_eval(rho, 0) * self.rest(rho, 3)?
            }
            _ => unreachable!(),
        };
        Ok(s + v)
    }

    pub fn convex_part(&self, rho: f64) -> Result<f64> {
        self.convex_part_deriv(rho, 0)
    }

    /// Q = (1 - chi) F; compactly supported in [0, 2 m_level].
    pub fn compact_part(&self, rho: f64) -> Result<f64> {
        if self.chi.is_none() {
            return Ok(0.0);
        }
        if rho >= self.support_bound() {
            return Ok(0.0);
        }
        Ok(self.law.potential(rho)? - self.convex_part(rho)?)
    }

    pub fn compact_part_deriv(&self, rho: f64) -> Result<f64> {
        if self.chi.is_none() || rho >= self.support_bound() {
            return Ok(0.0);
        }
        Ok(self.law.potential_deriv(rho)? - self.convex_part_deriv(rho, 1)?)
    }

    /// Upper bound of the support of Q.
    pub fn support_bound(&self) -> f64 {
        2.0 * self.m_level
    }

    /// p_mu(rho) = rho P_mu'(rho) - P_mu(rho).
    pub fn convex_pressure(&self, rho: f64) -> Result<f64> {
        Ok(rho * self.convex_part_deriv(rho, 1)? - self.convex_part(rho)?)
    }

    /// q(rho) = rho Q'(rho) - Q(rho).
    pub fn compact_pressure(&self, rho: f64) -> Result<f64> {
        Ok(rho * self.compact_part_deriv(rho)? - self.compact_part(rho)?)
    }

    /// p_mu''(rho) = P_mu''(rho) + rho P_mu'''(rho).
    fn convex_pressure_curvature(&self, rho: f64) -> Result<f64> {
        Ok(self.convex_part_deriv(rho, 2)? + rho * self.convex_part_deriv(rho, 3)?)
    }

    fn admissible(&self) -> Result<bool> {
        for &rho in &sample_grid(self.m_level.max(1.0)) {
            let scale = 1.0 + self.spine(rho, 0).abs() + self.law.potential(rho)?.abs();
            for order in 0..=3 {
                if self.convex_part_deriv(rho, order)? < -SAMPLE_TOL * scale {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Fill in lambda_q (smallest lambda with nonnegative sampled curvature
    /// of lambda P_mu +- p_mu, times a 1.1 safety factor) and the Q bound.
    fn finalize(mut self) -> Result<Self> {
        let grid = sample_grid(self.m_level.max(1.0));
        let mut lambda_req: f64 = 0.0;
        let mut c_q: f64 = 0.0;
        for &rho in &grid {
            let p2 = self.convex_part_deriv(rho, 2)?;
            let pm2 = self.convex_pressure_curvature(rho)?;
            // need lambda * P'' +- p'' >= 0 at every sample
            if p2 > 1e-300 {
                lambda_req = lambda_req.max(pm2.abs() / p2);
            } else if pm2.abs() > 1e-12 {
                return Err(Error::construction(format!(
                    "cannot certify convexity constant: P_mu'' vanishes at rho = {rho} \
                     while p_mu'' = {pm2:.3e}"
                )));
            }
            c_q = c_q.max(self.compact_part(rho)?.abs() + self.compact_part_deriv(rho)?.abs());
        }
        self.lambda_q = 1.1 * lambda_req.max(1e-6);
        self.c_q = c_q;
        Ok(self)
    }
}
