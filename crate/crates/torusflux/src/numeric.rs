//! Small numerical utilities shared across modules: reproducible pairwise
//! summation, adaptive quadrature, finite differences with Richardson
//! extrapolation, and the C^3 smoothstep used as pressure cutoff.

/// Pairwise (cascade) summation. Reduction order depends only on the slice
/// length, so results are identical from run to run.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    const BASE: usize = 32;
    if values.len() <= BASE {
        let mut acc = 0.0;
        for v in values {
            acc += v;
        }
        return acc;
    }
    let mid = values.len() / 2;
    pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
}

/// Pairwise sum of `f` mapped over `0..n`, without allocating.
pub fn pairwise_sum_by<F: Fn(usize) -> f64 + Copy>(n: usize, f: F) -> f64 {
    const BASE: usize = 32;
    fn rec<F: Fn(usize) -> f64 + Copy>(lo: usize, hi: usize, f: F) -> f64 {
        if hi - lo <= BASE {
            let mut acc = 0.0;
            for i in lo..hi {
                acc += f(i);
            }
            return acc;
        }
        let mid = lo + (hi - lo) / 2;
        rec(lo, mid, f) + rec(mid, hi, f)
    }
    rec(0, n, f)
}

/// Adaptive Simpson quadrature on [a, b].
///
/// Returns an error when the recursion depth limit is reached before the
/// tolerance is met.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    tol: f64,
) -> Result<f64, String> {
    fn simpson<F: Fn(f64) -> f64>(f: &F, a: f64, fa: f64, b: f64, fb: f64) -> (f64, f64, f64) {
        let m = 0.5 * (a + b);
        let fm = f(m);
        ((b - a) / 6.0 * (fa + 4.0 * fm + fb), m, fm)
    }
    fn rec<F: Fn(f64) -> f64>(
        f: &F,
        a: f64,
        fa: f64,
        b: f64,
        fb: f64,
        whole: f64,
        m: f64,
        fm: f64,
        tol: f64,
        depth: u32,
    ) -> Result<f64, String> {
        let (left, lm, flm) = simpson(f, a, fa, m, fm);
        let (right, rm, frm) = simpson(f, m, fm, b, fb);
        let delta = left + right - whole;
        if delta.abs() <= 15.0 * tol {
            return Ok(left + right + delta / 15.0);
        }
        if depth == 0 {
            return Err(format!(
                "adaptive quadrature did not converge on [{a:.6e}, {b:.6e}] (residual {:.3e})",
                delta.abs()
            ));
        }
        let l = rec(f, a, fa, m, fm, left, lm, flm, 0.5 * tol, depth - 1)?;
        let r = rec(f, m, fm, b, fb, right, rm, frm, 0.5 * tol, depth - 1)?;
        Ok(l + r)
    }

    if a == b {
        return Ok(0.0);
    }
    let fa = f(a);
    let fb = f(b);
    let (whole, m, fm) = simpson(f, a, fa, b, fb);
    rec(f, a, fa, b, fb, whole, m, fm, tol, 48)
}

/// First derivative by central differences with one Richardson step:
/// (4 D_{h/2} - D_h) / 3, error O(h^4).
pub fn richardson_derivative<F: Fn(f64) -> f64>(f: &F, x: f64, h: f64) -> f64 {
    let d = |h: f64| (f(x + h) - f(x - h)) / (2.0 * h);
    (4.0 * d(0.5 * h) - d(h)) / 3.0
}

/// Central second difference f(x-h) - 2 f(x) + f(x+h), normalized by h^2.
pub fn second_difference<F: Fn(f64) -> f64>(f: &F, x: f64, h: f64) -> f64 {
    (f(x - h) - 2.0 * f(x) + f(x + h)) / (h * h)
}

/// Degree-7 smoothstep: 0 below 0, 1 above 1, and C^3 across both knots
/// (value and first three derivatives vanish at t=0, first three derivatives
/// vanish at t=1).
#[derive(Debug, Clone, Copy)]
pub struct SmoothStep {
    pub lo: f64,
    pub hi: f64,
}

impl SmoothStep {
    pub fn new(lo: f64, hi: f64) -> Self {
        assert!(hi > lo, "smoothstep needs hi > lo");
        Self { lo, hi }
    }

    fn t(&self, x: f64) -> f64 {
        (x - self.lo) / (self.hi - self.lo)
    }

    pub fn eval(&self, x: f64) -> f64 {
        let t = self.t(x);
        if t <= 0.0 {
            0.0
        } else if t >= 1.0 {
            1.0
        } else {
            (35.0 + t * (-84.0 + t * (70.0 - 20.0 * t))) * t.powi(4)
        }
    }

    pub fn deriv(&self, x: f64, order: u32) -> f64 {
        let t = self.t(x);
        if !(0.0..=1.0).contains(&t) {
            return 0.0;
        }
        let w = self.hi - self.lo;
        let raw = match order {
            0 => return self.eval(x),
            // s(t) = 35 t^4 - 84 t^5 + 70 t^6 - 20 t^7
            1 => 140.0 * t.powi(3) - 420.0 * t.powi(4) + 420.0 * t.powi(5) - 140.0 * t.powi(6),
            2 => 420.0 * t.powi(2) - 1680.0 * t.powi(3) + 2100.0 * t.powi(4) - 840.0 * t.powi(5),
            3 => 840.0 * t - 5040.0 * t.powi(2) + 8400.0 * t.powi(3) - 4200.0 * t.powi(4),
            _ => panic!("smoothstep derivatives implemented up to order 3"),
        };
        raw / w.powi(order as i32)
    }
}

/// log-spaced samples in [lo, hi], inclusive on both ends.
pub fn log_space(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    assert!(lo > 0.0 && hi > lo && n >= 2);
    let (la, lb) = (lo.ln(), hi.ln());
    (0..n)
        .map(|i| (la + (lb - la) * i as f64 / (n - 1) as f64).exp())
        .collect()
}

/// Linearly spaced samples in [lo, hi], inclusive.
pub fn lin_space(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    assert!(n >= 2);
    (0..n)
        .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
        .collect()
}
