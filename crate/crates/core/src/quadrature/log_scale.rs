//! Integrals carrying the weights `|log(A/r)|` and `|log|log(A/r)||`.
//!
//! With `u = log r` and `L = log A − u`, the real line splits at `|L| = 1`
//! and `L = 0` into four regions. In each region `σ = |log|L||` runs over
//! `(0, ∞)`, `|L| = e^{±σ}` and `log|L| = ±σ` are exact, and `du = |L| dσ`.
//! Both the zeros of the double-log weight (`σ = 0`) and the slowly decaying
//! ends (`σ → ∞`) become ordinary endpoints of half-line integrals.

use super::tanh_sinh::{interval_vec, QuadResult};

/// A point of the log-scale parameterization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogPoint {
    /// Log-radius `u = log A − L` (may be infinite).
    pub u: f64,
    /// `L = log(A/r)` (may be infinite).
    pub l: f64,
    /// `log|L| = ±σ`, exact; the Jacobian `du/dσ` equals `e^{ln_abs_l}`.
    pub ln_abs_l: f64,
}

/// `∫ F dσ` over the part of `(u_lo, u_hi)` around `ln_a`, where the callback
/// must return the integrand per `dσ`, i.e. its `du`-integrand multiplied by
/// `|L| = e^{ln_abs_l}` (combine exponents to avoid overflow at the ends).
/// `u_breaks` are log-radii where the integrand is not smooth.
pub fn log_scale_integral_vec(
    ln_a: f64,
    mut f: impl FnMut(LogPoint, &mut [f64]),
    dim: usize,
    u_lo: f64,
    u_hi: f64,
    u_breaks: &[f64],
    tol: f64,
) -> QuadResult {
    let mut total = QuadResult { values: vec![0.0; dim], errors: vec![0.0; dim], evals: 0, converged: true };
    // (region u-interval, sign of L, sign of log|L|)
    let regions = [
        (f64::NEG_INFINITY, ln_a - 1.0, 1.0, 1.0),
        (ln_a - 1.0, ln_a, 1.0, -1.0),
        (ln_a, ln_a + 1.0, -1.0, -1.0),
        (ln_a + 1.0, f64::INFINITY, -1.0, 1.0),
    ];
    for (ra, rb, sl, sg) in regions {
        let a = ra.max(u_lo);
        let b = rb.min(u_hi);
        if a >= b {
            continue;
        }
        let sigma = |u: f64| -> f64 {
            let l = (ln_a - u).abs();
            if l.is_infinite() {
                f64::INFINITY
            } else {
                (sg * l.ln()).max(0.0)
            }
        };
        let (s1, s2) = (sigma(a), sigma(b));
        let (lo, hi) = if s1 <= s2 { (s1, s2) } else { (s2, s1) };
        let breaks: Vec<f64> = u_breaks.iter().filter(|x| **x > a && **x < b).map(|x| sigma(*x)).collect();
        let r = interval_vec(
            |s, _, out| {
                let ln_abs_l = sg * s;
                let l = sl * ln_abs_l.exp();
                f(LogPoint { u: ln_a - l, l, ln_abs_l }, out)
            },
            dim,
            lo,
            hi,
            &breaks,
            tol,
        );
        for i in 0..dim {
            total.values[i] += r.values[i];
            total.errors[i] += r.errors[i];
        }
        total.evals += r.evals;
        total.converged &= r.converged;
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn double_log_tail_is_captured() {
        // ∫_{−∞}^{−1} du / (L (log L)²) with L = −u: substitute σ = log L → ∫_0^∞ dσ/σ² diverges,
        // so integrate from L = e (σ = 1): value 1.
        let r = log_scale_integral_vec(
            0.0,
            |p, out| out[0] = (-2.0 * p.ln_abs_l.abs().ln()).exp(),
            1,
            f64::NEG_INFINITY,
            -std::f64::consts::E,
            &[],
            1e-13,
        );
        assert!((r.value() - 1.0).abs() < 1e-11, "{}", r.value());
    }

    #[test]
    fn gaussian_across_all_regions() {
        // ∫ e^{−u²} du with A = e^{0.3}: the split must not change the value.
        let r = log_scale_integral_vec(
            0.3,
            |p, out| out[0] = (-p.u * p.u + p.ln_abs_l).exp(),
            1,
            f64::NEG_INFINITY,
            f64::INFINITY,
            &[],
            1e-13,
        );
        assert!((r.value() - std::f64::consts::PI.sqrt()).abs() < 1e-11, "{}", r.value());
    }
}
