//! Double-exponential (tanh-sinh) quadrature.
//!
//! The integrand receives `(x, x − a, b − x)` with both offsets computed
//! without cancellation, so weights that are singular at an endpoint can be
//! evaluated accurately arbitrarily close to it.

use std::f64::consts::FRAC_PI_2;

/// Result of a (possibly vector-valued) quadrature.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadResult {
    pub values: Vec<f64>,
    pub errors: Vec<f64>,
    pub evals: usize,
    pub converged: bool,
}

impl QuadResult {
    fn zeros(dim: usize) -> Self {
        Self { values: vec![0.0; dim], errors: vec![0.0; dim], evals: 0, converged: true }
    }

    pub fn value(&self) -> f64 {
        self.values[0]
    }

    pub fn error(&self) -> f64 {
        self.errors[0]
    }

    fn absorb(&mut self, other: &QuadResult) {
        for i in 0..self.values.len() {
            self.values[i] += other.values[i];
            self.errors[i] += other.errors[i];
        }
        self.evals += other.evals;
        self.converged &= other.converged;
    }
}

/// Default relative tolerance of the quadrature routines.
pub const DEFAULT_TOL: f64 = 1e-13;
const FIRST_STEP: f64 = 0.5;
const T_MAX: f64 = 6.5;
const MAX_LEVEL: usize = 11;
const MIN_LEVEL: usize = 3;

/// `∫_a^b f` for a vector-valued integrand of dimension `dim`.
pub fn tanh_sinh_vec(
    mut f: impl FnMut(f64, f64, f64, &mut [f64]),
    dim: usize,
    a: f64,
    b: f64,
    tol: f64,
) -> QuadResult {
    if a == b {
        return QuadResult::zeros(dim);
    }
    debug_assert!(a < b, "tanh_sinh_vec needs a < b");
    let half = 0.5 * (b - a);
    let width = b - a;
    let mut sums = vec![0.0; dim];
    let mut buf = vec![0.0; dim];
    let mut prev: Option<Vec<f64>> = None;
    let mut errors = vec![f64::INFINITY; dim];
    let mut evals = 0;
    let mut add = |t: f64, sums: &mut [f64], buf: &mut [f64], evals: &mut usize| -> bool {
        let u = FRAC_PI_2 * t.sinh();
        let cu = u.cosh();
        let w = FRAC_PI_2 * t.cosh() / (cu * cu);
        let delta = half * (-u).exp() / cu;
        if !(w > 0.0 && w.is_finite()) || delta == 0.0 {
            return false;
        }
        let mut nodes = [(b - delta, width - delta, delta), (a + delta, delta, width - delta)];
        let count = if t == 0.0 { 1 } else { 2 };
        if t == 0.0 {
            nodes[0] = (a + half, half, half);
        }
        for &(x, dl, dr) in &nodes[..count] {
            buf.iter_mut().for_each(|v| *v = 0.0);
            f(x, dl, dr, buf);
            *evals += 1;
            for (s, v) in sums.iter_mut().zip(buf.iter()) {
                let term = w * v;
                if term.is_finite() {
                    *s += term;
                }
            }
        }
        true
    };
    let mut level = 0;
    loop {
        let h = FIRST_STEP / (1u64 << level) as f64;
        if level == 0 {
            let mut k = 0usize;
            while (k as f64) * h <= T_MAX {
                if !add(k as f64 * h, &mut sums, &mut buf, &mut evals) {
                    break;
                }
                k += 1;
            }
        } else {
            let mut k = 1usize;
            while (k as f64) * h <= T_MAX {
                if !add(k as f64 * h, &mut sums, &mut buf, &mut evals) {
                    break;
                }
                k += 2;
            }
        }
        let estimate: Vec<f64> = sums.iter().map(|s| s * h * half).collect();
        if let Some(p) = &prev {
            for i in 0..dim {
                errors[i] = (estimate[i] - p[i]).abs();
            }
            let ok = (0..dim).all(|i| errors[i] <= tol * estimate[i].abs() || errors[i] == 0.0);
            if level >= MIN_LEVEL && ok {
                return QuadResult { values: estimate, errors, evals, converged: true };
            }
        }
        if level == MAX_LEVEL {
            return QuadResult { values: estimate, errors, evals, converged: false };
        }
        prev = Some(estimate);
        level += 1;
    }
}

/// Scalar `∫_a^b f(x, x − a, b − x) dx`.
pub fn tanh_sinh(mut f: impl FnMut(f64, f64, f64) -> f64, a: f64, b: f64, tol: f64) -> QuadResult {
    tanh_sinh_vec(|x, dl, dr, out| out[0] = f(x, dl, dr), 1, a, b, tol)
}

/// `∫_lo^hi f` where `hi` may be `+∞`, split at `breaks`. The integrand
/// receives `(x, x − left end of its piece)`. An infinite tail beyond
/// `c = max(last break, lo + 1)` is mapped by `x = c/τ` (`c > 0`) or
/// `x = c + (1 − τ)/τ`.
pub fn interval_vec(
    mut f: impl FnMut(f64, f64, &mut [f64]),
    dim: usize,
    lo: f64,
    hi: f64,
    breaks: &[f64],
    tol: f64,
) -> QuadResult {
    let mut pts: Vec<f64> = breaks.iter().copied().filter(|b| *b > lo && *b < hi).collect();
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    let mut nodes = vec![lo];
    nodes.extend(pts);
    if hi.is_infinite() {
        let last = *nodes.last().expect("non-empty");
        if last < lo + 1.0 {
            nodes.push(lo + 1.0);
        }
    } else {
        nodes.push(hi);
    }
    let mut total = QuadResult::zeros(dim);
    for w in nodes.windows(2) {
        let (a, b) = (w[0], w[1]);
        let r = tanh_sinh_vec(|x, dl, _dr, out| f(x, dl, out), dim, a, b, tol);
        total.absorb(&r);
    }
    if hi.is_infinite() {
        let c = *nodes.last().expect("non-empty");
        // x = c + (1 − τ)/τ maps (0, 1] onto [c, ∞)
        let r = tanh_sinh_vec(
            |tau, dl, _dr, out| {
                let x = c + (1.0 - tau) / tau;
                f(x, x - c, out);
                let jac = 1.0 / (dl * dl);
                out.iter_mut().for_each(|v| *v *= jac);
            },
            dim,
            0.0,
            1.0,
            tol,
        );
        total.absorb(&r);
    }
    total
}

/// Scalar version of [`interval_vec`].
pub fn interval(mut f: impl FnMut(f64) -> f64, lo: f64, hi: f64, breaks: &[f64], tol: f64) -> QuadResult {
    interval_vec(|x, _dl, out| out[0] = f(x), 1, lo, hi, breaks, tol)
}

/// `∫_{−∞}^{∞} f` for an integrand concentrated in `core`, split at `breaks`.
/// The core is chunked into at most 64 pieces between breaks; the tails are
/// mapped onto finite intervals.
pub fn real_line_vec(
    mut f: impl FnMut(f64, &mut [f64]),
    dim: usize,
    core: (f64, f64),
    breaks: &[f64],
    tol: f64,
) -> QuadResult {
    let mut lo = core.0;
    let mut hi = core.1;
    for b in breaks {
        lo = lo.min(*b);
        hi = hi.max(*b);
    }
    let max_len = ((hi - lo) / 64.0).max(1.0);
    let mut pts: Vec<f64> = breaks.to_vec();
    pts.push(lo);
    pts.push(hi);
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    let mut total = QuadResult::zeros(dim);
    for w in pts.windows(2) {
        let (a, b) = (w[0], w[1]);
        let pieces = ((b - a) / max_len).ceil().max(1.0) as usize;
        let step = (b - a) / pieces as f64;
        for j in 0..pieces {
            let (ca, cb) = (a + j as f64 * step, if j + 1 == pieces { b } else { a + (j + 1) as f64 * step });
            total.absorb(&tanh_sinh_vec(|x, _, _, out| f(x, out), dim, ca, cb, tol));
        }
    }
    total.absorb(&interval_vec(|s, _, out| f(lo - s, out), dim, 0.0, f64::INFINITY, &[], tol));
    total.absorb(&interval_vec(|s, _, out| f(hi + s, out), dim, 0.0, f64::INFINITY, &[], tol));
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn polynomial_and_endpoint_singularities() {
        let r = tanh_sinh(|x, _, _| x * x, 0.0, 1.0, 1e-14);
        assert!((r.value() - 1.0 / 3.0).abs() < 1e-15);
        // ∫_0^1 x^{-1/2} = 2, evaluated through the offset
        let r = tanh_sinh(|_, dl, _| dl.powf(-0.5), 0.0, 1.0, 1e-13);
        assert!((r.value() - 2.0).abs() < 1e-12, "{}", r.value());
        // ∫_0^1 ln(1 − x) = −1 using the right offset
        let r = tanh_sinh(|_, _, dr| dr.ln(), 0.0, 1.0, 1e-13);
        assert!((r.value() + 1.0).abs() < 1e-12);
        assert!(r.converged);
    }

    #[test]
    fn half_line_and_real_line() {
        let r = interval(|x| (-x).exp(), 0.0, f64::INFINITY, &[], 1e-13);
        assert!((r.value() - 1.0).abs() < 1e-12);
        // slowly decaying algebraic tail: ∫_1^∞ x^{-2} = 1
        let r = interval(|x| x.powi(-2), 1.0, f64::INFINITY, &[3.0], 1e-13);
        assert!((r.value() - 1.0).abs() < 1e-12);
        let r = real_line_vec(|x, out| out[0] = (-x * x).exp(), 1, (-6.0, 6.0), &[0.3], 1e-13);
        assert!((r.value() - PI.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn kinked_integrand_split_at_the_kink() {
        let r = interval(|x| (x - 0.3).abs(), 0.0, 1.0, &[0.3], 1e-13);
        assert!((r.value() - (0.045 + 0.245)).abs() < 1e-14);
    }
}
