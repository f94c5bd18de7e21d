//! The remainder kernel `I_p(h, g) = (p − 1)∫₀¹ |ξh + (1 − ξ)g|^{p−2} ξ dξ`.

use rayon::prelude::*;

use super::tanh_sinh::{tanh_sinh, DEFAULT_TOL};
use crate::error::{Error, Result};

/// `I_p(h, g)`. For `p < 2` the integrand is singular where the segment
/// `ξh + (1 − ξ)g` crosses zero; the integral is split there and the distance
/// to the crossing is taken from the quadrature offsets. At `h = g = 0` the
/// value is `0` for `p > 2`, `1/2` for `p = 2` and `+∞` for `p < 2`.
pub fn ip_kernel(h: f64, g: f64, p: f64) -> Result<f64> {
    if !(p > 1.0 && p.is_finite()) {
        return Err(Error::Domain(format!("I_p needs p > 1, got p = {p}")));
    }
    if !(h.is_finite() && g.is_finite()) {
        return Err(Error::Argument(format!("I_p arguments must be finite, got ({h}, {g})")));
    }
    if p == 2.0 {
        return Ok(0.5);
    }
    if h == g {
        return Ok(0.5 * (p - 1.0) * h.abs().powf(p - 2.0));
    }
    let e = p - 2.0;
    let d = h - g;
    let mut total = 0.0;
    let xi0 = g / (g - h);
    if xi0 > 0.0 && xi0 < 1.0 {
        // |ξh + (1 − ξ)g| = |h − g|·|ξ − ξ₀|
        let ad = d.abs();
        total += tanh_sinh(|x, _, dr| (ad * dr).powf(e) * x, 0.0, xi0, DEFAULT_TOL).value();
        total += tanh_sinh(|x, dl, _| (ad * dl).powf(e) * x, xi0, 1.0, DEFAULT_TOL).value();
    } else {
        total += tanh_sinh(|x, _, _| (x * h + (1.0 - x) * g).abs().powf(e) * x, 0.0, 1.0, DEFAULT_TOL).value();
    }
    Ok((p - 1.0) * total)
}

/// [`ip_kernel`] over a list of `(h, g)` pairs, evaluated in parallel.
pub fn ip_kernel_many(pairs: &[(f64, f64)], p: f64) -> Result<Vec<f64>> {
    pairs.par_iter().map(|&(h, g)| ip_kernel(h, g, p)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Closed form of the kernel for `h ≠ g`, obtained by integrating the
    /// antiderivatives of `|t|^{p−2}` and `t|t|^{p−2}` along the segment.
    fn closed(h: f64, g: f64, p: f64) -> f64 {
        let s = |t: f64| t.signum() * t.abs().powf(p - 1.0);
        (p - 1.0) / (h - g).powi(2)
            * ((h.abs().powf(p) - g.abs().powf(p)) / p - g * (s(h) - s(g)) / (p - 1.0))
    }

    #[test]
    fn trivial_values() {
        assert_eq!(ip_kernel(0.3, -7.0, 2.0).unwrap(), 0.5);
        assert!((ip_kernel(1.0, 1.0, 3.7).unwrap() - 1.35).abs() < 1e-15);
        assert!((ip_kernel(1.0, 0.0, 3.0).unwrap() - 2.0 / 3.0).abs() < 1e-13);
        assert!(matches!(ip_kernel(1.0, 0.0, 1.0), Err(Error::Domain(_))));
    }

    #[test]
    fn crossing_segments_match_closed_form() {
        for &(h, g, p) in &[(1.0, -2.0, 1.5), (-0.3, 0.9, 1.2), (2.0, -1.0, 3.0), (0.5, 4.0, 1.7), (1.0, 0.0, 1.5)] {
            let v = ip_kernel(h, g, p).unwrap();
            let c = closed(h, g, p);
            assert!((v - c).abs() < 1e-11 * c.abs().max(1.0), "{h} {g} {p}: {v} vs {c}");
        }
    }

    #[test]
    fn vectorized_matches_scalar() {
        let pairs = [(1.0, 2.0), (-1.0, 0.5), (0.0, 3.0)];
        let many = ip_kernel_many(&pairs, 1.5).unwrap();
        for (i, &(h, g)) in pairs.iter().enumerate() {
            assert_eq!(many[i], ip_kernel(h, g, 1.5).unwrap());
        }
    }
}
