use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

type Plans = (Arc<dyn Fft<f64>>, Arc<dyn Fft<f64>>);

fn plans(n: usize) -> Plans {
    static CACHE: OnceLock<Mutex<HashMap<usize, Plans>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().expect("fft plan cache poisoned");
    guard
        .entry(n)
        .or_insert_with(|| {
            let mut planner = FftPlanner::new();
            (planner.plan_fft_forward(n), planner.plan_fft_inverse(n))
        })
        .clone()
}

/// Angular wavenumbers `ξ_k` of an `n`-point periodic grid with spacing `h`,
/// in FFT order. The Nyquist mode is reported with a positive sign.
pub fn wavenumbers(n: usize, h: f64) -> Vec<f64> {
    let scale = 2.0 * PI / (n as f64 * h);
    (0..n)
        .map(|k| if k <= n / 2 { k as f64 * scale } else { (k as f64 - n as f64) * scale })
        .collect()
}

/// Forward transform, normalised so that `values = Σ_k c_k e^{iξ_k (u − u_0)}`.
pub(crate) fn forward(values: &[Complex64]) -> Vec<Complex64> {
    let n = values.len();
    let (fwd, _) = plans(n);
    let mut buf = values.to_vec();
    fwd.process(&mut buf);
    let inv_n = 1.0 / n as f64;
    buf.iter_mut().for_each(|c| *c *= inv_n);
    buf
}

pub(crate) fn inverse(coeffs: &[Complex64]) -> Vec<Complex64> {
    let (_, inv) = plans(coeffs.len());
    let mut buf = coeffs.to_vec();
    inv.process(&mut buf);
    buf
}

/// Applies the Fourier multiplier `symbol(ξ)` to periodic samples with spacing `h`.
///
/// At the Nyquist mode the average of `symbol(±ξ_N)` is used, so odd symbols
/// such as `iξ` annihilate it and even symbols act unchanged.
pub fn apply_symbol(values: &[Complex64], h: f64, symbol: impl Fn(f64) -> Complex64) -> Vec<Complex64> {
    let n = values.len();
    let xi = wavenumbers(n, h);
    let mut c = forward(values);
    for (k, ck) in c.iter_mut().enumerate() {
        let m = if n.is_multiple_of(2) && k == n / 2 {
            0.5 * (symbol(xi[k]) + symbol(-xi[k]))
        } else {
            symbol(xi[k])
        };
        *ck *= m;
    }
    inverse(&c)
}

/// Evaluates the trigonometric interpolant of periodic coefficients at offset
/// `t = u − u_0`.
pub(crate) fn interpolate(coeffs: &[Complex64], h: f64, t: f64) -> Complex64 {
    let n = coeffs.len();
    let xi = wavenumbers(n, h);
    let mut acc = Complex64::new(0.0, 0.0);
    for k in 0..n {
        if k == n / 2 {
            // split the Nyquist mode symmetrically between ±ξ_N
            acc += coeffs[k] * (xi[k] * t).cos();
        } else {
            acc += coeffs[k] * Complex64::from_polar(1.0, xi[k] * t);
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derivative_of_a_periodic_gaussian() {
        let n = 256;
        let (a, b) = (-10.0, 10.0);
        let h = (b - a) / n as f64;
        let u: Vec<f64> = (0..n).map(|j| a + j as f64 * h).collect();
        let f: Vec<Complex64> = u.iter().map(|x| Complex64::new((-x * x).exp(), 0.0)).collect();
        let df = apply_symbol(&f, h, |xi| Complex64::new(0.0, xi));
        for (x, d) in u.iter().zip(&df) {
            assert!((d.re + 2.0 * x * (-x * x).exp()).abs() < 1e-12);
            assert!(d.im.abs() < 1e-12);
        }
        let c = forward(&f);
        let val = interpolate(&c, h, 0.3 - a);
        assert!((val.re - (-0.09f64).exp()).abs() < 1e-13);
    }
}
