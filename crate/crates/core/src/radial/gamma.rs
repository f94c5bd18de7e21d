use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// `Γ(z)` for complex `z` by the Lanczos approximation (`g = 7`), with the
/// reflection formula for `Re z < 1/2`.
pub fn complex_gamma(z: Complex64) -> Result<Complex64> {
    if z.im == 0.0 && z.re <= 0.0 && z.re == z.re.round() {
        return Err(Error::Domain(format!("Γ has a pole at {}", z.re)));
    }
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::Argument(format!("Γ argument must be finite, got {z}")));
    }
    Ok(gamma_unchecked(z))
}

fn gamma_unchecked(z: Complex64) -> Complex64 {
    if z.re < 0.5 {
        let s = (z * PI).sin();
        return PI / (s * gamma_unchecked(Complex64::new(1.0, 0.0) - z));
    }
    if z.im == 0.0 && z.re == z.re.round() && z.re <= 171.0 {
        // exact factorials keep integer arguments exact
        let n = z.re as u32;
        return Complex64::new((1..n).map(|i| i as f64).product(), 0.0);
    }
    let z = z - 1.0;
    let mut a = Complex64::new(LANCZOS_COEFFS[0], 0.0);
    for (i, c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        a += *c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    // √(2π)·t^{z+1/2}·e^{−t}·a, assembled in log space to avoid overflow
    let log = 0.5 * (2.0 * PI).ln() + (z + 0.5) * t.ln() - t + a.ln();
    log.exp()
}

/// The constant `C(b, k) = Γ(k+1)/|Γ(b)Γ(k−b)| · 2^{k−Re b}/(Re b·(k−Re b))`
/// of the fractional moment inequality, for `0 < Re b < k`.
pub fn embedding_constant(b: Complex64, k: u32) -> Result<f64> {
    let kf = k as f64;
    if !(b.re > 0.0 && b.re < kf) {
        return Err(Error::Domain(format!("C(b, k) needs 0 < Re b < k, got b = {b}, k = {k}")));
    }
    let num = complex_gamma(Complex64::new(kf + 1.0, 0.0))?.re;
    let den = (complex_gamma(b)? * complex_gamma(Complex64::new(kf, 0.0) - b)?).norm();
    Ok(num / den * 2f64.powf(kf - b.re) / (b.re * (kf - b.re)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn classical_values() {
        assert_eq!(complex_gamma(c(4.0)).unwrap(), c(6.0));
        let half = complex_gamma(c(0.5)).unwrap();
        assert!((half.re - PI.sqrt()).abs() < 1e-14 * PI.sqrt());
        let neg = complex_gamma(c(-0.5)).unwrap();
        assert!((neg.re + 2.0 * PI.sqrt()).abs() < 1e-13);
        assert!(matches!(complex_gamma(c(0.0)), Err(Error::Domain(_))));
        assert!(matches!(complex_gamma(c(-3.0)), Err(Error::Domain(_))));
    }

    #[test]
    fn functional_equation_off_the_axis() {
        for z in [Complex64::new(0.3, 2.0), Complex64::new(-4.7, 1.1), Complex64::new(20.0, -15.0)] {
            let lhs = complex_gamma(z + 1.0).unwrap();
            let rhs = z * complex_gamma(z).unwrap();
            assert!((lhs - rhs).norm() <= 1e-12 * lhs.norm(), "{z}");
        }
        // |Γ(iy)|² = π/(y sinh πy)
        let y = 1.5;
        let g = complex_gamma(Complex64::new(0.0, y)).unwrap();
        let exact = PI / (y * (PI * y).sinh());
        assert!((g.norm_sqr() - exact).abs() < 1e-13 * exact);
    }

    #[test]
    fn large_real_argument_matches_factorial() {
        let g = complex_gamma(c(30.5)).unwrap().re;
        // Γ(30.5) = Γ(0.5)·Π_{j=0}^{29}(j + 1/2)
        let exact = PI.sqrt() * (0..30).map(|j| j as f64 + 0.5).product::<f64>();
        assert!((g - exact).abs() < 1e-12 * exact);
    }

    #[test]
    fn constant_at_one_half() {
        let v = embedding_constant(c(0.5), 1).unwrap();
        assert!((v - 4.0 * 2f64.sqrt() / PI).abs() < 1e-12);
        assert!(embedding_constant(c(1.0), 1).is_err());
    }
}
