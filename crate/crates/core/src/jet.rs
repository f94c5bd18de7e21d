//! Truncated Taylor series ("jets") over `ℂ`, used to attach exact
//! derivatives in the log-radius to closed-form profiles.
//!
//! A jet of order `K` stores `c_j = f^{(j)}(u)/j!` for `j = 0..=K`. Because
//! `E = d/du` in the log-radius, the `k`-th Euler power of a closed form at
//! `u` is `k!·c_k`.

use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64;

/// Largest supported jet order.
pub const MAX_ORDER: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet {
    order: usize,
    c: [Complex64; MAX_ORDER + 1],
}

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

impl Jet {
    /// The independent variable `u` (derivative 1).
    pub fn var(u: f64, order: usize) -> Self {
        assert!(order <= MAX_ORDER, "jet order {order} exceeds {MAX_ORDER}");
        let mut c = [ZERO; MAX_ORDER + 1];
        c[0] = Complex64::new(u, 0.0);
        if order >= 1 {
            c[1] = Complex64::new(1.0, 0.0);
        }
        Self { order, c }
    }

    pub fn constant(z: impl Into<Complex64>, order: usize) -> Self {
        let mut c = [ZERO; MAX_ORDER + 1];
        c[0] = z.into();
        Self { order, c }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn value(&self) -> Complex64 {
        self.c[0]
    }

    /// Real part of the value; closed forms branch on it.
    pub fn re(&self) -> f64 {
        self.c[0].re
    }

    /// `j`-th derivative.
    pub fn derivative(&self, j: usize) -> Complex64 {
        if j > self.order {
            return ZERO;
        }
        let fact: f64 = (1..=j).map(|i| i as f64).product();
        self.c[j] * fact
    }

    pub fn coeff(&self, j: usize) -> Complex64 {
        self.c[j]
    }

    fn like(&self) -> Self {
        Self { order: self.order, c: [ZERO; MAX_ORDER + 1] }
    }

    pub fn scale(mut self, s: impl Into<Complex64>) -> Self {
        let s = s.into();
        for j in 0..=self.order {
            self.c[j] *= s;
        }
        self
    }

    pub fn exp(&self) -> Self {
        let mut b = self.like();
        b.c[0] = self.c[0].exp();
        for k in 1..=self.order {
            let mut acc = ZERO;
            for j in 1..=k {
                acc += self.c[j] * b.c[k - j] * j as f64;
            }
            b.c[k] = acc / k as f64;
        }
        b
    }

    pub fn ln(&self) -> Self {
        let a0 = self.c[0];
        let mut b = self.like();
        b.c[0] = a0.ln();
        for k in 1..=self.order {
            let mut acc = ZERO;
            for j in 1..k {
                acc += b.c[j] * self.c[k - j] * j as f64;
            }
            b.c[k] = (self.c[k] - acc / k as f64) / a0;
        }
        b
    }

    /// `self^s` for a real exponent, on the principal branch.
    pub fn powf(&self, s: f64) -> Self {
        let a0 = self.c[0];
        let mut b = self.like();
        if a0 == ZERO {
            // Only the value is meaningful at a zero of the base.
            b.c[0] = if s == 0.0 { Complex64::new(1.0, 0.0) } else { ZERO };
            return b;
        }
        b.c[0] = a0.powf(s);
        for k in 1..=self.order {
            let mut acc = ZERO;
            for j in 1..=k {
                acc += self.c[j] * b.c[k - j] * (s * j as f64 - (k - j) as f64);
            }
            b.c[k] = acc / (a0 * k as f64);
        }
        b
    }

    pub fn recip(&self) -> Self {
        Jet::constant(1.0, self.order) / *self
    }

    pub fn powi(&self, n: i32) -> Self {
        if n == 0 {
            return Jet::constant(1.0, self.order);
        }
        let mut acc = *self;
        for _ in 1..n.unsigned_abs() {
            acc = acc * *self;
        }
        if n < 0 {
            acc.recip()
        } else {
            acc
        }
    }

    /// Evaluates the polynomial `Σ_j coeffs[j]·(self − self₀)^j`, i.e. composes
    /// a Taylor expansion taken at the value of `self` with `self`.
    pub fn taylor_compose(&self, coeffs: &[Complex64]) -> Self {
        let mut dx = *self;
        dx.c[0] = ZERO;
        let mut out = Jet::constant(coeffs.first().copied().unwrap_or(ZERO), self.order);
        let mut power = Jet::constant(1.0, self.order);
        for &cj in coeffs.iter().skip(1).take(self.order) {
            power = power * dx;
            out = out + power.scale(cj);
        }
        out
    }

    /// Smooth `C^∞` step: 1 for `t ≤ 0`, 0 for `t ≥ 1`, built from the
    /// `exp(−1/t)` mollifier.
    pub fn smooth_step_down(&self) -> Self {
        let t = self.re();
        if t <= 0.0 {
            return Jet::constant(1.0, self.order);
        }
        if t >= 1.0 {
            return Jet::constant(0.0, self.order);
        }
        let one = Jet::constant(1.0, self.order);
        let a = (-(self.recip())).exp();
        let b = (-((one - *self).recip())).exp();
        b / (a + b)
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(mut self, rhs: Jet) -> Jet {
        for j in 0..=self.order {
            self.c[j] += rhs.c[j];
        }
        self
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(mut self, rhs: Jet) -> Jet {
        for j in 0..=self.order {
            self.c[j] -= rhs.c[j];
        }
        self
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.scale(-1.0)
    }
}

impl Add<f64> for Jet {
    type Output = Jet;
    fn add(mut self, rhs: f64) -> Jet {
        self.c[0] += rhs;
        self
    }
}

impl Sub<f64> for Jet {
    type Output = Jet;
    fn sub(mut self, rhs: f64) -> Jet {
        self.c[0] -= rhs;
        self
    }
}

impl Mul<f64> for Jet {
    type Output = Jet;
    fn mul(self, rhs: f64) -> Jet {
        self.scale(rhs)
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, rhs: Jet) -> Jet {
        let mut out = self.like();
        for k in 0..=self.order {
            let mut acc = ZERO;
            for j in 0..=k {
                acc += self.c[j] * rhs.c[k - j];
            }
            out.c[k] = acc;
        }
        out
    }
}

impl Div for Jet {
    type Output = Jet;
    fn div(self, rhs: Jet) -> Jet {
        let mut out = self.like();
        let b0 = rhs.c[0];
        for k in 0..=self.order {
            let mut acc = self.c[k];
            for j in 1..=k {
                acc -= rhs.c[j] * out.c[k - j];
            }
            out.c[k] = acc / b0;
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() <= tol * (1.0 + b.norm())
    }

    #[test]
    fn gaussian_derivatives() {
        // f(u) = exp(-u²): f' = -2u f, f'' = (4u² - 2) f, f''' = (12u - 8u³) f
        let u = 0.7;
        let x = Jet::var(u, 4);
        let f = (-(x * x)).exp();
        let f0 = (-u * u).exp();
        assert!(close(f.derivative(1), (-2.0 * u * f0).into(), 1e-14));
        assert!(close(f.derivative(2), ((4.0 * u * u - 2.0) * f0).into(), 1e-14));
        assert!(close(f.derivative(3), ((12.0 * u - 8.0 * u * u * u) * f0).into(), 1e-14));
    }

    #[test]
    fn log_power_and_division_agree_with_finite_differences() {
        let g = |u: f64| ((u * u + 2.0).ln() * (3.0 + u).powf(-0.3)) / (1.0 + u * u);
        let u = 0.4;
        let x = Jet::var(u, 2);
        let j = ((x * x + 2.0).ln() * (x + 3.0).powf(-0.3)) / (x * x + 1.0);
        let h = 1e-4;
        let d1 = (g(u + h) - g(u - h)) / (2.0 * h);
        let d2 = (g(u + h) - 2.0 * g(u) + g(u - h)) / (h * h);
        assert!((j.derivative(1).re - d1).abs() < 1e-8);
        assert!((j.derivative(2).re - d2).abs() < 1e-6);
    }

    #[test]
    fn smooth_step_is_flat_outside_transition() {
        let below = Jet::var(-0.1, 3).smooth_step_down();
        let above = Jet::var(1.2, 3).smooth_step_down();
        assert_eq!(below.value(), Complex64::new(1.0, 0.0));
        assert_eq!(above.value(), Complex64::new(0.0, 0.0));
        assert_eq!(below.derivative(1), Complex64::new(0.0, 0.0));
        let mid = Jet::var(0.5, 1).smooth_step_down();
        assert!((mid.value().re - 0.5).abs() < 1e-15);
        assert!(mid.derivative(1).re < 0.0);
    }
}
