//! Monte Carlo estimates of sphere integrals `∫_℘ h dσ` and of full group
//! integrals, used to validate the polar decomposition
//! `∫_G f dx = ∫₀^∞ ∫_℘ f(ry) r^{Q−1} dσ(y) dr`.
//!
//! Draws are uniform in a box; the box is split into fixed-size blocks, each
//! with its own ChaCha stream keyed by `(seed, block)`, so the estimate does
//! not depend on the number of worker threads.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::radial::radial_integral;
use crate::error::{Error, Result};
use crate::group::HomogeneousGroup;
use crate::radial::RadialProfile;

/// Radii `(R₁, R₂)` of the sampling shell `R₁ < |x| < R₂`.
pub const SHELL: (f64, f64) = (1.0, 2.0);
const BLOCK: u64 = 1 << 14;

/// Estimate of `∫_℘ h dσ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SphereMeasureEstimate {
    pub value: f64,
    pub std_error: f64,
    pub samples: u64,
}

/// A Monte Carlo estimate with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McEstimate {
    pub value: f64,
    pub std_error: f64,
    pub samples: u64,
    /// Draws that landed in the region of interest.
    pub accepted: u64,
}

/// Factorized estimate `(∫₀^∞ φ r^{Q−1} dr)·(∫_℘ h dσ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeparableEstimate {
    pub value: f64,
    pub std_error: f64,
    pub radial: f64,
    pub sphere: SphereMeasureEstimate,
}

/// Running mean and sum of squared deviations.
#[derive(Debug, Clone, Copy, Default)]
struct Welford {
    n: u64,
    mean: f64,
    m2: f64,
    accepted: u64,
}

impl Welford {
    fn push(&mut self, x: f64) {
        self.n += 1;
        let d = x - self.mean;
        self.mean += d / self.n as f64;
        self.m2 += d * (x - self.mean);
    }

    fn merge(self, o: Welford) -> Welford {
        if self.n == 0 {
            return o;
        }
        if o.n == 0 {
            return self;
        }
        let n = self.n + o.n;
        let d = o.mean - self.mean;
        Welford {
            n,
            mean: self.mean + d * o.n as f64 / n as f64,
            m2: self.m2 + o.m2 + d * d * (self.n as f64) * (o.n as f64) / n as f64,
            accepted: self.accepted + o.accepted,
        }
    }

    fn std_error(&self) -> f64 {
        if self.n < 2 {
            return 0.0;
        }
        (self.m2 / (self.n - 1) as f64 / self.n as f64).sqrt()
    }
}

/// Uniform draws in `Π [−b_i, b_i]`; `sample(x)` returns `Some(value)` for
/// draws in the region of interest and `None` otherwise (counted as zero).
fn box_mc(
    half_widths: &[f64],
    samples: u64,
    seed: u64,
    sample: impl Fn(&[f64]) -> Option<f64> + Sync,
) -> Welford {
    let blocks = samples.div_ceil(BLOCK);
    let stats: Vec<Welford> = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(b);
            let count = BLOCK.min(samples - b * BLOCK);
            let mut x = vec![0.0; half_widths.len()];
            let mut w = Welford::default();
            for _ in 0..count {
                for (xi, hw) in x.iter_mut().zip(half_widths) {
                    *xi = hw * (2.0 * rng.gen::<f64>() - 1.0);
                }
                match sample(&x) {
                    Some(v) => {
                        w.accepted += 1;
                        w.push(v);
                    }
                    None => w.push(0.0),
                }
            }
            w
        })
        .collect();
    stats.into_iter().fold(Welford::default(), Welford::merge)
}

fn box_half_widths(g: &HomogeneousGroup, radius: f64) -> Vec<f64> {
    // The gauge ball of radius ρ lies in Π[−ρ^{ν_i}, ρ^{ν_i}] for every
    // built-in quasi-norm, since each coordinate term is at most |x|.
    g.weights().iter().map(|nu| radius.powf(*nu)).collect()
}

/// `∫_℘ h dσ = Q/(R₂^Q − R₁^Q) ∫_{R₁<|x|<R₂} h(x/|x|) dx`, with the shell
/// integral estimated from `samples` uniform draws in its bounding box.
pub fn sphere_integral_mc(
    g: &HomogeneousGroup,
    h: impl Fn(&[f64]) -> f64 + Sync,
    samples: u64,
    seed: u64,
) -> Result<SphereMeasureEstimate> {
    if samples == 0 {
        return Err(Error::Argument("sphere estimate needs at least one sample".into()));
    }
    let (r1, r2) = SHELL;
    let hw = box_half_widths(g, r2);
    let volume: f64 = hw.iter().map(|b| 2.0 * b).product();
    let w = box_mc(&hw, samples, seed, |x| {
        let r = g.quasi_norm_unchecked(x);
        if r > r1 && r < r2 {
            g.project_to_sphere(x).map(|y| h(&y))
        } else {
            None
        }
    });
    if w.accepted == 0 {
        return Err(Error::Geometry(format!(
            "no draw out of {samples} landed in the shell {r1} < |x| < {r2}"
        )));
    }
    let q = g.q();
    let factor = volume * q / (r2.powf(q) - r1.powf(q));
    Ok(SphereMeasureEstimate { value: factor * w.mean, std_error: factor * w.std_error(), samples })
}

/// Direct estimate of `∫_G f dx` for `f` negligible outside the gauge ball of
/// radius `radius`.
pub fn direct_group_integral_mc(
    g: &HomogeneousGroup,
    f: impl Fn(&[f64]) -> f64 + Sync,
    radius: f64,
    samples: u64,
    seed: u64,
) -> Result<McEstimate> {
    if !(radius.is_finite() && radius > 0.0) {
        return Err(Error::Argument(format!("sampling radius must be positive, got {radius}")));
    }
    if samples == 0 {
        return Err(Error::Argument("direct estimate needs at least one sample".into()));
    }
    let hw = box_half_widths(g, radius);
    let volume: f64 = hw.iter().map(|b| 2.0 * b).product();
    let w = box_mc(&hw, samples, seed, |x| {
        let r = g.quasi_norm_unchecked(x);
        (r < radius).then(|| f(x))
    });
    if w.accepted == 0 {
        return Err(Error::Geometry(format!("no draw out of {samples} landed in the ball |x| < {radius}")));
    }
    Ok(McEstimate { value: volume * w.mean, std_error: volume * w.std_error(), samples, accepted: w.accepted })
}

/// `∫_G f dx` for `f(ry) = φ(r) h(y)` by the polar factorization.
pub fn separable_group_integral(
    g: &HomogeneousGroup,
    phi: &RadialProfile,
    h: impl Fn(&[f64]) -> f64 + Sync,
    samples: u64,
    seed: u64,
) -> Result<SeparableEstimate> {
    let radial = radial_integral(g, phi)?.value.re;
    let sphere = sphere_integral_mc(g, h, samples, seed)?;
    Ok(SeparableEstimate {
        value: radial * sphere.value,
        std_error: radial.abs() * sphere.std_error,
        radial,
        sphere,
    })
}

/// `|a − b| / √(σ_a² + σ_b²)`: the distance of two independent estimates in
/// pooled standard errors.
pub fn pooled_deviation(a: f64, sa: f64, b: f64, sb: f64) -> f64 {
    let s = (sa * sa + sb * sb).sqrt();
    if s == 0.0 {
        if a == b {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        (a - b).abs() / s
    }
}
