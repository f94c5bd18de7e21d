use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::log_scale::{log_scale_integral_vec, LogPoint};
use super::tanh_sinh::{real_line_vec, DEFAULT_TOL};
use super::{GridMeta, Level, Method, RefinePolicy};
use crate::error::{Error, Result};
use crate::group::HomogeneousGroup;
use crate::radial::{LogGrid, RadialProfile};

/// Relative size of the integrand at the grid ends above which a trapezoid
/// sum is rejected as truncated.
const DECAY_TOLERANCE: f64 = 1e-14;

/// `e^{c·u}`, with `c = 0` giving 1 even at infinite `u`.
pub(crate) fn exp_weight(c: f64, u: f64) -> f64 {
    if c == 0.0 {
        1.0
    } else {
        (c * u).exp()
    }
}

/// Value of a radial integral together with its refinement record.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialIntegral {
    pub value: Complex64,
    pub meta: GridMeta,
}

fn trapezoid(grid: &LogGrid, samples: impl Iterator<Item = Complex64>) -> Result<Complex64> {
    let v: Vec<Complex64> = samples.collect();
    let peak = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let n = v.len();
    if peak > 0.0 && v[0].norm().max(v[n - 1].norm()) > DECAY_TOLERANCE * peak {
        return Err(Error::Accuracy(format!(
            "integrand does not decay inside [{}, {}]",
            grid.u_min(),
            grid.u_max()
        )));
    }
    Ok(v.iter().sum::<Complex64>() * grid.h())
}

/// Trapezoid sums on successively refined grids until the relative change
/// drops below the policy tolerance.
pub(crate) fn refine_trapezoid(
    profile: &RadialProfile,
    policy: &RefinePolicy,
    mut integrand: impl FnMut(&RadialProfile) -> Result<Complex64>,
) -> Result<(Complex64, GridMeta)> {
    let mut current = profile.clone();
    let mut value = integrand(&current)?;
    let mut levels = vec![Level { n: current.grid().len(), value: value.norm() }];
    if profile.closed_form().is_none() {
        // The samples are the data: the trapezoid sum integrates their
        // trigonometric interpolant exactly.
        return Ok((value, GridMeta { method: Method::Trapezoid, levels, converged: true, error_estimate: 0.0 }));
    }
    let mut change = f64::INFINITY;
    for _ in 0..policy.max_doublings {
        let Some(grid) = current.grid().refined() else { break };
        current = profile.resample(grid)?;
        let next = integrand(&current)?;
        change = (next - value).norm();
        value = next;
        levels.push(Level { n: grid.len(), value: value.norm() });
        if change <= policy.tol * value.norm() || change == 0.0 {
            return Ok((value, GridMeta { method: Method::Trapezoid, levels, converged: true, error_estimate: change }));
        }
    }
    Ok((value, GridMeta { method: Method::Trapezoid, levels, converged: false, error_estimate: change }))
}

/// `∫₀^∞ ψ(r) r^{Q−1} dr`, i.e. `∫ ψ(e^u) e^{Qu} du`.
pub fn radial_integral(g: &HomogeneousGroup, psi: &RadialProfile) -> Result<RadialIntegral> {
    radial_integral_with(g, psi, &RefinePolicy::default())
}

pub fn radial_integral_with(
    g: &HomogeneousGroup,
    psi: &RadialProfile,
    policy: &RefinePolicy,
) -> Result<RadialIntegral> {
    let q = g.q();
    if let Some(cf) = psi.closed_form().filter(|c| !c.kinks().is_empty()) {
        let grid = psi.grid();
        let r = real_line_vec(
            |u, out| {
                let z = cf.value(u) * exp_weight(q, u);
                out[0] = z.re;
                out[1] = z.im;
            },
            2,
            (grid.u_min(), grid.u_max()),
            cf.kinks(),
            DEFAULT_TOL,
        );
        return Ok(RadialIntegral { value: Complex64::new(r.values[0], r.values[1]), meta: GridMeta::from_quad(&r) });
    }
    let (value, meta) = refine_trapezoid(psi, policy, |p| {
        trapezoid(p.grid(), p.grid().nodes().zip(p.values()).map(|(u, v)| v * (q * u).exp()))
    })?;
    Ok(RadialIntegral { value, meta })
}

/// Argument of the logarithmic weights: `R/|x|` or `eR/|x|`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LogArgument {
    Plain,
    Shifted,
}

/// Part of the group over which a norm is taken.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "radius", rename_all = "snake_case")]
pub enum Region {
    Whole,
    /// `|x| < radius`
    Ball(f64),
    /// `|x| > radius`
    Complement(f64),
}

/// The weight `|x|^{−αp} |log(A/|x|)|^{λ₁p} |log|log(A/|x|)||^{λ₂p}` with
/// `A = R` or `eR`, used as `‖φ‖ = (∫ |φ|^p · weight dx)^{1/p}`.
///
/// A log factor is inactive when its exponent is zero.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeightSpec {
    pub p: f64,
    pub alpha: f64,
    pub lambda1: f64,
    pub lambda2: f64,
    pub scale: f64,
    pub log_argument: LogArgument,
    pub region: Region,
    /// `|℘|`; when present it is folded into the norm.
    pub sphere_mass: Option<f64>,
}

impl WeightSpec {
    /// Pure power weight `|x|^{−αp}` on the whole group.
    pub fn power(p: f64, alpha: f64) -> Self {
        Self {
            p,
            alpha,
            lambda1: 0.0,
            lambda2: 0.0,
            scale: 1.0,
            log_argument: LogArgument::Shifted,
            region: Region::Whole,
            sphere_mass: None,
        }
    }

    pub fn with_logs(mut self, lambda1: f64, lambda2: f64, scale: f64, arg: LogArgument) -> Self {
        self.lambda1 = lambda1;
        self.lambda2 = lambda2;
        self.scale = scale;
        self.log_argument = arg;
        self
    }

    pub fn in_region(mut self, region: Region) -> Self {
        self.region = region;
        self
    }

    pub fn with_sphere_mass(mut self, mass: f64) -> Self {
        self.sphere_mass = Some(mass);
        self
    }

    pub fn has_logs(&self) -> bool {
        self.lambda1 != 0.0 || self.lambda2 != 0.0
    }

    /// `log A`.
    pub fn ln_anchor(&self) -> f64 {
        self.scale.ln() + if self.log_argument == LogArgument::Shifted { 1.0 } else { 0.0 }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.p > 1.0 && self.p.is_finite()) {
            return Err(Error::Domain(format!("weighted norm needs p > 1, got {}", self.p)));
        }
        if !(self.scale > 0.0 && self.scale.is_finite()) {
            return Err(Error::Domain(format!("weighted norm needs R > 0, got {}", self.scale)));
        }
        match self.region {
            Region::Ball(r) | Region::Complement(r) if !(r > 0.0 && r.is_finite()) => {
                Err(Error::Domain(format!("region radius must be positive, got {r}")))
            }
            _ => Ok(()),
        }
    }

    fn u_range(&self) -> (f64, f64) {
        match self.region {
            Region::Whole => (f64::NEG_INFINITY, f64::INFINITY),
            Region::Ball(r) => (f64::NEG_INFINITY, r.ln()),
            Region::Complement(r) => (r.ln(), f64::INFINITY),
        }
    }
}

/// A weighted norm with the raw integral it came from.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedNorm {
    /// `(∫ |φ|^p·weight · r^{Q−1} dr · mass)^{1/p}`.
    pub value: f64,
    /// The radial integral `∫ |φ|^p·weight · r^{Q−1} dr` (no sphere mass).
    pub integral: f64,
    pub meta: GridMeta,
}

/// Checks that the weight is integrable at its singular radii and at the ends
/// for this profile, naming the violated exponent condition otherwise.
fn check_integrability(g: &HomogeneousGroup, phi: &RadialProfile, w: &WeightSpec) -> Result<()> {
    let (lo, hi) = w.u_range();
    let inside = |u: f64| u > lo && u < hi;
    let ln_a = w.ln_anchor();
    let (l1p, l2p) = (w.lambda1 * w.p, w.lambda2 * w.p);
    let peak = phi.values().iter().map(|v| v.norm()).fold(0.0, f64::max);
    let nonzero_at = |u: f64| phi.eval(u).norm() > 1e-12 * peak;
    if w.has_logs() && inside(ln_a) && nonzero_at(ln_a) {
        let ok = l1p > -1.0 || (l1p == -1.0 && l2p < -1.0);
        if !ok {
            return Err(Error::Domain(format!(
                "weight not integrable at |x| = A: need λ₁p > −1 (or λ₁p = −1 and λ₂p < −1), got λ₁p = {l1p}, λ₂p = {l2p}"
            )));
        }
    }
    if w.lambda2 != 0.0 {
        for u0 in [ln_a - 1.0, ln_a + 1.0] {
            if !inside(u0) {
                continue;
            }
            // a profile vanishing at the point contributes at least |L ∓ 1|^p
            let order = if nonzero_at(u0) { 0.0 } else { w.p };
            if l2p + order <= -1.0 {
                return Err(Error::Domain(format!(
                    "weight not integrable where |log(A/|x|)| = 1: need λ₂p > −1, got λ₂p = {l2p}"
                )));
            }
        }
    }
    // behaviour at 0 and ∞ for profiles that do not decay there
    let q = g.q();
    let ap = w.alpha * w.p;
    let grid = phi.grid();
    let edge = |u: f64| phi.eval(u).norm() > 1e-12 * peak;
    let tail_ok = |c: f64| c > 0.0 || (c == 0.0 && (l1p < -1.0 || (l1p == -1.0 && l2p < -1.0)));
    if lo.is_infinite() && edge(grid.u_min()) && !tail_ok(q - ap) {
        return Err(Error::Domain(format!(
            "weight not integrable at the origin: need Q − αp > 0 (or a decaying log factor), got Q − αp = {}",
            q - ap
        )));
    }
    if hi.is_infinite() && edge(grid.u_max() - grid.h()) && !tail_ok(ap - q) {
        return Err(Error::Domain(format!(
            "weight not integrable at infinity: need αp − Q > 0, got αp − Q = {}",
            ap - q
        )));
    }
    Ok(())
}

/// Weighted `L^p` norm of a radial profile (radial factor; the sphere mass is
/// folded in only when the weight carries it).
pub fn weighted_lp_norm(g: &HomogeneousGroup, phi: &RadialProfile, w: &WeightSpec) -> Result<WeightedNorm> {
    w.validate()?;
    check_integrability(g, phi, w)?;
    let q = g.q();
    let p = w.p;
    let c = q - w.alpha * p;
    let (lo, hi) = w.u_range();
    let kinks: Vec<f64> = phi.closed_form().map(|f| f.kinks().to_vec()).unwrap_or_default();
    let (integral, meta) = if w.has_logs() {
        let (l1p, l2p) = (w.lambda1 * p, w.lambda2 * p);
        let r = log_scale_integral_vec(
            w.ln_anchor(),
            |pt: LogPoint, out| {
                let v = phi.eval(pt.u).norm();
                if v == 0.0 {
                    out[0] = 0.0;
                    return;
                }
                let cu = if c == 0.0 { 0.0 } else { c * pt.u };
                let lw = p * v.ln() + cu + (l1p + 1.0) * pt.ln_abs_l;
                out[0] = lw.exp() * if l2p == 0.0 { 1.0 } else { pt.ln_abs_l.abs().powf(l2p) };
            },
            1,
            lo,
            hi,
            &kinks,
            DEFAULT_TOL,
        );
        (r.value(), GridMeta::from_quad(&r))
    } else if w.region != Region::Whole || !kinks.is_empty() {
        let grid = phi.grid();
        let mut breaks = kinks.clone();
        breaks.extend([lo, hi].into_iter().filter(|x| x.is_finite()));
        let r = real_line_vec(
            |u, out| {
                out[0] = if u > lo && u < hi { phi.eval(u).norm().powf(p) * exp_weight(c, u) } else { 0.0 };
            },
            1,
            (grid.u_min().max(lo.min(grid.u_max() - 1.0)), grid.u_max().min(hi.max(grid.u_min() + 1.0))),
            &breaks,
            DEFAULT_TOL,
        );
        (r.value(), GridMeta::from_quad(&r))
    } else {
        let (v, meta) = refine_trapezoid(phi, &RefinePolicy::default(), |prof| {
            trapezoid(
                prof.grid(),
                prof.grid().nodes().zip(prof.values()).map(|(u, v)| Complex64::new(v.norm().powf(p) * (c * u).exp(), 0.0)),
            )
        })?;
        (v.re, meta)
    };
    let mass = w.sphere_mass.unwrap_or(1.0);
    Ok(WeightedNorm { value: (integral * mass).max(0.0).powf(1.0 / p), integral, meta })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jet::Jet;
    use crate::radial::ClosedForm;
    use std::f64::consts::PI;

    #[test]
    fn gamma_moments() {
        let g = HomogeneousGroup::heisenberg();
        let psi = RadialProfile::from_closed_form(LogGrid::default(), ClosedForm::new(|x: Jet| (-(x.exp())).exp()), 4.0)
            .unwrap();
        let r = radial_integral(&g, &psi).unwrap();
        assert!((r.value.re - 6.0).abs() < 1e-9 * 6.0);
        assert!(r.meta.converged);
    }

    #[test]
    fn gaussian_power_weight() {
        let g = HomogeneousGroup::heisenberg();
        let phi = RadialProfile::from_closed_form(LogGrid::default(), ClosedForm::new(|x: Jet| (-(x * x)).exp()), 0.0)
            .unwrap();
        let n = weighted_lp_norm(&g, &phi, &WeightSpec::power(2.0, 1.0)).unwrap();
        let exact = ((PI / 2.0).sqrt() * 0.5f64.exp()).sqrt();
        assert!((n.value - exact).abs() < 1e-12 * exact);
        let m = weighted_lp_norm(&g, &phi, &WeightSpec::power(2.0, 1.0).with_sphere_mass(4.0)).unwrap();
        assert!((m.value - 2.0 * exact).abs() < 1e-12 * exact);
    }

    #[test]
    fn non_integrable_weights_are_domain_errors() {
        let g = HomogeneousGroup::euclidean(3);
        let phi = RadialProfile::from_closed_form(LogGrid::default(), ClosedForm::new(|x: Jet| (-(x * x)).exp()), 0.0)
            .unwrap();
        let w = WeightSpec::power(2.0, 0.0).with_logs(-1.0, 0.0, 1.0, LogArgument::Plain);
        assert!(matches!(weighted_lp_norm(&g, &phi, &w), Err(Error::Domain(_))));
        let w = WeightSpec::power(2.0, 0.0).with_logs(0.0, -1.0, 1.0, LogArgument::Plain);
        assert!(matches!(weighted_lp_norm(&g, &phi, &w), Err(Error::Domain(_))));
        assert!(matches!(weighted_lp_norm(&g, &phi, &WeightSpec::power(1.0, 0.0)), Err(Error::Domain(_))));
    }

    #[test]
    fn region_restriction_matches_log_split() {
        // ∫_{u<0} e^{−2u²} e^{3u} du via the region path against the closed form
        let g = HomogeneousGroup::euclidean(3);
        let phi = RadialProfile::from_closed_form(LogGrid::default(), ClosedForm::new(|x: Jet| (-(x * x)).exp()), 0.0)
            .unwrap();
        let w = WeightSpec::power(2.0, 0.0).in_region(Region::Ball(1.0));
        let n = weighted_lp_norm(&g, &phi, &w).unwrap();
        // ∫_{−∞}^0 e^{−2u²+3u} du = √(π/8) e^{9/8} erfc(3/(2√2))
        let exact = (PI / 8.0).sqrt() * (9.0f64 / 8.0).exp() * erfc(3.0 / (2.0 * 2f64.sqrt()));
        assert!((n.integral - exact).abs() < 1e-10 * exact, "{} vs {}", n.integral, exact);
    }

    /// Complementary error function from the Maclaurin series of erf (test oracle).
    fn erfc(x: f64) -> f64 {
        let mut term = x;
        let mut sum = x;
        for n in 1..80 {
            term *= -x * x / n as f64;
            sum += term / (2 * n + 1) as f64;
        }
        1.0 - 2.0 / PI.sqrt() * sum
    }
}
