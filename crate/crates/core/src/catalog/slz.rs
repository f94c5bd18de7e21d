//! Critical Hardy inequality with double-logarithmic weights
//! (Sobolev–Lorentz–Zygmund embedding).
//!
//! With `L = log(eR/r) = log(eR) − u` and `σ = |log|L||`, the left integrand
//! per `dσ` is `|f − f_ref|^q σ^{−γ}` and the right one is
//! `|L|^q σ^{q−γ}|Ef|^q`; the reference value is `f(R)` inside `B(0, eR)`
//! (where `L = 1`) and `f(e²R)` outside (where `L = −1`). Near these anchors
//! `f − f_ref` is formed from a Taylor jet so that the cancellation does not
//! spoil the integrable singularity `σ^{q−γ}`.

use num_complex::Complex64;

use super::engine::roots_on;
use super::report::{margin_status, Params, SubCheck, VerificationReport};
use super::{skeleton, Context, VerifierId};
use crate::error::{Error, Result};
use crate::jet::MAX_ORDER;
use crate::quadrature::{log_scale_integral_vec, GridMeta, LogPoint};
use crate::radial::RadialProfile;
use crate::HomogeneousGroup;

/// Relative tolerance of the log-scale quadrature.
const SLZ_TOL: f64 = 1e-11;
/// Largest distance from an anchor at which the Taylor form is used.
const TAYLOR_RADIUS: f64 = 0.05;

/// The four integrals of the inequality: left and right sides on `B(0, eR)`
/// and on its complement (radial factors, `|℘| = 1`).
#[derive(Debug, Clone, PartialEq)]
pub struct SlzParts {
    pub lhs_inner: f64,
    pub lhs_outer: f64,
    pub rhs_inner: f64,
    pub rhs_outer: f64,
    pub meta: GridMeta,
}

impl SlzParts {
    pub fn lhs(&self) -> f64 {
        self.lhs_inner + self.lhs_outer
    }

    pub fn rhs(&self) -> f64 {
        self.rhs_inner + self.rhs_outer
    }
}

pub(crate) fn check_slz_exponents(q: f64, gamma: f64, radius: f64) -> Result<()> {
    if !(gamma > 1.0 && gamma.is_finite()) {
        return Err(Error::Domain(format!("gamma: need 1 < γ < ∞, got γ = {gamma}")));
    }
    if !(q > 1.0_f64.max(gamma - 1.0) && q.is_finite()) {
        return Err(Error::Domain(format!("q: need max(1, γ−1) < q < ∞, got q = {q}, γ = {gamma}")));
    }
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::Domain(format!("R: need R > 0, got R = {radius}")));
    }
    Ok(())
}

/// Values and first derivatives of a profile, with the profile frozen at its
/// boundary values outside the grid.
struct Evaluator<'a> {
    phi: &'a RadialProfile,
    lo: f64,
    hi: f64,
}

impl Evaluator<'_> {
    fn value(&self, u: f64) -> Complex64 {
        let u = u.clamp(self.lo, self.hi);
        match self.phi.closed_form() {
            Some(cf) => cf.value(u),
            None => self.phi.eval(u),
        }
    }

    fn derivative(&self, u: f64) -> Complex64 {
        if u < self.lo || u > self.hi {
            return Complex64::new(0.0, 0.0);
        }
        match self.phi.closed_form().filter(|c| c.has_euler()) {
            Some(cf) => cf.euler(u, 1),
            None => self.phi.euler_eval(u, 1),
        }
    }
}

/// `f(u0 + δ) − f(u0)` for small `δ` from the Taylor jet at `c = u0 ± η`
/// (on the side of `δ`), with `(u−c)^j − (u0−c)^j` factored through `δ`.
struct AnchorJet {
    u0: f64,
    radius: f64,
    /// Jets on the left and right of the anchor: (centre, coefficients).
    sides: Option<[(f64, [Complex64; MAX_ORDER + 1]); 2]>,
}

impl AnchorJet {
    fn new(phi: &RadialProfile, u0: f64) -> Self {
        let kinks: &[f64] = phi.closed_form().map(|c| c.kinks()).unwrap_or(&[]);
        let gap = kinks
            .iter()
            .map(|k| (k - u0).abs())
            .filter(|d| *d > 1e-12)
            .fold(f64::INFINITY, f64::min);
        let radius = TAYLOR_RADIUS.min(0.5 * gap);
        let sides = phi.closed_form().filter(|c| c.has_euler()).map(|cf| {
            [-1.0, 1.0].map(|s| {
                let c = u0 + s * 0.5 * radius;
                let jet = cf.jet(c, MAX_ORDER);
                let mut t = [Complex64::new(0.0, 0.0); MAX_ORDER + 1];
                for (j, tj) in t.iter_mut().enumerate() {
                    *tj = jet.coeff(j);
                }
                (c, t)
            })
        });
        Self { u0, radius, sides }
    }

    fn difference(&self, delta: f64) -> Option<Complex64> {
        if delta.abs() >= self.radius {
            return None;
        }
        let (c, t) = self.sides.as_ref()?[usize::from(delta > 0.0)];
        let a = self.u0 + delta - c;
        let b = self.u0 - c;
        let mut sum = Complex64::new(0.0, 0.0);
        for (j, tj) in t.iter().enumerate().skip(1) {
            let s: f64 = (0..j).map(|i| a.powi((j - 1 - i) as i32) * b.powi(i as i32)).sum();
            sum += tj * s;
        }
        Some(sum * delta)
    }
}

/// The four integrals of the double-logarithmic inequality for `φ`.
pub fn slz_parts(
    _g: &HomogeneousGroup,
    phi: &RadialProfile,
    q: f64,
    gamma: f64,
    radius: f64,
) -> Result<SlzParts> {
    check_slz_exponents(q, gamma, radius)?;
    let grid = *phi.grid();
    let (lo, hi) = (grid.u_min(), grid.u_max());
    let ln_a = radius.ln() + 1.0;
    let (u_in, u_out) = (ln_a - 1.0, ln_a + 1.0);
    if !(lo < u_in - 1.0 && hi > u_out + 1.0) {
        return Err(Error::Argument(format!(
            "the grid [{lo}, {hi}] must contain [log R − 1, log R + 3] = [{}, {}]",
            u_in - 1.0,
            u_out + 1.0
        )));
    }
    let ev = Evaluator { phi, lo, hi };
    let (ref_in, ref_out) = (ev.value(u_in), ev.value(u_out));
    let (jet_in, jet_out) = (AnchorJet::new(phi, u_in), AnchorJet::new(phi, u_out));

    let mut breaks: Vec<f64> = phi.closed_form().map(|c| c.kinks().to_vec()).unwrap_or_default();
    if phi.is_real() {
        let nodes = || grid.nodes();
        breaks.extend(roots_on(nodes().filter(|u| *u < ln_a), |u| (ev.value(u) - ref_in).re));
        breaks.extend(roots_on(nodes().filter(|u| *u > ln_a), |u| (ev.value(u) - ref_out).re));
        breaks.extend(roots_on(nodes(), |u| ev.derivative(u).re));
    }
    breaks.retain(|b| *b > lo && *b < hi);
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();

    let r = log_scale_integral_vec(
        ln_a,
        |p: LogPoint, out: &mut [f64]| {
            out.iter_mut().for_each(|v| *v = 0.0);
            let sigma = p.ln_abs_l.abs();
            let inner = p.l > 0.0;
            // δ = u − u_anchor, exact from |L|: inside L = 1 − δ, outside L = −1 − δ
            let delta = if inner { -p.ln_abs_l.exp_m1() } else { p.ln_abs_l.exp_m1() };
            let (jet, reference) = if inner { (&jet_in, ref_in) } else { (&jet_out, ref_out) };
            let diff = jet.difference(delta).unwrap_or_else(|| ev.value(p.u) - reference);
            let lhs = if diff.norm() == 0.0 { 0.0 } else { diff.norm().powf(q) * sigma.powf(-gamma) };
            let d1 = ev.derivative(p.u).norm();
            let rhs = if d1 == 0.0 { 0.0 } else { (q * (p.ln_abs_l + d1.ln())).exp() * sigma.powf(q - gamma) };
            let k = if inner { 0 } else { 1 };
            out[k] = lhs;
            out[2 + k] = rhs;
        },
        4,
        lo,
        hi,
        &breaks,
        SLZ_TOL,
    );
    // beyond the grid φ is frozen: ∫_{σ₁}^∞ σ^{−γ} dσ = σ₁^{1−γ}/(γ−1)
    let tail = |z: Complex64, l: f64| z.norm().powf(q) * l.ln().powf(1.0 - gamma) / (gamma - 1.0);
    let lhs_inner = r.values[0] + tail(ev.value(lo) - ref_in, ln_a - lo);
    let lhs_outer = r.values[1] + tail(ev.value(hi) - ref_out, hi - ln_a);
    Ok(SlzParts { lhs_inner, lhs_outer, rhs_inner: r.values[2], rhs_outer: r.values[3], meta: GridMeta::from_quad(&r) })
}

/// The double-logarithmic inequality with constant `q/(γ−1)` on the whole
/// group, and separately on `B(0, eR)` and on its complement.
pub fn verify_slz(
    g: &HomogeneousGroup,
    phi: &RadialProfile,
    q: f64,
    gamma: f64,
    radius: f64,
    ctx: &Context,
) -> Result<VerificationReport> {
    let parts = slz_parts(g, phi, q, gamma, radius)?;
    let tol = &ctx.tolerances;
    let c = q / (gamma - 1.0);
    let root = |x: f64| x.powf(1.0 / q);
    let params = Params { q: Some(q), gamma: Some(gamma), r: Some(radius), ..Default::default() };
    let mut rep = skeleton(VerifierId::Slz, g, ctx, params);
    rep.lhs = root(parts.lhs());
    rep.rhs = c * root(parts.rhs());
    rep.margin = Some(rep.rhs - rep.lhs);
    rep.status = margin_status(rep.lhs, rep.rhs, tol);
    rep.sub_checks.push(SubCheck::inequality("inner_ball", root(parts.lhs_inner), c * root(parts.rhs_inner), tol));
    rep.sub_checks.push(SubCheck::inequality("outer_complement", root(parts.lhs_outer), c * root(parts.rhs_outer), tol));
    rep.grid_meta = parts.meta;
    Ok(rep.finalize())
}
