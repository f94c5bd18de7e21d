//! Exact decomposition of both sides of the double-logarithmic inequality
//! along the sequence `f_ℓ`: with `a = (γ−1)/q` and
//! `D = log log log(ℓeR) − log log log(2e)`,
//!
//! ```text
//! rhs = a^q·D + C_{γ,q},        lhs = 1/(γ−1) + D + C_{R,γ,q},
//! ```
//!
//! so `rhs/lhs → a^q` (triple-logarithmically slowly) and the constant
//! `q/(γ−1)` cannot be improved.

use std::f64::consts::E;

use serde::{Deserialize, Serialize};

use super::{ExtremizerFamily, DEFAULT_CUTOFF_WIDTH};
use crate::catalog::{relative_residual, slz_parts};
use crate::error::{Error, Result};
use crate::group::HomogeneousGroup;
use crate::quadrature::tanh_sinh;

const CONSTANT_TOL: f64 = 1e-13;

/// Quadrature and closed-form values of both sides along `f_ℓ`
/// (radial factors, `|℘| = 1`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SlzAsymptotics {
    pub q: f64,
    pub gamma: f64,
    pub radius: f64,
    pub ell: f64,
    /// `log log log(ℓeR) − log log log(2e)`.
    pub loglog_term: f64,
    /// `(2e)^q s₀^{γ−1} ∫₀^{s₀} s^{q−γ} e^{q(s − e^s)} ds`, `s₀ = log log 2e`.
    pub c_gamma_q: f64,
    /// `s₀^{γ−1}(2/R)^q ∫_{R/2}^R (R−r)^q / (r log(eR/r) (log log(eR/r))^γ) dr`.
    pub c_r_gamma_q: f64,
    pub lhs_quadrature: f64,
    pub lhs_closed_form: f64,
    pub rhs_quadrature: f64,
    pub rhs_closed_form: f64,
    pub lhs_relative_error: f64,
    pub rhs_relative_error: f64,
    /// `rhs/lhs` from the quadrature values.
    pub quotient: f64,
    /// `rhs/lhs` from the closed forms.
    pub quotient_closed_form: f64,
    /// `((γ−1)/q)^q`.
    pub limit: f64,
}

/// `C_{γ,q}` by its defining integral.
pub(crate) fn c_gamma_q(q: f64, gamma: f64) -> f64 {
    let s0 = (2.0 * E).ln().ln();
    let integral = tanh_sinh(
        |s, _, _| if s == 0.0 { 0.0 } else { (q * (s - s.exp()) + (q - gamma) * s.ln()).exp() },
        0.0,
        s0,
        CONSTANT_TOL,
    )
    .value();
    (2.0 * E).powf(q) * s0.powf(gamma - 1.0) * integral
}

/// `C_{R,γ,q}` by its defining integral, in `t = R − r`.
pub(crate) fn c_r_gamma_q(q: f64, gamma: f64, radius: f64) -> f64 {
    let s0 = (2.0 * E).ln().ln();
    let integral = tanh_sinh(
        |_, t, _| {
            if t == 0.0 {
                return 0.0;
            }
            // log(eR/r) = 1 − log(1 − t/R), log log(eR/r) = log1p(−log1p(−t/R))
            let m = -(-t / radius).ln_1p();
            let l = 1.0 + m;
            let ll = m.ln_1p();
            (q * t.ln() - (radius - t).ln() - l.ln() - gamma * ll.ln()).exp()
        },
        radius / 2.0,
        radius,
        CONSTANT_TOL,
    )
    .value();
    s0.powf(gamma - 1.0) * (2.0 / radius).powf(q) * integral
}

/// Both sides of the inequality for `f_ℓ` by quadrature and by the exact
/// decomposition, with the constants computed from their defining integrals.
pub fn slz_asymptotics(g: &HomogeneousGroup, q: f64, gamma: f64, radius: f64, ell: f64) -> Result<SlzAsymptotics> {
    crate::catalog::check_slz_exponents(q, gamma, radius)?;
    let lll = ell.ln() + radius.ln() + 1.0;
    if !(ell.is_finite() && lll > E) {
        return Err(Error::Domain(format!(
            "ell: need ℓeR > e^e so that log log log(ℓeR) is defined, got ℓ = {ell}, R = {radius}"
        )));
    }
    let family = ExtremizerFamily::SlzFl { q, gamma, radius };
    let phi = family.member(g, ell, DEFAULT_CUTOFF_WIDTH)?;
    let parts = slz_parts(g, &phi, q, gamma, radius)?;
    let a = (gamma - 1.0) / q;
    let d = lll.ln().ln() - (2.0 * E).ln().ln().ln();
    let (cg, cr) = (c_gamma_q(q, gamma), c_r_gamma_q(q, gamma, radius));
    let rhs_closed_form = a.powf(q) * d + cg;
    let lhs_closed_form = 1.0 / (gamma - 1.0) + d + cr;
    let (lhs_quadrature, rhs_quadrature) = (parts.lhs(), parts.rhs());
    Ok(SlzAsymptotics {
        q,
        gamma,
        radius,
        ell,
        loglog_term: d,
        c_gamma_q: cg,
        c_r_gamma_q: cr,
        lhs_quadrature,
        lhs_closed_form,
        rhs_quadrature,
        rhs_closed_form,
        lhs_relative_error: relative_residual(lhs_quadrature, lhs_closed_form),
        rhs_relative_error: relative_residual(rhs_quadrature, rhs_closed_form),
        quotient: rhs_quadrature / lhs_quadrature,
        quotient_closed_form: rhs_closed_form / lhs_closed_form,
        limit: a.powf(q),
    })
}
