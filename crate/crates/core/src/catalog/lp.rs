//! `L^p` Sobolev inequality with its remainder identity, the Hardy
//! inequalities it yields, and the Poincaré inequality on balls.

use super::engine::{abs_pow, ew, integrate, Crossing};
use super::report::{identity_status, margin_status, relative_residual, Params, Status, SubCheck, VerificationReport};
use super::weighted::l2_chain_report;
use super::{check_exponent, skeleton, Context, VerifierId, REMAINDER_FLOOR};
use crate::error::{Error, Result};
use crate::group::HomogeneousGroup;
use crate::quadrature::{davies_identity, ip_kernel};
use crate::radial::RadialProfile;

/// Relative size below which a profile counts as vanishing (support checks).
const SUPPORT_FLOOR: f64 = 1e-12;

fn unit_crossings(order: usize) -> Vec<Crossing> {
    (0..=order).map(|j| (0..=order).map(|i| if i == j { 1.0 } else { 0.0 }).collect()).collect()
}

/// Sobolev inequality `‖φ‖_p ≤ (p/Q)‖Eφ‖_p` with the remainder identity for
/// real profiles. For `p = 2` the identity is checked in its `L²` form
/// (valid for complex profiles); complex profiles with `p ≠ 2` get the
/// inequality alone, with a pointwise check of the complex reduction.
pub fn verify_lp_sobolev(g: &HomogeneousGroup, phi: &RadialProfile, p: f64, ctx: &Context) -> Result<VerificationReport> {
    check_exponent("p", p)?;
    if p == 2.0 {
        return sobolev_l2(g, phi, ctx);
    }
    if phi.is_real() {
        return sobolev_identity(g, phi, p, ctx);
    }
    sobolev_inequality(g, phi, p, ctx)
}

/// The identity path of [`verify_lp_sobolev`]; for `p ≠ 2` the remainder
/// identity holds for real-valued profiles only.
pub fn verify_lp_sobolev_identity(
    g: &HomogeneousGroup,
    phi: &RadialProfile,
    p: f64,
    ctx: &Context,
) -> Result<VerificationReport> {
    check_exponent("p", p)?;
    if p == 2.0 {
        return sobolev_l2(g, phi, ctx);
    }
    if !phi.is_real() {
        return Err(Error::Precondition(format!(
            "the L^p remainder identity (p = {p}) needs a real-valued profile"
        )));
    }
    sobolev_identity(g, phi, p, ctx)
}

fn sobolev_l2(g: &HomogeneousGroup, phi: &RadialProfile, ctx: &Context) -> Result<VerificationReport> {
    let params = Params { p: Some(2.0), ..Default::default() };
    let mut rep = l2_chain_report(VerifierId::SobolevLp, g, phi, 0.0, 1, params, ctx)?;
    // the general-p form with I_2 = 1/2: ‖(2/Q)Eφ‖² = ‖φ‖² + ‖φ + (2/Q)Eφ‖²
    let q = g.q();
    let s = 2.0 / q;
    let r = integrate(g, phi, 1, 3, &[], &[], |u, d, out| {
        let e = ew(q, u);
        out[0] = d[0].norm_sqr() * e;
        out[1] = (d[1] * s).norm_sqr() * e;
        out[2] = (d[0] + d[1] * s).norm_sqr() * e;
    })?;
    rep.sub_checks.push(SubCheck::identity("lp_remainder_identity", r.values[1], r.values[0] + r.values[2], &ctx.tolerances));
    Ok(rep.finalize())
}

fn sobolev_identity(g: &HomogeneousGroup, phi: &RadialProfile, p: f64, ctx: &Context) -> Result<VerificationReport> {
    let q = g.q();
    let s = p / q;
    let r = integrate(g, phi, 1, 3, &[], &unit_crossings(1), |u, d, out| {
        let e = ew(q, u);
        let v = d[0].re;
        let w = -s * d[1].re;
        out[0] = abs_pow(d[0], p) * e;
        out[1] = abs_pow(d[1], p) * e;
        out[2] = if v == w {
            0.0
        } else {
            p * ip_kernel(v, w, p).unwrap_or(f64::NAN) * (v - w) * (v - w) * e
        };
    })?;
    let (n0, n1, rem) = (r.values[0], r.values[1], r.values[2]);
    let a = s.powf(p) * n1;
    let b = n0 + rem;
    let residual = relative_residual(a, b);
    let params = Params { p: Some(p), ..Default::default() };
    let mut rep = skeleton(VerifierId::SobolevLp, g, ctx, params);
    let tol = &ctx.tolerances;
    rep.lhs = n0.powf(1.0 / p);
    rep.rhs = s * n1.powf(1.0 / p);
    rep.margin = Some(rep.rhs - rep.lhs);
    rep.remainder = Some(rem);
    rep.residual = Some(residual);
    rep.status = identity_status(residual, tol);
    if margin_status(rep.lhs, rep.rhs, tol) == Status::Fail {
        rep.status = Status::Fail;
    }
    rep.sub_checks.push(SubCheck::identity("lp_remainder_identity", a, b, tol));
    if !phi.is_zero() {
        rep.sub_checks.push(SubCheck::positive("remainder_positive", rem, REMAINDER_FLOOR * a));
    }
    rep.grid_meta = r.meta;
    Ok(rep.finalize())
}

fn sobolev_inequality(g: &HomogeneousGroup, phi: &RadialProfile, p: f64, ctx: &Context) -> Result<VerificationReport> {
    let q = g.q();
    let r = integrate(g, phi, 1, 2, &[], &[], |u, d, out| {
        let e = ew(q, u);
        out[0] = abs_pow(d[0], p) * e;
        out[1] = abs_pow(d[1], p) * e;
    })?;
    let params = Params { p: Some(p), ..Default::default() };
    let mut rep = skeleton(VerifierId::SobolevLp, g, ctx, params);
    rep.lhs = r.values[0].powf(1.0 / p);
    rep.rhs = p / q * r.values[1].powf(1.0 / p);
    rep.margin = Some(rep.rhs - rep.lhs);
    rep.status = margin_status(rep.lhs, rep.rhs, &ctx.tolerances);
    rep.notes.push("complex-valued profile: remainder identity applies to real profiles only".into());
    if let Some(z) = phi.values().iter().copied().max_by(|a, b| a.norm().total_cmp(&b.norm())) {
        let d = davies_identity(z, p)?;
        rep.sub_checks.push(SubCheck::identity("complex_reduction", d.lhs, d.rhs, &ctx.tolerances));
    }
    rep.grid_meta = r.meta;
    Ok(rep.finalize())
}

/// Hardy inequality `‖φ/|x|‖_p ≤ p/(Q−p)‖Rφ‖_p` for `1 < p < Q`; for
/// `p = 2` also the identity
/// `‖E(φ/|x|)‖² = (Q−1)‖φ/|x|‖² + ‖dφ/d|x|‖²` and the Sobolev inequality
/// for `φ/|x|`.
pub fn verify_hardy_equivalence(
    g: &HomogeneousGroup,
    phi: &RadialProfile,
    p: f64,
    ctx: &Context,
) -> Result<VerificationReport> {
    check_exponent("p", p)?;
    let q = g.q();
    if q <= p {
        return Err(Error::Domain(format!("Hardy's inequality needs p < Q, got p = {p}, Q = {q}")));
    }
    let tol = &ctx.tolerances;
    let c = q - p;
    let dim = if p == 2.0 { 3 } else { 2 };
    // with R = d/dr: |φ/r|^p r^Q = |d₀|^p e^{(Q−p)u}, |Rφ|^p r^Q = |d₁|^p e^{(Q−p)u}
    let r = integrate(g, phi, 1, dim, &[], &unit_crossings(1), |u, d, out| {
        let e = ew(c, u);
        out[0] = abs_pow(d[0], p) * e;
        out[1] = abs_pow(d[1], p) * e;
        if dim == 3 {
            // E(φ/r) = (d₁ − d₀)/r
            out[2] = (d[1] - d[0]).norm_sqr() * e;
        }
    })?;
    let params = Params { p: Some(p), ..Default::default() };
    let mut rep = skeleton(VerifierId::Hardy, g, ctx, params);
    rep.lhs = r.values[0].powf(1.0 / p);
    rep.rhs = p / c * r.values[1].powf(1.0 / p);
    rep.margin = Some(rep.rhs - rep.lhs);
    rep.status = margin_status(rep.lhs, rep.rhs, tol);
    if p == 2.0 {
        let a = r.values[2];
        let b = (q - 1.0) * r.values[0] + r.values[1];
        let residual = relative_residual(a, b);
        rep.residual = Some(residual);
        if identity_status(residual, tol) == Status::Fail {
            rep.status = Status::Fail;
        }
        rep.sub_checks.push(SubCheck::identity("hardy_identity", a, b, tol));
        rep.sub_checks.push(SubCheck::inequality("sobolev_for_quotient", r.values[0].sqrt(), 2.0 / q * a.sqrt(), tol));
        if q < 3.0 {
            rep.notes.push(format!("Q = {q} < 3: the equivalence with the Sobolev inequality is stated for Q ≥ 3"));
        }
    }
    rep.grid_meta = r.meta;
    Ok(rep.finalize())
}

/// Largest log-radius at which the profile is not negligible.
fn support_sup(phi: &RadialProfile) -> f64 {
    let peak = phi.values().iter().map(|v| v.norm()).fold(0.0, f64::max);
    let grid = phi.grid();
    match phi.values().iter().rposition(|v| v.norm() > SUPPORT_FLOOR * peak) {
        Some(j) if peak > 0.0 => grid.node((j + 1).min(grid.len() - 1)),
        _ => grid.u_min(),
    }
}

/// Poincaré inequality `‖φ‖_p ≤ (Rp/Q)‖(1/|x|)Eφ‖_p` for `φ` supported in
/// `B(0, R)`. Without `R`, the numerical support radius is used.
pub fn verify_poincare(
    g: &HomogeneousGroup,
    phi: &RadialProfile,
    p: f64,
    radius: Option<f64>,
    ctx: &Context,
) -> Result<VerificationReport> {
    check_exponent("p", p)?;
    let u_sup = support_sup(phi);
    let radius = match radius {
        Some(r) if !(r > 0.0 && r.is_finite()) => {
            return Err(Error::Domain(format!("the ball radius must be positive, got R = {r}")));
        }
        Some(r) => {
            let peak = phi.values().iter().map(|v| v.norm()).fold(0.0, f64::max);
            let escapes = phi
                .grid()
                .nodes()
                .zip(phi.values())
                .any(|(u, v)| u >= r.ln() && v.norm() > SUPPORT_FLOOR * peak);
            if escapes {
                return Err(Error::Precondition(format!(
                    "profile support escapes B(0, R): R = {r}, numerical support up to |x| = {:.6e}",
                    u_sup.exp()
                )));
            }
            r
        }
        None => u_sup.exp(),
    };
    let q = g.q();
    let r = integrate(g, phi, 1, 2, &[], &unit_crossings(1), |u, d, out| {
        out[0] = abs_pow(d[0], p) * ew(q, u);
        out[1] = abs_pow(d[1], p) * ew(q - p, u);
    })?;
    let params = Params { p: Some(p), r: Some(radius), ..Default::default() };
    let mut rep = skeleton(VerifierId::Poincare, g, ctx, params);
    rep.lhs = r.values[0].powf(1.0 / p);
    rep.rhs = radius * p / q * r.values[1].powf(1.0 / p);
    rep.margin = Some(rep.rhs - rep.lhs);
    rep.status = margin_status(rep.lhs, rep.rhs, &ctx.tolerances);
    rep.grid_meta = r.meta;
    Ok(rep.finalize())
}
