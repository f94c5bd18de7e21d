//! Operator algebra of `E` on `L²`, fractional powers `|E|^β = A^{β/2}`, and
//! embedding-norm bounds over profile suites.

use num_complex::Complex64;

use super::engine::{abs_pow, ew, integrate, Crossing};
use super::report::{identity_status, margin_status, relative_residual, Params, SubCheck, VerificationReport};
use super::{check_exponent, skeleton, Context, VerifierId};
use crate::error::{Error, Result};
use crate::group::HomogeneousGroup;
use crate::profiles::NamedProfile;
use crate::quadrature::{GridMeta, Level, Method};
use crate::radial::{embedding_constant, l2_norm, multiplier_apply, OperatorSymbol, RadialProfile};

/// `‖m(E)φ‖` by the spectral multiplier; closed forms are re-evaluated on the
/// doubled grid to estimate the discretization error.
fn spectral_norm(g: &HomogeneousGroup, phi: &RadialProfile, sym: OperatorSymbol) -> Result<(f64, GridMeta)> {
    let value = l2_norm(g, &multiplier_apply(g, phi, sym)?);
    let mut levels = vec![Level { n: phi.grid().len(), value }];
    let mut meta = GridMeta { method: Method::Trapezoid, levels: levels.clone(), converged: true, error_estimate: 0.0 };
    if phi.closed_form().is_some() {
        if let Some(grid) = phi.grid().refined() {
            let fine = l2_norm(g, &multiplier_apply(g, &phi.resample(grid)?, sym)?);
            let change = (fine - value).abs();
            levels.push(Level { n: grid.len(), value: fine });
            meta = GridMeta {
                method: Method::Trapezoid,
                levels,
                converged: change <= 1e-9 * value.abs().max(fine.abs()) || change == 0.0,
                error_estimate: change,
            };
        }
    }
    Ok((value, meta))
}

fn l2_of(g: &HomogeneousGroup, phi: &RadialProfile) -> Result<(f64, GridMeta)> {
    let q = g.q();
    let r = integrate(g, phi, 0, 1, &[], &[], |u, d, out| out[0] = d[0].norm_sqr() * ew(q, u))?;
    Ok((r.values[0].sqrt(), r.meta))
}

fn check_fractional(beta: Complex64, k: u32) -> Result<()> {
    if !(beta.re > 0.0 && beta.re.is_finite() && beta.im.is_finite()) {
        return Err(Error::Domain(format!("fractional order needs Re β > 0, got β = {beta}")));
    }
    if !(k as f64 > 0.5 * beta.re) {
        return Err(Error::Domain(format!("need integer k > Re β/2, got k = {k}, β = {beta}")));
    }
    Ok(())
}

/// The constant `C(k − β/2, k)(2/Q)^{Re β}` of `‖φ‖ ≤ C‖|E|^βφ‖`.
fn fractional_bound(q: f64, beta: Complex64, k: u32) -> Result<(f64, f64)> {
    let c = embedding_constant(Complex64::new(k as f64, 0.0) - beta * 0.5, k)?;
    Ok((c, c * (2.0 / q).powf(beta.re)))
}

/// Fractional bound `‖φ‖ ≤ C(k−β/2,k)(2/Q)^{Re β}‖|E|^βφ‖` together with the
/// moment inequality `‖|E|^{−β}φ‖ ≤ C(k−β/2,k)‖φ‖^{1−θ}‖A^{−k}φ‖^θ`,
/// `θ = Re β/2k`. For `β = 2` the norm `‖|E|²φ‖` is compared with
/// `‖E²φ‖`; for complex `β` with `‖|E|^{Re β}φ‖`.
pub fn verify_fractional(
    g: &HomogeneousGroup,
    phi: &RadialProfile,
    beta: Complex64,
    k: u32,
    ctx: &Context,
) -> Result<VerificationReport> {
    check_fractional(beta, k)?;
    let q = g.q();
    let tol = &ctx.tolerances;
    let (c, bound) = fractional_bound(q, beta, k)?;
    let (n0, m0) = spectral_norm(g, phi, OperatorSymbol::Fractional(Complex64::new(0.0, 0.0)))?;
    let (nb, mb) = spectral_norm(g, phi, OperatorSymbol::Fractional(beta))?;
    let (nneg, mneg) = spectral_norm(g, phi, OperatorSymbol::Fractional(-beta))?;
    let (nak, mak) = spectral_norm(g, phi, OperatorSymbol::Fractional(Complex64::new(-2.0 * k as f64, 0.0)))?;
    let theta = beta.re / (2.0 * k as f64);
    let params = Params { k: Some(k), beta_re: Some(beta.re), beta_im: Some(beta.im), ..Default::default() };
    let mut rep = skeleton(VerifierId::Fractional, g, ctx, params);
    rep.lhs = n0;
    rep.rhs = bound * nb;
    rep.margin = Some(rep.rhs - rep.lhs);
    rep.status = margin_status(rep.lhs, rep.rhs, tol);
    let moment_rhs = if n0 == 0.0 { 0.0 } else { c * n0.powf(1.0 - theta) * nak.powf(theta) };
    rep.sub_checks.push(SubCheck::inequality("moment_inequality", nneg, moment_rhs, tol));
    let mut metas = vec![m0, mb, mneg, mak];
    if beta == Complex64::new(2.0, 0.0) {
        let r = integrate(g, phi, 2, 1, &[], &[], |u, d, out| out[0] = d[2].norm_sqr() * ew(q, u))?;
        rep.sub_checks.push(SubCheck::identity("square_equals_euler_square", nb, r.values[0].sqrt(), tol));
        metas.push(r.meta);
    }
    if beta.im != 0.0 {
        let (nre, mre) = spectral_norm(g, phi, OperatorSymbol::Fractional(Complex64::new(beta.re, 0.0)))?;
        rep.sub_checks.push(SubCheck::identity("imaginary_part_is_unitary", nb, nre, tol));
        metas.push(mre);
    }
    rep.notes.push(format!("C(k−β/2, k) = {c:.12e}, bound constant = {bound:.12e}"));
    rep.grid_meta = GridMeta::merge(&metas);
    Ok(rep.finalize())
}

/// Order of the embedding checked by [`verify_embedding_norms`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EmbeddingOrder {
    /// `sup ‖φ‖_p/‖E^kφ‖_p ≤ (p/Q)^k`.
    Integer(u32),
    /// `sup ‖φ‖/‖|E|^βφ‖ ≤ C(k−β/2,k)(2/Q)^{Re β}` (`p = 2`).
    Fractional { beta: Complex64, k: u32 },
}

/// Largest ratio over a suite of profiles against the embedding bound.
/// Profiles annihilated by the operator are skipped with a note.
pub fn verify_embedding_norms(
    g: &HomogeneousGroup,
    suite: &[NamedProfile],
    p: f64,
    order: EmbeddingOrder,
    ctx: &Context,
) -> Result<VerificationReport> {
    check_exponent("p", p)?;
    if suite.is_empty() {
        return Err(Error::Argument("the embedding check needs a non-empty profile suite".into()));
    }
    let q = g.q();
    let (bound, params) = match order {
        EmbeddingOrder::Integer(k) => {
            if k == 0 || k as usize > crate::jet::MAX_ORDER - 1 {
                return Err(Error::Domain(format!("need 1 ≤ k ≤ {}, got k = {k}", crate::jet::MAX_ORDER - 1)));
            }
            ((p / q).powi(k as i32), Params { p: Some(p), k: Some(k), ..Default::default() })
        }
        EmbeddingOrder::Fractional { beta, k } => {
            if p != 2.0 {
                return Err(Error::Domain(format!("fractional powers act on L²; need p = 2, got p = {p}")));
            }
            check_fractional(beta, k)?;
            let params =
                Params { p: Some(p), k: Some(k), beta_re: Some(beta.re), beta_im: Some(beta.im), ..Default::default() };
            (fractional_bound(q, beta, k)?.1, params)
        }
    };
    let mut rep = skeleton(VerifierId::Embedding, g, ctx, params);
    let mut best: Option<(f64, &str)> = None;
    let mut metas = Vec::new();
    for member in suite {
        let (num, den) = match order {
            EmbeddingOrder::Integer(k) => {
                let k = k as usize;
                let crossings: Vec<Crossing> = [0, k]
                    .iter()
                    .map(|&j| (0..=k).map(|i| if i == j { 1.0 } else { 0.0 }).collect())
                    .collect();
                let r = integrate(g, &member.profile, k, 2, &[], &crossings, |u, d, out| {
                    let e = ew(q, u);
                    out[0] = abs_pow(d[0], p) * e;
                    out[1] = abs_pow(d[k], p) * e;
                })?;
                metas.push(r.meta);
                (r.values[0].powf(1.0 / p), r.values[1].powf(1.0 / p))
            }
            EmbeddingOrder::Fractional { beta, .. } => {
                let (num, m0) = l2_of(g, &member.profile)?;
                let (den, mb) = spectral_norm(g, &member.profile, OperatorSymbol::Fractional(beta))?;
                metas.push(m0);
                metas.push(mb);
                (num, den)
            }
        };
        if den == 0.0 {
            rep.notes.push(format!("{}: annihilated by the operator, skipped", member.name));
            continue;
        }
        let ratio = num / den;
        if best.is_none_or(|(b, _)| ratio > b) {
            best = Some((ratio, member.name.as_str()));
        }
    }
    match best {
        Some((ratio, name)) => {
            rep.lhs = ratio;
            rep.notes.push(format!("largest ratio attained by '{name}'"));
        }
        None => rep.notes.push("every profile was skipped".into()),
    }
    rep.rhs = bound;
    rep.margin = Some(rep.rhs - rep.lhs);
    rep.status = margin_status(rep.lhs, rep.rhs, &ctx.tolerances);
    rep.grid_meta = GridMeta::merge(&metas);
    Ok(rep.finalize())
}

/// `‖Eφ‖ = ‖E*φ‖`, `‖Aφ‖ = ‖E²φ‖` and `‖(λ+A)^{−1}φ‖ ≤ ‖φ‖/λ`.
pub fn verify_operator_algebra(
    g: &HomogeneousGroup,
    phi: &RadialProfile,
    lambdas: &[f64],
    ctx: &Context,
) -> Result<VerificationReport> {
    if let Some(l) = lambdas.iter().find(|l| !(l.is_finite() && **l > 0.0)) {
        return Err(Error::Domain(format!("resolvent parameters must be positive, got λ = {l}")));
    }
    let q = g.q();
    let tol = &ctx.tolerances;
    let r = integrate(g, phi, 2, 4, &[], &[], |u, d, out| {
        let e = ew(q, u);
        out[0] = d[1].norm_sqr() * e;
        out[1] = (-d[0] * q - d[1]).norm_sqr() * e;
        out[2] = d[2].norm_sqr() * e;
        out[3] = d[0].norm_sqr() * e;
    })?;
    let (ne, nadj, ne2, n0) = (r.values[0].sqrt(), r.values[1].sqrt(), r.values[2].sqrt(), r.values[3].sqrt());
    let mut rep = skeleton(VerifierId::OperatorAlgebra, g, ctx, Params::default());
    rep.lhs = ne;
    rep.rhs = nadj;
    let residual = relative_residual(ne, nadj);
    rep.residual = Some(residual);
    rep.status = identity_status(residual, tol);
    rep.sub_checks.push(SubCheck::identity("euler_adjoint_norm", ne, nadj, tol));
    let (na, ma) = spectral_norm(g, phi, OperatorSymbol::A)?;
    rep.sub_checks.push(SubCheck::identity("a_equals_euler_square", na, ne2, tol));
    let mut metas = vec![r.meta, ma];
    for &lambda in lambdas {
        let (nr, mr) = spectral_norm(g, phi, OperatorSymbol::Resolvent(lambda))?;
        rep.sub_checks.push(SubCheck::inequality(&format!("resolvent_lambda_{lambda:e}"), nr, n0 / lambda, tol));
        metas.push(mr);
    }
    rep.grid_meta = GridMeta::merge(&metas);
    Ok(rep.finalize())
}
