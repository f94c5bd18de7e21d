//! Dilation covariance of the Sobolev quotient and the polar decomposition
//! of group integrals.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::engine::{abs_pow, ew, integrate, Crossing};
use super::report::{relative_residual, Params, Status, SubCheck, VerificationReport};
use super::{check_exponent, skeleton, Context, VerifierId};
use crate::error::{Error, Result};
use crate::group::{HomogeneousGroup, QuasiNorm};
use crate::jet::Jet;
use crate::quadrature::{
    direct_group_integral_mc, pooled_deviation, separable_group_integral, sphere_integral_mc, GridMeta, Level,
    Method,
};
use crate::radial::{complex_gamma, ClosedForm, LogGrid, RadialProfile};

/// Dilation factors of the default covariance check.
pub const DEFAULT_DILATIONS: [f64; 2] = [0.25, 4.0];
/// Key mixed into the seed of the direct estimates so that they are
/// independent of the sphere estimates.
const DIRECT_STREAM: u64 = 0x9e37_79b9_7f4a_7c15;

/// `‖φ‖_p/‖Eφ‖_q`.
fn quotient(g: &HomogeneousGroup, phi: &RadialProfile, p: f64, q: f64) -> Result<(f64, GridMeta)> {
    let qd = g.q();
    let crossings: Vec<Crossing> = vec![vec![1.0, 0.0], vec![0.0, 1.0]];
    let r = integrate(g, phi, 1, 2, &[], &crossings, |u, d, out| {
        let e = ew(qd, u);
        out[0] = abs_pow(d[0], p) * e;
        out[1] = abs_pow(d[1], q) * e;
    })?;
    Ok((r.values[0].powf(1.0 / p) / r.values[1].powf(1.0 / q), r.meta))
}

/// Scaling of `‖f∘D_λ‖_p/‖E(f∘D_λ)‖_q` as `λ^{Q/q − Q/p}`.
pub fn verify_dilation(
    g: &HomogeneousGroup,
    phi: &RadialProfile,
    p: f64,
    q: f64,
    lambdas: &[f64],
    ctx: &Context,
) -> Result<VerificationReport> {
    check_exponent("p", p)?;
    check_exponent("q", q)?;
    if phi.is_zero() {
        return Err(Error::Precondition("the dilation quotient is undefined for φ = 0".into()));
    }
    if let Some(l) = lambdas.iter().find(|l| !(l.is_finite() && **l > 0.0)) {
        return Err(Error::Domain(format!("dilation factors must be positive, got λ = {l}")));
    }
    let qd = g.q();
    let tol = &ctx.tolerances;
    let exponent = qd / q - qd / p;
    let (base, m0) = quotient(g, phi, p, q)?;
    let params = Params { p: Some(p), q: Some(q), ..Default::default() };
    let mut rep = skeleton(VerifierId::Dilation, g, ctx, params);
    let mut metas = vec![m0];
    let mut worst = (0.0, 1.0, 1.0);
    for &lambda in lambdas {
        let (ratio, m) = quotient(g, &phi.dilate(lambda)?, p, q)?;
        metas.push(m);
        let measured = ratio / base;
        let predicted = lambda.powf(exponent);
        let check = SubCheck::identity(&format!("scaling_lambda_{lambda:e}"), measured, predicted, tol);
        let residual = relative_residual(measured, predicted);
        if residual >= worst.0 {
            worst = (residual, measured, predicted);
        }
        rep.sub_checks.push(check);
    }
    rep.lhs = worst.1;
    rep.rhs = worst.2;
    rep.residual = Some(worst.0);
    rep.status = if rep.sub_checks.iter().all(|c| c.status == Status::Pass) { Status::Pass } else { Status::Fail };
    if p == q {
        rep.notes.push("p = q: the quotient is dilation invariant".into());
    } else {
        rep.notes.push(format!("p ≠ q: the quotient scales as λ^{exponent:.6}, so no dilation-invariant constant exists"));
    }
    rep.grid_meta = GridMeta::merge(&metas);
    Ok(rep.finalize())
}

/// A separable test integrand `φ(|x|)h(D_{1/|x|}x)`.
struct PolarCase {
    name: &'static str,
    radial: ClosedForm,
    angular: fn(&[f64]) -> f64,
    /// Gauge radius outside of which the integrand is negligible.
    radius: f64,
}

fn gauss(x: Jet) -> Jet {
    let r2 = x.scale(2.0).exp();
    (-r2).exp()
}

/// Smooth bump in `r` supported on `[0.5, 1.5]`.
fn r_bump(x: Jet) -> Jet {
    let t = (x.exp() - 1.0).scale(2.0);
    if t.re().abs() >= 1.0 {
        return Jet::constant(0.0, x.order());
    }
    let one = Jet::constant(1.0, x.order());
    (-((one - t * t).recip())).exp()
}

fn polar_cases() -> Vec<PolarCase> {
    let bump_kinks = vec![0.5f64.ln(), 1.5f64.ln()];
    vec![
        PolarCase { name: "gauss_const", radial: ClosedForm::new(gauss), angular: |_| 1.0, radius: 6.0 },
        PolarCase { name: "gauss_y1_sq", radial: ClosedForm::new(gauss), angular: |y| y[0] * y[0], radius: 6.0 },
        PolarCase {
            name: "r_gauss_affine",
            radial: ClosedForm::new(|x: Jet| x.exp() * gauss(x)),
            angular: |y| 1.0 + y[y.len() - 1],
            radius: 6.0,
        },
        PolarCase {
            name: "bump_mixed",
            radial: ClosedForm::new(r_bump).with_kinks(bump_kinks),
            angular: |y| 1.0 + y[0] * y[y.len() - 1],
            radius: 1.5,
        },
        PolarCase {
            name: "gauss_poly_yn_sq",
            radial: ClosedForm::new(|x: Jet| gauss(x) * (x.exp() + 1.0)),
            angular: |y| y[y.len() - 1] * y[y.len() - 1],
            radius: 6.0,
        },
    ]
}

/// Factorized (radial quadrature × sphere Monte Carlo) against direct Monte
/// Carlo group integrals of five separable integrands; for Euclidean groups
/// also the sphere mass `nπ^{n/2}/Γ(n/2+1)`.
pub fn verify_polar(g: &HomogeneousGroup, samples: u64, seed: u64, ctx: &Context) -> Result<VerificationReport> {
    if samples == 0 {
        return Err(Error::Argument("the polar check needs at least one sample".into()));
    }
    let sigma = ctx.tolerances.mc_sigma;
    let grid = LogGrid::default();
    let q = g.q();
    let params = Params { samples: Some(samples), seed: Some(seed), ..Default::default() };
    let mut rep = skeleton(VerifierId::Polar, g, ctx, params);
    let mut worst = 0.0f64;
    let mut metas = Vec::new();
    let mc_check = |name: String, a: f64, b: f64, dev: f64| SubCheck {
        name,
        lhs: a,
        rhs: b,
        residual: Some(dev),
        margin: Some(sigma - dev),
        status: if dev <= sigma { Status::Pass } else { Status::Fail },
    };
    for case in polar_cases() {
        let phi = RadialProfile::from_closed_form(grid, case.radial.clone(), q)?;
        let factorized = separable_group_integral(g, &phi, case.angular, samples, seed)?;
        let radial = case.radial.clone();
        let angular = case.angular;
        let direct = direct_group_integral_mc(
            g,
            |x| match g.project_to_sphere(x) {
                Some(y) => radial.value(g.quasi_norm_unchecked(x).ln()).re * angular(&y),
                None => 0.0,
            },
            case.radius,
            samples,
            seed ^ DIRECT_STREAM,
        )?;
        let dev = pooled_deviation(factorized.value, factorized.std_error, direct.value, direct.std_error);
        worst = worst.max(dev);
        rep.sub_checks.push(mc_check(case.name.into(), factorized.value, direct.value, dev));
        metas.push(GridMeta {
            method: Method::MonteCarlo,
            levels: vec![Level { n: samples as usize, value: factorized.value }],
            converged: true,
            error_estimate: (factorized.std_error.powi(2) + direct.std_error.powi(2)).sqrt(),
        });
    }
    if g.norm() == QuasiNorm::Euclidean {
        let n = g.dim() as f64;
        let exact = n * PI.powf(0.5 * n) / complex_gamma(Complex64::new(0.5 * n + 1.0, 0.0))?.re;
        let est = sphere_integral_mc(g, |_| 1.0, samples, seed)?;
        let dev = pooled_deviation(est.value, est.std_error, exact, 0.0);
        worst = worst.max(dev);
        rep.sub_checks.push(mc_check("sphere_mass".into(), est.value, exact, dev));
    }
    rep.lhs = worst;
    rep.rhs = sigma;
    rep.margin = Some(sigma - worst);
    rep.status = if worst <= sigma { Status::Pass } else { Status::Fail };
    rep.notes.push("lhs: largest deviation in pooled standard errors; rhs: allowed deviation".into());
    rep.grid_meta = GridMeta::merge(&metas);
    Ok(rep.finalize())
}
