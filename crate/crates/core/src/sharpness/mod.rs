//! Probes of the sharp constants: quotient curves along extremizer families,
//! derivative-free maximization of the quotient, Hölder-equality witnesses,
//! and the exact asymptotic decomposition of the `f_ℓ` sequence.
//!
//! Quotients are normalized by the sharp constant, i.e. a member's ratio is
//! `lhs/rhs` of the corresponding verifier (the constant sits in `rhs`), so
//! the inequality reads `ratio ≤ 1` and sharpness means `ratio → 1`.

mod asymptotics;
mod families;
mod optimize;

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::catalog::{
    verify_embedding_norms, verify_higher_order, verify_lp_sobolev, verify_weighted_l2_identity, verify_weighted_lp,
    Context, EmbeddingOrder, VerifierId, slz_parts,
};
use crate::error::{Error, Result};
use crate::group::HomogeneousGroup;
use crate::jet::Jet;
use crate::profiles::NamedProfile;
use crate::quadrature::interval_vec;

pub use asymptotics::{slz_asymptotics, SlzAsymptotics};
pub use families::{
    slz_fl_form, ExtremizerFamily, DEFAULT_CUTOFF_WIDTH, DEFAULT_ELLS, DEFAULT_EPSILONS,
};
pub use optimize::{
    optimize_ratio, OptimizeOutcome, SearchSpace, DEFAULT_ELL_RANGE, DEFAULT_EPS_RANGE, DEFAULT_WIDTH_RANGE,
};

/// Normalized ratios may exceed 1 by this much before counting as violations.
pub const VIOLATION_TOLERANCE: f64 = 1e-10;
/// One-sided tolerance of the monotonicity diagnostic.
pub const MONOTONE_TOLERANCE: f64 = 1e-6;
const HALF_LINE_TOL: f64 = 1e-13;

/// One family member evaluated against a verifier.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub parameter: f64,
    pub width: f64,
    pub lhs: f64,
    pub rhs: f64,
    /// `lhs/rhs`; at most 1 up to quadrature error.
    pub ratio: f64,
}

/// Quotients along a family, with convergence diagnostics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatioCurve {
    pub family: ExtremizerFamily,
    pub verifier: VerifierId,
    pub group: String,
    pub target_constant: f64,
    pub points: Vec<CurvePoint>,
    /// Ratios never decrease along the parameter grid (towards the limit).
    pub monotone: bool,
    pub max_ratio: f64,
    /// Members whose ratio exceeds `1 + VIOLATION_TOLERANCE`.
    pub violations: usize,
}

impl RatioCurve {
    pub const CSV_HEADER: &'static str = "family,verifier,group,parameter_name,parameter,width,lhs,rhs,ratio,target_constant";

    /// CSV rows (without header).
    pub fn csv_rows(&self) -> String {
        let mut s = String::new();
        for p in &self.points {
            let _ = writeln!(
                s,
                "{},{},{},{},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e}",
                self.family.name(),
                self.verifier,
                self.group,
                self.family.parameter_name(),
                p.parameter,
                p.width,
                p.lhs,
                p.rhs,
                p.ratio,
                self.target_constant
            );
        }
        s
    }
}

/// `(lhs, rhs)` of `verifier` for the family member with parameter `param`.
pub fn evaluate_member(
    g: &HomogeneousGroup,
    family: &ExtremizerFamily,
    verifier: VerifierId,
    param: f64,
    width: f64,
) -> Result<(f64, f64)> {
    family.check_verifier(g, verifier)?;
    let ctx = Context::new(format!("{}({}={param})", family.name(), family.parameter_name()));
    if let ExtremizerFamily::LogPowerCutoff { p } = *family {
        return log_power_sides(p, param, width);
    }
    if let ExtremizerFamily::SlzFl { q, gamma, radius } = *family {
        let phi = family.member(g, param, width)?;
        let parts = slz_parts(g, &phi, q, gamma, radius)?;
        return Ok((parts.lhs().powf(1.0 / q), q / (gamma - 1.0) * parts.rhs().powf(1.0 / q)));
    }
    let ExtremizerFamily::PowerCutoff { p, alpha, k, .. } = *family else { unreachable!() };
    let phi = family.member(g, param, width)?;
    let rep = match verifier {
        VerifierId::SobolevLp => verify_lp_sobolev(g, &phi, p, &ctx)?,
        VerifierId::WeightedLp => verify_weighted_lp(g, &phi, p, alpha, &ctx)?,
        VerifierId::WeightedL2 => verify_weighted_l2_identity(g, &phi, alpha, &ctx)?,
        VerifierId::HigherOrder => verify_higher_order(g, &phi, alpha, k as usize, p, &ctx)?,
        VerifierId::Embedding => {
            let suite = [NamedProfile { name: ctx.profile.clone(), profile: phi }];
            verify_embedding_norms(g, &suite, p, EmbeddingOrder::Integer(k), &ctx)?
        }
        _ => unreachable!("checked by check_verifier"),
    };
    Ok((rep.lhs, rep.rhs))
}

/// Both sides of `‖φ/|x|^{Q/p}‖_p ≤ p‖log|x|·|x|^{−Q/p}Eφ‖_p` for the
/// log-power member: quadrature over the cut-off `u ∈ [1, 1+w]` and the
/// exact power tails beyond.
fn log_power_sides(p: f64, eps: f64, width: f64) -> Result<(f64, f64)> {
    families::check_log_member(eps, width)?;
    let r = interval_vec(
        |u, _, out| {
            let j = families::log_power_jet(Jet::var(u, 1), p, eps, width);
            out[0] = j.value().norm().powf(p);
            out[1] = (j.derivative(1) * u).norm().powf(p);
        },
        2,
        1.0,
        1.0 + width,
        &[],
        HALF_LINE_TOL,
    );
    // beyond u₀ = 1 + w: ∫ u^{−1−εp} du = u₀^{−εp}/(εp), and |uφ'|^p = (1/p+ε)^p u^{−1−εp}
    let u0: f64 = 1.0 + width;
    let tail = u0.powf(-eps * p) / (eps * p);
    let lhs = (r.values[0] + tail).powf(1.0 / p);
    let rhs = p * (r.values[1] + (1.0 / p + eps).powf(p) * tail).powf(1.0 / p);
    Ok((lhs, rhs))
}

/// Quotients of `verifier` along `family` at the given parameters (ordered
/// towards the extremal limit); members are evaluated in parallel.
pub fn ratio_curve(
    g: &HomogeneousGroup,
    family: &ExtremizerFamily,
    verifier: VerifierId,
    parameters: &[f64],
) -> Result<RatioCurve> {
    let target_constant = family.target_constant(g, verifier)?;
    if parameters.is_empty() {
        return Err(Error::Config("a ratio curve needs at least one parameter".into()));
    }
    let points = parameters
        .par_iter()
        .map(|&t| {
            let (lhs, rhs) = evaluate_member(g, family, verifier, t, DEFAULT_CUTOFF_WIDTH)?;
            Ok(CurvePoint { parameter: t, width: DEFAULT_CUTOFF_WIDTH, lhs, rhs, ratio: lhs / rhs })
        })
        .collect::<Result<Vec<_>>>()?;
    let monotone = points.windows(2).all(|w| w[1].ratio >= w[0].ratio - MONOTONE_TOLERANCE);
    let max_ratio = points.iter().map(|p| p.ratio).fold(f64::NEG_INFINITY, f64::max);
    let violations = points.iter().filter(|p| p.ratio > 1.0 + VIOLATION_TOLERANCE).count();
    Ok(RatioCurve {
        family: *family,
        verifier,
        group: g.name().into(),
        target_constant,
        points,
        monotone,
        max_ratio,
        violations,
    })
}

/// Pointwise check of the Hölder equality condition.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HolderWitness {
    /// Exponent `C` of the witness `|x|^{−C}` or `(log|x|)^C`.
    pub exponent: f64,
    pub points: usize,
    /// Largest relative mismatch of the two sides.
    pub max_residual: f64,
}

fn witness_residual(log_lhs: f64, log_rhs: f64) -> f64 {
    (log_lhs - log_rhs).exp_m1().abs()
}

/// `|1/C|^p(|Eg|/|x|^α)^p = (|g|^{p−1}/|x|^{α(p−1)})^{p/(p−1)}` on the
/// plateau `r ≤ 1` of a power-family member, where `g = |x|^{−C}` with `C`
/// minus the member's degree; `E g` comes from the member's jets.
pub fn holder_witness(g: &HomogeneousGroup, family: &ExtremizerFamily, eps: f64) -> Result<HolderWitness> {
    let ExtremizerFamily::PowerCutoff { p, alpha, .. } = *family else {
        return Err(Error::Config("the power Hölder witness needs a power_cutoff family".into()));
    };
    if g.q() <= alpha * p {
        return Err(Error::Config("the plateau r ≤ 1 exists for Q > αp only".into()));
    }
    let phi = family.member(g, eps, DEFAULT_CUTOFF_WIDTH)?;
    let c = -family.degree(g, eps).expect("power family");
    let cf = phi.closed_form().expect("members carry closed forms");
    let mut worst = 0.0f64;
    let mut points = 0;
    for u in phi.grid().nodes().filter(|u| (-10.0..0.0).contains(u)) {
        let jet = cf.jet(u, 1);
        let (gv, eg) = (jet.value().norm(), jet.derivative(1).norm());
        let log_lhs = p * ((eg).ln() - alpha * u) - p * c.abs().ln();
        let log_rhs = p / (p - 1.0) * ((p - 1.0) * gv.ln() - alpha * (p - 1.0) * u);
        worst = worst.max(witness_residual(log_lhs, log_rhs));
        points += 1;
    }
    Ok(HolderWitness { exponent: c, points, max_residual: worst })
}

/// `|1/C|^p(|Eh||log|x||/|x|^{Q/p})^p = (|h|^{p−1}/|x|^{Q(p−1)/p})^{p/(p−1)}`
/// for `h = (log|x|)^C` on the plateau `log r ≥ 1 + w` of a log-power member.
pub fn holder_witness_log(g: &HomogeneousGroup, p: f64, eps: f64) -> Result<HolderWitness> {
    families::check_log_member(eps, DEFAULT_CUTOFF_WIDTH)?;
    let c = -1.0 / p - eps;
    let q_dim = g.q();
    let u0 = 1.0 + DEFAULT_CUTOFF_WIDTH;
    let mut worst = 0.0f64;
    let mut points = 0;
    for i in 0..=200 {
        let u = u0 * (1.0 + i as f64 * 0.25);
        let jet = families::log_power_jet(Jet::var(u, 1), p, eps, DEFAULT_CUTOFF_WIDTH);
        let (h, eh) = (jet.value().norm(), jet.derivative(1).norm());
        let log_lhs = p * (eh.ln() + u.ln() - q_dim * u / p) - p * c.abs().ln();
        let log_rhs = p / (p - 1.0) * ((p - 1.0) * h.ln() - q_dim * (p - 1.0) * u / p);
        worst = worst.max(witness_residual(log_lhs, log_rhs));
        points += 1;
    }
    Ok(HolderWitness { exponent: c, points, max_residual: worst })
}
