//! Weighted `L^p` and `L²` inequalities and their iterates.

use super::engine::{abs_pow, ew, integrate, Crossing};
use super::report::{identity_status, margin_status, relative_residual, Params, Status, SubCheck, VerificationReport};
use super::{check_exponent, skeleton, Context, VerifierId, CRITICAL_TOLERANCE, REMAINDER_FLOOR};
use crate::error::{Error, Result};
use crate::group::HomogeneousGroup;
use crate::jet::MAX_ORDER;
use crate::quadrature::GridMeta;
use crate::radial::RadialProfile;

/// `‖|x|^{−α}E^jφ‖²` for `j = 0..=k` and the remainder terms
/// `‖|x|^{−α}(E^mφ + cE^{m−1}φ)‖²`, `m = 1..=k`, with `c = (Q − 2α)/2`.
pub(crate) struct L2Chain {
    pub c: f64,
    pub norms: Vec<f64>,
    pub remainders: Vec<f64>,
    pub meta: GridMeta,
}

impl L2Chain {
    /// `Σ_m c^{2k−2m}·rem_m`, the total remainder of the telescoped identity.
    pub fn remainder(&self) -> f64 {
        let k = self.remainders.len();
        self.remainders
            .iter()
            .enumerate()
            .map(|(i, r)| self.c.powi(2 * (k - i - 1) as i32) * r)
            .sum()
    }

    /// `c^{2k}‖φ/|x|^α‖² + remainder`, the right side of the identity.
    pub fn identity_rhs(&self) -> f64 {
        let k = self.remainders.len();
        self.c.powi(2 * k as i32) * self.norms[0] + self.remainder()
    }
}

pub(crate) fn l2_chain(g: &HomogeneousGroup, phi: &RadialProfile, alpha: f64, k: usize) -> Result<L2Chain> {
    let c = 0.5 * (g.q() - 2.0 * alpha);
    let w = 2.0 * c;
    let r = integrate(g, phi, k, 2 * k + 1, &[], &[], |u, d, out| {
        let e = ew(w, u);
        for j in 0..=k {
            out[j] = d[j].norm_sqr() * e;
        }
        for m in 1..=k {
            out[k + m] = (d[m] + d[m - 1] * c).norm_sqr() * e;
        }
    })?;
    Ok(L2Chain { c, norms: r.values[..=k].to_vec(), remainders: r.values[k + 1..].to_vec(), meta: r.meta })
}

/// Report for the telescoped `L²` identity of order `k` and, for `c ≠ 0`, the
/// inequality `‖φ/|x|^α‖ ≤ |1/c|^k ‖|x|^{−α}E^kφ‖`.
pub(crate) fn l2_chain_report(
    id: VerifierId,
    g: &HomogeneousGroup,
    phi: &RadialProfile,
    alpha: f64,
    k: usize,
    params: Params,
    ctx: &Context,
) -> Result<VerificationReport> {
    let tol = &ctx.tolerances;
    let chain = l2_chain(g, phi, alpha, k)?;
    let mut rep = skeleton(id, g, ctx, params);
    let a = chain.norms[k];
    let b = chain.identity_rhs();
    let residual = relative_residual(a, b);
    let remainder = chain.remainder();
    rep.remainder = Some(remainder);
    rep.residual = Some(residual);
    rep.status = identity_status(residual, tol);
    rep.lhs = chain.norms[0].sqrt();
    if chain.c != 0.0 {
        rep.rhs = (1.0 / chain.c.abs()).powi(k as i32) * a.sqrt();
        rep.margin = Some(rep.rhs - rep.lhs);
        if margin_status(rep.lhs, rep.rhs, tol) == Status::Fail {
            rep.status = Status::Fail;
        }
    } else {
        rep.lhs = a;
        rep.rhs = b;
        rep.notes.push("Q = 2α: the inequality degenerates; lhs/rhs are the two sides of the identity".into());
    }
    rep.sub_checks.push(SubCheck::identity("telescoped_identity", a, b, tol));
    if !phi.is_zero() && chain.c != 0.0 {
        rep.sub_checks.push(SubCheck::positive("remainder_positive", remainder, REMAINDER_FLOOR * a));
    }
    rep.grid_meta = chain.meta;
    Ok(rep.finalize())
}

/// Weighted `L²` identity with remainder, and the weighted inequality for
/// `Q ≠ 2α`. Complex profiles are allowed.
pub fn verify_weighted_l2_identity(
    g: &HomogeneousGroup,
    phi: &RadialProfile,
    alpha: f64,
    ctx: &Context,
) -> Result<VerificationReport> {
    if !alpha.is_finite() {
        return Err(Error::Domain(format!("α must be finite, got {alpha}")));
    }
    let params = Params { alpha: Some(alpha), ..Default::default() };
    l2_chain_report(VerifierId::WeightedL2, g, phi, alpha, 1, params, ctx)
}

/// Iterated weighted inequality of order `k`. For `p = 2`: the telescoped
/// remainder identity and the inequality with constant `(2/|Q−2α|)^k`; for
/// `p ≠ 2`: the `L^p` iterate with constant `|p/(Q−αp)|^k`.
pub fn verify_higher_order(
    g: &HomogeneousGroup,
    phi: &RadialProfile,
    alpha: f64,
    k: usize,
    p: f64,
    ctx: &Context,
) -> Result<VerificationReport> {
    check_exponent("p", p)?;
    if k == 0 || k > MAX_ORDER - 1 {
        return Err(Error::Domain(format!("need 1 ≤ k ≤ {}, got k = {k}", MAX_ORDER - 1)));
    }
    let q = g.q();
    if (q - alpha * p).abs() <= CRITICAL_TOLERANCE {
        return Err(Error::Domain(format!(
            "the iterated inequality needs αp ≠ Q (Q ≠ 2α for p = 2), got Q = {q}, α = {alpha}, p = {p}"
        )));
    }
    let params = Params { p: Some(p), alpha: Some(alpha), k: Some(k as u32), ..Default::default() };
    if p == 2.0 {
        return l2_chain_report(VerifierId::HigherOrder, g, phi, alpha, k, params, ctx);
    }
    let c = q - alpha * p;
    let constant = (p / c).abs().powi(k as i32);
    let crossings: Vec<Crossing> = [0, k]
        .iter()
        .map(|&j| (0..=k).map(|i| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();
    let r = integrate(g, phi, k, 2, &[], &crossings, |u, d, out| {
        let e = ew(c, u);
        out[0] = abs_pow(d[0], p) * e;
        out[1] = abs_pow(d[k], p) * e;
    })?;
    let mut rep = skeleton(VerifierId::HigherOrder, g, ctx, params);
    rep.lhs = r.values[0].powf(1.0 / p);
    rep.rhs = constant * r.values[1].powf(1.0 / p);
    rep.margin = Some(rep.rhs - rep.lhs);
    rep.status = margin_status(rep.lhs, rep.rhs, &ctx.tolerances);
    rep.grid_meta = r.meta;
    Ok(rep.finalize())
}

/// Weighted `L^p` inequality; the logarithmic branch is taken when
/// `|αp − Q| ≤ 1e−12`.
pub fn verify_weighted_lp(
    g: &HomogeneousGroup,
    phi: &RadialProfile,
    p: f64,
    alpha: f64,
    ctx: &Context,
) -> Result<VerificationReport> {
    check_exponent("p", p)?;
    if !alpha.is_finite() {
        return Err(Error::Domain(format!("α must be finite, got {alpha}")));
    }
    let q = g.q();
    let params = Params { p: Some(p), alpha: Some(alpha), ..Default::default() };
    let mut rep = skeleton(VerifierId::WeightedLp, g, ctx, params);
    let crossings: Vec<Crossing> = vec![vec![1.0, 0.0], vec![0.0, 1.0]];
    let c = q - alpha * p;
    if c.abs() <= CRITICAL_TOLERANCE {
        // ‖φ/|x|^{Q/p}‖_p ≤ p‖log|x|·|x|^{−Q/p}Eφ‖_p: the weights reduce to du
        let r = integrate(g, phi, 1, 2, &[0.0], &crossings, |u, d, out| {
            out[0] = abs_pow(d[0], p);
            out[1] = abs_pow(d[1] * u, p);
        })?;
        rep.lhs = r.values[0].powf(1.0 / p);
        rep.rhs = p * r.values[1].powf(1.0 / p);
        rep.notes.push(format!("critical case αp = Q: logarithmic weight, constant p = {p}"));
        rep.grid_meta = r.meta;
    } else {
        let r = integrate(g, phi, 1, 2, &[], &crossings, |u, d, out| {
            let e = ew(c, u);
            out[0] = abs_pow(d[0], p) * e;
            out[1] = abs_pow(d[1], p) * e;
        })?;
        let constant = (p / c).abs();
        if c.abs() < 1e-2 * q {
            rep.notes.push(format!(
                "near-critical exponent: |Q − αp| = {:.3e}, constant |p/(Q−αp)| = {constant:.6e}",
                c.abs()
            ));
        }
        rep.lhs = r.values[0].powf(1.0 / p);
        rep.rhs = constant * r.values[1].powf(1.0 / p);
        rep.grid_meta = r.meta;
    }
    rep.margin = Some(rep.rhs - rep.lhs);
    rep.status = margin_status(rep.lhs, rep.rhs, &ctx.tolerances);
    Ok(rep.finalize())
}
