//! One verifier per inequality or identity of the Euler-operator calculus.
//!
//! Each verifier evaluates the left side, the right side and, where one is
//! known in closed form, the exact remainder of its statement for a radial
//! profile on a homogeneous group, and returns a [`VerificationReport`].
//! Norms are radial factors (`|℘| = 1`, see [`report`]); integrals over
//! the group reduce to integrals over the log-radius `u = log r`, where
//! `dx = r^Q du·dσ` and `E = d/du`.

mod engine;
mod fractional;
mod lp;
mod polar;
mod report;
mod slz;
mod weighted;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::HomogeneousGroup;

pub use fractional::{verify_embedding_norms, verify_fractional, verify_operator_algebra, EmbeddingOrder};
pub use lp::{verify_hardy_equivalence, verify_lp_sobolev, verify_lp_sobolev_identity, verify_poincare};
pub use polar::{verify_dilation, verify_polar, DEFAULT_DILATIONS};
pub use report::{relative_residual, Params, Status, SubCheck, Tolerances, VerificationReport};
pub(crate) use slz::check_slz_exponents;
pub use slz::{slz_parts, verify_slz, SlzParts};
pub use weighted::{verify_higher_order, verify_weighted_l2_identity, verify_weighted_lp};

/// Absolute tolerance of the test `αp = Q` selecting the logarithmic branch
/// of the weighted `L^p` inequality.
pub const CRITICAL_TOLERANCE: f64 = 1e-12;
/// Relative floor above which a remainder counts as strictly positive.
pub const REMAINDER_FLOOR: f64 = 1e-12;
/// Resolvent parameters of the default non-negativity check.
pub const DEFAULT_LAMBDAS: [f64; 13] = [1e-6, 1e-5, 1e-4, 1e-3, 1e-2, 1e-1, 1.0, 1e1, 1e2, 1e3, 1e4, 1e5, 1e6];

/// Settings shared by a verification run.
#[derive(Debug, Clone, PartialEq)]
pub struct Context {
    pub tolerances: Tolerances,
    /// Name under which the profile is reported.
    pub profile: String,
}

impl Context {
    pub fn new(profile: impl Into<String>) -> Self {
        Self { tolerances: Tolerances::default(), profile: profile.into() }
    }

    pub fn with_tolerances(mut self, tolerances: Tolerances) -> Self {
        self.tolerances = tolerances;
        self
    }
}

impl Default for Context {
    fn default() -> Self {
        Self::new("profile")
    }
}

/// Identifier of a verifier.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VerifierId {
    SobolevLp,
    Hardy,
    WeightedLp,
    WeightedL2,
    HigherOrder,
    Fractional,
    Embedding,
    Poincare,
    Slz,
    OperatorAlgebra,
    Dilation,
    Polar,
}

impl VerifierId {
    pub const ALL: [VerifierId; 12] = [
        VerifierId::SobolevLp,
        VerifierId::Hardy,
        VerifierId::WeightedLp,
        VerifierId::WeightedL2,
        VerifierId::HigherOrder,
        VerifierId::Fractional,
        VerifierId::Embedding,
        VerifierId::Poincare,
        VerifierId::Slz,
        VerifierId::OperatorAlgebra,
        VerifierId::Dilation,
        VerifierId::Polar,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            VerifierId::SobolevLp => "sobolev_lp",
            VerifierId::Hardy => "hardy",
            VerifierId::WeightedLp => "weighted_lp",
            VerifierId::WeightedL2 => "weighted_l2",
            VerifierId::HigherOrder => "higher_order",
            VerifierId::Fractional => "fractional",
            VerifierId::Embedding => "embedding",
            VerifierId::Poincare => "poincare",
            VerifierId::Slz => "slz",
            VerifierId::OperatorAlgebra => "operator_algebra",
            VerifierId::Dilation => "dilation",
            VerifierId::Polar => "polar",
        }
    }

    /// Statement, parameters and constant of the verifier.
    pub fn describe(&self) -> &'static str {
        match self {
            VerifierId::SobolevLp => "\
sobolev_lp — L^p Sobolev inequality for the Euler operator with remainder
  ‖f‖_p ≤ (p/Q)‖Ef‖_p, sharp constant p/Q, equality only for f = 0.
  Remainder identity (real f): ‖u‖_p^p − ‖v‖_p^p = p∫ I_p(v,u)|v − u|² dx
  with u = −(p/Q)Ef, v = f, I_p(h,g) = (p−1)∫₀¹|ξh + (1−ξ)g|^(p−2) ξ dξ.
  p = 2 (complex f): ‖Ef‖² = (Q/2)²‖f‖² + ‖Ef + (Q/2)f‖².
  parameters: p > 1",
            VerifierId::Hardy => "\
hardy — Hardy inequality obtained from the Sobolev inequality
  ‖f/|x|‖_p ≤ p/(Q−p)·‖Rf‖_p with R = d/d|x|, constant p/(Q−p); for p = 2
  the constant is 2/(Q−2) and the identity
  ‖E(g/|x|)‖² = (Q−1)‖g/|x|‖² + ‖dg/d|x|‖² is checked as well.
  parameters: 1 < p < Q",
            VerifierId::WeightedLp => "\
weighted_lp — weighted L^p inequality
  ‖f/|x|^α‖_p ≤ |p/(Q−αp)|·‖|x|^(−α)Ef‖_p for αp ≠ Q, constant |p/(Q−αp)|;
  critical case αp = Q: ‖f/|x|^(Q/p)‖_p ≤ p‖log|x|·|x|^(−Q/p)Ef‖_p,
  constant p.
  parameters: p > 1, α real",
            VerifierId::WeightedL2 => "\
weighted_l2 — weighted L² identity
  ‖|x|^(−α)Ef‖² = ((Q−2α)/2)²‖f/|x|^α‖² + ‖|x|^(−α)(Ef + ((Q−2α)/2)f)‖²,
  and for Q ≠ 2α the inequality ‖f/|x|^α‖ ≤ 2/|Q−2α|·‖|x|^(−α)Ef‖,
  constant 2/|Q−2α|, equality only for f = 0.
  parameters: α real",
            VerifierId::HigherOrder => "\
higher_order — iterated weighted inequality with telescoped remainder
  ‖|x|^(−α)E^k f‖² = c^(2k)‖f/|x|^α‖² + Σ_{m=1..k} c^(2k−2m)‖|x|^(−α)(E^m f + cE^(m−1)f)‖²,
  c = (Q−2α)/2, hence ‖f/|x|^α‖ ≤ (2/|Q−2α|)^k‖|x|^(−α)E^k f‖;
  for p ≠ 2 the L^p iterate with constant |p/(Q−αp)|^k.
  parameters: α real with Q ≠ 2α, k ≥ 1, p > 1 (default 2)",
            VerifierId::Fractional => "\
fractional — fractional powers |E|^β := A^(β/2), A = EE*
  moment inequality ‖|E|^(−β)f‖ ≤ C(k−β/2,k)‖f‖^(1−θ)‖A^(−k)f‖^θ, θ = Re β/2k,
  and the bound ‖f‖ ≤ C(k−β/2,k)(2/Q)^(Re β)‖|E|^β f‖, with
  C(b,k) = Γ(k+1)/|Γ(b)Γ(k−b)|·2^(k−Re b)/(Re b·(k−Re b)).
  parameters: Re β > 0, integer k > Re β/2",
            VerifierId::Embedding => "\
embedding — norm of the embedding of the Euler-Sobolev space into L^p
  sup ‖f‖_p/‖E^k f‖_p ≤ (p/Q)^k over a suite of profiles; fractional
  variant sup ‖f‖/‖|E|^β f‖ ≤ C(k−β/2,k)(2/Q)^(Re β).
  parameters: p > 1, k ≥ 1 (or β with Re β > 0 and k > Re β/2)",
            VerifierId::Poincare => "\
poincare — Poincaré type inequality on the ball B(0,R)
  ‖f‖_p ≤ (Rp/Q)‖(1/|x|)Ef‖_p for f supported in B(0,R), constant Rp/Q.
  parameters: p > 1, R > 0 (default: the numerical support radius)",
            VerifierId::Slz => "\
slz — Sobolev-Lorentz-Zygmund embedding with double-logarithmic weights
  (∫ (χ_{|x|<eR}|f−f(R)|^q + χ_{|x|>eR}|f−f(e²R)|^q) / (|log|log(eR/|x|)||^γ |log(eR/|x|)|) dx/|x|^Q)^(1/q)
    ≤ q/(γ−1)·(∫ |x|^(q−Q)|log(eR/|x|)|^(q−1)|log|log(eR/|x|)||^(q−γ)|Ef/|x||^q dx)^(1/q),
  sharp constant q/(γ−1); the halves on B(0,eR) and on its complement are
  checked separately.
  parameters: 1 < γ, max(1, γ−1) < q, R > 0",
            VerifierId::OperatorAlgebra => "\
operator_algebra — structure of the Euler operator on L²
  ‖Ef‖ = ‖E*f‖ with E* = −Q − E, ‖Af‖ = ‖E²f‖ for A = EE*, and the
  resolvent bound ‖(λ + A)^(−1)f‖ ≤ ‖f‖/λ for λ > 0 (constant 1).
  parameters: list of λ > 0",
            VerifierId::Dilation => "\
dilation — dilation covariance of the Sobolev quotient
  ‖f∘D_λ‖_p/‖E(f∘D_λ)‖_q = λ^(Q/q − Q/p)·‖f‖_p/‖Ef‖_q, so only p = q
  gives a dilation-invariant inequality.
  parameters: p > 1, q > 1, list of λ > 0",
            VerifierId::Polar => "\
polar — polar decomposition ∫_G f dx = ∫₀^∞∫_℘ f(ry) r^(Q−1) dσ(y) dr
  factorized (radial quadrature × Monte Carlo sphere integral) against a
  direct Monte Carlo estimate, agreement within mc_sigma pooled standard
  errors; the Euclidean sphere mass is compared with its exact value.
  parameters: samples, seed",
        }
    }

    /// Checks the parameters of one cell against the verifier's
    /// preconditions, naming the first offending key.
    pub fn check_params(&self, q_dim: f64, p: &Params) -> Result<()> {
        let need = |name: &str, v: Option<f64>| -> Result<f64> {
            v.ok_or_else(|| Error::Config(format!("{}: parameter '{name}' is required", self.as_str())))
        };
        let bad = |key: &str, msg: String| Err(Error::Config(format!("{}: {key}: {msg}", self.as_str())));
        let check_p = |v: f64, key: &str| -> Result<()> {
            if !(v > 1.0 && v.is_finite()) {
                return bad(key, format!("need {key} > 1, got {v}"));
            }
            Ok(())
        };
        match self {
            VerifierId::SobolevLp | VerifierId::WeightedLp | VerifierId::Poincare => {
                check_p(need("p", p.p)?, "p")?;
                if *self == VerifierId::WeightedLp {
                    need("alpha", p.alpha)?;
                }
                if let Some(r) = p.r {
                    if !(r > 0.0 && r.is_finite()) {
                        return bad("R", format!("need R > 0, got {r}"));
                    }
                }
            }
            VerifierId::Hardy => {
                let pv = need("p", p.p)?;
                check_p(pv, "p")?;
                if q_dim <= pv {
                    return bad("p", format!("need 1 < p < Q = {q_dim}, got p = {pv}"));
                }
            }
            VerifierId::WeightedL2 => {
                need("alpha", p.alpha)?;
            }
            VerifierId::HigherOrder => {
                let alpha = need("alpha", p.alpha)?;
                let k = p.k.ok_or_else(|| Error::Config("higher_order: parameter 'k' is required".into()))?;
                if k == 0 || k as usize > crate::jet::MAX_ORDER - 1 {
                    return bad("k", format!("need 1 ≤ k ≤ {}, got {k}", crate::jet::MAX_ORDER - 1));
                }
                let pv = p.p.unwrap_or(2.0);
                check_p(pv, "p")?;
                if (q_dim - alpha * pv).abs() <= CRITICAL_TOLERANCE {
                    return bad("alpha", format!("need αp ≠ Q (Q = 2α for p = 2), got Q = {q_dim}, α = {alpha}, p = {pv}"));
                }
            }
            VerifierId::Fractional | VerifierId::Embedding => {
                if *self == VerifierId::Embedding {
                    check_p(p.p.unwrap_or(2.0), "p")?;
                }
                let k = p.k.ok_or_else(|| Error::Config(format!("{}: parameter 'k' is required", self.as_str())))?;
                if k == 0 {
                    return bad("k", "need k ≥ 1".into());
                }
                if *self == VerifierId::Fractional || p.beta_re.is_some() {
                    let b = need("beta_re", p.beta_re)?;
                    if !(b > 0.0) {
                        return bad("beta_re", format!("need Re β > 0, got {b}"));
                    }
                    if !(k as f64 > 0.5 * b) {
                        return bad("k", format!("need k > Re β/2, got k = {k}, Re β = {b}"));
                    }
                    if p.p.is_some_and(|v| v != 2.0) {
                        return bad("p", "fractional powers are L² operators; need p = 2".into());
                    }
                }
            }
            VerifierId::Slz => {
                let g = need("gamma", p.gamma)?;
                let q = need("q", p.q)?;
                if !(g > 1.0 && g.is_finite()) {
                    return bad("gamma", format!("need 1 < γ < ∞, got {g}"));
                }
                if !(q > 1.0_f64.max(g - 1.0) && q.is_finite()) {
                    return bad("q", format!("need max(1, γ−1) < q < ∞, got q = {q}, γ = {g}"));
                }
                let r = need("R", p.r)?;
                if !(r > 0.0 && r.is_finite()) {
                    return bad("R", format!("need R > 0, got {r}"));
                }
            }
            VerifierId::OperatorAlgebra => {}
            VerifierId::Dilation => {
                check_p(need("p", p.p)?, "p")?;
                check_p(need("q", p.q)?, "q")?;
            }
            VerifierId::Polar => {
                if p.samples == Some(0) {
                    return bad("samples", "need at least one sample".into());
                }
            }
        }
        Ok(())
    }
}

impl fmt::Display for VerifierId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for VerifierId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .iter()
            .copied()
            .find(|v| v.as_str() == s)
            .ok_or_else(|| Error::Config(format!("unknown verifier id '{s}'")))
    }
}

/// Empty report skeleton for a verifier run.
pub(crate) fn skeleton(id: VerifierId, g: &HomogeneousGroup, ctx: &Context, parameters: Params) -> VerificationReport {
    VerificationReport {
        theorem_id: id.as_str().into(),
        group: g.name().into(),
        q_dim: g.q(),
        profile: ctx.profile.clone(),
        parameters,
        lhs: 0.0,
        rhs: 0.0,
        remainder: None,
        residual: None,
        margin: None,
        status: Status::Pass,
        sub_checks: Vec::new(),
        notes: Vec::new(),
        grid_meta: crate::quadrature::GridMeta::exact(),
    }
}

pub(crate) fn check_exponent(name: &str, p: f64) -> Result<()> {
    if !(p > 1.0 && p.is_finite()) {
        return Err(Error::Domain(format!("need {name} > 1, got {name} = {p}")));
    }
    Ok(())
}
