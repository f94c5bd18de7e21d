use serde::{Deserialize, Serialize};

use crate::quadrature::GridMeta;

/// Outcome of one check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    /// The check failed, but the quadrature had not stabilized, so the
    /// failure cannot be attributed to the inequality.
    Inconclusive,
}

/// Acceptance thresholds shared by all verifiers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Tolerances {
    /// Maximal relative residual of an identity.
    pub identity_rel: f64,
    /// Admissible negative margin, in units of the right-hand side
    /// (absolute when the right-hand side vanishes).
    pub margin_abs: f64,
    /// Admissible deviation of Monte Carlo estimates, in pooled standard errors.
    pub mc_sigma: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { identity_rel: 1e-6, margin_abs: 1e-10, mc_sigma: 3.0 }
    }
}

/// Parameters of one verification; absent entries do not apply.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Params {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta_re: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta_im: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none", rename = "R")]
    pub r: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

/// A secondary check carried by a report (the other half of an inequality,
/// an auxiliary identity, a positivity statement).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubCheck {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub residual: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub margin: Option<f64>,
    pub status: Status,
}

/// Result of verifying one theorem instance.
///
/// Norms are radial factors: the sphere mass `|℘|` multiplies both sides of
/// every statement identically and is omitted (`|℘| = 1`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub theorem_id: String,
    pub group: String,
    /// Homogeneous dimension of the group.
    #[serde(rename = "Q")]
    pub q_dim: f64,
    pub profile: String,
    pub parameters: Params,
    pub lhs: f64,
    pub rhs: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub remainder: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub residual: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub margin: Option<f64>,
    pub status: Status,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub sub_checks: Vec<SubCheck>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    pub grid_meta: GridMeta,
}

/// `|a − b| / max(|a|, |b|)`, zero when both vanish.
pub fn relative_residual(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}

pub(crate) fn identity_status(residual: f64, tol: &Tolerances) -> Status {
    if residual <= tol.identity_rel {
        Status::Pass
    } else {
        Status::Fail
    }
}

pub(crate) fn margin_status(lhs: f64, rhs: f64, tol: &Tolerances) -> Status {
    let slack = if rhs > 0.0 { tol.margin_abs * rhs } else { tol.margin_abs };
    if rhs - lhs >= -slack {
        Status::Pass
    } else {
        Status::Fail
    }
}

impl SubCheck {
    pub(crate) fn identity(name: &str, lhs: f64, rhs: f64, tol: &Tolerances) -> Self {
        let residual = relative_residual(lhs, rhs);
        Self {
            name: name.into(),
            lhs,
            rhs,
            residual: Some(residual),
            margin: None,
            status: identity_status(residual, tol),
        }
    }

    pub(crate) fn inequality(name: &str, lhs: f64, rhs: f64, tol: &Tolerances) -> Self {
        Self {
            name: name.into(),
            lhs,
            rhs,
            residual: None,
            margin: Some(rhs - lhs),
            status: margin_status(lhs, rhs, tol),
        }
    }

    /// `value > floor`: strict positivity of a remainder.
    pub(crate) fn positive(name: &str, value: f64, floor: f64) -> Self {
        Self {
            name: name.into(),
            lhs: value,
            rhs: floor,
            residual: None,
            margin: Some(value - floor),
            status: if value > floor { Status::Pass } else { Status::Fail },
        }
    }
}

impl VerificationReport {
    /// Combines the main status with the sub-checks; a failure whose
    /// quadrature had not converged is reported as inconclusive.
    pub(crate) fn finalize(mut self) -> Self {
        let any_fail = self.status != Status::Pass || self.sub_checks.iter().any(|c| c.status == Status::Fail);
        self.status = if !any_fail {
            Status::Pass
        } else if self.grid_meta.converged {
            Status::Fail
        } else {
            Status::Inconclusive
        };
        self
    }

    /// Sort key used to order reports deterministically.
    pub fn sort_key(&self) -> (String, String, String, String) {
        (
            self.theorem_id.clone(),
            self.group.clone(),
            serde_json_like(&self.parameters),
            self.profile.clone(),
        )
    }
}

/// A stable textual rendering of the parameters for ordering purposes.
fn serde_json_like(p: &Params) -> String {
    let f = |name: &str, v: Option<f64>| v.map(|x| format!("{name}={x:+.17e};")).unwrap_or_default();
    format!(
        "{}{}{}{}{}{}{}{}{}{}{}",
        f("p", p.p),
        f("q", p.q),
        f("alpha", p.alpha),
        p.k.map(|k| format!("k={k:04};")).unwrap_or_default(),
        f("beta_re", p.beta_re),
        f("beta_im", p.beta_im),
        f("gamma", p.gamma),
        f("R", p.r),
        f("lambda", p.lambda),
        p.samples.map(|s| format!("samples={s:020};")).unwrap_or_default(),
        p.seed.map(|s| format!("seed={s:020};")).unwrap_or_default(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn residual_and_margin_rules() {
        assert_eq!(relative_residual(0.0, 0.0), 0.0);
        assert!((relative_residual(1.0, 1.1) - 0.1 / 1.1).abs() < 1e-15);
        let tol = Tolerances::default();
        assert_eq!(margin_status(1.0, 1.0, &tol), Status::Pass);
        assert_eq!(margin_status(1.0 + 1e-11, 1.0, &tol), Status::Pass);
        assert_eq!(margin_status(1.0 + 1e-9, 1.0, &tol), Status::Fail);
        assert_eq!(margin_status(0.0, 0.0, &tol), Status::Pass);
    }

    #[test]
    fn unconverged_failures_are_inconclusive() {
        let mut meta = GridMeta::exact();
        meta.converged = false;
        let r = VerificationReport {
            theorem_id: "x".into(),
            group: "g".into(),
            q_dim: 3.0,
            profile: "p".into(),
            parameters: Params::default(),
            lhs: 2.0,
            rhs: 1.0,
            remainder: None,
            residual: None,
            margin: Some(-1.0),
            status: Status::Fail,
            sub_checks: vec![],
            notes: vec![],
            grid_meta: meta,
        };
        assert_eq!(r.finalize().status, Status::Inconclusive);
    }
}
