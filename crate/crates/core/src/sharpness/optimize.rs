//! Derivative-free maximization of the normalized quotient over a family:
//! golden-section search on the log-parameter, or Nelder–Mead on
//! `(log parameter, log cut-off width)`.

use serde::{Deserialize, Serialize};

use super::{evaluate_member, ExtremizerFamily, DEFAULT_CUTOFF_WIDTH};
use crate::catalog::{Status, VerifierId};
use crate::error::{Error, Result};
use crate::group::HomogeneousGroup;

/// Default search range of `ε` for the power and log-power families.
pub const DEFAULT_EPS_RANGE: (f64, f64) = (0.005, 0.4);
/// Default search range of `ℓ` for the `f_ℓ` family.
pub const DEFAULT_ELL_RANGE: (f64, f64) = (1e2, 1e8);
/// Default search range of the cut-off width in two-parameter searches.
pub const DEFAULT_WIDTH_RANGE: (f64, f64) = (0.25, 4.0);
/// Convergence tolerance on the log-parameters.
const X_TOL: f64 = 1e-3;
/// Convergence tolerance on the spread of normalized ratios.
const F_TOL: f64 = 1e-10;
const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Box searched by [`optimize_ratio`]; the cut-off width is searched only
/// when `width` is set.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SearchSpace {
    pub parameter: (f64, f64),
    pub width: Option<(f64, f64)>,
}

impl SearchSpace {
    /// One-parameter default range of the family.
    pub fn for_family(family: &ExtremizerFamily) -> Self {
        let parameter = match family {
            ExtremizerFamily::SlzFl { .. } => DEFAULT_ELL_RANGE,
            _ => DEFAULT_EPS_RANGE,
        };
        Self { parameter, width: None }
    }

    pub fn with_width(mut self, lo: f64, hi: f64) -> Self {
        self.width = Some((lo, hi));
        self
    }

    fn check(&self) -> Result<()> {
        let ok = |(lo, hi): (f64, f64)| lo > 0.0 && lo <= hi && hi.is_finite();
        if !ok(self.parameter) || !self.width.is_none_or(ok) {
            return Err(Error::Config(format!("search ranges must satisfy 0 < lo ≤ hi < ∞, got {self:?}")));
        }
        Ok(())
    }
}

/// Best member found by [`optimize_ratio`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizeOutcome {
    pub family: ExtremizerFamily,
    pub verifier: VerifierId,
    pub parameter: f64,
    pub width: f64,
    /// Normalized ratio `lhs/rhs` of the best member.
    pub ratio: f64,
    pub target_constant: f64,
    pub evaluations: usize,
    pub converged: bool,
    /// `Pass` when converged, `Inconclusive` when the budget ran out first.
    pub status: Status,
}

struct Objective<'a> {
    g: &'a HomogeneousGroup,
    family: &'a ExtremizerFamily,
    verifier: VerifierId,
    evaluations: usize,
    best: (f64, f64, f64),
}

impl Objective<'_> {
    /// Ratio at `(log parameter, log width)`.
    fn eval(&mut self, t: f64, lw: f64) -> Result<f64> {
        let (param, width) = (t.exp(), lw.exp());
        let (lhs, rhs) = evaluate_member(self.g, self.family, self.verifier, param, width)?;
        let ratio = lhs / rhs;
        self.evaluations += 1;
        if ratio > self.best.2 || self.evaluations == 1 {
            self.best = (param, width, ratio);
        }
        Ok(ratio)
    }
}

/// Maximizes the normalized quotient of `verifier` over the family within
/// `budget` member evaluations. Deterministic: the golden-section bracket is
/// the search box, and the Nelder–Mead start simplex is fixed by the box.
/// If the budget runs out first, the best member so far is returned with
/// `converged = false` and status `Inconclusive`.
pub fn optimize_ratio(
    g: &HomogeneousGroup,
    family: &ExtremizerFamily,
    verifier: VerifierId,
    space: SearchSpace,
    budget: usize,
) -> Result<OptimizeOutcome> {
    let target_constant = family.target_constant(g, verifier)?;
    space.check()?;
    if budget == 0 {
        return Err(Error::Config("the evaluation budget must be positive".into()));
    }
    if space.width.is_some() && matches!(family, ExtremizerFamily::SlzFl { .. }) {
        return Err(Error::Config("the f_ℓ family has no cut-off width to search".into()));
    }
    let mut obj = Objective { g, family, verifier, evaluations: 0, best: (0.0, 0.0, f64::NEG_INFINITY) };
    let (lo, hi) = (space.parameter.0.ln(), space.parameter.1.ln());
    let converged = match space.width {
        None => golden(&mut obj, lo, hi, budget)?,
        Some((wl, wh)) => nelder_mead(&mut obj, [(lo, hi), (wl.ln(), wh.ln())], budget)?,
    };
    let (parameter, width, ratio) = obj.best;
    Ok(OptimizeOutcome {
        family: *family,
        verifier,
        parameter,
        width,
        ratio,
        target_constant,
        evaluations: obj.evaluations,
        converged,
        status: if converged { Status::Pass } else { Status::Inconclusive },
    })
}

fn golden(obj: &mut Objective, mut a: f64, mut b: f64, budget: usize) -> Result<bool> {
    let lw = DEFAULT_CUTOFF_WIDTH.ln();
    if b - a <= X_TOL {
        obj.eval(0.5 * (a + b), lw)?;
        return Ok(true);
    }
    // the ends are evaluated too, so that a maximum on the boundary is attained exactly
    obj.eval(a, lw)?;
    if obj.evaluations >= budget {
        return Ok(false);
    }
    obj.eval(b, lw)?;
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let (mut fc, mut fd) = (f64::NAN, f64::NAN);
    if obj.evaluations < budget {
        fc = obj.eval(c, lw)?;
    }
    if obj.evaluations < budget {
        fd = obj.eval(d, lw)?;
    }
    while b - a > X_TOL {
        if obj.evaluations >= budget {
            return Ok(false);
        }
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = obj.eval(c, lw)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = obj.eval(d, lw)?;
        }
    }
    Ok(true)
}

fn nelder_mead(obj: &mut Objective, bounds: [(f64, f64); 2], budget: usize) -> Result<bool> {
    let clamp = |x: [f64; 2]| [x[0].clamp(bounds[0].0, bounds[0].1), x[1].clamp(bounds[1].0, bounds[1].1)];
    let span = [bounds[0].1 - bounds[0].0, bounds[1].1 - bounds[1].0];
    let mid = [bounds[0].0 + 0.5 * span[0], bounds[1].0 + 0.5 * span[1]];
    let start = [mid, clamp([mid[0] - 0.25 * span[0], mid[1]]), clamp([mid[0], mid[1] + 0.25 * span[1]])];
    // minimize −ratio
    let mut simplex: Vec<([f64; 2], f64)> = Vec::with_capacity(3);
    for x in start {
        if obj.evaluations >= budget {
            return Ok(false);
        }
        let f = -obj.eval(x[0], x[1])?;
        simplex.push((x, f));
    }
    loop {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let size = simplex[1..]
            .iter()
            .map(|(x, _)| (x[0] - simplex[0].0[0]).abs().max((x[1] - simplex[0].0[1]).abs()))
            .fold(0.0, f64::max);
        if size <= X_TOL && (simplex[2].1 - simplex[0].1).abs() <= F_TOL.max(F_TOL * simplex[0].1.abs()) {
            return Ok(true);
        }
        if size <= X_TOL * 1e-3 {
            // collapsed onto a boundary corner: nothing left to explore
            return Ok(true);
        }
        if obj.evaluations >= budget {
            return Ok(false);
        }
        let centroid = [0.5 * (simplex[0].0[0] + simplex[1].0[0]), 0.5 * (simplex[0].0[1] + simplex[1].0[1])];
        let along = |t: f64| clamp([centroid[0] + t * (simplex[2].0[0] - centroid[0]), centroid[1] + t * (simplex[2].0[1] - centroid[1])]);
        let xr = along(-1.0);
        let fr = -obj.eval(xr[0], xr[1])?;
        if fr < simplex[0].1 {
            if obj.evaluations >= budget {
                simplex[2] = (xr, fr);
                return Ok(false);
            }
            let xe = along(-2.0);
            let fe = -obj.eval(xe[0], xe[1])?;
            simplex[2] = if fe < fr { (xe, fe) } else { (xr, fr) };
        } else if fr < simplex[1].1 {
            simplex[2] = (xr, fr);
        } else {
            if obj.evaluations >= budget {
                return Ok(false);
            }
            let xc = if fr < simplex[2].1 { along(-0.5) } else { along(0.5) };
            let fc = -obj.eval(xc[0], xc[1])?;
            if fc < simplex[2].1.min(fr) {
                simplex[2] = (xc, fc);
            } else {
                // shrink towards the best vertex
                let best = simplex[0].0;
                for v in simplex.iter_mut().skip(1) {
                    if obj.evaluations >= budget {
                        return Ok(false);
                    }
                    let x = [0.5 * (best[0] + v.0[0]), 0.5 * (best[1] + v.0[1])];
                    *v = (x, -obj.eval(x[0], x[1])?);
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degenerate_range_returns_its_member() {
        let g = HomogeneousGroup::euclidean(4);
        let fam = ExtremizerFamily::power(2.0, 0.0);
        let space = SearchSpace { parameter: (0.1, 0.1), width: None };
        let out = optimize_ratio(&g, &fam, VerifierId::SobolevLp, space, 10).unwrap();
        assert_eq!(out.evaluations, 1);
        assert!((out.parameter - 0.1).abs() < 1e-15);
        assert!(out.converged);
    }

    #[test]
    fn tiny_budget_is_inconclusive() {
        let g = HomogeneousGroup::euclidean(4);
        let fam = ExtremizerFamily::power(2.0, 0.0);
        let out = optimize_ratio(&g, &fam, VerifierId::SobolevLp, SearchSpace::for_family(&fam), 3).unwrap();
        assert!(!out.converged);
        assert_eq!(out.status, Status::Inconclusive);
        assert_eq!(out.evaluations, 3);
    }
}
