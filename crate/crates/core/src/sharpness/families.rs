//! Extremizer families: cut-off homogeneous functions, cut-off powers of
//! `log|x|`, and the three-piece sequence `f_ℓ` of the double-logarithmic
//! inequality.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::catalog::VerifierId;
use crate::error::{Error, Result};
use crate::group::HomogeneousGroup;
use crate::jet::Jet;
use crate::radial::{ClosedForm, LogGrid, RadialProfile};

/// Default log-width of the cut-off transition: `ζ = 1` for `r ≤ 1`,
/// `ζ = 0` for `r ≥ 2`.
pub const DEFAULT_CUTOFF_WIDTH: f64 = std::f64::consts::LN_2;
/// Default ε-grid of the power families.
pub const DEFAULT_EPSILONS: [f64; 5] = [0.4, 0.2, 0.1, 0.05, 0.025];
/// Default ℓ-grid of the `f_ℓ` family.
pub const DEFAULT_ELLS: [f64; 3] = [1e2, 1e4, 1e6];
/// `log(1e−14)`: the framed profile must fall below this (relative) level at
/// the grid ends.
const LOG_SUPPORT_LEVEL: f64 = -33.0;
/// Largest grid spacing of the power families.
const FAMILY_SPACING: f64 = 0.25;

/// A parametric family of near-extremal profiles.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum ExtremizerFamily {
    /// `φ_ε = r^{d}ζ(r)` with `d = α − Q/p + shift + ε` when `Q > αp`, and
    /// `φ_ε = r^{d}(1 − ζ(r))` with `d = α − Q/p − shift − ε` when `Q < αp`;
    /// `ζ` is a smooth step from 1 (`r ≤ 1`) to 0 (`r ≥ e^w`). `k` is the
    /// order of the iterated inequality the family is paired with
    /// (default 1, shift default 0).
    PowerCutoff {
        p: f64,
        alpha: f64,
        #[serde(default = "first_order")]
        k: u32,
        #[serde(default)]
        shift: f64,
    },
    /// `φ_ε = (log r)^{−1/p−ε}(1 − ζ(log r − 1))` for the logarithmic weight.
    LogPowerCutoff { p: f64 },
    /// The three-piece sequence `f_ℓ` supported in `B(0, R)`.
    SlzFl { q: f64, gamma: f64, radius: f64 },
}

fn first_order() -> u32 {
    1
}

impl ExtremizerFamily {
    /// The family of the iterated inequality of order `k`, homogeneous of
    /// degree `k − 1 − Q/2 + α` on its plateau (limit `ε → 0`).
    pub fn higher_order(alpha: f64, k: u32) -> Self {
        ExtremizerFamily::PowerCutoff { p: 2.0, alpha, k, shift: k as f64 - 1.0 }
    }

    /// The family of the first-order `L^p` inequalities with weight `|x|^{−α}`.
    pub fn power(p: f64, alpha: f64) -> Self {
        ExtremizerFamily::PowerCutoff { p, alpha, k: 1, shift: 0.0 }
    }

    pub fn name(&self) -> &'static str {
        match self {
            ExtremizerFamily::PowerCutoff { .. } => "power_cutoff",
            ExtremizerFamily::LogPowerCutoff { .. } => "log_power_cutoff",
            ExtremizerFamily::SlzFl { .. } => "slz_fl",
        }
    }

    /// Name of the primary parameter (`eps` or `ell`).
    pub fn parameter_name(&self) -> &'static str {
        match self {
            ExtremizerFamily::SlzFl { .. } => "ell",
            _ => "eps",
        }
    }

    /// Default parameter grid, ordered towards the extremal limit.
    pub fn default_parameters(&self) -> Vec<f64> {
        match self {
            ExtremizerFamily::SlzFl { .. } => DEFAULT_ELLS.to_vec(),
            _ => DEFAULT_EPSILONS.to_vec(),
        }
    }

    pub(crate) fn check(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(format!("{}: {msg}", self.name())));
        match *self {
            ExtremizerFamily::PowerCutoff { p, alpha, k, shift } => {
                if !(p > 1.0 && p.is_finite()) {
                    return bad(format!("need p > 1, got {p}"));
                }
                if !alpha.is_finite() || !(shift >= 0.0 && shift.is_finite()) {
                    return bad(format!("need finite α and shift ≥ 0, got α = {alpha}, shift = {shift}"));
                }
                if k == 0 {
                    return bad("need k ≥ 1".into());
                }
            }
            ExtremizerFamily::LogPowerCutoff { p } => {
                if !(p > 1.0 && p.is_finite()) {
                    return bad(format!("need p > 1, got {p}"));
                }
            }
            ExtremizerFamily::SlzFl { q, gamma, radius } => {
                crate::catalog::check_slz_exponents(q, gamma, radius)
                    .map_err(|e| Error::Config(format!("{}: {e}", self.name())))?;
            }
        }
        Ok(())
    }

    /// Checks that the family can probe the given verifier's constant.
    pub fn check_verifier(&self, g: &HomogeneousGroup, verifier: VerifierId) -> Result<()> {
        self.check()?;
        let mismatch = || {
            Err(Error::Config(format!(
                "family '{}' with these parameters cannot probe verifier '{verifier}'",
                self.name()
            )))
        };
        match (*self, verifier) {
            (ExtremizerFamily::PowerCutoff { p, alpha, k, .. }, v) => {
                let critical = (g.q() - alpha * p).abs() <= crate::catalog::CRITICAL_TOLERANCE;
                let ok = match v {
                    VerifierId::SobolevLp => alpha == 0.0 && k == 1,
                    VerifierId::WeightedLp => k == 1 && !critical,
                    VerifierId::WeightedL2 => p == 2.0 && k == 1 && !critical,
                    VerifierId::HigherOrder => !critical,
                    VerifierId::Embedding => alpha == 0.0,
                    _ => false,
                };
                if !ok {
                    return mismatch();
                }
            }
            (ExtremizerFamily::LogPowerCutoff { .. }, VerifierId::WeightedLp) => {}
            (ExtremizerFamily::SlzFl { .. }, VerifierId::Slz) => {}
            _ => return mismatch(),
        }
        Ok(())
    }

    /// Sharp constant of `verifier` that the family approaches.
    pub fn target_constant(&self, g: &HomogeneousGroup, verifier: VerifierId) -> Result<f64> {
        self.check_verifier(g, verifier)?;
        let q_dim = g.q();
        Ok(match *self {
            ExtremizerFamily::PowerCutoff { p, alpha, k, .. } => match verifier {
                VerifierId::Embedding => (p / q_dim).powi(k as i32),
                _ => (p / (q_dim - alpha * p)).abs().powi(k as i32),
            },
            ExtremizerFamily::LogPowerCutoff { p } => p,
            ExtremizerFamily::SlzFl { q, gamma, .. } => q / (gamma - 1.0),
        })
    }

    /// Homogeneity degree of a power-family member on its plateau.
    pub fn degree(&self, g: &HomogeneousGroup, eps: f64) -> Option<f64> {
        match *self {
            ExtremizerFamily::PowerCutoff { p, alpha, shift, .. } => {
                let s = if g.q() > alpha * p { 1.0 } else { -1.0 };
                Some(alpha - g.q() / p + s * (shift + eps))
            }
            _ => None,
        }
    }

    /// The member with parameter `eps` and cut-off width `width` as a
    /// profile (power family) or closed form on a covering grid (`f_ℓ`).
    pub fn member(&self, g: &HomogeneousGroup, param: f64, width: f64) -> Result<RadialProfile> {
        self.check()?;
        match *self {
            ExtremizerFamily::PowerCutoff { p, alpha, shift, .. } => {
                check_eps(param)?;
                check_width(width)?;
                let d = self.degree(g, param).expect("power family");
                let rate = shift + param;
                let frame = g.q() / p - alpha;
                let (form, grid) = if g.q() > alpha * p {
                    let form = ClosedForm::new(move |x: Jet| (x.scale(d)).exp() * (x * (1.0 / width)).smooth_step_down())
                        .with_kinks(vec![0.0, width]);
                    (form, LogGrid::covering(LOG_SUPPORT_LEVEL / rate - 1.0, width + 1.0, FAMILY_SPACING)?)
                } else {
                    let form = ClosedForm::new(move |x: Jet| {
                        let one = Jet::constant(1.0, x.order());
                        (x.scale(d)).exp() * (one - (x * (1.0 / width)).smooth_step_down())
                    })
                    .with_kinks(vec![0.0, width]);
                    (form, LogGrid::covering(-1.0, width - LOG_SUPPORT_LEVEL / rate + 1.0, FAMILY_SPACING)?)
                };
                RadialProfile::from_closed_form(grid, form, frame)
            }
            ExtremizerFamily::LogPowerCutoff { .. } => Err(Error::Argument(
                "log-power members decay algebraically in log r and are evaluated on the half-line, not on a grid"
                    .into(),
            )),
            ExtremizerFamily::SlzFl { q, gamma, radius } => slz_member(g, q, gamma, radius, param),
        }
    }
}

fn check_eps(eps: f64) -> Result<()> {
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::Config(format!(
            "eps must be positive (homogeneous profiles without cut-off are not in L^p), got {eps}"
        )));
    }
    Ok(())
}

fn check_width(width: f64) -> Result<()> {
    if !(width > 0.0 && width.is_finite()) {
        return Err(Error::Config(format!("cut-off width must be positive, got {width}")));
    }
    Ok(())
}

/// Log-power member `u ↦ (u^{−1/p−ε}(1 − ζ((u − 1)/w)))` at `u`, as a jet.
pub(crate) fn log_power_jet(x: Jet, p: f64, eps: f64, width: f64) -> Jet {
    let one = Jet::constant(1.0, x.order());
    let cut = one - ((x - 1.0) * (1.0 / width)).smooth_step_down();
    x.powf(-1.0 / p - eps) * cut
}

pub(crate) fn check_log_member(eps: f64, width: f64) -> Result<()> {
    check_eps(eps)?;
    check_width(width)
}

/// `f_ℓ` in the log-radius: constant `(log log(ℓeR))^a` for `r ≤ 1/ℓ`,
/// `(log log(eR/r))^a` up to `R/2`, the ramp `(log log 2e)^a (2/R)(R − r)` up
/// to `R`, and 0 beyond, with `a = (γ−1)/q`.
pub fn slz_fl_form(q: f64, gamma: f64, radius: f64, ell: f64) -> Result<ClosedForm> {
    crate::catalog::check_slz_exponents(q, gamma, radius)?;
    let ln_a = radius.ln() + 1.0;
    if !(ell.is_finite() && ell.ln() + ln_a > std::f64::consts::E) {
        return Err(Error::Domain(format!(
            "ell: need ℓeR > e^e so that log log log(ℓeR) is defined, got ℓ = {ell}, R = {radius}"
        )));
    }
    let a = (gamma - 1.0) / q;
    let (u_l, u_half, u_r) = (-ell.ln(), (0.5 * radius).ln(), radius.ln());
    let plateau = (ell.ln() + ln_a).ln().powf(a);
    let ramp = (2.0 * std::f64::consts::E).ln().ln().powf(a) * 2.0 / radius;
    let form = ClosedForm::new(move |x: Jet| {
        let u = x.re();
        if u < u_l {
            Jet::constant(plateau, x.order())
        } else if u < u_half {
            (x.scale(-1.0) + ln_a).ln().powf(a)
        } else if u < u_r {
            (x.exp().scale(-1.0) + radius).scale(Complex64::new(ramp, 0.0))
        } else {
            Jet::constant(0.0, x.order())
        }
    })
    .with_kinks(vec![u_l, u_half, u_r]);
    Ok(form)
}

fn slz_member(g: &HomogeneousGroup, q: f64, gamma: f64, radius: f64, ell: f64) -> Result<RadialProfile> {
    let form = slz_fl_form(q, gamma, radius, ell)?;
    let lo = (-ell.ln()).min(radius.ln()) + LOG_SUPPORT_LEVEL / g.q() - 2.0;
    let grid = LogGrid::covering(lo, radius.ln() + 6.0, 0.05)?;
    RadialProfile::from_closed_form(grid, form, g.q())
}
