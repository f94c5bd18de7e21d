//! Weighted integrals and norms: radial integrals against `r^{Q−1}dr`,
//! power / log / double-log weighted `L^p` norms, the `I_p` kernel, Monte
//! Carlo estimates of the quasi-sphere measure, and the complex-to-real
//! reduction identity used to extend real-valued arguments to complex ones.

mod davies;
mod kernel;
mod log_scale;
mod radial;
mod sphere;
mod tanh_sinh;

use serde::{Deserialize, Serialize};

pub use davies::{davies_identity, DaviesCheck};
pub use kernel::{ip_kernel, ip_kernel_many};
pub use log_scale::{log_scale_integral_vec, LogPoint};
pub use radial::{
    radial_integral, radial_integral_with, weighted_lp_norm, LogArgument, RadialIntegral, Region,
    WeightSpec, WeightedNorm,
};
pub use sphere::{
    direct_group_integral_mc, pooled_deviation, separable_group_integral, sphere_integral_mc,
    McEstimate, SeparableEstimate, SphereMeasureEstimate, SHELL,
};
pub use tanh_sinh::{
    interval, interval_vec, real_line_vec, tanh_sinh, tanh_sinh_vec, QuadResult, DEFAULT_TOL,
};

/// How a reported quantity was computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    /// Trapezoid sums on doubled log-radius grids.
    Trapezoid,
    /// Piecewise double-exponential quadrature on closed forms.
    TanhSinh,
    /// Sampling estimate.
    MonteCarlo,
    /// Closed-form expression, no discretization.
    Exact,
}

/// One refinement level: grid size (or evaluation count) and the value obtained.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Level {
    pub n: usize,
    pub value: f64,
}

/// Refinement record attached to every computed quantity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridMeta {
    pub method: Method,
    pub levels: Vec<Level>,
    pub converged: bool,
    pub error_estimate: f64,
}

impl GridMeta {
    pub fn exact() -> Self {
        Self { method: Method::Exact, levels: Vec::new(), converged: true, error_estimate: 0.0 }
    }

    pub fn from_quad(r: &QuadResult) -> Self {
        Self {
            method: Method::TanhSinh,
            levels: vec![Level { n: r.evals, value: r.values.first().copied().unwrap_or(0.0) }],
            converged: r.converged,
            error_estimate: r.errors.iter().cloned().fold(0.0, f64::max),
        }
    }

    /// Combines the records of the quantities entering one report.
    pub fn merge(records: &[GridMeta]) -> Self {
        let method = records.first().map(|m| m.method).unwrap_or(Method::Exact);
        Self {
            method,
            levels: records.iter().flat_map(|m| m.levels.iter().copied()).collect(),
            converged: records.iter().all(|m| m.converged),
            error_estimate: records.iter().map(|m| m.error_estimate).fold(0.0, f64::max),
        }
    }
}

/// Grid-doubling policy: stop when the relative change drops below `tol`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RefinePolicy {
    pub tol: f64,
    pub max_doublings: usize,
}

impl Default for RefinePolicy {
    fn default() -> Self {
        Self { tol: 1e-9, max_doublings: 3 }
    }
}
