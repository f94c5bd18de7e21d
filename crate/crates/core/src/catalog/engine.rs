//! Shared integration engine of the verifiers.
//!
//! Every quantity a verifier needs is an integral over the log-radius of a
//! pointwise expression in `u` and the Euler derivatives
//! `d_j = (E^jφ)(e^u)`, `j = 0..=order`. Closed forms with analytic
//! derivatives are integrated by piecewise tanh-sinh quadrature, split at the
//! kinks of the profile and at the sign changes of the expressions whose
//! absolute powers appear in the integrand (where `|·|^p` loses smoothness).
//! Sampled profiles fall back to trapezoid sums of spectral derivatives.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::group::HomogeneousGroup;
use crate::jet::MAX_ORDER;
use crate::quadrature::{real_line_vec, GridMeta, Level, Method, RefinePolicy};
use crate::radial::{euler_power, RadialProfile};

/// Relative tolerance of the piecewise quadrature.
pub(crate) const QUAD_TOL: f64 = 1e-12;
/// Relative size of a sampled integrand at the grid ends above which the sum
/// is rejected as truncated.
const EDGE_TOLERANCE: f64 = 1e-13;
const BISECTIONS: usize = 80;

/// Integrals produced by one engine run.
#[derive(Debug, Clone)]
pub(crate) struct Integrals {
    pub values: Vec<f64>,
    pub meta: GridMeta,
}

/// A linear combination `Re Σ_j c_j d_j` whose sign changes are break points.
pub(crate) type Crossing = Vec<f64>;

fn crossing_value(c: &Crossing, d: &[Complex64]) -> f64 {
    c.iter().zip(d).map(|(cj, dj)| cj * dj.re).sum()
}

/// Sign changes of `s` between consecutive `nodes`, refined by bisection.
pub(crate) fn roots_on(nodes: impl Iterator<Item = f64>, mut s: impl FnMut(f64) -> f64) -> Vec<f64> {
    let mut roots = Vec::new();
    let mut prev: Option<(f64, f64)> = None;
    for u in nodes {
        let v = s(u);
        if v == 0.0 || !v.is_finite() {
            continue;
        }
        if let Some((u0, v0)) = prev {
            if v0.signum() != v.signum() {
                let (mut a, mut b) = (u0, u);
                for _ in 0..BISECTIONS {
                    let m = 0.5 * (a + b);
                    if m <= a || m >= b {
                        break;
                    }
                    let vm = s(m);
                    if vm == 0.0 {
                        a = m;
                        b = m;
                        break;
                    }
                    if vm.signum() == v0.signum() {
                        a = m;
                    } else {
                        b = m;
                    }
                }
                roots.push(0.5 * (a + b));
            }
        }
        prev = Some((u, v));
    }
    roots
}

/// Roots of the crossings, located on the grid nodes and refined by bisection.
fn crossing_roots(
    phi: &RadialProfile,
    order: usize,
    crossings: &[Crossing],
    derivs: &impl Fn(f64, &mut [Complex64]),
) -> Vec<f64> {
    if crossings.is_empty() || !phi.is_real() {
        return Vec::new();
    }
    let mut d = vec![Complex64::new(0.0, 0.0); order + 1];
    let mut roots = Vec::new();
    for c in crossings {
        roots.extend(roots_on(phi.grid().nodes(), |u| {
            derivs(u, &mut d);
            crossing_value(c, &d)
        }));
    }
    roots
}

/// `∫ F(u, d₀, …, d_order) du` for a `dim`-valued integrand `F`.
///
/// `breaks` are extra log-radii where `F` is not smooth (for instance the
/// break of a `|u|^p` weight); `crossings` add the sign changes of real
/// linear combinations of the derivatives.
pub(crate) fn integrate(
    g: &HomogeneousGroup,
    phi: &RadialProfile,
    order: usize,
    dim: usize,
    breaks: &[f64],
    crossings: &[Crossing],
    f: impl Fn(f64, &[Complex64], &mut [f64]),
) -> Result<Integrals> {
    if order > MAX_ORDER - 1 {
        return Err(Error::Argument(format!("Euler order {order} exceeds {}", MAX_ORDER - 1)));
    }
    if let Some(cf) = phi.closed_form().filter(|c| c.has_euler()) {
        let derivs = |u: f64, d: &mut [Complex64]| {
            let jet = cf.jet(u, order);
            for (j, dj) in d.iter_mut().enumerate() {
                *dj = jet.derivative(j);
            }
        };
        let mut pts: Vec<f64> = cf.kinks().to_vec();
        pts.extend(breaks.iter().copied().filter(|b| b.is_finite()));
        pts.extend(crossing_roots(phi, order, crossings, &derivs));
        pts.sort_by(f64::total_cmp);
        pts.dedup();
        let grid = phi.grid();
        let mut d = vec![Complex64::new(0.0, 0.0); order + 1];
        let r = real_line_vec(
            |u, out| {
                derivs(u, &mut d);
                f(u, &d, out);
            },
            dim,
            (grid.u_min(), grid.u_max()),
            &pts,
            QUAD_TOL,
        );
        let meta = GridMeta::from_quad(&r);
        return Ok(Integrals { values: r.values, meta });
    }
    sampled(g, phi, order, dim, &f)
}

fn trapezoid_sums(
    g: &HomogeneousGroup,
    phi: &RadialProfile,
    order: usize,
    dim: usize,
    f: &impl Fn(f64, &[Complex64], &mut [f64]),
) -> Result<Vec<f64>> {
    let mut powers = Vec::with_capacity(order);
    for j in 1..=order {
        powers.push(euler_power(g, phi, j)?);
    }
    let grid = phi.grid();
    let n = grid.len();
    let mut sums = vec![0.0; dim];
    let mut peak = vec![0.0f64; dim];
    let mut edge = vec![0.0f64; dim];
    let mut d = vec![Complex64::new(0.0, 0.0); order + 1];
    let mut out = vec![0.0; dim];
    for (i, u) in grid.nodes().enumerate() {
        d[0] = phi.values()[i];
        for j in 1..=order {
            d[j] = powers[j - 1].values()[i];
        }
        out.iter_mut().for_each(|v| *v = 0.0);
        f(u, &d, &mut out);
        for k in 0..dim {
            sums[k] += out[k];
            peak[k] = peak[k].max(out[k].abs());
            if i == 0 || i == n - 1 {
                edge[k] = edge[k].max(out[k].abs());
            }
        }
    }
    for k in 0..dim {
        if edge[k] > EDGE_TOLERANCE * peak[k] {
            return Err(Error::Accuracy(format!(
                "integrand does not decay inside [{}, {}] (edge/peak = {:.3e})",
                grid.u_min(),
                grid.u_max(),
                edge[k] / peak[k]
            )));
        }
    }
    Ok(sums.into_iter().map(|s| s * grid.h()).collect())
}

/// Trapezoid sums of spectral derivatives; closed forms without analytic
/// derivatives are re-sampled on doubled grids until the sums stabilize.
fn sampled(
    g: &HomogeneousGroup,
    phi: &RadialProfile,
    order: usize,
    dim: usize,
    f: &impl Fn(f64, &[Complex64], &mut [f64]),
) -> Result<Integrals> {
    let policy = RefinePolicy::default();
    let mut values = trapezoid_sums(g, phi, order, dim, f)?;
    let mut levels = vec![Level { n: phi.grid().len(), value: values.first().copied().unwrap_or(0.0) }];
    if phi.closed_form().is_none() {
        let meta = GridMeta { method: Method::Trapezoid, levels, converged: true, error_estimate: 0.0 };
        return Ok(Integrals { values, meta });
    }
    let mut current = phi.clone();
    let mut change = f64::INFINITY;
    for _ in 0..policy.max_doublings {
        let Some(grid) = current.grid().refined() else { break };
        current = phi.resample(grid)?;
        let next = trapezoid_sums(g, &current, order, dim, f)?;
        change = next.iter().zip(&values).map(|(a, b)| (a - b).abs() / a.abs().max(b.abs()).max(f64::MIN_POSITIVE)).fold(0.0, f64::max);
        values = next;
        levels.push(Level { n: grid.len(), value: values.first().copied().unwrap_or(0.0) });
        if change <= policy.tol {
            let meta = GridMeta { method: Method::Trapezoid, levels, converged: true, error_estimate: change };
            return Ok(Integrals { values, meta });
        }
    }
    let meta = GridMeta { method: Method::Trapezoid, levels, converged: false, error_estimate: change };
    Ok(Integrals { values, meta })
}

/// `e^{c·u}`, equal to 1 for `c = 0` even where `u` is infinite.
pub(crate) fn ew(c: f64, u: f64) -> f64 {
    if c == 0.0 {
        1.0
    } else {
        (c * u).exp()
    }
}

/// `|z|^p`, exactly `|z|²` for `p = 2`.
pub(crate) fn abs_pow(z: Complex64, p: f64) -> f64 {
    if p == 2.0 {
        z.norm_sqr()
    } else {
        let a = z.norm();
        if a == 0.0 {
            0.0
        } else {
            a.powf(p)
        }
    }
}
