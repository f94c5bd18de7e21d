use num_complex::Complex64;

use super::profile::{ClosedForm, RadialProfile};
use super::spectral;
use crate::error::{Error, Result};
use crate::group::HomogeneousGroup;
use crate::jet::{Jet, MAX_ORDER};

/// A Fourier multiplier acting in the log-radius after the unitary map
/// `(Uφ)(u) = e^{Qu/2} φ(e^u)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OperatorSymbol {
    /// `iξ − Q/2`, i.e. `E` itself.
    Euler,
    /// `ξ² + Q²/4`, i.e. `A = EE*`.
    A,
    /// `1/(λ + ξ² + Q²/4)`, i.e. `(λ + A)⁻¹`, for `λ > 0`.
    Resolvent(f64),
    /// `(ξ² + Q²/4)^{β/2}`, i.e. `|E|^β := A^{β/2}`.
    Fractional(Complex64),
}

impl OperatorSymbol {
    /// Value of the multiplier at frequency `xi` for homogeneous dimension `q`.
    pub fn eval(&self, xi: f64, q: f64) -> Complex64 {
        let a = xi * xi + 0.25 * q * q;
        match *self {
            OperatorSymbol::Euler => Complex64::new(-0.5 * q, xi),
            OperatorSymbol::A => Complex64::new(a, 0.0),
            OperatorSymbol::Resolvent(lambda) => Complex64::new(1.0 / (lambda + a), 0.0),
            OperatorSymbol::Fractional(beta) => (beta * 0.5 * a.ln()).exp(),
        }
    }
}

/// Closed form of `E^k φ` built from the jets of `φ`.
fn euler_form(form: &ClosedForm, k: usize) -> Option<ClosedForm> {
    if !form.has_euler() {
        return None;
    }
    let base = form.clone();
    Some(
        ClosedForm::new(move |x: Jet| {
            let order = (x.order() + k).min(MAX_ORDER);
            let t = base.jet(x.re(), order);
            let coeffs: Vec<Complex64> = (0..=x.order().min(order - k))
                .map(|j| {
                    // Taylor coefficient j of the k-th derivative
                    let falling: f64 = (j + 1..=j + k).map(|i| i as f64).product();
                    t.coeff(j + k) * falling
                })
                .collect();
            x.taylor_compose(&coeffs)
        })
        .with_kinks(form.kinks().to_vec()),
    )
}

fn check_order(k: usize) -> Result<()> {
    if k == 0 {
        return Err(Error::Argument("Euler power must be at least 1".into()));
    }
    if k > MAX_ORDER {
        return Err(Error::Argument(format!("Euler power {k} exceeds {MAX_ORDER}")));
    }
    Ok(())
}

/// `E^k φ`, exactly from the closed form when an analytic derivative is
/// attached, otherwise by one application of the symbol `(iξ − c)^k` to the
/// framed samples.
pub fn euler_power(_g: &HomogeneousGroup, phi: &RadialProfile, k: usize) -> Result<RadialProfile> {
    check_order(k)?;
    phi.check_support()?;
    let grid = *phi.grid();
    if let Some(form) = phi.closed_form().and_then(|f| euler_form(f, k)) {
        let values = grid.nodes().map(|u| form.value(u)).collect();
        return Ok(RadialProfile::derived(grid, values, phi.frame()).with_closed_form(Some(form)));
    }
    let c = phi.frame();
    let d = spectral::apply_symbol(&phi.framed(), grid.h(), |xi| Complex64::new(-c, xi).powu(k as u32));
    let values = grid.nodes().zip(d).map(|(u, w)| w * (-c * u).exp()).collect();
    Ok(RadialProfile::derived(grid, values, c))
}

/// `Eφ = r φ'(r)`.
pub fn euler_apply(g: &HomogeneousGroup, phi: &RadialProfile) -> Result<RadialProfile> {
    euler_power(g, phi, 1)
}

/// `E*φ = −Qφ − Eφ`, the formal adjoint in `L²(G)`.
pub fn euler_adjoint_apply(g: &HomogeneousGroup, phi: &RadialProfile) -> Result<RadialProfile> {
    let e = euler_apply(g, phi)?;
    let q = g.q();
    let values = phi.values().iter().zip(e.values()).map(|(v, d)| -q * v - d).collect();
    let form = match (phi.closed_form(), e.closed_form()) {
        (Some(f), Some(df)) => {
            let (f, df) = (f.clone(), df.clone());
            Some(ClosedForm::new(move |x: Jet| -(f.jet_at(x) * q) - df.jet_at(x)))
        }
        _ => None,
    };
    Ok(RadialProfile::derived(*phi.grid(), values, phi.frame()).with_closed_form(form))
}

/// `U⁻¹ m(ξ) U φ`. The result is returned in the frame `Q/2`.
pub fn multiplier_apply(
    g: &HomogeneousGroup,
    phi: &RadialProfile,
    sym: OperatorSymbol,
) -> Result<RadialProfile> {
    if let OperatorSymbol::Resolvent(lambda) = sym {
        if !(lambda.is_finite() && lambda > 0.0) {
            return Err(Error::Argument(format!("resolvent parameter must be positive, got {lambda}")));
        }
    }
    phi.check_support()?;
    let q = g.q();
    let grid = *phi.grid();
    let conj = RadialProfile::derived(grid, phi.values().to_vec(), 0.5 * q);
    conj.check_support()
        .map_err(|e| Error::Accuracy(format!("e^(Qu/2)·φ does not decay inside the grid: {e}")))?;
    let w = spectral::apply_symbol(&conj.framed(), grid.h(), |xi| sym.eval(xi, q));
    let values = grid.nodes().zip(w).map(|(u, v)| v * (-0.5 * q * u).exp()).collect();
    Ok(RadialProfile::derived(grid, values, 0.5 * q))
}

/// `⟨φ, ψ⟩ = ∫₀^∞ φ ψ̄ r^{Q−1} dr` (radial factor only), trapezoid rule in `u`.
pub fn l2_inner(g: &HomogeneousGroup, phi: &RadialProfile, psi: &RadialProfile) -> Result<Complex64> {
    if phi.grid() != psi.grid() {
        return Err(Error::Argument("profiles live on different grids".into()));
    }
    let q = g.q();
    let h = phi.grid().h();
    Ok(phi
        .grid()
        .nodes()
        .zip(phi.values().iter().zip(psi.values()))
        .map(|(u, (a, b))| a * b.conj() * (q * u).exp())
        .sum::<Complex64>()
        * h)
}

/// `‖φ‖ = (∫₀^∞ |φ|² r^{Q−1} dr)^{1/2}` (radial factor only).
pub fn l2_norm(g: &HomogeneousGroup, phi: &RadialProfile) -> f64 {
    let q = g.q();
    let h = phi.grid().h();
    (phi.grid()
        .nodes()
        .zip(phi.values())
        .map(|(u, v)| v.norm_sqr() * (q * u).exp())
        .sum::<f64>()
        * h)
        .sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::radial::LogGrid;

    fn gauss(grid: LogGrid) -> RadialProfile {
        RadialProfile::from_closed_form(grid, ClosedForm::new(|x: Jet| (-(x * x)).exp()), 0.0).unwrap()
    }

    #[test]
    fn gaussian_log_derivative() {
        let g = HomogeneousGroup::euclidean(3);
        let grid = LogGrid::new(-12.0, 12.0, 1024).unwrap();
        let p = gauss(grid);
        let e = euler_apply(&g, &p).unwrap();
        let bare = RadialProfile::from_values(grid, p.values().to_vec()).unwrap();
        let es = euler_apply(&g, &bare).unwrap();
        for (j, u) in grid.nodes().enumerate() {
            let exact = -2.0 * u * (-u * u).exp();
            assert!((e.values()[j].re - exact).abs() < 1e-14);
            assert!((es.values()[j].re - exact).abs() < 1e-11);
        }
    }

    #[test]
    fn closed_form_powers_compose() {
        let g = HomogeneousGroup::heisenberg();
        let p = gauss(LogGrid::new(-12.0, 12.0, 1024).unwrap());
        let e2 = euler_power(&g, &p, 2).unwrap();
        let ee = euler_apply(&g, &euler_apply(&g, &p).unwrap()).unwrap();
        for (a, b) in e2.values().iter().zip(ee.values()) {
            assert!((a - b).norm() < 1e-12);
        }
        assert!(euler_power(&g, &p, 0).is_err());
    }

    #[test]
    fn a_symbol_is_e_times_adjoint() {
        let g = HomogeneousGroup::heisenberg();
        let p = gauss(LogGrid::new(-12.0, 12.0, 1024).unwrap());
        let a = multiplier_apply(&g, &p, OperatorSymbol::A).unwrap();
        let ea = euler_apply(&g, &euler_adjoint_apply(&g, &p).unwrap()).unwrap();
        let scale = l2_norm(&g, &a);
        let diff = a.axpy(Complex64::new(-1.0, 0.0), &ea).unwrap();
        assert!(l2_norm(&g, &diff) <= 1e-8 * scale);
        assert!(multiplier_apply(&g, &p, OperatorSymbol::Resolvent(0.0)).is_err());
    }
}
