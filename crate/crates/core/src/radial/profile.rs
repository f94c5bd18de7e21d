use std::fmt;
use std::sync::{Arc, OnceLock};

use num_complex::Complex64;

use super::grid::LogGrid;
use super::spectral;
use crate::error::{Error, Result};
use crate::jet::Jet;

/// Relative size below which a profile counts as vanished at the grid ends.
pub const SUPPORT_TOLERANCE: f64 = 1e-14;

type JetFn = Arc<dyn Fn(Jet) -> Jet + Send + Sync>;

/// A closed-form radial function, parameterized by the log-radius `u = log r`
/// and evaluated on jets so that Euler powers are exact.
#[derive(Clone)]
pub struct ClosedForm {
    f: JetFn,
    kinks: Vec<f64>,
    exact_euler: bool,
}

impl fmt::Debug for ClosedForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ClosedForm")
            .field("kinks", &self.kinks)
            .field("exact_euler", &self.exact_euler)
            .finish()
    }
}

impl ClosedForm {
    pub fn new(f: impl Fn(Jet) -> Jet + Send + Sync + 'static) -> Self {
        Self { f: Arc::new(f), kinks: Vec::new(), exact_euler: true }
    }

    /// Log-radii where the function is only piecewise smooth; quadrature
    /// splits there.
    pub fn with_kinks(mut self, kinks: Vec<f64>) -> Self {
        self.kinks = kinks;
        self
    }

    /// Detaches the analytic derivative: the values stay exact but Euler
    /// derivatives are taken spectrally from grid samples.
    pub fn values_only(mut self) -> Self {
        self.exact_euler = false;
        self
    }

    pub fn has_euler(&self) -> bool {
        self.exact_euler
    }

    pub fn kinks(&self) -> &[f64] {
        &self.kinks
    }

    pub fn jet(&self, u: f64, order: usize) -> Jet {
        (self.f)(Jet::var(u, order))
    }

    /// The closed form applied to an arbitrary jet.
    pub fn jet_at(&self, x: Jet) -> Jet {
        (self.f)(x)
    }

    pub fn value(&self, u: f64) -> Complex64 {
        self.jet(u, 0).value()
    }

    /// `(E^k φ)(e^u)`.
    pub fn euler(&self, u: f64, k: usize) -> Complex64 {
        self.jet(u, k).derivative(k)
    }

    /// `u ↦ φ(e^{u+s})`, i.e. composition with the dilation by `e^s`.
    pub fn shifted(&self, s: f64) -> Self {
        let f = self.f.clone();
        Self {
            f: Arc::new(move |x: Jet| f(x + s)),
            kinks: self.kinks.iter().map(|k| k - s).collect(),
            exact_euler: self.exact_euler,
        }
    }

    pub fn scaled(&self, z: Complex64) -> Self {
        let f = self.f.clone();
        Self { f: Arc::new(move |x: Jet| f(x).scale(z)), ..self.clone() }
    }

    /// `φ(r)·r^s`.
    pub fn times_radius_power(&self, s: f64) -> Self {
        let f = self.f.clone();
        Self { f: Arc::new(move |x: Jet| f(x) * (x * s).exp()), ..self.clone() }
    }
}

/// A radial function `φ(r)` sampled at `r_j = e^{u_j}` on a [`LogGrid`].
///
/// `frame` is the exponent `c` for which `e^{cu}·φ(e^u)` decays at both grid
/// ends; spectral differentiation acts on that product. Built-in profiles
/// with Gaussian decay in `u` use `c = 0`.
#[derive(Clone)]
pub struct RadialProfile {
    grid: LogGrid,
    values: Vec<Complex64>,
    frame: f64,
    closed_form: Option<ClosedForm>,
    spectrum: OnceLock<Vec<Complex64>>,
}

impl fmt::Debug for RadialProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RadialProfile")
            .field("grid", &self.grid)
            .field("frame", &self.frame)
            .field("closed_form", &self.closed_form)
            .finish_non_exhaustive()
    }
}

impl RadialProfile {
    pub fn from_values(grid: LogGrid, values: Vec<Complex64>) -> Result<Self> {
        Self::from_values_in_frame(grid, values, 0.0)
    }

    pub fn from_values_in_frame(grid: LogGrid, values: Vec<Complex64>, frame: f64) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::Argument(format!(
                "{} values for a grid of {} nodes",
                values.len(),
                grid.len()
            )));
        }
        let p = Self::derived(grid, values, frame);
        p.check_support()?;
        Ok(p)
    }

    pub fn from_closed_form(grid: LogGrid, form: ClosedForm, frame: f64) -> Result<Self> {
        let values = grid.nodes().map(|u| form.value(u)).collect();
        let mut p = Self::derived(grid, values, frame);
        p.closed_form = Some(form);
        p.check_support()?;
        Ok(p)
    }

    /// Builds a profile without the support check (intermediate results).
    pub(crate) fn derived(grid: LogGrid, values: Vec<Complex64>, frame: f64) -> Self {
        Self { grid, values, frame, closed_form: None, spectrum: OnceLock::new() }
    }

    pub(crate) fn with_closed_form(mut self, form: Option<ClosedForm>) -> Self {
        self.closed_form = form;
        self
    }

    pub fn zero(grid: LogGrid) -> Self {
        let form = ClosedForm::new(|x: Jet| Jet::constant(0.0, x.order()));
        Self::from_closed_form(grid, form, 0.0).expect("zero profile is supported")
    }

    pub fn grid(&self) -> &LogGrid {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn frame(&self) -> f64 {
        self.frame
    }

    pub fn closed_form(&self) -> Option<&ClosedForm> {
        self.closed_form.as_ref()
    }

    pub fn is_real(&self) -> bool {
        self.values.iter().all(|v| v.im == 0.0)
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| *v == Complex64::new(0.0, 0.0))
    }

    /// Samples multiplied by `e^{frame·u}`.
    pub(crate) fn framed(&self) -> Vec<Complex64> {
        self.grid.nodes().zip(&self.values).map(|(u, v)| v * (self.frame * u).exp()).collect()
    }

    /// Checks that the framed samples vanish (relative to their maximum) at
    /// both ends of the grid; the periodic Fourier path would wrap otherwise.
    pub fn check_support(&self) -> Result<()> {
        let w = self.framed();
        let peak = w.iter().map(|v| v.norm()).fold(0.0, f64::max);
        if peak == 0.0 {
            return Ok(());
        }
        let n = w.len();
        let edge = w[0].norm().max(w[1].norm()).max(w[n - 1].norm()).max(w[n - 2].norm());
        if edge > SUPPORT_TOLERANCE * peak {
            return Err(Error::Accuracy(format!(
                "profile reaches the grid boundary: edge/peak = {:.3e} on [{}, {}]",
                edge / peak,
                self.grid.u_min(),
                self.grid.u_max()
            )));
        }
        Ok(())
    }

    fn spectrum(&self) -> &[Complex64] {
        self.spectrum.get_or_init(|| spectral::forward(&self.framed()))
    }

    /// `φ(e^u)` at an arbitrary log-radius: closed form when attached,
    /// trigonometric interpolation of the samples otherwise.
    pub fn eval(&self, u: f64) -> Complex64 {
        if let Some(cf) = &self.closed_form {
            return cf.value(u);
        }
        if u < self.grid.u_min() || u >= self.grid.u_max() {
            return Complex64::new(0.0, 0.0);
        }
        let t = u - self.grid.u_min();
        spectral::interpolate(self.spectrum(), self.grid.h(), t) * (-self.frame * u).exp()
    }

    /// `(E^k φ)(e^u)` at an arbitrary log-radius.
    pub fn euler_eval(&self, u: f64, k: usize) -> Complex64 {
        if let Some(cf) = self.closed_form.as_ref().filter(|c| c.has_euler()) {
            return cf.euler(u, k);
        }
        if u < self.grid.u_min() || u >= self.grid.u_max() {
            return Complex64::new(0.0, 0.0);
        }
        // E^k = e^{-cu} (d/du − c)^k e^{cu}
        let h = self.grid.h();
        let xi = spectral::wavenumbers(self.grid.len(), h);
        let c = self.frame;
        let n = xi.len();
        let coeffs: Vec<Complex64> = self
            .spectrum()
            .iter()
            .enumerate()
            .map(|(j, cj)| {
                let m = if j == n / 2 {
                    0.5 * ((Complex64::new(-c, xi[j])).powu(k as u32)
                        + (Complex64::new(-c, -xi[j])).powu(k as u32))
                } else {
                    Complex64::new(-c, xi[j]).powu(k as u32)
                };
                cj * m
            })
            .collect();
        spectral::interpolate(&coeffs, h, u - self.grid.u_min()) * (-c * u).exp()
    }

    /// Re-samples the closed form on another grid.
    pub fn resample(&self, grid: LogGrid) -> Result<Self> {
        let cf = self.closed_form.clone().ok_or_else(|| {
            Error::Argument("resampling needs a closed-form profile".into())
        })?;
        Self::from_closed_form(grid, cf, self.frame)
    }

    /// The dilated profile `r ↦ φ(λr)` on the same grid.
    pub fn dilate(&self, lambda: f64) -> Result<Self> {
        if !(lambda.is_finite() && lambda > 0.0) {
            return Err(Error::Argument(format!("dilation factor must be positive, got {lambda}")));
        }
        let s = lambda.ln();
        if let Some(cf) = &self.closed_form {
            return Self::from_closed_form(self.grid, cf.shifted(s), self.frame);
        }
        let c = self.frame;
        let shifted =
            spectral::apply_symbol(&self.framed(), self.grid.h(), |xi| Complex64::from_polar(1.0, xi * s));
        let values = self
            .grid
            .nodes()
            .zip(shifted)
            .map(|(u, w)| w * (-c * (u + s)).exp())
            .collect();
        Self::from_values_in_frame(self.grid, values, c)
    }

    pub fn scale(&self, z: Complex64) -> Self {
        let values = self.values.iter().map(|v| v * z).collect();
        Self::derived(self.grid, values, self.frame)
            .with_closed_form(self.closed_form.as_ref().map(|c| c.scaled(z)))
    }

    /// `φ(r)·r^s`; the frame shifts so that the framed samples are unchanged.
    pub fn times_radius_power(&self, s: f64) -> Self {
        let values = self.grid.nodes().zip(&self.values).map(|(u, v)| v * (s * u).exp()).collect();
        Self::derived(self.grid, values, self.frame - s)
            .with_closed_form(self.closed_form.as_ref().map(|c| c.times_radius_power(s)))
    }

    /// Pointwise linear combination `self + z·other` (same grid and frame).
    pub fn axpy(&self, z: Complex64, other: &RadialProfile) -> Result<Self> {
        if self.grid != other.grid {
            return Err(Error::Argument("profiles live on different grids".into()));
        }
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a + z * b).collect();
        Ok(Self::derived(self.grid, values, self.frame))
    }

    /// Largest `u` whose framed sample exceeds `tol` times the peak.
    pub fn support_upper(&self, tol: f64) -> f64 {
        let w = self.framed();
        let peak = w.iter().map(|v| v.norm()).fold(0.0, f64::max);
        let last = w.iter().rposition(|v| v.norm() > tol * peak).unwrap_or(0);
        self.grid.node((last + 1).min(self.grid.len() - 1))
    }

    pub fn support_lower(&self, tol: f64) -> f64 {
        let w = self.framed();
        let peak = w.iter().map(|v| v.norm()).fold(0.0, f64::max);
        let first = w.iter().position(|v| v.norm() > tol * peak).unwrap_or(0);
        self.grid.node(first.saturating_sub(1))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gauss() -> ClosedForm {
        ClosedForm::new(|x: Jet| (-(x * x)).exp())
    }

    #[test]
    fn support_check_rejects_truncated_profiles() {
        let grid = LogGrid::new(-3.0, 3.0, 256).unwrap();
        let err = RadialProfile::from_closed_form(grid, gauss(), 0.0).unwrap_err();
        assert!(matches!(err, Error::Accuracy(_)));
        let ok = RadialProfile::from_closed_form(LogGrid::default(), gauss(), 0.0);
        assert!(ok.is_ok());
    }

    #[test]
    fn interpolation_matches_closed_form() {
        let grid = LogGrid::new(-10.0, 10.0, 512).unwrap();
        let p = RadialProfile::from_closed_form(grid, gauss(), 0.0).unwrap();
        let bare = RadialProfile::from_values(grid, p.values().to_vec()).unwrap();
        for u in [-1.234, 0.0, 0.377, 2.5] {
            assert!((bare.eval(u) - p.eval(u)).norm() < 1e-13);
            assert!((bare.euler_eval(u, 2) - p.euler_eval(u, 2)).norm() < 1e-11);
        }
    }

    #[test]
    fn dilation_by_fourier_shift_matches_closed_form() {
        let grid = LogGrid::new(-10.0, 10.0, 512).unwrap();
        let p = RadialProfile::from_closed_form(grid, gauss(), 0.0).unwrap();
        let bare = RadialProfile::from_values(grid, p.values().to_vec()).unwrap();
        let a = p.dilate(1.7).unwrap();
        let b = bare.dilate(1.7).unwrap();
        for (x, y) in a.values().iter().zip(b.values()) {
            assert!((x - y).norm() < 1e-13);
        }
    }
}
