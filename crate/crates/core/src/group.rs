//! Homogeneous groups realized as `ℝⁿ` with diagonal dilations
//! `D_λ x = (λ^{ν₁}x₁, …, λ^{ν_n}x_n)` and a homogeneous quasi-norm.
//!
//! Only dilations and the quasi-norm enter the integrals in this crate; Haar
//! measure is Lebesgue measure, so the group law is never needed.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance used when comparing a user-supplied homogeneous dimension with
/// the sum of the weights.
const Q_TOLERANCE: f64 = 1e-12;

/// Choice of homogeneous quasi-norm.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum QuasiNorm {
    /// `(Σ x_i²)^{1/2}`; only valid for isotropic weights.
    Euclidean,
    /// `(Σ |x_i|^{2M/ν_i})^{1/(2M)}` for any `M > 0`.
    AnisotropicPower { m: f64 },
    /// Korányi gauge `((x² + y²)² + t²)^{1/4}` on the Heisenberg group `ℍ¹`.
    Koranyi,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HomogeneousGroup {
    name: String,
    weights: Vec<f64>,
    q: f64,
    norm: QuasiNorm,
}

impl HomogeneousGroup {
    /// Builds a group from dilation weights, recomputing `Q = Σ ν_i`.
    pub fn new(name: impl Into<String>, weights: Vec<f64>, norm: QuasiNorm) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::Config("a group needs at least one dilation weight".into()));
        }
        if let Some(w) = weights.iter().find(|w| !(w.is_finite() && **w > 0.0)) {
            return Err(Error::Config(format!("dilation weights must be positive, got {w}")));
        }
        match norm {
            QuasiNorm::Euclidean => {
                if weights.iter().any(|&w| w != 1.0) {
                    return Err(Error::Config(
                        "the euclidean norm requires all weights equal to 1".into(),
                    ));
                }
            }
            QuasiNorm::AnisotropicPower { m } => {
                if !(m.is_finite() && m > 0.0) {
                    return Err(Error::Config(format!("power_M must be positive, got {m}")));
                }
            }
            QuasiNorm::Koranyi => {
                if weights != [1.0, 1.0, 2.0] {
                    return Err(Error::Config(
                        "the koranyi gauge requires n = 3 and weights (1, 1, 2)".into(),
                    ));
                }
            }
        }
        let q = weights.iter().sum();
        Ok(Self { name: name.into(), weights, q, norm })
    }

    /// Like [`HomogeneousGroup::new`] but also checks a claimed homogeneous
    /// dimension against the weights.
    pub fn with_dimension(
        name: impl Into<String>,
        weights: Vec<f64>,
        norm: QuasiNorm,
        claimed_q: f64,
    ) -> Result<Self> {
        let g = Self::new(name, weights, norm)?;
        if (g.q - claimed_q).abs() > Q_TOLERANCE * g.q.max(1.0) {
            return Err(Error::Config(format!(
                "homogeneous dimension {claimed_q} does not match the weight sum {}",
                g.q
            )));
        }
        Ok(g)
    }

    /// Isotropic `ℝⁿ` with the Euclidean norm (`Q = n`).
    pub fn euclidean(n: usize) -> Self {
        Self::new(format!("euclidean_r{n}"), vec![1.0; n], QuasiNorm::Euclidean)
            .expect("valid euclidean group")
    }

    /// Heisenberg group `ℍ¹ ≅ ℝ³` with weights (1, 1, 2) and the Korányi gauge.
    pub fn heisenberg() -> Self {
        Self::new("heisenberg_koranyi", vec![1.0, 1.0, 2.0], QuasiNorm::Koranyi)
            .expect("valid heisenberg group")
    }

    /// Anisotropic `ℝⁿ` with the power quasi-norm; `m` defaults to `max ν_i`.
    pub fn anisotropic(name: impl Into<String>, weights: Vec<f64>, m: Option<f64>) -> Result<Self> {
        let m = m.unwrap_or_else(|| weights.iter().cloned().fold(0.0, f64::max));
        Self::new(name, weights, QuasiNorm::AnisotropicPower { m })
    }

    /// The three groups of the standard verification battery.
    pub fn standard_battery() -> Vec<Self> {
        vec![
            Self::euclidean(3),
            Self::anisotropic("anisotropic_r2_w12", vec![1.0, 2.0], None).expect("valid weights"),
            Self::heisenberg(),
        ]
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Homogeneous dimension `Q`.
    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn norm(&self) -> QuasiNorm {
        self.norm
    }

    pub fn max_weight(&self) -> f64 {
        self.weights.iter().cloned().fold(0.0, f64::max)
    }

    fn check_point(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.dim() {
            return Err(Error::Argument(format!(
                "point has dimension {} but the group has dimension {}",
                x.len(),
                self.dim()
            )));
        }
        Ok(())
    }

    pub fn dilate(&self, lambda: f64, x: &[f64]) -> Result<Vec<f64>> {
        if !(lambda.is_finite() && lambda > 0.0) {
            return Err(Error::Argument(format!("dilation factor must be positive, got {lambda}")));
        }
        self.check_point(x)?;
        let ln = lambda.ln();
        Ok(x.iter().zip(&self.weights).map(|(xi, nu)| xi * (nu * ln).exp()).collect())
    }

    pub fn quasi_norm(&self, x: &[f64]) -> Result<f64> {
        self.check_point(x)?;
        Ok(self.quasi_norm_unchecked(x))
    }

    pub(crate) fn quasi_norm_unchecked(&self, x: &[f64]) -> f64 {
        match self.norm {
            QuasiNorm::Euclidean => x.iter().map(|v| v * v).sum::<f64>().sqrt(),
            QuasiNorm::AnisotropicPower { m } => {
                // Factor out the largest term so that the sum stays in range.
                let terms: Vec<f64> = x
                    .iter()
                    .zip(&self.weights)
                    .map(|(xi, nu)| (2.0 * m / nu) * xi.abs().ln())
                    .collect();
                let top = terms.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
                if top == f64::NEG_INFINITY {
                    return 0.0;
                }
                let sum: f64 = terms.iter().map(|t| (t - top).exp()).sum();
                ((top + sum.ln()) / (2.0 * m)).exp()
            }
            QuasiNorm::Koranyi => {
                let s = x[0] * x[0] + x[1] * x[1];
                (s * s + x[2] * x[2]).sqrt().sqrt()
            }
        }
    }

    /// Projection `x ↦ D_{1/|x|} x` onto the unit quasi-sphere. Returns `None`
    /// at the origin.
    pub fn project_to_sphere(&self, x: &[f64]) -> Option<Vec<f64>> {
        let r = self.quasi_norm_unchecked(x);
        if r == 0.0 {
            return None;
        }
        let ln = -r.ln();
        Some(x.iter().zip(&self.weights).map(|(xi, nu)| xi * (nu * ln).exp()).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn identity_dilation() {
        let g = HomogeneousGroup::heisenberg();
        let x = [0.3, -1.2, 4.0];
        assert_eq!(g.dilate(1.0, &x).unwrap(), x.to_vec());
    }

    #[test]
    fn componentwise_dilations() {
        let g = HomogeneousGroup::heisenberg();
        let y = g.dilate(2.0, &[1.0, 1.0, 1.0]).unwrap();
        for (a, b) in y.iter().zip([2.0, 2.0, 4.0]) {
            assert!((a - b).abs() < 1e-14);
        }
        let g = HomogeneousGroup::anisotropic("w12", vec![1.0, 2.0], None).unwrap();
        let y = g.dilate(3.0, &[1.0, 1.0]).unwrap();
        assert!((y[0] - 3.0).abs() < 1e-14 && (y[1] - 9.0).abs() < 1e-13);
    }

    #[test]
    fn non_positive_dilation_is_rejected() {
        let g = HomogeneousGroup::euclidean(2);
        assert!(matches!(g.dilate(0.0, &[1.0, 1.0]), Err(Error::Argument(_))));
        assert!(matches!(g.dilate(-2.0, &[1.0, 1.0]), Err(Error::Argument(_))));
    }

    #[test]
    fn norm_examples() {
        let h = HomogeneousGroup::heisenberg();
        assert_eq!(h.quasi_norm(&[1.0, 0.0, 0.0]).unwrap(), 1.0);
        let g = HomogeneousGroup::anisotropic("w12", vec![1.0, 2.0], Some(1.0)).unwrap();
        let v = g.quasi_norm(&[3.0, 4.0]).unwrap();
        assert!((v - 13f64.sqrt()).abs() < 1e-14, "{v}");
        assert_eq!(g.quasi_norm(&[0.0, 0.0]).unwrap(), 0.0);
    }

    #[test]
    fn incompatible_norms_are_configuration_errors() {
        assert!(matches!(
            HomogeneousGroup::new("bad", vec![1.0, 2.0], QuasiNorm::Euclidean),
            Err(Error::Config(_))
        ));
        assert!(matches!(
            HomogeneousGroup::new("bad", vec![1.0, 1.0, 1.0], QuasiNorm::Koranyi),
            Err(Error::Config(_))
        ));
        assert!(matches!(
            HomogeneousGroup::new("bad", vec![1.0, -1.0], QuasiNorm::AnisotropicPower { m: 1.0 }),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn dimension_is_recomputed_and_checked() {
        let g = HomogeneousGroup::with_dimension("h", vec![1.0, 1.0, 2.0], QuasiNorm::Koranyi, 4.0)
            .unwrap();
        assert_eq!(g.q(), 4.0);
        assert!(HomogeneousGroup::with_dimension(
            "h",
            vec![1.0, 1.0, 2.0],
            QuasiNorm::Koranyi,
            3.0
        )
        .is_err());
        let g = HomogeneousGroup::anisotropic("frac", vec![0.5, 1.25], None).unwrap();
        assert_eq!(g.q(), 1.75);
    }

    #[test]
    fn projection_lands_on_unit_sphere() {
        for g in HomogeneousGroup::standard_battery() {
            let x: Vec<f64> = (0..g.dim()).map(|i| 0.7 + i as f64).collect();
            let y = g.project_to_sphere(&x).unwrap();
            assert!((g.quasi_norm(&y).unwrap() - 1.0).abs() < 1e-13);
        }
    }

    fn groups() -> Vec<HomogeneousGroup> {
        let mut v = HomogeneousGroup::standard_battery();
        v.push(HomogeneousGroup::anisotropic("w", vec![0.5, 1.0, 3.0], Some(0.7)).unwrap());
        v
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn norm_is_homogeneous_and_symmetric(
            gi in 0usize..4,
            ln_lambda in -5.0f64..5.0,
            coords in proptest::collection::vec(-10.0f64..10.0, 3),
        ) {
            let g = &groups()[gi];
            let x = &coords[..g.dim()];
            let lambda = ln_lambda.exp();
            let n = g.quasi_norm(x).unwrap();
            let nd = g.quasi_norm(&g.dilate(lambda, x).unwrap()).unwrap();
            prop_assert!((nd - lambda * n).abs() <= 1e-12 * lambda * n + 1e-300);
            let neg: Vec<f64> = x.iter().map(|v| -v).collect();
            prop_assert_eq!(g.quasi_norm(&neg).unwrap(), n);
        }
    }
}
