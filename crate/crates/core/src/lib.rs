//! Numerical verification engine for Euler-operator functional inequalities
//! on homogeneous groups.
//!
//! Homogeneous groups are realized as `ℝⁿ` with diagonal anisotropic dilations
//! and a homogeneous quasi-norm ([`group`]). Radial test functions live on a
//! uniform grid in the log-radius `u = log r` ([`radial`]), where the Euler
//! operator `E = r d/dr` becomes `d/du` and the operator `A = EE*` becomes the
//! Fourier multiplier `ξ² + Q²/4` after the unitary map
//! `(Uφ)(u) = e^{Qu/2} φ(e^u)`. Weighted integrals ([`quadrature`]) feed one
//! verifier per inequality or identity ([`catalog`]), and extremizer families
//! probe the sharp constants ([`sharpness`]).

pub mod catalog;
pub mod error;
pub mod group;
pub mod jet;
pub mod profiles;
pub mod quadrature;
pub mod radial;
pub mod sharpness;

pub use error::{Error, Result};
pub use group::{HomogeneousGroup, QuasiNorm};
pub use radial::{LogGrid, RadialProfile};
