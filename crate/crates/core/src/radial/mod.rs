//! Radial profiles on a uniform log-radius grid and the Euler-operator
//! calculus acting on them.
//!
//! With `u = log r`, the Euler operator `E = r d/dr` is `d/du`, and the
//! unitary map `(Uφ)(u) = e^{Qu/2} φ(e^u)` from `L²(r^{Q-1}dr)` onto `L²(du)`
//! conjugates `E` to `d/du − Q/2`. Consequently `E* = −Q − E` becomes
//! `−d/du − Q/2` and `A = EE*` becomes `−d²/du² + Q²/4`, i.e. the Fourier
//! multiplier `ξ² + Q²/4`. Fractional powers `|E|^β := A^{β/2}` are realized
//! as the multiplier `(ξ² + Q²/4)^{β/2}` in that frame.

mod calculus;
mod gamma;
mod grid;
mod profile;
mod spectral;

pub use calculus::{
    euler_adjoint_apply, euler_apply, euler_power, l2_inner, l2_norm, multiplier_apply, OperatorSymbol,
};
pub use gamma::{complex_gamma, embedding_constant};
pub use grid::LogGrid;
pub use profile::{ClosedForm, RadialProfile, SUPPORT_TOLERANCE};
pub use spectral::{apply_symbol, wavenumbers};
