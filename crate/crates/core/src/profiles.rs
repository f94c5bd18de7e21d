//! Built-in radial test profiles.
//!
//! The standard battery consists of five real, smooth profiles written in the
//! log-radius `u = log r`; all of them decay faster than any exponential in
//! `u`, so every power weight `r^s` stays integrable and the multiplier
//! calculus (which needs `e^{Qu/2}φ` to vanish at the grid ends) applies on
//! the default grid. Three extra profiles cover complex values and sign
//! changes.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::jet::Jet;
use crate::radial::{ClosedForm, LogGrid, RadialProfile};

/// A profile together with the name it is reported under.
#[derive(Debug, Clone)]
pub struct NamedProfile {
    pub name: String,
    pub profile: RadialProfile,
}

/// Names of the five profiles of the standard battery.
pub const BATTERY: [&str; 5] = ["gauss_log", "shifted_gauss", "poly_gauss", "bump", "two_bump_mix"];

/// Names of the complex and sign-changing extras.
pub const EXTRAS: [&str; 3] = ["chirp_gauss", "complex_mix", "odd_gauss"];

fn gaussian(x: Jet, centre: f64, width: f64) -> Jet {
    let t = (x - centre) * (1.0 / width);
    (-(t * t)).exp()
}

/// `exp(−1/(1 − t²))` for `|t| < 1` and 0 otherwise, with `t = (u − c)/w`.
fn bump_jet(x: Jet, centre: f64, half_width: f64) -> Jet {
    let t = (x - centre) * (1.0 / half_width);
    if t.re().abs() >= 1.0 {
        return Jet::constant(0.0, x.order());
    }
    let one = Jet::constant(1.0, x.order());
    (-((one - t * t).recip())).exp()
}

/// Closed form of a built-in profile.
pub fn closed_form(name: &str) -> Result<ClosedForm> {
    let form = match name {
        "gauss_log" => ClosedForm::new(|x: Jet| gaussian(x, 0.0, 1.0)),
        "shifted_gauss" => ClosedForm::new(|x: Jet| gaussian(x, 0.7, 0.5f64.sqrt())),
        "poly_gauss" => ClosedForm::new(|x: Jet| (x * x * 0.5 + 1.0) * gaussian(x, 0.0, 1.0)),
        "bump" => ClosedForm::new(|x: Jet| bump_jet(x, 0.5, 2.0)).with_kinks(vec![-1.5, 2.5]),
        "two_bump_mix" => ClosedForm::new(|x: Jet| {
            gaussian(x, -1.5, 0.5f64.sqrt()) + gaussian(x, 1.0, 1.0) * 0.6
        }),
        "chirp_gauss" => ClosedForm::new(|x: Jet| {
            gaussian(x, 0.0, 1.0) * x.scale(Complex64::new(0.0, 3.0)).exp()
        }),
        "complex_mix" => ClosedForm::new(|x: Jet| {
            gaussian(x, 0.0, 1.0) * (x.scale(Complex64::new(0.0, 1.0)) + 1.0)
        }),
        "odd_gauss" => ClosedForm::new(|x: Jet| x * gaussian(x, 0.0, 1.0)),
        other => return Err(Error::Config(format!("unknown profile '{other}'"))),
    };
    Ok(form)
}

/// A built-in profile sampled on `grid`.
pub fn by_name(name: &str, grid: LogGrid) -> Result<RadialProfile> {
    RadialProfile::from_closed_form(grid, closed_form(name)?, 0.0)
}

fn named(names: &[&str], grid: LogGrid) -> Result<Vec<NamedProfile>> {
    names
        .iter()
        .map(|n| Ok(NamedProfile { name: n.to_string(), profile: by_name(n, grid)? }))
        .collect()
}

/// The five smooth real profiles of the standard battery.
pub fn battery(grid: LogGrid) -> Result<Vec<NamedProfile>> {
    named(&BATTERY, grid)
}

/// Complex-valued and sign-changing profiles.
pub fn extras(grid: LogGrid) -> Result<Vec<NamedProfile>> {
    named(&EXTRAS, grid)
}

/// A random smooth complex profile: a sum of one to three Gaussians in `u`
/// with centres in `[−2, 2]`, widths in `[0.4, 1.5]`, complex amplitudes of
/// modulus at most 1 and chirp rates in `[−2, 2]`; reproducible from `seed`.
pub fn random_profile(seed: u64, grid: LogGrid) -> Result<NamedProfile> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let terms: Vec<(f64, f64, Complex64, f64)> = (0..rng.gen_range(1..=3))
        .map(|_| {
            let amplitude = Complex64::from_polar(rng.gen_range(0.1..1.0), rng.gen_range(0.0..std::f64::consts::TAU));
            (rng.gen_range(-2.0..2.0), rng.gen_range(0.4..1.5), amplitude, rng.gen_range(-2.0..2.0))
        })
        .collect();
    let form = ClosedForm::new(move |x: Jet| {
        let mut sum = Jet::constant(0.0, x.order());
        for &(centre, width, amplitude, chirp) in &terms {
            let phase = (x - centre).scale(Complex64::new(0.0, chirp)).exp();
            sum = sum + (gaussian(x, centre, width) * phase).scale(amplitude);
        }
        sum
    });
    Ok(NamedProfile { name: format!("random_{seed}"), profile: RadialProfile::from_closed_form(grid, form, 0.0)? })
}

/// Every built-in profile name.
pub fn all_names() -> Vec<&'static str> {
    BATTERY.iter().chain(EXTRAS.iter()).copied().collect()
}
