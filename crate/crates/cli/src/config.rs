//! Suite configuration: groups, verifier parameter grids, profiles,
//! tolerances, grid and output settings, and sharpness probes.
//!
//! The primary format is TOML; JSON with the same structure is accepted when
//! the file name ends in `.json`. Every parameter of a theorem entry may be a
//! single number or a list; the entry expands to the Cartesian product.

use std::path::{Path, PathBuf};

use hgineq_core::catalog::{Params, Tolerances};
use hgineq_core::profiles;
use hgineq_core::sharpness::ExtremizerFamily;
use hgineq_core::{HomogeneousGroup, LogGrid};
use serde::{Deserialize, Serialize};

use crate::{detail, CliError};

/// The configuration bundled with the binary.
pub const DEFAULT_CONFIG: &str = include_str!("../../../configs/default.toml");
/// Default number of Monte Carlo samples of the polar check.
pub const DEFAULT_SAMPLES: u64 = 1_000_000;
/// Default seed when the configuration does not set one.
pub const DEFAULT_SEED: u64 = 20_240_611;

/// A group definition.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum GroupDef {
    /// `ℝⁿ` with the Euclidean norm.
    Euclidean { n: usize },
    /// `ℍ¹` with the Korányi gauge.
    Heisenberg,
    /// `ℝⁿ` with the given dilation weights and the power quasi-norm.
    Anisotropic {
        weights: Vec<f64>,
        #[serde(default)]
        m: Option<f64>,
        #[serde(default)]
        name: Option<String>,
    },
}

impl GroupDef {
    pub fn build(&self) -> Result<HomogeneousGroup, CliError> {
        match self {
            GroupDef::Euclidean { n } => {
                if *n == 0 {
                    return Err(CliError::config("groups: n: need n ≥ 1"));
                }
                Ok(HomogeneousGroup::euclidean(*n))
            }
            GroupDef::Heisenberg => Ok(HomogeneousGroup::heisenberg()),
            GroupDef::Anisotropic { weights, m, name } => {
                let name = name.clone().unwrap_or_else(|| {
                    let w: Vec<String> = weights.iter().map(|w| format!("{w}")).collect();
                    format!("anisotropic_r{}_w{}", weights.len(), w.join(""))
                });
                HomogeneousGroup::anisotropic(name, weights.clone(), *m)
                    .map_err(|e| CliError::config(format!("groups: {}", detail(&e))))
            }
        }
    }
}

/// A number or a list of numbers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum OneOrMany<T> {
    One(T),
    Many(Vec<T>),
}

impl<T: Clone> OneOrMany<T> {
    pub fn to_vec(&self) -> Vec<T> {
        match self {
            OneOrMany::One(x) => vec![x.clone()],
            OneOrMany::Many(v) => v.clone(),
        }
    }
}

fn values<T: Clone>(v: &Option<OneOrMany<T>>) -> Vec<Option<T>> {
    match v {
        None => vec![None],
        Some(v) => v.to_vec().into_iter().map(Some).collect(),
    }
}

/// One verifier with parameter grids.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TheoremSpec {
    pub id: String,
    #[serde(default)]
    pub p: Option<OneOrMany<f64>>,
    #[serde(default)]
    pub q: Option<OneOrMany<f64>>,
    #[serde(default)]
    pub alpha: Option<OneOrMany<f64>>,
    #[serde(default)]
    pub k: Option<OneOrMany<u32>>,
    #[serde(default)]
    pub beta_re: Option<OneOrMany<f64>>,
    #[serde(default)]
    pub beta_im: Option<OneOrMany<f64>>,
    #[serde(default)]
    pub gamma: Option<OneOrMany<f64>>,
    #[serde(default, rename = "R")]
    pub r: Option<OneOrMany<f64>>,
    #[serde(default)]
    pub samples: Option<u64>,
    /// Profiles of this entry (default: the suite profiles).
    #[serde(default)]
    pub profiles: Option<Vec<String>>,
}

impl TheoremSpec {
    /// The Cartesian product of the parameter grids.
    pub fn parameter_grid(&self) -> Vec<Params> {
        let mut out = Vec::new();
        for p in values(&self.p) {
            for q in values(&self.q) {
                for alpha in values(&self.alpha) {
                    for k in values(&self.k) {
                        for beta_re in values(&self.beta_re) {
                            for beta_im in values(&self.beta_im) {
                                for gamma in values(&self.gamma) {
                                    for r in values(&self.r) {
                                        out.push(Params {
                                            p,
                                            q,
                                            alpha,
                                            k,
                                            beta_re,
                                            beta_im,
                                            gamma,
                                            r,
                                            samples: self.samples,
                                            ..Default::default()
                                        });
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        out
    }
}

/// Optional maximization attached to a sharpness probe.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OptimizeSpec {
    pub budget: usize,
    /// Parameter range (default: the family's range).
    #[serde(default)]
    pub range: Option<[f64; 2]>,
    /// Cut-off width range; switches to the two-parameter search.
    #[serde(default)]
    pub width: Option<[f64; 2]>,
}

/// A ratio curve (and optional maximization) of a family against a verifier.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SharpnessSpec {
    pub group: GroupDef,
    pub family: ExtremizerFamily,
    pub verifier: String,
    /// Parameter grid (default: the family's grid).
    #[serde(default)]
    pub parameters: Option<Vec<f64>>,
    #[serde(default)]
    pub optimize: Option<OptimizeSpec>,
}

/// Exact decomposition of both sides along the `f_ℓ` sequence.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AsymptoticsSpec {
    pub group: GroupDef,
    pub q: f64,
    pub gamma: f64,
    #[serde(rename = "R")]
    pub r: f64,
    pub ells: Vec<f64>,
}

/// Log-radius grid of the built-in profiles.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    #[serde(rename = "N")]
    pub n: usize,
    pub u_min: f64,
    pub u_max: f64,
}

impl Default for GridSpec {
    fn default() -> Self {
        let g = LogGrid::default();
        Self { n: g.len(), u_min: g.u_min(), u_max: g.u_max() }
    }
}

impl GridSpec {
    pub fn build(&self) -> Result<LogGrid, CliError> {
        LogGrid::new(self.u_min, self.u_max, self.n).map_err(|e| CliError::config(format!("grid: {}", detail(&e))))
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    #[serde(default)]
    pub dir: Option<PathBuf>,
}

/// A verification suite.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuiteConfig {
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default)]
    pub groups: Vec<GroupDef>,
    #[serde(default = "default_profiles")]
    pub profiles: Vec<String>,
    #[serde(default)]
    pub theorems: Vec<TheoremSpec>,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub grid: GridSpec,
    #[serde(default)]
    pub output: OutputSpec,
    #[serde(default)]
    pub sharpness: Vec<SharpnessSpec>,
    #[serde(default)]
    pub asymptotics: Vec<AsymptoticsSpec>,
}

fn default_seed() -> u64 {
    DEFAULT_SEED
}

fn default_profiles() -> Vec<String> {
    profiles::BATTERY.iter().map(|s| s.to_string()).collect()
}

impl SuiteConfig {
    /// Parses TOML, or JSON when `json` is set.
    pub fn parse(text: &str, json: bool) -> Result<Self, CliError> {
        if json {
            serde_json::from_str(text).map_err(|e| CliError::config(format!("invalid JSON config: {e}")))
        } else {
            toml::from_str(text).map_err(|e| CliError::config(format!("invalid TOML config: {e}")))
        }
    }

    /// Reads a configuration file; the format follows the extension.
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::config(format!("cannot read config {}: {e}", path.display())))?;
        let json = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json"));
        Self::parse(&text, json)
    }

    /// The bundled configuration.
    pub fn bundled() -> Self {
        Self::parse(DEFAULT_CONFIG, false).expect("the bundled config parses")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_config_parses() {
        let c = SuiteConfig::bundled();
        assert_eq!(c.groups.len(), 3);
        assert!(!c.theorems.is_empty());
    }

    #[test]
    fn scalars_and_lists_expand_to_the_product() {
        let t: TheoremSpec = toml::from_str("id = 'weighted_lp'\np = [2.0, 3.0]\nalpha = [0.0, 0.5, 1.0]").unwrap();
        let grid = t.parameter_grid();
        assert_eq!(grid.len(), 6);
        assert_eq!(grid[1].alpha, Some(0.5));
        assert_eq!(grid[5].p, Some(3.0));
    }

    #[test]
    fn unknown_keys_are_named() {
        let e = SuiteConfig::parse("[[theorems]]\nid = 'hardy'\npp = 2.0\n", false).unwrap_err();
        assert!(e.to_string().contains("pp"), "{e}");
    }

    #[test]
    fn json_is_accepted() {
        let c = SuiteConfig::parse(r#"{"groups": [{"kind": "heisenberg"}], "theorems": []}"#, true).unwrap();
        assert_eq!(c.groups, vec![GroupDef::Heisenberg]);
    }
}
