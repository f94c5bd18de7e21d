//! Expansion of a configuration into cells, validation before execution,
//! and the parallel run with deterministic ordering.

use std::collections::BTreeMap;

use hgineq_core::catalog::{
    self, Context, EmbeddingOrder, Params, Status, VerificationReport, VerifierId, DEFAULT_DILATIONS,
    DEFAULT_LAMBDAS,
};
use hgineq_core::profiles::{self, NamedProfile};
use hgineq_core::sharpness::{
    optimize_ratio, ratio_curve, slz_asymptotics, OptimizeOutcome, RatioCurve, SearchSpace, SlzAsymptotics,
};
use hgineq_core::HomogeneousGroup;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{SuiteConfig, DEFAULT_SAMPLES};
use crate::{detail, CliError};

/// Relative agreement required between the quadrature and the closed-form
/// decomposition along `f_ℓ`.
pub const ASYMPTOTICS_TOLERANCE: f64 = 1e-4;

/// One verification: a verifier with fixed parameters on one group and one
/// profile (or, for the embedding bound, the whole profile list).
#[derive(Debug, Clone)]
struct Cell {
    verifier: VerifierId,
    group: usize,
    params: Params,
    profiles: Vec<String>,
}

/// Everything a run produces; timing lives in the metadata, not here.
#[derive(Debug, Clone, Default)]
pub struct SuiteOutcome {
    pub reports: Vec<VerificationReport>,
    pub curves: Vec<RatioCurve>,
    pub optima: Vec<OptimizeOutcome>,
    pub asymptotics: Vec<SlzAsymptotics>,
    /// Cells that raised an error at run time, as `(cell, message)`.
    pub errors: Vec<(String, String)>,
}

/// A line of `sharpness.jsonl`.
#[derive(Debug, Clone, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SharpnessRecord<'a> {
    RatioCurve(&'a RatioCurve),
    Optimization(&'a OptimizeOutcome),
    Asymptotics(&'a SlzAsymptotics),
}

impl SuiteOutcome {
    pub fn count(&self, status: Status) -> usize {
        self.reports.iter().filter(|r| r.status == status).count()
    }

    /// Sharpness findings that make a run unsuccessful.
    pub fn sharpness_failures(&self) -> Vec<String> {
        let mut out = Vec::new();
        for c in &self.curves {
            if c.violations > 0 {
                out.push(format!("{} vs {} on {}: {} violation(s)", c.family.name(), c.verifier, c.group, c.violations));
            }
        }
        for o in &self.optima {
            if !o.converged {
                out.push(format!("{} vs {}: optimization inconclusive", o.family.name(), o.verifier));
            }
        }
        for a in &self.asymptotics {
            if a.lhs_relative_error > ASYMPTOTICS_TOLERANCE || a.rhs_relative_error > ASYMPTOTICS_TOLERANCE {
                out.push(format!("f_ℓ decomposition at ℓ = {:e}: quadrature and closed form disagree", a.ell));
            }
        }
        out
    }

    /// Exit status: 0 iff nothing failed, nothing was inconclusive and no
    /// cell raised an error.
    pub fn exit_code(&self) -> i32 {
        let clean = self.count(Status::Fail) == 0
            && self.count(Status::Inconclusive) == 0
            && self.errors.is_empty()
            && self.sharpness_failures().is_empty();
        if clean {
            0
        } else {
            1
        }
    }

    pub fn sharpness_records(&self) -> Vec<SharpnessRecord<'_>> {
        let mut v: Vec<SharpnessRecord> = self.curves.iter().map(SharpnessRecord::RatioCurve).collect();
        v.extend(self.optima.iter().map(SharpnessRecord::Optimization));
        v.extend(self.asymptotics.iter().map(SharpnessRecord::Asymptotics));
        v
    }
}

/// Which parts of the configuration to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scope {
    /// Theorems and sharpness probes.
    All,
    /// Sharpness probes only.
    Sharpness,
}

/// A validated configuration, ready to run.
pub struct Suite {
    config: SuiteConfig,
    groups: Vec<HomogeneousGroup>,
    cells: Vec<Cell>,
    profiles: BTreeMap<String, NamedProfile>,
}

fn profile_set<'a>(config: &'a SuiteConfig, names: &'a Option<Vec<String>>) -> &'a [String] {
    names.as_deref().unwrap_or(&config.profiles)
}

impl Suite {
    /// Validates everything that can be checked before execution: group
    /// definitions, verifier ids, profile names, parameter preconditions,
    /// sharpness family/verifier compatibility and the grid.
    pub fn new(config: SuiteConfig) -> Result<Self, CliError> {
        let grid = config.grid.build()?;
        let groups = config.groups.iter().map(|g| g.build()).collect::<Result<Vec<_>, _>>()?;
        let known = profiles::all_names();
        let mut profiles = BTreeMap::new();
        let mut wanted: Vec<&String> = config.profiles.iter().collect();
        wanted.extend(config.theorems.iter().flat_map(|t| t.profiles.iter().flatten()));
        for name in wanted {
            if !known.contains(&name.as_str()) {
                return Err(CliError::config(format!("profiles: unknown profile '{name}' (known: {})", known.join(", "))));
            }
            if !profiles.contains_key(name) {
                let profile = profiles::by_name(name, grid).map_err(|e| CliError::config(format!("profiles: {}", detail(&e))))?;
                profiles.insert(name.clone(), NamedProfile { name: name.clone(), profile });
            }
        }
        let mut cells = Vec::new();
        for (ti, t) in config.theorems.iter().enumerate() {
            let key = format!("theorems[{ti}]");
            let verifier: VerifierId = t.id.parse().map_err(|e| CliError::config(format!("{key}.id: {}", detail(&e))))?;
            let names = profile_set(&config, &t.profiles);
            if names.is_empty() && !matches!(verifier, VerifierId::Polar) {
                return Err(CliError::config(format!("{key}.profiles: the profile list is empty")));
            }
            for mut params in t.parameter_grid() {
                if verifier == VerifierId::Polar {
                    params.samples = Some(params.samples.unwrap_or(DEFAULT_SAMPLES));
                    params.seed = Some(config.seed);
                }
                for (gi, g) in groups.iter().enumerate() {
                    verifier
                        .check_params(g.q(), &params)
                        .map_err(|e| CliError::config(format!("{key} on group '{}': {}", g.name(), detail(&e))))?;
                    match verifier {
                        VerifierId::Polar => {
                            cells.push(Cell { verifier, group: gi, params: params.clone(), profiles: vec![] })
                        }
                        VerifierId::Embedding => cells.push(Cell {
                            verifier,
                            group: gi,
                            params: params.clone(),
                            profiles: names.to_vec(),
                        }),
                        _ => cells.extend(names.iter().map(|n| Cell {
                            verifier,
                            group: gi,
                            params: params.clone(),
                            profiles: vec![n.clone()],
                        })),
                    }
                }
            }
        }
        for (si, s) in config.sharpness.iter().enumerate() {
            let key = format!("sharpness[{si}]");
            let g = s.group.build()?;
            let verifier: VerifierId = s.verifier.parse().map_err(|e| CliError::config(format!("{key}.verifier: {}", detail(&e))))?;
            s.family.target_constant(&g, verifier).map_err(|e| CliError::config(format!("{key}: {}", detail(&e))))?;
            if let Some(o) = &s.optimize {
                if o.budget == 0 {
                    return Err(CliError::config(format!("{key}.optimize.budget: must be positive")));
                }
            }
        }
        for (ai, a) in config.asymptotics.iter().enumerate() {
            a.group.build()?;
            if a.ells.is_empty() {
                return Err(CliError::config(format!("asymptotics[{ai}].ells: the ℓ list is empty")));
            }
        }
        Ok(Self { config, groups, cells, profiles })
    }

    pub fn config(&self) -> &SuiteConfig {
        &self.config
    }

    /// Number of verification cells.
    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    fn run_cell(&self, cell: &Cell) -> hgineq_core::Result<VerificationReport> {
        let g = &self.groups[cell.group];
        let pr = &cell.params;
        let label = match cell.verifier {
            VerifierId::Polar => "polar_cases".to_string(),
            VerifierId::Embedding => "suite".to_string(),
            _ => cell.profiles[0].clone(),
        };
        let ctx = Context::new(label).with_tolerances(self.config.tolerances);
        let phi = || &self.profiles[&cell.profiles[0]].profile;
        let need = |v: Option<f64>| v.expect("validated before execution");
        match cell.verifier {
            VerifierId::SobolevLp => catalog::verify_lp_sobolev(g, phi(), need(pr.p), &ctx),
            VerifierId::Hardy => catalog::verify_hardy_equivalence(g, phi(), need(pr.p), &ctx),
            VerifierId::WeightedLp => catalog::verify_weighted_lp(g, phi(), need(pr.p), need(pr.alpha), &ctx),
            VerifierId::WeightedL2 => catalog::verify_weighted_l2_identity(g, phi(), need(pr.alpha), &ctx),
            VerifierId::HigherOrder => catalog::verify_higher_order(
                g,
                phi(),
                need(pr.alpha),
                pr.k.expect("validated") as usize,
                pr.p.unwrap_or(2.0),
                &ctx,
            ),
            VerifierId::Fractional => {
                let beta = Complex64::new(need(pr.beta_re), pr.beta_im.unwrap_or(0.0));
                catalog::verify_fractional(g, phi(), beta, pr.k.expect("validated"), &ctx)
            }
            VerifierId::Embedding => {
                let suite: Vec<NamedProfile> = cell.profiles.iter().map(|n| self.profiles[n].clone()).collect();
                let k = pr.k.expect("validated");
                let order = match pr.beta_re {
                    Some(b) => EmbeddingOrder::Fractional { beta: Complex64::new(b, pr.beta_im.unwrap_or(0.0)), k },
                    None => EmbeddingOrder::Integer(k),
                };
                catalog::verify_embedding_norms(g, &suite, pr.p.unwrap_or(2.0), order, &ctx)
            }
            VerifierId::Poincare => catalog::verify_poincare(g, phi(), need(pr.p), pr.r, &ctx),
            VerifierId::Slz => catalog::verify_slz(g, phi(), need(pr.q), need(pr.gamma), need(pr.r), &ctx),
            VerifierId::OperatorAlgebra => catalog::verify_operator_algebra(g, phi(), &DEFAULT_LAMBDAS, &ctx),
            VerifierId::Dilation => {
                catalog::verify_dilation(g, phi(), need(pr.p), need(pr.q), &DEFAULT_DILATIONS, &ctx)
            }
            VerifierId::Polar => {
                catalog::verify_polar(g, pr.samples.expect("set"), pr.seed.expect("set"), &ctx)
            }
        }
    }

    fn describe_cell(&self, cell: &Cell) -> String {
        format!("{} on {} with {:?} for {:?}", cell.verifier, self.groups[cell.group].name(), cell.params, cell.profiles)
    }

    /// Runs the suite. Cells run in parallel on the current thread pool; the
    /// results are sorted by `(theorem_id, group, parameters, profile)`.
    pub fn run(&self, scope: Scope) -> SuiteOutcome {
        let mut out = SuiteOutcome::default();
        if scope == Scope::All {
            let results: Vec<_> = self.cells.par_iter().map(|c| (c, self.run_cell(c))).collect();
            for (cell, r) in results {
                match r {
                    Ok(rep) => out.reports.push(rep),
                    Err(e) => out.errors.push((self.describe_cell(cell), e.to_string())),
                }
            }
            out.reports.sort_by_key(|r| r.sort_key());
        }
        let probes: Vec<_> = self
            .config
            .sharpness
            .par_iter()
            .enumerate()
            .map(|(i, s)| {
                let g = s.group.build().expect("validated");
                let verifier: VerifierId = s.verifier.parse().expect("validated");
                let params = s.parameters.clone().unwrap_or_else(|| s.family.default_parameters());
                let curve = ratio_curve(&g, &s.family, verifier, &params);
                let optimum = s.optimize.as_ref().map(|o| {
                    let mut space = SearchSpace::for_family(&s.family);
                    if let Some([lo, hi]) = o.range {
                        space.parameter = (lo, hi);
                    }
                    if let Some([lo, hi]) = o.width {
                        space = space.with_width(lo, hi);
                    }
                    optimize_ratio(&g, &s.family, verifier, space, o.budget)
                });
                (i, curve, optimum)
            })
            .collect();
        for (i, curve, optimum) in probes {
            let key = format!("sharpness[{i}]");
            match curve {
                Ok(c) => out.curves.push(c),
                Err(e) => out.errors.push((key.clone(), e.to_string())),
            }
            match optimum {
                Some(Ok(o)) => out.optima.push(o),
                Some(Err(e)) => out.errors.push((key, e.to_string())),
                None => {}
            }
        }
        let decompositions: Vec<_> = self
            .config
            .asymptotics
            .par_iter()
            .enumerate()
            .flat_map(|(i, a)| {
                let g = a.group.build().expect("validated");
                a.ells.par_iter().map(move |&ell| (i, slz_asymptotics(&g, a.q, a.gamma, a.r, ell))).collect::<Vec<_>>()
            })
            .collect();
        for (i, d) in decompositions {
            match d {
                Ok(d) => out.asymptotics.push(d),
                Err(e) => out.errors.push((format!("asymptotics[{i}]"), e.to_string())),
            }
        }
        out
    }
}
