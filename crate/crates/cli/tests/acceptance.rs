//! Acceptance criteria of the verification engine, one PASS/FAIL line each.
//!
//! Runs without the libtest harness so that the summary is always printed;
//! the process exits non-zero when any criterion fails.

use std::f64::consts::PI;
use std::fs;
use std::process::{Command, ExitCode};
use std::time::Instant;

use hgineq_cli::output::{CURVES_FILE, REPORTS_FILE, SHARPNESS_FILE};
use hgineq_core::catalog::*;
use hgineq_core::profiles::{self, random_profile, NamedProfile};
use hgineq_core::quadrature::{pooled_deviation, sphere_integral_mc};
use hgineq_core::radial::{complex_gamma, embedding_constant};
use hgineq_core::sharpness::{
    holder_witness, holder_witness_log, optimize_ratio, ratio_curve, slz_asymptotics, ExtremizerFamily, SearchSpace,
    DEFAULT_ELLS, DEFAULT_EPSILONS, VIOLATION_TOLERANCE,
};
use hgineq_core::{HomogeneousGroup, LogGrid, Result};
use num_complex::Complex64;

const SEED: u64 = 20_240_611;

/// Outcome of one criterion: failures and a one-line summary of what was measured.
#[derive(Default)]
struct Verdict {
    failures: Vec<String>,
    summary: String,
}

impl Verdict {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if !ok {
            self.failures.push(what());
        }
    }
}

fn groups() -> Vec<HomogeneousGroup> {
    HomogeneousGroup::standard_battery()
}

fn battery() -> Vec<NamedProfile> {
    profiles::battery(LogGrid::default()).unwrap()
}

fn passed(rep: &VerificationReport) -> bool {
    rep.status == Status::Pass && rep.sub_checks.iter().all(|c| c.status == Status::Pass)
}

fn label(rep: &VerificationReport) -> String {
    format!("{} on {} / {} {:?}", rep.theorem_id, rep.group, rep.profile, rep.parameters)
}

/// Identities: the remainder identity for p ∈ {1.5, 2, 3} (real profiles) and
/// its complex p = 2 form, the weighted L² identity for α ∈ {−1, 0, 1/2, 1},
/// and the telescoped identity for k = 1..4.
fn identities() -> Result<Verdict> {
    let mut v = Verdict::default();
    let (mut worst, mut count) = (0.0f64, 0);
    let complex = profiles::extras(LogGrid::default())?;
    for g in groups() {
        for np in battery().iter().chain(complex.iter().filter(|p| !p.profile.is_real())) {
            let ctx = Context::new(&np.name);
            let phi = &np.profile;
            let mut reps = Vec::new();
            let ps: &[f64] = if phi.is_real() { &[1.5, 2.0, 3.0] } else { &[2.0] };
            for &p in ps {
                reps.push(verify_lp_sobolev_identity(&g, phi, p, &ctx)?);
            }
            for alpha in [-1.0, 0.0, 0.5, 1.0] {
                reps.push(verify_weighted_l2_identity(&g, phi, alpha, &ctx)?);
            }
            for k in 1..=4 {
                reps.push(verify_higher_order(&g, phi, 0.5, k, 2.0, &ctx)?);
            }
            for rep in reps {
                let r = rep.residual.unwrap_or(f64::INFINITY);
                worst = worst.max(r);
                count += 1;
                v.check(passed(&rep) && r <= 1e-6, || format!("{}: residual {r:e}", label(&rep)));
            }
        }
    }
    v.summary = format!("{count} identities, max relative residual {worst:.1e} (≤ 1e-6)");
    Ok(v)
}

/// Inequalities on the battery: margin ≥ −1e−10·rhs, no failed sub-check.
fn inequalities() -> Result<Verdict> {
    let mut v = Verdict::default();
    let (mut worst, mut count) = (f64::INFINITY, 0);
    let one = Complex64::new(1.0, 0.0);
    for g in groups() {
        let q = g.q();
        let suite = battery();
        for np in &suite {
            let ctx = Context::new(&np.name);
            let phi = &np.profile;
            let mut reps = Vec::new();
            for p in [1.5, 2.0, 3.0] {
                reps.push(verify_lp_sobolev(&g, phi, p, &ctx)?);
                reps.push(verify_poincare(&g, phi, p, None, &ctx)?);
                if p < q {
                    reps.push(verify_hardy_equivalence(&g, phi, p, &ctx)?);
                }
            }
            // both branches: αp ≠ Q and the critical αp = Q
            for p in [2.0, 3.0] {
                for alpha in [-1.0, 0.5, 1.0, q / p] {
                    reps.push(verify_weighted_lp(&g, phi, p, alpha, &ctx)?);
                }
            }
            for alpha in [-1.0, 0.5, 1.0] {
                reps.push(verify_weighted_l2_identity(&g, phi, alpha, &ctx)?);
            }
            for k in 1..=4 {
                reps.push(verify_higher_order(&g, phi, 0.5, k, 2.0, &ctx)?);
                reps.push(verify_higher_order(&g, phi, -1.0, k, 2.0, &ctx)?);
            }
            reps.push(verify_fractional(&g, phi, one, 1, &ctx)?);
            reps.push(verify_fractional(&g, phi, one, 2, &ctx)?);
            for (q_exp, gamma, r) in [(2.0, 2.0, 1.0), (3.0, 2.0, 1.0), (3.0, 3.0, 0.5)] {
                reps.push(verify_slz(&g, phi, q_exp, gamma, r, &ctx)?);
            }
            for rep in reps {
                let rel = rep.margin.map_or(0.0, |m| m / rep.rhs.abs().max(f64::MIN_POSITIVE));
                worst = worst.min(rel);
                count += 1;
                v.check(passed(&rep) && rel >= -1e-10, || format!("{}: margin/rhs {rel:e}", label(&rep)));
            }
        }
        let ctx = Context::new("battery");
        for p in [2.0, 3.0] {
            for k in [1, 2] {
                let rep = verify_embedding_norms(&g, &suite, p, EmbeddingOrder::Integer(k), &ctx)?;
                count += 1;
                v.check(passed(&rep), || label(&rep));
            }
        }
    }
    v.summary = format!("{count} inequality instances, min margin/rhs {worst:.2e} (≥ −1e-10)");
    Ok(v)
}

/// Sharp constants: the L² Sobolev quotient on Q = 4 reaches ≥ 0.98 of p/Q,
/// Hölder equality holds pointwise on the plateaus, and the embedding bound
/// is never exceeded and approached within 5% at k = 1.
fn sharp_constants() -> Result<Verdict> {
    let mut v = Verdict::default();
    let h = HomogeneousGroup::heisenberg();
    let family = ExtremizerFamily::power(2.0, 0.0);
    let opt = optimize_ratio(&h, &family, VerifierId::SobolevLp, SearchSpace::for_family(&family), 200)?;
    v.check(opt.target_constant == 0.5, || format!("target constant {}", opt.target_constant));
    v.check(opt.converged && opt.ratio >= 0.98 && opt.ratio <= 1.0 + VIOLATION_TOLERANCE, || {
        format!("optimized Sobolev ratio {} (converged: {})", opt.ratio, opt.converged)
    });

    let mut holder = 0.0f64;
    for g in groups() {
        for (p, alpha) in [(1.5, 0.0), (2.0, 0.0), (3.0, 0.0), (2.0, 0.5)] {
            for eps in [0.2, 0.05] {
                holder = holder.max(holder_witness(&g, &ExtremizerFamily::power(p, alpha), eps)?.max_residual);
            }
        }
        for p in [2.0, 3.0] {
            holder = holder.max(holder_witness_log(&g, p, 0.1)?.max_residual);
        }
    }
    v.check(holder <= 1e-10, || format!("Hölder witness residual {holder:e}"));

    let mut embed = Vec::new();
    for g in groups() {
        for p in [2.0, 3.0] {
            let fam = ExtremizerFamily::power(p, 0.0);
            let curve = ratio_curve(&g, &fam, VerifierId::Embedding, &DEFAULT_EPSILONS)?;
            v.check(curve.violations == 0, || format!("embedding bound exceeded on {} p = {p}", g.name()));
            let best = optimize_ratio(&g, &fam, VerifierId::Embedding, SearchSpace::for_family(&fam), 200)?;
            v.check(best.ratio <= 1.0 + VIOLATION_TOLERANCE && best.ratio >= 0.95, || {
                format!("embedding ratio {} on {} p = {p}", best.ratio, g.name())
            });
            embed.push(best.ratio);
        }
        let second = ratio_curve(&g, &ExtremizerFamily::power(2.0, 0.0), VerifierId::SobolevLp, &DEFAULT_EPSILONS)?;
        v.check(second.violations == 0 && second.monotone, || format!("Sobolev curve on {}", g.name()));
    }
    let min_embed = embed.iter().cloned().fold(f64::INFINITY, f64::min);
    v.summary = format!(
        "Sobolev ratio {:.5} after {} evaluations (≥ 0.98); Hölder residual {holder:.1e} (≤ 1e-10); k = 1 embedding ratio ≥ {min_embed:.4} (≥ 0.95)",
        opt.ratio, opt.evaluations
    );
    Ok(v)
}

/// Operator algebra on the battery and the resolvent bound on 100 random
/// profiles × 13 values of λ.
fn operator_algebra() -> Result<Verdict> {
    let mut v = Verdict::default();
    let mut worst = 0.0f64;
    for g in groups() {
        for np in battery() {
            let rep = verify_operator_algebra(&g, &np.profile, &DEFAULT_LAMBDAS, &Context::new(&np.name))?;
            for name in ["euler_adjoint_norm", "a_equals_euler_square"] {
                let r = rep.sub_checks.iter().find(|c| c.name == name).and_then(|c| c.residual).unwrap_or(f64::INFINITY);
                worst = worst.max(r);
                v.check(r <= 1e-8, || format!("{name} on {} / {}: {r:e}", g.name(), np.name));
            }
        }
    }
    let mut violations = 0;
    let mut checks = 0;
    let gs = groups();
    for seed in 0..100u64 {
        let g = &gs[seed as usize % gs.len()];
        let np = random_profile(SEED + seed, LogGrid::default())?;
        let rep = verify_operator_algebra(g, &np.profile, &DEFAULT_LAMBDAS, &Context::new(&np.name))?;
        for c in rep.sub_checks.iter().filter(|c| c.name.starts_with("resolvent_lambda_")) {
            checks += 1;
            if c.lhs > c.rhs * (1.0 + 1e-12) {
                violations += 1;
                v.failures.push(format!("{} on {} / {}: {} > {}", c.name, g.name(), np.name, c.lhs, c.rhs));
            }
        }
    }
    v.check(checks == 100 * DEFAULT_LAMBDAS.len(), || format!("only {checks} resolvent checks"));
    v.summary = format!("norm identities max residual {worst:.1e} (≤ 1e-8); {checks} resolvent checks, {violations} violations");
    Ok(v)
}

/// Fractional calculus: |E|² against E², the unitary imaginary part, and the
/// constant C(1/2, 1) against its Γ-function value.
fn fractional() -> Result<Verdict> {
    let mut v = Verdict::default();
    let (mut square, mut unitary) = (0.0f64, 0.0f64);
    for g in groups() {
        for np in battery().into_iter().chain(profiles::extras(LogGrid::default())?) {
            let ctx = Context::new(&np.name);
            let two = verify_fractional(&g, &np.profile, Complex64::new(2.0, 0.0), 2, &ctx)?;
            let r = two.sub_checks.iter().find(|c| c.name == "square_equals_euler_square").and_then(|c| c.residual);
            square = square.max(r.unwrap_or(f64::INFINITY));
            v.check(passed(&two), || label(&two));
            let cplx = verify_fractional(&g, &np.profile, Complex64::new(1.0, 3.0), 1, &ctx)?;
            let r = cplx.sub_checks.iter().find(|c| c.name == "imaginary_part_is_unitary").and_then(|c| c.residual);
            unitary = unitary.max(r.unwrap_or(f64::INFINITY));
            v.check(passed(&cplx), || label(&cplx));
        }
    }
    v.check(square <= 1e-6, || format!("‖|E|²φ‖ vs ‖E²φ‖: {square:e}"));
    v.check(unitary <= 1e-10, || format!("‖|E|^(1+3i)φ‖ vs ‖|E|φ‖: {unitary:e}"));
    // C(1/2, 1) = Γ(2)/Γ(1/2)² · 2^{1/2}/(1/2 · 1/2)
    let g_half = complex_gamma(Complex64::new(0.5, 0.0))?.re;
    let oracle = 2f64.sqrt() / (g_half * g_half) * 4.0;
    let c = embedding_constant(Complex64::new(0.5, 0.0), 1)?;
    let closed = 4.0 * 2f64.sqrt() / PI;
    v.check((c - oracle).abs() <= 1e-10 && (c - closed).abs() <= 1e-10, || format!("C(1/2,1) = {c}"));
    v.summary = format!(
        "|E|² residual {square:.1e} (≤ 1e-6); |E|^(1+3i) residual {unitary:.1e} (≤ 1e-10); C(1/2,1) − 4√2/π = {:.1e}",
        c - closed
    );
    Ok(v)
}

/// Polar decomposition at 10⁶ samples with a fixed seed, and the sphere mass
/// of ℝ².
fn polar() -> Result<Verdict> {
    let mut v = Verdict::default();
    let mut worst = 0.0f64;
    for g in groups() {
        let rep = verify_polar(&g, 1_000_000, SEED, &Context::new("separable"))?;
        worst = worst.max(rep.lhs);
        v.check(passed(&rep), || format!("{}: {:?}", label(&rep), rep.sub_checks));
    }
    let plane = HomogeneousGroup::euclidean(2);
    let est = sphere_integral_mc(&plane, |_| 1.0, 1_000_000, SEED)?;
    let dev = pooled_deviation(est.value, est.std_error, 2.0 * PI, 0.0);
    v.check(dev <= 3.0, || format!("ℝ² sphere mass {} ± {}", est.value, est.std_error));
    v.summary = format!(
        "largest factorized/direct deviation {worst:.2}σ (≤ 3σ); ℝ² sphere mass {:.5} ± {:.5} vs 2π ({dev:.2}σ)",
        est.value, est.std_error
    );
    Ok(v)
}

/// The f_ℓ sequence: quadrature against the exact decomposition and the
/// monotone trend of the quotient.
fn slz_sharpness() -> Result<Verdict> {
    let mut v = Verdict::default();
    let mut worst = 0.0f64;
    let mut trend = Vec::new();
    for g in groups() {
        for (gamma, q) in [(2.0, 2.0), (2.0, 3.0), (3.0, 3.0)] {
            let mut quotients = Vec::new();
            for ell in DEFAULT_ELLS {
                let a = slz_asymptotics(&g, q, gamma, 1.0, ell)?;
                let err = a.lhs_relative_error.max(a.rhs_relative_error);
                worst = worst.max(err);
                v.check(err <= 1e-4, || format!("{} γ = {gamma} q = {q} ℓ = {ell:e}: {err:e}", g.name()));
                quotients.push(a.quotient);
            }
            let limit = ((gamma - 1.0) / q).powf(q);
            let toward = quotients.windows(2).all(|w| (w[1] - limit).abs() < (w[0] - limit).abs());
            let one_sided = quotients.iter().all(|x| *x > limit);
            v.check(toward && one_sided, || format!("{} γ = {gamma} q = {q}: {quotients:?} vs {limit}", g.name()));
            if g.name() == "heisenberg_koranyi" {
                trend.push(format!("(γ,q)=({gamma},{q}): {:.4}→{:.4}→{:.4} ↘ {limit:.4}", quotients[0], quotients[1], quotients[2]));
            }
        }
    }
    v.summary = format!("max decomposition error {worst:.1e} (≤ 1e-4); {}", trend.join(", "));
    Ok(v)
}

/// Dilation covariance over λ ∈ {1/4, 4}.
fn dilation() -> Result<Verdict> {
    let mut v = Verdict::default();
    let mut worst = 0.0f64;
    for g in groups() {
        for np in battery() {
            let ctx = Context::new(&np.name);
            for (p, q) in [(2.0, 3.0), (3.0, 2.0), (1.5, 2.5), (2.0, 2.0), (3.0, 3.0)] {
                let rep = verify_dilation(&g, &np.profile, p, q, &DEFAULT_DILATIONS, &ctx)?;
                v.check(passed(&rep), || label(&rep));
                for c in rep.sub_checks.iter().filter(|c| c.name.starts_with("scaling_lambda_")) {
                    let r = c.residual.unwrap_or(f64::INFINITY);
                    worst = worst.max(r);
                    v.check(r <= 1e-6, || format!("{} {}: {r:e}", label(&rep), c.name));
                }
            }
        }
    }
    v.summary = format!("max relative deviation from λ^(Q/q−Q/p) {worst:.1e} (≤ 1e-6), p = q invariant");
    Ok(v)
}

/// Two `verify` runs of the bundled suite with one seed.
fn determinism() -> Result<Verdict> {
    let mut v = Verdict::default();
    let tmp = tempfile::TempDir::new().expect("temporary directory");
    let run = |name: &str, jobs: &str| {
        let out = tmp.path().join(name);
        let status = Command::new(env!("CARGO_BIN_EXE_hgineq"))
            .args(["verify", "--seed", &SEED.to_string(), "--jobs", jobs, "--out", out.to_str().unwrap()])
            .output()
            .expect("run hgineq");
        (out, status)
    };
    let (a, sa) = run("first", "1");
    let (b, sb) = run("second", "0");
    for (o, s) in [(&a, &sa), (&b, &sb)] {
        v.check(s.status.code() == Some(0), || {
            format!("{}: exit {:?}\n{}", o.display(), s.status.code(), String::from_utf8_lossy(&s.stderr))
        });
    }
    let mut lines = 0;
    for f in [REPORTS_FILE, SHARPNESS_FILE, CURVES_FILE] {
        let (x, y) = (fs::read(a.join(f)).unwrap_or_default(), fs::read(b.join(f)).unwrap_or_default());
        v.check(!x.is_empty() && x == y, || format!("{f} differs between runs"));
        if f == REPORTS_FILE {
            lines = x.iter().filter(|c| **c == b'\n').count();
        }
    }
    v.summary = format!("bundled suite run twice: {lines} report lines, byte-identical outputs, exit 0");
    Ok(v)
}

type Criterion = fn() -> Result<Verdict>;

fn main() -> ExitCode {
    let criteria: [(&str, Criterion); 9] = [
        ("identities", identities),
        ("inequalities", inequalities),
        ("sharp constants", sharp_constants),
        ("operator algebra", operator_algebra),
        ("fractional calculus", fractional),
        ("polar decomposition", polar),
        ("double-log sharpness", slz_sharpness),
        ("dilation covariance", dilation),
        ("determinism", determinism),
    ];
    let mut all = true;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let clock = Instant::now();
        let verdict = run().unwrap_or_else(|e| Verdict { failures: vec![e.to_string()], summary: "error".into() });
        let ok = verdict.failures.is_empty();
        all &= ok;
        println!(
            "criterion {}: {:<4} {name} — {} [{:.1}s]",
            i + 1,
            if ok { "PASS" } else { "FAIL" },
            verdict.summary,
            clock.elapsed().as_secs_f64()
        );
        for f in verdict.failures.iter().take(10) {
            println!("    {f}");
        }
        if verdict.failures.len() > 10 {
            println!("    … {} more", verdict.failures.len() - 10);
        }
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
