//! Extremizer families, quotient maximization, Hölder witnesses and the
//! exact decomposition along the `f_ℓ` sequence.

use hgineq_core::catalog::{Status, VerifierId};
use hgineq_core::sharpness::*;
use hgineq_core::HomogeneousGroup;
use proptest::prelude::*;

#[test]
fn l2_sobolev_quotient_approaches_the_sharp_constant() {
    let g = HomogeneousGroup::heisenberg();
    let family = ExtremizerFamily::power(2.0, 0.0);
    let curve = ratio_curve(&g, &family, VerifierId::SobolevLp, &DEFAULT_EPSILONS).unwrap();
    // the sharp constant p/Q
    assert_eq!(curve.target_constant, 0.5);
    assert_eq!(curve.violations, 0);
    assert!(curve.monotone, "{curve:#?}");
    assert!(curve.max_ratio >= 0.98, "{}", curve.max_ratio);
    assert!(curve.max_ratio <= 1.0 + VIOLATION_TOLERANCE);
}

#[test]
fn quotient_curves_stay_below_one() {
    let cases = [
        (HomogeneousGroup::euclidean(3), ExtremizerFamily::power(3.0, 0.0), VerifierId::SobolevLp),
        (HomogeneousGroup::euclidean(3), ExtremizerFamily::power(2.0, 0.5), VerifierId::WeightedLp),
        (HomogeneousGroup::heisenberg(), ExtremizerFamily::power(2.0, 1.0), VerifierId::WeightedL2),
        (HomogeneousGroup::heisenberg(), ExtremizerFamily::higher_order(0.5, 2), VerifierId::HigherOrder),
        (HomogeneousGroup::heisenberg(), ExtremizerFamily::power(2.0, 0.0), VerifierId::Embedding),
        (HomogeneousGroup::euclidean(3), ExtremizerFamily::LogPowerCutoff { p: 2.0 }, VerifierId::WeightedLp),
    ];
    for (g, family, verifier) in cases {
        let curve = ratio_curve(&g, &family, verifier, &family.default_parameters()).unwrap();
        assert_eq!(curve.violations, 0, "{curve:#?}");
        assert!(curve.points.iter().all(|p| p.ratio > 0.0));
    }
}

#[test]
fn embedding_bound_is_approached_at_first_order() {
    let g = HomogeneousGroup::heisenberg();
    let family = ExtremizerFamily::power(2.0, 0.0);
    let curve = ratio_curve(&g, &family, VerifierId::Embedding, &DEFAULT_EPSILONS).unwrap();
    assert!(curve.max_ratio >= 0.95, "{}", curve.max_ratio);
    assert_eq!(curve.violations, 0);
}

#[test]
fn incompatible_family_and_verifier_are_rejected() {
    let g = HomogeneousGroup::heisenberg();
    let slz = ExtremizerFamily::SlzFl { q: 2.0, gamma: 2.0, radius: 1.0 };
    assert!(ratio_curve(&g, &slz, VerifierId::SobolevLp, &[1e2]).is_err());
    assert!(ratio_curve(&g, &ExtremizerFamily::power(2.0, 0.0), VerifierId::SobolevLp, &[]).is_err());
}

#[test]
fn golden_section_reaches_the_constant_within_budget() {
    let g = HomogeneousGroup::heisenberg();
    let family = ExtremizerFamily::power(2.0, 0.0);
    let out = optimize_ratio(&g, &family, VerifierId::SobolevLp, SearchSpace::for_family(&family), 200).unwrap();
    assert!(out.converged);
    assert_eq!(out.status, Status::Pass);
    assert!(out.evaluations <= 200);
    assert!(out.ratio >= 0.98 && out.ratio <= 1.0 + VIOLATION_TOLERANCE, "{out:?}");
    // the supremum is approached as ε → 0, i.e. at the lower end of the range
    assert!(out.parameter <= 0.01, "{out:?}");
}

#[test]
fn nelder_mead_searches_parameter_and_width() {
    let g = HomogeneousGroup::heisenberg();
    let family = ExtremizerFamily::power(2.0, 1.0);
    let space = SearchSpace::for_family(&family).with_width(DEFAULT_WIDTH_RANGE.0, DEFAULT_WIDTH_RANGE.1);
    let out = optimize_ratio(&g, &family, VerifierId::WeightedL2, space, 200).unwrap();
    assert!(out.ratio >= 0.98 && out.ratio <= 1.0 + VIOLATION_TOLERANCE, "{out:?}");
    let again = optimize_ratio(&g, &family, VerifierId::WeightedL2, space, 200).unwrap();
    assert_eq!(out, again);
}

#[test]
fn holder_equality_holds_on_the_plateau() {
    for (g, family) in [
        (HomogeneousGroup::heisenberg(), ExtremizerFamily::power(2.0, 0.0)),
        (HomogeneousGroup::euclidean(3), ExtremizerFamily::power(3.0, 0.5)),
    ] {
        for eps in [0.2, 0.05] {
            let w = holder_witness(&g, &family, eps).unwrap();
            assert!(w.points >= 50, "{w:?}");
            assert!(w.max_residual <= 1e-10, "{w:?}");
        }
    }
    let w = holder_witness_log(&HomogeneousGroup::euclidean(3), 2.0, 0.1).unwrap();
    assert!(w.max_residual <= 1e-10, "{w:?}");
}

#[test]
fn holder_witness_needs_a_plateau() {
    let g = HomogeneousGroup::euclidean(3);
    assert!(holder_witness(&g, &ExtremizerFamily::power(2.0, 2.0), 0.1).is_err());
}

#[test]
fn slz_decomposition_matches_quadrature() {
    let g = HomogeneousGroup::euclidean(3);
    for (gamma, q) in [(2.0, 2.0), (2.0, 3.0), (3.0, 3.0)] {
        let mut quotients = Vec::new();
        for ell in DEFAULT_ELLS {
            let a = slz_asymptotics(&g, q, gamma, 1.0, ell).unwrap();
            assert!(a.lhs_relative_error <= 1e-4, "{a:#?}");
            assert!(a.rhs_relative_error <= 1e-4, "{a:#?}");
            assert!((a.limit - ((gamma - 1.0) / q).powf(q)).abs() < 1e-15);
            quotients.push(a.quotient);
        }
        // moving monotonically down towards ((γ−1)/q)^q
        let limit = ((gamma - 1.0) / q).powf(q);
        assert!(quotients.windows(2).all(|w| w[1] < w[0]), "{quotients:?}");
        assert!(quotients.iter().all(|v| *v > limit), "{quotients:?}");
    }
}

#[test]
fn slz_asymptotics_rejects_tiny_ell() {
    assert!(slz_asymptotics(&HomogeneousGroup::euclidean(3), 2.0, 2.0, 1.0, 2.0).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn power_members_never_beat_the_constant(eps in 0.01f64..0.5, p in 1.5f64..3.5, width in 0.3f64..3.0) {
        let g = HomogeneousGroup::heisenberg();
        let family = ExtremizerFamily::power(p, 0.0);
        let (lhs, rhs) = evaluate_member(&g, &family, VerifierId::SobolevLp, eps, width).unwrap();
        prop_assert!(lhs <= rhs * (1.0 + VIOLATION_TOLERANCE), "{lhs} vs {rhs}");
    }

    #[test]
    fn log_power_members_never_beat_the_constant(eps in 0.01f64..0.5, p in 1.5f64..3.5) {
        let g = HomogeneousGroup::euclidean(3);
        let family = ExtremizerFamily::LogPowerCutoff { p };
        let (lhs, rhs) = evaluate_member(&g, &family, VerifierId::WeightedLp, eps, DEFAULT_CUTOFF_WIDTH).unwrap();
        prop_assert!(lhs <= rhs * (1.0 + VIOLATION_TOLERANCE), "{lhs} vs {rhs}");
    }
}
