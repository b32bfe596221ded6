use proptest::prelude::*;

use lsem_ci::confidence::ConfidenceSet;
use lsem_ci::dist::{chisq_cdf, mixture_quantile, sample_lsem, MixtureSpec, RngSeed};
use lsem_ci::linalg::Mat;
use lsem_ci::lrt_inequality::{
    default_grid, lrt1_confidence_set, lrt1_statistic, lrt1b_confidence_set, lrt1b_statistic, CriticalValues,
};
use lsem_ci::lrt_polynomial::{lrt2_confidence_set, lrt2_statistic_nonzero, lrt2_statistic_zero, Lrt2Options};
use lsem_ci::method::{run_method, Method, MethodConfig};
use lsem_ci::model::{
    gaussian_loglik, mle_for_branch, restricted_mle_union, saturated_loglik, total_effect, CovarianceMatrix,
    LsemParams, ModelBranch,
};
use lsem_ci::split_lrt::{
    est_slrt_from_halves, moment_profile_loglik, profile_d3, profile_loglik_d2, slrt_from_halves, split_grid,
    split_halves, SplitConfig,
};

fn cov2() -> impl Strategy<Value = CovarianceMatrix> {
    (0.1f64..10.0, 0.1f64..10.0, -0.95f64..0.95)
        .prop_map(|(a, c, r)| CovarianceMatrix::sym2(a, r * (a * c).sqrt(), c).unwrap())
}

fn cov3() -> impl Strategy<Value = CovarianceMatrix> {
    proptest::collection::vec(-1.5f64..1.5, 9).prop_filter_map("well conditioned", |v| {
        // A Aᵀ + 0.2 I
        let mut m = Mat::zeros(3);
        for i in 0..3 {
            for j in 0..3 {
                let mut s = if i == j { 0.2 } else { 0.0 };
                for k in 0..3 {
                    s += v[3 * i + k] * v[3 * j + k];
                }
                m.set(i, j, s);
            }
        }
        CovarianceMatrix::new(m).ok()
    })
}

fn psi() -> impl Strategy<Value = f64> {
    prop_oneof![Just(0.0), -3.0f64..3.0, -0.99f64..0.99]
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * (1.0 + a.abs().max(b.abs()))
}

fn sets_close(a: &ConfidenceSet, b: &ConfidenceSet, tol: f64) -> bool {
    a.contains_zero == b.contains_zero
        && match (a.interval, b.interval) {
            (None, None) => true,
            (Some((l1, u1)), Some((l2, u2))) => close(l1, l2, tol) && close(u1, u2, tol),
            _ => false,
        }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn statistics_are_nonnegative(s in cov2(), n in 10usize..5000, psi in psi()) {
        let crit = CriticalValues::new(0.05).unwrap();
        prop_assert!(lrt1_statistic(&s, n, psi, &crit).unwrap().statistic >= 0.0);
        prop_assert!(lrt1b_statistic(&s, n, psi, &crit).unwrap().statistic >= 0.0);
        prop_assert!(lrt2_statistic_zero(&s, n) >= -1e-9);
        if psi != 0.0 {
            prop_assert!(lrt2_statistic_nonzero(&s, n, psi) >= -1e-9);
        }
    }

    #[test]
    fn statistics_are_scale_invariant(s in cov2(), n in 10usize..2000, psi in psi(), c in prop_oneof![Just(0.1), Just(10.0), 0.01f64..100.0]) {
        let crit = CriticalValues::new(0.05).unwrap();
        let t = s.scaled(c).unwrap();
        let pairs = [
            (lrt1_statistic(&s, n, psi, &crit).unwrap().statistic, lrt1_statistic(&t, n, psi, &crit).unwrap().statistic),
            (lrt1b_statistic(&s, n, psi, &crit).unwrap().statistic, lrt1b_statistic(&t, n, psi, &crit).unwrap().statistic),
            (lrt2_statistic_zero(&s, n), lrt2_statistic_zero(&t, n)),
        ];
        for (a, b) in pairs {
            prop_assert!((a - b).abs() <= 1e-8 * (1.0 + a.abs()), "{} vs {}", a, b);
        }
        if psi != 0.0 {
            let (a, b) = (lrt2_statistic_nonzero(&s, n, psi), lrt2_statistic_nonzero(&t, n, psi));
            prop_assert!((a - b).abs() <= 1e-8 * (1.0 + a.abs()));
        }
        prop_assert_eq!(total_effect(&s) == 0.0, total_effect(&t) == 0.0);
        prop_assert!(close(total_effect(&s), total_effect(&t), 1e-12));
    }

    #[test]
    fn lrt2_interval_is_scale_invariant(s in cov2(), n in 10usize..2000, c in 0.01f64..100.0) {
        let a = lrt2_confidence_set(&s, n, 0.05, Lrt2Options::default()).unwrap();
        let b = lrt2_confidence_set(&s.scaled(c).unwrap(), n, 0.05, Lrt2Options::default()).unwrap();
        prop_assert!(sets_close(&a.to_set(), &b.to_set(), 1e-10));
        prop_assert_eq!((a.torn, a.empty, a.zero_included), (b.torn, b.empty, b.zero_included));
    }

    #[test]
    fn lrt_statistics_vanish_on_model_points(beta in -2.0f64..2.0, sigma2 in 0.1f64..5.0, n in 10usize..1000) {
        let crit = CriticalValues::new(0.05).unwrap();
        let s = LsemParams::m1(beta, sigma2).unwrap().implied_covariance();
        if beta != 0.0 {
            prop_assert!(lrt1_statistic(&s, n, beta, &crit).unwrap().statistic < 1e-8);
            prop_assert!(lrt2_statistic_nonzero(&s, n, beta).abs() < 1e-8);
        }
        let s2 = LsemParams::m2(beta, sigma2).unwrap().implied_covariance();
        prop_assert!(lrt1_statistic(&s2, n, 0.0, &crit).unwrap().statistic < 1e-8);
        prop_assert!(lrt2_statistic_zero(&s2, n).abs() < 1e-8);
    }

    #[test]
    fn sample_covariance_dominates(s in cov2(), n in 10usize..1000, d in -0.3f64..0.3, e in 0.5f64..2.0) {
        let sigma = Mat::sym2(s.get(0, 0) * e, s.get(0, 1) + d * (s.get(0, 0) * s.get(1, 1)).sqrt(), s.get(1, 1));
        if let Ok(l) = gaussian_loglik(&sigma, &s, n) {
            prop_assert!(saturated_loglik(&s, n) >= l - 1e-9);
        }
    }

    #[test]
    fn union_fit_is_best_branch(s in prop_oneof![cov2(), cov3()], n in 10usize..1000) {
        let union = restricted_mle_union(&s, n).unwrap();
        let best = ModelBranch::all(s.dim())
            .into_iter()
            .map(|b| mle_for_branch(&s, b, n).unwrap().loglik)
            .fold(f64::NEG_INFINITY, f64::max);
        prop_assert!((union.fit.loglik - best).abs() < 1e-9 * (1.0 + best.abs()));
        prop_assert!(union.fit.loglik <= saturated_loglik(&s, n) + 1e-9);
    }

    #[test]
    fn branch_mle_recovers_generator(b in proptest::collection::vec(-1.5f64..1.5, 3), sigma2 in 0.2f64..4.0, k in 0usize..6) {
        let branch = ModelBranch::all(3)[k];
        let o = branch.order();
        let mut bm = Mat::zeros(3);
        bm.set(o[1], o[0], b[0]);
        bm.set(o[2], o[0], b[1]);
        bm.set(o[2], o[1], b[2]);
        let p = LsemParams::new(branch, bm, sigma2).unwrap();
        let fit = mle_for_branch(&p.implied_covariance(), branch, 100).unwrap();
        prop_assert!(fit.params.b.max_abs_diff(&bm) < 1e-10 * (1.0 + 1.5));
        prop_assert!((fit.params.sigma2 / sigma2 - 1.0).abs() < 1e-10);
    }

    #[test]
    fn mixture_quantiles_round_trip(p in 0.51f64..0.9999, which in 0usize..3) {
        let spec = [MixtureSpec::chibar_01(), MixtureSpec::chibar_12(), MixtureSpec::chisq(2)][which].clone();
        let q = mixture_quantile(p, &spec).unwrap();
        prop_assert!((spec.cdf(q) - p).abs() < 1e-8);
    }

    #[test]
    fn chisq_cdf_is_monotone(x in 0.0f64..80.0, dx in 0.0f64..5.0, df in 1u32..6) {
        prop_assert!(chisq_cdf(x, df).unwrap() <= chisq_cdf(x + dx, df).unwrap() + 1e-15);
    }

    #[test]
    fn moment_profile_never_exceeds_exact_profile(s in cov2(), k in 10usize..500, psi in psi()) {
        let est = moment_profile_loglik(&s, k, 0, 1, psi).unwrap();
        prop_assert!(est <= profile_loglik_d2(&s, k, psi) + 1e-9 * (1.0 + est.abs()));
    }

    #[test]
    fn moment_profile_never_exceeds_exact_profile_d3(s in cov3(), k in 10usize..500, psi in psi()) {
        let est = moment_profile_loglik(&s, k, 0, 1, psi).unwrap();
        let exact = profile_d3(&s, k, 0, 1, psi).unwrap().loglik;
        prop_assert!(est <= exact + 1e-8 * (1.0 + est.abs()), "{} > {}", est, exact);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn sets_are_nested_in_alpha(beta in -1.0f64..1.0, forward in any::<bool>(), n in 40usize..400, seed in any::<u64>()) {
        let p = if forward { LsemParams::m1(beta, 1.0) } else { LsemParams::m2(beta, 1.0) }.unwrap();
        let data = sample_lsem(&p, n, RngSeed::new(seed, 0));
        let s = lsem_ci::model::center_and_covariance(&data).unwrap();
        let grid = default_grid(&s, n, 501);
        let tol = 1e-8;
        prop_assert!(lrt1_confidence_set(&s, n, 0.10, &grid).unwrap()
            .is_subset_of(&lrt1_confidence_set(&s, n, 0.05, &grid).unwrap(), tol));
        prop_assert!(lrt1b_confidence_set(&s, n, 0.10, &grid).unwrap()
            .is_subset_of(&lrt1b_confidence_set(&s, n, 0.05, &grid).unwrap(), tol));
        prop_assert!(lrt2_confidence_set(&s, n, 0.10, Lrt2Options::default()).unwrap().to_set()
            .is_subset_of(&lrt2_confidence_set(&s, n, 0.05, Lrt2Options::default()).unwrap().to_set(), tol));
        let h = split_halves(&data, &SplitConfig::seeded(RngSeed::new(seed, 1))).unwrap();
        prop_assert!(slrt_from_halves(&h, 0.10).unwrap().to_set()
            .is_subset_of(&slrt_from_halves(&h, 0.05).unwrap().to_set(), tol));
        let g = split_grid(&h, 501).unwrap();
        prop_assert!(est_slrt_from_halves(&h, 0.10, &g).unwrap()
            .is_subset_of(&est_slrt_from_halves(&h, 0.05, &g).unwrap(), tol));
    }

    #[test]
    fn seeded_methods_are_deterministic(beta in -1.0f64..1.0, n in 30usize..200, seed in any::<u64>(), stream in any::<u64>()) {
        let p = LsemParams::m1(beta, 1.0).unwrap();
        let a = sample_lsem(&p, n, RngSeed::new(seed, stream));
        prop_assert_eq!(&a, &sample_lsem(&p, n, RngSeed::new(seed, stream)));
        let cfg = MethodConfig { grid_points: 201, bootstrap_resamples: 200, ..MethodConfig::default() };
        for m in [Method::Slrt, Method::EstSlrt, Method::Bootstrap1, Method::Bootstrap2] {
            let r = RngSeed::new(seed ^ 1, stream);
            let x = run_method(m, &a, &cfg, r).unwrap();
            let y = run_method(m, &a, &cfg, r).unwrap();
            prop_assert_eq!(x, y);
        }
    }
}
