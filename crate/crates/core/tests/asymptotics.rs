use proptest::prelude::*;
use sonine_core::asymptotics::*;
use sonine_core::special::{bessel_j, laguerre};
use sonine_core::Order;

fn o(v: f64) -> Order {
    Order::of(v)
}

const STUDY_N: [u64; 7] = [64, 128, 256, 512, 1024, 2048, 4096];
const CONSISTENCY_N: [u64; 4] = [512, 1024, 2048, 4096];

#[test]
fn laguerre_limit_examples() {
    let r = laguerre_limit_residual(o(0.0), 2.0, 1.0, 512).unwrap();
    assert!(r <= 5e-3, "{r}");
    assert!(laguerre_limit_residual(o(0.0), 2.0, 1.0, 1024).unwrap() < r);
    // x = 0: both sides are 1.
    assert!(laguerre_limit_residual(o(0.0), 0.0, 0.5, 64).unwrap() < 1e-15);
    let r1 = laguerre_limit_residual(o(-1.0), 2.0, 1.0, 512).unwrap();
    let r2 = laguerre_limit_residual(o(-1.0), 2.0, 1.0, 1024).unwrap();
    assert!(r1.is_finite() && r2 < r1);
    // alpha = -1 limit is 2^-1 x J_{-1}(x) = -x J_1(x) / 2 at r = 1.
    let p = laguerre_limit_pair(o(-1.0), 2.0, 1.0, 64).unwrap();
    let expected = -2.0 * bessel_j(o(1.0), 2.0).unwrap() / 2.0;
    assert!((p.limit_value - expected).abs() < 1e-15);
}

#[test]
fn laguerre_limit_compares_at_the_rounded_r() {
    // r = 0.3, N = 5: m = round(1.5) = 2 and the limit uses r' = 0.4.
    let p = laguerre_limit_pair(o(0.5), 1.5, 0.3, 5).unwrap();
    let finite = 5f64.powf(-0.5) * laguerre(2, o(0.5), 1.5 * 1.5 / 20.0);
    assert_eq!(p.finite_value, finite);
    let r = 0.4f64;
    let lim = 2f64.powf(0.5) * r.powf(0.25) * 1.5f64.powf(-0.5) * bessel_j(o(0.5), r.sqrt() * 1.5).unwrap();
    assert!((p.limit_value - lim).abs() < 1e-15);
}

#[test]
fn findiff_check_examples() {
    let c = laguerre_findiff_check(0, 1, o(2.0), 1.5).unwrap();
    assert!(c.abs_residual <= 1e-16);
    let c = laguerre_findiff_check(5, 3, o(-1.0), 2.2).unwrap();
    assert!(c.rel_residual <= 1e-11, "{c:?}");
    let c = laguerre_findiff_check(10, 0, o(0.37), 3.0).unwrap();
    assert_eq!(c.abs_residual, 0.0);
    for (m, k) in [(0, 7), (12, 12), (20, 10), (3, 27)] {
        let c = laguerre_findiff_check(m, k, o(1.3), 4.1).unwrap();
        assert!(c.rel_residual <= 1e-11, "{m} {k} {c:?}");
    }
}

#[test]
fn laguerre_sum_examples() {
    let c = laguerre_sum_check(o(0.3), o(-0.2), 3.0, 4.0, 5).unwrap();
    assert!(c.rel_residual <= 1e-13, "{c:?}");
    let c = laguerre_sum_check(o(-1.0), o(-1.0), 2.0, 5.0, 12).unwrap();
    assert!(c.rel_residual <= 1e-12, "{c:?}");
    let c = laguerre_sum_check(o(0.8), o(2.5), 1.0, 1.0, 0).unwrap();
    assert_eq!(c.abs_residual, 0.0);
    assert!(laguerre_sum_check(o(0.0), o(0.0), 1.0, 1.0, 65).is_err());
}

#[test]
fn exact_identities_hold_over_a_grid() {
    for &(a, b) in &[(0.0, 0.0), (0.3, -0.2), (-1.0, -1.0), (-3.0, 2.5), (4.0, -2.0), (-0.5, -4.0)] {
        for &(x, y) in &[(0.5, 1.0), (3.0, 4.0), (10.0, 2.0), (20.0, 15.0)] {
            for n in [1u64, 2, 7, 16, 33, 64] {
                let c = laguerre_sum_check(o(a), o(b), x, y, n).unwrap();
                assert!(c.rel_residual <= 1e-12, "sum {a} {b} {x} {y} {n}: {c:?}");
            }
        }
    }
    for &(a, b) in &[(1.5, 0.5), (2.0, -1.0), (0.0, 0.0), (3.5, 1.0), (-0.5, 2.0)] {
        for &x in &[0.5, 2.0, 3.0, 8.0, 15.0] {
            for n in [0u64, 1, 5, 10, 16, 30, 48] {
                let c = hansen_ratio_sum_check(o(a), o(b), x, n).unwrap();
                assert!(c.rel_residual <= 1e-11, "hansen {a} {b} {x} {n}: {c:?}");
            }
        }
    }
    for nu in 0u32..=4 {
        for &x in &[0.5, 2.0, 5.0, 12.0] {
            for n in [0u64, 1, 8, 20, 48] {
                let c = squared_laguerre_sum_check(nu, x, n).unwrap();
                assert!(c.rel_residual <= 1e-10, "squared {nu} {x} {n}: {c:?}");
            }
        }
    }
}

#[test]
fn hansen_and_squared_examples() {
    assert_eq!(hansen_ratio_sum_check(o(1.5), o(0.5), 3.0, 0).unwrap().abs_residual, 0.0);
    // Oracle: both sides equal 3.608301334204592 (mpmath, 30 digits).
    let c = hansen_ratio_sum_check(o(1.5), o(0.5), 3.0, 10).unwrap();
    assert!(c.rel_residual <= 1e-11);
    assert!((c.lhs - 3.608301334204592).abs() < 1e-13);
    let c = hansen_ratio_sum_check(o(2.0), o(-1.0), 2.0, 16).unwrap();
    assert!(c.rel_residual <= 1e-11);
    assert!((c.rhs - 3.249127923871266).abs() < 1e-13);
    assert!(hansen_ratio_sum_check(o(-2.0), o(0.0), 1.0, 3).is_err());

    assert_eq!(squared_laguerre_sum_check(0, 1.7, 0).unwrap().abs_residual, 0.0);
    assert!(squared_laguerre_sum_check(1, 2.0, 8).unwrap().rel_residual <= 1e-10);
    assert!(squared_laguerre_sum_check(2, 5.0, 20).unwrap().rel_residual <= 1e-10);
    assert!(squared_laguerre_sum_check(2, 5.0, 49).is_err());
}

#[test]
fn fractional_integral_examples() {
    // N = 0, alpha = 0, beta = 1: both sides equal X.
    let c = laguerre_fractional_integral_check(o(0.0), o(1.0), 2.0, 0).unwrap();
    assert!((c.lhs - 1.0).abs() < 1e-15 && (c.rhs - 1.0).abs() < 1e-15);
    let c = laguerre_fractional_integral_check(o(0.5), o(1.5), 3.0, 6).unwrap();
    assert!(c.rel_residual <= 1e-9, "{c:?}");
    assert!((c.rhs - 0.06623862033676975).abs() < 1e-15);
    let c = laguerre_fractional_integral_check(o(0.0), o(0.5), 4.0, 10).unwrap();
    assert!(c.rel_residual <= 1e-9, "{c:?}");
    assert!((c.rhs - -0.314122808646678).abs() < 1e-14);
    assert!(laguerre_fractional_integral_check(o(-1.5), o(1.0), 1.0, 3).is_err());
    assert!(laguerre_fractional_integral_check(o(0.0), o(0.0), 1.0, 3).is_err());
    assert!(laguerre_fractional_integral_check(o(0.0), o(1.0), 1.0, 33).is_err());
}

#[test]
fn product_integral_examples() {
    let c = laguerre_product_integral_check(o(0.3), o(0.7), 0, 0, 5).unwrap();
    let b = sonine_core::special::beta_fn(1.3, 1.7).unwrap();
    assert!((c.lhs - b).abs() < 1e-13 && (c.rhs - b).abs() < 1e-15);
    let c = laguerre_product_integral_check(o(0.2), o(0.4), 3, 2, 10).unwrap();
    assert!(c.rel_residual <= 1e-9, "{c:?}");
    assert!((c.rhs - 1.28401456213718).abs() < 1e-13);
    let c = laguerre_product_integral_check(o(0.0), o(0.0), 5, 5, 4).unwrap();
    assert!(c.rel_residual <= 1e-9, "{c:?}");
    assert!((c.rhs - 0.7156025434423).abs() < 1e-12);
    let c = laguerre_product_integral_check(o(-0.6), o(-0.3), 24, 24, 1).unwrap();
    assert!(c.rel_residual <= 1e-9, "{c:?}");
    assert!(laguerre_product_integral_check(o(-1.0), o(0.0), 1, 1, 1).is_err());
    assert!(laguerre_product_integral_check(o(0.0), o(0.0), 25, 1, 1).is_err());
}

#[test]
fn anomalous_block_examples() {
    // alpha = -1: the block is N^-beta L_N^beta(Y) with limit 2^beta y^-beta J_beta(y).
    let (b, y) = (0.7, 3.0);
    let p = anomalous_block_limit(o(-1.0), o(b), 2.0, y, 256).unwrap();
    let big_y = y * y / 1024.0;
    assert!((p.finite_value - 256f64.powf(-b) * laguerre(256, o(b), big_y)).abs() < 1e-14);
    let lim = 2f64.powf(b) * y.powf(-b) * bessel_j(o(b), y).unwrap();
    assert!((p.limit_value - lim).abs() < 1e-14);
    // x = 0: only j = 0 survives.
    let p = anomalous_block_limit(o(-3.0), o(0.0), 0.0, y, 64).unwrap();
    let lim = 2f64.powi(-2) * y.powi(2) * bessel_j(o(-2.0), y).unwrap();
    assert!((p.limit_value - lim).abs() < 1e-14);
    assert!(anomalous_block_limit(o(-1.5), o(0.0), 1.0, 1.0, 10).is_err());
}

#[test]
fn convergence_examples() {
    let t = convergence_study(LimitTarget::LaguerreLimit { alpha: o(0.0), x: 2.0, r: 1.0 }, &STUDY_N).unwrap();
    assert_eq!(t.fit_status, FitStatus::Fitted);
    assert!((-1.5..=-0.6).contains(&t.fitted_rate), "{}", t.fitted_rate);

    let t = convergence_study(
        LimitTarget::AnomalousBlock { alpha: o(-2.0), beta: o(0.0), x: 2.0, y: 3.0 },
        &STUDY_N,
    )
    .unwrap();
    assert!((-1.5..=-0.6).contains(&t.fitted_rate), "{}", t.fitted_rate);
    assert!(t.last().unwrap().abs_error <= 1e-2);
    let t = convergence_study(
        LimitTarget::AnomalousBlock { alpha: o(-2.0), beta: o(0.0), x: 2.0, y: 3.0 },
        &[64, 128, 256, 512],
    )
    .unwrap();
    assert!((t.fitted_rate + 1.0).abs() <= 0.3, "{}", t.fitted_rate);

    let t = convergence_study(
        LimitTarget::LaguerreSum { alpha: o(0.3), beta: o(-0.2), x: 3.0, y: 4.0 },
        &[8, 16, 32, 64],
    )
    .unwrap();
    assert!(t.entries.iter().all(|e| e.abs_error <= 1e-12 * e.limit_value.abs().max(1.0)));
    assert_eq!(t.fit_status, FitStatus::Exact);
    assert_eq!(t.fitted_rate, f64::NEG_INFINITY);
}

#[test]
fn appendix_hansen_family_matches_the_jet_derivative() {
    let target = LimitTarget::AppendixHansen { alpha: o(1.0), beta: o(0.5), x: 2.0, p: 1, z: 1.0 };
    let t = convergence_study(target, &CONSISTENCY_N).unwrap();
    let last = t.last().unwrap();
    assert!(last.abs_error <= 1e-3 * last.limit_value.abs().max(1.0), "{last:?}");
    assert!((-1.5..=-0.6).contains(&t.fitted_rate), "{}", t.fitted_rate);
}

fn assert_consistent(target: LimitTarget) {
    let t = convergence_study(target, &CONSISTENCY_N).unwrap();
    let last = t.last().unwrap();
    assert!(last.abs_error <= 1e-2, "{}: {last:?}", target.name());
    assert!(t.non_monotone_steps() <= 1, "{}: {:?}", target.name(), t.entries);
}

#[test]
fn finite_n_sides_approach_the_bessel_sides() {
    assert_consistent(LimitTarget::SonineSumLimit { alpha: o(0.5), beta: o(1.0), x: 3.0, y: 4.0 });
    assert_consistent(LimitTarget::SonineSumLimit { alpha: o(0.0), beta: o(0.0), x: 2.0, y: 5.0 });
    assert_consistent(LimitTarget::SonineSumLimit { alpha: o(-1.0), beta: o(0.5), x: 2.0, y: 3.0 });
    assert_consistent(LimitTarget::SonineSumLimit { alpha: o(-2.0), beta: o(-1.0), x: 1.5, y: 2.5 });
    assert_consistent(LimitTarget::HansenSumLimit { alpha: o(2.0), beta: o(0.0), x: 3.0 });
    assert_consistent(LimitTarget::HansenSumLimit { alpha: o(3.5), beta: o(1.0), x: 2.0 });
    assert_consistent(LimitTarget::PiSumLimit { nu: 0, x: 2.0 });
    assert_consistent(LimitTarget::PiSumLimit { nu: 2, x: 3.0 });
    assert_consistent(LimitTarget::FractionalLimit { alpha: o(0.5), beta: o(1.5), x: 3.0 });
    assert_consistent(LimitTarget::FractionalLimit { alpha: o(0.0), beta: o(0.5), x: 4.0 });
}

#[test]
fn limit_target_round_trips_through_json() {
    let t = LimitTarget::AppendixHansen { alpha: o(1.0), beta: o(-0.5), x: 2.0, p: 2, z: 0.5 };
    let s = serde_json::to_string(&t).unwrap();
    assert!(s.contains("\"target\":\"appendix-hansen\""));
    assert_eq!(serde_json::from_str::<LimitTarget>(&s).unwrap(), t);
}

#[test]
fn exact_tables_keep_the_infinite_rate_through_json() {
    let t = convergence_study(LimitTarget::LaguerreSum { alpha: o(-2.0), beta: o(0.5), x: 1.0, y: 2.0 }, &[1, 3, 9]).unwrap();
    assert_eq!(t.fit_status, FitStatus::Exact);
    let s = serde_json::to_string(&t).unwrap();
    assert!(s.contains("\"fitted_rate\":\"-inf\""), "{s}");
    let back: ConvergenceTable = serde_json::from_str(&s).unwrap();
    assert_eq!(back.fitted_rate, f64::NEG_INFINITY);
    assert_eq!(back.entries, t.entries);
}

proptest! {
    #[test]
    fn finite_difference_is_linear(
        f in prop::collection::vec(-1e3f64..1e3, 12),
        g in prop::collection::vec(-1e3f64..1e3, 12),
        a in -5.0f64..5.0,
        b in -5.0f64..5.0,
        k in 0u32..=6,
        m in 0u64..=5,
    ) {
        let h = |i: u64| a * f[i as usize] + b * g[i as usize];
        let lhs = finite_difference(h, m, k);
        let rhs = a * finite_difference(|i| f[i as usize], m, k) + b * finite_difference(|i| g[i as usize], m, k);
        let scale: f64 = (0..12).map(|i| a.abs() * f[i].abs() + b.abs() * g[i].abs()).sum::<f64>() * 64.0;
        prop_assert!((lhs - rhs).abs() <= 1e-13 * scale.max(1.0));
    }
}
