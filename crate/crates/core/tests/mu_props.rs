mod common;

use common::{naive_mu, oracle_r0};
use nds_core::mu;
use nds_core::norm::NormParameter;
use nds_core::semigroup::NumericalSemigroup;
use proptest::prelude::*;

fn s(a1: u64, a2: u64) -> NumericalSemigroup {
    NumericalSemigroup::new(a1, a2).unwrap()
}

fn ft(t: f64) -> NormParameter {
    NormParameter::finite(t).unwrap()
}

fn coprime_pair() -> impl Strategy<Value = (u64, u64)> {
    (2u64..20, 3u64..40)
        .prop_filter_map("coprime, ordered", |(a, b)| (a < b && common::gcd(a, b) == 1).then_some((a, b)))
}

#[test]
fn r0_matches_bisection_oracle() {
    for (a1, a2) in [(2, 7), (3, 5), (2, 3), (5, 8)] {
        for t in [1.3, 2.0, 2.5, 4.0, 9.0] {
            let got = mu::r0_solve(&s(a1, a2), ft(t)).unwrap();
            let want = oracle_r0(a1, a2, t);
            assert!((got - want).abs() < 1e-9, "({a1},{a2}) t={t}: {got} vs {want}");
        }
    }
}

#[test]
fn mu_decreases_in_t() {
    let g = s(3, 5);
    let ts: Vec<f64> = (0..15).map(|i| 1.1 + 0.5 * i as f64).collect();
    for i in 0..=40 {
        let r = i as f64 / 40.0;
        for w in ts.windows(2) {
            let (a, b) = (mu::mu(&g, r, ft(w[0])).unwrap(), mu::mu(&g, r, ft(w[1])).unwrap());
            assert!(a >= b - 1e-15, "r={r}: mu({}) = {a} < mu({}) = {b}", w[0], w[1]);
        }
    }
}

#[test]
fn mu_at_the_endpoints() {
    let g = s(2, 7);
    for t in [ft(1.5), ft(4.0), NormParameter::One, NormParameter::Infinity] {
        assert!((mu::mu(&g, 0.0, t).unwrap() - 0.5).abs() < 1e-15);
        assert!((mu::mu(&g, 1.0, t).unwrap() - 1.0 / 7.0).abs() < 1e-15);
    }
    assert!(mu::mu(&g, 1.5, ft(2.0)).is_err());
    assert!(mu::mu_second(&g, 0.0, ft(2.0)).is_err());
}

#[test]
fn one_sided_endpoint_slopes() {
    let g = s(2, 7);
    for t in [1.5, 3.0, 8.0] {
        assert!((mu::mu_prime(&g, 0.0, ft(t)).unwrap() + 0.5).abs() < 1e-12);
        assert!((mu::mu_prime(&g, 1.0, ft(t)).unwrap() - 1.0 / 7.0).abs() < 1e-12);
    }
}

#[test]
fn slope_tends_to_minus_inverse_a1_for_large_t() {
    let g = s(2, 7);
    for r in [0.2, 0.5, 0.7] {
        let errs: Vec<f64> =
            [50.0, 100.0, 200.0].iter().map(|&t| (mu::mu_prime(&g, r, ft(t)).unwrap() + 0.5).abs()).collect();
        assert!(errs[0] >= errs[1] && errs[1] >= errs[2], "r={r}: {errs:?}");
        assert!(errs[2] < 1e-3);
    }
}

#[test]
fn mu_stays_finite_for_large_t() {
    let g = s(2, 7);
    for t in [300.0, 800.0] {
        for i in 0..=20 {
            let r = i as f64 / 20.0;
            let v = mu::mu(&g, r, ft(t)).unwrap();
            let ref_v = ((1.0 - r) / 2.0).max(r / 7.0);
            assert!(v.is_finite() && v >= ref_v && v <= ref_v * 2f64.powf(1.0 / t) * (1.0 + 1e-15));
        }
    }
}

#[test]
fn symbolic_parameters() {
    let g = s(2, 7);
    assert!((mu::r0_solve(&g, NormParameter::Infinity).unwrap() - 5.0 / 7.0).abs() < 1e-15);
    assert!(mu::r0_solve(&g, NormParameter::One).is_err());
    assert!(mu::taylor_k(&g, NormParameter::Infinity).is_err());
    assert!(matches!(mu::taylor_k(&g, ft(1.5)), Err(mu::MuError::UnboundedCurvature { .. })));
}

#[test]
fn level_roots_split_the_curve() {
    let g = s(3, 5);
    for t in [1.5, 2.0, 3.5] {
        let t = ft(t);
        let (m, top) = (mu::min_mu(&g, t).unwrap(), 1.0 / 3.0);
        for j in 1..=10 {
            let l = m + (top - m) * j as f64 / 10.0;
            let rl = mu::level_root(&g, t, l).unwrap();
            let r0 = mu::r0_solve(&g, t).unwrap();
            if l > 0.2 {
                assert!(rl < r0);
            }
            for i in 0..=200 {
                let r = i as f64 / 200.0 * mu::argmin_mu(&g, t).unwrap();
                if (r - rl).abs() < 1e-9 {
                    continue;
                }
                assert_eq!(mu::mu(&g, r, t).unwrap() < l, r > rl, "l={l} r={r} rl={rl}");
            }
        }
        assert!(mu::level_root(&g, t, m * 0.99).is_err());
        assert!(mu::level_root(&g, t, 0.5).is_err());
    }
}

proptest! {
    #[test]
    fn mu_matches_definition((a1, a2) in coprime_pair(), r in 0.0f64..=1.0, t in 1.01f64..30.0) {
        let got = mu::mu(&s(a1, a2), r, ft(t)).unwrap();
        let want = naive_mu(a1, a2, r, t);
        prop_assert!((got - want).abs() <= 1e-13 * want);
    }

    #[test]
    fn argmin_is_a_minimum((a1, a2) in coprime_pair(), t in 1.1f64..20.0, dr in -0.05f64..0.05) {
        let g = s(a1, a2);
        let rm = mu::argmin_mu(&g, ft(t)).unwrap();
        let m = mu::min_mu(&g, ft(t)).unwrap();
        let r = (rm + dr).clamp(0.0, 1.0);
        prop_assert!(mu::mu(&g, r, ft(t)).unwrap() >= m * (1.0 - 1e-14));
        prop_assert!((mu::mu(&g, rm, ft(t)).unwrap() - m).abs() < 1e-12);
    }

    #[test]
    fn r0_lies_in_range_and_reaches_level((a1, a2) in coprime_pair(), t in 1.05f64..50.0) {
        let g = s(a1, a2);
        let r0 = mu::r0_solve(&g, ft(t)).unwrap();
        let (lo, hi) = mu::r0_range(&g);
        // Near adjacent generators and large t, r0 − lo drops below the solver
        // tolerance, so the lower bound only holds to that tolerance.
        prop_assert!(r0 > lo - mu::R_TOLERANCE && r0 < hi);
        prop_assert!((mu::mu(&g, r0, ft(t)).unwrap() - 1.0 / a2 as f64).abs() < 1e-12);
        prop_assert!(mu::p_of_t(&g, ft(t)).unwrap() < 0.0);
    }

    #[test]
    fn inverse_r0_round_trips((a1, a2) in coprime_pair(), u in 0.01f64..0.99) {
        let g = s(a1, a2);
        let (lo, hi) = mu::r0_range(&g);
        let r = lo + u * (hi - lo);
        let t = mu::inverse_r0(&g, r).unwrap();
        prop_assert!((mu::r0_solve(&g, ft(t)).unwrap() - r).abs() < 1e-9);
    }
}
