use hypmetrica::bounds::{
    bernardi_norm_bound, bound_bernardi_f, bound_dabgamma, bound_l_beta, bound_l_one, bound_mabbc, bound_nab,
    bound_strongly_starlike, delta_bernardi, delta_gamma, delta_orders, lambda_delta, lambda_r_gap, lambda_star,
    lambda_star_gamma, radius_sp, radius_sp_second_coeff, radius_u, radius_u_residual, strongly_starlike_g,
    strongly_starlike_h, strongly_starlike_norm_bound, BoundMethod,
};
use hypmetrica::numeric::bernoulli_gap;
use hypmetrica::Error;
use proptest::prelude::*;

/// Brute-force maximum of `f` on a uniform grid of `[0, 1)`.
fn scan_max(f: impl Fn(f64) -> f64, n: usize) -> f64 {
    (0..n).map(|i| f(i as f64 / n as f64)).fold(f64::NEG_INFINITY, f64::max)
}

#[test]
fn l_one_grid_matches_closed_form() {
    for (b, c) in [(1.0, 1.0), (1.0, 2.0), (2.0, 3.0), (0.5, 1.0), (0.5, 4.0)] {
        let grid = bound_l_beta(1.0, b, c).unwrap();
        let closed = bound_l_one(b, c).unwrap();
        assert_eq!(grid.method, BoundMethod::GridGolden);
        assert_eq!(closed.method, BoundMethod::ClosedForm);
        // The scan stops at 1 − 1e−6, which costs O(1e−6) when the supremum sits at x = 1.
        let tol = if closed.extremizer >= 1.0 - 1e-9 { 2e-6 } else { 1e-9 };
        assert!((grid.value - closed.value).abs() < tol, "b {b} c {c}: {} vs {}", grid.value, closed.value);
        assert!((grid.extremizer - closed.extremizer.min(1.0 - 1e-6)).abs() < 1e-4);
    }
}

#[test]
fn m_with_equal_parameters_reduces_to_n() {
    // With b = c both hypergeometric factors are binomials and the ratio is 1/(1 − |B|x).
    for (a, bb) in [(1.0, -1.0), (0.5, -0.5), (0.8, 0.3), (0.2, -0.9)] {
        let m = bound_mabbc(a, bb, 2.0, 2.0).unwrap();
        let n = bound_nab(a, bb).unwrap();
        let tol = if bb.abs() == 1.0 { 1e-5 } else { 1e-9 };
        assert!((m.value - n).abs() < tol, "A {a} B {bb}: {} vs {n}", m.value);
    }
}

#[test]
fn n_closed_forms() {
    for alpha in [0.0, 0.25, 0.5, 0.9] {
        assert!((bound_nab(1.0 - 2.0 * alpha, -1.0).unwrap() - 4.0 * (1.0 - alpha)).abs() < 1e-15);
    }
    assert_eq!(bound_nab(0.7, 0.0).unwrap(), 0.7);
    assert!((bound_nab(0.7, 1e-9).unwrap() - 0.7).abs() < 1e-8);
    assert!(matches!(bound_nab(0.5, 0.5), Err(Error::ConstraintViolation(_))));
}

#[test]
fn m_grid_matches_brute_force_scan() {
    let m = bound_mabbc(1.0, -1.0, 1.0, 2.0).unwrap();
    let f = |x: f64| {
        let h = |a, b, c, z| hypmetrica::univalent::hyp2f1(a, b, c, z).unwrap();
        (1.0 - x * x) * h(3.0, 2.0, 3.0, x) / h(2.0, 1.0, 2.0, x)
    };
    let brute = 0.5 * 2.0 * scan_max(f, 20_000);
    assert!(m.value >= brute - 1e-12 && m.value - brute < 1e-4, "{} vs {brute}", m.value);
    assert!(!m.multimodal);
}

#[test]
fn d_is_m_shifted() {
    let d = bound_dabgamma(0.5, -0.5, 0.5).unwrap();
    let m = bound_mabbc(0.5, -0.5, 1.5, 2.5).unwrap();
    assert_eq!(d, m);
    assert!(bound_dabgamma(0.5, -0.5, -1.0).is_err());
}

#[test]
fn m_reports_missed_hypotheses() {
    // A = 1 > B + 1 = 0.5.
    let m = bound_mabbc(1.0, -0.5, 1.0, 2.0).unwrap();
    assert!(!m.outside_hypotheses.is_empty());
    let ok = bound_mabbc(0.5, -0.5, 1.0, 2.0).unwrap();
    assert!(ok.outside_hypotheses.is_empty());
    assert!(bound_mabbc(0.5, 0.0, 1.0, 2.0).is_err());
    assert!(bound_mabbc(0.5, -0.5, 2.0, 1.0).is_err());
}

#[test]
fn bernardi_closed_forms() {
    assert!((bound_bernardi_f(0.0).unwrap() - 2.0 * (2.0 - 3f64.sqrt())).abs() < 1e-15);
    assert!((delta_gamma(0.0).unwrap() - 0.5).abs() < 1e-14);
    assert!((delta_gamma(1.0).unwrap() + 0.25).abs() < 1e-14);
    assert!((bernardi_norm_bound(0.0).unwrap() - 4.0).abs() < 1e-13);
    assert!((delta_bernardi(0.0, 0.0).unwrap() - 0.5).abs() < 1e-14);
    assert!(delta_gamma(-1.0).is_err());
    assert!(delta_bernardi(-0.5, 0.2).is_err());
}

#[test]
fn delta_orders_with_unit_beta_is_bernardi() {
    for (alpha, gamma) in [(0.0, 0.0), (0.3, 1.0), (0.5, 2.0), (0.9, 0.1)] {
        let a = delta_orders(alpha, 1.0, gamma).unwrap();
        let b = delta_bernardi(alpha, gamma).unwrap();
        assert!((a - b).abs() < 1e-14);
    }
}

#[test]
fn lambda_star_values() {
    assert_eq!(lambda_star(0.0).unwrap(), 1.0);
    assert_eq!(lambda_star(1.0).unwrap(), 0.0);
    assert!((lambda_star(0.5).unwrap() - 0.5f64.sqrt()).abs() < 1e-15);
    assert!(lambda_star(1.5).is_err());
}

#[test]
fn lambda_delta_is_continuous_at_branch_switch() {
    for a in [0.0, 0.3, 0.8] {
        let d0 = (1.0 + a) / (3.0 + a);
        let below = lambda_delta(d0 - 1e-10, a).unwrap();
        let at = lambda_delta(d0, a).unwrap();
        assert!((below - at).abs() < 1e-8, "a {a}: {below} vs {at}");
    }
    assert!((lambda_delta(0.0, 0.0).unwrap() - 0.5f64.sqrt()).abs() < 1e-15);
    assert!(lambda_delta(0.9, 0.5).is_err());
}

#[test]
fn gamma_thresholds() {
    let t = lambda_star_gamma(1.0, 0.0).unwrap();
    assert!((t.lambda_s - 2f64.sqrt()).abs() < 1e-14);
    assert!(lambda_r_gap(1.0, 0.0, t.lambda_r).abs() < 1e-9);
    let t = lambda_star_gamma(0.5, 0.3).unwrap();
    assert!(t.lambda_s > 0.0 && t.lambda_r > 0.0);
    assert!(lambda_r_gap(0.5, 0.3, t.lambda_r).abs() < 1e-9);
    assert!(lambda_star_gamma(0.5, 3.0).is_err());
}

#[test]
fn strongly_starlike_root_and_maximum() {
    for (alpha, beta) in [(0.5, 0.0), (0.3, 0.5), (0.9, 0.2)] {
        let r = bound_strongly_starlike(alpha, beta).unwrap();
        let k = r.extremizer;
        assert!(k > 1.0);
        assert!(strongly_starlike_h(alpha, beta, k).abs() < 1e-9);
        let g = |x: f64| strongly_starlike_g(alpha, beta, x);
        let scan = (1..20_000).map(|i| g(1.0 + i as f64 * 1e-3)).fold(f64::NEG_INFINITY, f64::max);
        assert!(r.value >= scan - 1e-9, "alpha {alpha} beta {beta}: {} < {scan}", r.value);
    }
    assert_eq!(strongly_starlike_norm_bound(1.0, 0.25).unwrap(), 5.0);
    assert!(bound_strongly_starlike(0.0, 0.0).is_err());
}

#[test]
fn radius_sp_cross_checks() {
    for (mu, alpha) in [(0.5, 0.0), (0.2, 0.5), (0.8, -0.5)] {
        let r = radius_sp(mu, alpha).unwrap();
        assert!(r.r0 > 0.0 && r.r0 < 1.0);
        assert!(r.cross_check < 1e-9, "{r:?}");
        assert!(r.bracket.0 <= r.r0 && r.r0 <= r.bracket.1);
    }
    assert!(radius_sp(1.0, 0.0).is_err());
}

#[test]
fn radius_sp_second_coeff_decreases_in_f2() {
    let mut last = 1.0;
    for f2 in [0.0, 1.0, 2.0, 3.0, 4.0] {
        let r = radius_sp_second_coeff(0.0, f2).unwrap();
        assert!(r.r0 > 0.0 && r.r0 < last, "f2 {f2}: {}", r.r0);
        assert!(r.cross_check < 1e-9);
        last = r.r0;
    }
    assert!(radius_sp_second_coeff(0.0, 5.0).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn bernoulli_inequality(c in 0.0f64..5.0, x in -0.999f64..10.0) {
        prop_assume!(c * x > -1.0);
        let gap = bernoulli_gap(c, x);
        if c >= 1.0 {
            prop_assert!(gap >= -1e-12 * (1.0 + gap.abs()));
        } else {
            prop_assert!(gap <= 1e-12 * (1.0 + gap.abs()));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn radius_u_solves_its_equation(alpha in 0.0f64..0.99, lambda in 0.01f64..3.0) {
        let r = radius_u(alpha, lambda).unwrap();
        prop_assert!(r > 0.0 && r < 1.0);
        prop_assert!(radius_u_residual(alpha, lambda, r).abs() < 1e-9 * (1.0 + lambda));
    }

    #[test]
    fn n_is_monotone_in_a(a1 in -0.9f64..1.0, a2 in -0.9f64..1.0, b in -1.0f64..-0.95) {
        let (lo, hi) = if a1 < a2 { (a1, a2) } else { (a2, a1) };
        prop_assert!(bound_nab(lo, b).unwrap() <= bound_nab(hi, b).unwrap());
    }
}
