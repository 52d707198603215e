use hypmetrica::univalent::{
    alexander, area_coefficient_check, bbc_transform, bernardi, class_screens, hadamard, hornich_plus, hornich_scale, hyp2f1,
    hypergeometric, hypergeometric_derivative, hypergeometric_euler, hypergeometric_series, identity_check_th2eq2, libera, norm,
    p2lambda_test, pre_schwarzian, reciprocal_form, sp_necessary, sp_single_term, sp_sufficient, starlike_coefficient_test,
    subordination_range_check, tail_bound, u_exact_nonneg, u_lambda_star, u_membership, ClassSpec, Complex64, DiskSampler, PowerSeries,
};
use hypmetrica::Error;
use proptest::prelude::*;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn max_diff(a: &PowerSeries, b: &PowerSeries, upto: usize) -> f64 {
    (0..upto).map(|k| (a.coeff(k) - b.coeff(k)).norm()).fold(0.0, f64::max)
}

/// Normalized series `z + Σ a_n zⁿ` with small coefficients.
fn small_normalized() -> impl Strategy<Value = PowerSeries> {
    prop::collection::vec((-0.3f64..0.3, -0.3f64..0.3), 2..8).prop_map(|v| {
        let mut coeffs = vec![c(0.0), c(1.0)];
        for (k, (re, im)) in v.into_iter().enumerate() {
            let w = 1.0 / ((k + 2) * (k + 2)) as f64;
            coeffs.push(Complex64::new(re * w, im * w));
        }
        PowerSeries::new(coeffs).unwrap()
    })
}

#[test]
fn koebe_and_family_coefficients() {
    let k = PowerSeries::koebe(16);
    for n in 1..16 {
        assert_eq!(k.coeff(n), c(n as f64));
    }
    let l = PowerSeries::ell(16);
    assert!(l.is_normalized());
    // g′ = 1 − z at β = 1.
    let g1 = PowerSeries::g_beta(1.0, 16);
    assert_eq!(g1.coeff(2), c(-0.5));
    assert!((3..=16).all(|n| g1.coeff(n) == c(0.0)));
    // g′ = 1/(1 − z) at β = 1/3, so g = −log(1 − z).
    let g3 = PowerSeries::g_beta(1.0 / 3.0, 16);
    for n in 1..16 {
        assert!((g3.coeff(n).re - 1.0 / n as f64).abs() < 1e-14);
    }
    let named = PowerSeries::named("g_beta", &[1.0], 16).unwrap();
    assert_eq!(named, g1);
    assert!(matches!(PowerSeries::named("nope", &[], 16), Err(Error::BadParameters(_))));
    assert!(matches!(PowerSeries::named("koebe", &[1.0], 16), Err(Error::BadParameters(_))));
}

#[test]
fn series_json_round_trip() {
    let f = PowerSeries::g_beta(0.85, 32).rotate(0.3);
    let back = PowerSeries::from_json(&f.to_json()).unwrap();
    assert_eq!(f, back);
    assert!(PowerSeries::from_json("[[0,0]]").is_err());
    assert!(PowerSeries::from_json("not json").is_err());
}

#[test]
fn evaluate_rejects_points_outside_disk() {
    let f = PowerSeries::koebe(32);
    assert!(matches!(f.evaluate(c(1.0)), Err(Error::OutsideDisk)));
    let v = f.evaluate(c(0.1)).unwrap();
    assert!((v.re - 0.1 / 0.81).abs() < 1e-12);
}

#[test]
fn log_of_vanishing_core_fails() {
    let f = PowerSeries::from_real(&[0.0, 1.0]).unwrap();
    assert!(matches!(f.log(), Err(Error::VanishingCore)));
}

#[test]
fn pre_schwarzian_of_koebe() {
    // f″/f′ = (4 + 2z)/(1 − z²) ... for k(z) = z/(1 − z)²: k′ = (1 + z)/(1 − z)³.
    let t = pre_schwarzian(&PowerSeries::koebe(64)).unwrap();
    let z = c(0.3);
    let exact = 1.0 / (1.0 + 0.3) + 3.0 / (1.0 - 0.3);
    assert!((t.evaluate(z).unwrap().re - exact).abs() < 1e-12);
}

#[test]
fn norm_of_identity_is_zero() {
    let e = norm(&PowerSeries::identity(16), &DiskSampler::default()).unwrap();
    assert_eq!(e.value, 0.0);
}

#[test]
fn norm_vanishing_derivative() {
    // f′(z) = 1 + 4z vanishes at z = −1/4.
    let f = PowerSeries::from_real(&[0.0, 1.0, 2.0]).unwrap();
    let grid = DiskSampler::circles(&[0.25, 0.5], 32);
    assert!(matches!(norm(&f, &grid), Err(Error::VanishingDerivative)));
}

#[test]
fn hypergeometric_closed_forms() {
    // F(1, 1; 2; x) = −log(1 − x)/x
    for x in [0.1, 0.5, 0.89, 0.95, 0.999] {
        let v = hyp2f1(1.0, 1.0, 2.0, x).unwrap();
        assert!((v + (-x).ln_1p() / x).abs() < 1e-10 * v, "x = {x}");
    }
    // F(a, b; b; x) = (1 − x)^{−a}
    let v = hyp2f1(2.5, 1.5, 1.5, 0.7).unwrap();
    assert!((v - 0.3f64.powf(-2.5)).abs() < 1e-12 * v);
    // F(1, 4; 3; 1/2) = 8/3
    assert!((hyp2f1(1.0, 4.0, 3.0, 0.5).unwrap() - 8.0 / 3.0).abs() < 1e-13);
    assert!(matches!(hypergeometric(1.0, 1.0, -2.0, c(0.5)), Err(Error::PolyLikePole)));
    assert!(hypergeometric(1.0, 1.0, 2.0, c(1.5)).is_err());
}

#[test]
fn euler_integral_agrees_with_series() {
    for (a, b, cc) in [(1.0, 1.0, 2.0), (0.5, 1.5, 3.0), (2.0, 0.5, 1.75)] {
        let s = hypergeometric_series(a, b, cc, c(0.85)).unwrap().re;
        let e = hypergeometric_euler(a, b, cc, 0.85).unwrap();
        assert!((s - e).abs() < 1e-9 * s.abs(), "{a} {b} {cc}: {s} vs {e}");
    }
}

#[test]
fn transforms_on_koebe() {
    let k = PowerSeries::koebe(32);
    let a = alexander(&k).unwrap();
    for n in 1..32 {
        assert_eq!(a.coeff(n), c(1.0));
    }
    let l = libera(&k).unwrap();
    assert!((l.coeff(3).re - 3.0 * 2.0 / 4.0).abs() < 1e-15);
    let not_normalized = PowerSeries::from_real(&[1.0, 1.0]).unwrap();
    assert!(alexander(&not_normalized).is_err());
    assert!(bernardi(&k, -1.0).is_err());
}

#[test]
fn hornich_operations() {
    let k = PowerSeries::koebe(32);
    let i = PowerSeries::identity(32);
    // identity is the neutral element: (f′·1)
    assert!(max_diff(&hornich_plus(&k, &i), &k, 31) < 1e-14);
    let s = hornich_scale(1.0, &k).unwrap();
    assert!(max_diff(&s, &k, 31) < 1e-10);
    let z = hornich_scale(0.0, &k).unwrap();
    assert!(max_diff(&z, &i, 31) < 1e-14);
}

#[test]
fn hadamard_with_geometric_series_is_identity() {
    let mut geo = vec![c(0.0)];
    geo.extend(std::iter::repeat_n(c(1.0), 32));
    let g = PowerSeries::new(geo).unwrap();
    let f = PowerSeries::g_beta(0.9, 32);
    assert_eq!(hadamard(&f, &g), f);
}

#[test]
fn coefficient_conditions() {
    // S_p single-term boundary and interior.
    let r = sp_single_term(2, c(1.0 / 3.0), 0.0).unwrap();
    assert!(r.satisfied && r.slack.abs() < 1e-15);
    let r = sp_single_term(2, c(0.4), 0.0).unwrap();
    assert!(!r.satisfied);
    assert!(sp_single_term(1, c(0.1), 0.0).is_err());
    // Negative coefficients are rejected by the necessary condition.
    let b = [c(1.0), c(-0.1)];
    assert!(matches!(sp_necessary(&b, 1.0, 0.0), Err(Error::NegativeCoefficient(1))));
    let b = [c(1.0), c(0.1)];
    assert!(sp_sufficient(&b, 1.0, 0.0).unwrap().satisfied);
    assert!(u_membership(&b, 1.0, 1.0).unwrap().satisfied);
    assert!(u_exact_nonneg(&b, 1.0).unwrap().satisfied);
    assert!(starlike_coefficient_test(&b, 1.0, 0.0).unwrap().satisfied);
    assert!(p2lambda_test(&[c(1.0), c(0.0), c(0.2)], 0.2).unwrap().satisfied);
    assert!((u_lambda_star(&[c(1.0), c(0.0)]) - 2f64.sqrt() / 2.0).abs() < 1e-15);
}

#[test]
fn koebe_area_sum_is_one() {
    let b = reciprocal_form(&PowerSeries::koebe(128), 1.0).unwrap();
    let r = area_coefficient_check(b.coefficients(), 1.0).unwrap();
    assert!(r.slack.abs() < 1e-12 && r.satisfied);
}

#[test]
fn identity_check_on_koebe() {
    let grid = DiskSampler::circles(&[0.2, 0.5], 16);
    let res = identity_check_th2eq2(&PowerSeries::koebe(128), 1.0, &grid).unwrap();
    assert!(res < 1e-9, "residual {res}");
}

#[test]
fn subordination_needs_attested_univalence() {
    let phi = PowerSeries::from_real(&[0.0, 0.5]).unwrap();
    let psi = PowerSeries::from_real(&[0.0, 1.0]).unwrap();
    assert!(matches!(subordination_range_check(&phi, &psi, false), Err(Error::NotAttestedUnivalent)));
    let ev = subordination_range_check(&phi, &psi, true).unwrap();
    assert!(ev.pass);
    let big = PowerSeries::from_real(&[0.0, 2.0]).unwrap();
    assert!(!subordination_range_check(&big, &psi, true).unwrap().pass);
}

#[test]
fn class_screens_on_koebe() {
    let k = PowerSeries::koebe(256);
    let reports = class_screens(&k, &ClassSpec::Starlike { alpha: 0.0 }, 1.0).unwrap();
    let screen = reports.iter().find(|r| r.condition_id == "norm_screen").unwrap();
    assert!(screen.satisfied);
    assert!(class_screens(&k, &ClassSpec::FBeta { beta: 0.5 }, 1.0).is_err());
}

#[test]
fn tail_bound_cases() {
    assert_eq!(tail_bound(&[]), Some(0.0));
    assert_eq!(tail_bound(&[1.0, 0.0, 0.0, 0.0]), Some(0.0));
    let geo: Vec<f64> = (0..40).map(|n| 0.5f64.powi(n)).collect();
    let tb = tail_bound(&geo).unwrap();
    assert!((tb - 0.5f64.powi(39)).abs() < 1e-20);
    let flat = vec![1.0; 40];
    assert!(tail_bound(&flat).is_none());
    assert!(tail_bound(&[1.0, 0.0, 1.0, 1.0]).is_none());
}

#[test]
fn disk_sampler_validation() {
    assert!(DiskSampler::default().validate().is_ok());
    assert!(DiskSampler::circles(&[0.5, 0.4], 8).validate().is_err());
    assert!(DiskSampler::circles(&[0.5, 1.0], 8).validate().is_err());
    assert!(DiskSampler::circles(&[], 8).validate().is_err());
    assert_eq!(DiskSampler::circles(&[0.5], 8).points().count(), 9);
}

#[test]
fn zf_prime_of_hypergeometric_is_starlike() {
    // h(z) = z F′(1, b; c; z) has Re(z h′/h) > 0 on sampled circles.
    for (b, cc) in [(1.0, 2.0), (2.0, 3.0), (1.0, 3.0)] {
        for &r in &[0.3, 0.6, 0.85] {
            for k in 0..32 {
                let z = Complex64::from_polar(r, 2.0 * std::f64::consts::PI * k as f64 / 32.0);
                let hp = |w: Complex64| w * hypergeometric_derivative(1.0, b, cc, w).unwrap();
                let h = hp(z);
                let dh = (hp(z * (1.0 + 1e-6)) - hp(z * (1.0 - 1e-6))) / (z * 2e-6);
                assert!((z * dh / h).re > -1e-9, "b = {b}, c = {cc}, z = {z}");
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn bernardi_zero_is_alexander(f in small_normalized()) {
        prop_assert_eq!(bernardi(&f, 0.0).unwrap(), alexander(&f).unwrap());
    }

    #[test]
    fn bernardi_one_is_libera(f in small_normalized()) {
        prop_assert!(max_diff(&bernardi(&f, 1.0).unwrap(), &libera(&f).unwrap(), f.truncation()) < 1e-15);
    }

    #[test]
    fn bbc_matches_bernardi(f in small_normalized(), g in 0.0f64..4.0) {
        let a = bbc_transform(&f, g + 1.0, g + 2.0).unwrap();
        let b = bernardi(&f, g).unwrap();
        prop_assert!(max_diff(&a, &b, f.truncation()) < 1e-14);
    }

    #[test]
    fn derivative_matches_finite_differences(a in -2.0f64..3.0, b in -2.0f64..3.0, cc in 0.5f64..4.0, x in 0.0f64..0.8) {
        let h = 1e-5;
        let f = |t: f64| hyp2f1(a, b, cc, t).unwrap();
        let fd = (f(x + h) - f(x - h)) / (2.0 * h);
        let d = hypergeometric_derivative(a, b, cc, c(x)).unwrap().re;
        prop_assert!((fd - d).abs() <= 1e-6 * d.abs().max(1.0), "{} vs {}", fd, d);
    }

    #[test]
    fn reciprocal_forms_multiply_to_one(f in small_normalized(), mu in -2.0f64..2.0) {
        let p = reciprocal_form(&f, mu).unwrap();
        let q = reciprocal_form(&f, -mu).unwrap();
        let prod = p.mul(&q);
        let one = PowerSeries::constant(c(1.0), prod.truncation() + 1);
        prop_assert!(max_diff(&prod, &one, prod.truncation() / 2) < 1e-9);
    }

    #[test]
    fn from_reciprocal_recovers_series(f in small_normalized(), mu in 0.2f64..2.0) {
        let b = reciprocal_form(&f, mu).unwrap();
        let back = PowerSeries::from_reciprocal(&b, mu).unwrap();
        prop_assert!(max_diff(&back, &f, f.truncation() / 2) < 1e-9);
    }

    #[test]
    fn exp_log_round_trip(f in small_normalized()) {
        let core = f.core();
        let back = core.log().unwrap().exp();
        prop_assert!(max_diff(&back, &core, core.truncation()) < 1e-12);
    }

    #[test]
    fn div_inverts_mul(f in small_normalized(), g in small_normalized()) {
        let (a, b) = (f.core(), g.core());
        let q = a.mul(&b).div(&b).unwrap();
        prop_assert!(max_diff(&q, &a, a.truncation().min(b.truncation())) < 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn norm_is_rotation_invariant(theta in 0.0f64..std::f64::consts::TAU, beta in 0.8f64..1.0) {
        let s = DiskSampler::default();
        let f = PowerSeries::g_beta(beta, 128);
        let a = norm(&f, &s).unwrap();
        let b = norm(&f.rotate(theta), &s).unwrap();
        prop_assert!((a.value - b.value).abs() <= 1e-6 + a.error_estimate + b.error_estimate, "{} vs {}", a.value, b.value);
    }
}
