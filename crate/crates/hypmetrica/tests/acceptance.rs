//! Acceptance criteria, one test per criterion. Each test prints a single
//! `criterion N: PASS|FAIL` line with the measured quantities.

use hypmetrica::bounds::{
    bound_bernardi_f, bound_dabgamma, bound_l_beta, bound_nab, delta_bernardi, delta_gamma, radius_sp, radius_u, radius_u_residual,
};
use hypmetrica::geometry::{diameter, invert, smallest_enclosing_disk, DomainSpec, Point};
use hypmetrica::metrics::{
    apollonian_distance, ferrand_density, hma_orthogonality_deg, hma_sample, j_distance, kp_density, quasihyperbolic_distance,
    seittenranta_distance, GeodesicOptions, JVariant,
};
use hypmetrica::numeric::bernoulli_gap;
use hypmetrica::relations::{default_suite, run_scenarios, sample_pairs, EvalConfig, Evaluator, MetricKind, PairSampler, RelationClass};
use hypmetrica::univalent::{
    alexander, area_coefficient_check, bbc_transform, bernardi, hyp2f1, hypergeometric, hypergeometric_derivative, norm, reciprocal_form,
    sp_single_term, Complex64, DiskSampler, PowerSeries,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::SQRT_2;

fn report(n: u32, pass: bool, detail: String) {
    println!("criterion {n}: {} {detail}", if pass { "PASS" } else { "FAIL" });
    assert!(pass, "criterion {n} failed: {detail}");
}

fn catalog() -> Vec<(&'static str, DomainSpec)> {
    vec![
        ("unit_disk", DomainSpec::unit_disk()),
        ("upper_half_plane", DomainSpec::upper_half_plane()),
        ("strip", DomainSpec::strip(1.0)),
        ("annulus", DomainSpec::annulus(1.0, 4.0)),
        ("punctured_disk", DomainSpec::punctured_disk(Point::ORIGIN)),
        ("lollipop", DomainSpec::lollipop()),
        ("slit_half_plane", DomainSpec::slit_half_plane()),
        ("half_strip", DomainSpec::half_strip()),
        ("square", DomainSpec::square(1.0)),
        ("square_minus_disk", DomainSpec::square_minus_disk()),
    ]
}

/// Uniform points of the domain inside the square of half-side `scale`
/// around its anchor.
fn interior_points(d: &DomainSpec, n: usize, rng: &mut ChaCha8Rng) -> Vec<Point> {
    let (c, h) = (d.anchor(), d.scale());
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let z = Point::new(c.x + rng.gen_range(-h..h), c.y + rng.gen_range(-h..h));
        if d.contains(z) && d.dist_to_boundary(z).unwrap() > 1e-6 * h {
            out.push(z);
        }
    }
    out
}

#[test]
fn criterion_01_disk_apollonian() {
    let (v, _) = apollonian_distance(&DomainSpec::unit_disk(), Point::ORIGIN, Point::new(0.5, 0.0), 10_000).unwrap();
    let err = (v.value - 3f64.ln()).abs();
    report(1, err <= 1e-3, format!("alpha = {:.12}, |alpha - log 3| = {err:.3e}", v.value));
}

#[test]
fn criterion_02_strip_lemma() {
    let d = DomainSpec::strip(1.0);
    let r = 3.0;
    let (x, y) = (Point::new(r, 0.0), Point::new(-r, 0.0));
    let j = j_distance(&d, x, y, JVariant::Min).unwrap().value;
    let (k, _) = quasihyperbolic_distance(&d, x, y, &GeodesicOptions::default()).unwrap();
    let j_ok = j == (1.0 + 2.0 * r).ln();
    let k_rel = (k.value - 2.0 * r).abs() / (2.0 * r);
    report(2, j_ok && k_rel <= 1e-2, format!("j = {j:.15} (exact {:.15}), k = {:.6}, rel err {k_rel:.3e}", (1.0 + 2.0 * r).ln(), k.value));
}

#[test]
fn criterion_03_universal_inequalities() {
    let tol = 5e-3;
    let config = EvalConfig::default();
    let mut pairs_total = 0;
    let mut failures: Vec<String> = Vec::new();
    for (name, d) in catalog() {
        let sets = sample_pairs(&d, &PairSampler::Generic { count: 50 }, &[0.1], config.seed).unwrap();
        let mut ev = Evaluator::new(&d, &config).unwrap();
        for &(x, y) in &sets[0].pairs {
            let mut get = |k: MetricKind| ev.eval(k, x, y);
            let (Ok(a), Ok(jm), Ok(jp), Ok(ai), Ok(k)) = (
                get(MetricKind::Alpha),
                get(MetricKind::JMin),
                get(MetricKind::JProduct),
                get(MetricKind::AlphaInner),
                get(MetricKind::K),
            ) else {
                continue;
            };
            pairs_total += 1;
            let checks = [
                ("alpha <= 2 j_min", a <= 2.0 * jm + 1e-6),
                ("j_min <= k", jm <= k + tol),
                ("alpha <= alpha_inner", a <= ai + tol),
                ("alpha_inner <= k", ai <= k + tol),
                ("j_min <= j_product <= 2 j_min", jm <= jp && jp <= 2.0 * jm),
            ];
            for (what, ok) in checks {
                if !ok && failures.len() < 8 {
                    failures.push(format!("{name} {what} at ({}, {}): alpha {a:.4}, j {jm:.4}, alpha_inner {ai:.4}, k {k:.4}", fmt(x), fmt(y)));
                }
            }
        }
    }
    let pass = failures.is_empty() && pairs_total >= 500;
    report(3, pass, format!("{pairs_total} pairs; first violations: {failures:?}"));
}

fn fmt(p: Point) -> String {
    format!("{:.4},{:.4}", p.x, p.y)
}

#[test]
fn criterion_04_density_sandwiches() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let jung = 2.0 / 3f64.sqrt();
    let mut worst = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY, 0.0f64);
    let mut failures = Vec::new();
    for (name, d) in catalog() {
        for z in interior_points(&d, 100, &mut rng) {
            let delta = d.dist_to_boundary(z).unwrap();
            let s = ferrand_density(&d, z, 2000).unwrap().value;
            let m = kp_density(&d, z, 2000).unwrap().0.value;
            let (ds, dm) = (delta * s, delta * m);
            worst = (worst.0.min(ds), worst.1.max(ds), worst.2.min(dm), worst.3.max(dm), worst.4.max(m / s));
            let ok = (1.0 - 1e-6..=2.0 + 1e-6).contains(&ds)
                && (1.0 - 1e-6..=2.0 + 1e-6).contains(&dm)
                && s <= m * (1.0 + 1e-12)
                && m <= jung * s * (1.0 + 2e-2);
            if !ok && failures.len() < 5 {
                failures.push(format!("{name} at {}: delta*sigma {ds}, delta*mu {dm}", fmt(z)));
            }
        }
    }
    report(
        4,
        failures.is_empty(),
        format!("delta*sigma in [{:.9}, {:.9}], delta*mu in [{:.9}, {:.9}], max mu/sigma {:.6}; {failures:?}", worst.0, worst.1, worst.2, worst.3, worst.4),
    );
}

#[test]
fn criterion_05_annulus_mu_equals_sigma() {
    let d = DomainSpec::annulus(1.0, 4.0);
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let mut worst: f64 = 0.0;
    for z in interior_points(&d, 100, &mut rng) {
        let s = ferrand_density(&d, z, 4096).unwrap().value;
        let m = kp_density(&d, z, 4096).unwrap().0.value;
        worst = worst.max((m - s).abs() / s);
    }
    report(5, worst <= 2e-2, format!("max |mu - sigma|/sigma = {worst:.3e}"));
}

#[test]
fn criterion_06_scenario_suite() {
    let report_ = run_scenarios(&default_suite(), &EvalConfig::default(), 1);
    let mut notes = Vec::new();
    for s in &report_.scenarios {
        let verdicts: Vec<String> = s.relations.iter().filter(|r| r.expected.is_some()).map(|r| format!("{}/{}={}", r.a.name(), r.b.name(), r.verdict.class)).collect();
        notes.push(format!("{}: match={} [{}]", s.name, s.matches, verdicts.join(" ")));
    }
    let find = |n: &str| report_.scenarios.iter().find(|s| s.name == n).expect("scenario present");
    let pd = find("punctured_disk");
    let alpha_j = pd.relations.iter().find(|r| r.a == MetricKind::Alpha && r.b == MetricKind::JMin).expect("alpha/j row");
    let scales: Vec<f64> = alpha_j.estimate.refinement_history.iter().map(|h| h.0).collect();
    let sweep_ok = scales == vec![0.1, 0.05, 0.01] && alpha_j.verdict.class == RelationClass::MuchLess;
    let d = DomainSpec::punctured_disk(Point::ORIGIN);
    let j_dev = [0.1, 0.05, 0.01]
        .iter()
        .map(|&e| (j_distance(&d, Point::new(e, 0.0), Point::new(-e, 0.0), JVariant::Min).unwrap().value - 3f64.ln()).abs())
        .fold(0.0, f64::max);
    let slit = find("slit_half_plane");
    let slit_ok = slit
        .relations
        .iter()
        .any(|r| r.a == MetricKind::JMin && r.b == MetricKind::AlphaInner && r.verdict.class == RelationClass::Incomparable);
    let pass = report_.all_match && sweep_ok && j_dev <= 1e-9 && slit_ok;
    report(6, pass, format!("all_match={} sweep={scales:?} j dev={j_dev:.1e} slit={slit_ok}; {}", report_.all_match, notes.join("; ")));
}

#[test]
fn criterion_07_norm_constants() {
    let s = DiskSampler::default();
    let koebe = norm(&PowerSeries::koebe(256), &s).unwrap().value;
    let g09 = norm(&PowerSeries::g_beta(0.9, 256), &s).unwrap().value;
    let l112 = bound_l_beta(1.0, 1.0, 2.0).unwrap().value;
    let l123 = bound_l_beta(1.0, 2.0, 3.0).unwrap().value;
    let mut f_dev: f64 = 0.0;
    for g in [0.0, 0.5, 1.0, 3.0] {
        f_dev = f_dev.max((bound_bernardi_f(g).unwrap() - bound_l_beta(1.0, g + 1.0, g + 2.0).unwrap().value).abs());
    }
    let errs = [(koebe - 6.0).abs(), (g09 - 1.4).abs(), (l112 - (4.0 - 2.0 * 3f64.sqrt())).abs(), (l123 - (3.0 - 5f64.sqrt())).abs()];
    let pass = errs[0] <= 1e-4 && errs[1] <= 1e-3 && errs[2] <= 1e-8 && errs[3] <= 1e-8 && f_dev <= 1e-8;
    report(7, pass, format!("koebe {koebe:.9}, g0.9 {g09:.9}, L(1,1,2) {l112:.12}, L(1,2,3) {l123:.12}, max |F - L| {f_dev:.2e}"));
}

#[test]
fn criterion_08_janowski_constants() {
    let n = bound_nab(1.0, -1.0).unwrap();
    let d0 = bound_dabgamma(1.0, -1.0, 0.0).unwrap().value;
    let d1 = bound_dabgamma(1.0, -1.0, 1.0).unwrap().value;
    let errs = [(n - 4.0).abs(), (d0 - 2.0).abs(), (d1 - 8.0 / 3.0).abs()];
    let pass = errs.iter().all(|&e| e <= 1e-6);
    report(8, pass, format!("N(1,-1) = {n:.9}, D(1,-1,0) = {d0:.9}, D(1,-1,1) = {d1:.9} (target 8/3 = {:.9}); errors {:.2e}, {:.2e}, {:.2e}", 8.0 / 3.0, errs[0], errs[1], errs[2]));
}

#[test]
fn criterion_09_direct_vs_formula() {
    let s = DiskSampler::default();
    let mut rows = Vec::new();
    let mut worst: f64 = 0.0;
    for beta in [0.8, 0.9, 1.0] {
        let g = PowerSeries::g_beta(beta, 256);
        let direct = norm(&bbc_transform(&g, 1.0, 2.0).unwrap(), &s).unwrap().value;
        let formula = bound_l_beta(beta, 1.0, 2.0).unwrap().value;
        worst = worst.max((direct - formula).abs());
        rows.push(format!("beta {beta}: norm {direct:.9} vs L {formula:.9}"));
    }
    report(9, worst <= 1e-4, format!("max diff {worst:.2e}; {}", rows.join("; ")));
}

#[test]
fn criterion_10_radius_formulas() {
    let ru = radius_u(0.0, 1.0).unwrap();
    let res_u = radius_u_residual(0.0, 1.0, ru).abs();
    let sp = radius_sp(0.5, 0.0).unwrap();
    let pass = (ru - 1.0 / SQRT_2).abs() <= 1e-12 && res_u < 1e-10 && sp.residual.abs() < 1e-10 && sp.cross_check < 1e-11;
    report(
        10,
        pass,
        format!("radius_u = {ru:.16}, residual {res_u:.1e}; radius_sp = {:.12}, residual {:.1e}, dual quadrature {:.1e}", sp.r0, sp.residual, sp.cross_check),
    );
}

#[test]
fn criterion_11_delta_two_routes() {
    let gamma_route = delta_gamma(1.0).unwrap();
    let hyp_route = delta_bernardi(-1.0, 1.0).unwrap();
    let f = hyp2f1(1.0, 4.0, 3.0, 0.5).unwrap();
    let pass = (gamma_route + 0.25).abs() <= 1e-10 && (hyp_route + 0.25).abs() <= 1e-10 && (f - 8.0 / 3.0).abs() <= 1e-10;
    report(11, pass, format!("Gamma route {gamma_route:.15}, hypergeometric route {hyp_route:.15}, F(1,4;3;1/2) = {f:.15}"));
}

#[test]
fn criterion_12_coefficient_tests() {
    let a = sp_single_term(2, Complex64::new(1.0 / 3.0, 0.0), 0.0).unwrap();
    let b = sp_single_term(3, Complex64::new(1.0 / 9.0, 0.0), 0.5).unwrap();
    let koebe = PowerSeries::koebe(256);
    let rec = reciprocal_form(&koebe, 1.0).unwrap();
    let area = area_coefficient_check(rec.coefficients(), 1.0).unwrap();
    let sum = area.slack + 1.0;
    let pass = a.slack.abs() <= 1e-12 && a.satisfied && b.slack.abs() <= 1e-12 && b.satisfied && sum == 1.0;
    report(12, pass, format!("slacks {:.1e}, {:.1e}; Koebe area sum {sum:.17}", a.slack, b.slack));
}

#[test]
fn criterion_13_property_suites() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let mut notes = Vec::new();

    // metric axioms
    let tol = 5e-3;
    let mut axiom_fail = 0;
    for d in [DomainSpec::unit_disk(), DomainSpec::annulus(1.0, 4.0)] {
        let pts = interior_points(&d, 1500, &mut rng);
        for t in pts.chunks(3).take(500) {
            let (x, y, z) = (t[0], t[1], t[2]);
            let metrics: [&dyn Fn(Point, Point) -> f64; 4] = [
                &|p, q| apollonian_distance(&d, p, q, 512).unwrap().0.value,
                &|p, q| j_distance(&d, p, q, JVariant::Min).unwrap().value,
                &|p, q| j_distance(&d, p, q, JVariant::Product).unwrap().value,
                &|p, q| seittenranta_distance(&d, p, q, 512).unwrap().value,
            ];
            for m in metrics {
                let (xy, yz, xz, yx) = (m(x, y), m(y, z), m(x, z), m(y, x));
                if xz > xy + yz + 3.0 * tol || (xy - yx).abs() > 3.0 * tol || m(x, x) != 0.0 || xy < 0.0 {
                    axiom_fail += 1;
                }
            }
        }
    }
    notes.push(format!("axioms: {axiom_fail} failures on 1000 triples"));

    // inversion involution
    let mut inv_err: f64 = 0.0;
    for _ in 0..10_000 {
        let c = Point::new(rng.gen_range(-10.0..10.0), rng.gen_range(-10.0..10.0));
        let w = Point::new(rng.gen_range(-10.0..10.0), rng.gen_range(-10.0..10.0));
        let back = invert(c, invert(c, w).unwrap()).unwrap();
        inv_err = inv_err.max(back.dist(w) / w.dist(c).max(1.0));
    }
    notes.push(format!("inversion: {inv_err:.1e}"));

    // Jung bounds
    let mut jung_fail = 0;
    for _ in 0..500 {
        let n = rng.gen_range(2..60);
        let pts: Vec<Point> = (0..n).map(|_| Point::new(rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0))).collect();
        let disk = smallest_enclosing_disk(&pts).unwrap();
        let diam = diameter(&pts).0;
        let slack = 1e-12 * (1.0 + disk.radius);
        if disk.radius < diam / 2.0 - slack || disk.radius > diam / 3f64.sqrt() + slack || !pts.iter().all(|p| disk.contains(*p, slack)) {
            jung_fail += 1;
        }
    }
    notes.push(format!("jung: {jung_fail} failures"));

    // Bernoulli
    let mut bern_fail = 0;
    for _ in 0..10_000 {
        let c = rng.gen_range(0.0..5.0);
        let x = rng.gen_range(0.0..50.0);
        let g = bernoulli_gap(c, x);
        if (c >= 1.0 && g < -1e-12) || (c <= 1.0 && g > 1e-12) {
            bern_fail += 1;
        }
    }
    notes.push(format!("bernoulli: {bern_fail} failures"));

    // bernardi(., 0) = alexander
    let mut transforms_equal = true;
    for f in [PowerSeries::koebe(64), PowerSeries::g_beta(0.9, 64), PowerSeries::ell(64)] {
        transforms_equal &= bernardi(&f, 0.0).unwrap() == alexander(&f).unwrap();
    }
    notes.push(format!("bernardi(.,0) == alexander: {transforms_equal}"));

    // F' vs central differences
    let mut fd_err: f64 = 0.0;
    for _ in 0..500 {
        let (a, b, c) = (rng.gen_range(-2.0..3.0), rng.gen_range(-2.0..3.0), rng.gen_range(0.5..4.0));
        let x: f64 = rng.gen_range(0.0..0.8);
        let h = 1e-5;
        let f = |t: f64| hypergeometric(a, b, c, Complex64::new(t, 0.0)).unwrap().re;
        let fd = (f(x + h) - f(x - h)) / (2.0 * h);
        let d = hypergeometric_derivative(a, b, c, Complex64::new(x, 0.0)).unwrap().re;
        fd_err = fd_err.max((fd - d).abs() / d.abs().max(1.0));
    }
    notes.push(format!("F' finite differences: {fd_err:.1e}"));

    // HMA orthogonality
    let ann = DomainSpec::annulus(1.0, 4.0);
    let seeds_a: Vec<Point> = (0..24).map(|k| Point::polar(0.2 * k as f64) * 2.0).collect();
    let strip = DomainSpec::strip(1.0);
    let seeds_s: Vec<Point> = (0..24).map(|k| Point::new(-3.0 + 0.25 * k as f64, 0.3)).collect();
    let mut hma_dev: f64 = 0.0;
    let mut hma_count = 0;
    for (d, seeds) in [(&ann, &seeds_a), (&strip, &seeds_s)] {
        let s = hma_sample(d, seeds, 2048).unwrap();
        let dev = hma_orthogonality_deg(&s);
        hma_count += dev.len();
        hma_dev = dev.iter().copied().fold(hma_dev, f64::max);
    }
    notes.push(format!("hma: max deviation {hma_dev:.3} deg over {hma_count} centers"));

    let pass = axiom_fail == 0
        && inv_err <= 1e-10
        && jung_fail == 0
        && bern_fail == 0
        && transforms_equal
        && fd_err <= 1e-6
        && hma_dev <= 2.0
        && hma_count >= 40;
    report(13, pass, notes.join("; "));
}
