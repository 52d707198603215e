use hypmetrica::geometry::{DomainSpec, Point};
use hypmetrica::relations::{
    classify, diverges, estimate_relation, quasi_isotropy_constant, row_pattern, row_possible_in_plane, sample_pairs,
    suite_by_name, EvalConfig, MetricKind, PairSampler, RelationClass, RelationEstimate, Thresholds, MIN_PAIRS,
};
use hypmetrica::Error;
use proptest::prelude::*;

fn p(x: f64, y: f64) -> Point {
    Point::new(x, y)
}

fn estimate(history: &[(f64, f64, f64)]) -> RelationEstimate {
    RelationEstimate {
        sup_ratio: history.iter().map(|h| h.1).fold(f64::NEG_INFINITY, f64::max),
        inf_ratio: history.iter().map(|h| h.2).fold(f64::INFINITY, f64::min),
        argmax_pair: (Point::ORIGIN, Point::ORIGIN),
        argmin_pair: (Point::ORIGIN, Point::ORIGIN),
        sample_pairs: 50 * history.len(),
        refinement_history: history.to_vec(),
    }
}

#[test]
fn metric_names_round_trip() {
    for k in MetricKind::ALL {
        assert_eq!(MetricKind::parse(k.name()).unwrap(), k);
    }
    assert_eq!(MetricKind::parse("Apollonian").unwrap(), MetricKind::Alpha);
    assert_eq!(MetricKind::parse("j-min").unwrap(), MetricKind::JMin);
    assert!(matches!(MetricKind::parse("euclid"), Err(Error::BadParameters(_))));
}

#[test]
fn metric_against_itself_is_one() {
    let d = DomainSpec::annulus(0.5, 2.0);
    let cfg = EvalConfig { samples: 128, ..EvalConfig::default() };
    let sampler = PairSampler::Generic { count: MIN_PAIRS };
    let e = estimate_relation(&d, MetricKind::JMin, MetricKind::JMin, &sampler, &[0.3, 0.1], &cfg).unwrap();
    assert_eq!((e.sup_ratio, e.inf_ratio), (1.0, 1.0));
    assert_eq!(e.refinement_history.len(), 2);
}

#[test]
fn too_few_pairs_are_rejected() {
    let d = DomainSpec::unit_disk();
    let cfg = EvalConfig::default();
    let sampler = PairSampler::Generic { count: MIN_PAIRS - 1 };
    let r = estimate_relation(&d, MetricKind::JMin, MetricKind::JProduct, &sampler, &[0.1], &cfg);
    assert!(matches!(r, Err(Error::BadParameters(_))));
}

#[test]
fn sampling_is_seeded() {
    let d = DomainSpec::square(1.0);
    let s = PairSampler::Generic { count: 60 };
    let a = sample_pairs(&d, &s, &[0.2, 0.05], 7).unwrap();
    let b = sample_pairs(&d, &s, &[0.2, 0.05], 7).unwrap();
    let c = sample_pairs(&d, &s, &[0.2, 0.05], 8).unwrap();
    assert_eq!(a, b);
    assert_ne!(a, c);
    for set in &a {
        assert_eq!(set.pairs.len(), 60);
        for (x, y) in &set.pairs {
            assert!(d.contains(*x) && d.contains(*y));
        }
    }
}

#[test]
fn puncture_pairs_are_antipodal() {
    let c = p(0.1, -0.2);
    let d = DomainSpec::punctured_disk(c);
    let s = PairSampler::Puncture { center: c, count: 50 };
    let sets = sample_pairs(&d, &s, &[0.01], 1).unwrap();
    for (x, y) in &sets[0].pairs {
        assert!(((*x + *y) * 0.5).dist(c) < 1e-12);
        assert!((x.dist(c) - 0.01).abs() < 1e-12);
    }
}

#[test]
fn fixed_sampler_repeats_pairs() {
    let pairs = vec![(p(0.1, 0.0), p(0.2, 0.0)); 3];
    let s = PairSampler::Fixed { pairs: pairs.clone() };
    let sets = sample_pairs(&DomainSpec::unit_disk(), &s, &[1.0, 2.0], 0).unwrap();
    assert!(sets.iter().all(|set| set.pairs == pairs));
    let json = serde_json::to_string(&s).unwrap();
    assert_eq!(serde_json::from_str::<PairSampler>(&json).unwrap(), s);
}

#[test]
fn divergence_rule() {
    assert!(diverges(&[1.0, 2.0, 4.0, 8.0], true, 2.0));
    assert!(!diverges(&[1.0, 2.0, 3.0, 8.0], true, 2.5));
    assert!(!diverges(&[1.0, 3.0, 2.0, 8.0], true, 1.1));
    assert!(diverges(&[8.0, 4.0, 2.0], false, 2.0));
    assert!(!diverges(&[1.0], true, 2.0));
    assert!(!diverges(&[1.0, f64::NAN, 4.0], true, 1.0));
}

#[test]
fn classification_of_synthetic_histories() {
    let th = Thresholds::default();
    let flat = estimate(&[(0.3, 2.0, 1.0), (0.1, 2.1, 0.9), (0.03, 2.0, 1.0)]);
    assert_eq!(classify(&flat, &th).class, RelationClass::Approx);
    let falling = estimate(&[(0.3, 1.0, 0.5), (0.1, 1.0, 0.1), (0.03, 1.0, 0.01)]);
    assert_eq!(classify(&falling, &th).class, RelationClass::MuchLess);
    let rising = estimate(&[(0.3, 2.0, 1.0), (0.1, 10.0, 1.0), (0.03, 100.0, 1.0)]);
    assert_eq!(classify(&rising, &th).class, RelationClass::MuchGreater);
    let both = estimate(&[(0.3, 2.0, 0.5), (0.1, 20.0, 0.05), (0.03, 200.0, 0.005)]);
    assert_eq!(classify(&both, &th).class, RelationClass::Incomparable);
    let short = estimate(&[(0.3, 2.0, 1.0), (0.1, 2.0, 1.0)]);
    assert_eq!(classify(&short, &th).class, RelationClass::Undecided);
}

#[test]
fn flipping_is_an_involution() {
    use RelationClass::*;
    for c in [Approx, MuchLess, MuchGreater, Incomparable, LessOnly, GreaterOnly, Undecided] {
        assert_eq!(c.flipped().flipped(), c);
        assert_eq!(c.to_string(), c.label());
    }
    assert_eq!(MuchLess.flipped(), MuchGreater);
}

#[test]
fn row_table() {
    assert!(row_pattern(0).is_none());
    assert!(row_pattern(13).is_none());
    assert_eq!(row_pattern(1).unwrap(), [RelationClass::Approx; 4]);
    for row in 1..=12 {
        let pat = row_pattern(row).unwrap();
        assert!(pat.iter().all(|c| matches!(c, RelationClass::Approx | RelationClass::MuchLess | RelationClass::MuchGreater)));
    }
    assert!(row_possible_in_plane(1) && !row_possible_in_plane(2));
}

#[test]
fn suites_by_name() {
    assert!(!suite_by_name("default").unwrap().is_empty());
    assert!(!suite_by_name("classical").unwrap().is_empty());
    assert!(suite_by_name("missing").is_err());
}

#[test]
fn disk_is_quasi_isotropic_with_constant_one() {
    let d = DomainSpec::unit_disk();
    let q = quasi_isotropy_constant(&d, &[p(0.0, 0.0), p(0.5, 0.3), p(-0.8, 0.1)], 32).unwrap();
    assert!((q.observed - 1.0).abs() < 1e-9);
    assert!((q.interval.1 - 2.0 * q.interval.0).abs() < 1e-15);
    assert!(quasi_isotropy_constant(&d, &[p(0.0, 0.0)], 8).is_err());
    assert!(matches!(quasi_isotropy_constant(&d, &[], 32), Err(Error::EmptyInput)));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn scaling_ratios_preserves_bounded_classes(s in 0.2f64..5.0, a in 0.5f64..2.0) {
        let th = Thresholds::default();
        let e = estimate(&[(0.3, a, a / 2.0), (0.1, a * 1.01, a / 2.1), (0.03, a, a / 2.0)]);
        let scaled: Vec<_> = e.refinement_history.iter().map(|h| (h.0, h.1 * s, h.2 * s)).collect();
        prop_assert_eq!(classify(&e, &th).class, RelationClass::Approx);
        prop_assert_eq!(classify(&estimate(&scaled), &th).class, RelationClass::Approx);
    }

    #[test]
    fn much_less_is_stable_under_more_pairs(extra in 0.0f64..0.5) {
        // Extra pairs can only lower infima and raise suprema.
        let th = Thresholds::default();
        let base = [(0.3, 1.0, 0.5), (0.1, 1.0, 0.1), (0.03, 1.0, 0.01)];
        let more: Vec<_> = base.iter().map(|h| (h.0, h.1 + extra, h.2 * (1.0 - extra))).collect();
        prop_assert_ne!(classify(&estimate(&more), &th).class, RelationClass::MuchGreater);
    }
}
