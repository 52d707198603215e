use super::{
    classify, estimate_on, john_constant, quasi_isotropy_evidence, sample_pairs, uniformity_constant, EvalConfig, Evaluator,
    Evidence, MetricKind, PairSampler, PairSet, RelationClass, RelationEstimate, RelationVerdict,
};
use crate::error::{Error, Result};
use crate::geometry::{DomainSpec, Point};
use crate::numeric::fmt17;
use serde::{Deserialize, Serialize};

use MetricKind::{Alpha, AlphaInner, JMin, K};
use RelationClass::{Approx, Incomparable, MuchGreater, MuchLess};

/// The compared pairs `(α, j)`, `(j, ᾱ̃)`, `(ᾱ̃, k)`, `(α, k)`.
pub const FOUR_RELATIONS: [(MetricKind, MetricKind); 4] = [(Alpha, JMin), (JMin, AlphaInner), (AlphaInner, K), (Alpha, K)];

/// `(α, ᾱ̃)` and `(j, k)`; reported alongside the four to tell rows apart
/// that agree on them.
pub const AUXILIARY_RELATIONS: [(MetricKind, MetricKind); 2] = [(Alpha, AlphaInner), (JMin, K)];

/// Chains of the twelve rows: `true` marks `≪` between neighbours, `false`
/// marks `≈`. Metric order is given by the index into `[α, j, ᾱ̃, k]`.
const ROWS: [([usize; 4], [bool; 3]); 12] = [
    ([0, 1, 2, 3], [false, false, false]),
    ([0, 1, 2, 3], [true, false, false]),
    ([0, 1, 2, 3], [false, false, true]),
    ([0, 1, 2, 3], [true, false, true]),
    ([0, 1, 2, 3], [false, true, false]),
    ([0, 1, 2, 3], [true, true, false]),
    ([0, 1, 2, 3], [false, true, true]),
    ([0, 1, 2, 3], [true, true, true]),
    ([0, 2, 1, 3], [false, true, false]),
    ([0, 2, 1, 3], [true, true, false]),
    ([0, 2, 1, 3], [false, true, true]),
    ([0, 2, 1, 3], [true, true, true]),
];

/// Expected classes of [`FOUR_RELATIONS`] for rows 1 to 12.
pub fn row_pattern(row: u8) -> Option<[RelationClass; 4]> {
    let full = full_pattern(row)?;
    Some([full[0], full[1], full[2], full[3]])
}

/// Classes of [`FOUR_RELATIONS`] followed by [`AUXILIARY_RELATIONS`].
fn full_pattern(row: u8) -> Option<[RelationClass; 6]> {
    let (order, links) = ROWS.get((row as usize).checked_sub(1)?)?;
    let pos = |m: usize| order.iter().position(|&o| o == m).unwrap();
    let rel = |a: usize, b: usize| {
        let (pa, pb) = (pos(a), pos(b));
        let (lo, hi) = (pa.min(pb), pa.max(pb));
        if links[lo..hi].iter().any(|&l| l) {
            if pa < pb {
                MuchLess
            } else {
                MuchGreater
            }
        } else {
            Approx
        }
    };
    Some([rel(0, 1), rel(1, 2), rel(2, 3), rel(0, 3), rel(0, 2), rel(1, 3)])
}

/// Rows realized by planar domains in the catalog.
pub fn row_possible_in_plane(row: u8) -> bool {
    matches!(row, 1 | 5 | 6 | 9)
}

/// Named geometric properties checked on evidence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Property {
    QuasiIsotropic,
    John,
    Uniform,
    /// `j_PRODUCT ≤ 2α′` on every sampled pair.
    JProductBelowTwiceAlphaLambda,
    /// `j_MIN ≲ α′`.
    JBoundedByAlphaLambda,
}

impl Property {
    pub fn name(self) -> &'static str {
        match self {
            Property::QuasiIsotropic => "quasi_isotropic",
            Property::John => "john",
            Property::Uniform => "uniform",
            Property::JProductBelowTwiceAlphaLambda => "j_product_le_2_alpha_lambda",
            Property::JBoundedByAlphaLambda => "j_lesssim_alpha_lambda",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Expected {
    Row { row: u8 },
    /// `α ≪ j ≪ k`, `α ≪ ᾱ̃ ≪ k` and `j ≶ ᾱ̃`.
    Incomparable,
    Properties { properties: Vec<(Property, bool)> },
    NotConstructible { reason: String },
}

impl Expected {
    /// Expected classes of [`FOUR_RELATIONS`].
    pub fn pattern(&self) -> Option<[RelationClass; 4]> {
        match self {
            Expected::Row { row } => row_pattern(*row),
            Expected::Incomparable => Some([MuchLess, Incomparable, MuchLess, MuchLess]),
            _ => None,
        }
    }

    pub fn label(&self) -> String {
        match self {
            Expected::Row { row } => format!("row {row}"),
            Expected::Incomparable => "incomparable".into(),
            Expected::Properties { properties } => properties
                .iter()
                .map(|(p, v)| format!("{}{}", if *v { "" } else { "not " }, p.name()))
                .collect::<Vec<_>>()
                .join(", "),
            Expected::NotConstructible { .. } => "not constructible".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioExpectation {
    pub name: String,
    /// Absent for constructions that are not planar.
    pub domain: Option<DomainSpec>,
    pub expected: Expected,
    pub sampler: PairSampler,
    pub scales: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RelationRow {
    pub a: MetricKind,
    pub b: MetricKind,
    pub estimate: RelationEstimate,
    pub verdict: RelationVerdict,
    /// `None` for auxiliary relations, which do not count toward a match.
    pub expected: Option<RelationClass>,
    pub matches: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropertyRow {
    pub property: Property,
    pub evidence: Evidence,
    pub expected: bool,
    pub observed: bool,
    pub matches: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioReport {
    pub name: String,
    pub expected: String,
    pub relations: Vec<RelationRow>,
    pub properties: Vec<PropertyRow>,
    /// Rows whose pattern equals the observed verdicts.
    pub matched_rows: Vec<u8>,
    pub error: Option<String>,
    pub matches: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub scenarios: Vec<ScenarioReport>,
    pub all_match: bool,
}

fn p(x: f64, y: f64) -> Point {
    Point::new(x, y)
}

/// Disk, strip, lollipop, punctured disk and slit half-plane, plus the
/// non-planar row as a placeholder.
pub fn default_suite() -> Vec<ScenarioExpectation> {
    vec![
        ScenarioExpectation {
            name: "disk".into(),
            domain: Some(DomainSpec::unit_disk()),
            expected: Expected::Row { row: 1 },
            sampler: PairSampler::Generic { count: 50 },
            scales: vec![1.0, 0.1, 0.01, 0.001],
        },
        ScenarioExpectation {
            name: "strip".into(),
            domain: Some(DomainSpec::strip(1.0)),
            expected: Expected::Row { row: 5 },
            sampler: PairSampler::StripAxis { count: 50, jitter: 0.05 },
            scales: vec![1.0, 5.0, 25.0],
        },
        ScenarioExpectation {
            name: "lollipop".into(),
            domain: Some(DomainSpec::lollipop()),
            expected: Expected::Row { row: 6 },
            sampler: PairSampler::Across { from: p(1.5, 0.0), to: p(3.0, 0.0), t0: 0.0, t1: 1.0, count: 50 },
            scales: vec![0.5, 1e-3, 1e-8],
        },
        ScenarioExpectation {
            name: "punctured_disk".into(),
            domain: Some(DomainSpec::punctured_disk(Point::ORIGIN)),
            expected: Expected::Row { row: 9 },
            sampler: PairSampler::Puncture { center: Point::ORIGIN, count: 50 },
            scales: vec![0.1, 0.05, 0.01],
        },
        ScenarioExpectation {
            name: "slit_half_plane".into(),
            domain: Some(DomainSpec::slit_half_plane()),
            expected: Expected::Incomparable,
            sampler: slit_pairs(),
            scales: vec![0.1, 1e-3, 1e-6],
        },
        ScenarioExpectation {
            name: "row_10".into(),
            domain: None,
            expected: Expected::NotConstructible {
                reason: "the known construction lives in three dimensions".into(),
            },
            sampler: PairSampler::Fixed { pairs: vec![] },
            scales: vec![],
        },
    ]
}

fn slit_pairs() -> PairSampler {
    PairSampler::Mixed {
        parts: vec![
            PairSampler::Across { from: p(0.0, 0.0), to: p(0.0, 1.0), t0: 0.3, t1: 0.7, count: 25 },
            PairSampler::Tip { tip: p(0.0, 1.0), dir: p(0.0, 1.0), rel: 1e-4, count: 25 },
        ],
    }
}

/// Uniform, John and quasi-isotropic verdicts of the classical examples.
pub fn classical_suite() -> Vec<ScenarioExpectation> {
    let r = 2.0 * (std::f64::consts::PI / 36.0).tan() / (1.0 + 2.0 * (std::f64::consts::PI / 36.0).tan());
    let h = 1.0 - r / 2.0;
    let channel: Vec<(Point, Point)> = (0..20)
        .map(|i| {
            let x = 0.4 + 1.2 * i as f64 / 19.0;
            (p(x, h), p(x, -h))
        })
        .collect();
    vec![
        ScenarioExpectation {
            name: "half_strip".into(),
            domain: Some(DomainSpec::half_strip()),
            expected: Expected::Properties {
                properties: vec![
                    (Property::QuasiIsotropic, true),
                    (Property::John, false),
                    (Property::Uniform, false),
                    (Property::JProductBelowTwiceAlphaLambda, true),
                ],
            },
            sampler: PairSampler::Deep { start: p(0.5, 0.0), dir: p(1.0, 0.0), jitter: 0.2, count: 20 },
            scales: vec![2.0, 8.0, 32.0],
        },
        ScenarioExpectation {
            name: "half_strip_minus_rectangle".into(),
            domain: Some(DomainSpec::half_strip_minus_rectangle(r)),
            expected: Expected::Properties { properties: vec![(Property::JBoundedByAlphaLambda, true)] },
            sampler: PairSampler::Mixed {
                parts: vec![
                    PairSampler::Deep { start: p(2.5, 0.0), dir: p(1.0, 0.0), jitter: 0.2, count: 30 },
                    PairSampler::Fixed { pairs: channel },
                ],
            },
            scales: vec![2.0, 8.0, 32.0],
        },
        ScenarioExpectation {
            name: "half_strip_minus_rectangle_deep".into(),
            domain: Some(DomainSpec::half_strip_minus_rectangle(r)),
            expected: Expected::Properties { properties: vec![(Property::Uniform, false)] },
            sampler: PairSampler::Deep { start: p(2.5, 0.0), dir: p(1.0, 0.0), jitter: 0.2, count: 20 },
            scales: vec![2.0, 8.0, 32.0],
        },
        ScenarioExpectation {
            name: "square_minus_disk".into(),
            domain: Some(DomainSpec::square_minus_disk()),
            expected: Expected::Properties { properties: vec![(Property::QuasiIsotropic, true), (Property::John, false)] },
            sampler: PairSampler::Cusp { vertex: p(-1.0, 0.0), partner: p(-0.8, -0.8), count: 16 },
            scales: vec![0.2, 0.05, 0.0125],
        },
        ScenarioExpectation {
            name: "slit_half_plane_john".into(),
            domain: Some(DomainSpec::slit_half_plane()),
            expected: Expected::Properties { properties: vec![(Property::QuasiIsotropic, false), (Property::John, true)] },
            sampler: slit_pairs(),
            scales: vec![0.1, 1e-3, 1e-6],
        },
        ScenarioExpectation {
            name: "punctured_disk_john".into(),
            domain: Some(DomainSpec::punctured_disk(Point::ORIGIN)),
            expected: Expected::Properties { properties: vec![(Property::QuasiIsotropic, false), (Property::John, true)] },
            sampler: PairSampler::Puncture { center: Point::ORIGIN, count: 50 },
            scales: vec![0.1, 0.01, 0.001],
        },
        ScenarioExpectation {
            name: "disk_exterior".into(),
            domain: Some(DomainSpec::disk_exterior(Point::ORIGIN, 1.0)),
            expected: Expected::Properties { properties: vec![(Property::Uniform, true)] },
            sampler: PairSampler::Generic { count: 50 },
            scales: vec![1.0, 0.1, 0.01],
        },
    ]
}

/// `default`, `classical` or `all`.
pub fn suite_by_name(name: &str) -> Result<Vec<ScenarioExpectation>> {
    match name {
        "default" => Ok(default_suite()),
        "classical" => Ok(classical_suite()),
        "all" => Ok(default_suite().into_iter().chain(classical_suite()).collect()),
        _ => Err(Error::BadParameters(format!("unknown suite '{name}'"))),
    }
}

/// Tolerance for `j_PRODUCT ≤ 2α′`, relative to `α′`; covers the
/// boundary-sampling deficit of `α′`.
const LAMBDA_TOL: f64 = 2e-3;

fn property_row(
    domain: &DomainSpec,
    ev: &mut Evaluator,
    sets: &[PairSet],
    prop: Property,
    expected: bool,
) -> Result<PropertyRow> {
    let cfg = ev.config.clone();
    let th = &cfg.thresholds;
    let (evidence, observed) = match prop {
        Property::QuasiIsotropic => {
            let e = quasi_isotropy_evidence(domain, sets, 64, th)?;
            let ok = e.bounded() && e.value <= th.c;
            (e, ok)
        }
        Property::John => {
            let e = john_constant(domain, sets, &cfg.geodesic, th)?;
            let ok = e.bounded();
            (e, ok)
        }
        Property::Uniform => {
            let e = uniformity_constant(domain, sets, &cfg.geodesic, th)?;
            let ok = e.bounded();
            (e, ok)
        }
        Property::JProductBelowTwiceAlphaLambda => {
            let mut growth = Vec::new();
            let mut ok = true;
            for s in sets {
                let mut m: f64 = 0.0;
                for &(x, y) in &s.pairs {
                    let jp = ev.eval(MetricKind::JProduct, x, y)?;
                    let al = ev.eval(MetricKind::AlphaLambda, x, y)?;
                    ok &= jp <= 2.0 * al * (1.0 + LAMBDA_TOL);
                    m = m.max(jp / al);
                }
                growth.push((s.scale, m));
            }
            let value = growth.iter().map(|g| g.1).fold(0.0, f64::max);
            (Evidence { value, growth, diverging: false }, ok)
        }
        Property::JBoundedByAlphaLambda => {
            let est = estimate_on(ev, JMin, MetricKind::AlphaLambda, sets)?;
            let v = classify(&est, th);
            let growth: Vec<(f64, f64)> = est.refinement_history.iter().map(|h| (h.0, h.1)).collect();
            let diverging = super::diverges(&growth.iter().map(|g| g.1).collect::<Vec<_>>(), true, th.factor);
            let ok = matches!(v.class, Approx | MuchLess | RelationClass::LessOnly);
            (Evidence { value: est.sup_ratio, growth, diverging }, ok)
        }
    };
    Ok(PropertyRow { property: prop, evidence, expected, observed, matches: observed == expected })
}

fn run_one(sc: &ScenarioExpectation, config: &EvalConfig) -> Result<ScenarioReport> {
    let mut rep = ScenarioReport {
        name: sc.name.clone(),
        expected: sc.expected.label(),
        relations: vec![],
        properties: vec![],
        matched_rows: vec![],
        error: None,
        matches: true,
    };
    if let Expected::NotConstructible { .. } = sc.expected {
        return Ok(rep);
    }
    let domain = sc.domain.as_ref().ok_or_else(|| Error::InvalidDomain(format!("scenario '{}' has no domain", sc.name)))?;
    let sets = sample_pairs(domain, &sc.sampler, &sc.scales, config.seed)?;
    let mut ev = Evaluator::new(domain, config)?;
    if let Some(pattern) = sc.expected.pattern() {
        let mut observed = [RelationClass::Undecided; 6];
        let all = FOUR_RELATIONS.iter().chain(AUXILIARY_RELATIONS.iter());
        for (i, &(a, b)) in all.enumerate() {
            let estimate = estimate_on(&mut ev, a, b, &sets)?;
            let verdict = classify(&estimate, &config.thresholds);
            observed[i] = verdict.class;
            let expected = pattern.get(i).copied();
            let matches = expected.is_none_or(|e| e == verdict.class);
            rep.matches &= matches;
            rep.relations.push(RelationRow { a, b, estimate, verdict, expected, matches });
        }
        rep.matched_rows = (1..=12).filter(|&r| full_pattern(r) == Some(observed)).collect();
    }
    if let Expected::Properties { properties } = &sc.expected {
        for &(prop, expected) in properties {
            let row = property_row(domain, &mut ev, &sets, prop, expected)?;
            rep.matches &= row.matches;
            rep.properties.push(row);
        }
    }
    Ok(rep)
}

/// Runs one scenario; errors are recorded in the report.
pub fn run_scenario(sc: &ScenarioExpectation, config: &EvalConfig) -> ScenarioReport {
    run_one(sc, config).unwrap_or_else(|e| ScenarioReport {
        name: sc.name.clone(),
        expected: sc.expected.label(),
        relations: vec![],
        properties: vec![],
        matched_rows: vec![],
        error: Some(e.to_string()),
        matches: false,
    })
}

/// Runs the suite on up to `threads` worker threads. Reports keep suite
/// order and do not depend on the thread count.
pub fn run_scenarios(suite: &[ScenarioExpectation], config: &EvalConfig, threads: usize) -> SuiteReport {
    let threads = threads.clamp(1, suite.len().max(1));
    let mut slots: Vec<Option<ScenarioReport>> = vec![None; suite.len()];
    if threads == 1 {
        for (s, sc) in slots.iter_mut().zip(suite) {
            *s = Some(run_scenario(sc, config));
        }
    } else {
        let next = std::sync::atomic::AtomicUsize::new(0);
        let done = std::sync::Mutex::new(&mut slots);
        std::thread::scope(|scope| {
            for _ in 0..threads {
                scope.spawn(|| loop {
                    let i = next.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
                    if i >= suite.len() {
                        break;
                    }
                    let r = run_scenario(&suite[i], config);
                    done.lock().unwrap()[i] = Some(r);
                });
            }
        });
    }
    let scenarios: Vec<ScenarioReport> = slots.into_iter().map(|s| s.expect("every scenario ran")).collect();
    let all_match = scenarios.iter().all(|s| s.matches);
    SuiteReport { scenarios, all_match }
}

impl SuiteReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// One row per scenario and relation or property.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["scenario", "item", "a", "b", "sup", "inf", "pairs", "verdict", "expected", "match"]).unwrap();
        for s in &self.scenarios {
            if let Some(e) = &s.error {
                w.write_record([s.name.as_str(), "error", "", "", "", "", "", e.as_str(), s.expected.as_str(), "false"]).unwrap();
            }
            for r in &s.relations {
                w.write_record([
                    s.name.clone(),
                    "relation".into(),
                    r.a.name().into(),
                    r.b.name().into(),
                    fmt17(r.estimate.sup_ratio),
                    fmt17(r.estimate.inf_ratio),
                    r.estimate.sample_pairs.to_string(),
                    r.verdict.class.label().into(),
                    r.expected.map(|c| c.label()).unwrap_or("").into(),
                    r.matches.to_string(),
                ])
                .unwrap();
            }
            for p in &s.properties {
                w.write_record([
                    s.name.clone(),
                    "property".into(),
                    p.property.name().into(),
                    String::new(),
                    fmt17(p.evidence.value),
                    String::new(),
                    String::new(),
                    p.observed.to_string(),
                    p.expected.to_string(),
                    p.matches.to_string(),
                ])
                .unwrap();
            }
            if s.relations.is_empty() && s.properties.is_empty() && s.error.is_none() {
                w.write_record([s.name.as_str(), "excluded", "", "", "", "", "", "", s.expected.as_str(), "true"]).unwrap();
            }
        }
        String::from_utf8(w.into_inner().unwrap()).unwrap()
    }
}
