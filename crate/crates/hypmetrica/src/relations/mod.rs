//! Empirical comparison of metric pairs, geometric constants of domains and
//! the scenario suite of canonical domain constructions.
//!
//! Every verdict here is evidence at finite scale, never a proof.

mod constants;
mod sampler;
mod scenarios;

pub use constants::{
    comparison_constant, geometric_constants, john_constant, quasi_isotropy_constant, quasi_isotropy_evidence,
    uniformity_constant, Evidence, GeometricConstants, QiEstimate,
};
pub use sampler::{sample_pairs, PairSampler, PairSet};
pub use scenarios::{
    classical_suite, default_suite, row_pattern, row_possible_in_plane, run_scenario, run_scenarios, suite_by_name, Expected,
    Property, PropertyRow, RelationRow, ScenarioExpectation, ScenarioReport, SuiteReport, AUXILIARY_RELATIONS, FOUR_RELATIONS,
};

use crate::error::{Error, Result};
use crate::geometry::{DomainSpec, Point};
use crate::metrics::{
    apollonian_distance, apollonian_inner_distance, j_distance, lambda_apollonian_distance, quasihyperbolic_distance,
    seittenranta_distance, GeodesicOptions, JVariant,
};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;

/// Minimum number of pairs per scale.
pub const MIN_PAIRS: usize = 50;

/// Ratios with a denominator at or below this are skipped.
pub const DENOMINATOR_FLOOR: f64 = 1e-12;

/// The distances that can be compared.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MetricKind {
    /// Apollonian `α`.
    Alpha,
    JMin,
    JProduct,
    /// Quasihyperbolic `k`.
    K,
    /// Inner Apollonian `ᾱ̃`.
    AlphaInner,
    /// λ-Apollonian `α′`.
    AlphaLambda,
    Seittenranta,
}

impl MetricKind {
    pub const ALL: [MetricKind; 7] = [
        MetricKind::Alpha,
        MetricKind::JMin,
        MetricKind::JProduct,
        MetricKind::K,
        MetricKind::AlphaInner,
        MetricKind::AlphaLambda,
        MetricKind::Seittenranta,
    ];

    pub fn name(self) -> &'static str {
        match self {
            MetricKind::Alpha => "alpha",
            MetricKind::JMin => "j_min",
            MetricKind::JProduct => "j_product",
            MetricKind::K => "k",
            MetricKind::AlphaInner => "alpha_inner",
            MetricKind::AlphaLambda => "alpha_lambda",
            MetricKind::Seittenranta => "seittenranta",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        let t = s.to_ascii_lowercase().replace('-', "_");
        let k = match t.as_str() {
            "alpha" | "a" | "apollonian" => MetricKind::Alpha,
            "j" | "j_min" | "jmin" => MetricKind::JMin,
            "j_product" | "jproduct" | "j_prod" => MetricKind::JProduct,
            "k" | "qh" | "quasihyperbolic" => MetricKind::K,
            "alpha_inner" | "inner" | "alpha_tilde" => MetricKind::AlphaInner,
            "alpha_lambda" | "alpha_prime" | "lambda" => MetricKind::AlphaLambda,
            "seittenranta" | "delta" => MetricKind::Seittenranta,
            _ => return Err(Error::BadParameters(format!("unknown metric '{s}'"))),
        };
        Ok(k)
    }
}

/// Resolution and randomness shared by all estimators.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalConfig {
    /// Boundary samples for the sampled metrics.
    pub samples: usize,
    pub geodesic: GeodesicOptions,
    pub seed: u64,
    pub thresholds: Thresholds,
}

impl Default for EvalConfig {
    fn default() -> Self {
        EvalConfig { samples: 2000, geodesic: GeodesicOptions::bulk(), seed: 42, thresholds: Thresholds::default() }
    }
}

/// Metric evaluation with a per-pair cache.
#[derive(Debug, Clone)]
pub struct Evaluator {
    pub domain: DomainSpec,
    pub config: EvalConfig,
    cache: HashMap<(MetricKind, [u64; 4]), f64>,
}

impl Evaluator {
    pub fn new(domain: &DomainSpec, config: &EvalConfig) -> Result<Self> {
        domain.validate()?;
        Ok(Evaluator { domain: domain.clone(), config: config.clone(), cache: HashMap::new() })
    }

    pub fn eval(&mut self, kind: MetricKind, x: Point, y: Point) -> Result<f64> {
        let key = (kind, [x.x.to_bits(), x.y.to_bits(), y.x.to_bits(), y.y.to_bits()]);
        if let Some(&v) = self.cache.get(&key) {
            return Ok(v);
        }
        let v = self.compute(kind, x, y)?;
        self.cache.insert(key, v);
        Ok(v)
    }

    fn compute(&self, kind: MetricKind, x: Point, y: Point) -> Result<f64> {
        let d = &self.domain;
        let m = self.config.samples;
        let g = &self.config.geodesic;
        let unavailable = |e: Error| match e {
            Error::UnsupportedInfinityInDomain | Error::UnsupportedMoebiusDisk => {
                Error::MetricUnavailable(format!("{}: {e}", kind.name()))
            }
            e => e,
        };
        let v = match kind {
            MetricKind::Alpha => apollonian_distance(d, x, y, m)?.0.value,
            MetricKind::JMin => j_distance(d, x, y, JVariant::Min)?.value,
            MetricKind::JProduct => j_distance(d, x, y, JVariant::Product)?.value,
            MetricKind::K => quasihyperbolic_distance(d, x, y, g).map_err(unavailable)?.0.value,
            MetricKind::AlphaInner => apollonian_inner_distance(d, x, y, g).map_err(unavailable)?.0.value,
            MetricKind::AlphaLambda => lambda_apollonian_distance(d, x, y, m).map_err(unavailable)?.value,
            MetricKind::Seittenranta => seittenranta_distance(d, x, y, m).map_err(unavailable)?.value,
        };
        Ok(v)
    }
}

/// Ratios `a/b` over sampled pairs, overall and per scale.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RelationEstimate {
    pub sup_ratio: f64,
    pub inf_ratio: f64,
    pub argmax_pair: (Point, Point),
    pub argmin_pair: (Point, Point),
    pub sample_pairs: usize,
    /// `(scale, sup_ratio, inf_ratio)` per scale in sweep order.
    pub refinement_history: Vec<(f64, f64, f64)>,
}

/// Ratio estimate of `a/b` on pairs drawn by `sampler` at each scale.
pub fn estimate_relation(
    domain: &DomainSpec,
    a: MetricKind,
    b: MetricKind,
    sampler: &PairSampler,
    scales: &[f64],
    config: &EvalConfig,
) -> Result<RelationEstimate> {
    let sets = sample_pairs(domain, sampler, scales, config.seed)?;
    let mut ev = Evaluator::new(domain, config)?;
    estimate_on(&mut ev, a, b, &sets)
}

/// Ratio estimate on fixed pair sets, reusing cached metric values.
pub fn estimate_on(ev: &mut Evaluator, a: MetricKind, b: MetricKind, sets: &[PairSet]) -> Result<RelationEstimate> {
    if sets.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut est = RelationEstimate {
        sup_ratio: f64::NEG_INFINITY,
        inf_ratio: f64::INFINITY,
        argmax_pair: (Point::ORIGIN, Point::ORIGIN),
        argmin_pair: (Point::ORIGIN, Point::ORIGIN),
        sample_pairs: 0,
        refinement_history: Vec::with_capacity(sets.len()),
    };
    for set in sets {
        if set.pairs.len() < MIN_PAIRS {
            return Err(Error::BadParameters(format!(
                "{} pairs at scale {}, at least {MIN_PAIRS} required",
                set.pairs.len(),
                set.scale
            )));
        }
        let mut hi = f64::NEG_INFINITY;
        let mut lo = f64::INFINITY;
        for &(x, y) in &set.pairs {
            let vb = ev.eval(b, x, y)?;
            if vb <= DENOMINATOR_FLOOR {
                continue;
            }
            let va = ev.eval(a, x, y)?;
            let r = if a == b { 1.0 } else { va / vb };
            est.sample_pairs += 1;
            hi = hi.max(r);
            lo = lo.min(r);
            if r > est.sup_ratio {
                est.sup_ratio = r;
                est.argmax_pair = (x, y);
            }
            if r < est.inf_ratio {
                est.inf_ratio = r;
                est.argmin_pair = (x, y);
            }
        }
        if !hi.is_finite() {
            return Err(Error::BadParameters(format!("no pair at scale {} has a usable denominator", set.scale)));
        }
        est.refinement_history.push((set.scale, hi, lo));
    }
    Ok(est)
}

/// Verdict classes for a ratio estimate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum RelationClass {
    Approx,
    MuchLess,
    MuchGreater,
    Incomparable,
    LessOnly,
    GreaterOnly,
    Undecided,
}

impl RelationClass {
    pub fn label(self) -> &'static str {
        match self {
            RelationClass::Approx => "APPROX",
            RelationClass::MuchLess => "MUCH_LESS",
            RelationClass::MuchGreater => "MUCH_GREATER",
            RelationClass::Incomparable => "INCOMPARABLE",
            RelationClass::LessOnly => "LESS_ONLY",
            RelationClass::GreaterOnly => "GREATER_ONLY",
            RelationClass::Undecided => "UNDECIDED",
        }
    }

    /// The class of `b/a` given the class of `a/b`.
    pub fn flipped(self) -> Self {
        match self {
            RelationClass::MuchLess => RelationClass::MuchGreater,
            RelationClass::MuchGreater => RelationClass::MuchLess,
            RelationClass::LessOnly => RelationClass::GreaterOnly,
            RelationClass::GreaterOnly => RelationClass::LessOnly,
            c => c,
        }
    }
}

impl std::fmt::Display for RelationClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

/// Classification thresholds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Thresholds {
    /// Ratios in `[1/c, c]` count as bounded.
    pub c: f64,
    /// Required geometric-mean change per scale step for divergence.
    pub factor: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Thresholds { c: 20.0, factor: 2.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RelationVerdict {
    pub class: RelationClass,
    pub confidence_note: String,
}

/// Whether `seq` moves strictly in one direction with geometric-mean step
/// factor at least `factor`; `up` selects increasing.
pub fn diverges(seq: &[f64], up: bool, factor: f64) -> bool {
    if seq.len() < 2 || seq.iter().any(|v| v.is_nan()) {
        return false;
    }
    let strict = seq.windows(2).all(|w| if up { w[1] > w[0] } else { w[1] < w[0] });
    let n = seq.len();
    // a zero or infinite endpoint makes the total factor infinite
    let total = if up { seq[n - 1] / seq[0] } else { seq[0] / seq[n - 1] };
    strict && total.powf(1.0 / (n - 1) as f64) >= factor
}

/// Classifies a ratio estimate `a/b`.
///
/// With `k` scale steps, `MUCH_LESS` needs the per-scale infima to fall by a
/// geometric-mean factor of at least `factor` per step while the suprema stay
/// in `[.., c]` without diverging; `MUCH_GREATER` mirrors this and also
/// needs the overall infimum above the first-scale supremum over
/// `factor^k`, so that adding pairs never turns `MUCH_LESS` into it.
pub fn classify(estimate: &RelationEstimate, thresholds: &Thresholds) -> RelationVerdict {
    let h = &estimate.refinement_history;
    if h.len() < 3 {
        return RelationVerdict {
            class: RelationClass::Undecided,
            confidence_note: format!("{} scales, at least 3 required", h.len()),
        };
    }
    let sups: Vec<f64> = h.iter().map(|t| t.1).collect();
    let infs: Vec<f64> = h.iter().map(|t| t.2).collect();
    let c = thresholds.c;
    let f = thresholds.factor;
    let steps = (h.len() - 1) as i32;
    let sup_div = diverges(&sups, true, f);
    let inf_div = diverges(&infs, false, f);
    let sup_bounded = !sup_div && estimate.sup_ratio <= c;
    let inf_bounded = !inf_div && estimate.inf_ratio >= 1.0 / c;
    let guard = estimate.inf_ratio > sups[0] / f.powi(steps);
    let class = if sup_div && inf_div {
        RelationClass::Incomparable
    } else if sup_bounded && inf_bounded {
        RelationClass::Approx
    } else if sup_bounded && inf_div {
        RelationClass::MuchLess
    } else if inf_bounded && sup_div && guard {
        RelationClass::MuchGreater
    } else if sup_bounded && !inf_div {
        RelationClass::LessOnly
    } else if inf_bounded && !sup_div {
        RelationClass::GreaterOnly
    } else {
        RelationClass::Undecided
    };
    let confidence_note = format!(
        "evidence over {} scales ({} pairs): sup {:.4e} -> {:.4e}, inf {:.4e} -> {:.4e}; c = {c}, factor = {f}",
        h.len(),
        estimate.sample_pairs,
        sups[0],
        sups[sups.len() - 1],
        infs[0],
        infs[infs.len() - 1],
    );
    RelationVerdict { class, confidence_note }
}
