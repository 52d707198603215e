use super::{diverges, EvalConfig, Evaluator, MetricKind, PairSampler, PairSet, Thresholds};
use crate::error::{Error, Result};
use crate::geometry::{Boundary, DomainSpec, Point};
use crate::metrics::{quasihyperbolic_distance, GeodesicOptions};
use crate::numeric::grid_golden_max;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// A constant observed over a scale sweep. `growth` holds `(scale, max)`
/// per scale; `diverging` flags strict growth by the divergence rule.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Evidence {
    pub value: f64,
    pub growth: Vec<(f64, f64)>,
    pub diverging: bool,
}

impl Evidence {
    fn from_growth(growth: Vec<(f64, f64)>, thresholds: &Thresholds) -> Self {
        let seq: Vec<f64> = growth.iter().map(|g| g.1).collect();
        let value = seq.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Evidence { value, diverging: diverges(&seq, true, thresholds.factor), growth }
    }

    pub fn bounded(&self) -> bool {
        !self.diverging && self.value.is_finite()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QiEstimate {
    /// `[observed, 2·observed]`.
    pub interval: (f64, f64),
    /// Largest ratio of the extreme directed densities over the points.
    pub observed: f64,
    pub argmax: Point,
}

/// Ratio `sup_θ ᾱ(x;θ) / inf_θ ᾱ(x;θ)` at one point.
fn direction_ratio(bd: &Boundary, x: Point, directions: usize) -> f64 {
    let f = |phi: f64| bd.directed_density(x, Point::polar(phi));
    // the density is even in θ, so half a turn suffices
    let hi = grid_golden_max(f, 0.0, PI, directions, 1e-10).1;
    let lo = -grid_golden_max(|phi| -f(phi), 0.0, PI, directions, 1e-10).1;
    if lo <= 0.0 {
        f64::INFINITY
    } else {
        hi / lo
    }
}

/// Quasi-isotropy bracket from the directed density at the given points.
/// The upper end doubles the observed ratio.
pub fn quasi_isotropy_constant(domain: &DomainSpec, points: &[Point], directions: usize) -> Result<QiEstimate> {
    if directions < 16 {
        return Err(Error::BadParameters(format!("{directions} directions, at least 16 required")));
    }
    if points.is_empty() {
        return Err(Error::EmptyInput);
    }
    let bd = Boundary::new(domain);
    if bd.infinity_interior {
        return Err(Error::UnsupportedInfinityInDomain);
    }
    let mut observed: f64 = 0.0;
    let mut argmax = points[0];
    for &x in points {
        if !bd.contains(x) {
            return Err(Error::PointOutsideDomain(x.x, x.y));
        }
        let r = direction_ratio(&bd, x, directions);
        if r > observed {
            observed = r;
            argmax = x;
        }
    }
    Ok(QiEstimate { interval: (observed, 2.0 * observed), observed, argmax })
}

/// Quasi-isotropy ratios at the pair endpoints of each scale.
pub fn quasi_isotropy_evidence(domain: &DomainSpec, sets: &[PairSet], directions: usize, thresholds: &Thresholds) -> Result<Evidence> {
    let mut growth = Vec::with_capacity(sets.len());
    for s in sets {
        let pts: Vec<Point> = s.pairs.iter().flat_map(|&(x, y)| [x, y]).collect();
        growth.push((s.scale, quasi_isotropy_constant(domain, &pts, directions)?.observed));
    }
    Ok(Evidence::from_growth(growth, thresholds))
}

/// Cigar ratio `ℓ/|x − y|` and carrot ratio `max min(t, ℓ − t)/δ` of the
/// quasihyperbolic geodesic, sampled at its vertices and eight points per edge.
fn path_ratios(domain: &DomainSpec, bd: &Boundary, x: Point, y: Point, opts: &GeodesicOptions) -> Result<(f64, f64)> {
    let (_, path) = quasihyperbolic_distance(domain, x, y, opts)?;
    let v = &path.vertices;
    let len = path.length;
    let mut carrot: f64 = 0.0;
    let mut t = 0.0;
    for w in v.windows(2) {
        let e = w[0].dist(w[1]);
        for k in 0..8 {
            let s = k as f64 / 8.0;
            let z = w[0].lerp(w[1], s);
            let arc = t + s * e;
            carrot = carrot.max(arc.min(len - arc) / bd.delta(z));
        }
        t += e;
    }
    Ok((len / x.dist(y), carrot))
}

fn path_evidence(
    domain: &DomainSpec,
    sets: &[PairSet],
    opts: &GeodesicOptions,
    thresholds: &Thresholds,
    with_cigar: bool,
) -> Result<Evidence> {
    let bd = Boundary::new(domain);
    let mut growth = Vec::with_capacity(sets.len());
    for s in sets {
        let mut m: f64 = 0.0;
        for &(x, y) in &s.pairs {
            if x == y {
                continue;
            }
            let (cigar, carrot) = path_ratios(domain, &bd, x, y, opts)?;
            m = m.max(carrot);
            if with_cigar {
                m = m.max(cigar);
            }
        }
        growth.push((s.scale, m));
    }
    Ok(Evidence::from_growth(growth, thresholds))
}

/// Uniformity constant evidence: per pair the larger of the cigar and carrot
/// ratios of the quasihyperbolic geodesic.
pub fn uniformity_constant(domain: &DomainSpec, sets: &[PairSet], opts: &GeodesicOptions, thresholds: &Thresholds) -> Result<Evidence> {
    path_evidence(domain, sets, opts, thresholds, true)
}

/// John constant evidence: the carrot ratio alone.
pub fn john_constant(domain: &DomainSpec, sets: &[PairSet], opts: &GeodesicOptions, thresholds: &Thresholds) -> Result<Evidence> {
    path_evidence(domain, sets, opts, thresholds, false)
}

/// Comparison-property evidence: `sup j/α` per scale.
pub fn comparison_constant(ev: &mut Evaluator, sets: &[PairSet]) -> Result<Evidence> {
    let mut growth = Vec::with_capacity(sets.len());
    for s in sets {
        let mut m: f64 = 0.0;
        for &(x, y) in &s.pairs {
            let a = ev.eval(MetricKind::Alpha, x, y)?;
            let j = ev.eval(MetricKind::JMin, x, y)?;
            m = m.max(if a > super::DENOMINATOR_FLOOR { j / a } else { f64::INFINITY });
        }
        growth.push((s.scale, m));
    }
    let thresholds = ev.config.thresholds;
    Ok(Evidence::from_growth(growth, &thresholds))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeometricConstants {
    pub qi_interval: (f64, f64),
    pub qi: Evidence,
    pub uniformity_k: Evidence,
    pub john_b: Evidence,
    pub comparison_c: Evidence,
}

/// All four constants on one pair sweep; quasi-isotropy uses the pair
/// endpoints with 64 directions.
pub fn geometric_constants(domain: &DomainSpec, sampler: &PairSampler, scales: &[f64], config: &EvalConfig) -> Result<GeometricConstants> {
    let sets = super::sample_pairs(domain, sampler, scales, config.seed)?;
    let th = &config.thresholds;
    let qi = quasi_isotropy_evidence(domain, &sets, 64, th)?;
    let uniformity_k = uniformity_constant(domain, &sets, &config.geodesic, th)?;
    let john_b = john_constant(domain, &sets, &config.geodesic, th)?;
    let mut ev = Evaluator::new(domain, config)?;
    let comparison_c = comparison_constant(&mut ev, &sets)?;
    Ok(GeometricConstants { qi_interval: (qi.value, 2.0 * qi.value), qi, uniformity_k, john_b, comparison_c })
}
