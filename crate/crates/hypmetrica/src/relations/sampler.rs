use crate::error::{Error, Result};
use crate::geometry::{DomainSpec, Point};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Pairs drawn at one scale.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairSet {
    pub scale: f64,
    pub pairs: Vec<(Point, Point)>,
}

/// Seeded pair families. `scale` is the sweep parameter of each family.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum PairSampler {
    /// Half near pairs at separation `scale·L`, half boundary-hugging pairs
    /// at `δ = scale·L` joined along the boundary, `L` the domain scale.
    Generic { count: usize },
    /// Pairs near `(−R, 0)` and `(R, 0)` with `R = scale`, each coordinate
    /// jittered by at most `jitter`.
    StripAxis { count: usize, jitter: f64 },
    /// Antipodal pairs `c ± ε e^{iφ}` with `ε = scale` and uniform `φ`.
    Puncture { center: Point, count: usize },
    /// Pairs `z ± ε n` across the segment, `n` its unit normal, `ε = scale`
    /// and `z = from + t (to − from)` with `t` uniform on `[t0, t1]`.
    Across { from: Point, to: Point, t0: f64, t1: f64, count: usize },
    /// Short pairs of length `2·rel·t` centered near `tip + t·dir` and
    /// perpendicular to `dir`, with `t = scale`.
    Tip { tip: Point, dir: Point, rel: f64, count: usize },
    /// Pairs `(a, a + scale·dir)` with `a` within `jitter` of `start`.
    Deep { start: Point, dir: Point, jitter: f64, count: usize },
    /// Points at distance about `scale` from `vertex` where `δ` is largest
    /// on that circle, each paired with `partner`.
    Cusp { vertex: Point, partner: Point, count: usize },
    /// The same pairs at every scale.
    Fixed { pairs: Vec<(Point, Point)> },
    /// Union of families at the same scale.
    Mixed { parts: Vec<PairSampler> },
}

const MAX_TRIES: usize = 2000;

fn too_few(what: &str, scale: f64) -> Error {
    Error::BadParameters(format!("{what} sampler could not place pairs at scale {scale}"))
}

impl PairSampler {
    pub fn count(&self) -> usize {
        match self {
            PairSampler::Generic { count }
            | PairSampler::StripAxis { count, .. }
            | PairSampler::Puncture { count, .. }
            | PairSampler::Across { count, .. }
            | PairSampler::Tip { count, .. }
            | PairSampler::Deep { count, .. }
            | PairSampler::Cusp { count, .. } => *count,
            PairSampler::Fixed { pairs } => pairs.len(),
            PairSampler::Mixed { parts } => parts.iter().map(|p| p.count()).sum(),
        }
    }

    /// Pairs at one scale; both points of every pair lie in the domain.
    pub fn pairs(&self, domain: &DomainSpec, scale: f64, rng: &mut ChaCha8Rng) -> Result<Vec<(Point, Point)>> {
        if !(scale.is_finite() && scale > 0.0) {
            return Err(Error::BadParameters(format!("scale {scale} must be positive")));
        }
        let inside = |p: Point| domain.contains(p);
        let mut out = Vec::with_capacity(self.count());
        match self {
            PairSampler::Generic { count } => generic(domain, scale, *count, rng, &mut out)?,
            PairSampler::StripAxis { count, jitter } => {
                for _ in 0..*count {
                    let mut j = || rng.gen_range(-1.0..=1.0) * jitter;
                    let x = Point::new(-scale + j(), j());
                    let y = Point::new(scale + j(), j());
                    if !(inside(x) && inside(y)) {
                        return Err(too_few("strip", scale));
                    }
                    out.push((x, y));
                }
            }
            PairSampler::Puncture { center, count } => {
                for _ in 0..*count {
                    let u = Point::polar(rng.gen_range(0.0..2.0 * PI)) * scale;
                    let (x, y) = (*center + u, *center - u);
                    if !(inside(x) && inside(y)) {
                        return Err(too_few("puncture", scale));
                    }
                    out.push((x, y));
                }
            }
            PairSampler::Across { from, to, t0, t1, count } => {
                let n = (*to - *from).perp().unit();
                for _ in 0..*count {
                    let z = from.lerp(*to, rng.gen_range(*t0..=*t1));
                    let (x, y) = (z + n * scale, z - n * scale);
                    if !(inside(x) && inside(y)) {
                        return Err(too_few("across", scale));
                    }
                    out.push((x, y));
                }
            }
            PairSampler::Tip { tip, dir, rel, count } => {
                let d = dir.unit();
                for _ in 0..*count {
                    let s = rel * scale;
                    // transverse direction tilted by at most 0.01·t radians
                    let e = Point::polar(d.perp().angle() + rng.gen_range(-1.0..=1.0) * 0.01 * scale);
                    let c = *tip + d * scale + d.perp() * (rng.gen_range(-0.5..=0.5) * s);
                    let (x, y) = (c - e * s, c + e * s);
                    if !(inside(x) && inside(y)) {
                        return Err(too_few("tip", scale));
                    }
                    out.push((x, y));
                }
            }
            PairSampler::Deep { start, dir, jitter, count } => {
                let d = dir.unit();
                for _ in 0..*count {
                    let a = *start + Point::new(rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0)) * *jitter;
                    let b = a + d * scale;
                    if !(inside(a) && inside(b)) {
                        return Err(too_few("deep", scale));
                    }
                    out.push((a, b));
                }
            }
            PairSampler::Cusp { vertex, partner, count } => {
                if !inside(*partner) {
                    return Err(Error::PointOutsideDomain(partner.x, partner.y));
                }
                for _ in 0..*count {
                    let r = scale * rng.gen_range(0.95..=1.05);
                    let z = widest_on_circle(domain, *vertex, r).ok_or_else(|| too_few("cusp", scale))?;
                    out.push((z, *partner));
                }
            }
            PairSampler::Fixed { pairs } => {
                for &(x, y) in pairs {
                    for z in [x, y] {
                        if !inside(z) {
                            return Err(Error::PointOutsideDomain(z.x, z.y));
                        }
                    }
                    out.push((x, y));
                }
            }
            PairSampler::Mixed { parts } => {
                for p in parts {
                    out.extend(p.pairs(domain, scale, rng)?);
                }
            }
        }
        Ok(out)
    }
}

/// The point of the circle `|z − v| = r` inside the domain with the largest
/// boundary distance.
fn widest_on_circle(domain: &DomainSpec, v: Point, r: f64) -> Option<Point> {
    let f = |phi: f64| {
        let z = v + Point::polar(phi) * r;
        domain.dist_to_boundary(z).unwrap_or(-1.0)
    };
    let (phi, best) = crate::numeric::grid_golden_max(f, 0.0, 2.0 * PI, 2880, 1e-12);
    if best <= 0.0 {
        return None;
    }
    let z = v + Point::polar(phi) * r;
    domain.contains(z).then_some(z)
}

fn generic(domain: &DomainSpec, scale: f64, count: usize, rng: &mut ChaCha8Rng, out: &mut Vec<(Point, Point)>) -> Result<()> {
    let l = domain.scale();
    let c = domain.anchor();
    let w = 1.5 * l;
    let sep = scale * l;
    let random_interior = |rng: &mut ChaCha8Rng| -> Option<Point> {
        for _ in 0..MAX_TRIES {
            let z = c + Point::new(rng.gen_range(-w..=w), rng.gen_range(-w..=w));
            if domain.contains(z) {
                return Some(z);
            }
        }
        None
    };
    let near = count / 2;
    let mut tries = 0;
    while out.len() < near {
        tries += 1;
        if tries > MAX_TRIES * count {
            return Err(too_few("generic", scale));
        }
        let Some(x) = random_interior(rng) else { continue };
        let y = x + Point::polar(rng.gen_range(0.0..2.0 * PI)) * sep;
        if domain.contains(y) {
            out.push((x, y));
        }
    }
    while out.len() < count {
        tries += 1;
        if tries > MAX_TRIES * count {
            return Err(too_few("generic", scale));
        }
        let Some(z) = random_interior(rng) else { continue };
        let Some(&(_, p)) = domain.nearest_points(z, 0.0)?.first() else { continue };
        let n = (z - p).unit();
        if !n.is_finite() {
            continue;
        }
        let x = p + n * sep;
        let side = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
        let y = x + n.perp() * (sep * side * rng.gen_range(0.5..=2.0));
        if domain.contains(x) && domain.contains(y) && domain.dist_to_boundary(x)? >= 0.5 * sep {
            out.push((x, y));
        }
    }
    Ok(())
}

/// Pair sets for a scale sweep. Each scale draws from its own stream of the
/// seeded generator, so a scale's pairs do not depend on the others.
pub fn sample_pairs(domain: &DomainSpec, sampler: &PairSampler, scales: &[f64], seed: u64) -> Result<Vec<PairSet>> {
    if scales.is_empty() {
        return Err(Error::EmptyInput);
    }
    scales
        .iter()
        .enumerate()
        .map(|(i, &s)| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            Ok(PairSet { scale: s, pairs: sampler.pairs(domain, s, &mut rng)? })
        })
        .collect()
}
