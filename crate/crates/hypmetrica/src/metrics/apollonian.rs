use super::MetricValue;
use crate::error::{Error, Result};
use crate::geometry::{sample_boundary_focused, tangent_ball_radii, BoundarySampling, DomainSpec, Point, Region};
use serde::{Deserialize, Serialize};

/// The two boundary suprema behind the Apollonian distance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ApollonianParameters {
    /// `max |a - y| / |a - x|`.
    pub q_x: f64,
    /// `max |b - x| / |b - y|`.
    pub q_y: f64,
    /// Maximizer of `q_x`; `None` when infinity attains it.
    pub argmax_a: Option<Point>,
    pub argmax_b: Option<Point>,
}

impl ApollonianParameters {
    /// Center and radius of the Apollonian ball `B_x`; `None` when `q_x = 1`.
    pub fn ball_x(&self, x: Point, y: Point) -> Option<(Point, f64)> {
        ball(x, y, self.q_x)
    }

    pub fn ball_y(&self, x: Point, y: Point) -> Option<(Point, f64)> {
        ball(y, x, self.q_y)
    }
}

fn ball(x: Point, y: Point, q: f64) -> Option<(Point, f64)> {
    let den = q * q - 1.0;
    if den <= 0.0 {
        return None;
    }
    Some((x + (x - y) / den, q * x.dist(y) / den))
}

/// Apollonian distance over a fixed sampling, with its parameters.
///
/// Uses `q_x^2 - 1 = max <x - y, 2a - x - y> / |a - x|^2`, which stays
/// accurate when `x` and `y` nearly coincide.
pub fn apollonian_on(s: &BoundarySampling, x: Point, y: Point) -> (f64, ApollonianParameters) {
    let d = x - y;
    let sxy = x + y;
    let mut ux = if s.includes_infinity { 0.0 } else { f64::NEG_INFINITY };
    let mut uy = ux;
    let mut am = None;
    let mut bm = None;
    for &a in &s.points {
        let t = d.dot(a * 2.0 - sxy);
        let vx = t / a.dist2(x);
        let vy = -t / a.dist2(y);
        if vx > ux {
            ux = vx;
            am = Some(a);
        }
        if vy > uy {
            uy = vy;
            bm = Some(a);
        }
    }
    let ux = ux.max(-1.0);
    let uy = uy.max(-1.0);
    let alpha = 0.5 * (ux.ln_1p() + uy.ln_1p());
    let params = ApollonianParameters { q_x: (1.0 + ux).sqrt(), q_y: (1.0 + uy).sqrt(), argmax_a: am, argmax_b: bm };
    (alpha.max(0.0), params)
}

fn interior(domain: &DomainSpec, z: Point) -> Result<()> {
    if domain.contains(z) {
        Ok(())
    } else {
        Err(Error::PointOutsideDomain(z.x, z.y))
    }
}

/// Apollonian distance on `m` uniform samples refined near `x` and `y`.
/// The trace reports the value at `m/2` and `m`.
pub fn apollonian_distance(domain: &DomainSpec, x: Point, y: Point, m: usize) -> Result<(MetricValue, ApollonianParameters)> {
    interior(domain, x)?;
    interior(domain, y)?;
    if x == y {
        let p = ApollonianParameters { q_x: 1.0, q_y: 1.0, argmax_a: None, argmax_b: None };
        return Ok((MetricValue::exact(0.0), p));
    }
    let mut trace = Vec::new();
    let mut last = None;
    for mm in [m / 2, m] {
        let s = sample_boundary_focused(domain, mm.max(16), &[x, y])?;
        let (v, p) = apollonian_on(&s, x, y);
        trace.push((mm as f64, v));
        last = Some(p);
    }
    Ok((MetricValue::from_trace(trace), last.unwrap()))
}

/// Which form of the distance-ratio metric.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum JVariant {
    Min,
    Product,
}

/// `j` from the two boundary distances.
#[inline]
pub fn j_value(t: f64, dx: f64, dy: f64, variant: JVariant) -> f64 {
    match variant {
        JVariant::Min => (t / dx.min(dy)).ln_1p(),
        JVariant::Product => (t / dx).ln_1p() + (t / dy).ln_1p(),
    }
}

/// Distance-ratio metric; exact.
pub fn j_distance(domain: &DomainSpec, x: Point, y: Point, variant: JVariant) -> Result<MetricValue> {
    let dx = domain.dist_to_boundary(x)?;
    let dy = domain.dist_to_boundary(y)?;
    Ok(MetricValue::exact(j_value(x.dist(y), dx, dy, variant)))
}

/// Directed Apollonian density with its two tangent-ball radii.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DirectedDensity {
    pub value: f64,
    pub r_plus: f64,
    pub r_minus: f64,
}

impl DirectedDensity {
    fn from_radii(r_plus: f64, r_minus: f64) -> Self {
        DirectedDensity { value: 0.5 / r_plus + 0.5 / r_minus, r_plus, r_minus }
    }
}

/// Directed density from radii over `m` samples refined near `x`.
pub fn apollonian_directed_density(domain: &DomainSpec, x: Point, theta: Point, m: usize) -> Result<DirectedDensity> {
    interior(domain, x)?;
    let s = sample_boundary_focused(domain, m, &[x])?;
    let (rp, rm) = tangent_ball_radii(domain, x, theta, &s)?;
    Ok(DirectedDensity::from_radii(rp, rm))
}

/// Directed density from the analytic tangent-ball radii.
pub fn apollonian_directed_density_exact(domain: &DomainSpec, x: Point, theta: Point) -> Result<DirectedDensity> {
    let (rp, rm) = crate::geometry::tangent_ball_radii_exact(domain, x, theta)?;
    Ok(DirectedDensity::from_radii(rp, rm))
}

/// Density of the hyperbolic metric of a disk or half-plane.
pub fn hyperbolic_density(region: &Region, z: Point) -> Result<f64> {
    if !region.contains_open(z) {
        return Err(Error::PointOutsideDomain(z.x, z.y));
    }
    Ok(match region {
        Region::Disk(d) => 2.0 * d.radius / (d.radius * d.radius - z.dist2(d.center)),
        Region::Halfplane(h) => 1.0 / h.height(z),
    })
}

/// Hyperbolic distance in a disk or half-plane, density `2r/(r^2-|z|^2)`.
pub fn hyperbolic_distance(region: &Region, x: Point, y: Point) -> Result<f64> {
    if !region.contains_open(x) {
        return Err(Error::PointOutsideDomain(x.x, x.y));
    }
    if !region.contains_open(y) {
        return Err(Error::PointOutsideDomain(y.x, y.y));
    }
    let arg = match region {
        Region::Disk(d) => {
            let r2 = d.radius * d.radius;
            let a = r2 - x.dist2(d.center);
            let b = r2 - y.dist2(d.center);
            2.0 * r2 * x.dist2(y) / (a * b)
        }
        Region::Halfplane(h) => x.dist2(y) / (2.0 * h.height(x) * h.height(y)),
    };
    // acosh(1 + arg) without cancellation
    Ok((arg + (arg * (arg + 2.0)).sqrt()).ln_1p())
}
