use super::apollonian::hyperbolic_density;
use super::MetricValue;
use crate::error::{Error, Result};
use crate::geometry::{
    convex_hull, diameter, invert, invert_circle, sample_boundary_focused, smallest_enclosing_disk, BoundarySampling, Disk,
    DomainSpec, HalfPlane, Point, Prim, Region,
};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Contact tolerance in the inverted chart, relative to the enclosing radius.
pub const CONTACT_TOL: f64 = 1e-4;

fn interior(domain: &DomainSpec, z: Point) -> Result<()> {
    if domain.contains(z) {
        Ok(())
    } else {
        Err(Error::PointOutsideDomain(z.x, z.y))
    }
}

/// Boundary samples inverted about `z`; infinity maps to `z`.
fn inverted(s: &BoundarySampling, z: Point) -> Vec<Point> {
    let mut v: Vec<Point> = s.euclidean_points().into_iter().map(|b| invert(z, b).expect("boundary avoids z")).collect();
    if s.includes_infinity {
        v.push(z);
    }
    v
}

/// Ferrand density over a fixed sampling: the diameter of the inverted boundary.
pub fn ferrand_on(s: &BoundarySampling, z: Point) -> f64 {
    let pts = inverted(s, z);
    if pts.len() < 2 {
        return 0.0;
    }
    diameter(&pts).0
}

/// Ferrand density on `m` uniform samples refined near `z`.
pub fn ferrand_density(domain: &DomainSpec, z: Point, m: usize) -> Result<MetricValue> {
    interior(domain, z)?;
    let mut trace = Vec::new();
    for mm in [m / 2, m] {
        let s = sample_boundary_focused(domain, mm.max(16), &[z])?;
        trace.push((mm as f64, ferrand_on(&s, z)));
    }
    Ok(MetricValue::from_trace(trace))
}

/// The extremal disk of the Kulkarni-Pinkall density at a point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExtremalDisk {
    pub disk: Region,
    pub contact_points: Vec<Point>,
    /// Number of separated contact clusters; equals the number of contact
    /// samples when the contacts cover the whole circle.
    pub contact_count: usize,
    /// Enclosing disk of the inverted boundary.
    pub enclosing: Disk,
    pub density: f64,
}

/// Extremal disk over a fixed sampling.
pub fn extremal_disk_on(s: &BoundarySampling, z: Point, contact_tol: f64) -> Result<ExtremalDisk> {
    let pts = inverted(s, z);
    let b = smallest_enclosing_disk(&pts)?;
    let (c, r) = (b.center, b.radius);
    let d = c.dist(z);
    if d > r * (1.0 + 1e-9) {
        return Err(Error::UnsupportedMoebiusDisk);
    }
    let disk = if (r - d).abs() <= 1e-9 * r {
        let u = (c - z) / d;
        Region::Halfplane(HalfPlane { normal: -u, offset: -u.dot(z) - 0.5 / r })
    } else {
        Region::Disk(invert_circle(z, c, r))
    };
    // contact samples in the original chart, with their angle about c
    let mut contacts: Vec<(f64, f64, Point)> = Vec::new();
    for (&p, &side) in s.points.iter().zip(&s.side) {
        if side < 0 {
            continue;
        }
        let w = invert(z, p).expect("boundary avoids z");
        let gap = r - w.dist(c);
        if gap <= contact_tol * r {
            contacts.push(((w - c).angle(), gap, p));
        }
    }
    contacts.sort_by(|a, b| a.0.total_cmp(&b.0));
    let (points, count) = cluster_contacts(&contacts);
    Ok(ExtremalDisk { disk, contact_points: points, contact_count: count, enclosing: b, density: 2.0 * r })
}

fn cluster_contacts(c: &[(f64, f64, Point)]) -> (Vec<Point>, usize) {
    const GAP: f64 = 0.05;
    let n = c.len();
    if n == 0 {
        return (vec![], 0);
    }
    let gaps: Vec<f64> = (0..n).map(|i| if i + 1 < n { c[i + 1].0 - c[i].0 } else { c[0].0 + 2.0 * PI - c[n - 1].0 }).collect();
    let max_gap = gaps.iter().cloned().fold(0.0, f64::max);
    if n >= 8 && max_gap < PI / 4.0 {
        // contacts all around the circle
        return (c.iter().map(|t| t.2).collect(), n);
    }
    // start right after the widest gap so clusters do not wrap
    let start = (gaps.iter().enumerate().max_by(|a, b| a.1.total_cmp(b.1)).unwrap().0 + 1) % n;
    let mut reps: Vec<Point> = Vec::new();
    let mut best: Option<(f64, Point)> = None;
    for k in 0..n {
        let i = (start + k) % n;
        best = match best {
            Some((g, p)) if g <= c[i].1 => Some((g, p)),
            _ => Some((c[i].1, c[i].2)),
        };
        let last = k + 1 == n;
        if last || gaps[i] > GAP {
            reps.push(best.unwrap().1);
            best = None;
        }
    }
    let k = reps.len();
    (reps, k)
}

/// Extremal disk on `m` uniform samples refined near `z`.
pub fn extremal_disk(domain: &DomainSpec, z: Point, m: usize) -> Result<ExtremalDisk> {
    interior(domain, z)?;
    let s = sample_boundary_focused(domain, m, &[z])?;
    extremal_disk_on(&s, z, CONTACT_TOL)
}

/// Kulkarni-Pinkall density `2R`, with the extremal disk.
pub fn kp_density(domain: &DomainSpec, z: Point, m: usize) -> Result<(MetricValue, ExtremalDisk)> {
    interior(domain, z)?;
    let mut trace = Vec::new();
    let mut last = None;
    for mm in [m / 2, m] {
        let s = sample_boundary_focused(domain, mm.max(16), &[z])?;
        let e = extremal_disk_on(&s, z, CONTACT_TOL)?;
        trace.push((mm as f64, e.density));
        last = Some(e);
    }
    let e = last.unwrap();
    debug_assert!(hyperbolic_density(&e.disk, z).is_ok());
    Ok((MetricValue::from_trace(trace), e))
}

/// Seittenranta distance over a fixed sampling.
///
/// For fixed `a` the supremum over `b` of `|a - b| / |b - y|` is `|a - y|`
/// times the farthest distance from `i_y(a)` to the inverted boundary, a
/// hull vertex; this turns the pair scan into points times hull size.
pub fn seittenranta_on(s: &BoundarySampling, x: Point, y: Point) -> f64 {
    if x == y {
        return 0.0;
    }
    let pts = s.euclidean_points();
    let mut inv: Vec<Point> = pts.iter().map(|&b| invert(y, b).expect("boundary avoids y")).collect();
    if s.includes_infinity {
        inv.push(y);
    }
    let hull = convex_hull(&inv);
    let mut sup: f64 = 0.0;
    for (k, &a) in pts.iter().enumerate() {
        let ia = inv[k];
        let far = hull.iter().map(|h| h.dist(ia)).fold(0.0, f64::max);
        sup = sup.max(a.dist(y) / a.dist(x) * far);
    }
    if s.includes_infinity {
        // a at infinity: sup over b of 1 / |b - y|
        let near = pts.iter().map(|b| b.dist(y)).fold(f64::INFINITY, f64::min);
        sup = sup.max(1.0 / near);
    }
    (sup * x.dist(y)).ln_1p()
}

/// Seittenranta distance on `m` uniform samples refined near `x` and `y`.
pub fn seittenranta_distance(domain: &DomainSpec, x: Point, y: Point, m: usize) -> Result<MetricValue> {
    interior(domain, x)?;
    interior(domain, y)?;
    if x == y {
        return Ok(MetricValue::exact(0.0));
    }
    let mut trace = Vec::new();
    for mm in [m / 2, m] {
        let s = sample_boundary_focused(domain, mm.max(16), &[x, y])?;
        trace.push((mm as f64, seittenranta_on(&s, x, y)));
    }
    Ok(MetricValue::from_trace(trace))
}

/// Hyperbolic geodesic of the extremal disk joining its two contacts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CircularGeodesic {
    pub extremal: ExtremalDisk,
    pub endpoints: (Point, Point),
    pub hyperbolic_center: Point,
    /// Center and radius of the supporting circle; `None` for a straight geodesic.
    pub arc: Option<(Point, f64)>,
}

impl CircularGeodesic {
    /// Unit tangent of the geodesic at its hyperbolic center.
    pub fn tangent_at_center(&self) -> Point {
        match self.arc {
            Some((o, _)) => (self.hyperbolic_center - o).perp().unit(),
            None => (self.endpoints.1 - self.endpoints.0).unit(),
        }
    }

    /// Points of the geodesic, `n + 1` of them from one endpoint to the other.
    pub fn polyline(&self, n: usize) -> Vec<Point> {
        let (a, b) = self.endpoints;
        match self.arc {
            None => (0..=n).map(|k| a.lerp(b, k as f64 / n as f64)).collect(),
            Some((o, rho)) => {
                let t0 = (a - o).angle();
                let mut dt = (b - o).angle() - t0;
                // the arc through the hyperbolic center
                let tc = (self.hyperbolic_center - o).angle();
                let mut rel = tc - t0;
                while dt <= -PI {
                    dt += 2.0 * PI;
                }
                while dt > PI {
                    dt -= 2.0 * PI;
                }
                while rel <= -PI {
                    rel += 2.0 * PI;
                }
                while rel > PI {
                    rel -= 2.0 * PI;
                }
                if rel * dt < 0.0 || rel.abs() > dt.abs() {
                    dt = if dt > 0.0 { dt - 2.0 * PI } else { dt + 2.0 * PI };
                }
                (0..=n).map(|k| o + Point::polar(t0 + dt * k as f64 / n as f64) * rho).collect()
            }
        }
    }
}

/// Geodesic of the extremal disk between two points of its boundary.
fn geodesic_in(region: &Region, a: Point, b: Point) -> (Point, Option<(Point, f64)>) {
    match region {
        Region::Disk(d) => {
            let (c, rho) = (d.center, d.radius);
            let ua = (a - c).unit();
            let ub = (b - c).unit();
            let bis = ua + ub;
            if bis.norm() < 1e-9 {
                return (c, None);
            }
            let u = bis.unit();
            let half = 0.5 * ua.dot(ub).clamp(-1.0, 1.0).acos();
            let o = c + u * (rho / half.cos());
            let r = rho * half.tan();
            (o - u * r, Some((o, r)))
        }
        Region::Halfplane(h) => {
            let m = a.lerp(b, 0.5);
            let r = 0.5 * a.dist(b);
            (m + h.normal * r, Some((m, r)))
        }
    }
}

/// Circular geodesic through the two contacts of the extremal disk at `z`.
pub fn circular_geodesic(domain: &DomainSpec, z: Point, m: usize) -> Result<CircularGeodesic> {
    let e = extremal_disk(domain, z, m)?;
    if e.contact_count != 2 {
        return Err(Error::NotTwoExtremal(e.contact_count));
    }
    let (a, b) = (e.contact_points[0], e.contact_points[1]);
    let (hc, arc) = geodesic_in(&e.disk, a, b);
    Ok(CircularGeodesic { extremal: e, endpoints: (a, b), hyperbolic_center: hc, arc })
}

/// Hyperbolic centers over a seed set; seeds without exactly two contacts are skipped.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HmaSample {
    pub geodesics: Vec<CircularGeodesic>,
    pub seeds: Vec<Point>,
    /// `(seed, reason)` for every skipped seed.
    pub skipped: Vec<(Point, String)>,
}

impl HmaSample {
    pub fn centers(&self) -> Vec<Point> {
        self.geodesics.iter().map(|g| g.hyperbolic_center).collect()
    }
}

pub fn hma_sample(domain: &DomainSpec, seeds: &[Point], m: usize) -> Result<HmaSample> {
    let mut out = HmaSample { geodesics: vec![], seeds: vec![], skipped: vec![] };
    for &z in seeds {
        match circular_geodesic(domain, z, m) {
            Ok(g) => {
                out.geodesics.push(g);
                out.seeds.push(z);
            }
            Err(e @ Error::NotTwoExtremal(_)) => out.skipped.push((z, e.to_string())),
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}

/// Deviation from a right angle, in degrees, between the curve traced by
/// consecutive hyperbolic centers and the geodesic through each interior center.
pub fn hma_orthogonality_deg(s: &HmaSample) -> Vec<f64> {
    let g = &s.geodesics;
    (1..g.len().saturating_sub(1))
        .map(|k| {
            let t = (g[k + 1].hyperbolic_center - g[k - 1].hyperbolic_center).unit();
            let u = g[k].tangent_at_center();
            let cos = t.dot(u).abs().min(1.0);
            90.0 - cos.acos().to_degrees()
        })
        .collect()
}

/// Curvature `-R / (R - delta)` of the quasihyperbolic metric at `z`, where
/// `R` is the signed radius of curvature at the nearest boundary point
/// (positive when the domain lies inside the osculating circle).
/// Ties and the center of curvature give negative infinity.
pub fn qh_curvature(domain: &DomainSpec, z: Point) -> Result<f64> {
    const TOL: f64 = 1e-9;
    let d = domain.dist_to_boundary(z)?;
    let near = domain.nearest_points(z, TOL)?;
    let mut distinct: Vec<Point> = Vec::new();
    for (_, q) in &near {
        if !distinct.iter().any(|p| p.dist(*q) <= TOL * (1.0 + d)) {
            distinct.push(*q);
        }
    }
    if distinct.len() > 1 {
        return Ok(f64::NEG_INFINITY);
    }
    let q = distinct[0];
    let mut radius = None;
    for (p, _) in &near {
        match *p {
            Prim::Circle { r, inner, .. } => radius = Some(if inner { r } else { -r }),
            Prim::Line { .. } => radius = Some(f64::INFINITY),
            Prim::Seg { a, b, .. } => {
                if q.dist(a) <= TOL * (1.0 + d) || q.dist(b) <= TOL * (1.0 + d) {
                    return Err(Error::UnknownCurvature);
                }
                radius = Some(f64::INFINITY);
            }
            Prim::Pt { .. } => return Err(Error::UnknownCurvature),
        }
    }
    let r = radius.ok_or(Error::UnknownCurvature)?;
    if r.is_infinite() {
        return Ok(-1.0);
    }
    if (r - d).abs() < TOL * r.abs() {
        return Ok(f64::NEG_INFINITY);
    }
    Ok(-r / (r - d))
}
