use super::point::Point;
use crate::error::{Error, Result};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Disk {
    pub center: Point,
    pub radius: f64,
}

/// The open half-plane `<normal, p> > offset`; `normal` is the unit inward normal.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HalfPlane {
    pub normal: Point,
    pub offset: f64,
}

impl Disk {
    pub fn new(center: Point, radius: f64) -> Self {
        Disk { center, radius }
    }

    pub fn contains(&self, p: Point, slack: f64) -> bool {
        p.dist(self.center) <= self.radius + slack
    }
}

impl HalfPlane {
    /// Rejects normals whose length is off by more than 1e-9, then rescales exactly.
    pub fn new(normal: Point, offset: f64) -> Result<Self> {
        let n = normal.norm();
        if !n.is_finite() || (n - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidDomain(format!("half-plane normal has length {n}")));
        }
        Ok(HalfPlane { normal: normal / n, offset })
    }

    /// Signed height of `p` above the boundary line.
    pub fn height(&self, p: Point) -> f64 {
        self.normal.dot(p) - self.offset
    }
}

/// A disk or a half-plane; the two shapes of an extremal disk.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum Region {
    Disk(Disk),
    Halfplane(HalfPlane),
}

impl Region {
    pub fn contains_open(&self, p: Point) -> bool {
        match self {
            Region::Disk(d) => p.dist(d.center) < d.radius,
            Region::Halfplane(h) => h.height(p) > 0.0,
        }
    }

    /// Euclidean distance from an interior point to the boundary.
    pub fn boundary_distance(&self, p: Point) -> f64 {
        match self {
            Region::Disk(d) => (d.radius - p.dist(d.center)).abs(),
            Region::Halfplane(h) => h.height(p).abs(),
        }
    }
}

/// Inversion in the unit circle centered at `center`.
pub fn invert(center: Point, w: Point) -> Result<Point> {
    let d = w - center;
    let r2 = d.norm2();
    if r2 == 0.0 {
        return Err(Error::InversionAtCenter);
    }
    Ok(center + d / r2)
}

/// Image of the circle `(c, r)` under inversion about `z`, assuming `z` is not on it.
pub fn invert_circle(z: Point, c: Point, r: f64) -> Disk {
    let w = c - z;
    let den = w.norm2() - r * r;
    Disk { center: z + w / den, radius: r / den.abs() }
}

fn circle2(a: Point, b: Point) -> Disk {
    let c = (a + b) * 0.5;
    Disk { center: c, radius: c.dist(a).max(c.dist(b)) }
}

fn circle3(a: Point, b: Point, c: Point) -> Option<Disk> {
    let bx = b - a;
    let cx = c - a;
    let d = 2.0 * bx.cross(cx);
    if d.abs() < 1e-300 {
        return None;
    }
    let b2 = bx.norm2();
    let c2 = cx.norm2();
    let u = Point::new((cx.y * b2 - bx.y * c2) / d, (bx.x * c2 - cx.x * b2) / d);
    let center = a + u;
    let radius = center.dist(a).max(center.dist(b)).max(center.dist(c));
    Some(Disk { center, radius })
}

fn inside(d: &Disk, p: Point) -> bool {
    p.dist(d.center) <= d.radius * (1.0 + 1e-14) + 1e-300
}

/// Minimal enclosing closed disk, Welzl's algorithm in its iterative
/// move-to-front form over a fixed-seed shuffle (deterministic).
pub fn smallest_enclosing_disk(points: &[Point]) -> Result<Disk> {
    if points.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut pts: Vec<Point> = points.to_vec();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    pts.shuffle(&mut rng);
    let mut d = Disk { center: pts[0], radius: 0.0 };
    for i in 1..pts.len() {
        if inside(&d, pts[i]) {
            continue;
        }
        d = Disk { center: pts[i], radius: 0.0 };
        for j in 0..i {
            if inside(&d, pts[j]) {
                continue;
            }
            d = circle2(pts[i], pts[j]);
            for k in 0..j {
                if inside(&d, pts[k]) {
                    continue;
                }
                d = circle3(pts[i], pts[j], pts[k]).unwrap_or_else(|| {
                    // collinear triple: the widest pair wins
                    let c = [circle2(pts[i], pts[j]), circle2(pts[i], pts[k]), circle2(pts[j], pts[k])];
                    *c.iter().max_by(|a, b| a.radius.total_cmp(&b.radius)).unwrap()
                });
            }
        }
    }
    Ok(d)
}

/// Andrew's monotone chain; returns the hull in counterclockwise order.
pub fn convex_hull(points: &[Point]) -> Vec<Point> {
    let mut p: Vec<Point> = points.to_vec();
    p.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
    p.dedup();
    if p.len() < 3 {
        return p;
    }
    let mut lower: Vec<Point> = Vec::new();
    for &q in &p {
        while lower.len() >= 2 && (lower[lower.len() - 1] - lower[lower.len() - 2]).cross(q - lower[lower.len() - 2]) <= 0.0 {
            lower.pop();
        }
        lower.push(q);
    }
    let mut upper: Vec<Point> = Vec::new();
    for &q in p.iter().rev() {
        while upper.len() >= 2 && (upper[upper.len() - 1] - upper[upper.len() - 2]).cross(q - upper[upper.len() - 2]) <= 0.0 {
            upper.pop();
        }
        upper.push(q);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// Diameter of a point set with the realizing pair.
pub fn diameter(points: &[Point]) -> (f64, Point, Point) {
    let hull = convex_hull(points);
    let mut best = (0.0, hull[0], hull[0]);
    let n = hull.len();
    if n <= 2 {
        if n == 2 {
            return (hull[0].dist(hull[1]), hull[0], hull[1]);
        }
        return best;
    }
    // rotating calipers
    let area = |i: usize, j: usize, k: usize| (hull[j] - hull[i]).cross(hull[k] - hull[i]).abs();
    let mut j = 1;
    for i in 0..n {
        let i2 = (i + 1) % n;
        while area(i, i2, (j + 1) % n) > area(i, i2, j) {
            j = (j + 1) % n;
        }
        for &(a, b) in &[(i, j), (i2, j)] {
            let d = hull[a].dist(hull[b]);
            if d > best.0 {
                best = (d, hull[a], hull[b]);
            }
        }
    }
    best
}
