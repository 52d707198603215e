use serde::{Deserialize, Serialize};
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub};

/// A point (or vector) of the Euclidean plane. Serialized as `[x, y]`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "[f64; 2]", into = "[f64; 2]")]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl From<[f64; 2]> for Point {
    fn from(a: [f64; 2]) -> Self {
        Point { x: a[0], y: a[1] }
    }
}

impl From<Point> for [f64; 2] {
    fn from(p: Point) -> Self {
        [p.x, p.y]
    }
}

impl Point {
    pub const ORIGIN: Point = Point { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    /// Unit vector at angle `phi`.
    pub fn polar(phi: f64) -> Self {
        let (s, c) = phi.sin_cos();
        Point { x: c, y: s }
    }

    pub fn dot(self, o: Point) -> f64 {
        self.x * o.x + self.y * o.y
    }

    /// z-component of the cross product.
    pub fn cross(self, o: Point) -> f64 {
        self.x * o.y - self.y * o.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn norm2(self) -> f64 {
        self.x * self.x + self.y * self.y
    }

    pub fn dist(self, o: Point) -> f64 {
        (self - o).norm()
    }

    pub fn dist2(self, o: Point) -> f64 {
        (self - o).norm2()
    }

    /// Counterclockwise rotation by a right angle.
    pub fn perp(self) -> Point {
        Point { x: -self.y, y: self.x }
    }

    pub fn unit(self) -> Point {
        self / self.norm()
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn lerp(self, o: Point, t: f64) -> Point {
        self + (o - self) * t
    }

    pub fn angle(self) -> f64 {
        self.y.atan2(self.x)
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, o: Point) -> Point {
        Point { x: self.x + o.x, y: self.y + o.y }
    }
}

impl AddAssign for Point {
    fn add_assign(&mut self, o: Point) {
        self.x += o.x;
        self.y += o.y;
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, o: Point) -> Point {
        Point { x: self.x - o.x, y: self.y - o.y }
    }
}

impl Mul<f64> for Point {
    type Output = Point;
    fn mul(self, s: f64) -> Point {
        Point { x: self.x * s, y: self.y * s }
    }
}

impl Div<f64> for Point {
    type Output = Point;
    fn div(self, s: f64) -> Point {
        Point { x: self.x / s, y: self.y / s }
    }
}

impl Neg for Point {
    type Output = Point;
    fn neg(self) -> Point {
        Point { x: -self.x, y: -self.y }
    }
}

/// Distance from `p` to the closed segment `[a, b]`, with the nearest point.
pub fn segment_nearest(p: Point, a: Point, b: Point) -> (f64, Point) {
    let ab = b - a;
    let l2 = ab.norm2();
    if l2 == 0.0 {
        return (p.dist(a), a);
    }
    let t = ((p - a).dot(ab) / l2).clamp(0.0, 1.0);
    let q = a + ab * t;
    (p.dist(q), q)
}

/// Parameters (s, t) of the intersection of the lines through `[p, p2]` and
/// `[q, q2]`, or `None` when parallel.
pub fn line_intersection(p: Point, p2: Point, q: Point, q2: Point) -> Option<(f64, f64)> {
    let r = p2 - p;
    let s = q2 - q;
    let den = r.cross(s);
    if den == 0.0 {
        return None;
    }
    let qp = q - p;
    Some((qp.cross(s) / den, qp.cross(r) / den))
}
