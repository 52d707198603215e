use super::point::{segment_nearest, Point};
use super::shapes::HalfPlane;
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    X,
    Y,
}

/// The base region. Half-plane normals point into the region.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum Base {
    Disk { center: Point, radius: f64 },
    Halfplane { normal: Point, offset: f64 },
    Strip {
        axis: Axis,
        halfwidth: f64,
        #[serde(default)]
        offset: f64,
    },
    Polygon { vertices: Vec<Point> },
    Plane,
}

/// A closed set removed from the base. A `halfplane` hole removes the closed
/// side opposite to its normal, so the normal points into what is kept.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum Hole {
    Disk { center: Point, radius: f64 },
    Polygon { vertices: Vec<Point> },
    Puncture { point: Point },
    Segment { from: Point, to: Point },
    Halfplane { normal: Point, offset: f64 },
}

/// One analytic piece of the boundary.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Prim {
    /// Circle; `inner` when the domain lies inside it.
    Circle { c: Point, r: f64, inner: bool },
    /// Line with the domain on the side `<n, p> > d`.
    Line { n: Point, d: f64 },
    /// Polygon edge or slit; the domain is to the left of `a -> b` for edges.
    Seg { a: Point, b: Point, slit: bool },
    Pt { p: Point },
}

impl Prim {
    /// Distance from `z` and the nearest point of the primitive.
    pub fn nearest(&self, z: Point) -> (f64, Point) {
        match *self {
            Prim::Circle { c, r, .. } => {
                let w = z - c;
                let d = w.norm();
                let q = if d == 0.0 { c + Point::new(r, 0.0) } else { c + w * (r / d) };
                ((d - r).abs(), q)
            }
            Prim::Line { n, d } => {
                let h = n.dot(z) - d;
                (h.abs(), z - n * h)
            }
            Prim::Seg { a, b, .. } => segment_nearest(z, a, b),
            Prim::Pt { p } => (z.dist(p), p),
        }
    }

    pub fn is_finite(&self) -> bool {
        !matches!(self, Prim::Line { .. })
    }
}

/// A planar domain: an open base region minus closed holes.
///
/// `unbounded` states that infinity is a boundary point. Unbounded geometry
/// with the flag off means infinity is an interior point, which only the
/// tangent-ball construction refuses.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DomainSpec {
    pub base: Base,
    #[serde(default)]
    pub holes: Vec<Hole>,
    #[serde(default)]
    pub unbounded: bool,
}

fn signed_area(v: &[Point]) -> f64 {
    let n = v.len();
    (0..n).map(|i| v[i].cross(v[(i + 1) % n])).sum::<f64>() * 0.5
}

fn ccw(v: &[Point]) -> Vec<Point> {
    let mut w = v.to_vec();
    if signed_area(&w) < 0.0 {
        w.reverse();
    }
    w
}

/// Winding test; points on an edge count as inside.
pub fn point_in_polygon(p: Point, v: &[Point]) -> bool {
    let n = v.len();
    let mut inside = false;
    for i in 0..n {
        let a = v[i];
        let b = v[(i + 1) % n];
        if segment_nearest(p, a, b).0 <= 1e-14 * (1.0 + p.norm()) {
            return true;
        }
        if (a.y > p.y) != (b.y > p.y) {
            let x = a.x + (p.y - a.y) / (b.y - a.y) * (b.x - a.x);
            if p.x < x {
                inside = !inside;
            }
        }
    }
    inside
}

impl DomainSpec {
    pub fn new(base: Base, holes: Vec<Hole>, unbounded: bool) -> Result<Self> {
        let d = DomainSpec { base, holes, unbounded };
        d.validate()?;
        Ok(d)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let d: DomainSpec = serde_json::from_str(s).map_err(|e| Error::InvalidDomain(e.to_string()))?;
        d.validate()?;
        Ok(d)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("domain serializes")
    }

    // ---- catalog ----

    pub fn unit_disk() -> Self {
        Self::disk(Point::ORIGIN, 1.0)
    }

    pub fn disk(center: Point, radius: f64) -> Self {
        DomainSpec { base: Base::Disk { center, radius }, holes: vec![], unbounded: false }
    }

    /// Upper half-plane `y > 0`.
    pub fn upper_half_plane() -> Self {
        DomainSpec { base: Base::Halfplane { normal: Point::new(0.0, 1.0), offset: 0.0 }, holes: vec![], unbounded: true }
    }

    /// Strip `|y| < halfwidth`.
    pub fn strip(halfwidth: f64) -> Self {
        DomainSpec { base: Base::Strip { axis: Axis::X, halfwidth, offset: 0.0 }, holes: vec![], unbounded: true }
    }

    pub fn annulus(inner: f64, outer: f64) -> Self {
        DomainSpec {
            base: Base::Disk { center: Point::ORIGIN, radius: outer },
            holes: vec![Hole::Disk { center: Point::ORIGIN, radius: inner }],
            unbounded: false,
        }
    }

    pub fn punctured_disk(p: Point) -> Self {
        DomainSpec { base: Base::Disk { center: Point::ORIGIN, radius: 1.0 }, holes: vec![Hole::Puncture { point: p }], unbounded: false }
    }

    pub fn punctured_plane(p: Point) -> Self {
        DomainSpec { base: Base::Plane, holes: vec![Hole::Puncture { point: p }], unbounded: true }
    }

    /// Complement of the closed disk `(center, radius)`.
    pub fn disk_exterior(center: Point, radius: f64) -> Self {
        DomainSpec { base: Base::Plane, holes: vec![Hole::Disk { center, radius }], unbounded: true }
    }

    /// Complement of the closed axis-parallel square of side `side` centered at 0.
    pub fn square_exterior(side: f64) -> Self {
        let h = side / 2.0;
        DomainSpec { base: Base::Plane, holes: vec![Hole::Polygon { vertices: square(h) }], unbounded: true }
    }

    pub fn square(halfside: f64) -> Self {
        DomainSpec { base: Base::Polygon { vertices: square(halfside) }, holes: vec![], unbounded: false }
    }

    /// Disk of radius 4 minus the centered closed square of side 1 minus the
    /// slit joining the square to the circle along the positive real axis.
    pub fn lollipop() -> Self {
        DomainSpec {
            base: Base::Disk { center: Point::ORIGIN, radius: 4.0 },
            holes: vec![
                Hole::Polygon { vertices: square(0.5) },
                Hole::Segment { from: Point::new(0.5, 0.0), to: Point::new(4.0, 0.0) },
            ],
            unbounded: false,
        }
    }

    /// Upper half-plane minus the slit `[0, i]`.
    pub fn slit_half_plane() -> Self {
        let mut d = Self::upper_half_plane();
        d.holes.push(Hole::Segment { from: Point::ORIGIN, to: Point::new(0.0, 1.0) });
        d
    }

    /// Half-strip `x > 0, |y| < 1`.
    pub fn half_strip() -> Self {
        let mut d = Self::strip(1.0);
        d.holes.push(Hole::Halfplane { normal: Point::new(1.0, 0.0), offset: 0.0 });
        d
    }

    /// Half-strip minus the closed rectangle `[r, 2 - r] x [-(1 - r), 1 - r]`.
    pub fn half_strip_minus_rectangle(r: f64) -> Self {
        let mut d = Self::half_strip();
        d.holes.push(Hole::Polygon {
            vertices: vec![Point::new(r, -(1.0 - r)), Point::new(2.0 - r, -(1.0 - r)), Point::new(2.0 - r, 1.0 - r), Point::new(r, 1.0 - r)],
        });
        d
    }

    /// Open square `(-1, 0)^2` minus the closed unit disk.
    pub fn square_minus_disk() -> Self {
        DomainSpec {
            base: Base::Polygon { vertices: vec![Point::new(-1.0, -1.0), Point::new(0.0, -1.0), Point::new(0.0, 0.0), Point::new(-1.0, 0.0)] },
            holes: vec![Hole::Disk { center: Point::ORIGIN, radius: 1.0 }],
            unbounded: false,
        }
    }

    // ---- structure ----

    pub fn geometry_unbounded(&self) -> bool {
        matches!(self.base, Base::Halfplane { .. } | Base::Strip { .. } | Base::Plane)
    }

    /// Convex domains: convex base, only half-plane holes.
    pub fn is_convex(&self) -> bool {
        let base_convex = match &self.base {
            Base::Polygon { vertices } => {
                let v = ccw(vertices);
                let n = v.len();
                (0..n).all(|i| (v[(i + 1) % n] - v[i]).cross(v[(i + 2) % n] - v[(i + 1) % n]) >= 0.0)
            }
            Base::Plane => self.holes.is_empty(),
            _ => true,
        };
        base_convex && self.holes.iter().all(|h| matches!(h, Hole::Halfplane { .. }))
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |s: String| Err(Error::InvalidDomain(s));
        let finite = |p: &Point| p.is_finite();
        match &self.base {
            Base::Disk { center, radius } => {
                if !(radius.is_finite() && *radius > 0.0) || !finite(center) {
                    return bad("disk radius must be positive".into());
                }
            }
            Base::Halfplane { normal, offset } => {
                HalfPlane::new(*normal, *offset)?;
            }
            Base::Strip { halfwidth, offset, .. } => {
                if !(halfwidth.is_finite() && *halfwidth > 0.0) || !offset.is_finite() {
                    return bad("strip halfwidth must be positive".into());
                }
            }
            Base::Polygon { vertices } => {
                if vertices.len() < 3 || !vertices.iter().all(finite) || signed_area(vertices).abs() == 0.0 {
                    return bad("polygon needs three vertices and nonzero area".into());
                }
            }
            Base::Plane => {}
        }
        for h in &self.holes {
            match h {
                Hole::Disk { center, radius } => {
                    if !(radius.is_finite() && *radius > 0.0) || !finite(center) {
                        return bad("hole radius must be positive".into());
                    }
                    if let Base::Disk { center: c, radius: r } = &self.base {
                        if center.dist(*c) + r <= *radius {
                            return bad("hole disk covers the base disk".into());
                        }
                    }
                }
                Hole::Polygon { vertices } => {
                    if vertices.len() < 3 || !vertices.iter().all(finite) || signed_area(vertices).abs() == 0.0 {
                        return bad("hole polygon needs three vertices and nonzero area".into());
                    }
                }
                Hole::Puncture { point } => {
                    if !self.base_contains(*point) {
                        return bad("puncture must lie in the open base".into());
                    }
                }
                Hole::Segment { from, to } => {
                    if from == to || !finite(from) || !finite(to) {
                        return bad("slit must have two distinct endpoints".into());
                    }
                    if !self.base_contains(from.lerp(*to, 0.5)) {
                        return bad("slit must lie in the base".into());
                    }
                }
                Hole::Halfplane { normal, offset } => {
                    HalfPlane::new(*normal, *offset)?;
                }
            }
        }
        if self.unbounded && !self.geometry_unbounded() {
            return bad("bounded geometry cannot have infinity on its boundary".into());
        }
        if matches!(self.base, Base::Plane) && self.holes.is_empty() {
            return Err(Error::DegenerateBoundary);
        }
        if matches!(self.base, Base::Plane) && !self.unbounded && self.holes.iter().all(|h| matches!(h, Hole::Puncture { .. })) && self.holes.len() < 2 {
            return Err(Error::DegenerateBoundary);
        }
        Ok(())
    }

    pub fn base_contains(&self, z: Point) -> bool {
        match &self.base {
            Base::Disk { center, radius } => z.dist(*center) < *radius,
            Base::Halfplane { normal, offset } => normal.dot(z) / normal.norm() > *offset,
            Base::Strip { axis, halfwidth, offset } => {
                let t = match axis {
                    Axis::X => z.y,
                    Axis::Y => z.x,
                };
                (t - offset).abs() < *halfwidth
            }
            Base::Polygon { vertices } => {
                point_in_polygon(z, vertices) && vertices.len() > 2 && {
                    let n = vertices.len();
                    (0..n).all(|i| segment_nearest(z, vertices[i], vertices[(i + 1) % n]).0 > 0.0)
                }
            }
            Base::Plane => true,
        }
    }

    /// Whether `z` lies in the closed hole `h`.
    pub fn hole_contains(h: &Hole, z: Point) -> bool {
        match h {
            Hole::Disk { center, radius } => z.dist(*center) <= *radius,
            Hole::Polygon { vertices } => point_in_polygon(z, vertices),
            Hole::Puncture { point } => z == *point,
            Hole::Segment { from, to } => segment_nearest(z, *from, *to).0 == 0.0,
            Hole::Halfplane { normal, offset } => normal.dot(z) / normal.norm() <= *offset,
        }
    }

    /// Whether `z` lies in the open interior of the hole.
    pub fn hole_interior_contains(h: &Hole, z: Point, tol: f64) -> bool {
        match h {
            Hole::Disk { center, radius } => z.dist(*center) < *radius - tol,
            Hole::Polygon { vertices } => {
                let n = vertices.len();
                point_in_polygon(z, vertices) && (0..n).all(|i| segment_nearest(z, vertices[i], vertices[(i + 1) % n]).0 > tol)
            }
            Hole::Puncture { .. } | Hole::Segment { .. } => false,
            Hole::Halfplane { normal, offset } => normal.dot(z) / normal.norm() < *offset - tol,
        }
    }

    /// Whether `z` lies in the closure of the base, up to `tol`.
    pub fn base_closure_contains(&self, z: Point, tol: f64) -> bool {
        match &self.base {
            Base::Disk { center, radius } => z.dist(*center) <= *radius + tol,
            Base::Halfplane { normal, offset } => normal.dot(z) / normal.norm() >= *offset - tol,
            Base::Strip { axis, halfwidth, offset } => {
                let t = match axis {
                    Axis::X => z.y,
                    Axis::Y => z.x,
                };
                (t - offset).abs() <= *halfwidth + tol
            }
            Base::Polygon { vertices } => {
                let n = vertices.len();
                point_in_polygon(z, vertices) || (0..n).any(|i| segment_nearest(z, vertices[i], vertices[(i + 1) % n]).0 <= tol)
            }
            Base::Plane => true,
        }
    }

    pub fn contains(&self, z: Point) -> bool {
        z.is_finite() && self.base_contains(z) && !self.holes.iter().any(|h| Self::hole_contains(h, z))
    }

    /// Boundary primitives: base pieces first, then hole pieces.
    pub fn primitives(&self) -> Vec<Prim> {
        let mut out = Vec::new();
        match &self.base {
            Base::Disk { center, radius } => out.push(Prim::Circle { c: *center, r: *radius, inner: true }),
            Base::Halfplane { normal, offset } => {
                let n = normal.unit();
                out.push(Prim::Line { n, d: *offset });
            }
            Base::Strip { axis, halfwidth, offset } => {
                let e = match axis {
                    Axis::X => Point::new(0.0, 1.0),
                    Axis::Y => Point::new(1.0, 0.0),
                };
                out.push(Prim::Line { n: e, d: offset - halfwidth });
                out.push(Prim::Line { n: -e, d: -(offset + halfwidth) });
            }
            Base::Polygon { vertices } => {
                let v = ccw(vertices);
                let n = v.len();
                for i in 0..n {
                    out.push(Prim::Seg { a: v[i], b: v[(i + 1) % n], slit: false });
                }
            }
            Base::Plane => {}
        }
        for h in &self.holes {
            match h {
                Hole::Disk { center, radius } => out.push(Prim::Circle { c: *center, r: *radius, inner: false }),
                Hole::Polygon { vertices } => {
                    // clockwise so that the domain is on the left
                    let mut v = ccw(vertices);
                    v.reverse();
                    let n = v.len();
                    for i in 0..n {
                        out.push(Prim::Seg { a: v[i], b: v[(i + 1) % n], slit: false });
                    }
                }
                Hole::Puncture { point } => out.push(Prim::Pt { p: *point }),
                Hole::Segment { from, to } => out.push(Prim::Seg { a: *from, b: *to, slit: true }),
                Hole::Halfplane { normal, offset } => {
                    let n = normal.unit();
                    out.push(Prim::Line { n, d: *offset });
                }
            }
        }
        out
    }

    fn dist_raw(&self, z: Point) -> f64 {
        self.primitives().iter().map(|p| p.nearest(z).0).fold(f64::INFINITY, f64::min)
    }

    /// Exact distance to the boundary (min over primitives).
    pub fn dist_to_boundary(&self, z: Point) -> Result<f64> {
        if !self.contains(z) {
            return Err(Error::PointOutsideDomain(z.x, z.y));
        }
        Ok(self.dist_raw(z))
    }

    /// All primitives realizing the distance within relative tolerance `tol`,
    /// with their nearest points.
    pub fn nearest_points(&self, z: Point, tol: f64) -> Result<Vec<(Prim, Point)>> {
        let d = self.dist_to_boundary(z)?;
        Ok(self
            .primitives()
            .into_iter()
            .filter_map(|p| {
                let (dp, q) = p.nearest(z);
                (dp <= d * (1.0 + tol) + 1e-300).then_some((p, q))
            })
            .collect())
    }

    /// A length scale of the boundary features.
    pub fn scale(&self) -> f64 {
        let mut s: f64 = 0.0;
        let mut pts: Vec<Point> = Vec::new();
        match &self.base {
            Base::Disk { center, radius } => {
                s = s.max(*radius);
                pts.push(*center);
            }
            Base::Strip { halfwidth, .. } => s = s.max(*halfwidth),
            Base::Polygon { vertices } => pts.extend(vertices.iter().copied()),
            _ => {}
        }
        for h in &self.holes {
            match h {
                Hole::Disk { center, radius } => {
                    s = s.max(*radius);
                    pts.push(*center);
                }
                Hole::Polygon { vertices } => pts.extend(vertices.iter().copied()),
                Hole::Puncture { point } => pts.push(*point),
                Hole::Segment { from, to } => {
                    pts.push(*from);
                    pts.push(*to);
                }
                Hole::Halfplane { .. } => {}
            }
        }
        for a in &pts {
            for b in &pts {
                s = s.max(a.dist(*b));
            }
        }
        if s > 0.0 {
            s
        } else {
            1.0
        }
    }

    /// A reference point near the boundary features.
    pub fn anchor(&self) -> Point {
        let mut pts: Vec<Point> = Vec::new();
        match &self.base {
            Base::Disk { center, .. } => pts.push(*center),
            Base::Polygon { vertices } => pts.extend(vertices.iter().copied()),
            _ => {}
        }
        for h in &self.holes {
            match h {
                Hole::Disk { center, .. } => pts.push(*center),
                Hole::Polygon { vertices } => pts.extend(vertices.iter().copied()),
                Hole::Puncture { point } => pts.push(*point),
                Hole::Segment { from, to } => {
                    pts.push(*from);
                    pts.push(*to);
                }
                Hole::Halfplane { .. } => {}
            }
        }
        if pts.is_empty() {
            return Point::ORIGIN;
        }
        let n = pts.len() as f64;
        pts.iter().fold(Point::ORIGIN, |a, &b| a + b) / n
    }

    /// Whether the boundary point `p` of a primitive belongs to the boundary
    /// of the domain, i.e. is not swallowed by another piece.
    pub(crate) fn keeps_boundary_point(&self, p: Point, hole_index: Option<usize>) -> bool {
        let tol = 1e-12 * (1.0 + p.norm());
        if hole_index.is_some() && !self.base_closure_contains(p, tol) {
            return false;
        }
        self.holes.iter().enumerate().all(|(i, h)| Some(i) == hole_index || !Self::hole_interior_contains(h, p, tol))
    }

    /// Index of the hole a primitive came from, `None` for base pieces.
    pub(crate) fn prim_owners(&self) -> Vec<Option<usize>> {
        let nb = match &self.base {
            Base::Disk { .. } | Base::Halfplane { .. } => 1,
            Base::Strip { .. } => 2,
            Base::Polygon { vertices } => vertices.len(),
            Base::Plane => 0,
        };
        let mut out = vec![None; nb];
        for (i, h) in self.holes.iter().enumerate() {
            let k = match h {
                Hole::Polygon { vertices } => vertices.len(),
                _ => 1,
            };
            out.extend(std::iter::repeat_n(Some(i), k));
        }
        out
    }
}

fn square(h: f64) -> Vec<Point> {
    vec![Point::new(-h, -h), Point::new(h, -h), Point::new(h, h), Point::new(-h, h)]
}
