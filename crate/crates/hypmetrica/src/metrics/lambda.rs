use super::MetricValue;
use crate::error::{Error, Result};
use crate::geometry::{point_in_polygon, sample_boundary_focused, segment_nearest, Base, BoundarySampling, DomainSpec, Hole, PathPolyline, Point, Prim};
use ordered_float::OrderedFloat;
use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::f64::consts::TAU;

fn signed_area(v: &[Point]) -> f64 {
    let n = v.len();
    (0..n).map(|i| v[i].cross(v[(i + 1) % n])).sum::<f64>() / 2.0
}

/// Obstacles met by straight segments in the closure of the domain.
struct Obstacles {
    spec: DomainSpec,
    slits: Vec<(Point, Point)>,
    polys: Vec<Vec<Point>>,
    disks: Vec<(Point, f64)>,
    base_poly: Option<Vec<Point>>,
    tol: f64,
}

impl Obstacles {
    fn new(d: &DomainSpec) -> Self {
        let mut o = Obstacles { spec: d.clone(), slits: vec![], polys: vec![], disks: vec![], base_poly: None, tol: 1e-11 * d.scale() };
        if let Base::Polygon { vertices } = &d.base {
            o.base_poly = Some(vertices.clone());
        }
        for h in &d.holes {
            match h {
                Hole::Disk { center, radius } => o.disks.push((*center, *radius)),
                Hole::Polygon { vertices } => o.polys.push(vertices.clone()),
                Hole::Segment { from, to } => o.slits.push((*from, *to)),
                Hole::Puncture { .. } | Hole::Halfplane { .. } => {}
            }
        }
        o
    }

    /// In the closure of the domain.
    fn valid_node(&self, p: Point) -> bool {
        p.is_finite()
            && self.spec.base_closure_contains(p, self.tol)
            && !self.spec.holes.iter().any(|h| DomainSpec::hole_interior_contains(h, p, self.tol))
    }

    /// Splits `[p, q]` at its crossings with the polygon edges and returns
    /// the midpoints of the pieces.
    fn piece_midpoints(p: Point, q: Point, poly: &[Point]) -> Vec<Point> {
        let n = poly.len();
        let mut ts = vec![0.0, 1.0];
        for i in 0..n {
            let a = poly[i];
            let b = poly[(i + 1) % n];
            if let Some((s, t)) = crate::geometry::line_intersection(p, q, a, b) {
                if (0.0..=1.0).contains(&s) && (-1e-12..=1.0 + 1e-12).contains(&t) {
                    ts.push(s);
                }
            }
            for v in [a, b] {
                let e = q - p;
                let l2 = e.norm2();
                if l2 > 0.0 {
                    let s = (v - p).dot(e) / l2;
                    if (0.0..=1.0).contains(&s) {
                        ts.push(s);
                    }
                }
            }
        }
        ts.sort_by(|a, b| a.total_cmp(b));
        ts.windows(2).filter(|w| w[1] - w[0] > 1e-12).map(|w| p.lerp(q, 0.5 * (w[0] + w[1]))).collect()
    }

    /// Whether the open segment `(p, q)` avoids the holes and stays in the
    /// closed base; grazing the boundary is allowed.
    fn visible(&self, p: Point, q: Point) -> bool {
        let e = q - p;
        let len = e.norm();
        if len == 0.0 {
            return true;
        }
        for &(a, b) in &self.slits {
            let s = b - a;
            let o1 = s.cross(p - a);
            let o2 = s.cross(q - a);
            let o3 = e.cross(a - p);
            let o4 = e.cross(b - p);
            let eps = self.tol * (s.norm() + len);
            if ((o1 > eps && o2 < -eps) || (o1 < -eps && o2 > eps)) && ((o3 > eps && o4 < -eps) || (o3 < -eps && o4 > eps)) {
                return false;
            }
        }
        for &(c, r) in &self.disks {
            if segment_nearest(c, p, q).0 < r - 1e-9 * r {
                return false;
            }
        }
        for poly in &self.polys {
            let n = poly.len();
            for m in Self::piece_midpoints(p, q, poly) {
                if point_in_polygon(m, poly) && (0..n).all(|i| segment_nearest(m, poly[i], poly[(i + 1) % n]).0 > self.tol) {
                    return false;
                }
            }
        }
        if let Some(poly) = &self.base_poly {
            for m in Self::piece_midpoints(p, q, poly) {
                if !self.spec.base_closure_contains(m, self.tol) {
                    return false;
                }
            }
        }
        true
    }

    fn arc_ok(&self, k: usize, a0: f64, sweep: f64) -> bool {
        let (c, r) = self.disks[k];
        (1..8).all(|i| {
            let p = c + Point::polar(a0 + sweep * i as f64 / 8.0) * r;
            self.valid_node(p)
        })
    }

    /// Corners a shortest path may bend around.
    fn corners(&self) -> Vec<Point> {
        let mut out = Vec::new();
        for poly in &self.polys {
            out.extend(poly.iter().copied().filter(|&v| self.valid_node(v)));
        }
        if let Some(poly) = &self.base_poly {
            let mut v = poly.clone();
            if signed_area(&v) < 0.0 {
                v.reverse();
            }
            let n = v.len();
            for i in 0..n {
                let (a, b, c) = (v[(i + n - 1) % n], v[i], v[(i + 1) % n]);
                if (b - a).cross(c - b) < 0.0 && self.valid_node(b) {
                    out.push(b);
                }
            }
        }
        let prims = self.spec.primitives();
        for &(a, b) in &self.slits {
            for v in [a, b] {
                // a slit end resting on other boundary is not a turning point
                let touches = prims.iter().any(|p| match p {
                    Prim::Seg { a: pa, b: pb, slit: true } if (*pa == a && *pb == b) => false,
                    _ => p.nearest(v).0 <= self.tol,
                });
                if !touches && self.valid_node(v) {
                    out.push(v);
                }
            }
        }
        out
    }
}

/// A boundary sample used as a path endpoint. Slit samples carry the side
/// they are approached from.
#[derive(Debug, Clone, Copy)]
struct Target {
    p: Point,
    slit: Option<(Point, Point, i8)>,
}

#[derive(Debug, Clone, Copy)]
struct Edge {
    to: usize,
    w: f64,
    /// Disk index, start angle and signed sweep for arc edges.
    arc: Option<(usize, f64, f64)>,
}

/// Visibility graph for intrinsic (inner Euclidean) path lengths.
///
/// Nodes are the sources, the corners of polygonal boundary pieces, slit
/// tips, tangent points on disk holes and the boundary targets. Targets only
/// receive edges. Paths are exact: straight segments, tangents and arcs.
pub struct LambdaGraph {
    nodes: Vec<Point>,
    adj: Vec<Vec<Edge>>,
    sources: usize,
    targets: std::ops::Range<usize>,
    disks: Vec<(Point, f64)>,
}

impl LambdaGraph {
    /// Graph over the given sources and the samples of `targets`.
    pub fn new(domain: &DomainSpec, sources: &[Point], targets: Option<&BoundarySampling>) -> Result<Self> {
        let obs = Obstacles::new(domain);
        for &s in sources {
            if !obs.valid_node(s) {
                return Err(Error::PointOutsideDomain(s.x, s.y));
            }
        }
        let prims = domain.primitives();
        let mut tg = Vec::new();
        if let Some(s) = targets {
            for i in 0..s.len() {
                let slit = match prims[s.prim[i]] {
                    Prim::Seg { a, b, slit: true } => Some((a, b, s.side[i])),
                    _ => None,
                };
                tg.push(Target { p: s.points[i], slit });
            }
        }
        let corners = obs.corners();
        let mut nodes: Vec<Point> = sources.to_vec();
        nodes.extend(corners.iter().copied());
        let free = nodes.len();
        nodes.extend(tg.iter().map(|t| t.p));
        let n_targets = nodes.len();
        let mut adj: Vec<Vec<Edge>> = vec![Vec::new(); nodes.len()];
        let seg = |b: usize, w: f64| Edge { to: b, w, arc: None };
        let side_ok = |p: Point, t: &Target| match t.slit {
            Some((a, b, side)) if side != 0 => {
                let c = (b - a).cross(p - a);
                c * side as f64 >= -obs.tol * (b - a).norm()
            }
            _ => true,
        };

        for i in 0..free {
            for j in i + 1..free {
                if obs.visible(nodes[i], nodes[j]) {
                    let w = nodes[i].dist(nodes[j]);
                    adj[i].push(seg(j, w));
                    adj[j].push(seg(i, w));
                }
            }
            for (k, t) in tg.iter().enumerate() {
                let j = free + k;
                if side_ok(nodes[i], t) && obs.visible(nodes[i], t.p) {
                    adj[i].push(seg(j, nodes[i].dist(t.p)));
                }
            }
        }

        // rings of points on each disk hole, with their angles
        let mut rings: Vec<Vec<(f64, usize)>> = vec![Vec::new(); obs.disks.len()];
        let push_node = |nodes: &mut Vec<Point>, adj: &mut Vec<Vec<Edge>>, p: Point| {
            nodes.push(p);
            adj.push(Vec::new());
            nodes.len() - 1
        };
        for (k, &(c, r)) in obs.disks.iter().enumerate() {
            for i in 0..n_targets {
                let p = nodes[i];
                let d = p.dist(c);
                let on_this = i >= free && (d - r).abs() <= obs.tol.max(1e-12 * r);
                if on_this {
                    rings[k].push(((p - c).angle(), i));
                    continue;
                }
                if d <= r {
                    continue;
                }
                let u = (p - c) / d;
                let beta = (r / d).acos();
                for sgn in [1.0, -1.0] {
                    let (sb, cb) = (sgn * beta).sin_cos();
                    let dir = Point::new(u.x * cb - u.y * sb, u.x * sb + u.y * cb);
                    let t = c + dir * r;
                    if !obs.valid_node(t) || !obs.visible(p, t) {
                        continue;
                    }
                    if i >= free && !side_ok(t, &tg[i - free]) {
                        continue;
                    }
                    let j = push_node(&mut nodes, &mut adj, t);
                    rings[k].push((dir.angle(), j));
                    let w = p.dist(t);
                    adj[j].push(seg(i, w));
                    if i < free {
                        adj[i].push(seg(j, w));
                    }
                }
            }
        }
        for k in 0..obs.disks.len() {
            for l in k + 1..obs.disks.len() {
                let (c1, r1) = obs.disks[k];
                let (c2, r2) = obs.disks[l];
                let dv = c2 - c1;
                let dd = dv.norm();
                if dd == 0.0 {
                    continue;
                }
                let u = dv / dd;
                for kk in [1.0, -1.0] {
                    let rr = (r1 - kk * r2) / dd;
                    if rr.abs() > 1.0 {
                        continue;
                    }
                    let h = (1.0 - rr * rr).sqrt();
                    for sgn in [1.0, -1.0] {
                        let nrm = u * rr + u.perp() * (h * sgn);
                        let t1 = c1 + nrm * r1;
                        let t2 = c2 + nrm * (kk * r2);
                        if !obs.valid_node(t1) || !obs.valid_node(t2) || !obs.visible(t1, t2) {
                            continue;
                        }
                        let a = push_node(&mut nodes, &mut adj, t1);
                        let b = push_node(&mut nodes, &mut adj, t2);
                        rings[k].push(((t1 - c1).angle(), a));
                        rings[l].push(((t2 - c2).angle(), b));
                        let w = t1.dist(t2);
                        adj[a].push(seg(b, w));
                        adj[b].push(seg(a, w));
                    }
                }
            }
        }
        for (k, ring) in rings.iter_mut().enumerate() {
            ring.sort_by(|a, b| a.0.total_cmp(&b.0));
            let is_target = |i: usize| (free..n_targets).contains(&i);
            let hubs: Vec<usize> = (0..ring.len()).filter(|&q| !is_target(ring[q].1)).collect();
            let r = obs.disks[k].1;
            let ccw = |a0: f64, a1: f64| (a1 - a0).rem_euclid(TAU);
            let link = |adj: &mut Vec<Vec<Edge>>, from: (f64, usize), to: (f64, usize), sweep: f64| {
                if sweep.abs() > 0.0 && obs.arc_ok(k, from.0, sweep) {
                    adj[from.1].push(Edge { to: to.1, w: r * sweep.abs(), arc: Some((k, from.0, sweep)) });
                }
            };
            if hubs.len() > 1 {
                for hi in 0..hubs.len() {
                    let a = ring[hubs[hi]];
                    let b = ring[hubs[(hi + 1) % hubs.len()]];
                    let s = ccw(a.0, b.0);
                    link(&mut adj, a, b, s);
                    link(&mut adj, b, a, -s);
                }
            }
            // every target on the circle is reached from the nearest hub on each side
            for q in 0..ring.len() {
                let t = ring[q];
                if !is_target(t.1) {
                    continue;
                }
                let n = ring.len();
                for dir in [1isize, -1] {
                    for step in 1..n {
                        let idx = ((q as isize + dir * step as isize).rem_euclid(n as isize)) as usize;
                        let h = ring[idx];
                        if is_target(h.1) {
                            continue;
                        }
                        let sweep = if dir == 1 { -ccw(t.0, h.0) } else { ccw(h.0, t.0) };
                        link(&mut adj, h, t, sweep);
                        break;
                    }
                }
            }
        }
        Ok(LambdaGraph { nodes, adj, sources: sources.len(), targets: free..n_targets, disks: obs.disks })
    }

    fn dijkstra(&self, src: usize) -> (Vec<f64>, Vec<Option<(usize, Edge)>>) {
        let n = self.nodes.len();
        let mut dist = vec![f64::INFINITY; n];
        let mut prev = vec![None; n];
        let mut heap = BinaryHeap::new();
        dist[src] = 0.0;
        heap.push(Reverse((OrderedFloat(0.0), src)));
        while let Some(Reverse((OrderedFloat(d), a))) = heap.pop() {
            if d > dist[a] {
                continue;
            }
            for e in &self.adj[a] {
                let nd = d + e.w;
                if nd < dist[e.to] {
                    dist[e.to] = nd;
                    prev[e.to] = Some((a, *e));
                    heap.push(Reverse((OrderedFloat(nd), e.to)));
                }
            }
        }
        (dist, prev)
    }

    /// Intrinsic lengths from source `i` to every target, in sample order.
    pub fn target_lengths(&self, i: usize) -> Vec<f64> {
        assert!(i < self.sources);
        let (dist, _) = self.dijkstra(i);
        dist[self.targets.clone()].to_vec()
    }

    /// Intrinsic length between sources `i` and `j` with a shortest path.
    pub fn source_length(&self, i: usize, j: usize) -> (f64, PathPolyline) {
        let (dist, prev) = self.dijkstra(i);
        let mut pts = vec![self.nodes[j]];
        let mut cur = j;
        while let Some((p, e)) = prev[cur] {
            if let Some((k, a0, sweep)) = e.arc {
                let (c, r) = self.disks[k];
                let steps = ((sweep.abs() / 0.05).ceil() as usize).max(2);
                for s in (1..steps).rev() {
                    pts.push(c + Point::polar(a0 + sweep * s as f64 / steps as f64) * r);
                }
            }
            pts.push(self.nodes[p]);
            cur = p;
        }
        pts.reverse();
        (dist[j], PathPolyline::new(pts))
    }
}

/// Intrinsic distance `λ(x, y)`: the infimum of Euclidean lengths of arcs
/// in the domain. Endpoints may be boundary points.
pub fn lambda_length(domain: &DomainSpec, x: Point, y: Point) -> Result<(MetricValue, PathPolyline)> {
    let g = LambdaGraph::new(domain, &[x, y], None)?;
    let (d, path) = g.source_length(0, 1);
    if !d.is_finite() {
        return Err(Error::Disconnected);
    }
    Ok((MetricValue::exact(d), path))
}

/// λ-Apollonian distance: the Apollonian construction with intrinsic
/// lengths to accessible boundary points. The trace reports `m/2` and `m`.
pub fn lambda_apollonian_distance(domain: &DomainSpec, x: Point, y: Point, m: usize) -> Result<MetricValue> {
    for z in [x, y] {
        if !domain.contains(z) {
            return Err(Error::PointOutsideDomain(z.x, z.y));
        }
    }
    if x == y {
        return Ok(MetricValue::exact(0.0));
    }
    let mut trace = Vec::new();
    for mm in [m / 2, m] {
        let s = sample_boundary_focused(domain, mm.max(16), &[x, y])?;
        let g = LambdaGraph::new(domain, &[x, y], Some(&s))?;
        if !g.source_length(0, 1).0.is_finite() {
            return Err(Error::Disconnected);
        }
        let lx = g.target_lengths(0);
        let ly = g.target_lengths(1);
        let base = if s.includes_infinity { 0.0 } else { f64::NEG_INFINITY };
        let (mut s1, mut s2) = (base, base);
        for (a, b) in lx.iter().zip(&ly) {
            if !(a.is_finite() && b.is_finite()) {
                continue;
            }
            let r = (a / b).ln();
            s1 = s1.max(r);
            s2 = s2.max(-r);
        }
        if !(s1 + s2).is_finite() {
            return Err(Error::DegenerateBoundary);
        }
        trace.push((mm as f64, (s1 + s2).max(0.0)));
    }
    Ok(MetricValue::from_trace(trace))
}
