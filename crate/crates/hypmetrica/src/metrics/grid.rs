use super::MetricValue;
use crate::error::{Error, Result};
use crate::geometry::{Base, Boundary, DomainSpec, Hole, PathPolyline, Point};
use ordered_float::OrderedFloat;
use serde::{Deserialize, Serialize};
use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::f64::consts::FRAC_1_SQRT_2;

/// Path metrics computed by shortest paths.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GeodesicMetric {
    /// Density `1/δ`.
    Quasihyperbolic,
    /// Directed density `1/(2r₊) + 1/(2r₋)`.
    ApollonianInner,
}

impl GeodesicMetric {
    #[inline]
    fn density(self, b: &Boundary, p: Point, dir: Point) -> f64 {
        match self {
            GeodesicMetric::Quasihyperbolic => 1.0 / b.delta(p),
            GeodesicMetric::ApollonianInner => b.directed_density(p, dir),
        }
    }

    /// Simpson rule along the segment `[p, q]`.
    #[inline]
    fn segment_cost(self, b: &Boundary, p: Point, q: Point) -> f64 {
        let d = q - p;
        let len = d.norm();
        if len == 0.0 {
            return 0.0;
        }
        let u = d / len;
        let m = p.lerp(q, 0.5);
        len / 6.0 * (self.density(b, p, u) + 4.0 * self.density(b, m, u) + self.density(b, q, u))
    }
}

/// Resolution controls for grid geodesics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeodesicOptions {
    /// Cells per local boundary distance at the first level; doubles per level.
    pub kappa: f64,
    /// Maximum number of refinement levels.
    pub levels: usize,
    /// Relative change between levels that stops refinement.
    pub tol: f64,
    /// Cells closer to the boundary than `floor_factor * min(δ(x) + s|z - x|, δ(y) + s|z - y|)`
    /// are dropped, with `s = floor_slope`.
    pub floor_factor: f64,
    pub floor_slope: f64,
    /// Block relaxation cycles after the finest stage.
    pub sweeps: usize,
    pub max_nodes: usize,
}

impl Default for GeodesicOptions {
    fn default() -> Self {
        GeodesicOptions { kappa: 4.0, levels: 3, tol: 5e-3, floor_factor: 0.25, floor_slope: 0.5, sweeps: 1, max_nodes: 400_000 }
    }
}

impl GeodesicOptions {
    /// Single-level options for bulk evaluation.
    pub fn fast() -> Self {
        GeodesicOptions { levels: 1, ..Self::default() }
    }

    /// Single level without the final block relaxation; values run up to a
    /// few percent high near nonsmooth ridges of the density.
    pub fn bulk() -> Self {
        GeodesicOptions { levels: 1, sweeps: 0, ..Self::default() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeodesicResult {
    pub value: MetricValue,
    pub path: PathPolyline,
}

const NONE: u32 = u32::MAX;
const REACH: f64 = 2.3;

#[derive(Debug, Clone, Copy)]
struct Cell {
    c: Point,
    h: f64,
    kids: [u32; 4],
    leaf: u32,
    /// Largest leaf side in the subtree.
    hmax: f64,
}

#[derive(Debug, Clone, Copy)]
struct Node {
    p: Point,
    h: f64,
    delta: f64,
}

/// Minimal boundary distance kept in the grid; grows away from the endpoints.
#[derive(Debug, Clone, Copy)]
struct Floor {
    x: Point,
    dx: f64,
    y: Point,
    dy: f64,
    f: f64,
    s: f64,
}

impl Floor {
    #[inline]
    fn at(&self, p: Point) -> f64 {
        self.f * (self.dx + self.s * p.dist(self.x)).min(self.dy + self.s * p.dist(self.y))
    }
}

struct Tree {
    cells: Vec<Cell>,
    nodes: Vec<Node>,
    lo: Point,
    side: f64,
}

impl Tree {
    fn build(b: &Boundary, lo: Point, side: f64, kappa: f64, floor: &Floor, max_nodes: usize) -> Result<Tree> {
        let root = Cell { c: lo + Point::new(side / 2.0, side / 2.0), h: side, kids: [NONE; 4], leaf: NONE, hmax: 0.0 };
        let mut cells = vec![root];
        let mut nodes = Vec::new();
        let mut stack = vec![0usize];
        while let Some(i) = stack.pop() {
            let Cell { c, h, .. } = cells[i];
            let d = b.delta(c);
            let inside = b.contains(c);
            let hd = h * FRAC_1_SQRT_2;
            let fl = floor.at(c);
            if d + hd < fl - floor.f * floor.s * hd || (!inside && d > hd) {
                continue;
            }
            if h <= d.max(fl) / kappa {
                if inside && d >= fl {
                    cells[i].leaf = nodes.len() as u32;
                    cells[i].hmax = h;
                    nodes.push(Node { p: c, h, delta: d });
                    if nodes.len() > max_nodes {
                        return Err(Error::ResolutionTooCoarse(format!("more than {max_nodes} grid nodes needed")));
                    }
                }
                continue;
            }
            let q = h / 4.0;
            for (k, off) in [(-q, -q), (q, -q), (-q, q), (q, q)].into_iter().enumerate() {
                let j = cells.len();
                cells.push(Cell { c: c + Point::new(off.0, off.1), h: h / 2.0, kids: [NONE; 4], leaf: NONE, hmax: 0.0 });
                cells[i].kids[k] = j as u32;
                stack.push(j);
            }
        }
        // children always follow their parent
        for i in (0..cells.len()).rev() {
            let mut m = cells[i].hmax;
            for k in cells[i].kids {
                if k != NONE {
                    m = m.max(cells[k as usize].hmax);
                }
            }
            cells[i].hmax = m;
        }
        Ok(Tree { cells, nodes, lo, side })
    }

    /// Leaves `b` with `|p - b| <= REACH * max(h, h_b)`.
    fn neighbors(&self, p: Point, h: f64, out: &mut Vec<u32>) {
        out.clear();
        let mut stack = vec![0u32];
        while let Some(i) = stack.pop() {
            let c = &self.cells[i as usize];
            if c.hmax == 0.0 {
                continue;
            }
            let r = REACH * h.max(c.hmax);
            let dx = ((p.x - c.c.x).abs() - c.h / 2.0).max(0.0);
            let dy = ((p.y - c.c.y).abs() - c.h / 2.0).max(0.0);
            if dx * dx + dy * dy > r * r {
                continue;
            }
            if c.leaf != NONE {
                let n = &self.nodes[c.leaf as usize];
                let rr = REACH * h.max(n.h);
                if n.p.dist2(p) <= rr * rr && n.p != p {
                    out.push(c.leaf);
                }
            } else {
                for k in c.kids {
                    if k != NONE {
                        stack.push(k);
                    }
                }
            }
        }
    }

    fn near_border(&self, n: &Node) -> bool {
        let m = 2.0 * n.h;
        n.p.x - self.lo.x < m || n.p.y - self.lo.y < m || self.lo.x + self.side - n.p.x < m || self.lo.y + self.side - n.p.y < m
    }
}

/// Whether the segment `[a, b]` stays in the domain, by marching through
/// boundary-free disks.
fn admissible(bd: &Boundary, a: Point, da: f64, b: Point, db: f64, floor: &Floor) -> bool {
    let len = a.dist(b);
    if len < da.max(db) {
        return true;
    }
    let u = (b - a) / len;
    let mut t = 0.0;
    let mut d = da;
    let min_step = 0.05 * floor.at(a).min(floor.at(b));
    while len - t >= d {
        if d < min_step {
            return false;
        }
        t += 0.9 * d;
        let p = a + u * t;
        d = bd.delta(p);
        if !bd.contains(p) {
            return false;
        }
    }
    true
}

type Box2 = (Point, Point);

/// Bounding boxes of a bounded base and of the bounded holes.
fn feature_boxes(d: &DomainSpec) -> (Option<Box2>, Option<Box2>) {
    fn span(pts: &[Point]) -> Option<Box2> {
        let mut it = pts.iter();
        let f = *it.next()?;
        Some(it.fold((f, f), |(lo, hi), p| (Point::new(lo.x.min(p.x), lo.y.min(p.y)), Point::new(hi.x.max(p.x), hi.y.max(p.y)))))
    }
    let disk = |c: Point, r: f64| [c - Point::new(r, r), c + Point::new(r, r)];
    let base = match &d.base {
        Base::Disk { center, radius } => span(&disk(*center, *radius)),
        Base::Polygon { vertices } => span(vertices),
        _ => None,
    };
    let mut pts = Vec::new();
    for h in &d.holes {
        match h {
            Hole::Disk { center, radius } => pts.extend(disk(*center, *radius)),
            Hole::Polygon { vertices } => pts.extend(vertices.iter().copied()),
            Hole::Puncture { point } => pts.push(*point),
            Hole::Segment { from, to } => pts.extend([*from, *to]),
            Hole::Halfplane { .. } => {}
        }
    }
    (base, span(&pts))
}

struct Level {
    value: f64,
    path: Vec<Point>,
}

fn shortest(bd: &Boundary, x: Point, y: Point, metric: GeodesicMetric, kappa: f64, opts: &GeodesicOptions) -> Result<Vec<Point>> {
    let dx = bd.delta(x);
    let dy = bd.delta(y);
    if x.dist(y) < dx.max(dy) {
        return Ok(vec![x, y]);
    }
    let mut floor = Floor { x, dx, y, dy, f: opts.floor_factor, s: opts.floor_slope };
    let (base_box, hole_box) = feature_boxes(&bd.spec);
    let hole_diam = hole_box.map_or(0.0, |(a, b)| a.dist(b));
    let mut pad = 2.0 * dx.max(dy) + 0.5 * x.dist(y) + 0.25 * hole_diam;
    let mut last_path = None;
    for _attempt in 0..6 {
        let mut lo = Point::new(x.x.min(y.x), x.y.min(y.y));
        let mut hi = Point::new(x.x.max(y.x), x.y.max(y.y));
        if let Some((a, b)) = hole_box {
            lo = Point::new(lo.x.min(a.x), lo.y.min(a.y));
            hi = Point::new(hi.x.max(b.x), hi.y.max(b.y));
        }
        lo = lo - Point::new(pad, pad);
        hi += Point::new(pad, pad);
        if let Some((a, b)) = base_box {
            lo = Point::new(lo.x.max(a.x), lo.y.max(a.y));
            hi = Point::new(hi.x.min(b.x), hi.y.min(b.y));
        }
        let side = (hi.x - lo.x).max(hi.y - lo.y) * (1.0 + 1e-9);
        let lo = lo.lerp(hi, 0.5) - Point::new(side / 2.0, side / 2.0);
        let tree = Tree::build(bd, lo, side, kappa, &floor, opts.max_nodes)?;
        match dijkstra(bd, &tree, &floor, metric, kappa) {
            Some((path, touches)) => {
                if !touches || base_box.is_some() {
                    return Ok(path);
                }
                last_path = Some(path);
                pad *= 4.0;
            }
            None => {
                pad *= 4.0;
                floor.f *= 0.5;
            }
        }
    }
    last_path.ok_or(Error::Disconnected)
}

fn dijkstra(bd: &Boundary, tree: &Tree, floor: &Floor, metric: GeodesicMetric, kappa: f64) -> Option<(Vec<Point>, bool)> {
    let Floor { x, dx, y, dy, .. } = *floor;
    let n = tree.nodes.len();
    let (sx, sy) = (n, n + 1);
    let node = |i: usize| -> Node {
        if i == sx {
            Node { p: x, h: dx / kappa, delta: dx }
        } else if i == sy {
            Node { p: y, h: dy / kappa, delta: dy }
        } else {
            tree.nodes[i]
        }
    };
    let qh = metric == GeodesicMetric::Quasihyperbolic;
    let cost = |a: &Node, b: &Node| -> f64 {
        if qh {
            let m = a.p.lerp(b.p, 0.5);
            a.p.dist(b.p) / 6.0 * (1.0 / a.delta + 4.0 / bd.delta(m) + 1.0 / b.delta)
        } else {
            // midpoint rule keeps the search cheap; relaxation refines
            let e = b.p - a.p;
            let len = e.norm();
            len * metric.density(bd, a.p.lerp(b.p, 0.5), e / len)
        }
    };
    let mut dist = vec![f64::INFINITY; n + 2];
    let mut prev = vec![usize::MAX; n + 2];
    let mut done = vec![false; n + 2];
    let mut heap = BinaryHeap::new();
    dist[sx] = 0.0;
    heap.push(Reverse((OrderedFloat(0.0), sx)));
    let mut buf = Vec::new();
    let ny = node(sy);
    while let Some(Reverse((OrderedFloat(d), a))) = heap.pop() {
        if done[a] {
            continue;
        }
        done[a] = true;
        if a == sy {
            break;
        }
        let na = node(a);
        tree.neighbors(na.p, na.h, &mut buf);
        let mut cand: Vec<usize> = buf.iter().map(|&i| i as usize).collect();
        let rr = REACH * na.h.max(ny.h);
        if na.p.dist2(y) <= rr * rr {
            cand.push(sy);
        }
        for b in cand {
            if done[b] {
                continue;
            }
            let nb = node(b);
            if !admissible(bd, na.p, na.delta, nb.p, nb.delta, floor) {
                continue;
            }
            let nd = d + cost(&na, &nb);
            if nd < dist[b] {
                dist[b] = nd;
                prev[b] = a;
                heap.push(Reverse((OrderedFloat(nd), b)));
            }
        }
    }
    if !done[sy] {
        return None;
    }
    let mut path = vec![y];
    let mut touches = false;
    let mut i = prev[sy];
    while i != sx {
        let nd = tree.nodes[i];
        touches |= tree.near_border(&nd);
        path.push(nd.p);
        i = prev[i];
    }
    path.push(x);
    path.reverse();
    Some((path, touches))
}

/// Inserts vertices until every segment is at most `frac` times the smaller
/// endpoint distance to the boundary.
fn subdivide(bd: &Boundary, pts: &[Point], frac: f64) -> Vec<Point> {
    let mut out = vec![pts[0]];
    for w in pts.windows(2) {
        let (p, q) = (w[0], w[1]);
        let lim = frac * bd.delta(p).min(bd.delta(q));
        let k = (p.dist(q) / lim).ceil().max(1.0) as usize;
        for j in 1..=k {
            out.push(p.lerp(q, j as f64 / k as f64));
        }
    }
    out
}

/// Coarsens a polyline so that consecutive kept vertices are about `frac`
/// boundary distances apart; with `frac < 1` every chord stays in the
/// disk of the earlier endpoint.
fn resample(bd: &Boundary, pts: &[Point], frac: f64) -> Vec<Point> {
    let mut out = vec![pts[0]];
    let mut last = pts[0];
    let mut reach = frac * bd.delta(last);
    for (i, &p) in pts.iter().enumerate().skip(1) {
        let end = i == pts.len() - 1;
        if (end || pts[i + 1].dist(last) > reach)
            && (end || p.dist(last) > 0.0) {
                out.push(p);
                last = p;
                reach = frac * bd.delta(last);
            }
    }
    out
}

fn polyline_cost(bd: &Boundary, metric: GeodesicMetric, pts: &[Point]) -> f64 {
    pts.windows(2).map(|w| metric.segment_cost(bd, w[0], w[1])).sum()
}

const GL5: [(f64, f64); 5] = [
    (0.0, 0.568_888_888_888_888_9),
    (-0.538_469_310_105_683_1, 0.478_628_670_499_366_5),
    (0.538_469_310_105_683_1, 0.478_628_670_499_366_5),
    (-0.906_179_845_938_664, 0.236_926_885_056_189_1),
    (0.906_179_845_938_664, 0.236_926_885_056_189_1),
];

/// Unit tangent at vertex `i` from its neighbours.
#[inline]
fn tangent(pts: &[Point], i: usize) -> Point {
    let n = pts.len();
    let (a, b) = if i == 0 {
        (pts[0], pts[1])
    } else if i == n - 1 {
        (pts[n - 2], pts[n - 1])
    } else {
        (pts[i - 1], pts[i + 1])
    };
    (b - a).unit()
}

/// Gauss-Legendre cost of the cubic Hermite piece between vertices `j` and
/// `j + 1`; infinite if the piece leaves the domain. Chords miss the
/// direction dependence of the Apollonian density, the Hermite pieces do not.
fn piece_cost(bd: &Boundary, metric: GeodesicMetric, pts: &[Point], j: usize) -> f64 {
    piece_cost_with(bd, metric, pts, j, &GL5)
}

const GL3: [(f64, f64); 3] = [(0.0, 8.0 / 9.0), (-0.774_596_669_241_483_4, 5.0 / 9.0), (0.774_596_669_241_483_4, 5.0 / 9.0)];

/// Angle from the arc at `p` to the chord `pq` for the circle through `a`,
/// `p` and `q`: minus the oriented inscribed angle at `a`.
#[inline]
fn inscribed(a: Point, p: Point, q: Point) -> f64 {
    let (u, v) = (p - a, q - a);
    -u.cross(v).atan2(u.dot(v))
}

/// Position and derivative at `s` of the circular arc from `p` to `q`
/// leaving the chord at angle `beta`.
#[inline]
fn arc_at(p: Point, q: Point, beta: f64, s: f64) -> (Point, Point) {
    let c = q - p;
    let half = 0.5;
    let m = p.lerp(q, 0.5);
    let n = c.perp();
    let t = 2.0 * s - 1.0;
    if beta.abs() < 1e-7 {
        let pos = m + c * (half * t) + n * (half * beta * (1.0 - t * t) * 0.5);
        let der = c + n * (-half * beta * 2.0 * t);
        return (pos, der);
    }
    let phi = beta * t;
    let sb = beta.sin();
    let along = half * phi.sin() / sb;
    let across = half * 2.0 * (0.5 * (beta + phi)).sin() * (0.5 * (beta - phi)).sin() / sb;
    let k = beta / sb;
    let pos = m + c * along + n * across;
    let der = c * (k * phi.cos()) - n * (k * phi.sin());
    (pos, der)
}

/// Cost of the piece between vertices `j` and `j + 1`, infinite if it
/// leaves the domain. The piece blends the circles through the neighbouring
/// vertex triples, so circular arcs and segments are reproduced exactly.
fn piece_cost_with(bd: &Boundary, metric: GeodesicMetric, pts: &[Point], j: usize, rule: &[(f64, f64)]) -> f64 {
    let n = pts.len();
    let (p, q) = (pts[j], pts[j + 1]);
    if p == q {
        return 0.0;
    }
    let ba = (j > 0).then(|| inscribed(pts[j - 1], p, q));
    let bb = (j + 2 < n).then(|| inscribed(pts[j + 2], p, q));
    let (ba, bb) = match (ba, bb) {
        (Some(a), Some(b)) => (a, b),
        (Some(a), None) => (a, a),
        (None, Some(b)) => (b, b),
        (None, None) => (0.0, 0.0),
    };
    let mut total = 0.0;
    for &(xi, w) in rule {
        let s = 0.5 * (1.0 + xi);
        let (pa, da) = arc_at(p, q, ba, s);
        let (pb, db) = arc_at(p, q, bb, s);
        let pos = pa * (1.0 - s) + pb * s;
        let der = da * (1.0 - s) + db * s + (pb - pa);
        if !bd.contains(pos) {
            return f64::INFINITY;
        }
        let v = der.norm();
        total += 0.5 * w * metric.density(bd, pos, der / v) * v;
    }
    total
}

fn curve_cost(bd: &Boundary, metric: GeodesicMetric, pts: &[Point]) -> f64 {
    (0..pts.len() - 1).map(|j| piece_cost(bd, metric, pts, j)).sum()
}

/// Cost of every piece under `rule`.
fn piece_costs(bd: &Boundary, metric: GeodesicMetric, pts: &[Point], out: &mut [f64]) {
    for (j, o) in out.iter_mut().enumerate() {
        *o = piece_cost_with(bd, metric, pts, j, &GL3);
    }
}

/// Quasi-Newton descent on the normal offsets of the interior vertices.
///
/// Each vertex moves less than a third of its boundary distance per step, so
/// no piece can jump over a thin boundary component. The gradient is a
/// central difference evaluated four colours at a time; vertex `i` only
/// touches pieces `i - 2 ..= i + 1`.
fn quasi_newton(bd: &Boundary, metric: GeodesicMetric, pts: &mut [Point], iters: usize, rtol: f64) {
    let n = pts.len();
    if n < 3 {
        return;
    }
    let m = n - 2;
    let nrm: Vec<Point> = (1..n - 1).map(|i| tangent(pts, i).perp()).collect();
    let base: Vec<Point> = pts.to_vec();
    let hstep: Vec<f64> = (1..n - 1).map(|i| 1e-6 * pts[i].dist(pts[i - 1]).min(pts[i].dist(pts[i + 1])).max(1e-300)).collect();
    let place = |s: &[f64], out: &mut Vec<Point>| {
        out.clear();
        out.extend_from_slice(&base);
        for k in 0..m {
            out[k + 1] = base[k + 1] + nrm[k] * s[k];
        }
    };
    let mut work = Vec::with_capacity(n);
    let mut costs = vec![0.0; n - 1];
    let mut cp = vec![0.0; n - 1];
    let mut cm = vec![0.0; n - 1];
    let value = |s: &[f64], work: &mut Vec<Point>, costs: &mut [f64]| {
        place(s, work);
        piece_costs(bd, metric, work, costs);
        costs.iter().sum::<f64>()
    };
    let grad = |s: &[f64], g: &mut [f64], work: &mut Vec<Point>, cp: &mut [f64], cm: &mut [f64]| {
        let mut t = s.to_vec();
        for c in 0..4 {
            for sign in [1.0, -1.0] {
                for k in (c..m).step_by(4) {
                    t[k] = s[k] + sign * hstep[k];
                }
                place(&t, work);
                piece_costs(bd, metric, work, if sign > 0.0 { &mut *cp } else { &mut *cm });
                for k in (c..m).step_by(4) {
                    t[k] = s[k];
                }
            }
            for k in (c..m).step_by(4) {
                let i = k + 1;
                let lo = i.saturating_sub(2);
                let hi = (i + 1).min(n - 2);
                let d: f64 = (lo..=hi).map(|j| cp[j] - cm[j]).sum();
                g[k] = d / (2.0 * hstep[k]);
            }
        }
    };
    let mut s = vec![0.0; m];
    let mut f = value(&s, &mut work, &mut costs);
    if !f.is_finite() {
        return;
    }
    let mut g = vec![0.0; m];
    grad(&s, &mut g, &mut work, &mut cp, &mut cm);
    let mut hist: std::collections::VecDeque<(Vec<f64>, Vec<f64>, f64)> = Default::default();
    let mut stall = 0;
    for _ in 0..iters {
        // two-loop recursion
        let mut q = g.clone();
        let mut al = Vec::with_capacity(hist.len());
        for (sv, yv, rho) in hist.iter().rev() {
            let a = rho * dot(sv, &q);
            axpy(-a, yv, &mut q);
            al.push(a);
        }
        if let Some((sv, yv, _)) = hist.back() {
            let gamma = dot(sv, yv) / dot(yv, yv);
            q.iter_mut().for_each(|v| *v *= gamma);
        } else {
            let gn = dot(&g, &g).sqrt();
            let scale = (0..m).map(|k| hstep[k] * 1e4).fold(f64::INFINITY, f64::min);
            q.iter_mut().for_each(|v| *v *= scale / gn.max(1e-300));
        }
        for ((sv, yv, rho), a) in hist.iter().zip(al.iter().rev()) {
            let b = rho * dot(yv, &q);
            axpy(a - b, sv, &mut q);
        }
        let dir: Vec<f64> = q.iter().map(|v| -v).collect();
        let slope = dot(&g, &dir);
        if slope >= 0.0 {
            hist.clear();
            continue;
        }
        // displacement cap relative to the local boundary distance
        let mut step = 1.0f64;
        place(&s, &mut work);
        for k in 0..m {
            let lim = 0.3 * bd.delta(work[k + 1]);
            if dir[k].abs() * step > lim {
                step = lim / dir[k].abs();
            }
        }
        let mut accepted = None;
        for _ in 0..30 {
            let trial: Vec<f64> = s.iter().zip(&dir).map(|(a, d)| a + step * d).collect();
            let ft = value(&trial, &mut work, &mut costs);
            if ft.is_finite() && ft <= f + 1e-4 * step * slope {
                accepted = Some((trial, ft));
                break;
            }
            step *= 0.5;
        }
        let Some((trial, ft)) = accepted else {
            if hist.is_empty() {
                break;
            }
            hist.clear();
            continue;
        };
        let mut gt = vec![0.0; m];
        grad(&trial, &mut gt, &mut work, &mut cp, &mut cm);
        let sv: Vec<f64> = trial.iter().zip(&s).map(|(a, b)| a - b).collect();
        let yv: Vec<f64> = gt.iter().zip(&g).map(|(a, b)| a - b).collect();
        let sy = dot(&sv, &yv);
        if sy > 1e-300 {
            if hist.len() == 8 {
                hist.pop_front();
            }
            hist.push_back((sv, yv, 1.0 / sy));
        }
        let gain = f - ft;
        s = trial;
        g = gt;
        f = ft;
        if gain < rtol * f {
            stall += 1;
            if stall >= 3 {
                break;
            }
        } else {
            stall = 0;
        }
    }
    place(&s, &mut work);
    pts.copy_from_slice(&work);
}

#[inline]
fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[inline]
fn axpy(a: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += a * xi;
    }
}

/// Multilevel relaxation: blocks of consecutive interior vertices, from
/// half the path down to single vertices, move together along their normals
/// by a golden-section step. Block moves escape the plateaus that defeat
/// single-vertex moves when the cost has a total-variation part, as the
/// Apollonian density does near a puncture.
fn relax(bd: &Boundary, metric: GeodesicMetric, pts: &mut [Point], cycles: usize, rtol: f64) {
    let n = pts.len();
    if n < 3 {
        return;
    }
    let mut total = curve_cost(bd, metric, pts);
    let mut buf = Vec::new();
    for _ in 0..cycles {
        let mut b = (n - 2).next_power_of_two();
        while b >= 1 {
            let offsets: &[usize] = if b > 1 { &[0, b / 2] } else { &[0] };
            for &off in offsets {
                let mut i0 = 1 + off;
                while i0 < n - 1 {
                    let i1 = (i0 + b).min(n - 1);
                    move_block(bd, metric, pts, i0, i1, &mut buf);
                    i0 = i1;
                }
            }
            b /= 2;
        }
        let next = curve_cost(bd, metric, pts);
        let gain = total - next;
        total = next;
        if gain < rtol * total.max(1e-300) {
            break;
        }
    }
}

/// Golden-section move of vertices `i0..i1` along their normals.
fn move_block(bd: &Boundary, metric: GeodesicMetric, pts: &mut [Point], i0: usize, i1: usize, buf: &mut Vec<Point>) {
    let n = pts.len();
    let mut tau = f64::INFINITY;
    let mut seg_min = f64::INFINITY;
    let mut nrm = Vec::with_capacity(i1 - i0);
    for i in i0..i1 {
        let (a, v, c) = (pts[i - 1], pts[i], pts[i + 1]);
        let t = c - a;
        if t.norm() == 0.0 {
            return;
        }
        nrm.push(t.perp().unit());
        let seg = v.dist(a).max(v.dist(c));
        seg_min = seg_min.min(seg);
        tau = tau.min((0.45 * bd.delta(v) - seg).min(2.0 * seg * (i1 - i0) as f64));
    }
    if tau <= 0.0 || !tau.is_finite() {
        return;
    }
    // pieces i0-2 ..= i1 depend on the moved vertices through their tangents
    let w0 = i0.saturating_sub(3);
    let w1 = (i1 + 2).min(n - 1);
    let pieces = (i0.saturating_sub(2) - w0)..((i1 + 1).min(n - 1) - w0);
    let mut eval = |s: f64| {
        buf.clear();
        buf.extend_from_slice(&pts[w0..=w1]);
        for (k, i) in (i0..i1).enumerate() {
            buf[i - w0] += nrm[k] * s;
        }
        pieces.clone().map(|j| piece_cost_with(bd, metric, buf, j, &GL3)).sum::<f64>()
    };
    let f0 = eval(0.0);
    let (mut a, mut b) = (-tau, tau);
    let tol = 1e-3 * seg_min.min(tau);
    const R: f64 = 0.618_033_988_749_894_9;
    let mut c = b - R * (b - a);
    let mut d = a + R * (b - a);
    let mut fc = eval(c);
    let mut fd = eval(d);
    while b - a > tol {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - R * (b - a);
            fc = eval(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + R * (b - a);
            fd = eval(d);
        }
    }
    let (s, fs) = if fc <= fd { (c, fc) } else { (d, fd) };
    if fs < f0 {
        for (k, i) in (i0..i1).enumerate() {
            pts[i] += nrm[k] * s;
        }
    }
}

fn solve_level(bd: &Boundary, x: Point, y: Point, metric: GeodesicMetric, kappa: f64, opts: &GeodesicOptions) -> Result<Level> {
    let path = shortest(bd, x, y, metric, kappa, opts)?;
    // coarse to fine: each stage halves the vertex spacing relative to δ
    let mut pts = resample(bd, &path, 0.9);
    let mut frac = 0.9;
    for stage in 0..3 {
        if stage > 0 {
            frac *= 0.5;
            pts = subdivide(bd, &pts, frac);
        }
        let rtol = if stage == 2 { 1e-5 } else { 1e-4 };
        for _ in 0..8 {
            let before = curve_cost(bd, metric, &pts);
            quasi_newton(bd, metric, &mut pts, 300, rtol);
            if before - curve_cost(bd, metric, &pts) < 10.0 * rtol * before {
                break;
            }
        }
        if stage == 0 {
            relax(bd, metric, &mut pts, 2, 1e-4);
            quasi_newton(bd, metric, &mut pts, 300, rtol);
        }
    }
    relax(bd, metric, &mut pts, opts.sweeps, 2.5e-5);
    let mut value = curve_cost(bd, metric, &pts);
    if !value.is_finite() {
        value = polyline_cost(bd, metric, &pts);
    }
    Ok(Level { value, path: pts })
}

/// Path-metric distance by graph search, relaxation and quadrature.
///
/// Each level doubles `kappa`; refinement stops once successive values agree
/// to `opts.tol`. The trace records `(kappa, value)` per level.
pub fn geodesic(domain: &DomainSpec, x: Point, y: Point, metric: GeodesicMetric, opts: &GeodesicOptions) -> Result<GeodesicResult> {
    for z in [x, y] {
        if !domain.contains(z) {
            return Err(Error::PointOutsideDomain(z.x, z.y));
        }
    }
    let bd = Boundary::new(domain);
    if metric == GeodesicMetric::ApollonianInner && bd.infinity_interior {
        return Err(Error::UnsupportedInfinityInDomain);
    }
    if x == y {
        return Ok(GeodesicResult { value: MetricValue::exact(0.0), path: PathPolyline::new(vec![x, y]) });
    }
    let mut trace = Vec::new();
    let mut path = Vec::new();
    let mut kappa = opts.kappa;
    for lvl in 0..opts.levels.max(1) {
        let l = solve_level(&bd, x, y, metric, kappa, opts)?;
        trace.push((kappa, l.value));
        path = l.path;
        if lvl > 0 {
            let prev = trace[lvl - 1].1;
            if (l.value - prev).abs() <= opts.tol * l.value.abs() {
                break;
            }
        }
        kappa *= 2.0;
    }
    Ok(GeodesicResult { value: MetricValue::from_trace(trace), path: PathPolyline::new(path) })
}

/// Quasihyperbolic distance `inf ∫ |dz| / δ(z)` with the computed geodesic.
pub fn quasihyperbolic_distance(domain: &DomainSpec, x: Point, y: Point, opts: &GeodesicOptions) -> Result<(MetricValue, PathPolyline)> {
    let r = geodesic(domain, x, y, GeodesicMetric::Quasihyperbolic, opts)?;
    Ok((r.value, r.path))
}

/// Inner Apollonian distance: the path metric of the directed density.
pub fn apollonian_inner_distance(domain: &DomainSpec, x: Point, y: Point, opts: &GeodesicOptions) -> Result<(MetricValue, PathPolyline)> {
    let r = geodesic(domain, x, y, GeodesicMetric::ApollonianInner, opts)?;
    Ok((r.value, r.path))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arc_pieces_reproduce_circles() {
        // tangential motion around a puncture costs 2/(1 - ρ²) per unit length
        let d = DomainSpec::punctured_disk(Point::new(0.0, 0.0));
        let bd = Boundary::new(&d);
        for e in [0.1, 0.01, 0.001] {
            for n in [6, 20, 45] {
                let pts: Vec<Point> = (0..=n).map(|k| Point::polar(std::f64::consts::PI * k as f64 / n as f64) * e).collect();
                let c = curve_cost(&bd, GeodesicMetric::ApollonianInner, &pts);
                let exact = 2.0 * std::f64::consts::PI * e / (1.0 - e * e);
                assert!((c - exact).abs() < 1e-9 * exact, "{e} {n}: {c} vs {exact}");
            }
        }
    }

    #[test]
    fn arc_pieces_reproduce_segments() {
        let d = DomainSpec::strip(1.0);
        let bd = Boundary::new(&d);
        let pts: Vec<Point> = (0..=7).map(|k| Point::new(-3.0 + k as f64 * 6.0 / 7.0, 0.0)).collect();
        let c = curve_cost(&bd, GeodesicMetric::Quasihyperbolic, &pts);
        assert!((c - 6.0).abs() < 1e-12);
    }

    #[test]
    fn resample_keeps_endpoints_and_spacing() {
        let d = DomainSpec::unit_disk();
        let bd = Boundary::new(&d);
        let pts: Vec<Point> = (0..=200).map(|k| Point::new(-0.5 + k as f64 / 200.0, 0.1)).collect();
        let r = resample(&bd, &pts, 0.9);
        assert_eq!(r[0], pts[0]);
        assert_eq!(*r.last().unwrap(), pts[200]);
        for w in r.windows(2) {
            assert!(w[0].dist(w[1]) <= 0.9 * bd.delta(w[0]) + 1e-12);
        }
    }
}
