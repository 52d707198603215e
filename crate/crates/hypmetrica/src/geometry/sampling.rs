use super::domain::{DomainSpec, Prim};
use super::point::Point;
use crate::error::{Error, Result};
use std::f64::consts::PI;

/// Sampled boundary. Slit points appear once per side with opposite `side`
/// labels (`+1` left of the slit direction, `-1` right, `0` elsewhere).
#[derive(Debug, Clone, PartialEq)]
pub struct BoundarySampling {
    pub points: Vec<Point>,
    pub accessible: Vec<bool>,
    pub curvature_radius: Vec<Option<f64>>,
    pub side: Vec<i8>,
    pub prim: Vec<usize>,
    pub sample_count: usize,
    /// Infinity is a boundary point and enters suprema as a virtual sample.
    pub includes_infinity: bool,
}

impl BoundarySampling {
    fn new(m: usize, includes_infinity: bool) -> Self {
        BoundarySampling {
            points: vec![],
            accessible: vec![],
            curvature_radius: vec![],
            side: vec![],
            prim: vec![],
            sample_count: m,
            includes_infinity,
        }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    fn push(&mut self, p: Point, prim_idx: usize, prim: &Prim, side: i8) {
        self.points.push(p);
        self.accessible.push(true);
        self.curvature_radius.push(match prim {
            Prim::Circle { r, inner, .. } => Some(if *inner { *r } else { -*r }),
            Prim::Line { .. } | Prim::Seg { .. } => Some(f64::INFINITY),
            Prim::Pt { .. } => None,
        });
        self.side.push(side);
        self.prim.push(prim_idx);
    }

    /// Distinct coordinates: the second copy of each slit point is dropped.
    pub fn euclidean_points(&self) -> Vec<Point> {
        self.points.iter().zip(&self.side).filter(|(_, &s)| s >= 0).map(|(p, _)| *p).collect()
    }
}

fn line_frame(n: Point, d: f64, anchor: Point) -> (Point, Point) {
    let foot = anchor - n * (n.dot(anchor) - d);
    (foot, n.perp())
}

/// Uniform arclength sampling with phase 0. Punctures take one sample
/// each; the rest of the budget is split in proportion to component length
/// by largest remainders. Lines have infinite length: they get the weight of
/// a circle of the domain's scale and are sampled along `t = s tan(phi)`
/// with `phi` uniform, which is uniform on the line's image in the sphere.
pub fn sample_boundary(domain: &DomainSpec, m: usize) -> Result<BoundarySampling> {
    if m < 4 {
        return Err(Error::InvalidDomain("sample count too small".into()));
    }
    let prims = domain.primitives();
    let owners = domain.prim_owners();
    let scale = domain.scale();
    let anchor = domain.anchor();
    // (prim index, side, weight)
    let mut comps: Vec<(usize, i8, f64)> = Vec::new();
    let mut npts = 0usize;
    for (i, p) in prims.iter().enumerate() {
        match p {
            Prim::Circle { r, .. } => comps.push((i, 0, 2.0 * PI * r)),
            Prim::Line { .. } => comps.push((i, 0, 2.0 * PI * scale)),
            Prim::Seg { a, b, slit } => {
                let l = a.dist(*b);
                if *slit {
                    comps.push((i, 1, l));
                    comps.push((i, -1, l));
                } else {
                    comps.push((i, 0, l));
                }
            }
            Prim::Pt { .. } => npts += 1,
        }
    }
    let rest = m.saturating_sub(npts);
    let total: f64 = comps.iter().map(|c| c.2).sum();
    let mut counts: Vec<usize> = Vec::with_capacity(comps.len());
    let mut rema: Vec<(f64, usize)> = Vec::new();
    for (k, c) in comps.iter().enumerate() {
        let share = rest as f64 * c.2 / total;
        counts.push(share.floor() as usize);
        rema.push((share - share.floor(), k));
    }
    let assigned: usize = counts.iter().sum();
    rema.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
    for &(_, k) in rema.iter().take(rest.saturating_sub(assigned)) {
        counts[k] += 1;
    }

    let mut s = BoundarySampling::new(m, domain.unbounded);
    let mut ci = 0;
    for (i, p) in prims.iter().enumerate() {
        let owner = owners[i];
        let emit = |s: &mut BoundarySampling, q: Point, side: i8| {
            if domain.keeps_boundary_point(q, owner) {
                s.push(q, i, p, side);
            }
        };
        match *p {
            Prim::Pt { p: q } => emit(&mut s, q, 0),
            Prim::Circle { c, r, .. } => {
                let n = counts[ci];
                ci += 1;
                for k in 0..n {
                    let phi = 2.0 * PI * k as f64 / n as f64;
                    emit(&mut s, c + Point::polar(phi) * r, 0);
                }
            }
            Prim::Line { n, d } => {
                let cnt = counts[ci];
                ci += 1;
                let (foot, dir) = line_frame(n, d, anchor);
                for k in 0..cnt {
                    let phi = -PI / 2.0 + PI * (k + 1) as f64 / (cnt + 1) as f64;
                    emit(&mut s, foot + dir * (scale * phi.tan()), 0);
                }
            }
            Prim::Seg { a, b, slit } => {
                if slit {
                    let n1 = counts[ci];
                    let n2 = counts[ci + 1];
                    ci += 2;
                    for k in 0..n1 {
                        emit(&mut s, a.lerp(b, k as f64 / n1 as f64), 1);
                    }
                    for k in 0..n2 {
                        emit(&mut s, b.lerp(a, k as f64 / n2 as f64), -1);
                    }
                } else {
                    let n = counts[ci];
                    ci += 1;
                    for k in 0..n {
                        emit(&mut s, a.lerp(b, k as f64 / n as f64), 0);
                    }
                }
            }
        }
    }
    let distinct = {
        let mut v = s.points.clone();
        v.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
        v.dedup();
        v.len() + usize::from(s.includes_infinity)
    };
    if distinct < 2 {
        return Err(Error::DegenerateBoundary);
    }
    Ok(s)
}

/// Refinement step for `m` uniform samples: `eta = FOCUS_GAIN / m`.
pub const FOCUS_GAIN: f64 = 8.0;

/// Uniform samples plus a graded set concentrated near `foci`.
///
/// The graded part comes from dyadic bisection of each primitive's
/// parameter interval, split while the chord exceeds `eta` times the
/// distance from its midpoint to the nearest focus; the nearest point of
/// every primitive to every focus is added. For fixed foci a smaller `eta`
/// yields a superset, so suprema over the sampling never decrease.
pub fn sample_boundary_focused(domain: &DomainSpec, m: usize, foci: &[Point]) -> Result<BoundarySampling> {
    let mut s = sample_boundary(domain, m)?;
    if foci.is_empty() {
        return Ok(s);
    }
    let eta = FOCUS_GAIN / m as f64;
    add_graded(domain, &mut s, foci, eta);
    Ok(s)
}

fn add_graded(domain: &DomainSpec, s: &mut BoundarySampling, foci: &[Point], eta: f64) {
    let prims = domain.primitives();
    let owners = domain.prim_owners();
    let scale = domain.scale();
    let anchor = domain.anchor();
    for (i, p) in prims.iter().enumerate() {
        let owner = owners[i];
        let param: Box<dyn Fn(f64) -> Point> = match *p {
            Prim::Pt { .. } => continue,
            Prim::Circle { c, r, .. } => Box::new(move |u: f64| c + Point::polar(2.0 * PI * u) * r),
            Prim::Seg { a, b, .. } => Box::new(move |u: f64| a.lerp(b, u)),
            Prim::Line { n, d } => {
                let (foot, dir) = line_frame(n, d, anchor);
                Box::new(move |u: f64| foot + dir * (scale * (PI * (u - 0.5)).tan()))
            }
        };
        let is_line = matches!(p, Prim::Line { .. });
        let mut us: Vec<f64> = Vec::new();
        // explicit stack of (u0, u1, depth)
        let mut stack = vec![(0.0f64, 1.0f64, 0u32)];
        while let Some((u0, u1, depth)) = stack.pop() {
            let um = 0.5 * (u0 + u1);
            let split = if depth < 4 {
                true
            } else if depth >= 48 {
                false
            } else if is_line && (u0 == 0.0 || u1 == 1.0) {
                depth < 40
            } else {
                let chord = param(u0).dist(param(u1));
                let g = foci.iter().map(|f| f.dist(param(um))).fold(f64::INFINITY, f64::min);
                chord > eta * g
            };
            if split {
                stack.push((um, u1, depth + 1));
                stack.push((u0, um, depth + 1));
            } else {
                us.push(u0);
            }
        }
        us.push(1.0);
        for &u in &us {
            if is_line && (u == 0.0 || u == 1.0) {
                continue;
            }
            if matches!(p, Prim::Circle { .. }) && u == 1.0 {
                continue;
            }
            let q = param(u);
            if !domain.keeps_boundary_point(q, owner) {
                continue;
            }
            match p {
                Prim::Seg { slit: true, .. } => {
                    s.push(q, i, p, 1);
                    s.push(q, i, p, -1);
                }
                _ => s.push(q, i, p, 0),
            }
        }
        for f in foci {
            let (_, q) = p.nearest(*f);
            if domain.keeps_boundary_point(q, owner) {
                match p {
                    Prim::Seg { slit: true, .. } => {
                        s.push(q, i, p, 1);
                        s.push(q, i, p, -1);
                    }
                    _ => s.push(q, i, p, 0),
                }
            }
        }
    }
}
