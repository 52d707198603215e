use super::domain::{DomainSpec, Prim};
use super::point::Point;
use super::sampling::BoundarySampling;
use crate::error::{Error, Result};

/// Radius of the largest disk `B(x + s theta, s)` avoiding the boundary point `b`.
#[inline]
pub fn point_tangent_radius(x: Point, theta: Point, b: Point) -> f64 {
    let w = b - x;
    let t = w.dot(theta);
    if t > 0.0 {
        w.norm2() / (2.0 * t)
    } else {
        f64::INFINITY
    }
}

/// Exact tangent radius for one primitive.
pub fn prim_tangent_radius(p: &Prim, x: Point, theta: Point) -> f64 {
    match *p {
        Prim::Pt { p } => point_tangent_radius(x, theta, p),
        Prim::Circle { c, r, inner: true } => {
            let w = x - c;
            (r * r - w.norm2()) / (2.0 * (r + w.dot(theta)))
        }
        Prim::Circle { c, r, inner: false } => {
            let w = x - c;
            let den = r - w.dot(theta);
            if den > 0.0 {
                (w.norm2() - r * r) / (2.0 * den)
            } else {
                f64::INFINITY
            }
        }
        Prim::Line { n, d } => {
            let h = n.dot(x) - d;
            let den = 1.0 - n.dot(theta);
            if den > 0.0 {
                h / den
            } else {
                f64::INFINITY
            }
        }
        Prim::Seg { a, b, .. } => {
            let mut s = point_tangent_radius(x, theta, a).min(point_tangent_radius(x, theta, b));
            let e = b - a;
            let mut n = e.perp().unit();
            let mut h = n.dot(x - a);
            if h < 0.0 {
                n = -n;
                h = -h;
            }
            if h > 0.0 {
                let den = 1.0 - n.dot(theta);
                if den > 0.0 {
                    let sl = h / den;
                    let q = x + theta * sl - n * sl;
                    let t = (q - a).dot(e) / e.norm2();
                    if (0.0..=1.0).contains(&t) {
                        s = s.min(sl);
                    }
                }
            }
            s
        }
    }
}

/// Precomputed boundary primitives for repeated distance and radius queries.
#[derive(Debug, Clone)]
pub struct Boundary {
    pub spec: DomainSpec,
    pub prims: Vec<Prim>,
    pub unbounded: bool,
    pub infinity_interior: bool,
}

impl Boundary {
    pub fn new(d: &DomainSpec) -> Self {
        Boundary {
            spec: d.clone(),
            prims: d.primitives(),
            unbounded: d.unbounded,
            infinity_interior: d.geometry_unbounded() && !d.unbounded,
        }
    }

    /// Distance to the nearest primitive; equals the distance to the boundary
    /// for interior points.
    #[inline]
    pub fn delta(&self, z: Point) -> f64 {
        let mut m = f64::INFINITY;
        for p in &self.prims {
            let d = p.nearest(z).0;
            if d < m {
                m = d;
            }
        }
        m
    }

    #[inline]
    pub fn contains(&self, z: Point) -> bool {
        self.spec.contains(z)
    }

    /// Exact radius `r_+` for direction `theta`.
    #[inline]
    pub fn tangent_radius(&self, x: Point, theta: Point) -> f64 {
        let mut m = f64::INFINITY;
        for p in &self.prims {
            let s = prim_tangent_radius(p, x, theta);
            if s < m {
                m = s;
            }
        }
        m
    }

    /// Directed Apollonian density `1/(2 r_+) + 1/(2 r_-)`.
    #[inline]
    pub fn directed_density(&self, x: Point, theta: Point) -> f64 {
        let rp = self.tangent_radius(x, theta);
        let rm = self.tangent_radius(x, -theta);
        0.5 / rp + 0.5 / rm
    }
}

fn check_theta(theta: Point) -> Result<()> {
    if (theta.norm() - 1.0).abs() > 1e-9 {
        return Err(Error::BadParameters(format!("direction has length {}", theta.norm())));
    }
    Ok(())
}

/// Tangent-ball radii `(r_+, r_-)` from sampled boundary points.
pub fn tangent_ball_radii(domain: &DomainSpec, x: Point, theta: Point, boundary: &BoundarySampling) -> Result<(f64, f64)> {
    check_theta(theta)?;
    if !domain.contains(x) {
        return Err(Error::PointOutsideDomain(x.x, x.y));
    }
    if domain.geometry_unbounded() && !domain.unbounded {
        return Err(Error::UnsupportedInfinityInDomain);
    }
    let mut rp = f64::INFINITY;
    let mut rm = f64::INFINITY;
    for &b in &boundary.points {
        rp = rp.min(point_tangent_radius(x, theta, b));
        rm = rm.min(point_tangent_radius(x, -theta, b));
    }
    Ok((rp, rm))
}

/// Tangent-ball radii from the analytic primitives; the limit of the sampled
/// radii as the sampling refines.
pub fn tangent_ball_radii_exact(domain: &DomainSpec, x: Point, theta: Point) -> Result<(f64, f64)> {
    check_theta(theta)?;
    if !domain.contains(x) {
        return Err(Error::PointOutsideDomain(x.x, x.y));
    }
    if domain.geometry_unbounded() && !domain.unbounded {
        return Err(Error::UnsupportedInfinityInDomain);
    }
    let b = Boundary::new(domain);
    Ok((b.tangent_radius(x, theta), b.tangent_radius(x, -theta)))
}
