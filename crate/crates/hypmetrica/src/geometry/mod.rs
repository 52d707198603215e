//! Planar domains, boundary sampling, inversion, enclosing disks and
//! tangent-ball radii.

mod domain;
mod point;
mod sampling;
mod shapes;
mod tangent;

pub use domain::{point_in_polygon, Axis, Base, DomainSpec, Hole, Prim};
pub use point::{line_intersection, segment_nearest, Point};
pub use sampling::{sample_boundary, sample_boundary_focused, BoundarySampling, FOCUS_GAIN};
pub use shapes::{convex_hull, diameter, invert, invert_circle, smallest_enclosing_disk, Disk, HalfPlane, Region};
pub use tangent::{point_tangent_radius, prim_tangent_radius, tangent_ball_radii, tangent_ball_radii_exact, Boundary};

use crate::error::Result;

/// Distance from an interior point to the boundary.
pub fn dist_to_boundary(domain: &DomainSpec, z: Point) -> Result<f64> {
    domain.dist_to_boundary(z)
}

/// A polyline with its Euclidean length.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct PathPolyline {
    pub vertices: Vec<Point>,
    pub length: f64,
}

impl PathPolyline {
    pub fn new(vertices: Vec<Point>) -> Self {
        let length = vertices.windows(2).map(|w| w[0].dist(w[1])).sum();
        PathPolyline { vertices, length }
    }
}
