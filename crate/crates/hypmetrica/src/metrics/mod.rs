//! Hyperbolic-type distances and densities.

mod apollonian;
mod grid;
mod lambda;
mod moebius;

pub use apollonian::{
    apollonian_directed_density, apollonian_directed_density_exact, apollonian_distance, apollonian_on, hyperbolic_density,
    hyperbolic_distance, j_distance, j_value, ApollonianParameters, DirectedDensity, JVariant,
};
pub use grid::{
    apollonian_inner_distance, geodesic, quasihyperbolic_distance, GeodesicMetric, GeodesicOptions, GeodesicResult,
};
pub use lambda::{lambda_apollonian_distance, lambda_length, LambdaGraph};
pub use moebius::{
    circular_geodesic, extremal_disk, extremal_disk_on, ferrand_density, ferrand_on, hma_orthogonality_deg, hma_sample,
    kp_density, qh_curvature, seittenranta_distance, seittenranta_on, CircularGeodesic, ExtremalDisk, HmaSample,
    CONTACT_TOL,
};

use serde::{Deserialize, Serialize};

/// A computed distance or density with its refinement history.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricValue {
    pub value: f64,
    pub error_estimate: f64,
    /// `(resolution, value)` pairs, coarse to fine.
    pub refinement_trace: Vec<(f64, f64)>,
}

impl MetricValue {
    pub fn exact(value: f64) -> Self {
        MetricValue { value, error_estimate: 0.0, refinement_trace: vec![] }
    }

    /// Builds a value from a trace; the error estimate is the last change.
    pub fn from_trace(trace: Vec<(f64, f64)>) -> Self {
        let n = trace.len();
        let value = trace[n - 1].1;
        let error_estimate = if n >= 2 { (trace[n - 1].1 - trace[n - 2].1).abs() } else { 0.0 };
        MetricValue { value, error_estimate, refinement_trace: trace }
    }
}
