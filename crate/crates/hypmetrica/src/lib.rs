//! Hyperbolic-type metrics on planar domains and pre-Schwarzian norm bounds
//! for univalent functions.
//!
//! - [`geometry`]: domains built from disks, half-planes, strips, polygons,
//!   slits and punctures; boundary distance, sampling, inversion and
//!   enclosing disks.
//! - [`metrics`]: the Apollonian, distance-ratio, Seittenranta, λ-Apollonian,
//!   quasihyperbolic and inner Apollonian distances, and the Ferrand and
//!   Kulkarni-Pinkall densities.
//! - [`relations`]: ratio sweeps between two distances, their verdicts and
//!   the scenario suites.
//! - [`univalent`]: truncated power series, Gauss hypergeometric functions,
//!   integral transforms, the pre-Schwarzian norm and class screens.
//! - [`bounds`]: sharp norm bounds, starlikeness orders and radii.
//! - [`cli`]: the command-line front end behind the `hypmetrica` binary.
//!
//! Sampled quantities return a [`metrics::MetricValue`] whose trace records
//! the value at each resolution.

pub mod error;
pub mod geometry;
pub mod numeric;
pub mod metrics;
pub mod relations;
pub mod univalent;
pub mod bounds;
pub mod cli;

pub use error::{Error, Result};
