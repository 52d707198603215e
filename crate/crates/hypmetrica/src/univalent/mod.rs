//! Truncated power series of analytic functions in the unit disk: arithmetic,
//! Hadamard and Hornich operations, Gauss hypergeometric functions, integral
//! transforms, the pre-Schwarzian norm and coefficient tests for classes of
//! univalent functions.

mod classes;
mod hyper;
mod norm;
mod series;
mod transforms;

pub use classes::{
    area_coefficient_check, class_screens, identity_check_th2eq2, p2lambda_test, sp_necessary, sp_single_term, sp_sufficient,
    starlike_coefficient_test, subordination_range_check, tail_bound, u_exact_nonneg, u_lambda_star, u_membership, ClassSpec,
    MembershipReport, SubordinationEvidence, SLACK_TOL,
};
pub use hyper::{hyp2f1, hypergeometric, hypergeometric_derivative, hypergeometric_euler, hypergeometric_series, EULER_SWITCH};
pub use norm::{norm, pre_schwarzian, NormEstimate};
pub use series::{hadamard, hornich_plus, hornich_scale, reciprocal_form, PowerSeries, DEFAULT_TRUNCATION, VANISHING_FLOOR};
pub use transforms::{alexander, bbc_transform, bernardi, libera};

pub use num_complex::Complex64;

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Polar sample grid of the disk: every radius crossed with equally spaced
/// angles, plus the origin.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiskSampler {
    /// Strictly increasing, in `(0, 1)`.
    pub radii: Vec<f64>,
    pub angles: usize,
    /// Sub-rays per ray spacing in the angular refinement pass.
    pub refinement: usize,
}

impl Default for DiskSampler {
    /// 64 rays, radii `k/65` for `k = 1..64`, refinement 8.
    fn default() -> Self {
        DiskSampler { radii: (1..=64).map(|k| k as f64 / 65.0).collect(), angles: 64, refinement: 8 }
    }
}

impl DiskSampler {
    /// Grid used by the nonvanishing screens.
    pub fn check_grid() -> Self {
        DiskSampler { radii: vec![0.25, 0.5, 0.75, 0.9], angles: 32, refinement: 1 }
    }

    /// Concentric circles `|z| = r` for the given radii.
    pub fn circles(radii: &[f64], angles: usize) -> Self {
        DiskSampler { radii: radii.to_vec(), angles, refinement: 1 }
    }

    pub fn validate(&self) -> Result<()> {
        if self.radii.is_empty() || self.angles == 0 {
            return Err(Error::EmptyInput);
        }
        let ok = self.radii.windows(2).all(|w| w[0] < w[1]) && self.radii[0] > 0.0 && *self.radii.last().unwrap() < 1.0;
        if !ok {
            return Err(Error::BadParameters("radii must increase strictly inside (0, 1)".into()));
        }
        Ok(())
    }

    pub fn points(&self) -> impl Iterator<Item = Complex64> + '_ {
        let step = 2.0 * PI / self.angles as f64;
        std::iter::once(Complex64::default())
            .chain(self.radii.iter().flat_map(move |&r| (0..self.angles).map(move |k| Complex64::from_polar(r, step * k as f64))))
    }
}
