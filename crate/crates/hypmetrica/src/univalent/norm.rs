use super::series::{PowerSeries, VANISHING_FLOOR};
use super::DiskSampler;
use crate::error::{Error, Result};
use crate::numeric::golden_max;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Truncation error allowed in `(1 − r²)|T_f|` inside the trusted radius.
const TAIL_TOL: f64 = 1e-11;

/// Radii at or above this need no boundary extrapolation.
const NEAR_BOUNDARY: f64 = 0.9999;

/// Pre-Schwarzian derivative `T_f = f″/f′` as a series.
pub fn pre_schwarzian(f: &PowerSeries) -> Result<PowerSeries> {
    let d1 = f.derivative(1);
    if d1.coeff(0).norm() < VANISHING_FLOOR {
        return Err(Error::VanishingDerivative);
    }
    d1.derivative(1).div(&d1)
}

/// Pre-Schwarzian norm estimate with its provenance on the disk.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormEstimate {
    pub value: f64,
    /// Change made by the final angular golden search, plus the spread
    /// of the boundary extrapolants when the supremum sits on the circle.
    pub error_estimate: f64,
    pub argmax_radius: f64,
    pub argmax_angle: f64,
    /// Radius below which the truncated `T_f` is trusted.
    pub trusted_radius: f64,
    /// The supremum is the boundary limit of the radial profile.
    pub boundary_limit: bool,
}

/// Largest `r` with `(1 − r²)·M r^{N+1}/(1 − r) ≤ TAIL_TOL`, `M` the largest
/// upper-half coefficient modulus of `T`.
fn trusted_radius(t: &PowerSeries) -> f64 {
    let n = t.truncation();
    let m = t.coefficients()[n / 2..].iter().map(|a| a.norm()).fold(0.0, f64::max);
    if m == 0.0 {
        return 1.0 - 1e-6;
    }
    let tail = |r: f64| m * r.powi(n as i32 + 1) * (1.0 + r);
    if tail(1.0 - 1e-6) <= TAIL_TOL {
        return 1.0 - 1e-6;
    }
    let (mut lo, mut hi) = (0.0, 1.0 - 1e-6);
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if tail(mid) <= TAIL_TOL {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// Neville extrapolation of `(x_i, y_i)` to `x`.
fn neville(xs: &[f64], ys: &[f64], x: f64) -> f64 {
    let mut p = ys.to_vec();
    let n = xs.len();
    for k in 1..n {
        for i in 0..n - k {
            p[i] = ((x - xs[i + k]) * p[i] + (xs[i] - x) * p[i + 1]) / (xs[i] - xs[i + k]);
        }
    }
    p[0]
}

struct Profile<'a> {
    t: &'a PowerSeries,
    radii: Vec<f64>,
    rt: f64,
}

/// Best point of one ray: `(value, radius, extrapolation spread)`.
struct RayBest {
    value: f64,
    radius: f64,
    spread: f64,
}

impl Profile<'_> {
    fn h(&self, r: f64, theta: f64) -> f64 {
        (1.0 - r * r) * self.t.horner(Complex64::from_polar(r, theta)).norm()
    }

    fn ray(&self, theta: f64) -> RayBest {
        let mut best = (0usize, f64::NEG_INFINITY);
        let vals: Vec<f64> = self.radii.iter().map(|&r| self.h(r, theta)).collect();
        for (i, &v) in vals.iter().enumerate() {
            if v > best.1 {
                best = (i, v);
            }
        }
        let i = best.0;
        let lo = if i == 0 { 0.0 } else { self.radii[i - 1] };
        let hi = self.radii[(i + 1).min(self.radii.len() - 1)];
        let (r, v) = golden_max(|r| self.h(r, theta), lo, hi, 1e-12);
        let mut out = if v >= best.1 { RayBest { value: v, radius: r, spread: 0.0 } } else { RayBest { value: best.1, radius: self.radii[i], spread: 0.0 } };
        if self.rt < NEAR_BOUNDARY {
            let step = 0.05 * self.rt;
            let xs: Vec<f64> = (0..4).map(|k| self.rt - step * k as f64).collect();
            let ys: Vec<f64> = xs.iter().map(|&r| self.h(r, theta)).collect();
            let cubic = neville(&xs, &ys, 1.0);
            let quad = neville(&xs[..3], &ys[..3], 1.0);
            if cubic > out.value {
                out = RayBest { value: cubic, radius: 1.0, spread: (cubic - quad).abs() };
            }
        }
        out
    }
}

/// `θ` reduced to `[0, 2π)`; values within the angular search tolerance of `2π` map to 0.
fn principal_angle(theta: f64) -> f64 {
    let a = theta.rem_euclid(2.0 * PI);
    if 2.0 * PI - a < 1e-6 {
        0.0
    } else {
        a
    }
}

/// `‖f‖ = sup (1 − |z|²)|f″/f′|`: a radial scan along the sampler's rays with
/// golden-section refinement per ray, then a golden search over the angle
/// around the best ray. Where the truncated series cannot be trusted up to
/// the circle, each ray also carries a cubic extrapolation of its profile
/// to `|z| = 1`.
pub fn norm(f: &PowerSeries, sampler: &DiskSampler) -> Result<NormEstimate> {
    sampler.validate()?;
    let t = pre_schwarzian(f)?;
    let rt = trusted_radius(&t);
    let mut radii: Vec<f64> = sampler.radii.iter().copied().filter(|&r| r < rt).collect();
    radii.push(rt);
    let d1 = f.derivative(1);
    let mut all = sampler.radii.clone();
    all.push(rt);
    let check = DiskSampler { radii: all, angles: sampler.angles, refinement: sampler.refinement };
    if d1.min_modulus_on(&check) < VANISHING_FLOOR {
        return Err(Error::VanishingDerivative);
    }
    let prof = Profile { t: &t, radii, rt };
    let step = 2.0 * PI / sampler.angles as f64;
    let mut coarse = (0.0, RayBest { value: f64::NEG_INFINITY, radius: 0.0, spread: 0.0 });
    for k in 0..sampler.angles {
        let th = step * k as f64;
        let b = prof.ray(th);
        if b.value > coarse.1.value {
            coarse = (th, b);
        }
    }
    // sub-rays in the window, then golden search over the angle
    let sub = sampler.refinement.max(1);
    let mut fine = (coarse.0, prof.ray(coarse.0));
    for j in 0..=2 * sub {
        let th = coarse.0 - step + step * j as f64 / sub as f64;
        let b = prof.ray(th);
        if b.value > fine.1.value {
            fine = (th, b);
        }
    }
    let h = step / sub as f64;
    let (th, _) = golden_max(|th| prof.ray(th).value, fine.0 - h, fine.0 + h, 1e-10);
    let g = prof.ray(th);
    let before = fine.1.value;
    if g.value > fine.1.value {
        fine = (th, g);
    }
    let (theta, best) = fine;
    Ok(NormEstimate {
        value: best.value.max(0.0),
        error_estimate: (best.value - before).abs() + best.spread,
        argmax_radius: best.radius,
        argmax_angle: principal_angle(theta),
        trusted_radius: rt,
        boundary_limit: best.radius == 1.0,
    })
}
