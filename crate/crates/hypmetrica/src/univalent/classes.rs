use super::norm::norm;
use super::series::{reciprocal_form, PowerSeries};
use super::DiskSampler;
use crate::error::{Error, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Slack at or below this counts as satisfied.
pub const SLACK_TOL: f64 = 1e-12;

/// Outcome of one coefficient or norm condition.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MembershipReport {
    pub satisfied: bool,
    /// Condition left side minus right side.
    pub slack: f64,
    pub condition_id: String,
    /// Ratio-test bound on the omitted tail of the sum; `None` when the
    /// terms do not decay geometrically.
    pub tail_bound: Option<f64>,
}

impl MembershipReport {
    fn new(id: &str, slack: f64, tail_bound: Option<f64>) -> Self {
        MembershipReport { satisfied: slack <= SLACK_TOL, slack, condition_id: id.to_string(), tail_bound }
    }
}

/// Ratio-test tail bound for a sum of nonnegative terms: zero when the last
/// quarter vanishes, `s_N q/(1 − q)` when the last-quarter step ratios stay
/// below `q < 1`, otherwise `None`.
pub fn tail_bound(terms: &[f64]) -> Option<f64> {
    let n = terms.len();
    if n == 0 {
        return Some(0.0);
    }
    let last = &terms[n - n.div_ceil(4)..];
    if last.iter().all(|&t| t == 0.0) {
        return Some(0.0);
    }
    let mut q: f64 = 0.0;
    for w in last.windows(2) {
        if w[0] <= 0.0 {
            return None;
        }
        q = q.max(w[1] / w[0]);
    }
    (q < 1.0 && last.len() >= 2).then(|| last[last.len() - 1] * q / (1.0 - q))
}

/// Weighted sum `Σ_{n≥1} w(n)·|b_n|^p` with its tail bound; `b[0]` is the
/// constant term and is skipped.
fn weighted(b: &[Complex64], w: impl Fn(f64) -> f64, p: i32) -> (f64, Option<f64>) {
    let terms: Vec<f64> = b.iter().enumerate().skip(1).map(|(n, z)| w(n as f64) * z.norm().powi(p)).collect();
    let tb = tail_bound(&terms.iter().map(|t| t.abs()).collect::<Vec<_>>());
    (terms.iter().sum(), tb)
}

fn nonneg(b: &[Complex64]) -> Result<()> {
    for (n, z) in b.iter().enumerate().skip(1) {
        if z.re < -SLACK_TOL || z.im.abs() > SLACK_TOL {
            return Err(Error::NegativeCoefficient(n));
        }
    }
    Ok(())
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::BadParameters(format!("{name} must be positive, got {v}")))
    }
}

/// Necessary condition for `S_p(α)` when every `b_n ≥ 0`:
/// `Σ(2n − μ(1−α)) b_n ≤ μ(1−α)`.
pub fn sp_necessary(b: &[Complex64], mu: f64, alpha: f64) -> Result<MembershipReport> {
    positive("mu", mu)?;
    nonneg(b)?;
    let m = mu * (1.0 - alpha);
    let (s, tb) = weighted(b, |n| 2.0 * n - m, 1);
    Ok(MembershipReport::new("sp_necessary", s - m, tb))
}

/// Sufficient condition for `S_p(α)`: `Σ(2n + μ(1−α))|b_n| ≤ μ(1−α)`.
pub fn sp_sufficient(b: &[Complex64], mu: f64, alpha: f64) -> Result<MembershipReport> {
    positive("mu", mu)?;
    let m = mu * (1.0 - alpha);
    let (s, tb) = weighted(b, |n| 2.0 * n + m, 1);
    Ok(MembershipReport::new("sp_sufficient", s - m, tb))
}

/// Single-term criterion for `z + a_n zⁿ ∈ S_p(α)`: `(2n−1−α)|a_n| ≤ 1−α`.
pub fn sp_single_term(n: usize, a_n: Complex64, alpha: f64) -> Result<MembershipReport> {
    if n < 2 {
        return Err(Error::BadParameters("single-term criterion needs n >= 2".into()));
    }
    let slack = (2.0 * n as f64 - 1.0 - alpha) * a_n.norm() - (1.0 - alpha);
    Ok(MembershipReport::new("sp_single_term", slack, Some(0.0)))
}

/// Sufficient condition for `U(λ, μ)`: `Σ(n − μ)|b_n| ≤ λμ`, which reads
/// `Σ(n − 1)|b_n| ≤ λ` at `μ = 1`.
pub fn u_membership(b: &[Complex64], lambda: f64, mu: f64) -> Result<MembershipReport> {
    positive("mu", mu)?;
    if !(lambda >= 0.0) {
        return Err(Error::BadParameters(format!("lambda must be >= 0, got {lambda}")));
    }
    let (s, tb) = weighted(b, |n| n - mu, 1);
    Ok(MembershipReport::new("u_sufficient", s - lambda * mu, tb))
}

/// Exact test for `U(μ)` with nonnegative `b_n`: `Σ(n − μ) b_n ≤ μ`.
pub fn u_exact_nonneg(b: &[Complex64], mu: f64) -> Result<MembershipReport> {
    positive("mu", mu)?;
    nonneg(b)?;
    let (s, tb) = weighted(b, |n| n - mu, 1);
    Ok(MembershipReport::new("u_exact_nonneg", s - mu, tb))
}

/// `λ_*(f) = (√(2 − |b₁|²) − |b₁|)/2`.
pub fn u_lambda_star(b: &[Complex64]) -> f64 {
    let b1 = b.get(1).map_or(0.0, |z| z.norm());
    ((2.0 - b1 * b1).max(0.0).sqrt() - b1) / 2.0
}

/// Starlikeness coefficient test `Σ(n − μ(1−α))|b_n| ≤ μ(1−α)`.
pub fn starlike_coefficient_test(b: &[Complex64], mu: f64, alpha: f64) -> Result<MembershipReport> {
    positive("mu", mu)?;
    let m = mu * (1.0 - alpha);
    let (s, tb) = weighted(b, |n| n - m, 1);
    Ok(MembershipReport::new("starlike_coefficient", s - m, tb))
}

/// `P(2λ)` test `Σ n(n−1)|b_n| ≤ 2λ`.
pub fn p2lambda_test(b: &[Complex64], lambda: f64) -> Result<MembershipReport> {
    let (s, tb) = weighted(b, |n| n * (n - 1.0), 1);
    Ok(MembershipReport::new("p_2lambda", s - 2.0 * lambda, tb))
}

/// Area-theorem screen `Σ(n − μ)|b_n|² ≤ μ`, necessary for univalence.
pub fn area_coefficient_check(b: &[Complex64], mu: f64) -> Result<MembershipReport> {
    positive("mu", mu)?;
    let (s, tb) = weighted(b, |n| n - mu, 2);
    Ok(MembershipReport::new("area", s - mu, tb))
}

/// Largest `|z p′ − μ[p − p·q·f′]|` over the grid, `p = (z/f)^μ`, `q = z/f`.
pub fn identity_check_th2eq2(f: &PowerSeries, mu: f64, grid: &DiskSampler) -> Result<f64> {
    let p = reciprocal_form(f, mu)?;
    let q = reciprocal_form(f, 1.0)?;
    let dp = p.derivative(1);
    let df = f.derivative(1);
    let mut worst: f64 = 0.0;
    for z in grid.points() {
        let pz = p.horner(z);
        let lhs = z * dp.horner(z);
        let rhs = (pz - pz * q.horner(z) * df.horner(z)) * mu;
        worst = worst.max((lhs - rhs).norm());
    }
    Ok(worst)
}

/// Evidence for `φ ≺ ψ` from the range containment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubordinationEvidence {
    pub pass: bool,
    pub origin_gap: f64,
    /// Number of sampled `φ` values outside the hull of `ψ(0.999𝕋)`.
    pub outside: usize,
    pub samples: usize,
}

fn winding_inside(poly: &[Complex64], p: Complex64) -> bool {
    let mut inside = false;
    let n = poly.len();
    for i in 0..n {
        let (a, b) = (poly[i], poly[(i + 1) % n]);
        if (a.im > p.im) != (b.im > p.im) && p.re < a.re + (p.im - a.im) * (b.re - a.re) / (b.im - a.im) {
            inside = !inside;
        }
    }
    inside
}

/// Checks `φ(0) = ψ(0)` and that `φ(r𝕋)` for `r ∈ {0.5, 0.9, 0.99}` lies in the
/// polygon through `ψ(0.999𝕋)`. Evidence only; `ψ` must be attested univalent.
pub fn subordination_range_check(phi: &PowerSeries, psi: &PowerSeries, psi_univalent: bool) -> Result<SubordinationEvidence> {
    if !psi_univalent {
        return Err(Error::NotAttestedUnivalent);
    }
    let m = 1024;
    let poly: Vec<Complex64> = (0..m).map(|k| psi.horner(Complex64::from_polar(0.999, 2.0 * PI * k as f64 / m as f64))).collect();
    let origin_gap = (phi.coeff(0) - psi.coeff(0)).norm();
    let mut outside = 0;
    let mut samples = 0;
    for r in [0.5, 0.9, 0.99] {
        for k in 0..256 {
            let w = phi.horner(Complex64::from_polar(r, 2.0 * PI * k as f64 / 256.0));
            samples += 1;
            if !winding_inside(&poly, w) {
                outside += 1;
            }
        }
    }
    Ok(SubordinationEvidence { pass: origin_gap <= 1e-12 && outside == 0, origin_gap, outside, samples })
}

/// Function classes with their parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "class", rename_all = "snake_case")]
pub enum ClassSpec {
    /// Parabolic starlike `S_p(α)`, `α ∈ [−1, 1]`.
    Sp { alpha: f64 },
    /// `U(λ, μ)`, `λ ≥ 0`, `μ > −1`.
    U { lambda: f64, mu: f64 },
    /// Starlike of order `α`.
    Starlike { alpha: f64 },
    /// Convex of order `α`.
    Convex { alpha: f64 },
    /// Janowski convex `K(A, B)`.
    JanowskiConvex { a: f64, b: f64 },
    /// Janowski starlike `S*(A, B)`.
    JanowskiStarlike { a: f64, b: f64 },
    /// `S*(α, β)`, `α ∈ (0, 1]`, `β ∈ [0, 1)`.
    StronglyStarlike { alpha: f64, beta: f64 },
    /// `F_β`, `β ∈ (2/3, 1]`.
    FBeta { beta: f64 },
    /// Starlike of order `α` with negative coefficients.
    TStar { alpha: f64 },
}

fn in_range(name: &str, v: f64, ok: bool) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::BadParameters(format!("{name} = {v} is out of range")))
    }
}

impl ClassSpec {
    pub fn validate(&self) -> Result<()> {
        match *self {
            ClassSpec::Sp { alpha } => in_range("alpha", alpha, (-1.0..=1.0).contains(&alpha)),
            ClassSpec::U { lambda, mu } => {
                in_range("lambda", lambda, lambda >= 0.0)?;
                in_range("mu", mu, mu > -1.0)
            }
            ClassSpec::Starlike { alpha } | ClassSpec::Convex { alpha } | ClassSpec::TStar { alpha } => {
                in_range("alpha", alpha, (0.0..1.0).contains(&alpha))
            }
            ClassSpec::JanowskiConvex { a, b } | ClassSpec::JanowskiStarlike { a, b } => {
                in_range("B", b, -1.0 <= b && b < a && a <= 1.0)
            }
            ClassSpec::StronglyStarlike { alpha, beta } => {
                in_range("alpha", alpha, alpha > 0.0 && alpha <= 1.0)?;
                in_range("beta", beta, (0.0..1.0).contains(&beta))
            }
            ClassSpec::FBeta { beta } => in_range("beta", beta, beta > 2.0 / 3.0 && beta <= 1.0),
        }
    }

    /// Upper bound on `‖f‖` over the class, where one is known.
    pub fn norm_bound(&self) -> Result<Option<f64>> {
        use crate::bounds;
        Ok(match *self {
            ClassSpec::Starlike { alpha } | ClassSpec::TStar { alpha } => Some(6.0 - 4.0 * alpha),
            ClassSpec::Convex { alpha } => Some(4.0 * (1.0 - alpha)),
            ClassSpec::JanowskiConvex { a, b } => Some(bounds::bound_nab(a, b)?),
            ClassSpec::StronglyStarlike { alpha, beta } => {
                if alpha == 1.0 {
                    Some(6.0 - 4.0 * beta)
                } else {
                    Some(bounds::bound_strongly_starlike(alpha, beta)?.value + 2.0 * alpha)
                }
            }
            ClassSpec::FBeta { beta } => Some(2.0 * (3.0 * beta - 2.0)),
            _ => None,
        })
    }
}

/// Every screen that applies to `f` for the class: coefficient conditions on
/// the reciprocal form `(z/f)^μ` or on `a_n`, and the necessary norm screen.
pub fn class_screens(f: &PowerSeries, class: &ClassSpec, mu: f64) -> Result<Vec<MembershipReport>> {
    class.validate()?;
    let mut out = Vec::new();
    let a = f.coefficients();
    let coeff_sum = |w: &dyn Fn(f64) -> f64| -> (f64, Option<f64>) {
        let terms: Vec<f64> = a.iter().enumerate().skip(2).map(|(n, z)| w(n as f64) * z.norm()).collect();
        (terms.iter().sum(), tail_bound(&terms))
    };
    match *class {
        ClassSpec::Sp { alpha } => {
            let b = reciprocal_form(f, mu)?;
            out.push(sp_sufficient(b.coefficients(), mu, alpha)?);
            if let Ok(r) = sp_necessary(b.coefficients(), mu, alpha) {
                out.push(r);
            }
        }
        ClassSpec::U { lambda, mu: m } => {
            let b = reciprocal_form(f, m)?;
            out.push(u_membership(b.coefficients(), lambda, m)?);
            if lambda == 1.0 {
                if let Ok(r) = u_exact_nonneg(b.coefficients(), m) {
                    out.push(r);
                }
            }
            out.push(area_coefficient_check(b.coefficients(), m)?);
        }
        ClassSpec::Starlike { alpha } | ClassSpec::TStar { alpha } => {
            let (s, tb) = coeff_sum(&|n| n - alpha);
            out.push(MembershipReport::new("starlike_order_coefficient", s - (1.0 - alpha), tb));
        }
        ClassSpec::Convex { alpha } => {
            let (s, tb) = coeff_sum(&|n| n * (n - alpha));
            out.push(MembershipReport::new("convex_order_coefficient", s - (1.0 - alpha), tb));
        }
        _ => {}
    }
    if let Some(bound) = class.norm_bound()? {
        let est = norm(f, &DiskSampler::default())?;
        out.push(MembershipReport::new("norm_screen", est.value - bound - est.error_estimate, None));
    }
    Ok(out)
}
