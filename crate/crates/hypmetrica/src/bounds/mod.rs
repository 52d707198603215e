//! Radius-of-property constants and pre-Schwarzian norm bounds: closed forms,
//! grid-plus-golden maximizations and bracketed root solves.

use crate::error::{Error, Result};
use crate::numeric::{bisect, grid_golden_max, integrate, integrate_simpson, Root};
use crate::univalent::hyp2f1;
use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;
use std::f64::consts::PI;

/// Grid nodes of every one-dimensional maximization.
pub const GRID: usize = 1024;

/// Upper end of the maximization interval `[0, 1 − 1e−6)`.
pub const X_MAX: f64 = 1.0 - 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadiusResult {
    pub r0: f64,
    pub residual: f64,
    pub bracket: (f64, f64),
    pub iterations: usize,
    /// Largest disagreement between the two evaluation routes at `r0`.
    pub cross_check: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum BoundMethod {
    ClosedForm,
    GridGolden,
    Bisection,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundResult {
    pub value: f64,
    /// Maximizer `x* ∈ [0, 1)` or root `k > 1`.
    pub extremizer: f64,
    pub method: BoundMethod,
    /// Theorem hypotheses that the parameters miss; the value is still the
    /// defining expression.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub outside_hypotheses: Vec<String>,
    /// The grid scan saw more than one local maximum.
    #[serde(default)]
    pub multimodal: bool,
}

fn bad(msg: String) -> Error {
    Error::ConstraintViolation(msg)
}

fn hyp(a: f64, b: f64, c: f64, x: f64) -> Result<f64> {
    hyp2f1(a, b, c, x).map_err(|e| Error::HypergeometricFailure(e.to_string()))
}

fn radius_result(root: Root, cross_check: f64) -> RadiusResult {
    RadiusResult { r0: root.x, residual: root.residual, bracket: (root.lo, root.hi), iterations: root.iterations, cross_check }
}

/// First sign change of `f` on an even scan of `(lo, hi)`, then bisection.
fn first_root<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, n: usize) -> Result<Root> {
    let mut a = lo;
    let fa = f(a);
    for i in 1..=n {
        let b = lo + (hi - lo) * i as f64 / n as f64;
        let fb = f(b);
        if fb == 0.0 || fb.signum() != fa.signum() {
            let mut r = bisect(&f, a, b)?;
            r.lo = lo;
            r.hi = hi;
            return Ok(r);
        }
        a = b;
    }
    Err(Error::NoRoot { lo, hi, f_lo: fa, f_hi: f(hi) })
}

/// Maximizes `kernel` on `[0, X_MAX)` and scales by `factor`.
fn maximize<K: Fn(f64) -> Result<f64>>(kernel: K, factor: f64) -> Result<BoundResult> {
    let h = X_MAX / GRID as f64;
    let mut vals = Vec::with_capacity(GRID + 1);
    for i in 0..=GRID {
        vals.push(kernel(h * i as f64)?);
    }
    let peaks = (1..GRID).filter(|&i| vals[i] > vals[i - 1] && vals[i] >= vals[i + 1]).count();
    let failed = std::cell::Cell::new(None);
    let f = |x: f64| match kernel(x) {
        Ok(v) => v,
        Err(e) => {
            failed.set(Some(e));
            f64::NEG_INFINITY
        }
    };
    let (x, v) = grid_golden_max(f, 0.0, X_MAX, GRID, 1e-12);
    if let Some(e) = failed.take() {
        return Err(e);
    }
    Ok(BoundResult { value: factor * v, extremizer: x, method: BoundMethod::GridGolden, outside_hypotheses: vec![], multimodal: peaks > 1 })
}

/// `LHS(r) − μ(1−α)²` of the `S_p` radius equation, given the value of
/// `∫₀¹ dt/(1 − r² t^{1/(1−μ)})`.
fn sp_equation(mu: f64, alpha: f64, r: f64, integral: f64) -> f64 {
    let r2 = r * r;
    let q = 1.0 - r2;
    4.0 * r2 * (1.0 + mu * (2.0 - alpha) * q) / (q * q) + r2 * mu * mu * (3.0 - alpha).powi(2) / (1.0 - mu) * integral
        - mu * (1.0 - alpha).powi(2)
}

fn sp_integral_gk(mu: f64, r: f64) -> Result<f64> {
    let p = 1.0 / (1.0 - mu);
    integrate(|t: f64| 1.0 / (1.0 - r * r * t.powf(p)), 0.0, 1.0, 1e-14)
}

/// `Σ r^{2k}/(k/(1−μ) + 1)`.
fn sp_integral_series(mu: f64, r: f64) -> f64 {
    let p = 1.0 / (1.0 - mu);
    let r2 = r * r;
    let mut s = 0.0;
    let mut w = 1.0;
    for k in 0..1_000_000 {
        let t = w / (k as f64 * p + 1.0);
        s += t;
        if t < 1e-18 * s {
            break;
        }
        w *= r2;
    }
    s
}

/// Radius `r₀` with `f(r₀z)/r₀ ∈ S_p(α)` for every `f ∈ S`: the root of
/// `4r²(1+μ(2−α)(1−r²))/(1−r²)² + r²μ²(3−α)²/(1−μ)·∫₀¹ dt/(1 − r²t^{1/(1−μ)}) = μ(1−α)²`.
/// The integral is evaluated by Gauss–Kronrod and by its series.
pub fn radius_sp(mu: f64, alpha: f64) -> Result<RadiusResult> {
    if !(mu > 0.0 && mu < 1.0) || !(-1.0..=1.0).contains(&alpha) {
        return Err(bad(format!("need 0 < mu < 1 and -1 <= alpha <= 1, got mu = {mu}, alpha = {alpha}")));
    }
    let g = |r: f64| sp_integral_gk(mu, r).map_or(f64::NAN, |i| sp_equation(mu, alpha, r, i));
    let root = first_root(g, 0.0, 1.0 - 1e-9, 64)?;
    let r = root.x;
    let i1 = sp_integral_gk(mu, r)?;
    let i2 = sp_integral_series(mu, r);
    let i3 = integrate_simpson(|t: f64| 1.0 / (1.0 - r * r * t.powf(1.0 / (1.0 - mu))), 0.0, 1.0, 1e-15);
    let cross = (i1 - i2).abs().max((i1 - i3).abs());
    Ok(radius_result(root, cross))
}

/// Value of the second-coefficient radius equation `LHS − RHS` with
/// `ln(1 − r²)` supplied.
fn sp2_equation(alpha: f64, c: f64, r: f64, ln: f64) -> f64 {
    let r2 = r * r;
    let q = 1.0 - r2;
    let lhs = 4.0 * r2 * r2 * (1.0 + (3.0 - alpha) * q) / (q * q) - (3.0 - alpha).powi(2) * r2 * ln;
    let rhs = (1.0 - alpha - (3.0 - alpha) * (r / 2.0) * c).powi(2);
    lhs - rhs
}

/// `ln(1 − r²) = −Σ r^{2k}/k`.
fn ln_series(r: f64) -> f64 {
    let r2 = r * r;
    let (mut s, mut w) = (0.0, r2);
    for k in 1..10_000_000 {
        let t = w / k as f64;
        s += t;
        if t < 1e-18 * s {
            break;
        }
        w *= r2;
    }
    -s
}

/// Radius depending on `|f″(0)|` (the case `μ = 1`): the first root of
/// `4r⁴(1+(3−α)(1−r²))/(1−r²)² − (3−α)²r² ln(1−r²) = (1−α−(3−α)(r/2)|f″(0)|)²`.
pub fn radius_sp_second_coeff(alpha: f64, f2: f64) -> Result<RadiusResult> {
    if !(-1.0..1.0).contains(&alpha) || !(0.0..=4.0).contains(&f2) {
        return Err(bad(format!("need -1 <= alpha < 1 and 0 <= |f''(0)| <= 4, got alpha = {alpha}, |f''(0)| = {f2}")));
    }
    let g = |r: f64| sp2_equation(alpha, f2, r, (-r * r).ln_1p());
    let root = first_root(g, 0.0, 1.0 - 1e-9, 256)?;
    let r = root.x;
    let cross = (sp2_equation(alpha, f2, r, (-r * r).ln_1p()) - sp2_equation(alpha, f2, r, ln_series(r))).abs();
    Ok(radius_result(root, cross))
}

/// `r_{α,λ}` with `f(rz)/r ∈ U(λ, 1−α)` for every `f ∈ S`.
pub fn radius_u(alpha: f64, lambda: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&alpha) || !(lambda > 0.0) {
        return Err(bad(format!("need 0 <= alpha < 1 and lambda > 0, got alpha = {alpha}, lambda = {lambda}")));
    }
    let l2 = lambda * lambda;
    let s = alpha + 2.0 * l2 * (1.0 - alpha);
    let d = (s * s + 4.0 * l2 * (1.0 - alpha).powi(2) * (1.0 - l2)).sqrt() + s;
    Ok(lambda * (2.0 * (1.0 - alpha)).sqrt() / d.sqrt())
}

/// `r/(1−r²)·√(α+(1−α)r²) − λ√(1−α)`, zero at `r_{α,λ}`.
pub fn radius_u_residual(alpha: f64, lambda: f64, r: f64) -> f64 {
    r / (1.0 - r * r) * (alpha + (1.0 - alpha) * r * r).sqrt() - lambda * (1.0 - alpha).sqrt()
}

fn bc_ranges(b: f64, c: f64) -> Result<()> {
    if (1.0 <= b && b <= c) || (0.0 < b && b <= 1.0 && 1.0 <= c) {
        Ok(())
    } else {
        Err(bad(format!("need 1 <= b <= c or 0 < b <= 1 <= c, got b = {b}, c = {c}")))
    }
}

/// `L(β,b,c) = (b/c)(3β−2) sup (1−x²)F(3−3β, b+1; c+1; x)/F(2−3β, b; c; x)`.
pub fn bound_l_beta(beta: f64, b: f64, c: f64) -> Result<BoundResult> {
    if !(beta > 2.0 / 3.0 && beta <= 1.0) {
        return Err(bad(format!("need 2/3 < beta <= 1, got {beta}")));
    }
    bc_ranges(b, c)?;
    let kernel = |x: f64| -> Result<f64> {
        Ok((1.0 - x * x) * hyp(3.0 - 3.0 * beta, b + 1.0, c + 1.0, x)? / hyp(2.0 - 3.0 * beta, b, c, x)?)
    };
    maximize(kernel, b / c * (3.0 * beta - 2.0))
}

/// Closed form of `L(1,b,c) = 2(c − √(c²−b²))/b`, attained at `x₀ = (c − √(c²−b²))/b`.
pub fn bound_l_one(b: f64, c: f64) -> Result<BoundResult> {
    bc_ranges(b, c)?;
    let s = (c * c - b * b).sqrt();
    Ok(BoundResult {
        value: 2.0 * (c - s) / b,
        extremizer: (c - s) / b,
        method: BoundMethod::ClosedForm,
        outside_hypotheses: vec![],
        multimodal: false,
    })
}

/// Sharp bound `2(γ+2−√(3+2γ))/(γ+1)` on `‖B_γ[f]‖` over `F₁`.
pub fn bound_bernardi_f(gamma: f64) -> Result<f64> {
    if !(gamma > -1.0) {
        return Err(bad(format!("need gamma > -1, got {gamma}")));
    }
    Ok(2.0 * (gamma + 2.0 - (3.0 + 2.0 * gamma).sqrt()) / (gamma + 1.0))
}

/// `N(A,B) = 2(A−B)(1−√(1−B²))/B²`, and `A` at `B = 0`.
pub fn bound_nab(a: f64, b: f64) -> Result<f64> {
    if !(-1.0 <= b && b < a && a <= 1.0) {
        return Err(bad(format!("need -1 <= B < A <= 1, got A = {a}, B = {b}")));
    }
    if b == 0.0 {
        return Ok(a);
    }
    // 1 − √(1−B²) = B²/(1 + √(1−B²)) avoids cancellation near B = 0
    Ok(2.0 * (a - b) / (1.0 + (1.0 - b * b).sqrt()))
}

/// `M(A,B,b,c) = (b/c)(A−B) sup (1−x²)F(2−A/B, b+1; c+1; |B|x)/F(1−A/B, b; c; |B|x)`.
/// `−1 ≤ B < A ≤ 1`, `B ≠ 0` and the `(b, c)` ranges are enforced; misses
/// of `A ≤ B + 1` and `−2 ≤ −A/B ≤ c − 1` are listed in the result.
pub fn bound_mabbc(a: f64, b_: f64, b: f64, c: f64) -> Result<BoundResult> {
    let mut failed = Vec::new();
    if !(-1.0 <= b_ && b_ < a && a <= 1.0) {
        failed.push(format!("-1 <= B < A <= 1 (A = {a}, B = {b_})"));
    }
    if b_ == 0.0 {
        failed.push("B != 0".to_string());
    }
    if bc_ranges(b, c).is_err() {
        failed.push(format!("1 <= b <= c or 0 < b <= 1 <= c (b = {b}, c = {c})"));
    }
    if !failed.is_empty() {
        return Err(bad(failed.join("; ")));
    }
    let mut outside = Vec::new();
    if a > b_ + 1.0 {
        outside.push(format!("A <= min(1, B + 1) fails: A = {a}, B + 1 = {}", b_ + 1.0));
    }
    let r = -a / b_;
    if !(-2.0..=c - 1.0).contains(&r) {
        outside.push(format!("-2 <= -A/B <= c - 1 fails: -A/B = {r}, c - 1 = {}", c - 1.0));
    }
    let s = b_.abs();
    let kernel = |x: f64| -> Result<f64> {
        Ok((1.0 - x * x) * hyp(2.0 - a / b_, b + 1.0, c + 1.0, s * x)? / hyp(1.0 - a / b_, b, c, s * x)?)
    };
    let mut out = maximize(kernel, b / c * (a - b_))?;
    out.outside_hypotheses = outside;
    Ok(out)
}

/// `D(A,B,γ) = M(A,B,γ+1,γ+2)` for `γ > −1`.
pub fn bound_dabgamma(a: f64, b: f64, gamma: f64) -> Result<BoundResult> {
    if !(gamma > -1.0) {
        return Err(bad(format!("need gamma > -1, got {gamma}")));
    }
    bound_mabbc(a, b, gamma + 1.0, gamma + 2.0)
}

/// Left side minus right side of the defining equation of `k(α, β)`.
pub fn strongly_starlike_h(alpha: f64, beta: f64, x: f64) -> f64 {
    let a = alpha;
    (1.0 - a) * x.powf(a + 2.0) + beta * (3.0 * a - 2.0) * x.powf(a + 1.0)
        + ((1.0 - 2.0 * beta) * (1.0 + a) + 2.0 * beta * beta * (1.0 - a)) * x.powf(a)
        - a * beta * (1.0 - 2.0 * beta) * x.powf(a - 1.0)
        - x * x
        + 2.0 * beta * x
        - ((1.0 - beta).powi(2) + beta * beta)
}

/// `g(x) = 4(1−β)(x−β)(x^α−1)/((x−1)(x+1−2β))`, maximized at `x = k`.
pub fn strongly_starlike_g(alpha: f64, beta: f64, x: f64) -> f64 {
    4.0 * (1.0 - beta) * (x - beta) * (x.powf(alpha) - 1.0) / ((x - 1.0) * (x + 1.0 - 2.0 * beta))
}

/// `L(α, β) = g(k)` with `k > 1` the unique zero of `h`; `‖f‖ ≤ L + 2α` on
/// `S*(α, β)`. `h` has a double zero at 1, so the bracket starts at
/// `1 + 1e−3` (halved while `h` is not negative there) and doubles its upper
/// end from 10.
pub fn bound_strongly_starlike(alpha: f64, beta: f64) -> Result<BoundResult> {
    if !(alpha > 0.0 && alpha < 1.0) || !(0.0..1.0).contains(&beta) {
        return Err(bad(format!("need 0 < alpha < 1 and 0 <= beta < 1, got alpha = {alpha}, beta = {beta}")));
    }
    let h = |x: f64| strongly_starlike_h(alpha, beta, x);
    let mut d = 1e-3;
    while h(1.0 + d) >= 0.0 && d > 1e-9 {
        d *= 0.5;
    }
    let lo = 1.0 + d;
    let mut hi = 10.0;
    while h(hi) <= 0.0 {
        hi *= 2.0;
        if hi > 1e12 {
            return Err(Error::NoRoot { lo, hi, f_lo: h(lo), f_hi: h(hi) });
        }
    }
    let root = bisect(h, lo, hi)?;
    let k = root.x;
    Ok(BoundResult {
        value: strongly_starlike_g(alpha, beta, k),
        extremizer: k,
        method: BoundMethod::Bisection,
        outside_hypotheses: vec![],
        multimodal: false,
    })
}

/// `‖f‖ ≤ L(α, β) + 2α` on `S*(α, β)`; `6 − 4β` at `α = 1`.
pub fn strongly_starlike_norm_bound(alpha: f64, beta: f64) -> Result<f64> {
    if alpha == 1.0 && (0.0..1.0).contains(&beta) {
        return Ok(6.0 - 4.0 * beta);
    }
    Ok(bound_strongly_starlike(alpha, beta)?.value + 2.0 * alpha)
}

/// Order of starlikeness `δ(α,β,γ) = (1/β)[(β+γ)/F(1, 2β(1−α); β+γ+1; 1/2) − γ]`
/// of `J_{β,γ}[S*(α)]`.
pub fn delta_orders(alpha: f64, beta: f64, gamma: f64) -> Result<f64> {
    if !(beta > 0.0 && beta + gamma > 0.0) {
        return Err(bad(format!("need beta > 0 and beta + gamma > 0, got beta = {beta}, gamma = {gamma}")));
    }
    let lo = 0.0f64.max(-gamma / beta).max((beta - gamma - 1.0) / (2.0 * beta));
    if !(lo <= alpha && alpha < 1.0) {
        return Err(bad(format!("need {lo} <= alpha < 1, got {alpha}")));
    }
    let f = hyp(1.0, 2.0 * beta * (1.0 - alpha), beta + gamma + 1.0, 0.5)?;
    Ok(((beta + gamma) / f - gamma) / beta)
}

/// `δ(α,γ) = (γ+1)/F(1, 2(1−α); γ+2; 1/2) − γ`, the order of starlikeness of
/// `B_γ[S*(α)]`, for `γ > −1` and `−γ ≤ α < 1`.
pub fn delta_bernardi(alpha: f64, gamma: f64) -> Result<f64> {
    if !(gamma > -1.0) || !(-gamma <= alpha && alpha < 1.0) {
        return Err(bad(format!("need gamma > -1 and -gamma <= alpha < 1, got alpha = {alpha}, gamma = {gamma}")));
    }
    let f = hyp(1.0, 2.0 * (1.0 - alpha), gamma + 2.0, 0.5)?;
    Ok((gamma + 1.0) / f - gamma)
}

/// `δ(γ) = Γ(3/2+γ)/(√π Γ(1+γ)) − γ`.
pub fn delta_gamma(gamma: f64) -> Result<f64> {
    if !(gamma > -1.0) {
        return Err(bad(format!("need gamma > -1, got {gamma}")));
    }
    Ok((ln_gamma(1.5 + gamma) - ln_gamma(1.0 + gamma)).exp() / PI.sqrt() - gamma)
}

/// `‖B_γ[f]‖ ≤ 6 − 4δ(γ)` for `f ∈ S*(−γ)`.
pub fn bernardi_norm_bound(gamma: f64) -> Result<f64> {
    Ok(6.0 - 4.0 * delta_gamma(gamma)?)
}

/// `λ(δ)` with `U(λ) ⊂ S*(δ)` when `a = |f″(0)|/2 ≤ 1`.
pub fn lambda_delta(delta: f64, a: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&a) || !(0.0 <= delta && delta < 1.0 / (1.0 + a)) {
        return Err(bad(format!("need 0 <= a <= 1 and 0 <= delta < 1/(1+a), got a = {a}, delta = {delta}")));
    }
    if delta < (1.0 + a) / (3.0 + a) {
        let s = 1.0 - 2.0 * delta;
        Ok(((s * (2.0 - a * a - 2.0 * delta)).sqrt() - a * s) / (2.0 * (1.0 - delta)))
    } else {
        Ok((1.0 - delta * (1.0 + a)) / (1.0 + delta))
    }
}

/// `λ*(μ) = (1−μ)/√((1−μ)² + μ²)`.
pub fn lambda_star(mu: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&mu) {
        return Err(bad(format!("need 0 <= mu <= 1, got {mu}")));
    }
    Ok((1.0 - mu) / ((1.0 - mu).powi(2) + mu * mu).sqrt())
}

/// The two thresholds for `f ∈ U(λ)` given `|f″(0)|`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GammaThresholds {
    /// `λ*_γ`; `U(λ) ⊂ S_γ` for `λ ≤ λ*_γ/2`.
    pub lambda_s: f64,
    /// `λ^{R_γ}`; `U(λ) ⊂ R_γ` for `λ ≤ λ^{R_γ}/2`.
    pub lambda_r: f64,
}

/// `sin(πγ/2)√(4−λ²) − (c+λ)√(4−(c+λ)²) − λ cos(πγ/2)` with `c = |f″(0)|`.
pub fn lambda_r_gap(gamma: f64, f2: f64, lambda: f64) -> f64 {
    let (s, co) = (PI * gamma / 2.0).sin_cos();
    let u = f2 + lambda;
    s * (4.0 - lambda * lambda).sqrt() - u * (4.0 - u * u).max(0.0).sqrt() - lambda * co
}

/// `λ*_γ` in closed form and `λ^{R_γ}` as the first zero of its defining
/// inequality at equality on `[0, 2 − |f″(0)|]`.
pub fn lambda_star_gamma(gamma: f64, f2: f64) -> Result<GammaThresholds> {
    if !(0.0..=1.0).contains(&gamma) || !(f2 >= 0.0) {
        return Err(bad(format!("need 0 <= gamma <= 1 and |f''(0)| >= 0, got gamma = {gamma}, |f''(0)| = {f2}")));
    }
    let (s, co) = (PI * gamma / 4.0).sin_cos();
    let disc = 16.0 * co * co - f2 * f2;
    if disc < 0.0 || f2 > 2.0 {
        return Err(bad(format!("|f''(0)| = {f2} exceeds 4 cos(pi gamma / 4) or 2")));
    }
    let lambda_s = (-f2 * co + s * disc.sqrt()) / (2.0 * co);
    let g = |l: f64| lambda_r_gap(gamma, f2, l);
    if g(0.0) < 0.0 {
        return Err(bad(format!("the defining inequality of lambda^R fails already at lambda = 0 (gap {})", g(0.0))));
    }
    let hi = 2.0 - f2;
    let lambda_r = if g(0.0) == 0.0 {
        0.0
    } else {
        match first_root(g, 0.0, hi, 4096) {
            Ok(r) => r.x,
            Err(_) => hi,
        }
    };
    Ok(GammaThresholds { lambda_s, lambda_r })
}
