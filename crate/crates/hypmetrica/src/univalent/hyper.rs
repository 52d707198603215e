use crate::error::{Error, Result};
use crate::numeric::integrate;
use num_complex::Complex64;
use statrs::function::gamma::ln_gamma;

/// Real arguments at or above this use the Euler integral.
pub const EULER_SWITCH: f64 = 0.9;

/// Upper limit on series terms before giving up.
const SERIES_BUDGET: usize = 5_000_000;

fn nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && x.fract() == 0.0
}

/// Termwise summation, stopped once the ratio-test tail bound falls below
/// `1e−16` of the partial sum.
pub fn hypergeometric_series(a: f64, b: f64, c: f64, z: Complex64) -> Result<Complex64> {
    let mut sum = Complex64::new(1.0, 0.0);
    let mut term = sum;
    let zn = z.norm();
    for n in 0..SERIES_BUDGET {
        let nf = n as f64;
        let r = (a + nf) * (b + nf) / ((c + nf) * (nf + 1.0));
        term *= z * r;
        sum += term;
        if term == Complex64::default() {
            return Ok(sum);
        }
        let next = ((a + nf + 1.0) * (b + nf + 1.0) / ((c + nf + 1.0) * (nf + 2.0))).abs() * zn;
        if next < 1.0 && term.norm() * next / (1.0 - next) <= 1e-16 * sum.norm() {
            return Ok(sum);
        }
    }
    Err(Error::NonConvergent(format!("series for F({a},{b};{c};{z}) needs more than {SERIES_BUDGET} terms")))
}

/// `∫₀^L f` over dyadic pieces `[L2^{−j−1}, L2^{−j}]`, which resolves a peak
/// of any width at the origin. Stops once a piece is below `1e−17` of the sum.
fn integrate_dyadic<F: Fn(f64) -> f64>(f: F, l: f64) -> Result<f64> {
    let mut total = 0.0;
    let mut hi = l;
    for j in 0..1100 {
        let lo = 0.5 * hi;
        let piece = integrate(&f, lo, hi, 1e-13)?;
        total += piece;
        if j >= 8 && piece.abs() <= 1e-17 * total.abs() {
            return Ok(total);
        }
        hi = lo;
    }
    Ok(total)
}

/// `Γ(c)/(Γ(b)Γ(c−b)) ∫₀¹ t^{b−1}(1−t)^{c−b−1}(1−xt)^{−a} dt` for `c > b > 0`
/// and real `x < 1`. Both endpoint powers are removed by substitution.
pub fn hypergeometric_euler(a: f64, b: f64, c: f64, x: f64) -> Result<f64> {
    if !(c > b && b > 0.0 && x < 1.0) {
        return Err(Error::NonConvergent(format!("Euler integral needs c > b > 0 and x < 1, got b = {b}, c = {c}, x = {x}")));
    }
    let e = c - b;
    let kernel = |t: f64| (1.0 - x * t).powf(-a);
    // t = u^{1/b} on [0, 1/2]
    let left = integrate(|u: f64| (1.0 - u.powf(1.0 / b)).powf(e - 1.0) * kernel(u.powf(1.0 / b)), 0.0, 0.5f64.powf(b), 1e-12)? / b;
    // 1 − t = v^{1/e} on [1/2, 1]
    let right = integrate_dyadic(
        |v: f64| {
            let t = 1.0 - v.powf(1.0 / e);
            t.powf(b - 1.0) * kernel(t)
        },
        0.5f64.powf(e),
    )? / e;
    let norm = (ln_gamma(c) - ln_gamma(b) - ln_gamma(e)).exp();
    Ok(norm * (left + right))
}

/// Gauss hypergeometric function `F(a, b; c; z)` for real parameters.
/// Series inside the disk; the Euler integral for real `z ≥ 0.9`, using the
/// symmetry in `a, b` and the Euler transformation to meet its conditions.
pub fn hypergeometric(a: f64, b: f64, c: f64, z: Complex64) -> Result<Complex64> {
    if nonpositive_integer(c) {
        return Err(Error::PolyLikePole);
    }
    if !(a.is_finite() && b.is_finite() && c.is_finite() && z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::BadParameters("non-finite hypergeometric argument".into()));
    }
    let one = Complex64::new(1.0, 0.0);
    if z == Complex64::default() || a == 0.0 || b == 0.0 {
        return Ok(one);
    }
    if a == c {
        return Ok((one - z).powf(-b));
    }
    if b == c {
        return Ok((one - z).powf(-a));
    }
    let terminating = nonpositive_integer(a) || nonpositive_integer(b);
    if terminating || z.norm() < EULER_SWITCH {
        return hypergeometric_series(a, b, c, z);
    }
    if z.im == 0.0 && z.re < 1.0 && z.re >= EULER_SWITCH {
        let x = z.re;
        if c > b && b > 0.0 {
            return hypergeometric_euler(a, b, c, x).map(|v| Complex64::new(v, 0.0));
        }
        if c > a && a > 0.0 {
            return hypergeometric_euler(b, a, c, x).map(|v| Complex64::new(v, 0.0));
        }
        // F(a,b;c;x) = (1−x)^{c−a−b} F(c−a, c−b; c; x)
        let (a2, b2) = (c - a, c - b);
        let pre = (1.0 - x).powf(c - a - b);
        if c > b2 && b2 > 0.0 {
            return hypergeometric_euler(a2, b2, c, x).map(|v| Complex64::new(pre * v, 0.0));
        }
        if c > a2 && a2 > 0.0 {
            return hypergeometric_euler(b2, a2, c, x).map(|v| Complex64::new(pre * v, 0.0));
        }
    }
    if z.norm() <= 1.0 - 1e-9 {
        return hypergeometric_series(a, b, c, z);
    }
    Err(Error::NonConvergent(format!("F({a},{b};{c};{z}) lies outside every supported region")))
}

/// `F′(a, b; c; z) = (ab/c) F(a+1, b+1; c+1; z)`.
pub fn hypergeometric_derivative(a: f64, b: f64, c: f64, z: Complex64) -> Result<Complex64> {
    if nonpositive_integer(c) {
        return Err(Error::PolyLikePole);
    }
    Ok(hypergeometric(a + 1.0, b + 1.0, c + 1.0, z)? * (a * b / c))
}

/// Real-axis convenience for `x ∈ (−1, 1)`.
pub fn hyp2f1(a: f64, b: f64, c: f64, x: f64) -> Result<f64> {
    hypergeometric(a, b, c, Complex64::new(x, 0.0)).map(|v| v.re)
}
