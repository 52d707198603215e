use super::series::PowerSeries;
use crate::error::{Error, Result};

fn map_coeffs(f: &PowerSeries, factor: impl Fn(usize) -> f64) -> Result<PowerSeries> {
    if !f.is_normalized() {
        return Err(Error::BadParameters("transform needs a normalized series".into()));
    }
    let v = f.coefficients().iter().enumerate().map(|(n, &a)| if n == 0 { a } else { a * factor(n) }).collect();
    PowerSeries::new(v)
}

/// Alexander transform `∫₀^z f(t)/t dt`: `a_n ↦ a_n/n`.
pub fn alexander(f: &PowerSeries) -> Result<PowerSeries> {
    map_coeffs(f, |n| 1.0 / n as f64)
}

/// Libera transform: `a_n ↦ 2a_n/(n+1)`.
pub fn libera(f: &PowerSeries) -> Result<PowerSeries> {
    map_coeffs(f, |n| 2.0 / (n + 1) as f64)
}

/// Bernardi transform `B_γ`: `a_n ↦ a_n(γ+1)/(n+γ)` for `γ > −1`.
pub fn bernardi(f: &PowerSeries, gamma: f64) -> Result<PowerSeries> {
    if !(gamma > -1.0) {
        return Err(Error::BadParameters(format!("Bernardi transform needs gamma > -1, got {gamma}")));
    }
    map_coeffs(f, |n| (gamma + 1.0) / (n as f64 + gamma))
}

/// Hypergeometric operator `B_{b,c}[f] = zF(1, b; c; z) ∗ f`:
/// `a_n ↦ a_n (b)_{n−1}/(c)_{n−1}` for `b, c > 0`.
pub fn bbc_transform(f: &PowerSeries, b: f64, c: f64) -> Result<PowerSeries> {
    if !(b > 0.0 && c > 0.0) {
        return Err(Error::BadParameters(format!("B_(b,c) needs b, c > 0, got b = {b}, c = {c}")));
    }
    if c == b + 1.0 {
        // (b)_{n−1}/(b+1)_{n−1} = b/(b+n−1)
        return map_coeffs(f, |n| b / ((b - 1.0) + n as f64));
    }
    let n = f.truncation();
    let mut ratio = vec![1.0; n + 1];
    for k in 2..=n {
        ratio[k] = ratio[k - 1] * (b + (k - 2) as f64) / (c + (k - 2) as f64);
    }
    map_coeffs(f, |k| ratio[k])
}
