use super::DiskSampler;
use crate::error::{Error, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Default truncation order.
pub const DEFAULT_TRUNCATION: usize = 256;

/// Values below this count as zero in the nonvanishing screens.
pub const VANISHING_FLOOR: f64 = 1e-9;

/// Truncated power series `a₀ + a₁z + … + a_N z^N` with complex coefficients.
/// Serialized as an array of `[re, im]` pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<[f64; 2]>", into = "Vec<[f64; 2]>")]
pub struct PowerSeries {
    coeffs: Vec<Complex64>,
}

impl TryFrom<Vec<[f64; 2]>> for PowerSeries {
    type Error = Error;

    fn try_from(v: Vec<[f64; 2]>) -> Result<Self> {
        PowerSeries::new(v.into_iter().map(|[re, im]| Complex64::new(re, im)).collect())
    }
}

impl From<PowerSeries> for Vec<[f64; 2]> {
    fn from(s: PowerSeries) -> Self {
        s.coeffs.iter().map(|c| [c.re, c.im]).collect()
    }
}

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Coefficients of `(1 + w z)^p` up to `z^n`.
fn binomial(p: f64, w: f64, n: usize) -> Vec<Complex64> {
    let mut out = vec![c(1.0); n + 1];
    for k in 1..=n {
        out[k] = out[k - 1] * ((p - (k - 1) as f64) / k as f64 * w);
    }
    out
}

impl PowerSeries {
    /// At least two finite coefficients.
    pub fn new(coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() < 2 {
            return Err(Error::BadParameters("a series needs at least two coefficients".into()));
        }
        if coeffs.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::BadParameters("non-finite coefficient".into()));
        }
        Ok(PowerSeries { coeffs })
    }

    pub fn from_real(coeffs: &[f64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&x| c(x)).collect())
    }

    /// Pads to at least two coefficients; for internal results only.
    fn raw(mut coeffs: Vec<Complex64>) -> Self {
        if coeffs.len() < 2 {
            coeffs.resize(2, Complex64::default());
        }
        PowerSeries { coeffs }
    }

    pub fn zero(n: usize) -> Self {
        Self::raw(vec![Complex64::default(); n + 1])
    }

    pub fn constant(v: Complex64, n: usize) -> Self {
        let mut s = Self::zero(n);
        s.coeffs[0] = v;
        s
    }

    /// `f(z) = z`.
    pub fn identity(n: usize) -> Self {
        let mut s = Self::zero(n.max(1));
        s.coeffs[1] = c(1.0);
        s
    }

    /// Koebe function `z/(1 − z)²`, `a_n = n`.
    pub fn koebe(n: usize) -> Self {
        Self::raw((0..=n).map(|k| c(k as f64)).collect())
    }

    /// `ℓ(z) = z/(1 − z)`, the convex map with `zℓ′ = k`.
    pub fn ell(n: usize) -> Self {
        Self::raw((0..=n).map(|k| c(if k == 0 { 0.0 } else { 1.0 })).collect())
    }

    /// `g_β` with `g′ = (1 − z)^{3β−2}`, `g(0) = 0`.
    pub fn g_beta(beta: f64, n: usize) -> Self {
        Self::raw(binomial(3.0 * beta - 2.0, -1.0, n.max(1) - 1)).integral()
    }

    /// Janowski extremal `g` with `g′ = (1 + Bz)^{A/B−1}`, or `e^{Az}` when `B = 0`.
    pub fn extremal_ab(a: f64, b: f64, n: usize) -> Result<Self> {
        if !(-1.0..=1.0).contains(&b) || !(b < a && a <= 1.0) {
            return Err(Error::BadParameters(format!("need -1 <= B < A <= 1, got A = {a}, B = {b}")));
        }
        let n = n.max(1) - 1;
        let d = if b == 0.0 {
            let mut v = vec![c(1.0); n + 1];
            for k in 1..=n {
                v[k] = v[k - 1] * (a / k as f64);
            }
            v
        } else {
            binomial(a / b - 1.0, b, n)
        };
        Ok(Self::raw(d).integral())
    }

    /// A named family: `identity`, `koebe`, `ell`, `g_beta` (β), `extremal_AB` (A, B).
    pub fn named(name: &str, params: &[f64], n: usize) -> Result<Self> {
        let need = |k: usize| -> Result<()> {
            if params.len() == k {
                Ok(())
            } else {
                Err(Error::BadParameters(format!("{name} takes {k} parameter(s), got {}", params.len())))
            }
        };
        match name {
            "identity" => need(0).map(|_| Self::identity(n)),
            "koebe" => need(0).map(|_| Self::koebe(n)),
            "ell" => need(0).map(|_| Self::ell(n)),
            "g_beta" => need(1).map(|_| Self::g_beta(params[0], n)),
            "extremal_AB" | "extremal_ab" => {
                need(2)?;
                Self::extremal_ab(params[0], params[1], n)
            }
            _ => Err(Error::BadParameters(format!("unknown series family {name}"))),
        }
    }

    /// Reads a JSON array of `[re, im]` pairs.
    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::BadParameters(format!("series JSON: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("coefficients are finite")
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Coefficient `a_k`, zero beyond the truncation.
    pub fn coeff(&self, k: usize) -> Complex64 {
        self.coeffs.get(k).copied().unwrap_or_default()
    }

    /// The truncation order `N`.
    pub fn truncation(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// `a₀ = 0` and `a₁ = 1` exactly.
    pub fn is_normalized(&self) -> bool {
        self.coeffs[0] == Complex64::default() && self.coeffs[1] == c(1.0)
    }

    pub fn truncate(&self, n: usize) -> Self {
        let mut v = self.coeffs.clone();
        v.resize(n.max(1) + 1, Complex64::default());
        Self::raw(v)
    }

    /// Horner evaluation without the disk check.
    pub(crate) fn horner(&self, z: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(Complex64::default(), |acc, &a| acc * z + a)
    }

    /// Value of the truncated series at `|z| < 1`.
    pub fn evaluate(&self, z: Complex64) -> Result<Complex64> {
        if !(z.norm() < 1.0) {
            return Err(Error::OutsideDisk);
        }
        Ok(self.horner(z))
    }

    /// `k`-th derivative; the truncation drops by `k` (at least one is kept).
    pub fn derivative(&self, k: usize) -> Self {
        let mut v = self.coeffs.clone();
        for _ in 0..k {
            v = v.iter().enumerate().skip(1).map(|(n, &a)| a * n as f64).collect();
            if v.is_empty() {
                v.push(Complex64::default());
            }
        }
        Self::raw(v)
    }

    /// Primitive vanishing at the origin, truncation raised by one.
    pub fn integral(&self) -> Self {
        let mut v = Vec::with_capacity(self.coeffs.len() + 1);
        v.push(Complex64::default());
        v.extend(self.coeffs.iter().enumerate().map(|(n, &a)| a / (n + 1) as f64));
        Self::raw(v)
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.truncation().min(other.truncation());
        Self::raw((0..=n).map(|k| self.coeffs[k] + other.coeffs[k]).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.truncation().min(other.truncation());
        Self::raw((0..=n).map(|k| self.coeffs[k] - other.coeffs[k]).collect())
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self::raw(self.coeffs.iter().map(|&a| a * s).collect())
    }

    /// Cauchy product truncated to the shorter order.
    pub fn mul(&self, other: &Self) -> Self {
        let n = self.truncation().min(other.truncation());
        let mut v = vec![Complex64::default(); n + 1];
        for (i, &a) in self.coeffs.iter().take(n + 1).enumerate() {
            if a == Complex64::default() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().take(n + 1 - i).enumerate() {
                v[i + j] += a * b;
            }
        }
        Self::raw(v)
    }

    /// Series quotient; the divisor needs a nonzero constant term.
    pub fn div(&self, other: &Self) -> Result<Self> {
        let d0 = other.coeffs[0];
        if d0.norm() < VANISHING_FLOOR {
            return Err(Error::BadParameters("divisor vanishes at the origin".into()));
        }
        let n = self.truncation().min(other.truncation());
        let mut q = vec![Complex64::default(); n + 1];
        for k in 0..=n {
            let mut s = self.coeffs[k];
            for j in 1..=k {
                s -= other.coeffs[j] * q[k - j];
            }
            q[k] = s / d0;
        }
        Ok(Self::raw(q))
    }

    /// Principal logarithm; needs a nonzero constant term.
    pub fn log(&self) -> Result<Self> {
        let a0 = self.coeffs[0];
        if a0.norm() < VANISHING_FLOOR {
            return Err(Error::VanishingCore);
        }
        let mut l = self.derivative(1).div(self)?.integral();
        l.coeffs.truncate(self.coeffs.len());
        l.coeffs[0] = a0.ln();
        Ok(l)
    }

    /// `exp` through `n e_n = Σ k g_k e_{n−k}`.
    pub fn exp(&self) -> Self {
        let n = self.truncation();
        let mut e = vec![Complex64::default(); n + 1];
        e[0] = self.coeffs[0].exp();
        for m in 1..=n {
            let mut s = Complex64::default();
            for k in 1..=m {
                s += self.coeffs[k] * k as f64 * e[m - k];
            }
            e[m] = s / m as f64;
        }
        Self::raw(e)
    }

    /// Principal power `exp(μ log f)`.
    pub fn powf(&self, mu: f64) -> Result<Self> {
        Ok(self.log()?.scale(c(mu)).exp())
    }

    /// `f(z^k)`.
    pub fn subs_power(&self, k: usize) -> Self {
        let n = self.truncation();
        let mut v = vec![Complex64::default(); n + 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if i * k <= n {
                v[i * k] = a;
            }
        }
        Self::raw(v)
    }

    /// Rotation `μ̄ f(μz)` for `|μ| = 1`.
    pub fn rotate(&self, theta: f64) -> Self {
        let mu = Complex64::from_polar(1.0, theta);
        Self::raw(self.coeffs.iter().enumerate().map(|(n, &a)| a * mu.powi(n as i32) * mu.conj()).collect())
    }

    /// Dilation `f(rz)/r`.
    pub fn dilate(&self, r: f64) -> Self {
        Self::raw(self.coeffs.iter().enumerate().map(|(n, &a)| a * r.powi(n as i32 - 1)).collect())
    }

    /// `f = z · b^{−1/μ}` from the reciprocal form `b = (z/f)^μ`.
    pub fn from_reciprocal(b: &PowerSeries, mu: f64) -> Result<Self> {
        if mu == 0.0 {
            return Err(Error::BadParameters("mu must be nonzero".into()));
        }
        if (b.coeffs[0] - c(1.0)).norm() > 1e-12 {
            return Err(Error::BadParameters("reciprocal form must start with 1".into()));
        }
        let core = b.powf(-1.0 / mu)?;
        let mut v = vec![Complex64::default()];
        v.extend_from_slice(&core.coeffs);
        v[1] = c(1.0);
        Ok(Self::raw(v))
    }

    /// `f(z)/z` for a series with `a₀ = 0`.
    pub fn core(&self) -> Self {
        Self::raw(self.coeffs[1..].to_vec())
    }

    /// Smallest modulus of the truncated series over the sampler grid.
    pub fn min_modulus_on(&self, grid: &DiskSampler) -> f64 {
        grid.points().map(|z| self.horner(z).norm()).fold(f64::INFINITY, f64::min)
    }
}

fn require_normalized(f: &PowerSeries) -> Result<()> {
    if f.is_normalized() {
        Ok(())
    } else {
        Err(Error::BadParameters("series must be normalized (a0 = 0, a1 = 1)".into()))
    }
}

/// Coefficients `b_n` of the principal branch of `(z/f(z))^μ`, computed as
/// `exp(−μ log(f/z))`. The top coefficient assumes `a_{N+1} = 0`.
pub fn reciprocal_form(f: &PowerSeries, mu: f64) -> Result<PowerSeries> {
    require_normalized(f)?;
    let core = f.core();
    if core.min_modulus_on(&DiskSampler::check_grid()) < VANISHING_FLOOR {
        return Err(Error::VanishingCore);
    }
    let mut b = core.powf(-mu)?;
    b.coeffs.resize(f.coeffs.len(), Complex64::default());
    Ok(b)
}

/// Coefficientwise product `Σ a_n b_n zⁿ`.
pub fn hadamard(f: &PowerSeries, g: &PowerSeries) -> PowerSeries {
    let n = f.truncation().min(g.truncation());
    PowerSeries::raw((0..=n).map(|k| f.coeffs[k] * g.coeffs[k]).collect())
}

/// Hornich sum `f ⊕ g = ∫ f′g′`.
pub fn hornich_plus(f: &PowerSeries, g: &PowerSeries) -> PowerSeries {
    f.derivative(1).mul(&g.derivative(1)).integral()
}

/// Hornich scalar multiple `α ⋆ f = ∫ (f′)^α`, principal branch with
/// `(f′)^α(0) = f′(0)^α`.
pub fn hornich_scale(alpha: f64, f: &PowerSeries) -> Result<PowerSeries> {
    let d = f.derivative(1);
    if d.coeffs[0].norm() < VANISHING_FLOOR || d.min_modulus_on(&DiskSampler::check_grid()) < VANISHING_FLOOR {
        return Err(Error::VanishingDerivative);
    }
    Ok(d.powf(alpha)?.integral())
}
