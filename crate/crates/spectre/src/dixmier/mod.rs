//! Singular-value partial sums, Cesàro means and Dixmier-trace estimates.

mod circle;
mod quad;
mod torus;

pub use circle::{nc_constant, nc_integral_check, NcIntegralCheck, TrigPoly, TruncatedCircleTriple};
pub use torus::{nc_integral_check_torus, signature_check, Signature, SignatureCheck, TorusTruncation};

use std::f64::consts::E;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{singular_values_desc, Operator};

/// Shortest profile accepted by [`dixmier_estimate`].
pub const MIN_PROFILE: usize = 64;
const CESARO_RTOL: f64 = 1e-8;

/// `μ₀ ≥ μ₁ ≥ … ≥ 0`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SingularProfile {
    mu: Vec<f64>,
    pub source_dim: usize,
}

impl SingularProfile {
    pub fn new(mu: Vec<f64>) -> Result<Self> {
        if mu.iter().any(|m| !m.is_finite()) {
            return Err(Error::NonFinite);
        }
        if let Some(m) = mu.iter().find(|m| **m < 0.0) {
            return Err(Error::InvalidInput(format!("negative singular value {m}")));
        }
        if let Some(w) = mu.windows(2).find(|w| w[1] > w[0] * (1.0 + 1e-12) + 1e-300) {
            return Err(Error::InvalidInput(format!("profile increases from {} to {}", w[0], w[1])));
        }
        let source_dim = mu.len();
        Ok(SingularProfile { mu, source_dim })
    }

    /// `μ_n = f(n)` for `n < len`, sorted descending.
    pub fn from_fn(len: usize, f: impl Fn(usize) -> f64) -> Result<Self> {
        let mut mu: Vec<f64> = (0..len).map(f).collect();
        mu.sort_by(|a, b| b.total_cmp(a));
        Self::new(mu)
    }

    pub fn mu(&self) -> &[f64] {
        &self.mu
    }

    pub fn len(&self) -> usize {
        self.mu.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mu.is_empty()
    }

    pub fn scaled(&self, alpha: f64) -> Result<Self> {
        Self::new(self.mu.iter().map(|m| m * alpha).collect())
    }
}

/// Eigenvalues of `√(T*T)`, descending.
pub fn singular_values(t: &Operator) -> SingularProfile {
    SingularProfile::new(singular_values_desc(t)).expect("singular values are sorted and nonnegative")
}

/// Running sums `σ_0 = 0, σ_N = Σ_{n<N} μ_n`.
pub fn partial_sums(values: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(values.len() + 1);
    let mut s = 0.0;
    out.push(0.0);
    for v in values {
        s += v;
        out.push(s);
    }
    out
}

fn sigma_interp(sums: &[f64], values: &[f64], lambda: f64) -> f64 {
    let k = lambda.floor() as usize;
    if k >= values.len() {
        return sums[values.len()];
    }
    sums[k] + (lambda - k as f64) * values[k]
}

fn check_lambda(lambda: f64, lo: f64, len: usize) -> Result<()> {
    if !(lambda >= lo && lambda <= len as f64) {
        return Err(Error::OutOfRange { value: lambda, lo, hi: len as f64 });
    }
    Ok(())
}

/// `σ_λ`, piecewise linear between integers.
pub fn sigma(sp: &SingularProfile, lambda: f64) -> Result<f64> {
    check_lambda(lambda, 1.0, sp.len())?;
    Ok(sigma_interp(&partial_sums(&sp.mu), &sp.mu, lambda))
}

fn tau_values(values: &[f64], sums: &[f64], lambda: f64, a: f64) -> f64 {
    let g = |u: f64| sigma_interp(sums, values, u) / (u * u.ln());
    let mut total = 0.0;
    let mut lo = a;
    while lo < lambda {
        let hi = (lo.floor() + 1.0).min(lambda);
        total += quad::adaptive_simpson(&g, lo, hi, CESARO_RTOL);
        lo = hi;
    }
    total / lambda.ln()
}

/// `τ_λ = (1/ln λ) ∫_a^λ σ_u/ln u du/u` by adaptive Simpson between integer knots.
pub fn cesaro_tau(sp: &SingularProfile, lambda: f64, a: Option<f64>) -> Result<f64> {
    cesaro_tau_values(&sp.mu, lambda, a)
}

/// [`cesaro_tau`] for an arbitrary (possibly signed) ordered sequence.
pub fn cesaro_tau_values(values: &[f64], lambda: f64, a: Option<f64>) -> Result<f64> {
    let a = a.unwrap_or(E);
    if !(a > 1.0) {
        return Err(Error::OutOfRange { value: a, lo: 1.0, hi: f64::INFINITY });
    }
    check_lambda(lambda, a, values.len())?;
    if lambda == a {
        return Err(Error::OutOfRange { value: lambda, lo: a, hi: values.len() as f64 });
    }
    Ok(tau_values(values, &partial_sums(values), lambda, a))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Raw,
    Cesaro,
    LogFit,
}

impl std::str::FromStr for Method {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "raw" => Ok(Method::Raw),
            "cesaro" => Ok(Method::Cesaro),
            "log_fit" | "log-fit" => Ok(Method::LogFit),
            _ => Err(Error::InvalidInput(format!("unknown method {s}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DixmierEstimate {
    pub method: Method,
    pub value: f64,
    pub uncertainty: f64,
    pub length: usize,
}

/// Least-squares `y ≈ a + b x`, returning `(a, b, rms residual)`.
fn linear_fit(xs: &[f64], ys: &[f64]) -> (f64, f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let b = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let a = my - b * mx;
    let rss: f64 = xs.iter().zip(ys).map(|(x, y)| (y - a - b * x).powi(2)).sum();
    (a, b, (rss / n).sqrt())
}

/// Estimate of `lim σ_N / ln N` from an ordered sequence, signed entries allowed.
pub fn estimate_values(values: &[f64], method: Method) -> Result<DixmierEstimate> {
    let len = values.len();
    if len < MIN_PROFILE {
        return Err(Error::TooShort { len, min: MIN_PROFILE });
    }
    let sums = partial_sums(values);
    let ratio = |n: usize| sums[n] / (n as f64).ln();
    // Both raw and Cesàro carry a c/ln N bias; the change over one doubling, scaled by ln N/ln 2,
    // estimates it.
    let bias = |now: f64, half: f64| (now - half).abs() * (len as f64).ln() / 2f64.ln();
    let (value, uncertainty) = match method {
        Method::Raw => {
            let v = ratio(len);
            (v, bias(v, ratio(len / 2)))
        }
        Method::Cesaro => {
            let v = tau_values(values, &sums, len as f64, E);
            let h = tau_values(values, &sums, len as f64 / 2.0, E);
            (v, bias(v, h))
        }
        Method::LogFit => {
            let start = (len / 2).max(2);
            let xs: Vec<f64> = (start..=len).map(|n| 1.0 / (n as f64).ln()).collect();
            let ys: Vec<f64> = (start..=len).map(ratio).collect();
            let (a, _, rms) = linear_fit(&xs, &ys);
            (a, rms)
        }
    };
    Ok(DixmierEstimate { method, value, uncertainty, length: len })
}

pub fn dixmier_estimate(sp: &SingularProfile, method: Method) -> Result<DixmierEstimate> {
    estimate_values(&sp.mu, method)
}

/// All three estimators and their spread, a proxy for dependence on the generalized limit.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EstimatorSummary {
    pub raw: DixmierEstimate,
    pub cesaro: DixmierEstimate,
    pub log_fit: DixmierEstimate,
    pub spread: f64,
}

pub fn estimator_summary(values: &[f64]) -> Result<EstimatorSummary> {
    let raw = estimate_values(values, Method::Raw)?;
    let cesaro = estimate_values(values, Method::Cesaro)?;
    let log_fit = estimate_values(values, Method::LogFit)?;
    let vs = [raw.value, cesaro.value, log_fit.value];
    let spread = vs.iter().cloned().fold(f64::MIN, f64::max) - vs.iter().cloned().fold(f64::MAX, f64::min);
    Ok(EstimatorSummary { raw, cesaro, log_fit, spread })
}

/// One row of the profile table.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProfileRow {
    pub n: usize,
    pub sigma_n: f64,
    pub sigma_over_log_n: f64,
    pub tau_n: f64,
}

/// Rows at roughly `points` geometrically spaced `N ≥ 3`.
pub fn profile_table(values: &[f64], points: usize) -> Vec<ProfileRow> {
    let len = values.len();
    if len < 3 || points == 0 {
        return vec![];
    }
    let sums = partial_sums(values);
    let mut ns: Vec<usize> = (0..points)
        .map(|i| {
            let t = if points == 1 { 1.0 } else { i as f64 / (points - 1) as f64 };
            (3.0 * (len as f64 / 3.0).powf(t)).round() as usize
        })
        .map(|n| n.clamp(3, len))
        .collect();
    ns.dedup();
    ns.into_iter()
        .map(|n| ProfileRow {
            n,
            sigma_n: sums[n],
            sigma_over_log_n: sums[n] / (n as f64).ln(),
            tau_n: tau_values(values, &sums, n as f64, E),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::C64;

    #[test]
    fn singular_values_examples() {
        let sp = singular_values(&Operator::diagonal(&[3.0, -1.0]));
        assert_eq!(sp.mu(), &[3.0, 1.0]);
        let u = [C64::new(2.0, 0.0), C64::new(0.0, 0.0)];
        let v = [C64::new(0.0, 0.0), C64::new(0.0, 2.0)];
        let r = Operator::from_fn(2, |i, j| u[i] * v[j].conj());
        let sp = singular_values(&r);
        assert!((sp.mu()[0] - 4.0).abs() < 1e-12 && sp.mu()[1].abs() < 1e-12);
    }

    #[test]
    fn sigma_interpolates() {
        let sp = SingularProfile::new(vec![1.0, 1.0, 1.0]).unwrap();
        assert_eq!(sigma(&sp, 2.0).unwrap(), 2.0);
        let sp = SingularProfile::new(vec![1.0, 0.5]).unwrap();
        assert_eq!(sigma(&sp, 1.5).unwrap(), 1.25);
        assert!(matches!(sigma(&sp, 3.0), Err(Error::OutOfRange { .. })));
    }

    #[test]
    fn harmonic_profile() {
        let sp = SingularProfile::from_fn(10_000, |n| 1.0 / (n + 1) as f64).unwrap();
        let tau = cesaro_tau(&sp, 1e4, None).unwrap();
        assert!((tau - 1.0).abs() < 0.05, "{tau}");
        let fit = dixmier_estimate(&sp, Method::LogFit).unwrap();
        assert!((fit.value - 1.0).abs() < 0.02, "{fit:?}");
    }

    #[test]
    fn square_summable_profile() {
        let sp = SingularProfile::from_fn(10_000, |n| 1.0 / ((n + 1) as f64).powi(2)).unwrap();
        // τ_λ ≈ ζ(2) ln ln λ / ln λ, far above zero at λ = 10⁴
        let tau = cesaro_tau(&sp, 1e4, None).unwrap();
        let l = 1e4f64.ln();
        assert!((tau - 1.6449 * l.ln() / l).abs() < 0.03, "{tau}");
        assert!(cesaro_tau(&sp, 1e3, None).unwrap() > tau);
        assert!(dixmier_estimate(&sp, Method::LogFit).unwrap().value.abs() <= 0.01);
    }

    #[test]
    fn short_profile_rejected() {
        let sp = SingularProfile::new(vec![1.0; 10]).unwrap();
        assert!(matches!(dixmier_estimate(&sp, Method::Raw), Err(Error::TooShort { .. })));
        assert!(SingularProfile::new(vec![1.0, 2.0]).is_err());
    }

    #[test]
    fn table_rows() {
        let v: Vec<f64> = (0..100).map(|n| 1.0 / (n + 1) as f64).collect();
        let rows = profile_table(&v, 5);
        assert_eq!(rows.first().unwrap().n, 3);
        assert_eq!(rows.last().unwrap().n, 100);
    }
}
