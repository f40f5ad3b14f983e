use std::collections::BTreeMap;
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use statrs::function::gamma::gamma;

use super::{estimate_values, DixmierEstimate, Method};
use crate::error::{Error, Result};
use crate::numerics::{Operator, C64, ZERO};

/// Trigonometric polynomial `Σ_k c_k e^{i k·θ}` on the `dim`-torus.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrigPoly {
    pub dim: usize,
    pub coeffs: BTreeMap<Vec<i64>, C64>,
}

impl TrigPoly {
    pub fn zero(dim: usize) -> Self {
        TrigPoly { dim, coeffs: BTreeMap::new() }
    }

    pub fn constant(dim: usize, c: f64) -> Self {
        let mut p = Self::zero(dim);
        p.add_term(vec![0; dim], C64::new(c, 0.0));
        p
    }

    /// `amp · cos(k·θ)`.
    pub fn cos(k: &[i64], amp: f64) -> Self {
        let mut p = Self::zero(k.len());
        let neg: Vec<i64> = k.iter().map(|x| -x).collect();
        p.add_term(k.to_vec(), C64::new(0.5 * amp, 0.0));
        p.add_term(neg, C64::new(0.5 * amp, 0.0));
        p
    }

    /// `amp · sin(k·θ)`.
    pub fn sin(k: &[i64], amp: f64) -> Self {
        let mut p = Self::zero(k.len());
        let neg: Vec<i64> = k.iter().map(|x| -x).collect();
        p.add_term(k.to_vec(), C64::new(0.0, -0.5 * amp));
        p.add_term(neg, C64::new(0.0, 0.5 * amp));
        p
    }

    pub fn add_term(&mut self, k: Vec<i64>, c: C64) {
        assert_eq!(k.len(), self.dim, "frequency has wrong dimension");
        *self.coeffs.entry(k).or_insert(ZERO) += c;
    }

    pub fn add(&self, other: &TrigPoly) -> Self {
        let mut out = self.clone();
        for (k, c) in &other.coeffs {
            out.add_term(k.clone(), *c);
        }
        out
    }

    pub fn coeff(&self, k: &[i64]) -> C64 {
        self.coeffs.get(k).copied().unwrap_or(ZERO)
    }

    pub fn mean(&self) -> C64 {
        self.coeff(&vec![0; self.dim])
    }

    pub fn eval(&self, theta: &[f64]) -> C64 {
        self.coeffs
            .iter()
            .map(|(k, c)| c * C64::from_polar(1.0, k.iter().zip(theta).map(|(a, b)| *a as f64 * b).sum()))
            .sum()
    }

    /// `∫_{Tⁿ} f dθ = (2π)ⁿ c₀`.
    pub fn integral(&self) -> C64 {
        self.mean() * (2.0 * PI).powi(self.dim as i32)
    }

    pub fn is_real(&self) -> bool {
        self.coeffs.iter().all(|(k, c)| {
            let neg: Vec<i64> = k.iter().map(|x| -x).collect();
            (self.coeff(&neg) - c.conj()).norm() <= 1e-12 * (1.0 + c.norm())
        })
    }
}

/// `c_n = 2^{n−⌊n/2⌋−1} π^{n/2} n Γ(n/2)`.
pub fn nc_constant(n: usize) -> f64 {
    let nf = n as f64;
    2f64.powi((n - n / 2) as i32 - 1) * PI.powf(nf / 2.0) * nf * gamma(nf / 2.0)
}

/// Spinless circle truncated to Fourier modes `−N … N`, `D = diag(k)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TruncatedCircleTriple {
    pub n: usize,
}

impl TruncatedCircleTriple {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInput("truncation must be positive".into()));
        }
        Ok(TruncatedCircleTriple { n })
    }

    pub fn dim(&self) -> usize {
        2 * self.n + 1
    }

    fn mode(&self, i: usize) -> i64 {
        i as i64 - self.n as i64
    }

    pub fn dirac(&self) -> Operator {
        let v: Vec<f64> = (0..self.dim()).map(|i| self.mode(i) as f64).collect();
        Operator::diagonal(&v)
    }

    /// Banded `(M_f)_{kl} = c_{k−l}`.
    pub fn multiplication(&self, f: &TrigPoly) -> Operator {
        Operator::from_fn(self.dim(), |r, c| f.coeff(&[self.mode(r) - self.mode(c)]))
    }

    /// Diagonal of `f |D|^{−p}` (zero on the kernel of `D`), ordered by decreasing `|D|^{−p}`.
    pub fn profile(&self, f: &TrigPoly, p: i32) -> Vec<f64> {
        let c0 = f.mean().re;
        let mut out = Vec::with_capacity(self.dim());
        for k in 1..=self.n {
            let w = c0 * (k as f64).powi(-p);
            out.push(w);
            out.push(w);
        }
        out.push(0.0);
        out
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NcIntegralCheck {
    pub n: usize,
    pub c_n: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub rel_error: f64,
    pub estimate: DixmierEstimate,
}

impl NcIntegralCheck {
    pub(crate) fn build(n: usize, lhs: f64, estimate: DixmierEstimate) -> Self {
        let c_n = nc_constant(n);
        let rhs = c_n * estimate.value;
        let rel_error = if lhs.abs() > 1e-12 { (rhs / lhs - 1.0).abs() } else { rhs.abs() };
        NcIntegralCheck { n, c_n, lhs, rhs, rel_error, estimate }
    }
}

/// Compares `∫_{S¹} f` with `c₁ tr_ω(f |D|^{−1})`.
pub fn nc_integral_check(tc: &TruncatedCircleTriple, f: &TrigPoly, method: Method) -> Result<NcIntegralCheck> {
    if f.dim != 1 || !f.is_real() {
        return Err(Error::InvalidInput("expected a real trigonometric polynomial on the circle".into()));
    }
    let est = estimate_values(&tc.profile(f, 1), method)?;
    Ok(NcIntegralCheck::build(1, f.integral().re, est))
}
