use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::circle::{NcIntegralCheck, TrigPoly};
use super::{estimate_values, DixmierEstimate, Method};
use crate::error::{Error, Result};
use crate::krein_temporal::{delta_j, lorentz_mode, lorentz_symmetry, KreinStructure};
use crate::numerics::{matrix_function, pauli, Operator};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Signature {
    Riemannian,
    Lorentzian,
}

impl Signature {
    /// Number of time directions.
    pub fn q(self) -> usize {
        match self {
            Signature::Riemannian => 0,
            Signature::Lorentzian => 1,
        }
    }
}

/// Two-torus with spinors, Fourier modes `k_i ∈ {−⌊M/2⌋, …, M−1−⌊M/2⌋}`.
///
/// Profiles keep the largest complete shell `k₀² + k₁² ≤ R²` inside that square, a
/// spectral cutoff of `Δ_J`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TorusTruncation {
    pub modes: usize,
    pub signature: Signature,
}

impl TorusTruncation {
    pub fn new(modes: usize, signature: Signature) -> Result<Self> {
        if modes < 4 {
            return Err(Error::InvalidInput("need at least 4 modes per direction".into()));
        }
        Ok(TorusTruncation { modes, signature })
    }

    pub fn range(&self) -> (i64, i64) {
        let lo = -((self.modes / 2) as i64);
        (lo, lo + self.modes as i64 - 1)
    }

    /// Modes inside the complete shell, ordered by increasing `|k|²` then lexicographically.
    pub fn shell_modes(&self) -> Vec<(i64, i64)> {
        let (lo, hi) = self.range();
        let r = lo.abs().min(hi);
        let mut ks: Vec<(i64, i64)> =
            (lo..=hi).flat_map(|a| (lo..=hi).map(move |b| (a, b))).filter(|(a, b)| a * a + b * b <= r * r).collect();
        ks.sort_by_key(|&(a, b)| (a * a + b * b, a, b));
        ks
    }

    pub fn krein(&self) -> KreinStructure {
        match self.signature {
            Signature::Riemannian => KreinStructure::new(Operator::identity(2)).expect("identity"),
            Signature::Lorentzian => lorentz_symmetry(),
        }
    }

    /// Dirac symbol on the mode `e^{i(k₀θ₀ + k₁θ₁)}`.
    pub fn mode_dirac(&self, k0: i64, k1: i64) -> Operator {
        let (a, b) = (k0 as f64, k1 as f64);
        match self.signature {
            Signature::Riemannian => {
                let [sx, sy, _] = pauli();
                &sx.scale_real(a) + &sy.scale_real(b)
            }
            Signature::Lorentzian => lorentz_mode(a, b),
        }
    }

    pub fn mode_delta(&self, k0: i64, k1: i64) -> Operator {
        delta_j(&self.mode_dirac(k0, k1), &self.krein())
    }

    /// Ordered diagonal of `f · block(k)` over the shell; only the mean of `f` reaches the diagonal.
    pub fn profile(&self, f: &TrigPoly, block: impl Fn(i64, i64) -> Result<Operator>) -> Result<Vec<f64>> {
        if f.dim != 2 {
            return Err(Error::DimensionMismatch(format!("expected a function of 2 angles, got {}", f.dim)));
        }
        let c0 = f.mean().re;
        let mut out = Vec::new();
        for (a, b) in self.shell_modes() {
            let x = block(a, b)?;
            out.push(c0 * x.get(0, 0).re);
            out.push(c0 * x.get(1, 1).re);
        }
        Ok(out)
    }

    /// `f D² Δ_J^{−p}`.
    pub fn d2_delta_profile(&self, f: &TrigPoly, p: i32) -> Result<Vec<f64>> {
        self.profile(f, |a, b| {
            let d = self.mode_dirac(a, b);
            let w = matrix_function(&self.mode_delta(a, b), |x| x.powi(-p))?;
            Ok(&(&d * &d) * &w)
        })
    }

    /// `f Δ_J^{−p}`.
    pub fn delta_profile(&self, f: &TrigPoly, p: i32) -> Result<Vec<f64>> {
        self.profile(f, |a, b| matrix_function(&self.mode_delta(a, b), |x| x.powi(-p)))
    }

    /// `max_k ‖D(k)² − s(k)‖` with `s = k₀² + k₁²` (Riemannian) or `k₀² − k₁²` (Lorentzian).
    pub fn lichnerowicz_residual(&self) -> f64 {
        let (lo, hi) = self.range();
        let mut worst: f64 = 0.0;
        for a in lo..=hi {
            for b in lo..=hi {
                let d = self.mode_dirac(a, b);
                let s = match self.signature {
                    Signature::Riemannian => (a * a + b * b) as f64,
                    Signature::Lorentzian => (a * a - b * b) as f64,
                };
                worst = worst.max((&(&d * &d) - &Operator::identity(2).scale_real(s)).max_abs());
            }
        }
        worst
    }
}

/// `tr_ω(f D² Δ_J^{−p})` against `(−1)^q (n−2q)/n · tr_ω(f Δ_J^{−n})`, `n = 2`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SignatureCheck {
    pub n: usize,
    pub q: usize,
    pub exponent: i32,
    pub lhs: DixmierEstimate,
    pub reference: DixmierEstimate,
    pub factor: f64,
    pub rhs: f64,
    pub residual: f64,
}

pub fn signature_check(t: &TorusTruncation, f: &TrigPoly, exponent: Option<i32>, method: Method) -> Result<SignatureCheck> {
    let n = 2usize;
    let q = t.signature.q();
    let exponent = exponent.unwrap_or(n as i32 + 2);
    let lhs = estimate_values(&t.d2_delta_profile(f, exponent)?, method)?;
    let reference = estimate_values(&t.delta_profile(f, n as i32)?, method)?;
    let factor = (-1f64).powi(q as i32) * (n as f64 - 2.0 * q as f64) / n as f64;
    let rhs = factor * reference.value;
    Ok(SignatureCheck { n, q, exponent, lhs, reference, factor, rhs, residual: (lhs.value - rhs).abs() })
}

/// `∫_{T²} f` against `c₂ tr_ω(f |D|^{−2})` on the Riemannian torus.
pub fn nc_integral_check_torus(t: &TorusTruncation, f: &TrigPoly, method: Method) -> Result<NcIntegralCheck> {
    if t.signature != Signature::Riemannian {
        return Err(Error::InvalidInput("|D|^{-2} needs the Riemannian torus".into()));
    }
    let prof = t.profile(f, |a, b| {
        let d = t.mode_dirac(a, b);
        matrix_function(&(&d * &d), |x| if x > 0.5 { 1.0 / x } else { 0.0 })
    })?;
    let est = estimate_values(&prof, method)?;
    Ok(NcIntegralCheck::build(2, f.mean().re * (2.0 * PI).powi(2), est))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mode_anchors() {
        let t = TorusTruncation::new(8, Signature::Lorentzian).unwrap();
        let d = t.mode_delta(2, -3);
        assert!((d.get(0, 0).re - 14f64.sqrt()).abs() < 1e-12 && d.get(0, 1).norm() < 1e-12);
        assert!(t.lichnerowicz_residual() < 1e-12);
        assert!(TorusTruncation::new(8, Signature::Riemannian).unwrap().lichnerowicz_residual() < 1e-12);
        assert_eq!(t.range(), (-4, 3));
    }

    #[test]
    fn lorentzian_cancellation() {
        let t = TorusTruncation::new(60, Signature::Lorentzian).unwrap();
        let c = signature_check(&t, &TrigPoly::constant(2, 1.0), Some(3), Method::LogFit).unwrap();
        assert!(c.lhs.value.abs() <= 0.05, "{c:?}");
        assert_eq!(c.factor, 0.0);
    }

    #[test]
    fn riemannian_signature_and_integral() {
        let t = TorusTruncation::new(60, Signature::Riemannian).unwrap();
        let f = TrigPoly::constant(2, 1.0);
        let c = signature_check(&t, &f, None, Method::LogFit).unwrap();
        assert!(c.residual / c.rhs.abs() < 0.05, "{c:?}");
        let r = nc_integral_check_torus(&t, &f, Method::LogFit).unwrap();
        assert!(r.rel_error < 0.05, "{r:?}");
    }
}
