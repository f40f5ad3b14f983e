//! Temporal triples on the 1+1 Minkowski cylinder and small exact fixtures.

use std::f64::consts::PI;

use nalgebra::DMatrix;

use super::{gamma, Band, KronOperator, TemporalTriple};
use crate::error::{Error, Result};
use crate::numerics::{Operator, C64, I, ONE, ZERO};
use crate::spectral_triple::{diagonal_basis, FiniteSpectralTriple};

/// Sine modes `j = 1 … BAND_MODES` in time and Fourier (or sine) modes up to `BAND_MODES` in space.
pub const BAND_MODES: usize = 3;

/// Central difference with Dirichlet ends (`periodic = false`) or wrap-around.
pub fn central_difference(n: usize, h: f64, periodic: bool) -> Operator {
    Operator::from_fn(n, |r, c| {
        let fwd = c == r + 1 || (periodic && r + 1 == n && c == 0);
        let bwd = r == c + 1 || (periodic && c + 1 == n && r == 0);
        match (fwd, bwd) {
            (true, false) => C64::new(0.5 / h, 0.0),
            (false, true) => C64::new(-0.5 / h, 0.0),
            _ => ZERO,
        }
    })
}

fn sine_band(n: usize, modes: usize) -> DMatrix<C64> {
    let norm = (2.0 / (n + 1) as f64).sqrt();
    DMatrix::from_fn(n, modes, |i, j| C64::new(norm * (PI * (j + 1) as f64 * (i + 1) as f64 / (n + 1) as f64).sin(), 0.0))
}

fn fourier_band(n: usize, kmax: usize) -> DMatrix<C64> {
    let norm = 1.0 / (n as f64).sqrt();
    DMatrix::from_fn(n, 2 * kmax + 1, |i, j| {
        let k = j as f64 - kmax as f64;
        C64::from_polar(norm, 2.0 * PI * k * i as f64 / n as f64)
    })
}

/// A temporal triple with its natural low-frequency band.
#[derive(Clone, Debug)]
pub struct CylinderFixture {
    pub h: f64,
    pub triple: TemporalTriple,
    pub band: Band,
}

fn grid_steps(h: f64) -> Result<usize> {
    let n = (1.0 / h).round();
    if !(h > 0.0) || (n * h - 1.0).abs() > 1e-9 || n < (2 * BAND_MODES + 2) as f64 {
        return Err(Error::InvalidInput(format!("h = {h} must be 1/n with n ≥ {}", 2 * BAND_MODES + 2)));
    }
    Ok(n as usize)
}

fn multiplication(values: impl Iterator<Item = f64>) -> Operator {
    let v: Vec<f64> = values.collect();
    Operator::diagonal(&v)
}

/// `D = γ⁰ ⊗ ∂_t ⊗ 1 + γ¹ ⊗ 1 ⊗ ∂_x` on time `(0,1)` (Dirichlet, interior nodes `t = h … 1−h`)
/// times space of length one, periodic when `periodic_space`.
fn dirac(nt: usize, nx: usize, h: f64, periodic_space: bool) -> KronOperator {
    let [g0, g1] = gamma();
    let time = KronOperator::product(vec![g0, central_difference(nt, h, false), Operator::identity(nx)]);
    time.add(&KronOperator::product(vec![g1, Operator::identity(nt), central_difference(nx, h, periodic_space)]))
}

/// 1+1 Minkowski cylinder: time interval, periodic space, `T = t`, `J = i[D,T] ≈ iγ⁰`.
/// The algebra is spanned by `sin²(πt)·{1, cos πt} ⊗ {1, cos 2πx, sin 2πx}`.
pub fn minkowski_cylinder(h: f64) -> Result<CylinderFixture> {
    let n = grid_steps(h)?;
    let (nt, nx) = (n - 1, n);
    let ts = |f: fn(f64) -> f64| multiplication((0..nt).map(move |i| f((i + 1) as f64 * h)));
    let xs = |f: fn(f64) -> f64| multiplication((0..nx).map(move |i| f(i as f64 * h)));
    let alphas = [ts(|t| (PI * t).sin().powi(2)), ts(|t| (PI * t).sin().powi(2) * (PI * t).cos())];
    let betas = [xs(|_| 1.0), xs(|x| (2.0 * PI * x).cos()), xs(|x| (2.0 * PI * x).sin())];
    let mut algebra = Vec::new();
    for a in &alphas {
        for b in &betas {
            algebra.push(KronOperator::product(vec![Operator::identity(2), a.clone(), b.clone()]));
        }
    }
    let time = KronOperator::local(vec![2, nt, nx], 1, ts(|t| t));
    let triple = TemporalTriple::new(algebra, dirac(nt, nx, h, true), time, I)?;
    let band = Band { isometries: vec![None, Some(sine_band(nt, BAND_MODES)), Some(fourier_band(nx, BAND_MODES))] };
    Ok(CylinderFixture { h, triple, band })
}

/// Fault fixture: the temporal element is the spatial coordinate `x` on a square with Dirichlet
/// ends in both directions, so `i[D,T] ≈ iγ¹` squares to `−1`.
pub fn spatial_time_fault(h: f64) -> Result<CylinderFixture> {
    let n = grid_steps(h)?;
    let m = n - 1;
    let grid = |f: fn(f64) -> f64| multiplication((0..m).map(move |i| f((i + 1) as f64 * h)));
    let profiles = [grid(|s| (PI * s).sin().powi(2)), grid(|s| (PI * s).sin().powi(2) * (PI * s).cos())];
    let mut algebra = Vec::new();
    for a in &profiles {
        for b in &profiles {
            algebra.push(KronOperator::product(vec![Operator::identity(2), a.clone(), b.clone()]));
        }
    }
    let time = KronOperator::local(vec![2, m, m], 2, grid(|x| x));
    let triple = TemporalTriple::new(algebra, dirac(m, m, h, false), time, I)?;
    let band = Band { isometries: vec![None, Some(sine_band(m, BAND_MODES)), Some(sine_band(m, BAND_MODES))] };
    Ok(CylinderFixture { h, triple, band })
}

/// Two-dimensional triple with `[D,T] = J = σ_z` exactly: `D = i m σ_x`, `T = −σ_y/(2m)`,
/// diagonal algebra, `κ = 1`.
pub fn exact_krein(m: f64) -> Result<TemporalTriple> {
    if m == 0.0 {
        return Err(Error::InvalidInput("m must be nonzero".into()));
    }
    let [sx, sy, _] = crate::numerics::pauli();
    let d = sx.scale(C64::new(0.0, m));
    let base = FiniteSpectralTriple::new(diagonal_basis(2), d)?;
    TemporalTriple::from_dense(&base, sy.scale_real(-0.5 / m), ONE)
}

/// [`exact_krein`] with `D → D + ε σ_y`; `J` is unchanged and only `DJ` loses self-adjointness.
pub fn injected_fault(m: f64, eps: f64) -> Result<TemporalTriple> {
    let mut t = exact_krein(m)?;
    let [_, sy, _] = crate::numerics::pauli();
    t.dirac = t.dirac.add(&KronOperator::dense(sy.scale_real(eps)));
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::krein_temporal::{delta_t, fundamental_symmetry_from_time, validate_temporal};

    #[test]
    fn band_isometries_are_orthonormal() {
        for v in [sine_band(15, 4), fourier_band(16, 4)] {
            let g = v.adjoint() * &v;
            assert!((g - DMatrix::identity(v.ncols(), v.ncols())).iter().all(|z| z.norm() < 1e-12));
        }
    }

    #[test]
    fn exact_fixture_passes_everything() {
        let t = exact_krein(1.5).unwrap();
        let r = validate_temporal(&t, 1e-12, None).unwrap();
        assert!(r.passed(), "{:?}", r.failed());
        let d = delta_t(&t);
        assert!((d.delta.get(0, 0).re - (1.0 + 2.25f64).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn injected_fault_is_isolated() {
        let t = injected_fault(1.0, 1e-3).unwrap();
        let r = validate_temporal(&t, 1e-6, None).unwrap();
        assert_eq!(r.failed(), vec!["dj_self_adjoint"]);
    }

    #[test]
    fn zero_time_is_degenerate() {
        let mut t = exact_krein(1.0).unwrap();
        t.time = t.time.scale(ZERO);
        let s = fundamental_symmetry_from_time(&t, None);
        assert!((s.full.square - 1.0).abs() < 1e-12);
    }

    #[test]
    fn small_cylinder_is_close_on_band() {
        let f = minkowski_cylinder(1.0 / 32.0).unwrap();
        let r = validate_temporal(&f.triple, 0.15, Some(&f.band)).unwrap();
        assert!(r.passed(), "{:?}", r.checks);
    }
}
