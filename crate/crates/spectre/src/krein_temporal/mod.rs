//! Krein structures, `Δ_J`, and residual checks for temporal Lorentzian triples.
//!
//! A finite matrix pair cannot satisfy `[A, t] = i` exactly (take traces), so the temporal
//! axioms are only checked as residuals, optionally compressed to a low-frequency band.

pub mod fixtures;
mod kron;

pub use kron::{Band, KronOperator, KronTerm, DENSE_LIMIT};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{hermitian_eig, matrix_function, operator_norm, Operator, C64, I, ONE};
use crate::report::ValidationReport;
use crate::spectral_triple::FiniteSpectralTriple;

pub const SYMMETRY_TOL: f64 = 1e-10;

/// `(γ⁰, γ¹)` for signature `(−,+)`: `(γ⁰)² = −1`, `γ⁰` anti-Hermitian, `(γ¹)² = 1`, `γ¹` Hermitian.
pub fn gamma() -> [Operator; 2] {
    let g0 = Operator::from_real_rows(&[vec![0.0, 1.0], vec![-1.0, 0.0]]).unwrap();
    let g1 = Operator::from_real_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
    [g0, g1]
}

/// A fundamental symmetry `J = J*`, `J² = 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct KreinStructure {
    j: Operator,
}

impl KreinStructure {
    pub fn new(j: Operator) -> Result<Self> {
        let adjoint = operator_norm(&(&j.adjoint() - &j));
        let square = operator_norm(&(&(&j * &j) - &Operator::identity(j.dim())));
        if adjoint > SYMMETRY_TOL || square > SYMMETRY_TOL {
            return Err(Error::InvalidSymmetry { adjoint, square });
        }
        Ok(KreinStructure { j })
    }

    pub fn j(&self) -> &Operator {
        &self.j
    }

    /// `(dim V⁺, dim V⁻)` from the eigenvalues of `J`.
    pub fn signature(&self) -> (usize, usize) {
        let e = hermitian_eig(&self.j).expect("J is Hermitian");
        let pos = e.values.iter().filter(|v| **v > 0.0).count();
        (pos, e.values.len() - pos)
    }

    /// Indefinite product `(u, J v)`.
    pub fn product(&self, u: &[C64], v: &[C64]) -> C64 {
        u.iter().zip(self.j.apply(v)).map(|(a, b)| a.conj() * b).sum()
    }
}

/// `A⁺ = J A* J`.
pub fn krein_adjoint(a: &Operator, k: &KreinStructure) -> Operator {
    &(&k.j * &a.adjoint()) * &k.j
}

/// `‖D − J D† J‖`.
pub fn krein_self_adjoint_residual(d: &Operator, k: &KreinStructure) -> f64 {
    operator_norm(&(d - &krein_adjoint(d, k)))
}

/// `Δ_J = (½(DD* + D*D) + 1)^{1/2}` with `*` the adjoint of the positive product `(·, J·)`,
/// which is the standard product of the matrix representation.
pub fn delta_j(d: &Operator, _k: &KreinStructure) -> Operator {
    let da = d.adjoint();
    let sq = (&(d * &da) + &(&da * d)).scale_real(0.5);
    matrix_function(&(&sq + &Operator::identity(d.dim())), |x| x.max(0.0).sqrt()).expect("Hermitian by construction")
}

/// Temporal data `(A₀, D, T)` with `J = κ[D,T]`.
#[derive(Clone, Debug)]
pub struct TemporalTriple {
    pub algebra: Vec<KronOperator>,
    pub dirac: KronOperator,
    pub time: KronOperator,
    /// `κ` in `J = κ[D,T]`; `i` for `D = γ^μ ∂_μ`.
    pub phase: C64,
}

impl TemporalTriple {
    pub fn new(algebra: Vec<KronOperator>, dirac: KronOperator, time: KronOperator, phase: C64) -> Result<Self> {
        let dims = dirac.dims().to_vec();
        if time.dims() != dims.as_slice() || algebra.iter().any(|a| a.dims() != dims.as_slice()) {
            return Err(Error::DimensionMismatch("temporal triple slots differ".into()));
        }
        if (phase.norm() - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidInput("phase must have modulus one".into()));
        }
        Ok(TemporalTriple { algebra, dirac, time, phase })
    }

    pub fn from_dense(base: &FiniteSpectralTriple, time: Operator, phase: C64) -> Result<Self> {
        let algebra = base.basis().iter().cloned().map(KronOperator::dense).collect();
        Self::new(algebra, KronOperator::dense(base.dirac.clone()), KronOperator::dense(time), phase)
    }

    pub fn dims(&self) -> &[usize] {
        self.dirac.dims()
    }

    /// `J = κ[D,T]`.
    pub fn symmetry(&self) -> KronOperator {
        self.dirac.commutator(&self.time).scale(self.phase)
    }

    /// `T → −T`.
    pub fn reversed(&self) -> Self {
        TemporalTriple { time: self.time.scale(-ONE), ..self.clone() }
    }

    fn time_function(&self, phi: impl Fn(f64) -> f64) -> Result<KronOperator> {
        self.time.mul(&self.time).local_function(phi)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SymmetryResiduals {
    pub adjoint: f64,
    pub square: f64,
}

#[derive(Clone, Debug)]
pub struct FundamentalSymmetry {
    pub j: KronOperator,
    pub full: SymmetryResiduals,
    pub band: Option<SymmetryResiduals>,
}

fn symmetry_residuals(j: &KronOperator, band: Option<&Band>) -> SymmetryResiduals {
    let id = KronOperator::identity(j.dims().to_vec());
    SymmetryResiduals {
        adjoint: j.adjoint().sub(j).band_norm(band),
        square: j.mul(j).sub(&id).band_norm(band),
    }
}

/// `J = κ[D,T]` with its distance from a fundamental symmetry.
pub fn fundamental_symmetry_from_time(t: &TemporalTriple, band: Option<&Band>) -> FundamentalSymmetry {
    let j = t.symmetry();
    FundamentalSymmetry {
        full: symmetry_residuals(&j, None),
        band: band.map(|b| symmetry_residuals(&j, Some(b))),
        j,
    }
}

fn max_over_algebra(t: &TemporalTriple, x: &KronOperator, band: Option<&Band>) -> f64 {
    t.algebra.iter().map(|a| x.commutator(a).band_norm(band)).fold(0.0, f64::max)
}

/// Residual of each temporal axiom, each compressed to `band` when given.
pub fn validate_temporal(t: &TemporalTriple, tol: f64, band: Option<&Band>) -> Result<ValidationReport> {
    let mut r = ValidationReport::new(tol);
    let d = &t.dirac;
    let j = t.symmetry();
    let id = KronOperator::identity(t.dims().to_vec());
    r.push("time_hermitian", t.time.adjoint().sub(&t.time).band_norm(band));
    let inv_sqrt = t.time_function(|x| 1.0 / (1.0 + x).sqrt())?;
    r.push("time_resolvent_commutes", max_over_algebra(t, &inv_sqrt, band));
    r.push("j_commutes_algebra", max_over_algebra(t, &j, band));
    let sqrt = t.time_function(|x| (1.0 + x).sqrt())?;
    r.push("d_time_sqrt_commutes", max_over_algebra(t, &d.commutator(&sqrt), band));
    let dj = d.mul(&j);
    r.push("dj_self_adjoint", dj.sub(&dj.adjoint()).band_norm(band));
    r.push("j_square", j.mul(&j).sub(&id).band_norm(band));
    r.push("j_self_adjoint", j.adjoint().sub(&j).band_norm(band));
    let bound = t.algebra.iter().map(|a| d.commutator(a).band_norm(band)).fold(0.0, f64::max);
    r.push_note("bounded_commutators", 0.0, &format!("max ‖[D,a]‖ = {bound:.6e}"));
    Ok(r)
}

/// `‖(1+T²)^{n/2} a‖`.
pub fn weighted_norm(a: &KronOperator, n: i32, t: &TemporalTriple) -> Result<f64> {
    let w = t.time_function(|x| (1.0 + x).powf(n as f64 / 2.0))?;
    Ok(w.mul(a).norm())
}

/// `Δ = (1 + ½((DJ)² + (JD)²))^{1/2}` for a given symmetry `J`.
pub fn delta_t_with(d: &Operator, j: &Operator) -> Operator {
    let dj = d * j;
    let jd = j * d;
    let sq = (&(&dj * &dj) + &(&jd * &jd)).scale_real(0.5);
    let h = (&sq + &Operator::identity(d.dim())).hermitian_part();
    matrix_function(&h, |x| x.max(0.0).sqrt()).expect("Hermitian part")
}

#[derive(Clone, Debug)]
pub struct DeltaT {
    pub delta: Operator,
    /// Hermiticity residual of `1 + [D]_T²` before symmetrization.
    pub hermiticity_residual: f64,
}

/// `Δ_T` from `[D]_T² = ½(DJDJ + JDJD)` with `J = κ[D,T]`, dense.
pub fn delta_t(t: &TemporalTriple) -> DeltaT {
    let d = t.dirac.to_dense();
    let j = t.symmetry().to_dense();
    let dj = &d * &j;
    let jd = &j * &d;
    let sq = (&(&dj * &dj) + &(&jd * &jd)).scale_real(0.5);
    DeltaT { delta: delta_t_with(&d, &j), hermiticity_residual: sq.hermiticity_residual() }
}

/// Lowest `⌈dim/4⌉` eigenmodes of `Δ_T` as a one-slot band.
pub fn default_band(t: &TemporalTriple) -> Result<Band> {
    if t.dims().len() != 1 {
        return Err(Error::InvalidInput("default band needs a one-slot triple".into()));
    }
    let e = hermitian_eig(&delta_t(t).delta)?;
    let n = e.values.len();
    let r = n.div_ceil(4);
    let v = e.vectors.matrix().columns(0, r).into_owned();
    Ok(Band { isometries: vec![Some(v)] })
}

/// `iγ⁰`, the fundamental symmetry of the flat Lorentzian spinor space.
pub fn lorentz_symmetry() -> KreinStructure {
    let [g0, _] = gamma();
    KreinStructure::new(g0.scale(I)).expect("iγ⁰ is a fundamental symmetry")
}

/// Per-mode Dirac symbol `i(γ⁰k₀ + γ¹k₁)` of `D = γ^μ ∂_μ`.
pub fn lorentz_mode(k0: f64, k1: f64) -> Operator {
    let [g0, g1] = gamma();
    (&g0.scale_real(k0) + &g1.scale_real(k1)).scale(I)
}
