//! Finite spectral triples `(A, H, D)` with optional grading and real structure.

mod algebra;
pub mod fixtures;
mod forms;

pub use algebra::{diagonal_basis, matrix_units, orthonormalize_complex, orthonormalize_real, AlgebraSpan, MEMBERSHIP_TOL};
pub use forms::{default_generators, in_kernel, junk_subspace, represent_form, FormWord, JunkSubspace, UniversalForm};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{hermitian_eig, operator_norm, Operator, C64};
use crate::report::ValidationReport;

/// `(ε, ε′, ε″)`; `ε″` is absent in odd KO-dimension.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KoSigns {
    pub epsilon: i8,
    pub epsilon_prime: i8,
    pub epsilon_second: Option<i8>,
}

const KO_EPSILON: [i8; 8] = [1, 1, -1, -1, -1, -1, 1, 1];
const KO_EPSILON_PRIME: [i8; 8] = [1, -1, 1, 1, 1, -1, 1, 1];
const KO_EPSILON_SECOND: [i8; 8] = [1, 0, -1, 0, 1, 0, -1, 0];

pub fn ko_signs(n: i64) -> Result<KoSigns> {
    if !(0..8).contains(&n) {
        return Err(Error::InvalidKoDim(n));
    }
    let n = n as usize;
    Ok(KoSigns {
        epsilon: KO_EPSILON[n],
        epsilon_prime: KO_EPSILON_PRIME[n],
        epsilon_second: (n % 2 == 0).then_some(KO_EPSILON_SECOND[n]),
    })
}

/// Antilinear `J = C∘K` with `K` entrywise conjugation.
#[derive(Clone, Debug, PartialEq)]
pub struct RealStructure {
    pub c: Operator,
    c_inv: Operator,
    pub ko_dim: u8,
}

impl RealStructure {
    pub fn new(c: Operator, ko_dim: i64) -> Result<Self> {
        ko_signs(ko_dim)?;
        let inv = c
            .matrix()
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::InvalidInput("J matrix is singular".into()))?;
        let c_inv = Operator::from_matrix(inv)?;
        Ok(RealStructure { c, c_inv, ko_dim: ko_dim as u8 })
    }

    pub fn signs(&self) -> KoSigns {
        ko_signs(self.ko_dim as i64).expect("checked at construction")
    }

    /// `J X J⁻¹ = C X̄ C⁻¹`.
    pub fn conjugate(&self, x: &Operator) -> Operator {
        &(&self.c * &x.conj()) * &self.c_inv
    }

    /// `J² = C C̄`.
    pub fn square(&self) -> Operator {
        &self.c * &self.c.conj()
    }

    /// Opposite element `b° = J b* J⁻¹`.
    pub fn opposite(&self, b: &Operator) -> Operator {
        self.conjugate(&b.adjoint())
    }

    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        let conj: Vec<C64> = v.iter().map(|z| z.conj()).collect();
        self.c.apply(&conj)
    }
}

#[derive(Clone, Debug)]
pub struct FiniteSpectralTriple {
    pub algebra: AlgebraSpan,
    pub dirac: Operator,
    pub grading: Option<Operator>,
    pub real: Option<RealStructure>,
    pub unital: bool,
}

impl FiniteSpectralTriple {
    pub fn new(algebra_basis: Vec<Operator>, dirac: Operator) -> Result<Self> {
        let n = dirac.dim();
        if algebra_basis.iter().any(|a| a.dim() != n) {
            return Err(Error::DimensionMismatch(format!("algebra elements must act on C^{n}")));
        }
        Ok(FiniteSpectralTriple {
            algebra: AlgebraSpan::new(algebra_basis)?,
            dirac,
            grading: None,
            real: None,
            unital: true,
        })
    }

    pub fn with_grading(mut self, g: Operator) -> Result<Self> {
        if g.dim() != self.dirac.dim() {
            return Err(Error::DimensionMismatch("grading size".into()));
        }
        self.grading = Some(g);
        Ok(self)
    }

    pub fn with_real(mut self, c: Operator, ko_dim: i64) -> Result<Self> {
        if c.dim() != self.dirac.dim() {
            return Err(Error::DimensionMismatch("J matrix size".into()));
        }
        self.real = Some(RealStructure::new(c, ko_dim)?);
        Ok(self)
    }

    pub fn non_unital(mut self) -> Self {
        self.unital = false;
        self
    }

    pub fn hilbert_dim(&self) -> usize {
        self.dirac.dim()
    }

    pub fn basis(&self) -> &[Operator] {
        self.algebra.basis()
    }

    /// `[D, a]`.
    pub fn differential(&self, a: &Operator) -> Operator {
        self.dirac.commutator(a)
    }
}

fn max_over<I: IntoIterator<Item = f64>>(it: I) -> f64 {
    it.into_iter().fold(0.0, f64::max)
}

/// Residual of every axiom that applies to `t`.
pub fn validate_triple(t: &FiniteSpectralTriple, tol: f64) -> ValidationReport {
    let mut r = ValidationReport::new(tol);
    let n = t.hilbert_dim();
    let id = Operator::identity(n);
    let basis = t.basis();
    r.push("dirac_self_adjoint", t.dirac.hermiticity_residual());
    r.push("algebra_adjoint_closed", t.algebra.adjoint_residual());
    if t.unital {
        r.push("algebra_unital", t.algebra.project(&id).1);
    }
    r.push_note("compact_resolvent", 0.0, "trivially satisfied (finite dimension)");
    r.push_note("bounded_commutators", 0.0, "trivially satisfied (finite dimension)");
    if let Some(g) = &t.grading {
        r.push("grading_involution", operator_norm(&(&(g * g) - &id)));
        r.push("grading_self_adjoint", g.hermiticity_residual());
        r.push("grading_commutes_algebra", max_over(basis.iter().map(|a| operator_norm(&g.commutator(a)))));
        r.push("grading_anticommutes_dirac", operator_norm(&g.anticommutator(&t.dirac)));
    }
    if let Some(j) = &t.real {
        let s = j.signs();
        let eps = |e: i8| id.scale_real(e as f64);
        r.push("j_antiunitary", operator_norm(&(&(&j.c.adjoint() * &j.c) - &id)));
        r.push("j_square", operator_norm(&(&j.square() - &eps(s.epsilon))));
        r.push(
            "j_dirac",
            operator_norm(&(&j.conjugate(&t.dirac) - &t.dirac.scale_real(s.epsilon_prime as f64))),
        );
        match (&t.grading, s.epsilon_second) {
            (Some(g), Some(e2)) => r.push("j_grading", operator_norm(&(&j.conjugate(g) - &g.scale_real(e2 as f64)))),
            (None, Some(_)) => r.push_failure("j_grading", "even KO-dimension requires a grading"),
            _ => {}
        }
        let opp: Vec<Operator> = basis.iter().map(|b| j.opposite(b)).collect();
        let mut order0: f64 = 0.0;
        let mut order1: f64 = 0.0;
        for a in basis {
            let da = t.differential(a);
            for bo in &opp {
                order0 = order0.max(operator_norm(&a.commutator(bo)));
                order1 = order1.max(operator_norm(&da.commutator(bo)));
            }
        }
        r.push("order_zero", order0);
        r.push("first_order", order1);
    }
    r
}

/// `A = A₁⊗A₂`, `D = D₁⊗1 + γ₁⊗D₂`, `γ = γ₁⊗γ₂`, `J = J₁⊗J₂`.
pub fn product_triple(t1: &FiniteSpectralTriple, t2: &FiniteSpectralTriple) -> Result<FiniteSpectralTriple> {
    let g1 = t1.grading.as_ref().ok_or(Error::MissingGrading)?;
    let i2 = Operator::identity(t2.hilbert_dim());
    let mut basis = Vec::new();
    for a in t1.basis() {
        for b in t2.basis() {
            basis.push(a.kron(b));
        }
    }
    let d = &t1.dirac.kron(&i2) + &g1.kron(&t2.dirac);
    let mut out = FiniteSpectralTriple::new(basis, d)?;
    out.unital = t1.unital && t2.unital;
    if let Some(g2) = &t2.grading {
        out = out.with_grading(g1.kron(g2))?;
    }
    if let (Some(j1), Some(j2)) = (&t1.real, &t2.real) {
        out = out.with_real(j1.c.kron(&j2.c), (j1.ko_dim as i64 + j2.ko_dim as i64) % 8)?;
    }
    Ok(out)
}

/// `D_A = D + A + ε′ J A J⁻¹`.
pub fn fluctuate_dirac(t: &FiniteSpectralTriple, a: &Operator) -> Result<Operator> {
    let j = t.real.as_ref().ok_or(Error::NoRealStructure)?;
    if a.dim() != t.hilbert_dim() {
        return Err(Error::DimensionMismatch("gauge potential size".into()));
    }
    let residual = a.hermiticity_residual();
    if residual > 1e-10 * operator_norm(a).max(1.0) {
        return Err(Error::NotHermitian { residual });
    }
    let ep = j.signs().epsilon_prime as f64;
    Ok(&(&t.dirac + a) + &j.conjugate(a).scale_real(ep))
}

/// `e^{ih}` for Hermitian `h`; a unitary of the algebra when `h` is.
pub fn unitary_exp(h: &Operator) -> Result<Operator> {
    let eig = hermitian_eig(h)?;
    let n = h.dim();
    Ok(Operator::from_fn(n, |i, j| {
        (0..n).map(|k| eig.vectors.get(i, k) * C64::from_polar(1.0, eig.values[k]) * eig.vectors.get(j, k).conj()).sum()
    }))
}

/// `A ↦ uAu* + u[D,u*]`.
pub fn gauge_transform_potential(t: &FiniteSpectralTriple, a: &Operator, u: &Operator) -> Operator {
    let us = u.adjoint();
    &(&(u * a) * &us) + &(u * &t.differential(&us))
}

/// `‖D_{A^u} − U D_A U*‖` with `U = u J u J⁻¹`.
pub fn gauge_covariance_residual(t: &FiniteSpectralTriple, a: &Operator, u: &Operator) -> Result<f64> {
    let j = t.real.as_ref().ok_or(Error::NoRealStructure)?;
    let big_u = u * &j.conjugate(u);
    let lhs = fluctuate_dirac(t, &gauge_transform_potential(t, a, u).hermitian_part())?;
    let rhs = &(&big_u * &fluctuate_dirac(t, a)?) * &big_u.adjoint();
    Ok(operator_norm(&(&lhs - &rhs)))
}

/// `tr f(D_A/Λ)`; with `a = None` the unperturbed `D` is used.
pub fn spectral_action(
    t: &FiniteSpectralTriple,
    a: Option<&Operator>,
    f: impl Fn(f64) -> f64,
    lambda: f64,
) -> Result<f64> {
    let d = match a {
        Some(a) => fluctuate_dirac(t, a)?,
        None => t.dirac.clone(),
    };
    spectral_action_of(&d, f, lambda)
}

pub fn spectral_action_of(d: &Operator, f: impl Fn(f64) -> f64, lambda: f64) -> Result<f64> {
    if !(lambda > 0.0) {
        return Err(Error::OutOfRange { value: lambda, lo: 0.0, hi: f64::INFINITY });
    }
    let eig = hermitian_eig(d)?;
    Ok(eig.values.iter().map(|l| f(l / lambda)).sum())
}
