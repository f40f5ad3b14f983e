use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::numerics::eigen::least_squares;
use crate::numerics::{Operator, C64, ZERO};

/// Relative least-squares residual above which an operator is outside the span.
pub const MEMBERSHIP_TOL: f64 = 1e-9;

/// Finite-dimensional operator algebra given by a spanning set.
#[derive(Clone, Debug)]
pub struct AlgebraSpan {
    basis: Vec<Operator>,
    // columns = vectorized basis elements
    mat: DMatrix<C64>,
}

fn vectorize(a: &Operator) -> DVector<C64> {
    let n = a.dim();
    DVector::from_fn(n * n, |k, _| a.get(k / n, k % n))
}

impl AlgebraSpan {
    pub fn new(basis: Vec<Operator>) -> Result<Self> {
        let n = basis.first().map(|b| b.dim()).unwrap_or(0);
        if basis.iter().any(|b| b.dim() != n) {
            return Err(Error::DimensionMismatch("basis elements differ in size".into()));
        }
        let mat = DMatrix::from_fn(n * n, basis.len(), |k, j| basis[j].get(k / n, k % n));
        Ok(AlgebraSpan { basis, mat })
    }

    pub fn basis(&self) -> &[Operator] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.first().map(|b| b.dim()).unwrap_or(0)
    }

    /// Least-squares coefficients and the relative residual `‖a − Σ cᵢbᵢ‖_F / ‖a‖_F`.
    pub fn project(&self, a: &Operator) -> (Vec<C64>, f64) {
        let v = vectorize(a);
        let norm = v.norm();
        if self.basis.is_empty() || norm == 0.0 {
            return (vec![ZERO; self.basis.len()], if norm == 0.0 { 0.0 } else { 1.0 });
        }
        let c = least_squares(&self.mat, &v, 1e-12);
        let r = (&self.mat * &c - &v).norm() / norm;
        (c.iter().cloned().collect(), r)
    }

    pub fn contains(&self, a: &Operator) -> bool {
        self.project(a).1 <= MEMBERSHIP_TOL
    }

    /// Largest relative residual of `b*` over the basis.
    pub fn adjoint_residual(&self) -> f64 {
        self.basis.iter().map(|b| self.project(&b.adjoint()).1).fold(0.0, f64::max)
    }

    pub fn combine(&self, c: &[C64]) -> Operator {
        let n = self.dim();
        let mut out = Operator::zeros(n);
        for (b, &ci) in self.basis.iter().zip(c) {
            out = &out + &b.scale(ci);
        }
        out
    }

    /// Real basis of the Hermitian elements, orthonormal for the real Frobenius product.
    pub fn hermitian_basis(&self) -> Vec<Operator> {
        let mut cands = Vec::new();
        for b in &self.basis {
            cands.push(b.hermitian_part());
            cands.push((b - &b.adjoint()).scale(C64::new(0.0, -0.5)));
        }
        orthonormalize_real(&cands, 1e-10)
    }
}

/// Gram–Schmidt over the reals with the product `Re tr(a* b)`, dropping dependent elements.
pub fn orthonormalize_real(ops: &[Operator], rel_cut: f64) -> Vec<Operator> {
    let scale = ops.iter().map(|o| o.frobenius_norm()).fold(0.0, f64::max);
    let mut out: Vec<Operator> = Vec::new();
    for o in ops {
        let mut v = o.clone();
        for _ in 0..2 {
            for e in &out {
                let c = e.frobenius_dot(&v).re;
                v = &v - &e.scale_real(c);
            }
        }
        let n = v.frobenius_norm();
        if n > rel_cut * scale.max(f64::MIN_POSITIVE) {
            out.push(v.scale_real(1.0 / n));
        }
    }
    out
}

/// Gram–Schmidt over the complexes with the Frobenius product.
pub fn orthonormalize_complex(ops: &[Operator], rel_cut: f64) -> Vec<Operator> {
    let scale = ops.iter().map(|o| o.frobenius_norm()).fold(0.0, f64::max);
    let mut out: Vec<Operator> = Vec::new();
    for o in ops {
        let mut v = o.clone();
        for _ in 0..2 {
            for e in &out {
                let c = e.frobenius_dot(&v);
                v = &v - &e.scale(c);
            }
        }
        let n = v.frobenius_norm();
        if n > rel_cut * scale.max(f64::MIN_POSITIVE) {
            out.push(v.scale_real(1.0 / n));
        }
    }
    out
}

/// All diagonal matrix units `E_ii`.
pub fn diagonal_basis(n: usize) -> Vec<Operator> {
    (0..n)
        .map(|i| Operator::from_fn(n, |r, c| if r == i && c == i { C64::new(1.0, 0.0) } else { ZERO }))
        .collect()
}

/// All matrix units `E_ij` of `M_n(C)`.
pub fn matrix_units(n: usize) -> Vec<Operator> {
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            out.push(Operator::from_fn(n, |r, c| if r == i && c == j { C64::new(1.0, 0.0) } else { ZERO }));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn membership_by_projection() {
        let span = AlgebraSpan::new(diagonal_basis(3)).unwrap();
        assert!(span.contains(&Operator::diagonal(&[1.0, -2.0, 0.5])));
        let shift = Operator::from_fn(3, |i, j| if i + 1 == j { C64::new(1.0, 0.0) } else { ZERO });
        assert!(!span.contains(&shift));
        assert!(span.adjoint_residual() < 1e-12);
    }

    #[test]
    fn hermitian_basis_of_m2_has_four_elements() {
        let span = AlgebraSpan::new(matrix_units(2)).unwrap();
        assert_eq!(span.hermitian_basis().len(), 4);
    }
}
