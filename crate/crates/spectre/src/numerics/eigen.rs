use nalgebra::{ComplexField, DMatrix, DVector, Dyn, SymmetricEigen, SVD};

use super::operator::{operator_norm, Operator, C64, ZERO};
use crate::error::{Error, Result};

pub const EIG_RTOL: f64 = 1e-10;
pub const HERMITIAN_RTOL: f64 = 1e-12;
/// Iteration cap for the QR-type eigen and SVD iterations; nalgebra's default is unbounded.
const MAX_ITER: usize = 20_000;
/// Similarity transforms tried when an iteration does not converge.
const RETRIES: usize = 4;

/// Householder reflection `1 − 2vvᵀ/|v|²`, real, symmetric and orthogonal, with a fixed `v` per attempt.
fn reflection<T: ComplexField<RealField = f64>>(n: usize, attempt: usize) -> DMatrix<T> {
    let v: Vec<f64> = (0..n).map(|i| 1.0 + ((i * (2 * attempt + 1) + attempt) % 7) as f64).collect();
    let nn: f64 = v.iter().map(|x| x * x).sum();
    DMatrix::from_fn(n, n, |i, j| T::from_real(if i == j { 1.0 } else { 0.0 } - 2.0 * v[i] * v[j] / nn))
}

/// Eigendecomposition of a Hermitian matrix with bounded iterations. On a stall the matrix is
/// conjugated by a reflection, which leaves the spectrum unchanged, and the vectors are mapped back.
pub(crate) fn symmetric_eigen<T: ComplexField<RealField = f64>>(h: DMatrix<T>) -> Result<SymmetricEigen<T, Dyn>> {
    let n = h.nrows();
    if let Some(e) = h.clone().try_symmetric_eigen(f64::EPSILON, MAX_ITER) {
        return Ok(e);
    }
    for attempt in 1..=RETRIES {
        let r = reflection::<T>(n, attempt);
        if let Some(mut e) = (&r * &h * &r).try_symmetric_eigen(f64::EPSILON, MAX_ITER) {
            e.eigenvectors = &r * e.eigenvectors;
            return Ok(e);
        }
    }
    Err(Error::SolverFailure("eigenvalue iteration did not converge".into()))
}

/// Thin SVD with bounded iterations, retried under orthogonal pre- and post-multiplication.
fn try_svd(a: &DMatrix<C64>, vectors: bool) -> Option<SVD<C64, Dyn, Dyn>> {
    if let Some(s) = a.clone().try_svd(vectors, vectors, f64::EPSILON, MAX_ITER) {
        return Some(s);
    }
    for attempt in 1..=RETRIES {
        let (l, r) = (reflection::<C64>(a.nrows(), attempt), reflection::<C64>(a.ncols(), attempt + RETRIES));
        if let Some(mut s) = (&l * a * &r).try_svd(vectors, vectors, f64::EPSILON, MAX_ITER) {
            s.u = s.u.map(|u| &l * u);
            s.v_t = s.v_t.map(|v| v * &r);
            return Some(s);
        }
    }
    None
}

/// One-sided Jacobi: singular values and right vectors of `a`, used when the QR iteration fails.
fn jacobi_svd(a: &DMatrix<C64>) -> (Vec<f64>, DMatrix<C64>) {
    let n = a.ncols();
    let mut u = a.clone();
    let mut v = DMatrix::<C64>::identity(n, n);
    for _ in 0..200 {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let alpha = u.column(p).norm_squared();
                let beta = u.column(q).norm_squared();
                let gamma = u.column(p).dotc(&u.column(q));
                let g = gamma.norm();
                if g <= 1e-15 * (alpha * beta).sqrt() || g == 0.0 {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let t = if zeta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                let phase = gamma.conj() / g;
                for m in [&mut u, &mut v] {
                    for i in 0..m.nrows() {
                        let (xp, xq) = (m[(i, p)], m[(i, q)]);
                        m[(i, p)] = xp * c - xq * phase * s;
                        m[(i, q)] = xp * s + xq * phase * c;
                    }
                }
            }
        }
        if !rotated {
            break;
        }
    }
    ((0..n).map(|k| u.column(k).norm()).collect(), v)
}

fn singular_values_of(a: &DMatrix<C64>) -> Vec<f64> {
    match try_svd(a, false) {
        Some(s) => s.singular_values.iter().cloned().collect(),
        None => jacobi_svd(a).0,
    }
}

/// Largest singular value.
pub(crate) fn spectral_norm(a: &DMatrix<C64>) -> f64 {
    singular_values_of(a).into_iter().fold(0.0, f64::max)
}

/// Minimum-norm least-squares solution of `a x = b`; singular values below `rcond · σ_max` are dropped.
pub(crate) fn least_squares(a: &DMatrix<C64>, b: &DVector<C64>, rcond: f64) -> DVector<C64> {
    let (sv, u, v) = match try_svd(a, true) {
        Some(s) => (s.singular_values.iter().cloned().collect::<Vec<_>>(), s.u.unwrap(), s.v_t.unwrap().adjoint()),
        None => {
            let (sv, v) = jacobi_svd(a);
            let av = a * &v;
            let u = DMatrix::from_fn(a.nrows(), sv.len(), |i, k| if sv[k] > 0.0 { av[(i, k)] / sv[k] } else { ZERO });
            (sv, u, v)
        }
    };
    let top = sv.iter().cloned().fold(0.0, f64::max);
    let mut x = DVector::from_element(a.ncols(), ZERO);
    for (k, &s) in sv.iter().enumerate() {
        if s > rcond * top && s > 0.0 {
            let coef = u.column(k).dotc(b) / s;
            x += v.column(k) * coef;
        }
    }
    x
}

#[derive(Clone, Debug)]
pub struct EigenDecomposition {
    /// Ascending.
    pub values: Vec<f64>,
    /// Column `k` is the eigenvector for `values[k]`.
    pub vectors: Operator,
}

impl EigenDecomposition {
    pub fn reconstruct(&self) -> Operator {
        let n = self.values.len();
        let v = self.vectors.matrix();
        let scaled = DMatrix::from_fn(n, n, |i, j| v[(i, j)] * self.values[j]);
        Operator::wrap(scaled * v.adjoint())
    }

    pub fn vector(&self, k: usize) -> Vec<C64> {
        self.vectors.matrix().column(k).iter().cloned().collect()
    }
}

fn check_hermitian(a: &Operator) -> Result<()> {
    let m = a.matrix();
    let diff = m - m.adjoint();
    if diff.iter().all(|z| *z == ZERO) {
        return Ok(());
    }
    let residual = operator_norm(&Operator::wrap(diff));
    let scale = operator_norm(a);
    if residual > HERMITIAN_RTOL * scale {
        return Err(Error::NonHermitianInput { residual });
    }
    Ok(())
}

pub fn hermitian_eig(a: &Operator) -> Result<EigenDecomposition> {
    check_hermitian(a)?;
    hermitian_eig_unchecked(a)
}

/// Eigendecomposition of the Hermitian part of `a`.
pub(crate) fn hermitian_eig_unchecked(a: &Operator) -> Result<EigenDecomposition> {
    let n = a.dim();
    if n == 0 {
        return Ok(EigenDecomposition { values: vec![], vectors: Operator::zeros(0) });
    }
    let h = a.hermitian_part().into_matrix();
    let eig = symmetric_eigen(h)?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = DMatrix::from_fn(n, n, |i, j| eig.eigenvectors[(i, order[j])]);
    Ok(EigenDecomposition { values, vectors: Operator::wrap(vectors) })
}

/// `V φ(Λ) V*` for Hermitian `a`.
pub fn matrix_function(a: &Operator, phi: impl Fn(f64) -> f64) -> Result<Operator> {
    let eig = hermitian_eig(a)?;
    apply_spectral(&eig, phi)
}

pub fn apply_spectral(eig: &EigenDecomposition, phi: impl Fn(f64) -> f64) -> Result<Operator> {
    let mapped: Vec<f64> = eig
        .values
        .iter()
        .map(|&l| {
            let y = phi(l);
            if y.is_finite() {
                Ok(y)
            } else {
                Err(Error::DomainError { eigenvalue: l })
            }
        })
        .collect::<Result<_>>()?;
    Ok(EigenDecomposition { values: mapped, vectors: eig.vectors.clone() }.reconstruct())
}

/// Singular values, descending.
pub fn singular_values_desc(a: &Operator) -> Vec<f64> {
    if a.dim() == 0 {
        return vec![];
    }
    let mut sv = singular_values_of(a.matrix());
    sv.sort_by(|x, y| y.total_cmp(x));
    sv
}

/// Orthonormal basis of the numerical null space of a (possibly rectangular) complex matrix.
/// Singular values below `rel_cut · σ_max` count as zero.
pub fn null_space(m: &DMatrix<C64>, rel_cut: f64) -> Vec<Vec<C64>> {
    let ncols = m.ncols();
    if ncols == 0 {
        return vec![];
    }
    // Pad to at least square so that the SVD yields a full right basis.
    let rows = m.nrows().max(ncols);
    let padded = DMatrix::from_fn(rows, ncols, |i, j| if i < m.nrows() { m[(i, j)] } else { ZERO });
    let (sv, v) = match try_svd(&padded, true) {
        Some(s) => (s.singular_values.iter().cloned().collect::<Vec<_>>(), s.v_t.unwrap().adjoint()),
        None => jacobi_svd(&padded),
    };
    let top = sv.iter().cloned().fold(0.0, f64::max);
    (0..ncols)
        .filter(|&k| top == 0.0 || sv[k] <= rel_cut * top)
        .map(|k| v.column(k).iter().cloned().collect())
        .collect()
}
