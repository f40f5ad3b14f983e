use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

/// Square complex matrix acting on `C^dim`.
///
/// Entries are addressed `(row, col)`; serialized forms list rows in order.
#[derive(Clone, Debug, PartialEq)]
pub struct Operator {
    m: DMatrix<C64>,
}

impl Operator {
    pub fn from_matrix(m: DMatrix<C64>) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::DimensionMismatch(format!(
                "operator must be square, got {}x{}",
                m.nrows(),
                m.ncols()
            )));
        }
        if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Operator { m })
    }

    /// Wraps a matrix produced by arithmetic on valid operators.
    pub(crate) fn wrap(m: DMatrix<C64>) -> Self {
        debug_assert_eq!(m.nrows(), m.ncols());
        Operator { m }
    }

    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Self::from_matrix(DMatrix::from_fn(n, n, |i, j| rows[i][j]))
    }

    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Self::from_matrix(DMatrix::from_fn(n, n, |i, j| C64::new(rows[i][j], 0.0)))
    }

    pub fn from_fn(n: usize, f: impl FnMut(usize, usize) -> C64) -> Self {
        Operator::wrap(DMatrix::from_fn(n, n, f))
    }

    pub fn zeros(n: usize) -> Self {
        Operator::wrap(DMatrix::zeros(n, n))
    }

    pub fn identity(n: usize) -> Self {
        Operator::wrap(DMatrix::identity(n, n))
    }

    pub fn diagonal(d: &[f64]) -> Self {
        let n = d.len();
        Operator::wrap(DMatrix::from_fn(n, n, |i, j| {
            if i == j {
                C64::new(d[i], 0.0)
            } else {
                ZERO
            }
        }))
    }

    pub fn complex_diagonal(d: &[C64]) -> Self {
        let n = d.len();
        Operator::wrap(DMatrix::from_fn(n, n, |i, j| if i == j { d[i] } else { ZERO }))
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.m
    }

    pub fn into_matrix(self) -> DMatrix<C64> {
        self.m
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.m[(i, j)]
    }

    pub fn rows(&self) -> Vec<Vec<C64>> {
        (0..self.dim())
            .map(|i| (0..self.dim()).map(|j| self.m[(i, j)]).collect())
            .collect()
    }

    pub fn adjoint(&self) -> Self {
        Operator::wrap(self.m.adjoint())
    }

    pub fn transpose(&self) -> Self {
        Operator::wrap(self.m.transpose())
    }

    /// Entrywise complex conjugate.
    pub fn conj(&self) -> Self {
        Operator::wrap(self.m.map(|z| z.conj()))
    }

    pub fn scale(&self, c: C64) -> Self {
        Operator::wrap(&self.m * c)
    }

    pub fn scale_real(&self, c: f64) -> Self {
        Operator::wrap(self.m.map(|z| z * c))
    }

    pub fn kron(&self, other: &Operator) -> Self {
        Operator::wrap(self.m.kronecker(&other.m))
    }

    pub fn commutator(&self, other: &Operator) -> Self {
        Operator::wrap(&self.m * &other.m - &other.m * &self.m)
    }

    pub fn anticommutator(&self, other: &Operator) -> Self {
        Operator::wrap(&self.m * &other.m + &other.m * &self.m)
    }

    pub fn trace(&self) -> C64 {
        self.m.trace()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Frobenius inner product `tr(self* other)`.
    pub fn frobenius_dot(&self, other: &Operator) -> C64 {
        self.m
            .iter()
            .zip(other.m.iter())
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.m.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// `‖A − A*‖` in operator norm.
    pub fn hermiticity_residual(&self) -> f64 {
        let d = &self.m - self.m.adjoint();
        if d.iter().all(|z| *z == ZERO) {
            return 0.0;
        }
        operator_norm(&Operator::wrap(d))
    }

    pub fn hermitian_part(&self) -> Self {
        Operator::wrap((&self.m + self.m.adjoint()) * C64::new(0.5, 0.0))
    }

    pub fn is_diagonal(&self, tol: f64) -> bool {
        let n = self.dim();
        (0..n).all(|i| (0..n).all(|j| i == j || self.m[(i, j)].norm() <= tol))
    }

    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        let n = self.dim();
        (0..n)
            .map(|i| (0..n).map(|j| self.m[(i, j)] * v[j]).sum())
            .collect()
    }

    pub fn powi(&self, k: u32) -> Self {
        let mut out = Operator::identity(self.dim());
        for _ in 0..k {
            out = &out * self;
        }
        out
    }
}

/// Largest singular value.
pub fn operator_norm(a: &Operator) -> f64 {
    if a.dim() == 0 {
        return 0.0;
    }
    if a.m.iter().all(|z| *z == ZERO) {
        return 0.0;
    }
    super::eigen::spectral_norm(&a.m)
}

impl<'a> Mul<&'a Operator> for &'a Operator {
    type Output = Operator;
    fn mul(self, rhs: &'a Operator) -> Operator {
        Operator::wrap(&self.m * &rhs.m)
    }
}

impl<'a> Add<&'a Operator> for &'a Operator {
    type Output = Operator;
    fn add(self, rhs: &'a Operator) -> Operator {
        Operator::wrap(&self.m + &rhs.m)
    }
}

impl<'a> Sub<&'a Operator> for &'a Operator {
    type Output = Operator;
    fn sub(self, rhs: &'a Operator) -> Operator {
        Operator::wrap(&self.m - &rhs.m)
    }
}

impl Neg for &Operator {
    type Output = Operator;
    fn neg(self) -> Operator {
        Operator::wrap(-&self.m)
    }
}

impl Mul for Operator {
    type Output = Operator;
    fn mul(self, rhs: Operator) -> Operator {
        Operator::wrap(self.m * rhs.m)
    }
}

impl Add for Operator {
    type Output = Operator;
    fn add(self, rhs: Operator) -> Operator {
        Operator::wrap(self.m + rhs.m)
    }
}

impl Sub for Operator {
    type Output = Operator;
    fn sub(self, rhs: Operator) -> Operator {
        Operator::wrap(self.m - rhs.m)
    }
}

/// Pauli matrices `σx, σy, σz`.
pub fn pauli() -> [Operator; 3] {
    let sx = Operator::from_real_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
    let sy = Operator::from_rows(&[vec![ZERO, -I], vec![I, ZERO]]).unwrap();
    let sz = Operator::diagonal(&[1.0, -1.0]);
    [sx, sy, sz]
}
