use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (residual {residual:.3e})")]
    NonHermitianInput { residual: f64 },
    #[error("operator is not Hermitian (residual {residual:.3e})")]
    NotHermitian { residual: f64 },
    #[error("function is undefined at eigenvalue {eigenvalue}")]
    DomainError { eigenvalue: f64 },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("non-finite entry in input")]
    NonFinite,
    #[error("cone program is infeasible")]
    Infeasible,
    #[error("cone program is unbounded below")]
    Unbounded,
    #[error("iteration budget of {0} exhausted")]
    MaxIterExceeded(usize),
    #[error("solver failure: {0}")]
    SolverFailure(String),
    #[error("triple has no grading")]
    MissingGrading,
    #[error("triple has no real structure")]
    NoRealStructure,
    #[error("KO-dimension {0} outside 0..8")]
    InvalidKoDim(i64),
    #[error("argument {value} outside [{lo}, {hi}]")]
    OutOfRange { value: f64, lo: f64, hi: f64 },
    #[error("profile of length {len} is shorter than {min}")]
    TooShort { len: usize, min: usize },
    #[error("algebra is not commutative (residual {residual:.3e})")]
    NotCommutative { residual: f64 },
    #[error("element is not in the algebra span (residual {residual:.3e})")]
    NotInAlgebra { residual: f64 },
    #[error("functional is not positive (value {value:.3e})")]
    NotPositive { value: f64 },
    #[error("vector is not timelike (norm {norm:.3e})")]
    NotTimelike { norm: f64 },
    #[error("lattice too small: {0}")]
    LatticeTooSmall(String),
    #[error("invalid lattice: {0}")]
    InvalidLattice(String),
    #[error("J is not a fundamental symmetry (|J*-J| = {adjoint:.3e}, |J^2-1| = {square:.3e})")]
    InvalidSymmetry { adjoint: f64, square: f64 },
    #[error("generators do not separate points {0} and {1}")]
    NotSeparating(usize, usize),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}
