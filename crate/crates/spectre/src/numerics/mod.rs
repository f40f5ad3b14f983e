//! Dense complex linear algebra and the cone-program solver.

pub mod cone;
pub mod eigen;
pub mod operator;
pub mod parallel;
pub(crate) mod sparse;

pub use cone::{
    solve_cone_program, solve_cone_program_with, AffineForm, ConeProgram, ConeSolution, SocConstraint,
    SolveStatus, SolverSettings,
};
pub use eigen::{
    apply_spectral, hermitian_eig, matrix_function, null_space, singular_values_desc, EigenDecomposition,
};
pub use operator::{operator_norm, pauli, Operator, C64, I, ONE, ZERO};
