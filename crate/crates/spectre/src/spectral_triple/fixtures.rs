//! Small triples used throughout the tests and the guide.

use std::f64::consts::PI;

use super::{diagonal_basis, FiniteSpectralTriple};
use crate::numerics::{Operator, C64, ONE, ZERO};

/// Off-diagonal `[[0, m], [m̄, 0]]`.
pub fn two_point_dirac(m: C64) -> Operator {
    Operator::from_rows(&[vec![ZERO, m], vec![m.conj(), ZERO]]).unwrap()
}

/// `A = C ⊕ C` acting diagonally on `C²`.
pub fn two_point(m: C64) -> FiniteSpectralTriple {
    FiniteSpectralTriple::new(diagonal_basis(2), two_point_dirac(m)).unwrap()
}

/// `A = C ⊕ C` on `H = M₂(C) ≅ C⁴` (row-major): left action `a ⊗ 1`,
/// `D ξ = D₀ξ + ξD₀`, `J ξ = ξ*`, `γ ξ = γ₀ ξ γ₀`; KO-dimension 0.
pub fn two_point_real(m: C64) -> FiniteSpectralTriple {
    let d0 = two_point_dirac(m);
    let id = Operator::identity(2);
    let basis = diagonal_basis(2).into_iter().map(|e| e.kron(&id)).collect();
    let d = &d0.kron(&id) + &id.kron(&d0.transpose());
    let g0 = Operator::diagonal(&[1.0, -1.0]);
    let swap = Operator::from_fn(4, |r, c| if r == 2 * (c % 2) + c / 2 { ONE } else { ZERO });
    FiniteSpectralTriple::new(basis, d)
        .unwrap()
        .with_grading(g0.kron(&g0.transpose()))
        .unwrap()
        .with_real(swap, 0)
        .unwrap()
}

/// Fourier modes `k = −n … n` with `D = diag(k)` and the diagonal algebra.
pub fn circle_truncation(n: usize) -> FiniteSpectralTriple {
    let ks: Vec<f64> = (-(n as i64)..=n as i64).map(|k| k as f64).collect();
    FiniteSpectralTriple::new(diagonal_basis(ks.len()), Operator::diagonal(&ks)).unwrap()
}

/// `n` equally spaced points on the circle: multiplication operators are diagonal and
/// `D = −i d/dθ` is the spectral derivative on the band-limited modes.
pub fn circle_points(n: usize) -> FiniteSpectralTriple {
    let nf = n as f64;
    // modes k = −⌊n/2⌋ … n − 1 − ⌊n/2⌋
    let ks: Vec<f64> = (0..n).map(|j| j as f64 - (n / 2) as f64).collect();
    let d = Operator::from_fn(n, |a, b| {
        let mut s = ZERO;
        for &k in &ks {
            let phase = 2.0 * PI * k * (a as f64 - b as f64) / nf;
            s += C64::from_polar(k / nf, phase);
        }
        s
    });
    FiniteSpectralTriple::new(diagonal_basis(n), d.hermitian_part()).unwrap()
}

/// Toeplitz truncation of the circle: modes `k = 0 … n−1`, `D = diag(k)`, and the operator
/// system spanned by the compressed shifts `(S_j)_{kl} = δ_{k−l, j}` for `|j| < n`.
pub fn circle_toeplitz(n: usize) -> FiniteSpectralTriple {
    let ks: Vec<f64> = (0..n).map(|k| k as f64).collect();
    let basis = (-(n as i64) + 1..n as i64)
        .map(|j| Operator::from_fn(n, |k, l| if k as i64 - l as i64 == j { ONE } else { ZERO }))
        .collect();
    FiniteSpectralTriple::new(basis, Operator::diagonal(&ks)).unwrap()
}

/// Coherent vector `ψ_k = e^{−ikθ}/√n`, so `⟨ψ, S_j ψ⟩ = (1 − |j|/n) e^{ijθ}`.
pub fn coherent_vector(n: usize, theta: f64) -> Vec<C64> {
    (0..n).map(|k| C64::from_polar(1.0 / (n as f64).sqrt(), -(k as f64) * theta)).collect()
}
