//! Characters, Gel'fand transform and GNS representations of finite-dimensional C*-algebras.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{hermitian_eig, null_space, operator_norm, Operator, C64, ONE, ZERO};
use crate::spectral_triple::{orthonormalize_complex, AlgebraSpan, MEMBERSHIP_TOL};

pub const COMMUTE_TOL: f64 = 1e-10;
/// Joint eigenvalues closer than this on every basis element belong to one character.
pub const MERGE_TOL: f64 = 1e-8;
pub const GRAM_CUT: f64 = 1e-10;
const COMMUTANT_CUT: f64 = 1e-8;

/// Points of the spectrum of a commutative algebra.
#[derive(Clone, Debug)]
pub struct CharacterSet {
    span: AlgebraSpan,
    /// `values[c][k] = χ_c(b_k)`.
    pub values: Vec<Vec<C64>>,
    /// Simultaneously diagonalizing unitary.
    pub unitary: Operator,
    /// Columns of `unitary` belonging to each character.
    pub classes: Vec<Vec<usize>>,
}

impl CharacterSet {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn basis(&self) -> &[Operator] {
        self.span.basis()
    }

    /// A unit joint eigenvector of character `c`.
    pub fn representative(&self, c: usize) -> Vec<C64> {
        let col = self.classes[c][0];
        self.unitary.matrix().column(col).iter().cloned().collect()
    }

    /// `χ_c` as a vector state `a ↦ ⟨v, a v⟩`, valid on the whole algebra.
    pub fn evaluate(&self, c: usize, a: &Operator) -> C64 {
        let v = self.representative(c);
        let av = a.apply(&v);
        v.iter().zip(&av).map(|(x, y)| x.conj() * y).sum()
    }

    /// Largest `|χ(b_i b_j) − χ(b_i)χ(b_j)|` and `|χ(b*) − conj χ(b)|`.
    pub fn multiplicativity_residual(&self) -> f64 {
        let b = self.basis();
        let mut r: f64 = 0.0;
        for c in 0..self.len() {
            for (i, bi) in b.iter().enumerate() {
                r = r.max((self.evaluate(c, &bi.adjoint()) - self.values[c][i].conj()).norm());
                for (j, bj) in b.iter().enumerate() {
                    let lhs = self.evaluate(c, &(bi * bj));
                    r = r.max((lhs - self.values[c][i] * self.values[c][j]).norm());
                }
            }
        }
        r
    }
}

fn commutation_residual(basis: &[Operator]) -> f64 {
    let mut r: f64 = 0.0;
    for (i, a) in basis.iter().enumerate() {
        for b in &basis[i + 1..] {
            let scale = (operator_norm(a) * operator_norm(b)).max(1.0);
            r = r.max(operator_norm(&a.commutator(b)) / scale);
        }
    }
    r
}

/// Fixed irrational weights so that one Hermitian combination separates joint eigenspaces.
fn weight(k: usize) -> f64 {
    let g = 0.618_033_988_749_894_9_f64;
    ((k as f64 + 1.0) * g).fract() + 0.5 / (k as f64 + 2.0).sqrt()
}

pub fn characters(basis: &[Operator]) -> Result<CharacterSet> {
    let span = AlgebraSpan::new(basis.to_vec())?;
    let residual = commutation_residual(basis);
    if residual > COMMUTE_TOL {
        return Err(Error::NotCommutative { residual });
    }
    let n = span.dim();
    let mut h = Operator::zeros(n);
    for (k, b) in basis.iter().enumerate() {
        let re = b.hermitian_part();
        let im = (b - &b.adjoint()).scale(C64::new(0.0, -0.5));
        h = &h + &(&re.scale_real(weight(2 * k)) + &im.scale_real(weight(2 * k + 1)));
    }
    let eig = hermitian_eig(&h.hermitian_part())?;
    let vecs: Vec<Vec<C64>> = (0..n).map(|j| eig.vector(j)).collect();
    let joint: Vec<Vec<C64>> = vecs
        .iter()
        .map(|v| {
            basis
                .iter()
                .map(|b| v.iter().zip(b.apply(v)).map(|(x, y)| x.conj() * y).sum())
                .collect()
        })
        .collect();
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for j in 0..n {
        if joint[j].iter().all(|z| z.norm() <= MERGE_TOL) {
            // the zero functional is not a character
            continue;
        }
        let close = |c: &Vec<usize>| joint[c[0]].iter().zip(&joint[j]).all(|(a, b)| (a - b).norm() <= MERGE_TOL);
        match classes.iter_mut().find(|c| close(c)) {
            Some(c) => c.push(j),
            None => classes.push(vec![j]),
        }
    }
    let anchor = |c: &Vec<usize>| {
        c.iter()
            .map(|&j| {
                let v = &vecs[j];
                (0..n).max_by(|&a, &b| v[a].norm().total_cmp(&v[b].norm())).unwrap_or(0)
            })
            .min()
            .unwrap_or(0)
    };
    classes.sort_by_key(anchor);
    let values = classes.iter().map(|c| joint[c[0]].clone()).collect();
    Ok(CharacterSet { span, values, unitary: eig.vectors, classes })
}

/// `â(χ) = χ(a)` for every character.
pub fn gelfand_transform(a: &Operator, cs: &CharacterSet) -> Result<Vec<C64>> {
    let (coef, residual) = cs.span.project(a);
    if residual > MEMBERSHIP_TOL {
        return Err(Error::NotInAlgebra { residual });
    }
    Ok(cs.values.iter().map(|row| row.iter().zip(&coef).map(|(x, c)| x * c).sum()).collect())
}

#[derive(Clone, Debug)]
pub enum StateFunctional {
    /// Convex weights over characters.
    Mixture { characters: CharacterSet, weights: Vec<f64> },
    /// `a ↦ tr(ρ a)`.
    Density(Operator),
}

const STATE_TOL: f64 = 1e-10;

impl StateFunctional {
    pub fn mixture(characters: CharacterSet, weights: Vec<f64>) -> Result<Self> {
        if weights.len() != characters.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} weights for {} characters",
                weights.len(),
                characters.len()
            )));
        }
        if let Some(w) = weights.iter().find(|w| !(**w >= -STATE_TOL)) {
            return Err(Error::NotPositive { value: *w });
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidInput(format!("weights sum to {total}")));
        }
        Ok(StateFunctional::Mixture { characters, weights })
    }

    pub fn pure(characters: CharacterSet, c: usize) -> Result<Self> {
        let mut w = vec![0.0; characters.len()];
        *w.get_mut(c).ok_or_else(|| Error::InvalidInput(format!("no character {c}")))? = 1.0;
        Self::mixture(characters, w)
    }

    pub fn density(rho: Operator) -> Result<Self> {
        let eig = hermitian_eig(&rho)?;
        let lo = eig.values.first().copied().unwrap_or(0.0);
        if lo < -STATE_TOL {
            return Err(Error::NotPositive { value: lo });
        }
        let tr = rho.trace();
        if (tr - ONE).norm() > 1e-9 {
            return Err(Error::InvalidInput(format!("density has trace {tr}")));
        }
        Ok(StateFunctional::Density(rho))
    }

    pub fn evaluate(&self, a: &Operator) -> C64 {
        match self {
            StateFunctional::Density(rho) => (rho * a).trace(),
            StateFunctional::Mixture { characters, weights } => {
                weights.iter().enumerate().map(|(c, w)| characters.evaluate(c, a) * *w).sum()
            }
        }
    }

    /// Density matrix reproducing the functional on the algebra.
    pub fn to_density(&self) -> Operator {
        match self {
            StateFunctional::Density(rho) => rho.clone(),
            StateFunctional::Mixture { characters, weights } => {
                let n = characters.unitary.dim();
                let mut rho = Operator::zeros(n);
                for (c, w) in weights.iter().enumerate() {
                    let v = characters.representative(c);
                    let p = Operator::from_fn(n, |i, j| v[i] * v[j].conj());
                    rho = &rho + &p.scale_real(*w);
                }
                rho
            }
        }
    }

    /// `(1 − t) self + t other`.
    pub fn convex(&self, other: &StateFunctional, t: f64) -> Result<StateFunctional> {
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::OutOfRange { value: t, lo: 0.0, hi: 1.0 });
        }
        if let (
            StateFunctional::Mixture { characters, weights: w1 },
            StateFunctional::Mixture { weights: w2, .. },
        ) = (self, other)
        {
            if w1.len() == w2.len() {
                let w = w1.iter().zip(w2).map(|(a, b)| (1.0 - t) * a + t * b).collect();
                return Self::mixture(characters.clone(), w);
            }
        }
        let rho = &self.to_density().scale_real(1.0 - t) + &other.to_density().scale_real(t);
        Self::density(rho)
    }
}

#[derive(Clone, Debug)]
pub struct GnsRepresentation {
    /// `π(b_k)` for each input basis element.
    pub rep: Vec<Operator>,
    pub cyclic_vector: Vec<C64>,
    span: Vec<Operator>,
    to_gns: DMatrix<C64>,
    from_gns: DMatrix<C64>,
}

impl GnsRepresentation {
    pub fn dim(&self) -> usize {
        self.cyclic_vector.len()
    }

    /// `π(a)` for any `a` in the algebra.
    pub fn represent(&self, a: &Operator) -> Result<Operator> {
        let m = left_multiplication(&self.span, a)?;
        Operator::from_matrix(&self.to_gns * m * &self.from_gns)
    }

    /// Largest `|φ(a) − ⟨ξ, π(a) ξ⟩|` over the basis.
    pub fn reproduction_residual(&self, basis: &[Operator], phi: &StateFunctional) -> f64 {
        basis
            .iter()
            .zip(&self.rep)
            .map(|(a, p)| {
                let pv = p.apply(&self.cyclic_vector);
                let inner: C64 = self.cyclic_vector.iter().zip(&pv).map(|(x, y)| x.conj() * y).sum();
                (phi.evaluate(a) - inner).norm()
            })
            .fold(0.0, f64::max)
    }
}

/// Coefficient matrix of `x ↦ a x` on an orthonormal spanning set.
fn left_multiplication(span: &[Operator], a: &Operator) -> Result<DMatrix<C64>> {
    let k = span.len();
    let mut m = DMatrix::from_element(k, k, ZERO);
    for (j, b) in span.iter().enumerate() {
        let ab = a * b;
        let mut rest = ab.clone();
        for (i, e) in span.iter().enumerate() {
            let c = e.frobenius_dot(&ab);
            m[(i, j)] = c;
            rest = &rest - &e.scale(c);
        }
        let residual = rest.frobenius_norm() / ab.frobenius_norm().max(f64::MIN_POSITIVE);
        if residual > MEMBERSHIP_TOL {
            return Err(Error::NotInAlgebra { residual });
        }
    }
    Ok(m)
}

/// GNS construction on the unitization of the span of `basis`.
pub fn gns(basis: &[Operator], phi: &StateFunctional) -> Result<GnsRepresentation> {
    let n = basis.first().map(|b| b.dim()).ok_or_else(|| Error::InvalidInput("empty algebra".into()))?;
    let mut cands = vec![Operator::identity(n)];
    cands.extend(basis.iter().cloned());
    let span = orthonormalize_complex(&cands, 1e-12);
    let k = span.len();
    let gram = Operator::from_fn(k, |i, j| phi.evaluate(&(&span[i].adjoint() * &span[j])));
    let eig = hermitian_eig(&gram.hermitian_part())?;
    let lo = eig.values.first().copied().unwrap_or(0.0);
    if lo < -GRAM_CUT || gram.hermiticity_residual() > 1e-8 {
        return Err(Error::NotPositive { value: lo });
    }
    let keep: Vec<usize> = (0..k).filter(|&j| eig.values[j] > GRAM_CUT).collect();
    let u = eig.vectors.matrix();
    let r = keep.len();
    // T = Λ^{1/2} U*, S = U Λ^{-1/2}
    let to_gns = DMatrix::from_fn(r, k, |i, j| u[(j, keep[i])].conj() * eig.values[keep[i]].sqrt());
    let from_gns = DMatrix::from_fn(k, r, |i, j| u[(i, keep[j])] / eig.values[keep[j]].sqrt());
    let one = DMatrix::from_fn(k, 1, |i, _| span[i].frobenius_dot(&Operator::identity(n)));
    let xi = &to_gns * one;
    let mut out = GnsRepresentation {
        rep: vec![],
        cyclic_vector: xi.iter().cloned().collect(),
        span,
        to_gns,
        from_gns,
    };
    out.rep = basis.iter().map(|b| out.represent(b)).collect::<Result<_>>()?;
    Ok(out)
}

/// Dimension of `{X : [X, π(a)] = 0 ∀a}`.
pub fn commutant_dimension(rep: &[Operator]) -> usize {
    let Some(n) = rep.first().map(|r| r.dim()) else {
        return 0;
    };
    if n == 0 {
        return 0;
    }
    let nn = n * n;
    let mut m = DMatrix::from_element(nn * rep.len(), nn, ZERO);
    let id = Operator::identity(n);
    for (s, a) in rep.iter().enumerate() {
        // column-major vec(AX − XA) = (I⊗A − Aᵀ⊗I) vec(X)
        let block = (&id.kron(a) - &a.transpose().kron(&id)).into_matrix();
        m.view_mut((s * nn, 0), (nn, nn)).copy_from(&block);
    }
    null_space(&m, COMMUTANT_CUT).len()
}

/// Schur test: the commutant is the scalars.
pub fn is_irreducible(rep: &[Operator]) -> bool {
    match rep.first() {
        None => false,
        Some(r) if r.dim() == 1 => true,
        Some(_) => commutant_dimension(rep) == 1,
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CharacterSummary {
    pub count: usize,
    pub values: Vec<Vec<[f64; 2]>>,
    pub multiplicativity_residual: f64,
}

impl From<&CharacterSet> for CharacterSummary {
    fn from(cs: &CharacterSet) -> Self {
        CharacterSummary {
            count: cs.len(),
            values: cs.values.iter().map(|r| r.iter().map(|z| [z.re, z.im]).collect()).collect(),
            multiplicativity_residual: cs.multiplicativity_residual(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::pauli;
    use crate::spectral_triple::{diagonal_basis, matrix_units};

    #[test]
    fn diagonal_algebra_characters_are_evaluations() {
        let cs = characters(&diagonal_basis(4)).unwrap();
        assert_eq!(cs.len(), 4);
        for (c, row) in cs.values.iter().enumerate() {
            for (k, z) in row.iter().enumerate() {
                let want = if c == k { 1.0 } else { 0.0 };
                assert!((z - C64::new(want, 0.0)).norm() < 1e-12);
            }
        }
        assert!(cs.multiplicativity_residual() < 1e-12);
    }

    #[test]
    fn scalars_have_one_character() {
        assert_eq!(characters(&[Operator::identity(3)]).unwrap().len(), 1);
    }

    #[test]
    fn sigma_x_characters() {
        let cs = characters(&[Operator::identity(2), pauli()[0].clone()]).unwrap();
        let mut v: Vec<f64> = cs.values.iter().map(|r| r[1].re).collect();
        v.sort_by(f64::total_cmp);
        assert!((v[0] + 1.0).abs() < 1e-12 && (v[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn noncommutative_rejected() {
        assert!(matches!(characters(&matrix_units(2)), Err(Error::NotCommutative { .. })));
    }

    #[test]
    fn transform_of_diag() {
        let cs = characters(&diagonal_basis(2)).unwrap();
        let a = Operator::diagonal(&[2.0, -3.0]);
        let hat = gelfand_transform(&a, &cs).unwrap();
        assert!((hat[0].re - 2.0).abs() < 1e-12 && (hat[1].re + 3.0).abs() < 1e-12);
        assert!(matches!(gelfand_transform(&pauli()[0], &cs), Err(Error::NotInAlgebra { .. })));
    }

    #[test]
    fn gns_of_character_is_one_dimensional() {
        let basis = diagonal_basis(2);
        let phi = StateFunctional::pure(characters(&basis).unwrap(), 0).unwrap();
        let g = gns(&basis, &phi).unwrap();
        assert_eq!(g.dim(), 1);
        assert!(is_irreducible(&g.rep));
        assert!(g.reproduction_residual(&basis, &phi) < 1e-12);
    }

    #[test]
    fn gns_of_half_mixture() {
        let basis = diagonal_basis(2);
        let phi = StateFunctional::mixture(characters(&basis).unwrap(), vec![0.5, 0.5]).unwrap();
        let g = gns(&basis, &phi).unwrap();
        assert_eq!(g.dim(), 2);
        let norm: f64 = g.cyclic_vector.iter().map(|z| z.norm_sqr()).sum();
        assert!((norm - 1.0).abs() < 1e-12);
        assert!(!is_irreducible(&g.rep));
    }

    #[test]
    fn gns_of_m2_vector_state() {
        let basis = matrix_units(2);
        let phi = StateFunctional::density(Operator::diagonal(&[1.0, 0.0])).unwrap();
        let g = gns(&basis, &phi).unwrap();
        assert_eq!(g.dim(), 2);
        assert!(g.reproduction_residual(&basis, &phi) < 1e-10);
        assert!(is_irreducible(&g.rep));
    }

    #[test]
    fn schur_examples() {
        assert!(is_irreducible(&matrix_units(2)));
        let doubled: Vec<Operator> = [2.0, -1.0].iter().map(|c| Operator::identity(2).scale_real(*c)).collect();
        assert_eq!(commutant_dimension(&doubled), 4);
        assert!(!is_irreducible(&doubled));
    }

    #[test]
    fn negative_density_rejected() {
        assert!(matches!(
            StateFunctional::density(Operator::diagonal(&[1.5, -0.5])),
            Err(Error::NotPositive { .. })
        ));
    }
}
