use serde::{Deserialize, Serialize};

use super::algebra::orthonormalize_complex;
use super::FiniteSpectralTriple;
use crate::error::{Error, Result};
use crate::numerics::{null_space, Operator, C64, ONE};

use nalgebra::DMatrix;

/// `coeff · a₀ da₁ … da_p`.
#[derive(Clone, Debug, PartialEq)]
pub struct FormWord {
    pub coeff: C64,
    pub word: Vec<Operator>,
}

/// Element of the universal differential algebra of degree `p`.
#[derive(Clone, Debug, PartialEq)]
pub struct UniversalForm {
    pub degree: usize,
    pub terms: Vec<FormWord>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct JunkSubspace {
    pub degree: usize,
    pub generators: usize,
    /// Dimension of the kernel of `π` on the generators.
    pub kernel_dim: usize,
    #[serde(skip)]
    pub basis: Vec<Operator>,
    pub dimension: usize,
}

impl UniversalForm {
    pub fn zero(degree: usize) -> Self {
        UniversalForm { degree, terms: vec![] }
    }

    pub fn word(coeff: C64, word: Vec<Operator>) -> Self {
        assert!(!word.is_empty(), "a form word has at least one entry");
        UniversalForm { degree: word.len() - 1, terms: vec![FormWord { coeff, word }] }
    }

    /// `a` as a degree-0 form.
    pub fn element(a: &Operator) -> Self {
        Self::word(ONE, vec![a.clone()])
    }

    pub fn add(mut self, other: &UniversalForm) -> Self {
        assert_eq!(self.degree, other.degree, "forms of different degree");
        self.terms.extend(other.terms.iter().cloned());
        self
    }

    pub fn scale(mut self, c: C64) -> Self {
        for t in &mut self.terms {
            t.coeff *= c;
        }
        self
    }

    /// `d(a₀ da₁ … da_p) = 1 da₀ da₁ … da_p`.
    pub fn d(&self) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|t| {
                let mut w = Vec::with_capacity(t.word.len() + 1);
                w.push(Operator::identity(t.word[0].dim()));
                w.extend(t.word.iter().cloned());
                FormWord { coeff: t.coeff, word: w }
            })
            .collect();
        UniversalForm { degree: self.degree + 1, terms }
    }

    /// `ω · b` by repeated use of `(da) b = d(ab) − a db`.
    pub fn mul_element(&self, b: &Operator) -> Self {
        let mut out = UniversalForm::zero(self.degree);
        for t in &self.terms {
            out = out.add(&word_times(t, b));
        }
        out
    }

    pub fn mul(&self, other: &UniversalForm) -> Self {
        let mut out = UniversalForm::zero(self.degree + other.degree);
        for s in &other.terms {
            let left = self.mul_element(&s.word[0]);
            for t in left.terms {
                let mut w = t.word;
                w.extend(s.word[1..].iter().cloned());
                out.terms.push(FormWord { coeff: t.coeff * s.coeff, word: w });
            }
        }
        out
    }
}

fn word_times(t: &FormWord, b: &Operator) -> UniversalForm {
    let p = t.word.len() - 1;
    if p == 0 {
        return UniversalForm::word(t.coeff, vec![&t.word[0] * b]);
    }
    let mut first = t.word.clone();
    first[p] = &t.word[p] * b;
    let mut out = UniversalForm::word(t.coeff, first);
    let head = FormWord { coeff: t.coeff, word: t.word[..p].to_vec() };
    for h in word_times(&head, &t.word[p]).terms {
        let mut w = h.word;
        w.push(b.clone());
        out.terms.push(FormWord { coeff: -h.coeff, word: w });
    }
    out
}

/// `π(a₀ da₁ … da_p) = a₀ [D,a₁] … [D,a_p]`, summed over terms.
pub fn represent_form(t: &FiniteSpectralTriple, w: &UniversalForm) -> Operator {
    let n = t.hilbert_dim();
    let mut out = Operator::zeros(n);
    for term in &w.terms {
        let mut op = term.word[0].clone();
        for a in &term.word[1..] {
            op = &op * &t.differential(a);
        }
        out = &out + &op.scale(term.coeff);
    }
    out
}

/// Whether `π(w)` vanishes, with its operator norm.
pub fn in_kernel(t: &FiniteSpectralTriple, w: &UniversalForm, tol: f64) -> (bool, f64) {
    let r = crate::numerics::operator_norm(&represent_form(t, w));
    (r <= tol, r)
}

/// Every word of length `degree + 1` in the algebra basis.
pub fn default_generators(t: &FiniteSpectralTriple, degree: usize) -> Vec<UniversalForm> {
    let basis = t.basis();
    let mut words: Vec<Vec<Operator>> = vec![vec![]];
    for _ in 0..=degree {
        words = words
            .into_iter()
            .flat_map(|w| {
                basis.iter().map(move |b| {
                    let mut w = w.clone();
                    w.push(b.clone());
                    w
                })
            })
            .collect();
    }
    words.into_iter().map(|w| UniversalForm::word(ONE, w)).collect()
}

const RANK_CUT: f64 = 1e-8;

fn vectorize_all(ops: &[Operator]) -> DMatrix<C64> {
    let n = ops.first().map(|o| o.dim()).unwrap_or(0);
    DMatrix::from_fn(n * n, ops.len(), |k, j| ops[j].get(k / n, k % n))
}

/// Orthonormal basis of `π(d K)` where `K` is the kernel of `π` on the span of `generators`.
pub fn junk_subspace(t: &FiniteSpectralTriple, p: usize, generators: &[UniversalForm]) -> Result<JunkSubspace> {
    if p == 0 {
        return Err(Error::InvalidInput("junk forms start in degree 1".into()));
    }
    if let Some(g) = generators.iter().find(|g| g.degree != p - 1) {
        return Err(Error::InvalidInput(format!("generator of degree {} for junk degree {p}", g.degree)));
    }
    let images: Vec<Operator> = generators.iter().map(|g| represent_form(t, g)).collect();
    let d_images: Vec<Operator> = generators.iter().map(|g| represent_form(t, &g.d())).collect();
    let kernel = null_space(&vectorize_all(&images), RANK_CUT);
    let n = t.hilbert_dim();
    let junk: Vec<Operator> = kernel
        .iter()
        .map(|c| {
            let mut acc = Operator::zeros(n);
            for (ci, op) in c.iter().zip(&d_images) {
                acc = &acc + &op.scale(*ci);
            }
            acc
        })
        .collect();
    let basis = orthonormalize_complex(&junk, RANK_CUT);
    Ok(JunkSubspace {
        degree: p,
        generators: generators.len(),
        kernel_dim: kernel.len(),
        dimension: basis.len(),
        basis,
    })
}
