use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::numerics::{matrix_function, operator_norm, Operator, C64, ONE, ZERO};

/// `coeff · F₀ ⊗ F₁ ⊗ …`; `None` stands for the identity on that slot.
#[derive(Clone, Debug)]
pub struct KronTerm {
    pub coeff: C64,
    pub factors: Vec<Option<Operator>>,
}

/// Sum of Kronecker products over fixed slot dimensions (slot 0 most significant).
#[derive(Clone, Debug)]
pub struct KronOperator {
    dims: Vec<usize>,
    terms: Vec<KronTerm>,
}

/// Per-slot isometries `V` (columns orthonormal); `None` keeps the whole slot.
#[derive(Clone, Debug)]
pub struct Band {
    pub isometries: Vec<Option<DMatrix<C64>>>,
}

impl Band {
    pub fn full(slots: usize) -> Self {
        Band { isometries: vec![None; slots] }
    }

    pub fn dim(&self, dims: &[usize]) -> usize {
        self.isometries
            .iter()
            .zip(dims)
            .map(|(v, d)| v.as_ref().map(|m| m.ncols()).unwrap_or(*d))
            .product()
    }
}

/// Above this size norms are estimated by power iteration instead of a dense SVD.
pub const DENSE_LIMIT: usize = 1024;
const POWER_ITERS: usize = 300;

impl KronOperator {
    pub fn zero(dims: Vec<usize>) -> Self {
        KronOperator { dims, terms: vec![] }
    }

    pub fn identity(dims: Vec<usize>) -> Self {
        let k = dims.len();
        KronOperator { dims, terms: vec![KronTerm { coeff: ONE, factors: vec![None; k] }] }
    }

    pub fn dense(op: Operator) -> Self {
        KronOperator { dims: vec![op.dim()], terms: vec![KronTerm { coeff: ONE, factors: vec![Some(op)] }] }
    }

    /// `op` on `slot`, identity elsewhere.
    pub fn local(dims: Vec<usize>, slot: usize, op: Operator) -> Self {
        assert_eq!(dims[slot], op.dim(), "factor size does not match slot {slot}");
        let mut factors = vec![None; dims.len()];
        factors[slot] = Some(op);
        KronOperator { dims, terms: vec![KronTerm { coeff: ONE, factors }] }
    }

    pub fn product(factors: Vec<Operator>) -> Self {
        let dims = factors.iter().map(|f| f.dim()).collect();
        KronOperator { dims, terms: vec![KronTerm { coeff: ONE, factors: factors.into_iter().map(Some).collect() }] }
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn terms(&self) -> &[KronTerm] {
        &self.terms
    }

    fn check(&self, other: &KronOperator) {
        assert_eq!(self.dims, other.dims, "slot dimensions differ");
    }

    pub fn add(&self, other: &KronOperator) -> Self {
        self.check(other);
        let mut out = self.clone();
        out.terms.extend(other.terms.iter().cloned());
        out
    }

    pub fn sub(&self, other: &KronOperator) -> Self {
        self.add(&other.scale(-ONE))
    }

    pub fn scale(&self, c: C64) -> Self {
        let mut out = self.clone();
        for t in &mut out.terms {
            t.coeff *= c;
        }
        out
    }

    pub fn mul(&self, other: &KronOperator) -> Self {
        self.check(other);
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for a in &self.terms {
            for b in &other.terms {
                let factors = a
                    .factors
                    .iter()
                    .zip(&b.factors)
                    .map(|(x, y)| match (x, y) {
                        (None, None) => None,
                        (Some(f), None) | (None, Some(f)) => Some(f.clone()),
                        (Some(f), Some(g)) => Some(f * g),
                    })
                    .collect();
                terms.push(KronTerm { coeff: a.coeff * b.coeff, factors });
            }
        }
        KronOperator { dims: self.dims.clone(), terms }
    }

    pub fn adjoint(&self) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|t| KronTerm {
                coeff: t.coeff.conj(),
                factors: t.factors.iter().map(|f| f.as_ref().map(|f| f.adjoint())).collect(),
            })
            .collect();
        KronOperator { dims: self.dims.clone(), terms }
    }

    pub fn commutator(&self, other: &KronOperator) -> Self {
        self.mul(other).sub(&other.mul(self))
    }

    pub fn to_dense(&self) -> Operator {
        let n = self.dim();
        let mut out = DMatrix::from_element(n, n, ZERO);
        for t in &self.terms {
            let mut m = DMatrix::from_element(1, 1, t.coeff);
            for (f, d) in t.factors.iter().zip(&self.dims) {
                let fm = match f {
                    Some(f) => f.matrix().clone(),
                    None => DMatrix::identity(*d, *d),
                };
                m = m.kronecker(&fm);
            }
            out += m;
        }
        Operator::from_matrix(out).expect("finite entries")
    }

    /// `(⊗V)† X (⊗V)`.
    pub fn compress(&self, band: &Band) -> Operator {
        assert_eq!(band.isometries.len(), self.dims.len(), "band has wrong number of slots");
        let r = band.dim(&self.dims);
        let mut out = DMatrix::from_element(r, r, ZERO);
        for t in &self.terms {
            let mut m = DMatrix::from_element(1, 1, t.coeff);
            for ((f, v), d) in t.factors.iter().zip(&band.isometries).zip(&self.dims) {
                let fm = match (f, v) {
                    (Some(f), Some(v)) => v.adjoint() * f.matrix() * v,
                    (Some(f), None) => f.matrix().clone(),
                    (None, Some(v)) => DMatrix::identity(v.ncols(), v.ncols()),
                    (None, None) => DMatrix::identity(*d, *d),
                };
                m = m.kronecker(&fm);
            }
            out += m;
        }
        Operator::from_matrix(out).expect("finite entries")
    }

    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        let n = self.dim();
        assert_eq!(v.len(), n);
        let mut out = vec![ZERO; n];
        for t in &self.terms {
            let mut w = v.to_vec();
            for (slot, f) in t.factors.iter().enumerate() {
                if let Some(f) = f {
                    w = apply_on_slot(&self.dims, slot, f, &w);
                }
            }
            for (o, x) in out.iter_mut().zip(&w) {
                *o += t.coeff * x;
            }
        }
        out
    }

    /// Operator norm, exact below [`DENSE_LIMIT`] and by power iteration on `X†X` above it.
    pub fn norm(&self) -> f64 {
        let n = self.dim();
        if n <= DENSE_LIMIT {
            return operator_norm(&self.to_dense());
        }
        let adj = self.adjoint();
        // deterministic start with weight on every basis vector
        let mut v: Vec<C64> = (0..n).map(|i| C64::new(1.0 + ((i * 7919) % 13) as f64 / 13.0, 0.0)).collect();
        let mut lambda = 0.0;
        for _ in 0..POWER_ITERS {
            let nv = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if nv == 0.0 {
                return 0.0;
            }
            v.iter_mut().for_each(|z| *z /= nv);
            let w = adj.apply(&self.apply(&v));
            lambda = w.iter().zip(&v).map(|(a, b)| (b.conj() * a).re).sum::<f64>();
            v = w;
        }
        lambda.max(0.0).sqrt()
    }

    /// Norm of the band compression, or the full norm when `band` is `None`.
    pub fn band_norm(&self, band: Option<&Band>) -> f64 {
        match band {
            Some(b) => operator_norm(&self.compress(b)),
            None => self.norm(),
        }
    }

    /// `φ(X)` for Hermitian `X` acting on at most one slot.
    pub fn local_function(&self, phi: impl Fn(f64) -> f64) -> Result<Self> {
        let mut slot = None;
        for t in &self.terms {
            for (s, f) in t.factors.iter().enumerate() {
                if f.is_some() && slot.is_some_and(|k| k != s) {
                    return Err(Error::InvalidInput("function of an operator acting on several slots".into()));
                }
                if f.is_some() {
                    slot = Some(s);
                }
            }
        }
        let s = slot.unwrap_or(0);
        let d = self.dims[s];
        let mut m = Operator::zeros(d);
        for t in &self.terms {
            let f = t.factors[s].clone().unwrap_or_else(|| Operator::identity(d));
            m = &m + &f.scale(t.coeff);
        }
        Ok(KronOperator::local(self.dims.clone(), s, matrix_function(&m, phi)?))
    }
}

fn apply_on_slot(dims: &[usize], slot: usize, f: &Operator, v: &[C64]) -> Vec<C64> {
    let d = dims[slot];
    let inner: usize = dims[slot + 1..].iter().product();
    let outer: usize = dims[..slot].iter().product();
    let m = f.matrix();
    let mut out = vec![ZERO; v.len()];
    for o in 0..outer {
        for i in 0..d {
            for j in 0..d {
                let c = m[(i, j)];
                if c == ZERO {
                    continue;
                }
                let dst = (o * d + i) * inner;
                let src = (o * d + j) * inner;
                for k in 0..inner {
                    out[dst + k] += c * v[src + k];
                }
            }
        }
    }
    out
}
