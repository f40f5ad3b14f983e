//! Spectral distance `sup{|ξ(a) − η(a)| : ‖[D,a]‖ ≤ 1}` between states of a finite triple.
//!
//! The sup of a linear functional over the unit ball of the seminorm `p(a) = ‖[D,a]‖` equals
//! `1 / min{p(a) : (ξ − η)(a) = 1}`. On Hermitian coordinates this is the linear matrix
//! inequality program `min t` s.t. `−t ⪯ i[D,a] ⪯ t`, solved by a log-barrier path-following
//! method; the rescaled iterate `a / p(a)` is always exactly feasible.

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gelfand::StateFunctional;
use crate::numerics::eigen::{least_squares, symmetric_eigen};
use crate::numerics::{operator_norm, parallel, Operator, C64, I};
use crate::spectral_triple::FiniteSpectralTriple;

/// Gram eigenvalues below this fraction of the largest are treated as constants.
pub const KERNEL_CUT: f64 = 1e-12;
const MAX_NEWTON: usize = 100;
const STALL_DECREMENT: f64 = 1e-6;

#[derive(Clone, Debug)]
pub struct DistanceResult {
    /// `f64::INFINITY` when the states are separated by an element commuting with `D`.
    pub distance: f64,
    pub witness: Operator,
    /// `‖[D, a*]‖` of the returned witness.
    pub witness_norm: f64,
    pub disconnected: bool,
    pub iterations: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DistanceSummary {
    pub distance: Option<f64>,
    pub disconnected: bool,
    pub witness_norm: f64,
    pub iterations: usize,
    pub witness: Vec<Vec<[f64; 2]>>,
}

impl From<&DistanceResult> for DistanceSummary {
    fn from(r: &DistanceResult) -> Self {
        let n = r.witness.dim();
        let witness = (0..n).map(|i| (0..n).map(|j| [r.witness.get(i, j).re, r.witness.get(i, j).im]).collect()).collect();
        DistanceSummary {
            distance: r.distance.is_finite().then_some(r.distance),
            disconnected: r.disconnected,
            witness_norm: r.witness_norm,
            iterations: r.iterations,
            witness,
        }
    }
}

/// Objective data on a real Hermitian basis.
struct Problem {
    herm: Vec<Operator>,
    /// `i[D, h_k]`, Hermitian.
    gens: Vec<Operator>,
    c: DVector<f64>,
}

impl Problem {
    fn new(t: &FiniteSpectralTriple, xi: &StateFunctional, eta: &StateFunctional) -> Self {
        let herm = t.algebra.hermitian_basis();
        let gens: Vec<Operator> = herm.iter().map(|h| t.differential(h).scale(I)).collect();
        let c = DVector::from_iterator(herm.len(), herm.iter().map(|h| (xi.evaluate(h) - eta.evaluate(h)).re));
        Problem { herm, gens, c }
    }

    fn combine(ops: &[Operator], x: &DVector<f64>) -> Operator {
        let n = ops[0].dim();
        let mut out = Operator::zeros(n);
        for (o, v) in ops.iter().zip(x.iter()) {
            if *v != 0.0 {
                out = &out + &o.scale_real(*v);
            }
        }
        out
    }
}

/// Orthonormal basis (columns) of the orthogonal complement of `v` inside `R^n`.
fn complement(v: &DVector<f64>) -> Result<DMatrix<f64>> {
    let n = v.len();
    let u = v / v.norm();
    let p = DMatrix::identity(n, n) - &u * u.transpose();
    let eig = symmetric_eigen(p)?;
    let cols: Vec<DVector<f64>> =
        (0..n).filter(|&k| eig.eigenvalues[k] > 0.5).map(|k| eig.eigenvectors.column(k).into_owned()).collect();
    Ok(if cols.is_empty() { DMatrix::zeros(n, 0) } else { DMatrix::from_columns(&cols) })
}

/// Sup of `|ξ(a) − η(a)|` over Hermitian `a` in the algebra span with `‖[D,a]‖ ≤ 1`.
pub fn spectral_distance(
    t: &FiniteSpectralTriple,
    xi: &StateFunctional,
    eta: &StateFunctional,
    tol: f64,
) -> Result<DistanceResult> {
    if !(tol > 0.0) {
        return Err(Error::InvalidInput(format!("tolerance {tol} must be positive")));
    }
    let n = t.hilbert_dim();
    let pb = Problem::new(t, xi, eta);
    let zero = DistanceResult {
        distance: 0.0,
        witness: Operator::zeros(n),
        witness_norm: 0.0,
        disconnected: false,
        iterations: 0,
    };
    let m = pb.herm.len();
    if m == 0 {
        return Ok(zero);
    }
    // seminorm Gram matrix splits coordinates into constants and the rest
    let gram = DMatrix::from_fn(m, m, |i, j| pb.gens[i].frobenius_dot(&pb.gens[j]).re);
    let eig = symmetric_eigen(gram)?;
    let scale = eig.eigenvalues.iter().fold(0.0f64, |a, b| a.max(*b)).max(1e-300);
    let mut range = Vec::new();
    for k in 0..m {
        let v = eig.eigenvectors.column(k).into_owned();
        if eig.eigenvalues[k] < KERNEL_CUT * scale {
            let leak = v.dot(&pb.c);
            if leak.abs() > tol * pb.c.norm().max(1.0) {
                let a = Problem::combine(&pb.herm, &(v.clone() * leak.signum()));
                return Ok(DistanceResult {
                    distance: f64::INFINITY,
                    witness_norm: operator_norm(&t.differential(&a)),
                    witness: a,
                    disconnected: true,
                    iterations: 0,
                });
            }
        } else {
            range.push(v);
        }
    }
    if range.is_empty() {
        return Ok(zero);
    }
    let r = DMatrix::from_columns(&range);
    let ct = r.transpose() * &pb.c;
    if ct.norm() <= 1e-15 * pb.c.norm().max(1.0) {
        return Ok(zero);
    }
    // x = R(z0 + Z y) with ℓ(x) = 1 for every y
    let z0 = &ct / ct.norm_squared();
    let zc = complement(&ct)?;
    let x0 = &r * &z0;
    let h0 = Problem::combine(&pb.gens, &x0);
    let dirs_x = &r * &zc;
    let dirs: Vec<Operator> =
        (0..dirs_x.ncols()).map(|k| Problem::combine(&pb.gens, &dirs_x.column(k).into_owned())).collect();

    let (y, iterations) = if dirs.is_empty() { (DVector::zeros(0), 0) } else { barrier_solve(&h0, &dirs, tol)? };
    let x = &x0 + &dirs_x * &y;
    let a = Problem::combine(&pb.herm, &x);
    let p = operator_norm(&t.differential(&a));
    let witness = a.scale_real(1.0 / p);
    Ok(DistanceResult {
        distance: 1.0 / p,
        witness_norm: operator_norm(&t.differential(&witness)),
        witness,
        disconnected: false,
        iterations,
    })
}

fn at(h0: &Operator, dirs: &[Operator], y: &DVector<f64>) -> Operator {
    let mut h = h0.clone();
    for (d, v) in dirs.iter().zip(y.iter()) {
        h = &h + &d.scale_real(*v);
    }
    h
}

fn shifted(h: &Operator, t: f64, sign: f64) -> DMatrix<C64> {
    let n = h.dim();
    DMatrix::<C64>::identity(n, n) * C64::new(t, 0.0) + h.matrix() * C64::new(sign, 0.0)
}

/// `s·t − log det(t − H) − log det(t + H)`, `+∞` outside the interior.
fn centering_value(h: &Operator, t: f64, s: f64) -> f64 {
    let logdet = |m: DMatrix<C64>| m.cholesky().map(|c| 2.0 * c.l().diagonal().iter().map(|z| z.re.ln()).sum::<f64>());
    match (logdet(shifted(h, t, -1.0)), logdet(shifted(h, t, 1.0))) {
        (Some(a), Some(b)) => s * t - a - b,
        _ => f64::INFINITY,
    }
}

/// `Re tr(AB)`.
fn tr_prod(a: &DMatrix<C64>, b: &DMatrix<C64>) -> f64 {
    let n = a.nrows();
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            acc += (a[(i, j)] * b[(j, i)]).re;
        }
    }
    acc
}

/// Minimizes `‖H₀ + Σ y_k M_k‖` over `y` until the relative duality gap is below `tol / 2`.
fn barrier_solve(h0: &Operator, dirs: &[Operator], tol: f64) -> Result<(DVector<f64>, usize)> {
    let n = h0.dim();
    let m = dirs.len();
    let mut y = DVector::zeros(m);
    let mut t = 1.1 * operator_norm(h0) + 1e-12;
    // on the central path the gap is 2n/s
    let mut s = 2.0 * n as f64 / t;
    let mut iterations = 0;
    let interior = || Error::SolverFailure("left the barrier interior".into());
    loop {
        for _ in 0..MAX_NEWTON {
            iterations += 1;
            let h = at(h0, dirs, &y);
            let p = shifted(&h, t, -1.0).cholesky().ok_or_else(interior)?.inverse();
            let q = shifted(&h, t, 1.0).cholesky().ok_or_else(interior)?.inverse();
            // d/dt acts as (I, I) on (t − H, t + H), d/dy_k as (−M_k, M_k)
            let pm: Vec<DMatrix<C64>> = dirs.iter().map(|d| &p * d.matrix()).collect();
            let qm: Vec<DMatrix<C64>> = dirs.iter().map(|d| &q * d.matrix()).collect();
            let mut grad = DVector::zeros(m + 1);
            let mut hess = DMatrix::zeros(m + 1, m + 1);
            grad[0] = s - p.trace().re - q.trace().re;
            hess[(0, 0)] = tr_prod(&p, &p) + tr_prod(&q, &q);
            for k in 0..m {
                grad[k + 1] = pm[k].trace().re - qm[k].trace().re;
                let v = -tr_prod(&p, &pm[k]) + tr_prod(&q, &qm[k]);
                hess[(0, k + 1)] = v;
                hess[(k + 1, 0)] = v;
                for l in 0..=k {
                    let v = tr_prod(&pm[k], &pm[l]) + tr_prod(&qm[k], &qm[l]);
                    hess[(k + 1, l + 1)] = v;
                    hess[(l + 1, k + 1)] = v;
                }
            }
            let step = match hess.clone().cholesky() {
                Some(c) => c.solve(&(-&grad)),
                None => {
                    let hc = hess.map(|v| C64::new(v, 0.0));
                    least_squares(&hc, &grad.map(|v| C64::new(-v, 0.0)), 1e-14).map(|z| z.re)
                }
            };
            let decrement = -grad.dot(&step);
            if decrement < 1e-10 {
                break;
            }
            let f0 = centering_value(&h, t, s);
            let mut alpha = 1.0;
            let mut stalled = false;
            loop {
                let yn = &y + step.rows(1, m) * alpha;
                let tn = t + alpha * step[0];
                if centering_value(&at(h0, dirs, &yn), tn, s) <= f0 - 0.25 * alpha * decrement {
                    y = yn;
                    t = tn;
                    break;
                }
                alpha *= 0.5;
                if alpha < 1e-12 {
                    // near the center the decrease drowns in the rounding of s·t
                    if decrement < STALL_DECREMENT {
                        stalled = true;
                        break;
                    }
                    return Err(Error::SolverFailure("barrier line search stalled".into()));
                }
            }
            if stalled {
                break;
            }
        }
        if 2.0 * n as f64 / s <= 0.5 * tol * t {
            return Ok((y, iterations));
        }
        s *= 8.0;
    }
}

/// Pairwise distances, computed in parallel under the crate's thread cap.
pub fn distance_matrix(t: &FiniteSpectralTriple, states: &[StateFunctional], tol: f64) -> Result<DMatrix<f64>> {
    let k = states.len();
    if k < 2 {
        return Err(Error::InvalidInput("need at least two states".into()));
    }
    let pairs: Vec<(usize, usize)> = (0..k).flat_map(|i| (i + 1..k).map(move |j| (i, j))).collect();
    let values: Vec<Result<f64>> = parallel::install(|| {
        pairs.par_iter().map(|&(i, j)| spectral_distance(t, &states[i], &states[j], tol).map(|r| r.distance)).collect()
    });
    let mut out = DMatrix::zeros(k, k);
    for ((i, j), v) in pairs.into_iter().zip(values) {
        let v = v?;
        out[(i, j)] = v;
        out[(j, i)] = v;
    }
    Ok(out)
}
