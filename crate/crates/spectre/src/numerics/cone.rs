//! Second-order cone programs solved by an over-relaxed ADMM splitting.
//!
//! Problem: minimize `cᵀx` subject to `‖u_k(x)‖₂ ≤ s_k(x)` for affine `u_k`, `s_k`.
//! Each constraint is rewritten as `(s_k(x), u_k(x)) ∈ Q`, giving `Ax + slack = b` with
//! `slack ∈ Q₁ × … × Q_m`. The iteration follows the operator-splitting scheme with a
//! proximal term `σ` on `x`; the `x`-step is a solve with `σI + ρAᵀA`, which is banded
//! for lattice problems and is factored once per `ρ` value.

use serde::{Deserialize, Serialize};

use super::sparse::{BandCholesky, CsrMatrix};
use crate::error::{Error, Result};

/// `Σ coef·x[idx] + constant`.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct AffineForm {
    pub terms: Vec<(usize, f64)>,
    pub constant: f64,
}

impl AffineForm {
    pub fn constant(c: f64) -> Self {
        AffineForm { terms: vec![], constant: c }
    }

    pub fn var(idx: usize, coef: f64) -> Self {
        AffineForm { terms: vec![(idx, coef)], constant: 0.0 }
    }

    pub fn new(terms: Vec<(usize, f64)>, constant: f64) -> Self {
        AffineForm { terms, constant }
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        self.constant + self.terms.iter().map(|&(i, c)| c * x[i]).sum::<f64>()
    }
}

/// `‖u(x)‖₂ ≤ s(x)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SocConstraint {
    pub u: Vec<AffineForm>,
    pub s: AffineForm,
}

impl SocConstraint {
    pub fn violation(&self, x: &[f64]) -> f64 {
        let n = self.u.iter().map(|f| f.eval(x).powi(2)).sum::<f64>().sqrt();
        (n - self.s.eval(x)).max(0.0)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConeProgram {
    pub num_vars: usize,
    pub objective: Vec<f64>,
    pub constraints: Vec<SocConstraint>,
}

impl ConeProgram {
    pub fn new(num_vars: usize, objective: Vec<f64>) -> Self {
        ConeProgram { num_vars, objective, constraints: vec![] }
    }

    pub fn add_soc(&mut self, u: Vec<AffineForm>, s: AffineForm) {
        self.constraints.push(SocConstraint { u, s });
    }

    pub fn validate(&self) -> Result<()> {
        if self.objective.len() != self.num_vars {
            return Err(Error::DimensionMismatch(format!(
                "objective has {} coefficients for {} variables",
                self.objective.len(),
                self.num_vars
            )));
        }
        for (k, c) in self.constraints.iter().enumerate() {
            for f in c.u.iter().chain(std::iter::once(&c.s)) {
                if let Some(&(i, _)) = f.terms.iter().find(|t| t.0 >= self.num_vars) {
                    return Err(Error::DimensionMismatch(format!(
                        "constraint {k} references variable {i} of {}",
                        self.num_vars
                    )));
                }
                if !f.constant.is_finite() || f.terms.iter().any(|t| !t.1.is_finite()) {
                    return Err(Error::NonFinite);
                }
            }
        }
        Ok(())
    }

    pub fn objective_value(&self, x: &[f64]) -> f64 {
        self.objective.iter().zip(x).map(|(c, v)| c * v).sum()
    }

    pub fn max_violation(&self, x: &[f64]) -> f64 {
        self.constraints.iter().map(|c| c.violation(x)).fold(0.0, f64::max)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolverSettings {
    /// Relative objective stagnation over `window` iterations and absolute constraint violation.
    pub tol: f64,
    pub max_iter: usize,
    pub window: usize,
    pub rho: f64,
    pub sigma: f64,
    pub alpha: f64,
    pub scaling_passes: usize,
}

impl Default for SolverSettings {
    fn default() -> Self {
        SolverSettings {
            tol: 1e-6,
            max_iter: 50_000,
            window: 50,
            rho: 0.1,
            sigma: 1e-6,
            alpha: 1.6,
            scaling_passes: 10,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SolveStatus {
    Solved,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConeSolution {
    pub x: Vec<f64>,
    pub objective: f64,
    pub status: SolveStatus,
    pub iterations: usize,
    pub max_violation: f64,
    pub dual_residual: f64,
}

pub fn solve_cone_program(p: &ConeProgram, tol: f64, max_iter: usize) -> Result<ConeSolution> {
    solve_cone_program_with(p, &SolverSettings { tol, max_iter, ..SolverSettings::default() })
}

struct Scaled {
    a: CsrMatrix,
    b: Vec<f64>,
    c: Vec<f64>,
    // x = d ∘ x̄, rows scaled by e
    d: Vec<f64>,
    e: Vec<f64>,
    cost_scale: f64,
    blocks: Vec<(usize, usize)>,
}

fn build(p: &ConeProgram, passes: usize) -> Scaled {
    let n = p.num_vars;
    let mut rows = Vec::new();
    let mut b = Vec::new();
    let mut blocks = Vec::new();
    for con in &p.constraints {
        let start = rows.len();
        for f in std::iter::once(&con.s).chain(con.u.iter()) {
            rows.push(f.terms.iter().map(|&(i, v)| (i, -v)).collect::<Vec<_>>());
            b.push(f.constant);
        }
        blocks.push((start, rows.len()));
    }
    let mut a = CsrMatrix::from_rows(n, &rows);
    let mut d = vec![1.0; n];
    let mut e = vec![1.0; a.nrows];
    for _ in 0..passes {
        let mut col_max = vec![0.0f64; n];
        let mut row_max = vec![0.0f64; a.nrows];
        for (i, rm) in row_max.iter_mut().enumerate() {
            for (c, v) in a.row(i) {
                col_max[c] = col_max[c].max(v.abs());
                *rm = rm.max(v.abs());
            }
        }
        let dc: Vec<f64> = col_max.iter().map(|&m| if m > 0.0 { 1.0 / m.sqrt() } else { 1.0 }).collect();
        let mut er = vec![1.0; a.nrows];
        for &(s, t) in &blocks {
            let m = row_max[s..t].iter().cloned().fold(0.0, f64::max);
            let f = if m > 0.0 { 1.0 / m.sqrt() } else { 1.0 };
            er[s..t].iter_mut().for_each(|x| *x = f);
        }
        for (i, &ei) in er.iter().enumerate() {
            let (cols, vals) = a.row_mut(i);
            for (v, &c) in vals.iter_mut().zip(cols) {
                *v *= ei * dc[c];
            }
        }
        for j in 0..n {
            d[j] *= dc[j];
        }
        for i in 0..e.len() {
            e[i] *= er[i];
        }
    }
    let bs: Vec<f64> = b.iter().zip(&e).map(|(bi, ei)| bi * ei).collect();
    let cd: Vec<f64> = p.objective.iter().zip(&d).map(|(c, di)| c * di).collect();
    let cmax = cd.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let cost_scale = if cmax > 0.0 { 1.0 / cmax } else { 1.0 };
    let c = cd.iter().map(|v| v * cost_scale).collect();
    Scaled { a, b: bs, c, d, e, cost_scale, blocks }
}

fn project_soc(v: &mut [f64]) {
    let t = v[0];
    let nz = v[1..].iter().map(|x| x * x).sum::<f64>().sqrt();
    if nz <= t {
        return;
    }
    if nz <= -t {
        v.iter_mut().for_each(|x| *x = 0.0);
        return;
    }
    let a = 0.5 * (t + nz);
    v[0] = a;
    let f = a / nz;
    v[1..].iter_mut().for_each(|x| *x *= f);
}

/// ρ is refactored when the residual balance drifts beyond this factor.
const RHO_REBALANCE: f64 = 2.5;

fn inf_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0f64, |m, x| m.max(x.abs()))
}

pub fn solve_cone_program_with(p: &ConeProgram, st: &SolverSettings) -> Result<ConeSolution> {
    p.validate()?;
    let n = p.num_vars;
    if n == 0 {
        return Ok(ConeSolution {
            x: vec![],
            objective: 0.0,
            status: SolveStatus::Solved,
            iterations: 0,
            max_violation: 0.0,
            dual_residual: 0.0,
        });
    }
    let sc = build(p, st.scaling_passes);
    let m = sc.a.nrows;
    let mut rho = st.rho;
    let sigma = st.sigma;
    let alpha = st.alpha;
    let factor = |rho: f64| {
        BandCholesky::factor_normal(&sc.a, sigma, rho)
            .ok_or_else(|| Error::SolverFailure("factorization failed".into()))
    };
    let mut chol = factor(rho)?;

    let mut x = vec![0.0; n];
    let mut z = vec![0.0; m];
    let mut y = vec![0.0; m];
    let mut xt = vec![0.0; n];
    let mut zt = vec![0.0; m];
    let mut tmp_m = vec![0.0; m];
    let mut tmp_n = vec![0.0; n];
    let mut objective_history: Vec<f64> = Vec::new();
    let mut prev_y = y.clone();
    let mut prev_x = x.clone();

    let unscaled_obj = |xs: &[f64]| -> f64 {
        p.objective.iter().zip(xs.iter().zip(&sc.d)).map(|(c, (v, d))| c * v * d).sum()
    };

    for iter in 1..=st.max_iter {
        // x-step
        for i in 0..m {
            tmp_m[i] = rho * z[i] - y[i];
        }
        sc.a.mul_t_vec(&tmp_m, &mut tmp_n);
        for j in 0..n {
            xt[j] = sigma * x[j] - sc.c[j] + tmp_n[j];
        }
        chol.solve_in_place(&mut xt);
        sc.a.mul_vec(&xt, &mut zt);
        for j in 0..n {
            x[j] = alpha * xt[j] + (1.0 - alpha) * x[j];
        }
        // z-step: z ∈ C = b − K
        for i in 0..m {
            let zh = alpha * zt[i] + (1.0 - alpha) * z[i];
            tmp_m[i] = zh;
            // v = b − (ẑ + y/ρ), project onto K, z = b − Π(v)
            zt[i] = sc.b[i] - (zh + y[i] / rho);
        }
        for &(s, t) in &sc.blocks {
            project_soc(&mut zt[s..t]);
        }
        for i in 0..m {
            let znew = sc.b[i] - zt[i];
            y[i] += rho * (tmp_m[i] - znew);
            z[i] = znew;
        }

        objective_history.push(unscaled_obj(&x));

        if iter % 10 != 0 {
            continue;
        }
        // Residuals in unscaled units.
        sc.a.mul_vec(&x, &mut tmp_m);
        let ax_norm = inf_norm(&tmp_m.iter().zip(&sc.e).map(|(v, e)| v / e).collect::<Vec<_>>());
        let r_prim = inf_norm(
            &tmp_m.iter().zip(&z).zip(&sc.e).map(|((a, zz), e)| (a - zz) / e).collect::<Vec<_>>(),
        );
        sc.a.mul_t_vec(&y, &mut tmp_n);
        let aty: Vec<f64> = tmp_n.iter().zip(&sc.d).map(|(v, d)| v / d / sc.cost_scale).collect();
        let cvec: Vec<f64> = sc.c.iter().zip(&sc.d).map(|(v, d)| v / d / sc.cost_scale).collect();
        let r_dual = inf_norm(&aty.iter().zip(&cvec).map(|(a, c)| a + c).collect::<Vec<_>>());
        let z_norm = inf_norm(&z.iter().zip(&sc.e).map(|(v, e)| v / e).collect::<Vec<_>>());

        let xs: Vec<f64> = x.iter().zip(&sc.d).map(|(v, d)| v * d).collect();
        let violation = p.max_violation(&xs);
        let obj = *objective_history.last().unwrap();
        let stagnant = objective_history.len() > st.window && {
            let old = objective_history[objective_history.len() - 1 - st.window];
            let lo = objective_history[objective_history.len() - 1 - st.window..]
                .iter()
                .fold(f64::INFINITY, |a, &b| a.min(b));
            let hi = objective_history[objective_history.len() - 1 - st.window..]
                .iter()
                .fold(f64::NEG_INFINITY, |a, &b| a.max(b));
            (hi - lo).max((obj - old).abs()) <= st.tol * obj.abs().max(1.0)
        };
        let dual_ok = r_dual <= st.tol.sqrt() * (1.0 + inf_norm(&aty).max(inf_norm(&cvec)));
        if stagnant && violation <= st.tol && dual_ok {
            return Ok(ConeSolution {
                objective: p.objective_value(&xs),
                x: xs,
                status: SolveStatus::Solved,
                iterations: iter,
                max_violation: violation,
                dual_residual: r_dual,
            });
        }

        // Infeasibility certificate: δy with Aᵀδy ≈ 0, δy ∈ K* = K, bᵀδy < 0.
        let dy: Vec<f64> = y.iter().zip(&prev_y).map(|(a, b)| a - b).collect();
        let dy_norm = inf_norm(&dy);
        if dy_norm > 1e-12 {
            sc.a.mul_t_vec(&dy, &mut tmp_n);
            let at_dy = inf_norm(&tmp_n);
            let bdy: f64 = dy.iter().zip(&sc.b).map(|(a, b)| a * b).sum();
            let mut in_cone = true;
            for &(s, t) in &sc.blocks {
                let mut v: Vec<f64> = dy[s..t].to_vec();
                let orig = v.clone();
                project_soc(&mut v);
                let dist = inf_norm(&v.iter().zip(&orig).map(|(a, b)| a - b).collect::<Vec<_>>());
                if dist > 1e-6 * dy_norm {
                    in_cone = false;
                    break;
                }
            }
            if at_dy <= 1e-7 * dy_norm && in_cone && bdy < -1e-5 * dy_norm {
                return Err(Error::Infeasible);
            }
        }
        // Unboundedness certificate: δx with Aδx ∈ −K and cᵀδx < 0.
        let dx: Vec<f64> = x.iter().zip(&prev_x).map(|(a, b)| a - b).collect();
        let dx_norm = inf_norm(&dx);
        if dx_norm > 1e-12 {
            let cdx: f64 = sc.c.iter().zip(&dx).map(|(a, b)| a * b).sum();
            if cdx < -1e-5 * dx_norm {
                sc.a.mul_vec(&dx, &mut tmp_m);
                let mut ok = true;
                for &(s, t) in &sc.blocks {
                    let mut v: Vec<f64> = tmp_m[s..t].iter().map(|u| -u).collect();
                    let orig = v.clone();
                    project_soc(&mut v);
                    let dist = inf_norm(&v.iter().zip(&orig).map(|(a, b)| a - b).collect::<Vec<_>>());
                    if dist > 1e-7 * dx_norm {
                        ok = false;
                        break;
                    }
                }
                if ok {
                    return Err(Error::Unbounded);
                }
            }
        }
        prev_y.copy_from_slice(&y);
        prev_x.copy_from_slice(&x);

        // ρ rebalancing.
        if iter % 50 == 0 {
            let pr = r_prim / (ax_norm.max(z_norm).max(1e-12));
            let du = r_dual / (inf_norm(&aty).max(inf_norm(&cvec)).max(1e-12));
            if pr > 0.0 && du > 0.0 {
                let ratio = (pr / du).sqrt();
                if !(1.0 / RHO_REBALANCE..=RHO_REBALANCE).contains(&ratio) {
                    rho = (rho * ratio).clamp(1e-6, 1e6);
                    chol = factor(rho)?;
                }
            }
        }
    }
    Err(Error::MaxIterExceeded(st.max_iter))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lower_bound_only() {
        // minimize x s.t. ‖()‖ ≤ x − 1
        let mut p = ConeProgram::new(1, vec![1.0]);
        p.add_soc(vec![], AffineForm::new(vec![(0, 1.0)], -1.0));
        let sol = solve_cone_program(&p, 1e-8, 20_000).unwrap();
        assert!((sol.objective - 1.0).abs() < 1e-6, "{sol:?}");
    }

    #[test]
    fn disc_constraint() {
        // minimize x + y s.t. ‖(x − 1, y − 1)‖ ≤ 1
        let mut p = ConeProgram::new(2, vec![1.0, 1.0]);
        p.add_soc(
            vec![AffineForm::new(vec![(0, 1.0)], -1.0), AffineForm::new(vec![(1, 1.0)], -1.0)],
            AffineForm::constant(1.0),
        );
        let sol = solve_cone_program(&p, 1e-8, 20_000).unwrap();
        assert!((sol.objective - (2.0 - 2f64.sqrt())).abs() < 1e-5, "{sol:?}");
    }

    #[test]
    fn infeasible_detected() {
        // x ≥ 1 and −x ≥ 0
        let mut p = ConeProgram::new(1, vec![1.0]);
        p.add_soc(vec![], AffineForm::new(vec![(0, 1.0)], -1.0));
        p.add_soc(vec![], AffineForm::new(vec![(0, -1.0)], 0.0));
        assert_eq!(solve_cone_program(&p, 1e-6, 20_000), Err(Error::Infeasible));
    }

    #[test]
    fn unbounded_detected() {
        let mut p = ConeProgram::new(1, vec![1.0]);
        p.add_soc(vec![], AffineForm::new(vec![(0, -1.0)], 0.0));
        assert_eq!(solve_cone_program(&p, 1e-6, 20_000), Err(Error::Unbounded));
    }

    #[test]
    fn budget_exhaustion() {
        let mut p = ConeProgram::new(2, vec![1.0, 1.0]);
        p.add_soc(
            vec![AffineForm::new(vec![(0, 1.0)], -1.0), AffineForm::new(vec![(1, 1.0)], -1.0)],
            AffineForm::constant(1.0),
        );
        assert_eq!(solve_cone_program(&p, 1e-12, 20), Err(Error::MaxIterExceeded(20)));
    }

    #[test]
    fn bad_index_rejected() {
        let mut p = ConeProgram::new(1, vec![1.0]);
        p.add_soc(vec![], AffineForm::var(3, 1.0));
        assert!(matches!(solve_cone_program(&p, 1e-6, 10), Err(Error::DimensionMismatch(_))));
    }
}
