use serde::{Deserialize, Serialize};

use super::lattice::{LatticeSpacetime, Node, Topology};
use crate::error::{Error, Result};
use crate::numerics::{solve_cone_program_with, AffineForm, ConeProgram, SolverSettings};

/// Real values per lattice node, row-major in `(t, x)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridFunction {
    pub nt: usize,
    pub nx: usize,
    pub values: Vec<f64>,
}

impl GridFunction {
    pub fn zeros(nt: usize, nx: usize) -> Self {
        GridFunction { nt, nx, values: vec![0.0; nt * nx] }
    }

    pub fn at(&self, n: Node) -> f64 {
        self.values[n.t * self.nx + n.x]
    }

    pub fn set(&mut self, n: Node, v: f64) {
        self.values[n.t * self.nx + n.x] = v;
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct VariationalResult {
    pub distance: f64,
    /// Unclamped optimum of `f(q) − f(p)`.
    pub raw_minimum: f64,
    pub witness: GridFunction,
    pub iterations: usize,
    pub max_violation: f64,
}

/// Lower bound imposed on `f(q) − f(p)` to keep the program bounded; the clamp `max(0, ·)`
/// makes any value at or below zero equivalent.
const FLOOR: f64 = 1.0;

/// Cells `(t, x)` with the spatial forward neighbour, for `t` in `rows`.
fn cells(m: &LatticeSpacetime, t0: usize, t1: usize) -> Vec<(usize, usize, usize)> {
    let mut out = Vec::new();
    for t in t0..t1 {
        for x in 0..m.nx {
            let next = match m.topology {
                Topology::Interval if x + 1 >= m.nx => continue,
                _ => m.shift(x, 1).unwrap(),
            };
            if next == x {
                continue;
            }
            out.push((t, x, next));
        }
    }
    out
}

/// Minimizes `f(q) − f(p)` over grid functions whose piecewise-linear interpolant satisfies
/// `g(∇f, ∇f) ≤ −1` with `∂_t f > 0` on both triangles of every cell, then clamps at 0.
pub fn lorentz_distance_variational(
    m: &LatticeSpacetime,
    p: Node,
    q: Node,
    tol: f64,
) -> Result<VariationalResult> {
    lorentz_distance_variational_with(m, p, q, &SolverSettings { tol, ..SolverSettings::default() })
}

pub fn lorentz_distance_variational_with(
    m: &LatticeSpacetime,
    p: Node,
    q: Node,
    settings: &SolverSettings,
) -> Result<VariationalResult> {
    if !m.contains(p) || !m.contains(q) {
        return Err(Error::InvalidInput("node outside lattice".into()));
    }
    if p == q {
        return Ok(VariationalResult {
            distance: 0.0,
            raw_minimum: 0.0,
            witness: GridFunction::zeros(m.nt, m.nx),
            iterations: 0,
            max_violation: 0.0,
        });
    }
    // Functions on the slab between the two times extend to the whole lattice, so only
    // the slab enters the program.
    let t0 = p.t.min(q.t);
    let t1 = p.t.max(q.t);
    let nrows = t1 - t0 + 1;
    let var = |t: usize, x: usize| (t - t0) * m.nx + x;
    let nvars = nrows * m.nx;
    // f(p) is pinned to 0 by dropping its terms, which keeps AᵀA banded.
    let pinned = var(p.t, p.x);
    let form = |terms: Vec<(usize, f64)>, c: f64| {
        AffineForm::new(terms.into_iter().filter(|t| t.0 != pinned).collect(), c)
    };
    let mut objective = vec![0.0; nvars];
    objective[var(q.t, q.x)] = 1.0;
    let mut prog = ConeProgram::new(nvars, objective);
    // Each cone is multiplied through by dt so violations are measured in units of f.
    for (t, x, xn) in cells(m, t0, t1) {
        let mid = x as f64 + 0.5;
        let n = m.lapse_at(mid) * m.dt;
        let cx = n / (m.scale_at(mid) * m.dx);
        // lower triangle (t,x), (t+1,x), (t,x+1)
        prog.add_soc(
            vec![AffineForm::constant(n), form(vec![(var(t, xn), cx), (var(t, x), -cx)], 0.0)],
            form(vec![(var(t + 1, x), 1.0), (var(t, x), -1.0)], 0.0),
        );
        // upper triangle (t+1,x), (t,x+1), (t+1,x+1)
        prog.add_soc(
            vec![AffineForm::constant(n), form(vec![(var(t + 1, xn), cx), (var(t + 1, x), -cx)], 0.0)],
            form(vec![(var(t + 1, xn), 1.0), (var(t, xn), -1.0)], 0.0),
        );
    }
    if m.nx == 1 {
        for t in t0..t1 {
            prog.add_soc(
                vec![AffineForm::constant(m.lapse[0] * m.dt)],
                form(vec![(var(t + 1, 0), 1.0), (var(t, 0), -1.0)], 0.0),
            );
        }
    }
    prog.add_soc(vec![], form(vec![(var(q.t, q.x), 1.0)], FLOOR));
    let sol = solve_cone_program_with(&prog, settings)?;

    let mut witness = GridFunction::zeros(m.nt, m.nx);
    for t in t0..=t1 {
        for x in 0..m.nx {
            let v = if var(t, x) == pinned { 0.0 } else { sol.x[var(t, x)] };
            witness.set(Node::new(t, x), v);
        }
    }
    // Outside the slab each row is a constant shift of its neighbour, steep enough that
    // every cell stays feasible.
    for t in (0..t0).rev() {
        let c = row_step(m, &witness, t + 1);
        for x in 0..m.nx {
            let v = witness.at(Node::new(t + 1, x)) - c;
            witness.set(Node::new(t, x), v);
        }
    }
    for t in (t1 + 1)..m.nt {
        let c = row_step(m, &witness, t - 1);
        for x in 0..m.nx {
            let v = witness.at(Node::new(t - 1, x)) + c;
            witness.set(Node::new(t, x), v);
        }
    }
    let raw = sol.objective;
    Ok(VariationalResult {
        distance: raw.max(0.0),
        raw_minimum: raw,
        witness,
        iterations: sol.iterations,
        max_violation: sol.max_violation,
    })
}

/// Smallest time increment for which shifting row `t` by a constant satisfies the cell cones.
fn row_step(m: &LatticeSpacetime, f: &GridFunction, t: usize) -> f64 {
    let mut worst: f64 = 0.0;
    for x in 0..m.nx {
        let mid = x as f64 + 0.5;
        let g = match m.shift(x, 1) {
            Some(xn) if xn != x => (f.at(Node::new(t, xn)) - f.at(Node::new(t, x))) / (m.scale_at(mid) * m.dx),
            _ => 0.0,
        };
        worst = worst.max(m.lapse_at(mid) * (1.0 + g * g).sqrt());
    }
    worst * m.dt * (1.0 + 1e-9)
}
