use serde::{Deserialize, Serialize};

use super::lattice::{LatticeSpacetime, Node};
use super::variational::GridFunction;

/// Central-difference `g(∇f, ∇f)` at an interior node, `None` where the stencil leaves the lattice.
pub fn metric_norm_central(m: &LatticeSpacetime, f: &GridFunction, n: Node) -> Option<f64> {
    if n.t == 0 || n.t + 1 >= m.nt {
        return None;
    }
    let xl = m.shift(n.x, -1)?;
    let xr = m.shift(n.x, 1)?;
    if xl == n.x || xr == n.x {
        return None;
    }
    let ft = (f.at(Node::new(n.t + 1, n.x)) - f.at(Node::new(n.t - 1, n.x))) / (2.0 * m.dt);
    let fx = (f.at(Node::new(n.t, xr)) - f.at(Node::new(n.t, xl))) / (2.0 * m.dx);
    let s = n.x as f64;
    let (lapse, scale) = (m.lapse_at(s), m.scale_at(s));
    Some(-(ft * ft) / (lapse * lapse) + (fx * fx) / (scale * scale))
}

/// `max(0, g(∇f, ∇f) + 1)`, positive where the eikonal constraint is violated.
pub fn eikonal_residual(m: &LatticeSpacetime, f: &GridFunction, n: Node) -> Option<f64> {
    metric_norm_central(m, f, n).map(|g| (g + 1.0).max(0.0))
}

/// The five nodes entering the central difference at `n`.
pub(crate) fn central_stencil(m: &LatticeSpacetime, n: Node) -> Option<[Node; 5]> {
    if n.t == 0 || n.t + 1 >= m.nt {
        return None;
    }
    let xl = m.shift(n.x, -1)?;
    let xr = m.shift(n.x, 1)?;
    Some([n, Node::new(n.t - 1, n.x), Node::new(n.t + 1, n.x), Node::new(n.t, xl), Node::new(n.t, xr)])
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EikonalReport {
    /// Cells whose whole stencil lies strictly inside the timelike cone of some base point.
    pub cells: usize,
    pub within_threshold: usize,
    pub threshold: f64,
    pub fraction_within: f64,
    pub median: f64,
    pub p90: f64,
    pub p95: f64,
    pub p99: f64,
    pub max: f64,
}

fn percentile(sorted: &[f64], q: f64) -> f64 {
    if sorted.is_empty() {
        return 0.0;
    }
    let i = ((sorted.len() - 1) as f64 * q).round() as usize;
    sorted[i]
}

impl EikonalReport {
    pub fn from_residuals(mut r: Vec<f64>, threshold: f64) -> Self {
        r.sort_by(f64::total_cmp);
        let within = r.iter().filter(|v| **v <= threshold).count();
        EikonalReport {
            cells: r.len(),
            within_threshold: within,
            threshold,
            fraction_within: if r.is_empty() { 1.0 } else { within as f64 / r.len() as f64 },
            median: percentile(&r, 0.5),
            p90: percentile(&r, 0.9),
            p95: percentile(&r, 0.95),
            p99: percentile(&r, 0.99),
            max: r.last().copied().unwrap_or(0.0),
        }
    }
}

/// Residuals of `f` over every node accepted by `keep`.
pub fn eikonal_report<F: Fn(Node) -> bool>(m: &LatticeSpacetime, f: &GridFunction, threshold: f64, keep: F) -> EikonalReport {
    let mut res = Vec::new();
    for i in 0..m.num_nodes() {
        let n = m.node(i);
        if !keep(n) {
            continue;
        }
        if let Some(r) = eikonal_residual(m, f, n) {
            res.push(r);
        }
    }
    EikonalReport::from_residuals(res, threshold)
}

/// True if `f` never decreases along a causal edge.
pub fn is_causal_function(m: &LatticeSpacetime, f: &GridFunction, tol: f64) -> bool {
    for t in 0..m.nt.saturating_sub(1) {
        for x in 0..m.nx {
            let v = f.at(Node::new(t, x));
            for e in m.stencil(x) {
                let y = m.shift(x, e.k).expect("stencil only holds valid shifts");
                if f.at(Node::new(t + 1, y)) < v - tol {
                    return false;
                }
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lorentzian::lattice::Topology;

    #[test]
    fn time_function_is_exactly_eikonal() {
        let m = LatticeSpacetime::minkowski(6, 7, 0.5, 0.25, Topology::Periodic).unwrap();
        let mut f = GridFunction::zeros(6, 7);
        for i in 0..m.num_nodes() {
            let n = m.node(i);
            f.set(n, n.t as f64 * 0.5);
        }
        let g = metric_norm_central(&m, &f, Node::new(2, 3)).unwrap();
        assert!((g + 1.0).abs() < 1e-14);
        assert_eq!(eikonal_residual(&m, &f, Node::new(0, 3)), None);
        assert!(is_causal_function(&m, &f, 0.0));
    }

    #[test]
    fn percentiles_of_known_sample() {
        let r = EikonalReport::from_residuals((0..101).map(|i| i as f64 / 100.0).collect(), 0.1);
        assert_eq!(r.cells, 101);
        assert_eq!(r.within_threshold, 11);
        assert_eq!(r.median, 0.5);
        assert_eq!(r.max, 1.0);
    }
}
