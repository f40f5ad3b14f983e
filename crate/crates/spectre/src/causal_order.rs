//! Finite ordered spaces, cones of isotone functions and order reconstruction.
//!
//! Everything here lives in the commutative model: functions are real vectors over the points
//! and `∧`, `∨` act pointwise. For finite sets the compactness assumption behind order
//! reconstruction from isotone functions holds automatically. No test is attempted for whether
//! an order comes from a Lorentzian manifold.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lorentzian::{LatticeSpacetime, Topology};
use crate::numerics::{matrix_function, parallel, Operator};

/// Slack in `f(x) ≤ f(y)` comparisons.
pub const TIE_TOL: f64 = 1e-12;
/// Two closure elements closer than this (after normalisation) are the same ray.
pub const DEDUP_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FinitePoset {
    pub n: usize,
    pub leq: Vec<Vec<bool>>,
}

impl FinitePoset {
    /// Checks reflexivity, antisymmetry and transitivity exhaustively.
    pub fn new(leq: Vec<Vec<bool>>) -> Result<Self> {
        let n = leq.len();
        if leq.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch("relation must be square".into()));
        }
        let p = FinitePoset { n, leq };
        if let Some(msg) = p.defect() {
            return Err(Error::InvalidInput(msg));
        }
        Ok(p)
    }

    fn defect(&self) -> Option<String> {
        let n = self.n;
        for x in 0..n {
            if !self.leq[x][x] {
                return Some(format!("not reflexive at {x}"));
            }
            for y in 0..n {
                if x != y && self.leq[x][y] && self.leq[y][x] {
                    return Some(format!("not antisymmetric at ({x}, {y})"));
                }
                if self.leq[x][y] {
                    if let Some(z) = (0..n).find(|&z| self.leq[y][z] && !self.leq[x][z]) {
                        return Some(format!("not transitive at ({x}, {y}, {z})"));
                    }
                }
            }
        }
        None
    }

    /// `0 < 1 < … < n−1`.
    pub fn chain(n: usize) -> Self {
        FinitePoset { n, leq: (0..n).map(|x| (0..n).map(|y| x <= y).collect()).collect() }
    }

    pub fn antichain(n: usize) -> Self {
        FinitePoset { n, leq: (0..n).map(|x| (0..n).map(|y| x == y).collect()).collect() }
    }

    pub fn le(&self, x: usize, y: usize) -> bool {
        self.leq[x][y]
    }

    /// Pairs `x < y`.
    pub fn strict_pairs(&self) -> Vec<(usize, usize)> {
        (0..self.n).flat_map(|x| (0..self.n).filter(move |&y| x != y).map(move |y| (x, y))).filter(|&(x, y)| self.leq[x][y]).collect()
    }

    /// Pairs `x < y` with nothing strictly between.
    pub fn covering_pairs(&self) -> Vec<(usize, usize)> {
        self.strict_pairs()
            .into_iter()
            .filter(|&(x, y)| !(0..self.n).any(|z| z != x && z != y && self.leq[x][z] && self.leq[z][y]))
            .collect()
    }

    /// Causal order `J⁺` of a lattice as a poset over its nodes.
    pub fn from_lattice(m: &LatticeSpacetime) -> Result<Self> {
        Self::new(crate::lorentzian::causal_order_matrix(m))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FunctionCone {
    pub generators: Vec<Vec<f64>>,
    #[serde(default)]
    pub includes_constants: bool,
}

impl FunctionCone {
    pub fn new(generators: Vec<Vec<f64>>, includes_constants: bool) -> Result<Self> {
        let n = generators.first().map(|g| g.len()).unwrap_or(0);
        if generators.iter().any(|g| g.len() != n) {
            return Err(Error::DimensionMismatch("generators have different lengths".into()));
        }
        if generators.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(FunctionCone { generators, includes_constants })
    }

    pub fn points(&self) -> usize {
        self.generators.first().map(|g| g.len()).unwrap_or(0)
    }
}

/// Light-cone coordinates `N t ± a x` of a lattice with constant lapse and scale, optionally
/// with the time function itself.
pub fn light_cone_cone(m: &LatticeSpacetime, with_time: bool) -> Result<FunctionCone> {
    let (n0, a0) = (m.lapse[0], m.scale[0]);
    if m.lapse.iter().any(|v| (v - n0).abs() > 1e-14) || m.scale.iter().any(|v| (v - a0).abs() > 1e-14) {
        return Err(Error::InvalidLattice("light-cone coordinates need constant lapse and scale".into()));
    }
    if m.topology == Topology::Periodic {
        return Err(Error::InvalidLattice("light-cone coordinates are not global on a periodic lattice".into()));
    }
    let coords: Vec<(f64, f64)> = (0..m.num_nodes()).map(|i| m.physical(m.node(i))).map(|(t, x)| (n0 * t, a0 * x)).collect();
    let mut generators = vec![
        coords.iter().map(|(t, x)| t + x).collect::<Vec<f64>>(),
        coords.iter().map(|(t, x)| t - x).collect(),
    ];
    if with_time {
        generators.push(coords.iter().map(|(t, _)| *t).collect());
    }
    FunctionCone::new(generators, false)
}

/// `x ≤ y` iff `f(x) ≤ f(y)` for every generator.
pub fn order_from_cone(n: usize, cone: &FunctionCone) -> Result<FinitePoset> {
    if cone.generators.is_empty() {
        return Err(Error::InvalidInput("cone has no generators".into()));
    }
    if cone.points() != n {
        return Err(Error::DimensionMismatch(format!("generators live on {} points, not {n}", cone.points())));
    }
    let leq: Vec<Vec<bool>> = parallel::install(|| {
        (0..n)
            .into_par_iter()
            .map(|x| (0..n).map(|y| cone.generators.iter().all(|f| f[x] <= f[y] + TIE_TOL)).collect())
            .collect()
    });
    for x in 0..n {
        for y in x + 1..n {
            if leq[x][y] && leq[y][x] {
                return Err(Error::NotSeparating(x, y));
            }
        }
    }
    Ok(FinitePoset { n, leq })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IsotoneCheck {
    pub isotone: bool,
    /// First related pair `x ≤ y` with `f(x) > f(y)`.
    pub violation: Option<(usize, usize)>,
}

pub fn isotone_check(p: &FinitePoset, f: &[f64]) -> IsotoneCheck {
    let violation = p.strict_pairs().into_iter().find(|&(x, y)| f[x] > f[y] + TIE_TOL);
    IsotoneCheck { isotone: violation.is_none(), violation }
}

/// Pointwise `a∧b = (a+b)/2 − |a−b|/2`.
pub fn meet(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| 0.5 * (x + y) - 0.5 * (x - y).abs()).collect()
}

/// Pointwise `a∨b = (a+b)/2 + |a−b|/2`.
pub fn join(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| 0.5 * (x + y) + 0.5 * (x - y).abs()).collect()
}

/// `(a+b)/2 − |a−b|/2` for Hermitian matrices; experimental, with no order meaning off the diagonal.
pub fn matrix_meet(a: &Operator, b: &Operator) -> Result<Operator> {
    let abs = matrix_function(&(a - b), f64::abs)?;
    Ok(&(a + b).scale_real(0.5) - &abs.scale_real(0.5))
}

pub fn matrix_join(a: &Operator, b: &Operator) -> Result<Operator> {
    let abs = matrix_function(&(a - b), f64::abs)?;
    Ok(&(a + b).scale_real(0.5) + &abs.scale_real(0.5))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClosureReport {
    pub depth: usize,
    /// Distinct rays after closing, generators included.
    pub elements: usize,
    /// Rays not already among the generators.
    pub new_elements: usize,
    pub all_isotone: bool,
    /// `(element index, x, y)` for every element failing isotonicity.
    pub violations: Vec<(usize, usize, usize)>,
    pub has_constants: bool,
}

fn normalized(v: &[f64]) -> Option<Vec<f64>> {
    let s = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    (s > 0.0).then(|| v.iter().map(|x| x / s).collect())
}

fn push_ray(set: &mut Vec<Vec<f64>>, v: Vec<f64>) -> bool {
    let Some(u) = normalized(&v) else { return false };
    if set.iter().any(|w| w.iter().zip(&u).all(|(a, b)| (a - b).abs() <= DEDUP_TOL)) {
        return false;
    }
    set.push(u);
    true
}

/// Closes the generators under `+`, `∧`, `∨` for `depth` rounds and checks every element
/// against `order` (default: [`order_from_cone`]). Positive scaling is implicit: elements
/// are kept as rays normalised to sup-norm one.
pub fn cone_closure_check(cone: &FunctionCone, depth: usize, order: Option<&FinitePoset>) -> Result<ClosureReport> {
    if depth == 0 {
        return Err(Error::InvalidInput("depth must be at least 1".into()));
    }
    let n = cone.points();
    let derived;
    let order = match order {
        Some(p) => p,
        None => {
            derived = order_from_cone(n, cone)?;
            &derived
        }
    };
    let mut set: Vec<Vec<f64>> = Vec::new();
    for g in &cone.generators {
        push_ray(&mut set, g.clone());
    }
    if cone.includes_constants {
        push_ray(&mut set, vec![1.0; n]);
        push_ray(&mut set, vec![-1.0; n]);
    }
    let base = set.len();
    for _ in 0..depth {
        let current = set.clone();
        for i in 0..current.len() {
            for j in i + 1..current.len() {
                let (a, b) = (&current[i], &current[j]);
                push_ray(&mut set, a.iter().zip(b).map(|(x, y)| x + y).collect());
                push_ray(&mut set, meet(a, b));
                push_ray(&mut set, join(a, b));
            }
        }
    }
    let violations: Vec<(usize, usize, usize)> = parallel::install(|| {
        set.par_iter()
            .enumerate()
            .filter_map(|(k, f)| isotone_check(order, f).violation.map(|(x, y)| (k, x, y)))
            .collect()
    });
    let has_constants = set.iter().any(|f| f.iter().all(|v| (v - f[0]).abs() <= DEDUP_TOL));
    Ok(ClosureReport {
        depth,
        elements: set.len(),
        new_elements: set.len() - base,
        all_isotone: violations.is_empty(),
        violations,
        has_constants,
    })
}

/// Whether the cone reconstructs `p` exactly.
pub fn completely_separated_check(p: &FinitePoset, cone: &FunctionCone) -> Result<bool> {
    Ok(order_from_cone(p.n, cone)? == *p)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chain_from_one_function() {
        let cone = FunctionCone::new(vec![vec![0.0, 1.0, 2.0]], false).unwrap();
        assert_eq!(order_from_cone(3, &cone).unwrap(), FinitePoset::chain(3));
        assert!(completely_separated_check(&FinitePoset::chain(3), &cone).unwrap());
    }

    #[test]
    fn constants_do_not_separate() {
        let cone = FunctionCone::new(vec![vec![1.0, 1.0], vec![0.0, 0.0]], false).unwrap();
        assert_eq!(order_from_cone(2, &cone), Err(Error::NotSeparating(0, 1)));
    }

    #[test]
    fn antichain_of_two() {
        let cone = FunctionCone::new(vec![vec![0.0, 1.0], vec![1.0, 0.0]], false).unwrap();
        assert!(completely_separated_check(&FinitePoset::antichain(2), &cone).unwrap());
    }

    #[test]
    fn isotone_examples() {
        let p = FinitePoset::chain(4);
        assert!(isotone_check(&p, &[2.0; 4]).isotone);
        assert!(isotone_check(&p, &[0.0, 1.0, 2.0, 3.0]).isotone);
        let bad = isotone_check(&p, &[0.0, 2.0, 1.0, 3.0]);
        assert_eq!(bad.violation, Some((1, 2)));
        assert_eq!(p.covering_pairs(), vec![(0, 1), (1, 2), (2, 3)]);
    }

    #[test]
    fn invalid_relations_rejected() {
        assert!(FinitePoset::new(vec![vec![true, true], vec![true, true]]).is_err());
        assert!(FinitePoset::new(vec![vec![false]]).is_err());
        let not_transitive = vec![vec![true, true, false], vec![false, true, true], vec![false, false, true]];
        assert!(FinitePoset::new(not_transitive).is_err());
    }

    #[test]
    fn closure_on_a_chain_adds_nothing() {
        let cone = FunctionCone::new(vec![vec![0.0, 1.0, 2.0]], false).unwrap();
        let r = cone_closure_check(&cone, 3, None).unwrap();
        assert_eq!(r.new_elements, 0);
        assert!(r.all_isotone && !r.has_constants);
    }

    #[test]
    fn mixed_orders_are_flagged() {
        let cone = FunctionCone::new(vec![vec![0.0, 1.0, 2.0], vec![0.0, 2.0, 1.0]], false).unwrap();
        let r = cone_closure_check(&cone, 1, Some(&FinitePoset::chain(3))).unwrap();
        assert!(!r.all_isotone);
    }

    #[test]
    fn light_cone_reconstructs_small_lattice() {
        let m = LatticeSpacetime::minkowski(3, 3, 1.0, 1.0, Topology::Interval).unwrap();
        let p = FinitePoset::from_lattice(&m).unwrap();
        assert!(completely_separated_check(&p, &light_cone_cone(&m, false).unwrap()).unwrap());
        assert!(completely_separated_check(&p, &light_cone_cone(&m, true).unwrap()).unwrap());
    }

    #[test]
    fn matrix_meet_matches_pointwise_on_diagonals() {
        let (a, b) = ([1.0, -2.0, 0.5], [0.0, 3.0, 0.5]);
        let m = matrix_meet(&Operator::diagonal(&a), &Operator::diagonal(&b)).unwrap();
        let j = matrix_join(&Operator::diagonal(&a), &Operator::diagonal(&b)).unwrap();
        for (k, (x, y)) in meet(&a, &b).iter().zip(join(&a, &b)).enumerate() {
            assert!((m.get(k, k).re - x).abs() < 1e-12 && (j.get(k, k).re - y).abs() < 1e-12);
        }
    }
}
