//! Explicit witnesses for the global variational distance formula.
//!
//! Functions are assembled from DP distance fields exactly as in the continuum construction:
//! a covering sum of future distances below a slice `S`, a covering sum of past distances
//! above it, and distance functions from auxiliary points just below the pair.

use serde::{Deserialize, Serialize};

use super::eikonal::{central_stencil, eikonal_residual, EikonalReport};
use super::lattice::{LatticeSpacetime, Node, Topology};
use super::paths::{lorentz_distance_paths, FutureSweep, PastSweep, Reach};
use super::variational::GridFunction;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WitnessCase {
    Coincident,
    /// `p ⪯ q`: `f(q) − f(p)` approximates `d(p, q)` from above.
    Related,
    /// `q ⪯ p`, `p ≠ q`: `f(q) − f(p) ≤ 0`.
    Reversed,
    /// Neither point in the causal future of the other: `f(q) − f(p)` near 0.
    Unrelated,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EqualityWitness {
    pub case: WitnessCase,
    pub f: GridFunction,
    /// `f(q) − f(p)`.
    pub difference: f64,
    /// Path distance `d(p, q)`.
    pub distance: f64,
    pub gap: f64,
    pub epsilon: f64,
    /// Whether every auxiliary point lies within `ε/2` of its anchor.
    pub aux_within_epsilon: bool,
    pub past_aux: Vec<Node>,
    pub future_aux: Vec<Node>,
    pub cover_below: Vec<Node>,
    pub cover_above: Vec<Node>,
    pub eikonal: EikonalReport,
    /// Set when `p` or `q` sits on an interval boundary, where cones are truncated.
    pub boundary_truncation: bool,
}

/// Residual threshold used in the witness report.
pub const EIKONAL_THRESHOLD: f64 = 0.1;

fn on_boundary(m: &LatticeSpacetime, n: Node) -> bool {
    n.t == 0 || n.t + 1 == m.nt || (m.topology == Topology::Interval && (n.x == 0 || n.x + 1 == m.nx))
}

/// Greedy cover of `targets` by candidates given as `(node, covered target columns)`.
fn greedy_cover(targets: &[usize], candidates: &[(Node, Vec<usize>)]) -> Option<Vec<Node>> {
    let mut open: Vec<usize> = targets.to_vec();
    let mut chosen = Vec::new();
    while !open.is_empty() {
        let best = candidates
            .iter()
            .map(|(r, cov)| (r, cov.iter().filter(|c| open.contains(c)).count()))
            .filter(|(_, k)| *k > 0)
            .max_by(|a, b| a.1.cmp(&b.1).then(b.0.x.cmp(&a.0.x)))?;
        let (r, _) = best;
        let cov = &candidates.iter().find(|c| c.0 == *r).unwrap().1;
        open.retain(|c| !cov.contains(c));
        chosen.push(*r);
    }
    chosen.sort();
    Some(chosen)
}

/// Points one slice below `S` outside `J⁻` of every protected point, covering the given columns of `S`.
fn cover_below(m: &LatticeSpacetime, ts: usize, protected: &[&PastSweep], targets: &[usize]) -> Option<Vec<Node>> {
    if ts == 0 {
        return targets.is_empty().then(Vec::new);
    }
    let mut cands = Vec::new();
    for x in 0..m.nx {
        let r = Node::new(ts - 1, x);
        if protected.iter().any(|s| s.reach[m.index(r)] != Reach::None) {
            continue;
        }
        let cov: Vec<usize> = m
            .stencil(x)
            .iter()
            .filter(|e| e.timelike)
            .filter_map(|e| m.shift(x, e.k))
            .collect();
        cands.push((r, cov));
    }
    greedy_cover(targets, &cands)
}

/// Points one slice above `S` outside `J⁺` of every protected point, covering the given columns of `S`.
fn cover_above(m: &LatticeSpacetime, ts: usize, protected: &[&FutureSweep], targets: &[usize]) -> Option<Vec<Node>> {
    if ts + 1 >= m.nt {
        return targets.is_empty().then(Vec::new);
    }
    let mut cands: Vec<(Node, Vec<usize>)> = Vec::new();
    for x in 0..m.nx {
        let r = Node::new(ts + 1, x);
        if protected.iter().any(|s| s.reach[m.index(r)] != Reach::None) {
            continue;
        }
        cands.push((r, Vec::new()));
    }
    for s in 0..m.nx {
        for e in m.stencil(s).iter().filter(|e| e.timelike) {
            if let Some(y) = m.shift(s, e.k) {
                if let Some(c) = cands.iter_mut().find(|c| c.0.x == y) {
                    c.1.push(s);
                }
            }
        }
    }
    greedy_cover(targets, &cands)
}

/// `I⁻(top) ∩ {t ≥ ts} ⊂ I⁺(bottom)` for each pair.
fn wedge_inclusion(m: &LatticeSpacetime, ts: usize, pairs: &[(&PastSweep, &FutureSweep)]) -> bool {
    pairs.iter().all(|(top, bottom)| {
        (ts * m.nx..m.num_nodes()).all(|i| top.reach[i] != Reach::Timelike || bottom.reach[i] == Reach::Timelike)
    })
}

struct Assembly {
    past_aux: Vec<Node>,
    future_aux: Vec<Node>,
    below: Vec<Node>,
    above: Vec<Node>,
}

fn assemble(m: &LatticeSpacetime, a: &Assembly) -> (GridFunction, Vec<Vec<bool>>) {
    let mut f = GridFunction::zeros(m.nt, m.nx);
    let mut masks = Vec::new();
    for &r in a.below.iter().chain(&a.past_aux) {
        let s = FutureSweep::run(m, r);
        for (v, d) in f.values.iter_mut().zip(s.distances()) {
            *v += d;
        }
        masks.push(s.strict);
    }
    for &r in &a.above {
        let s = PastSweep::run(m, r);
        for (v, d) in f.values.iter_mut().zip(s.distances()) {
            *v -= d;
        }
        masks.push(s.strict);
    }
    (f, masks)
}

fn report(m: &LatticeSpacetime, f: &GridFunction, masks: &[Vec<bool>]) -> EikonalReport {
    let mut res = Vec::new();
    for i in 0..m.num_nodes() {
        let n = m.node(i);
        let Some(st) = central_stencil(m, n) else { continue };
        let counted = masks.iter().any(|mask| st.iter().all(|z| mask[m.index(*z)]));
        if counted {
            res.extend(eikonal_residual(m, f, n));
        }
    }
    EikonalReport::from_residuals(res, EIKONAL_THRESHOLD)
}

fn too_small(what: &str) -> Error {
    Error::LatticeTooSmall(format!("no room for {what}"))
}

/// Construction for `a ⪯ b`, `a ≠ b`, with `S` the slice through `b`.
fn related(m: &LatticeSpacetime, a: Node, b: Node) -> Result<Assembly> {
    let ts = b.t;
    let fut_a = FutureSweep::run(m, a);
    let past_b = PastSweep::run(m, b);
    let mut found = None;
    for j in 1..=a.t {
        let pp = Node::new(a.t - j, a.x);
        let fut_pp = FutureSweep::run(m, pp);
        if fut_pp.reach[m.index(b)] != Reach::Timelike {
            continue;
        }
        let targets: Vec<usize> =
            (0..m.nx).filter(|&x| fut_pp.reach[m.index(Node::new(ts, x))] != Reach::Timelike).collect();
        if let Some(above) = cover_above(m, ts, &[&fut_a], &targets) {
            found = Some((pp, fut_pp, above));
            break;
        }
    }
    let (pp, fut_pp, above) = found.ok_or_else(|| too_small("a past auxiliary point"))?;
    for jp in 1..m.nt.saturating_sub(ts) {
        let qq = Node::new(ts + jp, b.x);
        let past_qq = PastSweep::run(m, qq);
        if !wedge_inclusion(m, ts, &[(&past_qq, &fut_pp)]) {
            continue;
        }
        let targets: Vec<usize> =
            (0..m.nx).filter(|&x| past_qq.reach[m.index(Node::new(ts, x))] != Reach::Timelike).collect();
        if let Some(below) = cover_below(m, ts, &[&past_b], &targets) {
            return Ok(Assembly { past_aux: vec![pp], future_aux: vec![qq], below, above });
        }
    }
    Err(too_small("a future auxiliary point"))
}

/// Construction for causally unrelated `a`, `b` with `a.t ≤ b.t`.
fn unrelated(m: &LatticeSpacetime, a: Node, b: Node) -> Result<Assembly> {
    let ts = b.t;
    let a_plus = Node::new(ts, a.x);
    let fut_a = FutureSweep::run(m, a);
    let fut_b = FutureSweep::run(m, b);
    let past_ap = PastSweep::run(m, a_plus);
    let past_b = PastSweep::run(m, b);
    let on_s = |s: &FutureSweep, x: usize| s.reach[m.index(Node::new(ts, x))];
    let mut found = None;
    for j in 1..=a.t {
        let (ap, bp) = (Node::new(a.t - j, a.x), Node::new(b.t - j, b.x));
        let (fa, fb) = (FutureSweep::run(m, ap), FutureSweep::run(m, bp));
        let disjoint = (0..m.nx).all(|x| on_s(&fa, x) == Reach::None || on_s(&fb, x) == Reach::None);
        if !disjoint || fa.reach[m.index(b)] != Reach::None || fb.reach[m.index(a)] != Reach::None {
            continue;
        }
        let targets: Vec<usize> =
            (0..m.nx).filter(|&x| on_s(&fa, x) != Reach::Timelike && on_s(&fb, x) != Reach::Timelike).collect();
        if let Some(above) = cover_above(m, ts, &[&fut_a, &fut_b], &targets) {
            found = Some((ap, bp, fa, fb, above));
            break;
        }
    }
    let (ap, bp, fa, fb, above) = found.ok_or_else(|| too_small("past auxiliary points"))?;
    for jp in 1..m.nt.saturating_sub(ts) {
        let (aq, bq) = (Node::new(ts + jp, a.x), Node::new(ts + jp, b.x));
        let (pa, pb) = (PastSweep::run(m, aq), PastSweep::run(m, bq));
        if !wedge_inclusion(m, ts, &[(&pa, &fa), (&pb, &fb)]) {
            continue;
        }
        let targets: Vec<usize> = (0..m.nx)
            .filter(|&x| {
                let i = m.index(Node::new(ts, x));
                pa.reach[i] != Reach::Timelike && pb.reach[i] != Reach::Timelike
            })
            .collect();
        if let Some(below) = cover_below(m, ts, &[&past_ap, &past_b], &targets) {
            return Ok(Assembly { past_aux: vec![ap, bp], future_aux: vec![aq, bq], below, above });
        }
    }
    Err(too_small("future auxiliary points"))
}

/// Builds a function with `g(∇f, ∇f) ≤ −1` (up to lattice error) whose increment from `p` to `q`
/// approaches `d(p, q)`, following the equality construction for the appropriate causal case.
pub fn equality_witness(m: &LatticeSpacetime, p: Node, q: Node, epsilon: f64) -> Result<EqualityWitness> {
    if !m.contains(p) || !m.contains(q) {
        return Err(Error::InvalidInput("node outside lattice".into()));
    }
    let distance = lorentz_distance_paths(m, p, q);
    let boundary_truncation = on_boundary(m, p) || on_boundary(m, q);
    if p == q {
        let nmax = m.lapse.iter().cloned().fold(0.0, f64::max);
        let mut f = GridFunction::zeros(m.nt, m.nx);
        for i in 0..m.num_nodes() {
            f.values[i] = m.node(i).t as f64 * m.dt * nmax;
        }
        let eikonal = report(m, &f, &[vec![true; m.num_nodes()]]);
        return Ok(EqualityWitness {
            case: WitnessCase::Coincident,
            f,
            difference: 0.0,
            distance: 0.0,
            gap: 0.0,
            epsilon,
            aux_within_epsilon: true,
            past_aux: vec![],
            future_aux: vec![],
            cover_below: vec![],
            cover_above: vec![],
            eikonal,
            boundary_truncation,
        });
    }
    let reach_pq = FutureSweep::run(m, p).reach[m.index(q)];
    let reach_qp = FutureSweep::run(m, q).reach[m.index(p)];
    let (case, asm) = if reach_pq != Reach::None {
        (WitnessCase::Related, related(m, p, q)?)
    } else if reach_qp != Reach::None {
        (WitnessCase::Reversed, related(m, q, p)?)
    } else if p.t <= q.t {
        (WitnessCase::Unrelated, unrelated(m, p, q)?)
    } else {
        (WitnessCase::Unrelated, unrelated(m, q, p)?)
    };
    let (f, masks) = assemble(m, &asm);
    let difference = f.at(q) - f.at(p);
    let gap = match case {
        WitnessCase::Related => (difference - distance).abs(),
        WitnessCase::Reversed => difference.max(0.0),
        _ => difference.abs(),
    };
    let anchors: Vec<Node> = match case {
        WitnessCase::Related => vec![p],
        WitnessCase::Reversed => vec![q],
        _ if p.t <= q.t => vec![p, q],
        _ => vec![q, p],
    };
    let aux_within_epsilon = asm
        .past_aux
        .iter()
        .zip(&anchors)
        .all(|(&aux, &anchor)| lorentz_distance_paths(m, aux, anchor) <= 0.5 * epsilon);
    let eikonal = report(m, &f, &masks);
    Ok(EqualityWitness {
        case,
        f,
        difference,
        distance,
        gap,
        epsilon,
        aux_within_epsilon,
        past_aux: asm.past_aux,
        future_aux: asm.future_aux,
        cover_below: asm.below,
        cover_above: asm.above,
        eikonal,
        boundary_truncation,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fixture() -> LatticeSpacetime {
        LatticeSpacetime::minkowski(33, 33, 1.0 / 16.0, 1.0 / 64.0, Topology::Interval).unwrap()
    }

    #[test]
    fn related_pair_value_is_shifted_distance() {
        let m = fixture();
        let (p, q) = (Node::new(8, 16), Node::new(24, 16));
        let w = equality_witness(&m, p, q, 0.1).unwrap();
        assert_eq!(w.case, WitnessCase::Related);
        let pp = w.past_aux[0];
        let expect = lorentz_distance_paths(&m, pp, q) - lorentz_distance_paths(&m, pp, p);
        assert!((w.difference - expect).abs() < 1e-12);
        assert!(w.difference >= w.distance - 1e-12);
    }

    #[test]
    fn reversed_pair_is_nonpositive() {
        let m = fixture();
        let w = equality_witness(&m, Node::new(24, 16), Node::new(8, 16), 0.1).unwrap();
        assert_eq!(w.case, WitnessCase::Reversed);
        assert!(w.difference <= 0.0);
        assert_eq!(w.gap, 0.0);
    }

    #[test]
    fn bottom_row_has_no_room() {
        let m = fixture();
        assert!(matches!(
            equality_witness(&m, Node::new(0, 16), Node::new(8, 16), 0.1),
            Err(Error::LatticeTooSmall(_))
        ));
    }
}
