use serde::{Deserialize, Serialize};

use super::lattice::{LatticeSpacetime, Node};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CausalKind {
    Chronological,
    NullCausal,
    Unrelated,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CausalRelationResult {
    pub kind: CausalKind,
    pub path: Option<Vec<Node>>,
}

/// Reachability state of a node from a fixed source.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Reach {
    None,
    /// Reachable only along null edges.
    Null,
    /// Reachable along a path with at least one timelike edge.
    Timelike,
}

/// Forward sweep from `p`: reachability, longest path lengths and, separately,
/// reachability using timelike edges only.
#[derive(Clone, Debug)]
pub struct FutureSweep {
    pub source: Node,
    pub reach: Vec<Reach>,
    pub length: Vec<f64>,
    pub strict: Vec<bool>,
    parent: Vec<Option<usize>>,
}

impl FutureSweep {
    pub fn run(m: &LatticeSpacetime, p: Node) -> Self {
        let n = m.num_nodes();
        let mut reach = vec![Reach::None; n];
        let mut length = vec![f64::NEG_INFINITY; n];
        let mut strict = vec![false; n];
        let mut parent = vec![None; n];
        let ip = m.index(p);
        reach[ip] = Reach::Null;
        length[ip] = 0.0;
        strict[ip] = true;
        for t in p.t..m.nt.saturating_sub(1) {
            for x in 0..m.nx {
                let i = m.index(Node::new(t, x));
                if reach[i] == Reach::None {
                    continue;
                }
                for e in m.stencil(x) {
                    let y = m.shift(x, e.k).expect("stencil only holds valid shifts");
                    let j = m.index(Node::new(t + 1, y));
                    let r = if e.timelike || reach[i] == Reach::Timelike { Reach::Timelike } else { Reach::Null };
                    if r > reach[j] {
                        reach[j] = r;
                    }
                    let l = length[i] + e.weight;
                    if l > length[j] {
                        length[j] = l;
                        parent[j] = Some(i);
                    }
                    if strict[i] && e.timelike {
                        strict[j] = true;
                    }
                }
            }
        }
        strict[ip] = false;
        FutureSweep { source: p, reach, length, strict, parent }
    }

    /// Lorentzian distance `d(p, q)` by longest path, 0 outside `J⁺(p)`.
    pub fn distance(&self, m: &LatticeSpacetime, q: Node) -> f64 {
        let i = m.index(q);
        if self.reach[i] == Reach::None {
            0.0
        } else {
            self.length[i].max(0.0)
        }
    }

    pub fn distances(&self) -> Vec<f64> {
        self.reach
            .iter()
            .zip(&self.length)
            .map(|(r, l)| if *r == Reach::None { 0.0 } else { l.max(0.0) })
            .collect()
    }

    pub fn path_to(&self, m: &LatticeSpacetime, q: Node) -> Option<Vec<Node>> {
        let mut i = m.index(q);
        if self.reach[i] == Reach::None {
            return None;
        }
        let mut out = vec![m.node(i)];
        let src = m.index(self.source);
        while i != src {
            i = self.parent[i]?;
            out.push(m.node(i));
        }
        out.reverse();
        Some(out)
    }
}

/// Backward sweep to `q`: `d(z, q)` for every `z`, plus reachability of `q` from `z`.
#[derive(Clone, Debug)]
pub struct PastSweep {
    pub target: Node,
    pub reach: Vec<Reach>,
    pub length: Vec<f64>,
    pub strict: Vec<bool>,
}

impl PastSweep {
    pub fn run(m: &LatticeSpacetime, q: Node) -> Self {
        let n = m.num_nodes();
        let mut reach = vec![Reach::None; n];
        let mut length = vec![f64::NEG_INFINITY; n];
        let mut strict = vec![false; n];
        let iq = m.index(q);
        reach[iq] = Reach::Null;
        length[iq] = 0.0;
        strict[iq] = true;
        for t in (0..q.t).rev() {
            for x in 0..m.nx {
                let i = m.index(Node::new(t, x));
                for e in m.stencil(x) {
                    let y = m.shift(x, e.k).expect("stencil only holds valid shifts");
                    let j = m.index(Node::new(t + 1, y));
                    if reach[j] == Reach::None {
                        continue;
                    }
                    let r = if e.timelike || reach[j] == Reach::Timelike { Reach::Timelike } else { Reach::Null };
                    if r > reach[i] {
                        reach[i] = r;
                    }
                    length[i] = length[i].max(length[j] + e.weight);
                    if strict[j] && e.timelike {
                        strict[i] = true;
                    }
                }
            }
        }
        strict[iq] = false;
        PastSweep { target: q, reach, length, strict }
    }

    pub fn distances(&self) -> Vec<f64> {
        self.reach
            .iter()
            .zip(&self.length)
            .map(|(r, l)| if *r == Reach::None { 0.0 } else { l.max(0.0) })
            .collect()
    }
}

pub fn causal_relation(m: &LatticeSpacetime, p: Node, q: Node) -> CausalRelationResult {
    if !m.contains(p) || !m.contains(q) || q.t < p.t {
        return CausalRelationResult { kind: CausalKind::Unrelated, path: None };
    }
    let sweep = FutureSweep::run(m, p);
    let kind = match sweep.reach[m.index(q)] {
        Reach::Timelike => CausalKind::Chronological,
        Reach::Null => CausalKind::NullCausal,
        Reach::None => CausalKind::Unrelated,
    };
    let path = if kind == CausalKind::Unrelated { None } else { sweep.path_to(m, q) };
    CausalRelationResult { kind, path }
}

pub fn lorentz_distance_paths(m: &LatticeSpacetime, p: Node, q: Node) -> f64 {
    if !m.contains(p) || !m.contains(q) || q.t < p.t {
        return 0.0;
    }
    FutureSweep::run(m, p).distance(m, q)
}

/// `J⁺` relation as a dense boolean matrix over all nodes, `leq[i][j]` iff node i ⪯ node j.
pub fn causal_order_matrix(m: &LatticeSpacetime) -> Vec<Vec<bool>> {
    (0..m.num_nodes())
        .map(|i| {
            let s = FutureSweep::run(m, m.node(i));
            s.reach.iter().map(|r| *r != Reach::None).collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lorentzian::lattice::Topology;

    fn mink() -> LatticeSpacetime {
        LatticeSpacetime::minkowski(8, 11, 1.0, 1.0, Topology::Interval).unwrap()
    }

    #[test]
    fn relations_on_unit_lattice() {
        let m = mink();
        let p = Node::new(0, 0);
        assert_eq!(causal_relation(&m, p, Node::new(4, 1)).kind, CausalKind::Chronological);
        assert_eq!(causal_relation(&m, p, Node::new(2, 5)).kind, CausalKind::Unrelated);
        assert_eq!(causal_relation(&m, p, Node::new(3, 3)).kind, CausalKind::NullCausal);
    }

    #[test]
    fn witness_path_is_connected() {
        let m = mink();
        let r = causal_relation(&m, Node::new(0, 5), Node::new(5, 7));
        let path = r.path.unwrap();
        assert_eq!(path.first(), Some(&Node::new(0, 5)));
        assert_eq!(path.last(), Some(&Node::new(5, 7)));
        for w in path.windows(2) {
            assert_eq!(w[1].t, w[0].t + 1);
            assert!((w[1].x as i64 - w[0].x as i64).abs() <= 1);
        }
    }

    #[test]
    fn axis_distance_is_exact() {
        let m = mink();
        assert_eq!(lorentz_distance_paths(&m, Node::new(0, 3), Node::new(6, 3)), 6.0);
        assert_eq!(lorentz_distance_paths(&m, Node::new(0, 3), Node::new(6, 9)), 0.0);
        assert_eq!(lorentz_distance_paths(&m, Node::new(0, 3), Node::new(2, 9)), 0.0);
    }

    #[test]
    fn past_sweep_agrees_with_future_sweep() {
        let m = LatticeSpacetime::minkowski(9, 13, 1.0, 0.5, Topology::Interval).unwrap();
        let q = Node::new(8, 6);
        let past = PastSweep::run(&m, q).distances();
        for i in 0..m.num_nodes() {
            let d = lorentz_distance_paths(&m, m.node(i), q);
            assert!((d - past[i]).abs() < 1e-12);
        }
    }
}
