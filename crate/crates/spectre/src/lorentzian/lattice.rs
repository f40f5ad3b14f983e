use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Topology {
    Interval,
    Periodic,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Node {
    pub t: usize,
    pub x: usize,
}

impl Node {
    pub fn new(t: usize, x: usize) -> Self {
        Node { t, x }
    }
}

/// One outgoing edge `(t, x) → (t + 1, x + k)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Edge {
    pub k: i64,
    pub weight: f64,
    pub timelike: bool,
}

/// Static 1+1 lattice with metric `g = −N(x)² dt² + a(x)² dx²`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LatticeSpacetime {
    pub nt: usize,
    pub nx: usize,
    pub dt: f64,
    pub dx: f64,
    pub lapse: Vec<f64>,
    pub scale: Vec<f64>,
    pub topology: Topology,
    #[serde(skip)]
    stencils: Vec<Vec<Edge>>,
}

const NULL_RTOL: f64 = 1e-12;

impl LatticeSpacetime {
    pub fn new(
        nt: usize,
        nx: usize,
        dt: f64,
        dx: f64,
        lapse: Vec<f64>,
        scale: Vec<f64>,
        topology: Topology,
    ) -> Result<Self> {
        if nt == 0 || nx == 0 {
            return Err(Error::InvalidLattice("empty lattice".into()));
        }
        if !(dt > 0.0 && dx > 0.0 && dt.is_finite() && dx.is_finite()) {
            return Err(Error::InvalidLattice("dt and dx must be positive".into()));
        }
        if lapse.len() != nx || scale.len() != nx {
            return Err(Error::InvalidLattice(format!(
                "lapse and scale need {nx} entries, got {} and {}",
                lapse.len(),
                scale.len()
            )));
        }
        if lapse.iter().chain(&scale).any(|v| !(*v > 0.0 && v.is_finite())) {
            return Err(Error::InvalidLattice("lapse and scale must be positive".into()));
        }
        let mut m = LatticeSpacetime { nt, nx, dt, dx, lapse, scale, topology, stencils: vec![] };
        m.stencils = (0..nx).map(|x| m.build_stencil(x)).collect();
        Ok(m)
    }

    pub fn minkowski(nt: usize, nx: usize, dt: f64, dx: f64, topology: Topology) -> Result<Self> {
        Self::new(nt, nx, dt, dx, vec![1.0; nx], vec![1.0; nx], topology)
    }

    /// Restores the cached stencils after deserialization.
    pub fn rebuild(self) -> Result<Self> {
        Self::new(self.nt, self.nx, self.dt, self.dx, self.lapse, self.scale, self.topology)
    }

    pub fn num_nodes(&self) -> usize {
        self.nt * self.nx
    }

    pub fn index(&self, n: Node) -> usize {
        n.t * self.nx + n.x
    }

    pub fn node(&self, idx: usize) -> Node {
        Node { t: idx / self.nx, x: idx % self.nx }
    }

    pub fn contains(&self, n: Node) -> bool {
        n.t < self.nt && n.x < self.nx
    }

    pub fn h(&self) -> f64 {
        self.dt.max(self.dx)
    }

    pub fn physical(&self, n: Node) -> (f64, f64) {
        (n.t as f64 * self.dt, n.x as f64 * self.dx)
    }

    /// Spatial neighbour `x + k`, if it exists.
    pub fn shift(&self, x: usize, k: i64) -> Option<usize> {
        let y = x as i64 + k;
        match self.topology {
            Topology::Interval => (0..self.nx as i64).contains(&y).then_some(y as usize),
            Topology::Periodic => Some(y.rem_euclid(self.nx as i64) as usize),
        }
    }

    /// Linear interpolation of a per-column field at fractional column `s`.
    fn interp(&self, field: &[f64], s: f64) -> f64 {
        let n = self.nx as i64;
        let lo = s.floor();
        let frac = s - lo;
        let at = |i: i64| -> f64 {
            match self.topology {
                Topology::Periodic => field[i.rem_euclid(n) as usize],
                Topology::Interval => field[i.clamp(0, n - 1) as usize],
            }
        };
        let l = lo as i64;
        if frac == 0.0 {
            at(l)
        } else {
            (1.0 - frac) * at(l) + frac * at(l + 1)
        }
    }

    pub fn lapse_at(&self, s: f64) -> f64 {
        self.interp(&self.lapse, s)
    }

    pub fn scale_at(&self, s: f64) -> f64 {
        self.interp(&self.scale, s)
    }

    fn build_stencil(&self, x: usize) -> Vec<Edge> {
        let ratio = self
            .lapse
            .iter()
            .zip(&self.scale)
            .map(|(n, a)| n / a)
            .fold(0.0, f64::max);
        let kmax = (ratio * self.dt / self.dx).floor() as i64 + 1;
        let mut out = Vec::new();
        for k in -kmax..=kmax {
            if self.shift(x, k).is_none() {
                continue;
            }
            let mid = x as f64 + 0.5 * k as f64;
            let n = self.lapse_at(mid);
            let a = self.scale_at(mid);
            let time = n * self.dt;
            let space = a * (k as f64 * self.dx).abs();
            if space > time * (1.0 + NULL_RTOL) {
                continue;
            }
            let null = (time - space).abs() <= NULL_RTOL * time;
            let weight = if null { 0.0 } else { (time * time - space * space).sqrt() };
            out.push(Edge { k, weight, timelike: !null });
        }
        out
    }

    /// Outgoing edges from column `x`.
    pub fn stencil(&self, x: usize) -> &[Edge] {
        &self.stencils[x]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_ratio_stencil_has_null_sides() {
        let m = LatticeSpacetime::minkowski(4, 9, 0.5, 0.5, Topology::Interval).unwrap();
        let ks: Vec<(i64, bool)> = m.stencil(4).iter().map(|e| (e.k, e.timelike)).collect();
        assert_eq!(ks, vec![(-1, false), (0, true), (1, false)]);
        assert_eq!(m.stencil(0).len(), 2);
    }

    #[test]
    fn finer_space_widens_stencil() {
        let m = LatticeSpacetime::minkowski(4, 40, 1.0, 0.25, Topology::Periodic).unwrap();
        assert_eq!(m.stencil(0).len(), 9);
        let w: f64 = m.stencil(0).iter().find(|e| e.k == 2).unwrap().weight;
        assert!((w - 0.75f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_metric() {
        assert!(LatticeSpacetime::new(2, 2, 1.0, 1.0, vec![1.0, 0.0], vec![1.0; 2], Topology::Interval).is_err());
    }
}
