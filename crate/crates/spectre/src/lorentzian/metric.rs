use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Pointwise metric `−N² dt² + a² dx²`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Metric {
    pub lapse: f64,
    pub scale: f64,
}

impl Metric {
    pub const MINKOWSKI: Metric = Metric { lapse: 1.0, scale: 1.0 };

    pub fn inner(&self, v: [f64; 2], w: [f64; 2]) -> f64 {
        -self.lapse * self.lapse * v[0] * w[0] + self.scale * self.scale * v[1] * w[1]
    }

    pub fn is_timelike(&self, v: [f64; 2]) -> bool {
        self.inner(v, v) < 0.0
    }

    /// `|⟨v,v⟩|^{1/2}`.
    pub fn length(&self, v: [f64; 2]) -> f64 {
        self.inner(v, v).abs().sqrt()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WrongWayReport {
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
    pub collinear: bool,
    pub equality: bool,
    pub same_cone: bool,
    /// `|v + w| − |v| − |w|`, only for vectors in the same cone.
    pub triangle_margin: Option<f64>,
}

const EQ_TOL: f64 = 1e-9;

/// Checks `|⟨v,w⟩| ≥ |v||w|` for timelike `v`, `w`, with equality exactly for collinear pairs.
pub fn wrongway_cs_check(v: [f64; 2], w: [f64; 2], g: &Metric) -> Result<WrongWayReport> {
    for u in [v, w] {
        let n = g.inner(u, u);
        if !(n < 0.0) {
            return Err(Error::NotTimelike { norm: n });
        }
    }
    let lhs = g.inner(v, w).abs();
    let rhs = g.length(v) * g.length(w);
    let scale = lhs.max(rhs).max(f64::MIN_POSITIVE);
    let cross = (v[0] * w[1] - v[1] * w[0]).abs();
    let collinear = cross <= EQ_TOL * (v[0].hypot(v[1]) * w[0].hypot(w[1]));
    let equality = (lhs - rhs).abs() <= EQ_TOL * scale;
    let same_cone = v[0] * w[0] > 0.0;
    let triangle_margin = same_cone.then(|| {
        let s = [v[0] + w[0], v[1] + w[1]];
        g.length(s) - g.length(v) - g.length(w)
    });
    Ok(WrongWayReport {
        lhs,
        rhs,
        holds: lhs >= rhs * (1.0 - EQ_TOL),
        collinear,
        equality,
        same_cone,
        triangle_margin,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn collinear_pair_is_equality() {
        let r = wrongway_cs_check([1.0, 0.0], [1.0, 0.0], &Metric::MINKOWSKI).unwrap();
        assert_eq!((r.lhs, r.rhs), (1.0, 1.0));
        assert!(r.equality && r.collinear);
    }

    #[test]
    fn strict_case() {
        let r = wrongway_cs_check([1.0, 0.0], [2.0, 1.0], &Metric::MINKOWSKI).unwrap();
        assert_eq!(r.lhs, 2.0);
        assert!((r.rhs - 3f64.sqrt()).abs() < 1e-15);
        assert!(r.holds && !r.equality && !r.collinear);
        assert!(r.triangle_margin.unwrap() >= 0.0);
    }

    #[test]
    fn spacelike_rejected() {
        assert!(matches!(
            wrongway_cs_check([1.0, 2.0], [1.0, 0.0], &Metric::MINKOWSKI),
            Err(Error::NotTimelike { .. })
        ));
    }
}
