//! JSON formats shared with the command-line front end. Complex entries are `[re, im]` pairs.

use serde::{Deserialize, Serialize};

use crate::causal_order::{FinitePoset, FunctionCone};
use crate::error::{Error, Result};
use crate::krein_temporal::TemporalTriple;
use crate::lorentzian::LatticeSpacetime;
use crate::numerics::{Operator, C64};
use crate::spectral_triple::FiniteSpectralTriple;

pub type MatrixJson = Vec<Vec<[f64; 2]>>;

pub fn matrix_to_json(a: &Operator) -> MatrixJson {
    let n = a.dim();
    (0..n).map(|i| (0..n).map(|j| [a.get(i, j).re, a.get(i, j).im]).collect()).collect()
}

pub fn matrix_from_json(m: &MatrixJson) -> Result<Operator> {
    let rows: Vec<Vec<C64>> = m.iter().map(|r| r.iter().map(|[a, b]| C64::new(*a, *b)).collect()).collect();
    Operator::from_rows(&rows)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RealJson {
    pub j_matrix: MatrixJson,
    pub ko_dim: i64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TripleJson {
    pub hilbert_dim: usize,
    pub dirac: MatrixJson,
    pub algebra_basis: Vec<MatrixJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grading: Option<MatrixJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub real: Option<RealJson>,
}

fn sized(m: &MatrixJson, n: usize, what: &str) -> Result<Operator> {
    let op = matrix_from_json(m)?;
    if op.dim() != n {
        return Err(Error::DimensionMismatch(format!("{what} is {0}×{0}, hilbert_dim is {n}", op.dim())));
    }
    Ok(op)
}

impl TripleJson {
    pub fn from_triple(t: &FiniteSpectralTriple) -> Self {
        TripleJson {
            hilbert_dim: t.hilbert_dim(),
            dirac: matrix_to_json(&t.dirac),
            algebra_basis: t.basis().iter().map(matrix_to_json).collect(),
            grading: t.grading.as_ref().map(matrix_to_json),
            real: t.real.as_ref().map(|r| RealJson { j_matrix: matrix_to_json(&r.c), ko_dim: r.ko_dim as i64 }),
        }
    }

    pub fn to_triple(&self) -> Result<FiniteSpectralTriple> {
        let n = self.hilbert_dim;
        let basis = self.algebra_basis.iter().map(|m| sized(m, n, "algebra element")).collect::<Result<Vec<_>>>()?;
        let mut t = FiniteSpectralTriple::new(basis, sized(&self.dirac, n, "dirac")?)?;
        if let Some(g) = &self.grading {
            t = t.with_grading(sized(g, n, "grading")?)?;
        }
        if let Some(r) = &self.real {
            t = t.with_real(sized(&r.j_matrix, n, "j_matrix")?, r.ko_dim)?;
        }
        Ok(t)
    }
}

/// Spectral-triple JSON plus the temporal element and the phase `κ` in `J = κ[D,T]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TemporalJson {
    #[serde(flatten)]
    pub triple: TemporalBase,
    pub time_operator: MatrixJson,
    #[serde(default = "unit_phase")]
    pub phase: [f64; 2],
}

/// [`TripleJson`] without `deny_unknown_fields`, so it can be flattened.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TemporalBase {
    pub hilbert_dim: usize,
    pub dirac: MatrixJson,
    pub algebra_basis: Vec<MatrixJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grading: Option<MatrixJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub real: Option<RealJson>,
}

fn unit_phase() -> [f64; 2] {
    [1.0, 0.0]
}

impl TemporalJson {
    pub fn to_temporal(&self) -> Result<TemporalTriple> {
        let b = &self.triple;
        let base = TripleJson {
            hilbert_dim: b.hilbert_dim,
            dirac: b.dirac.clone(),
            algebra_basis: b.algebra_basis.clone(),
            grading: b.grading.clone(),
            real: b.real.clone(),
        }
        .to_triple()?;
        let time = sized(&self.time_operator, b.hilbert_dim, "time_operator")?;
        TemporalTriple::from_dense(&base, time, C64::new(self.phase[0], self.phase[1]))
    }
}

pub fn parse_triple(s: &str) -> std::result::Result<TripleJson, serde_json::Error> {
    serde_json::from_str(s)
}

/// Lattice description with its stencils rebuilt.
pub fn parse_lattice(s: &str) -> std::result::Result<Result<LatticeSpacetime>, serde_json::Error> {
    let m: LatticeSpacetime = serde_json::from_str(s)?;
    Ok(m.rebuild())
}

pub fn parse_poset(s: &str) -> std::result::Result<Result<FinitePoset>, serde_json::Error> {
    let p: FinitePoset = serde_json::from_str(s)?;
    Ok(FinitePoset::new(p.leq))
}

/// A cone file is a bare list of vectors.
pub fn parse_cone(s: &str) -> std::result::Result<Result<FunctionCone>, serde_json::Error> {
    let g: Vec<Vec<f64>> = serde_json::from_str(s)?;
    Ok(FunctionCone::new(g, false))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral_triple::fixtures;

    #[test]
    fn triple_round_trip() {
        let t = fixtures::two_point_real(C64::new(0.7, -0.2));
        let j = TripleJson::from_triple(&t);
        let s = serde_json::to_string(&j).unwrap();
        let back = parse_triple(&s).unwrap();
        assert_eq!(back, j);
        let t2 = back.to_triple().unwrap();
        assert_eq!(t2.dirac, t.dirac);
        assert_eq!(t2.real.unwrap().ko_dim, 0);
    }

    #[test]
    fn size_mismatch_is_reported() {
        let mut j = TripleJson::from_triple(&fixtures::two_point(C64::new(1.0, 0.0)));
        j.hilbert_dim = 3;
        assert!(matches!(j.to_triple(), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn temporal_defaults_to_unit_phase() {
        let s = r#"{"hilbert_dim": 1, "dirac": [[[0,0]]], "algebra_basis": [[[[1,0]]]], "time_operator": [[[0,0]]]}"#;
        let t: TemporalJson = serde_json::from_str(s).unwrap();
        assert_eq!(t.phase, [1.0, 0.0]);
        assert!(t.to_temporal().is_ok());
    }

    #[test]
    fn lattice_and_poset_files() {
        let s = r#"{"nt": 3, "nx": 3, "dt": 1.0, "dx": 1.0, "lapse": [1,1,1], "scale": [1,1,1], "topology": "interval"}"#;
        let m = parse_lattice(s).unwrap().unwrap();
        assert!(!m.stencil(1).is_empty());
        assert!(parse_poset(r#"{"n": 2, "leq": [[true, true], [true, true]]}"#).unwrap().is_err());
        assert!(parse_cone("[[0, 1], [1, 0]]").unwrap().is_ok());
    }
}
