//! JSON (de)serialization of algebras, vectors, triples, and verdicts.
//!
//! The wire formats are `f64`-concrete. Complex entries are `[re, im]`
//! pairs; matrices are nested row-major arrays of such pairs.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraVector, Coords, Family, LieAlgebra};
use crate::error::{Error, Result};
use crate::triples::{CheckDetail, Triple, Verdict};
use crate::{AlgebraRef64, Vector64};

type CMat64 = crate::algebra::CMat<f64>;

/// `{ "family": "su"|"so"|"custom", "n": int, "basis": [...] }`
/// where `basis` (custom only) is a list of matrices, each a nested
/// row-major array of `[re, im]` entries.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AlgebraSpec {
    pub family: String,
    pub n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub basis: Option<Vec<Vec<Vec<[f64; 2]>>>>,
}

/// `{ "coords": [...] }` or `{ "matrix": [...] }` (exactly one).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VectorSpec {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coords: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub matrix: Option<Vec<Vec<[f64; 2]>>>,
}

/// `{ "algebra": <AlgebraSpec>, "X": <VectorSpec>, "V": ..., "A": ... }`
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TripleSpec {
    pub algebra: AlgebraSpec,
    #[serde(rename = "X")]
    pub x: VectorSpec,
    #[serde(rename = "V")]
    pub v: VectorSpec,
    #[serde(rename = "A")]
    pub a: VectorSpec,
}

/// Serialized form of a [`Verdict`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerdictReport {
    pub method: String,
    pub good: bool,
    pub necessary_only: bool,
    pub residual: f64,
    pub tolerance: f64,
    pub details: Vec<DetailReport>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DetailReport {
    pub label: String,
    pub residual: f64,
}

fn parse_matrix(rows: &[Vec<[f64; 2]>]) -> Result<CMat64> {
    let n = rows.len();
    for r in rows {
        if r.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: r.len(),
            });
        }
    }
    Ok(CMat64::from_fn(n, n, |i, j| {
        Complex::new(rows[i][j][0], rows[i][j][1])
    }))
}

fn emit_matrix(m: &CMat64) -> Vec<Vec<[f64; 2]>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
        .collect()
}

pub fn load_algebra(spec: &AlgebraSpec) -> Result<AlgebraRef64> {
    match spec.family.as_str() {
        "su" => LieAlgebra::build(Family::Su, spec.n),
        "so" => LieAlgebra::build(Family::So, spec.n),
        "custom" => {
            let basis = spec
                .basis
                .as_ref()
                .ok_or_else(|| Error::UnsupportedFamily("custom without basis".into()))?;
            let mats = basis
                .iter()
                .map(|rows| parse_matrix(rows))
                .collect::<Result<Vec<_>>>()?;
            LieAlgebra::from_custom_basis("custom", mats)
        }
        other => Err(Error::UnsupportedFamily(other.into())),
    }
}

pub fn algebra_spec(alg: &AlgebraRef64) -> AlgebraSpec {
    match alg.family() {
        Family::Su => AlgebraSpec {
            family: "su".into(),
            n: alg.matrix_dim(),
            basis: None,
        },
        Family::So => AlgebraSpec {
            family: "so".into(),
            n: alg.matrix_dim(),
            basis: None,
        },
        Family::Custom => AlgebraSpec {
            family: "custom".into(),
            n: alg.matrix_dim(),
            basis: Some(alg.basis().iter().map(emit_matrix).collect()),
        },
    }
}

pub fn load_vector(alg: &AlgebraRef64, spec: &VectorSpec) -> Result<Vector64> {
    match (&spec.coords, &spec.matrix) {
        (Some(c), None) => {
            if c.len() != alg.dim() {
                return Err(Error::DimensionMismatch {
                    expected: alg.dim(),
                    got: c.len(),
                });
            }
            Ok(AlgebraVector::from_coords(
                alg,
                Coords::from_column_slice(c),
            ))
        }
        (None, Some(rows)) => AlgebraVector::from_matrix(alg, parse_matrix(rows)?),
        _ => Err(Error::UnsupportedFamily(
            "vector needs exactly one of `coords` or `matrix`".into(),
        )),
    }
}

/// Emit a vector by matrix; self-describing and basis-independent.
pub fn vector_spec(v: &Vector64) -> VectorSpec {
    VectorSpec {
        coords: None,
        matrix: Some(emit_matrix(v.matrix())),
    }
}

pub fn load_triple(spec: &TripleSpec) -> Result<Triple<f64>> {
    let alg = load_algebra(&spec.algebra)?;
    let x = load_vector(&alg, &spec.x)?;
    let v = load_vector(&alg, &spec.v)?;
    let a = load_vector(&alg, &spec.a)?;
    Triple::new(x, v, a)
}

pub fn triple_spec(t: &Triple<f64>) -> TripleSpec {
    TripleSpec {
        algebra: algebra_spec(t.x.algebra()),
        x: vector_spec(&t.x),
        v: vector_spec(&t.v),
        a: vector_spec(&t.a),
    }
}

pub fn verdict_report(v: &Verdict<f64>) -> VerdictReport {
    VerdictReport {
        method: v.method.to_string(),
        good: v.good,
        necessary_only: v.necessary_only,
        residual: v.residual,
        tolerance: v.tolerance,
        details: v
            .details
            .iter()
            .map(|CheckDetail { label, residual }| DetailReport {
                label: label.clone(),
                residual: *residual,
            })
            .collect(),
    }
}
