//! JSON documents for pencils, solutions, descriptors and Kronecker reports.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::algebra::{Fe, Fq, Matrix, Poly};
use crate::error::{Error, Result};
use crate::kronecker::KroneckerReport;
use crate::pencil::{Congruence, Homography, Pencil};
use crate::regular::{CanonicalDescriptor, Character, LocalBlockDesc, Place};

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct FieldDoc {
    pub p: u64,
    pub degree: usize,
    pub modulus: Vec<u64>,
}

#[derive(Serialize, Deserialize, Debug, Clone)]
struct PencilDoc {
    field: FieldDoc,
    n: usize,
    b_inf: Vec<Vec<Value>>,
    b_0: Vec<Vec<Value>>,
}

#[derive(Serialize, Deserialize, Debug, Clone)]
struct SolutionDoc {
    #[serde(rename = "S")]
    s: Vec<Vec<Value>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    gamma: Option<Vec<Vec<Value>>>,
}

fn perr(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

pub fn field_doc(f: &Fq) -> FieldDoc {
    FieldDoc { p: f.p(), degree: f.degree(), modulus: f.modulus() }
}

pub fn field_from_doc(d: &FieldDoc) -> Result<Fq> {
    if d.modulus.len() != d.degree + 1 {
        return Err(perr("modulus length must be degree + 1"));
    }
    Fq::new(d.p, &d.modulus)
}

pub fn elem_to_json(f: &Fq, a: &Fe) -> Value {
    if f.degree() == 1 {
        Value::from(a.coeff(0))
    } else {
        Value::from(f.coeffs(a))
    }
}

pub fn elem_from_json(f: &Fq, v: &Value) -> Result<Fe> {
    let coeffs: Vec<u64> = match v {
        Value::Number(n) if f.degree() == 1 => vec![n.as_u64().ok_or_else(|| perr("element must be a non-negative integer"))?],
        Value::Array(items) if items.len() == f.degree() => items
            .iter()
            .map(|x| x.as_u64().ok_or_else(|| perr("coefficient must be a non-negative integer")))
            .collect::<Result<_>>()?,
        _ => return Err(perr(format!("bad element {v} for a degree-{} field", f.degree()))),
    };
    f.elem(&coeffs)
}

pub fn matrix_to_json(f: &Fq, m: &Matrix<Fe>) -> Vec<Vec<Value>> {
    m.to_rows().iter().map(|r| r.iter().map(|a| elem_to_json(f, a)).collect()).collect()
}

pub fn matrix_from_json(f: &Fq, rows: &[Vec<Value>], n: usize, m: usize) -> Result<Matrix<Fe>> {
    if rows.len() != n || rows.iter().any(|r| r.len() != m) {
        return Err(perr(format!("expected a {n}x{m} matrix")));
    }
    let rows = rows
        .iter()
        .map(|r| r.iter().map(|v| elem_from_json(f, v)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    Ok(Matrix::from_rows(rows, m))
}

pub fn parse_pencil(doc: &str) -> Result<Pencil> {
    let d: PencilDoc = serde_json::from_str(doc).map_err(|e| perr(e.to_string()))?;
    let f = field_from_doc(&d.field)?;
    let bi = matrix_from_json(&f, &d.b_inf, d.n, d.n)?;
    let b0 = matrix_from_json(&f, &d.b_0, d.n, d.n)?;
    Pencil::new(f, bi, b0)
}

pub fn emit_pencil(p: &Pencil) -> String {
    let f = p.field();
    let d = PencilDoc {
        field: field_doc(f),
        n: p.dim(),
        b_inf: matrix_to_json(f, p.b_inf()),
        b_0: matrix_to_json(f, p.b_0()),
    };
    serde_json::to_string(&d).expect("serializable")
}

/// A congruence matrix and an optional homography.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solution {
    pub s: Matrix<Fe>,
    pub gamma: Option<Homography>,
}

pub fn emit_solution(f: &Fq, sol: &Solution) -> String {
    let gamma = sol.gamma.as_ref().map(|g| {
        let m = g.entries();
        vec![vec![elem_to_json(f, &m[0]), elem_to_json(f, &m[1])], vec![elem_to_json(f, &m[2]), elem_to_json(f, &m[3])]]
    });
    serde_json::to_string(&SolutionDoc { s: matrix_to_json(f, &sol.s), gamma }).expect("serializable")
}

/// Parse a solution for pencils of size `n` over `f`. The homography may be
/// singular in a corrupted file; that is reported as a parse error.
pub fn parse_solution(f: &Fq, n: usize, doc: &str) -> Result<Solution> {
    let d: SolutionDoc = serde_json::from_str(doc).map_err(|e| perr(e.to_string()))?;
    let s = matrix_from_json(f, &d.s, n, n)?;
    let gamma = match d.gamma {
        None => None,
        Some(rows) => {
            let g = matrix_from_json(f, &rows, 2, 2)?;
            Some(Homography::new(f, [*g.get(0, 0), *g.get(0, 1), *g.get(1, 0), *g.get(1, 1)]).map_err(|_| perr("singular homography"))?)
        }
    };
    Ok(Solution { s, gamma })
}

#[derive(Serialize, Deserialize, Debug, Clone)]
struct BlockDoc {
    place: Value,
    ell: usize,
    mult: usize,
    #[serde(rename = "char")]
    character: String,
}

#[derive(Serialize, Deserialize, Debug, Clone)]
struct DescriptorDoc {
    kronecker: Vec<usize>,
    blocks: Vec<BlockDoc>,
    transform: Vec<Vec<Value>>,
}

pub fn emit_descriptor(f: &Fq, d: &CanonicalDescriptor) -> String {
    let blocks = d
        .blocks
        .iter()
        .map(|b| BlockDoc {
            place: match &b.place {
                Place::Infinity => Value::from("inf"),
                Place::Finite(g) => Value::from(g.coeffs().iter().map(|c| elem_to_json(f, c)).collect::<Vec<_>>()),
            },
            ell: b.ell,
            mult: b.mult,
            character: match b.character {
                Character::One => "1".into(),
                Character::Delta => "D".into(),
            },
        })
        .collect();
    let doc = DescriptorDoc { kronecker: d.kronecker.clone(), blocks, transform: matrix_to_json(f, d.transform.matrix()) };
    serde_json::to_string(&doc).expect("serializable")
}

pub fn parse_descriptor(f: &Fq, doc: &str) -> Result<CanonicalDescriptor> {
    let d: DescriptorDoc = serde_json::from_str(doc).map_err(|e| perr(e.to_string()))?;
    let blocks = d
        .blocks
        .iter()
        .map(|b| {
            let place = match &b.place {
                Value::String(s) if s == "inf" => Place::Infinity,
                Value::Array(items) => {
                    Place::Finite(Poly::from_coeffs(f, items.iter().map(|v| elem_from_json(f, v)).collect::<Result<Vec<_>>>()?))
                }
                other => return Err(perr(format!("bad place {other}"))),
            };
            let character = match b.character.as_str() {
                "1" => Character::One,
                "D" => Character::Delta,
                other => return Err(perr(format!("bad character {other}"))),
            };
            Ok(LocalBlockDesc { place, ell: b.ell, mult: b.mult, character })
        })
        .collect::<Result<Vec<_>>>()?;
    let n = d.transform.len();
    let t = matrix_from_json(f, &d.transform, n, n)?;
    Ok(CanonicalDescriptor { kronecker: d.kronecker, blocks, transform: Congruence::new(f, t)? })
}

#[derive(Serialize, Deserialize, Debug, Clone)]
struct ReportDoc {
    indices: Vec<usize>,
    transform: Vec<Vec<Value>>,
    regular_part: Value,
}

pub fn emit_kronecker_report(f: &Fq, r: &KroneckerReport) -> String {
    let regular_part = serde_json::from_str(&emit_pencil(&r.regular_part)).expect("valid JSON");
    let doc = ReportDoc { indices: r.indices.clone(), transform: matrix_to_json(f, r.transform.matrix()), regular_part };
    serde_json::to_string(&doc).expect("serializable")
}
