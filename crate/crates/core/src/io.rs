//! JSON formats for algebras, forms, weight matrices and modifications.
//! Rationals are strings such as `"3/4"`; integers may also be JSON numbers.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::algebra::LieAlgebra;
use crate::error::{Error, Result};
use crate::forms::KForm;
use crate::matrix::Matrix;
use crate::modification::Modification;
use crate::scalar::{fmt_q, parse_q, Q};

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AlgebraJson {
    dim: usize,
    basis: Vec<String>,
    #[serde(default)]
    brackets: Vec<BracketJson>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BracketJson {
    i: String,
    j: String,
    out: BTreeMap<String, Value>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct KFormJson {
    degree: usize,
    terms: BTreeMap<String, Value>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct WeightsJson {
    weights: Vec<Vec<Value>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModificationJson {
    phi: BTreeMap<String, Vec<Vec<Value>>>,
}

fn parse<'a, T: Deserialize<'a>>(s: &'a str) -> Result<T> {
    serde_json::from_str(s).map_err(|e| Error::Parse(format!("invalid JSON: {e}")))
}

fn rational(v: &Value) -> Result<Q> {
    match v {
        Value::String(s) => parse_q(s),
        Value::Number(n) => match n.as_i64() {
            Some(i) => Ok(Q::from_integer(i.into())),
            None => parse_q(&n.to_string()),
        },
        other => Err(Error::Parse(format!("expected a rational, got {other}"))),
    }
}

fn index(names: &[String], name: &str) -> Result<usize> {
    names
        .iter()
        .position(|n| n == name)
        .ok_or_else(|| Error::Parse(format!("unknown basis element {name:?}")))
}

fn matrix(rows: &[Vec<Value>], n: usize, what: &str) -> Result<Matrix<Q>> {
    if rows.len() != n || rows.iter().any(|r| r.len() != n) {
        return Err(Error::Parse(format!("{what}: expected a {n}x{n} matrix")));
    }
    let vals: Vec<Vec<Q>> = rows.iter().map(|r| r.iter().map(rational).collect()).collect::<Result<_>>()?;
    Ok(Matrix::from_rows(vals))
}

/// Reads `{ "dim", "basis", "brackets": [{ "i", "j", "out": {name: q} }] }`.
/// Omitted pairs are zero and antisymmetric partners are filled in.
pub fn algebra_from_json(s: &str) -> Result<LieAlgebra<Q>> {
    let a: AlgebraJson = parse(s)?;
    if a.basis.len() != a.dim {
        return Err(Error::DimensionMismatch { expected: a.dim, got: a.basis.len() });
    }
    for (k, name) in a.basis.iter().enumerate() {
        if a.basis[..k].contains(name) {
            return Err(Error::Parse(format!("duplicate basis element {name:?}")));
        }
    }
    let mut brackets = Vec::with_capacity(a.brackets.len());
    for b in &a.brackets {
        let (i, j) = (index(&a.basis, &b.i)?, index(&a.basis, &b.j)?);
        let mut out = vec![Q::from_integer(0.into()); a.dim];
        for (name, v) in &b.out {
            out[index(&a.basis, name)?] = rational(v)?;
        }
        brackets.push((i, j, out));
    }
    let names: Vec<&str> = a.basis.iter().map(String::as_str).collect();
    LieAlgebra::from_brackets(&names, &brackets)
}

/// Writes the nonzero brackets `[e_i, e_j]`, `i < j`.
pub fn algebra_to_json(g: &LieAlgebra<Q>) -> Value {
    let names = g.basis_names();
    let n = g.dim();
    let mut brackets = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let out: BTreeMap<String, Value> = g
                .bracket_basis(i, j)
                .iter()
                .enumerate()
                .filter(|(_, c)| **c != Q::from_integer(0.into()))
                .map(|(k, c)| (names[k].clone(), Value::String(fmt_q(c))))
                .collect();
            if !out.is_empty() {
                brackets.push(BracketJson { i: names[i].clone(), j: names[j].clone(), out });
            }
        }
    }
    serde_json::to_value(AlgebraJson { dim: n, basis: names.to_vec(), brackets }).expect("plain data serializes")
}

/// Reads `{ "degree": k, "terms": { "X1,Y1": "p/q" } }`; names are looked up in `basis`.
pub fn kform_from_json(s: &str, basis: &[String]) -> Result<KForm<Q>> {
    let f: KFormJson = parse(s)?;
    let mut form = KForm::zero(f.degree, basis.len());
    for (key, v) in &f.terms {
        let idx: Vec<usize> = key.split(',').map(|t| index(basis, t.trim())).collect::<Result<_>>()?;
        if idx.len() != f.degree {
            return Err(Error::Parse(format!("term {key:?} has {} indices, expected {}", idx.len(), f.degree)));
        }
        let prev = form.component(&idx);
        form.set(&idx, prev + rational(v)?);
    }
    Ok(form)
}

pub fn kform_to_json(form: &KForm<Q>, basis: &[String]) -> Value {
    let terms: BTreeMap<String, Value> = form
        .terms()
        .map(|(idx, c)| (idx.iter().map(|&i| basis[i].as_str()).collect::<Vec<_>>().join(","), Value::String(fmt_q(c))))
        .collect();
    serde_json::to_value(KFormJson { degree: form.degree(), terms }).expect("plain data serializes")
}

/// Reads `{ "weights": [[...], ...] }`, `2p+1` rows of `q` rationals.
pub fn weights_from_json(s: &str, p: usize, q: usize) -> Result<Matrix<Q>> {
    let w: WeightsJson = parse(s)?;
    if w.weights.len() != 2 * p + 1 || w.weights.iter().any(|r| r.len() != q) {
        return Err(Error::Parse(format!("weights must be {} rows of {q} entries", 2 * p + 1)));
    }
    let rows: Vec<Vec<Q>> = w.weights.iter().map(|r| r.iter().map(rational).collect()).collect::<Result<_>>()?;
    Ok(Matrix::from_rows(rows))
}

/// Reads `{ "phi": { basis_name: n×n matrix } }`; omitted generators map to zero.
pub fn modification_from_json(s: &str, basis: &[String]) -> Result<Modification<Q>> {
    let m: ModificationJson = parse(s)?;
    let n = basis.len();
    let mut phi = vec![Matrix::zeros(n, n); n];
    for (name, rows) in &m.phi {
        phi[index(basis, name)?] = matrix(rows, n, name)?;
    }
    Modification::new(phi)
}

/// Reads a square matrix given as rows of rationals.
pub fn matrix_from_json(s: &str) -> Result<Matrix<Q>> {
    let rows: Vec<Vec<Value>> = parse(s)?;
    matrix(&rows, rows.len(), "matrix")
}

/// Rows of rational strings.
pub fn matrix_to_json(m: &Matrix<Q>) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|r| Value::Array(m.row(r).iter().map(|x| Value::String(fmt_q(x))).collect()))
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{make_gh, make_gl2r};
    use crate::scalar::{q, qi};

    #[test]
    fn algebra_round_trip() {
        for g in [make_gl2r(), make_gh(2).unwrap()] {
            let text = algebra_to_json(&g).to_string();
            assert_eq!(algebra_from_json(&text).unwrap(), g);
        }
    }

    #[test]
    fn algebra_completes_antisymmetry() {
        let s = r#"{"dim":3,"basis":["X","Y","Z"],"brackets":[{"i":"X","j":"Y","out":{"Z":"1"}},{"i":"Y","j":"X","out":{"Z":-1}}]}"#;
        let g = algebra_from_json(s).unwrap();
        assert_eq!(g.bracket_basis(1, 0), vec![qi(0), qi(0), qi(-1)]);
    }

    #[test]
    fn conflicting_brackets_rejected() {
        let s = r#"{"dim":3,"basis":["X","Y","Z"],"brackets":[{"i":"X","j":"Y","out":{"Z":"1"}},{"i":"X","j":"Y","out":{"Z":"2"}}]}"#;
        assert!(matches!(algebra_from_json(s), Err(Error::InvalidAlgebra(_))));
    }

    #[test]
    fn malformed_json_reports_position() {
        let err = algebra_from_json("{\"dim\": 3,\n \"basis\": [}").unwrap_err();
        assert!(err.to_string().contains("line 2"), "{err}");
    }

    #[test]
    fn kform_round_trip() {
        let basis: Vec<String> = ["T", "X", "Y", "Z"].map(String::from).to_vec();
        let f = kform_from_json(r#"{"degree":2,"terms":{"Z,T":"1","Y,X":"1/2"}}"#, &basis).unwrap();
        assert_eq!(f.component(&[0, 3]), qi(-1));
        assert_eq!(f.component(&[1, 2]), q(-1, 2));
        let back = kform_from_json(&kform_to_json(&f, &basis).to_string(), &basis).unwrap();
        assert_eq!(back, f);
    }

    #[test]
    fn modification_file() {
        let g = make_gh(1).unwrap();
        let s = r#"{"phi":{"T":[[0,0,0,0],[0,0,"-1/2",0],[0,"1/2",0,0],[0,0,0,0]]}}"#;
        let phi = modification_from_json(s, g.basis_names()).unwrap();
        assert_eq!(phi.on_basis(0)[(2, 1)], q(1, 2));
        assert!(phi.on_basis(3).is_negligible());
        assert!(modification_from_json(r#"{"phi":{"T":[[0]]}}"#, g.basis_names()).is_err());
    }

    #[test]
    fn matrix_rows() {
        let m = matrix_from_json(r#"[[0,"-1"],[1,0]]"#).unwrap();
        assert_eq!(m[(0, 1)], qi(-1));
        assert_eq!(matrix_from_json(&matrix_to_json(&m).to_string()).unwrap(), m);
        assert!(matrix_from_json("[[1,2]]").is_err());
    }

    #[test]
    fn weights_shape_checked() {
        assert_eq!(weights_from_json(r#"{"weights":[["1/2"],[2],[-1]]}"#, 1, 1).unwrap()[(0, 0)], q(1, 2));
        assert!(weights_from_json(r#"{"weights":[[1,2]]}"#, 1, 1).is_err());
    }
}
