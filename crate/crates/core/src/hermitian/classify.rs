use serde::Serialize;

use crate::algebra::LieAlgebra;
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::{Scalar, F64_ZERO_TOL};

use super::{
    covariant_derivative_form, fundamental_form, lee_form, levi_civita, nijenhuis, BilinearForm,
    ComplexStructure, IntegrabilitySummary,
};

/// Inertia of a symmetric matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Signature {
    pub positive: usize,
    pub negative: usize,
    pub zero: usize,
}

impl Signature {
    pub fn is_positive_definite(&self) -> bool {
        self.negative == 0 && self.zero == 0
    }
}

/// Exact backends use congruence diagonalization; `f64` uses symmetric
/// eigenvalues with the default zero tolerance.
pub fn signature<S: Scalar>(m: &Matrix<S>) -> Result<Signature> {
    if !m.is_symmetric() {
        return Err(Error::InvalidMetric("matrix is not symmetric".into()));
    }
    let diag = if S::EXACT { congruence_diagonal(m) } else { eigen_diagonal(m) };
    let mut s = Signature { positive: 0, negative: 0, zero: 0 };
    for d in diag {
        match d {
            1 => s.positive += 1,
            -1 => s.negative += 1,
            _ => s.zero += 1,
        }
    }
    Ok(s)
}

fn eigen_diagonal<S: Scalar>(m: &Matrix<S>) -> Vec<i8> {
    let n = m.rows();
    let a = nalgebra::DMatrix::from_fn(n, n, |i, j| m[(i, j)].to_f64());
    let scale = a.amax().max(1.0);
    a.symmetric_eigen()
        .eigenvalues
        .iter()
        .map(|&e| if e.abs() <= F64_ZERO_TOL * scale { 0 } else if e > 0.0 { 1 } else { -1 })
        .collect()
}

fn congruence_diagonal<S: Scalar>(m: &Matrix<S>) -> Vec<i8> {
    let n = m.rows();
    let mut a = m.clone();
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        if a[(k, k)].is_negligible() {
            if let Some(j) = (k + 1..n).find(|&j| !a[(j, j)].is_negligible()) {
                swap_sym(&mut a, k, j);
            } else if let Some(j) = (k + 1..n).find(|&j| !a[(k, j)].is_negligible()) {
                // e_k += e_j makes the pivot 2 a_kj.
                for c in 0..n {
                    let v = a[(k, c)].clone() + a[(j, c)].clone();
                    a[(k, c)] = v;
                }
                for r in 0..n {
                    let v = a[(r, k)].clone() + a[(r, j)].clone();
                    a[(r, k)] = v;
                }
            } else {
                out.push(0);
                continue;
            }
        }
        let p = a[(k, k)].clone();
        out.push(p.signum_i8());
        for r in k + 1..n {
            let f = a[(r, k)].clone() / p.clone();
            if f.is_zero() {
                continue;
            }
            for c in k..n {
                let v = a[(r, c)].clone() - f.clone() * a[(k, c)].clone();
                a[(r, c)] = v;
            }
            for c in k..n {
                a[(c, r)] = a[(r, c)].clone();
            }
        }
        for r in k + 1..n {
            a[(k, r)] = S::zero();
            a[(r, k)] = S::zero();
        }
    }
    out
}

fn swap_sym<S: Scalar>(a: &mut Matrix<S>, i: usize, j: usize) {
    a.swap_rows(i, j);
    for r in 0..a.rows() {
        let t = a[(r, i)].clone();
        a[(r, i)] = a[(r, j)].clone();
        a[(r, j)] = t;
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum HermitianClass {
    NotIntegrable,
    NotCompatible { reason: String },
    Kahler,
    Lck { vaisman: bool },
    NotLck,
}

#[derive(Clone, Debug, Serialize)]
pub struct HermitianReport {
    pub class: HermitianClass,
    pub integrability: IntegrabilitySummary,
    pub signature: Option<Signature>,
    pub positive_definite: bool,
    /// Lee form coefficients when one exists.
    pub lee: Option<Vec<f64>>,
    pub lee_unique: bool,
    pub nabla_lee_max: Option<f64>,
}

/// Classifies a left-invariant Hermitian structure `(g, J)` with metric `⟨·,·⟩`
/// as Kähler, lcK, Vaisman, or none of these.
pub fn classify_hermitian<S: Scalar>(
    g: &LieAlgebra<S>,
    j: &ComplexStructure<S>,
    metric: &BilinearForm<S>,
) -> Result<HermitianReport> {
    let nij = nijenhuis(g, j)?;
    let integrability = IntegrabilitySummary::from(&nij);
    let sig = signature(metric.matrix())?;
    let mut report = HermitianReport {
        class: HermitianClass::NotIntegrable,
        integrability,
        signature: Some(sig),
        positive_definite: if S::EXACT {
            metric.matrix().leading_minors().iter().all(|m| m.signum_i8() > 0)
        } else {
            sig.is_positive_definite()
        },
        lee: None,
        lee_unique: false,
        nabla_lee_max: None,
    };
    if !report.integrability.integrable {
        return Ok(report);
    }
    if sig.zero > 0 {
        report.class = HermitianClass::NotCompatible { reason: "degenerate metric".into() };
        return Ok(report);
    }
    if !metric.is_j_invariant(j) {
        report.class = HermitianClass::NotCompatible { reason: "metric is not J-invariant".into() };
        return Ok(report);
    }
    let omega = fundamental_form(metric, j)?;
    let Some(lee) = lee_form(g, &omega)? else {
        report.class = HermitianClass::NotLck;
        return Ok(report);
    };
    report.lee = Some(lee.theta.to_covector().iter().map(Scalar::to_f64).collect());
    report.lee_unique = lee.is_unique();
    if lee.theta.is_zero() {
        report.class = HermitianClass::Kahler;
        return Ok(report);
    }
    let conn = levi_civita(g, metric)?;
    let nabla = covariant_derivative_form(&conn, &lee.theta)?;
    report.nabla_lee_max = Some(nabla.max_abs());
    report.class = HermitianClass::Lck { vaisman: nabla.is_negligible() };
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{self, AlgebraId, Branch, DeltaParam, EpsilonVector, LckCoefficients};
    use crate::scalar::{qi, Q};

    fn sym(rows: Vec<Vec<i64>>) -> Matrix<Q> {
        Matrix::from_rows(rows.into_iter().map(|r| r.into_iter().map(qi).collect()).collect())
    }

    #[test]
    fn signature_of_hyperbolic_plane() {
        let s = signature(&sym(vec![vec![0, 1], vec![1, 0]])).unwrap();
        assert_eq!((s.positive, s.negative, s.zero), (1, 1, 0));
    }

    #[test]
    fn signature_exact_matches_float() {
        let m = sym(vec![vec![2, -1, 0, 3], vec![-1, 0, 4, 1], vec![0, 4, -5, 0], vec![3, 1, 0, 1]]);
        assert_eq!(signature(&m).unwrap(), signature(&m.to_f64()).unwrap());
    }

    #[test]
    fn signature_degenerate() {
        let s = signature(&sym(vec![vec![1, 1], vec![1, 1]])).unwrap();
        assert_eq!((s.positive, s.negative, s.zero), (1, 0, 1));
    }

    #[test]
    fn gl2r_structure_is_vaisman() {
        let id = AlgebraId::Gl2r;
        let g = id.build().unwrap();
        let j = catalog::complex_structure(&id, &DeltaParam::new(qi(1), qi(0)).unwrap(), None, Branch::V).unwrap();
        for (a, vaisman) in [(qi(0), true), (Q::new(1.into(), 2.into()), false)] {
            let coeffs = LckCoefficients::Reductive { a, b: qi(0), c: qi(1) };
            let omega = catalog::lck_form(&g, id.layout().unwrap(), &coeffs).unwrap();
            let m = BilinearForm::new(catalog::metric_matrix(&omega, &j)).unwrap();
            let r = classify_hermitian(&g, &j, &m).unwrap();
            assert_eq!(r.class, HermitianClass::Lck { vaisman });
            assert!(r.positive_definite);
        }
    }

    #[test]
    fn gh_canonical_is_vaisman() {
        let id = AlgebraId::Gh(2);
        let g = id.build().unwrap();
        let eps = EpsilonVector::all_positive(2);
        let j = catalog::complex_structure(&id, &DeltaParam::new(qi(1), qi(0)).unwrap(), Some(&eps), Branch::V)
            .unwrap();
        let r = classify_hermitian(&g, &j, &BilinearForm::identity(6)).unwrap();
        assert_eq!(r.class, HermitianClass::Lck { vaisman: true });
        assert!(r.positive_definite);
    }
}
