use serde::Serialize;

use crate::algebra::{LieAlgebra, Subspace};
use crate::error::{Error, Result};
use crate::hermitian::ComplexStructure;
use crate::matrix::Matrix;
use crate::scalar::Scalar;

/// `g ⊗ C` as a real algebra of twice the dimension, with basis
/// `e_1..e_n, i e_1..i e_n` and `[(a,b),(c,d)] = ([a,c] − [b,d], [a,d] + [b,c])`.
#[derive(Clone, Debug)]
pub struct Complexification<S> {
    real_dim: usize,
    algebra: LieAlgebra<S>,
}

impl<S: Scalar> Complexification<S> {
    pub fn new(g: &LieAlgebra<S>) -> Self {
        let n = g.dim();
        let mut c = vec![vec![vec![S::zero(); 2 * n]; 2 * n]; 2 * n];
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let v = g.c(i, j, k).clone();
                    if v.is_zero() {
                        continue;
                    }
                    c[i][j][k] = v.clone();
                    c[i][n + j][n + k] = v.clone();
                    c[n + i][j][n + k] = v.clone();
                    c[n + i][n + j][k] = -v;
                }
            }
        }
        let names = g
            .basis_names()
            .iter()
            .cloned()
            .chain(g.basis_names().iter().map(|s| format!("i{s}")))
            .collect();
        let algebra = LieAlgebra::from_structure_constants(names, c).expect("complexified constants stay antisymmetric");
        Self { real_dim: n, algebra }
    }

    pub fn algebra(&self) -> &LieAlgebra<S> {
        &self.algebra
    }

    pub fn real_dim(&self) -> usize {
        self.real_dim
    }

    /// Multiplication by `i`: `(a, b) ↦ (−b, a)`.
    pub fn times_i(&self, v: &[S]) -> Vec<S> {
        let n = self.real_dim;
        (0..2 * n).map(|k| if k < n { -v[n + k].clone() } else { v[k - n].clone() }).collect()
    }

    /// Complex conjugation: `(a, b) ↦ (a, −b)`.
    pub fn conjugate(&self, v: &[S]) -> Vec<S> {
        let n = self.real_dim;
        (0..2 * n).map(|k| if k < n { v[k].clone() } else { -v[k].clone() }).collect()
    }
}

/// `h_J = {X − i JX}` inside `g ⊗ C`.
#[derive(Clone, Debug)]
pub struct HolomorphicSubalgebra<S> {
    pub complexification: Complexification<S>,
    /// `w_k = e_k − i J e_k`, a real spanning set.
    pub generators: Vec<Vec<S>>,
    pub span: Subspace<S>,
}

impl<S: Scalar> HolomorphicSubalgebra<S> {
    /// A complex basis: generators whose complex span grows at each step.
    pub fn complex_basis(&self) -> Vec<Vec<S>> {
        let dim = 2 * self.complexification.real_dim;
        let mut basis: Vec<Vec<S>> = Vec::new();
        let mut acc = Subspace::zero(dim);
        for w in &self.generators {
            if acc.contains(w) {
                continue;
            }
            acc = acc.sum(&Subspace::from_spanning(dim, vec![w.clone(), self.complexification.times_i(w)]));
            basis.push(w.clone());
        }
        basis
    }
}

pub fn holomorphic_subalgebra<S: Scalar>(g: &LieAlgebra<S>, j: &ComplexStructure<S>) -> Result<HolomorphicSubalgebra<S>> {
    let n = g.dim();
    if j.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, got: j.dim() });
    }
    let complexification = Complexification::new(g);
    let generators: Vec<Vec<S>> = (0..n)
        .map(|k| {
            let je = j.matrix().column(k);
            let mut w = vec![S::zero(); 2 * n];
            w[k] = S::one();
            for (a, x) in je.into_iter().enumerate() {
                w[n + a] = -x;
            }
            w
        })
        .collect();
    let span = Subspace::from_spanning(2 * n, generators.clone());
    Ok(HolomorphicSubalgebra { complexification, generators, span })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HjReport {
    /// `h_J` is closed under the bracket.
    pub closed: bool,
    /// Pair of generators whose bracket leaves `h_J`.
    pub witness: Option<(usize, usize)>,
    /// `h_J` is a complex subspace.
    pub complex_subspace: bool,
    /// `g ⊗ C = h_J ⊕ conj(h_J)`.
    pub direct_sum: bool,
}

impl HjReport {
    pub fn passes(&self) -> bool {
        self.closed && self.complex_subspace && self.direct_sum
    }
}

pub fn verify_hj<S: Scalar>(g: &LieAlgebra<S>, j: &ComplexStructure<S>) -> Result<HjReport> {
    let h = holomorphic_subalgebra(g, j)?;
    let cx = &h.complexification;
    let n = g.dim();
    let mut witness = None;
    'outer: for a in 0..n {
        for b in a + 1..n {
            let br = cx.algebra().bracket_unchecked(&h.generators[a], &h.generators[b]);
            if !h.span.contains(&br) {
                witness = Some((a, b));
                break 'outer;
            }
        }
    }
    let complex_subspace = h.generators.iter().all(|w| h.span.contains(&cx.times_i(w)));
    let conj: Vec<Vec<S>> = h.generators.iter().map(|w| cx.conjugate(w)).collect();
    let all: Vec<Vec<S>> = h.generators.iter().cloned().chain(conj).collect();
    let direct_sum = h.span.dim() == n && Matrix::from_rows(all).rank() == 2 * n;
    Ok(HjReport { closed: witness.is_none(), witness, complex_subspace, direct_sum })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{self, AlgebraId, Branch, DeltaParam, EpsilonVector};
    use crate::scalar::{qi, Q};

    #[test]
    fn complexification_is_lie() {
        let cx = Complexification::new(&catalog::make_gl2r());
        assert!(cx.algebra().check_jacobi().ok);
    }

    #[test]
    fn family_structures_pass() {
        for id in [AlgebraId::Gl2r, AlgebraId::U2, AlgebraId::Gh(2)] {
            let eps = EpsilonVector::new(vec![1, -1]).unwrap();
            let e = (!id.is_reductive()).then_some(&eps);
            let j = catalog::complex_structure(&id, &DeltaParam::new(qi(2), qi(-1)).unwrap(), e, Branch::canonical_for(&id))
                .unwrap();
            let g = id.build().unwrap();
            let r = verify_hj(&g, &j).unwrap();
            assert!(r.passes(), "{id}: {r:?}");
            assert_eq!(holomorphic_subalgebra(&g, &j).unwrap().complex_basis().len(), id.dim() / 2);
        }
    }

    #[test]
    fn non_integrable_fails_closure() {
        let g = catalog::make_gl2r();
        let mut j = Matrix::<Q>::zeros(4, 4);
        j[(1, 0)] = qi(1);
        j[(0, 1)] = qi(-1);
        j[(3, 2)] = qi(1);
        j[(2, 3)] = qi(-1);
        let r = verify_hj(&g, &ComplexStructure::new(j).unwrap()).unwrap();
        assert!(!r.closed);
        assert!(r.witness.is_some());
    }
}
