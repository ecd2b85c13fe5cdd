//! Finite-dimensional real Lie algebras given by structure constants.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::Scalar;

/// Coordinates of an algebra element in the fixed basis.
pub type Vector<S> = Vec<S>;

/// Linear endomorphism acting on coordinate columns.
pub type Endomorphism<S> = Matrix<S>;

/// A Lie algebra with `[e_i, e_j] = sum_k c^k_{ij} e_k`, stored dense.
#[derive(Clone, Debug, PartialEq)]
pub struct LieAlgebra<S> {
    dim: usize,
    consts: Vec<S>,
    names: Vec<String>,
}

impl<S: Scalar> LieAlgebra<S> {
    /// Builds an algebra from a dense tensor indexed `c[i][j][k] = c^k_{ij}`.
    /// Antisymmetry is enforced; the Jacobi identity is left to
    /// [`LieAlgebra::check_jacobi`].
    pub fn from_structure_constants(names: Vec<String>, c: Vec<Vec<Vec<S>>>) -> Result<Self> {
        let n = names.len();
        if n == 0 {
            return Err(Error::InvalidAlgebra("dimension must be positive".into()));
        }
        if c.len() != n || c.iter().any(|row| row.len() != n || row.iter().any(|v| v.len() != n)) {
            return Err(Error::InvalidAlgebra("structure tensor must be n x n x n".into()));
        }
        let mut consts = Vec::with_capacity(n * n * n);
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if !(c[i][j][k].clone() + c[j][i][k].clone()).is_negligible() {
                        return Err(Error::InvalidAlgebra(format!(
                            "c^{k}_{{{i}{j}}} is not antisymmetric"
                        )));
                    }
                    consts.push(c[i][j][k].clone());
                }
            }
        }
        Ok(Self { dim: n, consts, names })
    }

    /// Builds an algebra from the nonzero brackets `[e_i, e_j] = out`
    /// (`i != j`). The antisymmetric partner is filled in; a pair given twice
    /// with inconsistent values is rejected.
    pub fn from_brackets(names: &[&str], brackets: &[(usize, usize, Vec<S>)]) -> Result<Self> {
        let n = names.len();
        let mut c = vec![vec![vec![S::zero(); n]; n]; n];
        let mut set = vec![vec![false; n]; n];
        for (i, j, out) in brackets {
            let (i, j) = (*i, *j);
            if i >= n || j >= n || out.len() != n {
                return Err(Error::InvalidAlgebra(format!("bracket ({i},{j}) out of range")));
            }
            if i == j {
                if out.iter().any(|x| !x.is_negligible()) {
                    return Err(Error::InvalidAlgebra(format!("[e{i}, e{i}] must vanish")));
                }
                continue;
            }
            if set[i][j] {
                let conflict = (0..n).any(|k| c[i][j][k] != out[k]);
                if conflict {
                    return Err(Error::InvalidAlgebra(format!(
                        "conflicting values for [{}, {}]",
                        names[i], names[j]
                    )));
                }
                continue;
            }
            for k in 0..n {
                c[i][j][k] = out[k].clone();
                c[j][i][k] = -out[k].clone();
            }
            set[i][j] = true;
            set[j][i] = true;
        }
        Self::from_structure_constants(names.iter().map(|s| s.to_string()).collect(), c)
    }

    /// The abelian algebra of dimension `n` with basis `e1..en`.
    pub fn abelian(n: usize) -> Self {
        let names: Vec<String> = (1..=n).map(|i| format!("e{i}")).collect();
        Self { dim: n, consts: vec![S::zero(); n * n * n], names }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn basis_names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// `c^k_{ij}`.
    pub fn c(&self, i: usize, j: usize, k: usize) -> &S {
        &self.consts[(i * self.dim + j) * self.dim + k]
    }

    pub fn basis_vector(&self, i: usize) -> Vector<S> {
        let mut v = vec![S::zero(); self.dim];
        v[i] = S::one();
        v
    }

    /// `[e_i, e_j]` as a coordinate vector.
    pub fn bracket_basis(&self, i: usize, j: usize) -> Vector<S> {
        let start = (i * self.dim + j) * self.dim;
        self.consts[start..start + self.dim].to_vec()
    }

    fn check_len(&self, v: &[S]) -> Result<()> {
        if v.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: v.len() });
        }
        Ok(())
    }

    pub fn bracket(&self, x: &[S], y: &[S]) -> Result<Vector<S>> {
        self.check_len(x)?;
        self.check_len(y)?;
        Ok(self.bracket_unchecked(x, y))
    }

    pub(crate) fn bracket_unchecked(&self, x: &[S], y: &[S]) -> Vector<S> {
        let n = self.dim;
        let mut out = vec![S::zero(); n];
        for i in 0..n {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..n {
                if y[j].is_zero() || i == j {
                    continue;
                }
                let w = x[i].clone() * y[j].clone();
                let base = (i * n + j) * n;
                for (k, o) in out.iter_mut().enumerate() {
                    let c = &self.consts[base + k];
                    if !c.is_zero() {
                        *o = o.clone() + w.clone() * c.clone();
                    }
                }
            }
        }
        out
    }

    /// Cyclic Jacobi sum on every basis triple `i < j < k`.
    pub fn check_jacobi(&self) -> JacobiReport {
        let n = self.dim;
        let mut worst = 0.0f64;
        let mut witness = None;
        let mut exact_ok = true;
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    let s = self.jacobiator(i, j, k);
                    let bad = s.iter().any(|x| !x.is_negligible());
                    let mag = s.iter().map(Scalar::magnitude).fold(0.0, f64::max);
                    if bad {
                        exact_ok = false;
                        if witness.is_none() {
                            witness = Some((i, j, k));
                        }
                    }
                    worst = worst.max(mag);
                }
            }
        }
        JacobiReport { ok: exact_ok, worst_violation: worst, witness }
    }

    fn jacobiator(&self, i: usize, j: usize, k: usize) -> Vector<S> {
        let (ei, ej, ek) = (self.basis_vector(i), self.basis_vector(j), self.basis_vector(k));
        let a = self.bracket_unchecked(&self.bracket_basis(i, j), &ek);
        let b = self.bracket_unchecked(&self.bracket_basis(j, k), &ei);
        let c = self.bracket_unchecked(&self.bracket_basis(k, i), &ej);
        a.into_iter().zip(b).zip(c).map(|((a, b), c)| a + b + c).collect()
    }

    /// `ad_X`, with column `j` equal to `[X, e_j]`.
    pub fn ad(&self, x: &[S]) -> Result<Endomorphism<S>> {
        self.check_len(x)?;
        let cols: Vec<Vector<S>> =
            (0..self.dim).map(|j| self.bracket_unchecked(x, &self.basis_vector(j))).collect();
        Ok(Matrix::from_columns(&cols))
    }

    pub fn ad_basis(&self, i: usize) -> Endomorphism<S> {
        let cols: Vec<Vector<S>> = (0..self.dim).map(|j| self.bracket_basis(i, j)).collect();
        Matrix::from_columns(&cols)
    }

    pub fn is_unimodular(&self) -> bool {
        (0..self.dim).all(|i| self.ad_basis(i).trace().is_negligible())
    }

    pub fn center(&self) -> Subspace<S> {
        let n = self.dim;
        // Rows: for each (i, k), sum_j x_j c^k_{ij} = 0.
        let mut rows = Vec::with_capacity(n * n);
        for i in 0..n {
            for k in 0..n {
                rows.push((0..n).map(|j| self.c(i, j, k).clone()).collect::<Vec<_>>());
            }
        }
        Subspace::from_spanning(n, Matrix::from_rows(rows).nullspace())
    }

    pub fn derived_algebra(&self) -> Subspace<S> {
        let n = self.dim;
        let mut span = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                span.push(self.bracket_basis(i, j));
            }
        }
        Subspace::from_spanning(n, span)
    }

    /// `[A, B]` for subspaces.
    pub fn bracket_subspaces(&self, a: &Subspace<S>, b: &Subspace<S>) -> Subspace<S> {
        let mut span = Vec::new();
        for x in a.basis() {
            for y in b.basis() {
                span.push(self.bracket_unchecked(x, y));
            }
        }
        Subspace::from_spanning(self.dim, span)
    }

    /// Least `k` with `D^k g = 0`, or `None` when the derived series
    /// stabilizes at a nonzero ideal.
    pub fn derived_series_length(&self) -> Option<usize> {
        let mut current = Subspace::full(self.dim);
        let mut k = 0;
        loop {
            if current.dim() == 0 {
                return Some(k);
            }
            let next = self.bracket_subspaces(&current, &current);
            if next.dim() == current.dim() {
                return None;
            }
            current = next;
            k += 1;
        }
    }

    /// Basis of `Der(g)`.
    pub fn derivations(&self) -> Vec<Endomorphism<S>> {
        let system = self.derivation_system();
        self.solve_endomorphism_system(system)
    }

    /// Rows of the linear system `D[e_i,e_j] = [De_i,e_j] + [e_i,De_j]` in the
    /// `n^2` unknowns `D_{ab}` (variable index `a * n + b`).
    pub(crate) fn derivation_system(&self) -> Vec<Vec<S>> {
        let n = self.dim;
        let var = |a: usize, b: usize| a * n + b;
        let mut rows = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                for k in 0..n {
                    let mut row = vec![S::zero(); n * n];
                    for l in 0..n {
                        let c = self.c(i, j, l);
                        if !c.is_zero() {
                            row[var(k, l)] = row[var(k, l)].clone() + c.clone();
                        }
                    }
                    for a in 0..n {
                        let c1 = self.c(a, j, k);
                        if !c1.is_zero() {
                            row[var(a, i)] = row[var(a, i)].clone() - c1.clone();
                        }
                        let c2 = self.c(i, a, k);
                        if !c2.is_zero() {
                            row[var(a, j)] = row[var(a, j)].clone() - c2.clone();
                        }
                    }
                    if row.iter().any(|x| !x.is_zero()) {
                        rows.push(row);
                    }
                }
            }
        }
        rows
    }

    pub(crate) fn solve_endomorphism_system(&self, rows: Vec<Vec<S>>) -> Vec<Endomorphism<S>> {
        let n = self.dim;
        let sols = if rows.is_empty() {
            (0..n * n)
                .map(|v| {
                    let mut e = vec![S::zero(); n * n];
                    e[v] = S::one();
                    e
                })
                .collect()
        } else {
            Matrix::from_rows(rows).nullspace()
        };
        sols.into_iter().map(|v| Matrix::from_fn(n, n, |a, b| v[a * n + b].clone())).collect()
    }

    /// Checks the Leibniz rule for `d` on every basis pair.
    pub fn is_derivation(&self, d: &Endomorphism<S>) -> bool {
        let n = self.dim;
        (0..n).all(|i| {
            (i + 1..n).all(|j| {
                let lhs = d.mul_vec(&self.bracket_basis(i, j));
                let a = self.bracket_unchecked(&d.column(i), &self.basis_vector(j));
                let b = self.bracket_unchecked(&self.basis_vector(i), &d.column(j));
                lhs.iter().zip(a.iter().zip(&b)).all(|(l, (a, b))| {
                    (l.clone() - a.clone() - b.clone()).is_negligible()
                })
            })
        })
    }

    /// Checks that the linear map `f` (columns = images of the source basis)
    /// sends `self` brackets to `target` brackets. Returns the first failing
    /// basis pair.
    pub fn homomorphism_defect(&self, target: &LieAlgebra<S>, f: &Matrix<S>) -> Option<(usize, usize)> {
        let n = self.dim;
        for i in 0..n {
            for j in i + 1..n {
                let lhs = f.mul_vec(&self.bracket_basis(i, j));
                let rhs = target.bracket_unchecked(&f.column(i), &f.column(j));
                if lhs.iter().zip(&rhs).any(|(a, b)| !(a.clone() - b.clone()).is_negligible()) {
                    return Some((i, j));
                }
            }
        }
        None
    }

    /// Structure constants in the basis given by the columns of `p`
    /// (`p` must be invertible).
    pub fn change_basis(&self, p: &Matrix<S>) -> Result<Self> {
        let inv = p
            .inverse()
            .ok_or_else(|| Error::InvalidParameter("basis change is singular".into()))?;
        let n = self.dim;
        let mut c = vec![vec![vec![S::zero(); n]; n]; n];
        for i in 0..n {
            for j in 0..n {
                let br = self.bracket_unchecked(&p.column(i), &p.column(j));
                let coords = inv.mul_vec(&br);
                c[i][j] = coords;
            }
        }
        Self::from_structure_constants(self.names.clone(), c)
    }

    pub fn with_names(mut self, names: Vec<String>) -> Self {
        assert_eq!(names.len(), self.dim);
        self.names = names;
        self
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> LieAlgebra<T> {
        LieAlgebra { dim: self.dim, consts: self.consts.iter().map(f).collect(), names: self.names.clone() }
    }

    pub fn to_f64(&self) -> LieAlgebra<f64> {
        self.map(Scalar::to_f64)
    }

    /// Dense tensor `c[i][j][k]`.
    pub fn structure_tensor(&self) -> Vec<Vec<Vec<S>>> {
        let n = self.dim;
        (0..n).map(|i| (0..n).map(|j| self.bracket_basis(i, j)).collect()).collect()
    }

    /// Direct sum `R T ⊕ self`, with `T` prepended as the first basis vector.
    pub fn with_central_line(&self, name: &str) -> Self {
        let n = self.dim + 1;
        let mut c = vec![vec![vec![S::zero(); n]; n]; n];
        for i in 0..self.dim {
            for j in 0..self.dim {
                for k in 0..self.dim {
                    c[i + 1][j + 1][k + 1] = self.c(i, j, k).clone();
                }
            }
        }
        let mut names = vec![name.to_string()];
        names.extend(self.names.iter().cloned());
        Self::from_structure_constants(names, c).expect("antisymmetry is inherited")
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct JacobiReport {
    pub ok: bool,
    pub worst_violation: f64,
    pub witness: Option<(usize, usize, usize)>,
}

/// A linear subspace, stored as the nonzero rows of a reduced echelon basis.
#[derive(Clone, Debug, PartialEq)]
pub struct Subspace<S> {
    ambient: usize,
    basis: Vec<Vector<S>>,
}

impl<S: Scalar> Subspace<S> {
    pub fn zero(ambient: usize) -> Self {
        Self { ambient, basis: Vec::new() }
    }

    pub fn full(ambient: usize) -> Self {
        let basis = (0..ambient)
            .map(|i| {
                let mut v = vec![S::zero(); ambient];
                v[i] = S::one();
                v
            })
            .collect();
        Self { ambient, basis }
    }

    /// Span of arbitrary vectors, put into reduced echelon form.
    pub fn from_spanning(ambient: usize, vectors: Vec<Vector<S>>) -> Self {
        if vectors.is_empty() {
            return Self::zero(ambient);
        }
        let (r, pivots) = Matrix::from_rows(vectors).rref();
        let basis = (0..pivots.len()).map(|i| r.row(i)).collect();
        Self { ambient, basis }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn basis(&self) -> &[Vector<S>] {
        &self.basis
    }

    pub fn contains(&self, v: &[S]) -> bool {
        let mut rows = self.basis.clone();
        rows.push(v.to_vec());
        Matrix::from_rows(rows).rank() == self.dim()
    }

    pub fn contains_subspace(&self, other: &Subspace<S>) -> bool {
        other.basis.iter().all(|v| self.contains(v))
    }

    /// True when `m` maps the subspace into itself.
    pub fn is_invariant_under(&self, m: &Matrix<S>) -> bool {
        self.basis.iter().all(|v| self.contains(&m.mul_vec(v)))
    }

    pub fn sum(&self, other: &Subspace<S>) -> Self {
        let mut v = self.basis.clone();
        v.extend(other.basis.iter().cloned());
        Self::from_spanning(self.ambient, v)
    }

    pub fn intersection(&self, other: &Subspace<S>) -> Self {
        if self.dim() == 0 || other.dim() == 0 {
            return Self::zero(self.ambient);
        }
        // Solve sum a_i u_i - sum b_j w_j = 0.
        let mut cols = self.basis.clone();
        cols.extend(other.basis.iter().map(|w| w.iter().map(|x| -x.clone()).collect()));
        let m = Matrix::from_columns(&cols);
        let vecs = m
            .nullspace()
            .into_iter()
            .map(|coef| {
                let mut v = vec![S::zero(); self.ambient];
                for (a, u) in coef.iter().zip(&self.basis) {
                    for (vi, ui) in v.iter_mut().zip(u) {
                        *vi = vi.clone() + a.clone() * ui.clone();
                    }
                }
                v
            })
            .collect();
        Self::from_spanning(self.ambient, vecs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{qi, Q};

    fn h3() -> LieAlgebra<Q> {
        LieAlgebra::from_brackets(&["X", "Y", "Z"], &[(0, 1, vec![qi(0), qi(0), qi(1)])]).unwrap()
    }

    fn affine2() -> LieAlgebra<Q> {
        LieAlgebra::from_brackets(&["e1", "e2"], &[(0, 1, vec![qi(0), qi(1)])]).unwrap()
    }

    #[test]
    fn bracket_dimension_mismatch() {
        let g = h3();
        assert!(matches!(
            g.bracket(&[qi(1)], &[qi(0), qi(1), qi(0)]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn conflicting_brackets_rejected() {
        let r = LieAlgebra::from_brackets(
            &["a", "b"],
            &[(0, 1, vec![qi(1), qi(0)]), (0, 1, vec![qi(0), qi(1)])],
        );
        assert!(r.is_err());
    }

    #[test]
    fn redundant_consistent_brackets_accepted() {
        let r = LieAlgebra::from_brackets(
            &["a", "b"],
            &[(0, 1, vec![qi(1), qi(0)]), (0, 1, vec![qi(1), qi(0)])],
        );
        assert!(r.is_ok());
    }

    #[test]
    fn non_jacobi_witness() {
        // [e1,e2] = e3, [e1,e3] = e1 violates Jacobi on (e1,e2,e3).
        let g = LieAlgebra::from_brackets(
            &["e1", "e2", "e3"],
            &[(0, 1, vec![qi(0), qi(0), qi(1)]), (0, 2, vec![qi(1), qi(0), qi(0)])],
        )
        .unwrap();
        let rep = g.check_jacobi();
        assert!(!rep.ok);
        assert_eq!(rep.witness, Some((0, 1, 2)));
    }

    #[test]
    fn cyclic_three_term_bracket_is_a_lie_algebra() {
        // [e1,e2]=e3, [e2,e3]=e1, [e1,e3]=e2: brute-force cyclic sums vanish.
        let g = LieAlgebra::from_brackets(
            &["e1", "e2", "e3"],
            &[
                (0, 1, vec![qi(0), qi(0), qi(1)]),
                (1, 2, vec![qi(1), qi(0), qi(0)]),
                (0, 2, vec![qi(0), qi(1), qi(0)]),
            ],
        )
        .unwrap();
        assert!(g.check_jacobi().ok);
    }

    #[test]
    fn affine_line_not_unimodular() {
        let g = affine2();
        assert!(!g.is_unimodular());
        assert_eq!(g.ad_basis(0).trace(), qi(1));
    }

    #[test]
    fn heisenberg_ad_rank_one() {
        let g = h3();
        let ad = g.ad(&g.basis_vector(0)).unwrap();
        assert_eq!(ad.rank(), 1);
        assert_eq!(ad.mul_vec(&g.basis_vector(1)), g.basis_vector(2));
    }

    #[test]
    fn heisenberg_derivations_dimension() {
        let g = h3();
        let ders = g.derivations();
        assert_eq!(ders.len(), 6);
        assert!(ders.iter().all(|d| g.is_derivation(d)));
    }

    #[test]
    fn abelian_derivations_are_everything() {
        let g = LieAlgebra::<Q>::abelian(2);
        assert_eq!(g.derivations().len(), 4);
    }

    #[test]
    fn subspace_intersection() {
        let a = Subspace::from_spanning(3, vec![vec![qi(1), qi(0), qi(0)], vec![qi(0), qi(1), qi(0)]]);
        let b = Subspace::from_spanning(3, vec![vec![qi(0), qi(1), qi(0)], vec![qi(0), qi(0), qi(1)]]);
        let i = a.intersection(&b);
        assert_eq!(i.basis(), &[vec![qi(0), qi(1), qi(0)]]);
        assert_eq!(a.sum(&b).dim(), 3);
    }
}
