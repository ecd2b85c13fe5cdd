//! Alternating forms on a Lie algebra and the Chevalley–Eilenberg differential.
//!
//! A `k`-form is stored by its values `α(e_{i_1}, …, e_{i_k})` on strictly
//! increasing index tuples. Wedge products use the determinant convention
//! `(α ∧ β)(X, Y) = α(X)β(Y) − α(Y)β(X)` for 1-forms.

use std::collections::BTreeMap;

use crate::algebra::LieAlgebra;
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub struct KForm<S> {
    degree: usize,
    dim: usize,
    terms: BTreeMap<Vec<usize>, S>,
}

/// Sorts `idx` in place and returns the permutation sign, or `None` when an
/// index repeats.
fn sort_with_sign(idx: &mut [usize]) -> Option<i8> {
    let mut sign = 1i8;
    for i in 1..idx.len() {
        let mut j = i;
        while j > 0 && idx[j - 1] > idx[j] {
            idx.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    if idx.windows(2).any(|w| w[0] == w[1]) {
        None
    } else {
        Some(sign)
    }
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

impl<S: Scalar> KForm<S> {
    pub fn zero(degree: usize, dim: usize) -> Self {
        Self { degree, dim, terms: BTreeMap::new() }
    }

    /// The constant function `value` as a 0-form.
    pub fn constant(dim: usize, value: S) -> Self {
        let mut f = Self::zero(0, dim);
        f.set(&[], value);
        f
    }

    /// The dual basis 1-form `e^i`.
    pub fn dual(dim: usize, i: usize) -> Self {
        let mut f = Self::zero(1, dim);
        f.set(&[i], S::one());
        f
    }

    pub fn from_covector(coeffs: &[S]) -> Self {
        let mut f = Self::zero(1, coeffs.len());
        for (i, c) in coeffs.iter().enumerate() {
            f.set(&[i], c.clone());
        }
        f
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Nonzero components on increasing tuples.
    pub fn terms(&self) -> impl Iterator<Item = (&Vec<usize>, &S)> {
        self.terms.iter()
    }

    /// Value on basis vectors with arbitrary (possibly unsorted) indices.
    pub fn component(&self, idx: &[usize]) -> S {
        let mut sorted = idx.to_vec();
        match sort_with_sign(&mut sorted) {
            None => S::zero(),
            Some(sign) => match self.terms.get(&sorted) {
                None => S::zero(),
                Some(v) if sign > 0 => v.clone(),
                Some(v) => -v.clone(),
            },
        }
    }

    /// Sets the value on basis vectors `idx`; unsorted input is sorted with
    /// the corresponding sign.
    pub fn set(&mut self, idx: &[usize], value: S) {
        assert_eq!(idx.len(), self.degree, "index tuple length must equal degree");
        let mut sorted = idx.to_vec();
        let Some(sign) = sort_with_sign(&mut sorted) else {
            assert!(value.is_negligible(), "repeated index with nonzero value");
            return;
        };
        let v = if sign > 0 { value } else { -value };
        if v.is_zero() {
            self.terms.remove(&sorted);
        } else {
            self.terms.insert(sorted, v);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.values().all(Scalar::is_negligible)
    }

    pub fn max_abs(&self) -> f64 {
        self.terms.values().map(Scalar::magnitude).fold(0.0, f64::max)
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.degree, self.dim), (other.degree, other.dim));
        let mut out = self.clone();
        for (k, v) in &other.terms {
            let cur = out.terms.get(k).cloned().unwrap_or_else(S::zero);
            let s = cur + v.clone();
            if s.is_zero() {
                out.terms.remove(k);
            } else {
                out.terms.insert(k.clone(), s);
            }
        }
        out
    }

    pub fn scale(&self, s: &S) -> Self {
        let mut out = Self::zero(self.degree, self.dim);
        for (k, v) in &self.terms {
            let x = v.clone() * s.clone();
            if !x.is_zero() {
                out.terms.insert(k.clone(), x);
            }
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-S::one()))
    }

    /// Evaluates the form on `k` coordinate vectors.
    pub fn eval(&self, vectors: &[Vec<S>]) -> S {
        assert_eq!(vectors.len(), self.degree);
        let mut acc = S::zero();
        for (idx, coeff) in &self.terms {
            // Determinant of the k x k minor [v_a[idx_b]].
            let m = Matrix::from_fn(self.degree, self.degree, |a, b| vectors[a][idx[b]].clone());
            let d = if self.degree == 0 { S::one() } else { m.det() };
            acc = acc + coeff.clone() * d;
        }
        acc
    }

    /// `α(v, e_{rest})` with the vector in the first slot.
    fn eval_first(&self, v: &[S], rest: &[usize]) -> S {
        let mut acc = S::zero();
        let mut idx = Vec::with_capacity(rest.len() + 1);
        for (l, vl) in v.iter().enumerate() {
            if vl.is_zero() {
                continue;
            }
            idx.clear();
            idx.push(l);
            idx.extend_from_slice(rest);
            let c = self.component(&idx);
            if !c.is_zero() {
                acc = acc + vl.clone() * c;
            }
        }
        acc
    }

    pub fn wedge(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let (k, l) = (self.degree, other.degree);
        let mut out = Self::zero(k + l, self.dim);
        for (a, va) in &self.terms {
            for (b, vb) in &other.terms {
                let mut idx: Vec<usize> = a.iter().chain(b.iter()).copied().collect();
                if let Some(sign) = sort_with_sign(&mut idx) {
                    let prod = va.clone() * vb.clone();
                    let prod = if sign > 0 { prod } else { -prod };
                    let cur = out.terms.get(&idx).cloned().unwrap_or_else(S::zero);
                    let s = cur + prod;
                    if s.is_zero() {
                        out.terms.remove(&idx);
                    } else {
                        out.terms.insert(idx, s);
                    }
                }
            }
        }
        out
    }

    /// Interior product `i(X) α`.
    pub fn interior(&self, x: &[S]) -> Self {
        assert!(self.degree >= 1);
        let mut out = Self::zero(self.degree - 1, self.dim);
        for rest in combinations(self.dim, self.degree - 1) {
            let v = self.eval_first(x, &rest);
            if !v.is_zero() {
                out.terms.insert(rest, v);
            }
        }
        out
    }

    /// Matrix `M_{ij} = α(e_i, e_j)` of a 2-form.
    pub fn to_matrix(&self) -> Matrix<S> {
        assert_eq!(self.degree, 2);
        Matrix::from_fn(self.dim, self.dim, |i, j| self.component(&[i, j]))
    }

    /// 2-form from an antisymmetric matrix.
    pub fn from_matrix(m: &Matrix<S>) -> Result<Self> {
        let n = m.rows();
        let mut f = Self::zero(2, n);
        for i in 0..n {
            for j in i..n {
                if !(m[(i, j)].clone() + m[(j, i)].clone()).is_negligible() {
                    return Err(Error::InvalidParameter("2-form matrix is not antisymmetric".into()));
                }
                if i < j {
                    f.set(&[i, j], m[(i, j)].clone());
                }
            }
        }
        Ok(f)
    }

    /// Covector `(α(e_0), …, α(e_{n-1}))` of a 1-form.
    pub fn to_covector(&self) -> Vec<S> {
        assert_eq!(self.degree, 1);
        (0..self.dim).map(|i| self.component(&[i])).collect()
    }

    /// Re-indexes the form into a larger algebra, sending basis index `i` to
    /// `map[i]`.
    pub fn reindex(&self, new_dim: usize, map: &[usize]) -> Self {
        let mut out = Self::zero(self.degree, new_dim);
        for (idx, v) in &self.terms {
            let new_idx: Vec<usize> = idx.iter().map(|&i| map[i]).collect();
            out.set(&new_idx, v.clone());
        }
        out
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> KForm<T> {
        let mut out = KForm::zero(self.degree, self.dim);
        for (k, v) in &self.terms {
            let x = f(v);
            if !x.is_zero() {
                out.terms.insert(k.clone(), x);
            }
        }
        out
    }
}

/// Chevalley–Eilenberg differential of a left-invariant form:
/// `(dα)(X_0, …, X_k) = Σ_{i<j} (−1)^{i+j} α([X_i, X_j], X_0, …, X̂_i, …, X̂_j, …, X_k)`.
pub fn ce_differential<S: Scalar>(g: &LieAlgebra<S>, alpha: &KForm<S>) -> Result<KForm<S>> {
    let n = g.dim();
    if alpha.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, got: alpha.dim() });
    }
    let k = alpha.degree();
    if k >= n {
        return Ok(KForm::zero(k + 1, n));
    }
    let mut out = KForm::zero(k + 1, n);
    if k == 0 {
        return Ok(out);
    }
    let mut rest = Vec::with_capacity(k);
    for idx in combinations(n, k + 1) {
        let mut acc = S::zero();
        for a in 0..=k {
            for b in a + 1..=k {
                let br = g.bracket_basis(idx[a], idx[b]);
                if br.iter().all(|x| x.is_zero()) {
                    continue;
                }
                rest.clear();
                rest.extend(idx.iter().enumerate().filter(|(p, _)| *p != a && *p != b).map(|(_, &i)| i));
                let v = alpha.eval_first(&br, &rest);
                if v.is_zero() {
                    continue;
                }
                acc = if (a + b) % 2 == 0 { acc + v } else { acc - v };
            }
        }
        if !acc.is_zero() {
            out.terms.insert(idx, acc);
        }
    }
    Ok(out)
}

/// All strictly increasing `k`-tuples from `0..n`.
pub fn increasing_tuples(n: usize, k: usize) -> Vec<Vec<usize>> {
    combinations(n, k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{qi, Q};

    #[test]
    fn wedge_convention() {
        let x = KForm::<Q>::dual(2, 0);
        let y = KForm::<Q>::dual(2, 1);
        let w = x.wedge(&y);
        assert_eq!(w.component(&[0, 1]), qi(1));
        assert_eq!(w.component(&[1, 0]), qi(-1));
        assert!(x.wedge(&x).is_zero());
    }

    #[test]
    fn eval_matches_components() {
        let w = KForm::<Q>::dual(3, 0).wedge(&KForm::dual(3, 2));
        let e = |i: usize| (0..3).map(|j| if i == j { qi(1) } else { qi(0) }).collect::<Vec<_>>();
        assert_eq!(w.eval(&[e(2), e(0)]), qi(-1));
    }

    #[test]
    fn differential_of_constant_vanishes() {
        let g = LieAlgebra::<Q>::from_brackets(&["X", "Y", "Z"], &[(0, 1, vec![qi(0), qi(0), qi(1)])]).unwrap();
        let d = ce_differential(&g, &KForm::constant(3, qi(5))).unwrap();
        assert!(d.is_zero());
        assert_eq!(d.degree(), 1);
    }

    #[test]
    fn heisenberg_dz() {
        let g = LieAlgebra::<Q>::from_brackets(&["X", "Y", "Z"], &[(0, 1, vec![qi(0), qi(0), qi(1)])]).unwrap();
        let dz = ce_differential(&g, &KForm::dual(3, 2)).unwrap();
        // dz(X, Y) = -z([X, Y]) = -1
        assert_eq!(dz.component(&[0, 1]), qi(-1));
    }

    #[test]
    fn interior_of_wedge() {
        let w = KForm::<Q>::dual(2, 0).wedge(&KForm::dual(2, 1));
        let i = w.interior(&[qi(1), qi(0)]);
        assert_eq!(i.to_covector(), vec![qi(0), qi(1)]);
    }
}
