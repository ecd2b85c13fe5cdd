use crate::algebra::LieAlgebra;
use crate::error::{Error, Result};
use crate::forms::KForm;
use crate::matrix::Matrix;
use crate::scalar::Scalar;

use super::BilinearForm;

/// A left-invariant connection given by `∇_{e_i} e_j = Σ_k Γ^k_{ij} e_k`.
#[derive(Clone, Debug, PartialEq)]
pub struct Connection<S> {
    dim: usize,
    gamma: Vec<Vec<Vec<S>>>,
}

impl<S: Scalar> Connection<S> {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn christoffel(&self, i: usize, j: usize, k: usize) -> &S {
        &self.gamma[i][j][k]
    }

    pub fn nabla_basis(&self, i: usize, j: usize) -> &[S] {
        &self.gamma[i][j]
    }

    pub fn nabla(&self, x: &[S], y: &[S]) -> Vec<S> {
        let mut out = vec![S::zero(); self.dim];
        for (i, xi) in x.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
            for (j, yj) in y.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
                let c = xi.clone() * yj.clone();
                for (o, g) in out.iter_mut().zip(&self.gamma[i][j]) {
                    *o = o.clone() + c.clone() * g.clone();
                }
            }
        }
        out
    }

    /// `∇_X Y − ∇_Y X − [X,Y]` vanishes on all basis pairs.
    pub fn is_torsion_free(&self, g: &LieAlgebra<S>) -> bool {
        (0..self.dim).all(|i| {
            (0..self.dim).all(|j| {
                let br = g.bracket_basis(i, j);
                (0..self.dim).all(|k| {
                    (self.gamma[i][j][k].clone() - self.gamma[j][i][k].clone() - br[k].clone()).is_negligible()
                })
            })
        })
    }

    /// `⟨∇_X Y, Z⟩ + ⟨Y, ∇_X Z⟩ = 0` on all basis triples.
    pub fn is_metric(&self, metric: &BilinearForm<S>) -> bool {
        let m = metric.matrix();
        (0..self.dim).all(|i| {
            let a = Matrix::from_fn(self.dim, self.dim, |k, j| self.gamma[i][j][k].clone());
            m.mul(&a).add(&a.transpose().mul(m)).is_negligible()
        })
    }
}

/// Levi-Civita connection of a left-invariant metric via the Koszul formula
/// `2⟨∇_X Y, Z⟩ = ⟨[X,Y],Z⟩ − ⟨[Y,Z],X⟩ + ⟨[Z,X],Y⟩`.
pub fn levi_civita<S: Scalar>(g: &LieAlgebra<S>, metric: &BilinearForm<S>) -> Result<Connection<S>> {
    let n = g.dim();
    if metric.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, got: metric.dim() });
    }
    let m = metric.matrix();
    let inv = m.inverse().ok_or_else(|| Error::InvalidMetric("degenerate metric".into()))?;
    // low[a][b][c] = ⟨[e_a, e_b], e_c⟩
    let low: Vec<Vec<Vec<S>>> = (0..n)
        .map(|a| {
            (0..n)
                .map(|b| {
                    let br = g.bracket_basis(a, b);
                    (0..n)
                        .map(|c| br.iter().enumerate().fold(S::zero(), |acc, (k, x)| acc + x.clone() * m[(k, c)].clone()))
                        .collect()
                })
                .collect()
        })
        .collect();
    let half = S::from_ratio(1, 2);
    let mut gamma = vec![vec![vec![S::zero(); n]; n]; n];
    for i in 0..n {
        for j in 0..n {
            let koszul: Vec<S> = (0..n)
                .map(|c| {
                    (low[i][j][c].clone() - low[j][c][i].clone() + low[c][i][j].clone()) * half.clone()
                })
                .collect();
            gamma[i][j] = inv.mul_vec(&koszul);
        }
    }
    Ok(Connection { dim: n, gamma })
}

/// Matrix of `(∇_{e_i} α)(e_j) = −α(∇_{e_i} e_j)` for a 1-form `α`.
pub fn covariant_derivative_form<S: Scalar>(conn: &Connection<S>, alpha: &KForm<S>) -> Result<Matrix<S>> {
    let n = conn.dim();
    if alpha.degree() != 1 || alpha.dim() != n {
        return Err(Error::InvalidParameter("expected a 1-form of matching dimension".into()));
    }
    let a = alpha.to_covector();
    Ok(Matrix::from_fn(n, n, |i, j| {
        -conn.gamma[i][j].iter().zip(&a).fold(S::zero(), |acc, (g, x)| acc + g.clone() * x.clone())
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::scalar::{qi, Q};

    #[test]
    fn koszul_connection_is_torsion_free_and_metric() {
        let g = catalog::make_gl2r();
        let m = BilinearForm::new(Matrix::from_rows(vec![
            vec![qi(2), qi(1), qi(0), qi(0)],
            vec![qi(1), qi(3), qi(0), qi(1)],
            vec![qi(0), qi(0), qi(1), qi(0)],
            vec![qi(0), qi(1), qi(0), qi(5)],
        ]))
        .unwrap();
        let c = levi_civita(&g, &m).unwrap();
        assert!(c.is_torsion_free(&g));
        assert!(c.is_metric(&m));
    }

    #[test]
    fn abelian_connection_vanishes() {
        let g = LieAlgebra::<Q>::abelian(3);
        let c = levi_civita(&g, &BilinearForm::identity(3)).unwrap();
        let d = covariant_derivative_form(&c, &KForm::dual(3, 0)).unwrap();
        assert!(d.is_negligible());
    }

    #[test]
    fn heisenberg_center_dual_not_parallel() {
        let g = catalog::make_heisenberg(1).unwrap();
        let c = levi_civita(&g, &BilinearForm::identity(3)).unwrap();
        let d = covariant_derivative_form(&c, &KForm::dual(3, 2)).unwrap();
        assert!(!d.is_negligible());
    }
}
