//! Complex structures, metrics, forms and connections on a Lie algebra, and
//! the Kähler / lcK / Vaisman / Sasaki checks built from them.

mod classify;
mod connection;
mod sasaki;

pub use classify::{classify_hermitian, signature, HermitianClass, HermitianReport, Signature};
pub use connection::{covariant_derivative_form, levi_civita, Connection};
pub use sasaki::{sasaki_check, vaisman_from_sasaki, SasakiData, SasakiReport, VaismanFromSasaki};

use serde::Serialize;

use crate::algebra::{Endomorphism, LieAlgebra};
use crate::error::{Error, Result};
use crate::forms::{ce_differential, increasing_tuples, KForm};
use crate::matrix::Matrix;
use crate::scalar::Scalar;

/// An endomorphism with `J² = −I`.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexStructure<S>(Matrix<S>);

impl<S: Scalar> ComplexStructure<S> {
    pub fn new(j: Matrix<S>) -> Result<Self> {
        if !j.is_square() || j.rows() % 2 != 0 {
            return Err(Error::InvalidComplexStructure("J must be square of even size".into()));
        }
        let sq = j.mul(&j).add(&Matrix::identity(j.rows()));
        if !sq.is_negligible() {
            return Err(Error::InvalidComplexStructure(format!(
                "J^2 + I has max entry {:.3e}",
                sq.max_abs()
            )));
        }
        Ok(Self(j))
    }

    pub fn matrix(&self) -> &Matrix<S> {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.rows()
    }

    pub fn apply(&self, v: &[S]) -> Vec<S> {
        self.0.mul_vec(v)
    }

    pub fn to_f64(&self) -> ComplexStructure<f64> {
        ComplexStructure(self.0.to_f64())
    }
}

/// A symmetric bilinear form, possibly indefinite.
#[derive(Clone, Debug, PartialEq)]
pub struct BilinearForm<S>(Matrix<S>);

impl<S: Scalar> BilinearForm<S> {
    pub fn new(m: Matrix<S>) -> Result<Self> {
        if !m.is_symmetric() {
            return Err(Error::InvalidMetric("matrix is not symmetric".into()));
        }
        Ok(Self(m))
    }

    pub fn identity(n: usize) -> Self {
        Self(Matrix::identity(n))
    }

    pub fn matrix(&self) -> &Matrix<S> {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.rows()
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.0.rank() == self.0.rows()
    }

    pub fn eval(&self, x: &[S], y: &[S]) -> S {
        x.iter().zip(self.0.mul_vec(y)).fold(S::zero(), |acc, (a, b)| acc + a.clone() * b)
    }

    /// Metric dual of a covector: the vector `v` with `⟨v, ·⟩ = α`.
    pub fn raise(&self, covector: &[S]) -> Result<Vec<S>> {
        self.0
            .solve(covector)
            .filter(|_| self.is_nondegenerate())
            .ok_or_else(|| Error::InvalidMetric("degenerate metric".into()))
    }

    /// `Jᵀ M J = M`.
    pub fn is_j_invariant(&self, j: &ComplexStructure<S>) -> bool {
        let jm = j.matrix();
        jm.transpose().mul(&self.0).mul(jm).sub(&self.0).is_negligible()
    }
}

/// `N(e_i, e_j)` for all basis pairs.
#[derive(Clone, Debug, PartialEq)]
pub struct NijenhuisTensor<S> {
    values: Vec<Vec<Vec<S>>>,
}

impl<S: Scalar> NijenhuisTensor<S> {
    pub fn get(&self, i: usize, j: usize) -> &[S] {
        &self.values[i][j]
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().flatten().flatten().all(Scalar::is_negligible)
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().flatten().flatten().map(Scalar::magnitude).fold(0.0, f64::max)
    }

    /// First basis pair with a nonzero value.
    pub fn witness(&self) -> Option<(usize, usize)> {
        let n = self.values.len();
        (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .find(|&(i, j)| self.values[i][j].iter().any(|x| !x.is_negligible()))
    }
}

/// `N(X,Y) = [JX,JY] − [X,Y] − J[X,JY] − J[JX,Y]` on all basis pairs.
pub fn nijenhuis<S: Scalar>(g: &LieAlgebra<S>, j: &ComplexStructure<S>) -> Result<NijenhuisTensor<S>> {
    let n = g.dim();
    if j.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, got: j.dim() });
    }
    let jm = j.matrix();
    let je: Vec<Vec<S>> = (0..n).map(|i| jm.column(i)).collect();
    let mut values = vec![vec![vec![S::zero(); n]; n]; n];
    for a in 0..n {
        for b in a + 1..n {
            let ea = g.basis_vector(a);
            let eb = g.basis_vector(b);
            let t1 = g.bracket_unchecked(&je[a], &je[b]);
            let t2 = g.bracket_basis(a, b);
            let t3 = jm.mul_vec(&g.bracket_unchecked(&ea, &je[b]));
            let t4 = jm.mul_vec(&g.bracket_unchecked(&je[a], &eb));
            let v: Vec<S> = (0..n)
                .map(|k| t1[k].clone() - t2[k].clone() - t3[k].clone() - t4[k].clone())
                .collect();
            values[b][a] = v.iter().map(|x| -x.clone()).collect();
            values[a][b] = v;
        }
    }
    Ok(NijenhuisTensor { values })
}

pub fn is_integrable<S: Scalar>(g: &LieAlgebra<S>, j: &ComplexStructure<S>) -> Result<bool> {
    Ok(nijenhuis(g, j)?.is_zero())
}

/// `ω(X, Y) = ⟨X, JY⟩`; requires `⟨JX, Y⟩ = −⟨X, JY⟩`.
pub fn fundamental_form<S: Scalar>(metric: &BilinearForm<S>, j: &ComplexStructure<S>) -> Result<KForm<S>> {
    let m = metric.matrix();
    let jm = j.matrix();
    if m.rows() != jm.rows() {
        return Err(Error::DimensionMismatch { expected: m.rows(), got: jm.rows() });
    }
    let skew = jm.transpose().mul(m).add(&m.mul(jm));
    if !skew.is_negligible() {
        return Err(Error::InvalidMetric("J is not skew with respect to the metric".into()));
    }
    KForm::from_matrix(&m.mul(jm))
}

/// Solutions of `dω = ω ∧ θ`, `dθ = 0`: an affine space `theta + span(kernel)`.
#[derive(Clone, Debug, PartialEq)]
pub struct LeeForm<S> {
    pub theta: KForm<S>,
    pub kernel: Vec<KForm<S>>,
}

impl<S: Scalar> LeeForm<S> {
    pub fn is_unique(&self) -> bool {
        self.kernel.is_empty()
    }
}

/// Solves for the Lee form of a nondegenerate 2-form. Returns `None` when `ω`
/// is degenerate or no closed `θ` satisfies `dω = ω ∧ θ`.
pub fn lee_form<S: Scalar>(g: &LieAlgebra<S>, omega: &KForm<S>) -> Result<Option<LeeForm<S>>> {
    let n = g.dim();
    if omega.degree() != 2 || omega.dim() != n {
        return Err(Error::InvalidParameter("lee_form needs a 2-form on the algebra".into()));
    }
    if omega.to_matrix().rank() != n {
        return Ok(None);
    }
    let domega = ce_differential(g, omega)?;
    let basis: Vec<KForm<S>> = (0..n).map(|l| KForm::dual(n, l)).collect();
    let wedges: Vec<KForm<S>> = basis.iter().map(|e| omega.wedge(e)).collect();
    let dbasis: Vec<KForm<S>> = basis.iter().map(|e| ce_differential(g, e)).collect::<Result<_>>()?;

    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for idx in increasing_tuples(n, 3) {
        rows.push(wedges.iter().map(|w| w.component(&idx)).collect::<Vec<_>>());
        rhs.push(domega.component(&idx));
    }
    for idx in increasing_tuples(n, 2) {
        rows.push(dbasis.iter().map(|d| d.component(&idx)).collect::<Vec<_>>());
        rhs.push(S::zero());
    }
    let a = Matrix::from_rows(rows);
    let Some(sol) = a.solve(&rhs) else {
        return Ok(None);
    };
    let theta = KForm::from_covector(&sol);
    // Exact re-verification of both identities.
    let ok = ce_differential(g, omega)?.sub(&omega.wedge(&theta)).is_zero()
        && ce_differential(g, &theta)?.is_zero();
    if !ok {
        return Ok(None);
    }
    let kernel = a.nullspace().iter().map(|v| KForm::from_covector(v)).collect();
    Ok(Some(LeeForm { theta, kernel }))
}

/// Basis of `Der(g) ∩ so(metric)`, further intersected with the centralizer of
/// `J` when a complex structure is supplied (`Der_u(g)`).
pub fn skew_hermitian_derivations<S: Scalar>(
    g: &LieAlgebra<S>,
    metric: &BilinearForm<S>,
    j: Option<&ComplexStructure<S>>,
) -> Result<Vec<Endomorphism<S>>> {
    let n = g.dim();
    if metric.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, got: metric.dim() });
    }
    if !metric.is_nondegenerate() {
        return Err(Error::InvalidMetric("degenerate metric".into()));
    }
    let var = |a: usize, b: usize| a * n + b;
    let m = metric.matrix();
    let mut rows = g.derivation_system();
    // (DᵀM + MD)_{ab} = Σ_c D_{ca} M_{cb} + M_{ac} D_{cb}
    for a in 0..n {
        for b in a..n {
            let mut row = vec![S::zero(); n * n];
            for c in 0..n {
                row[var(c, a)] = row[var(c, a)].clone() + m[(c, b)].clone();
                row[var(c, b)] = row[var(c, b)].clone() + m[(a, c)].clone();
            }
            rows.push(row);
        }
    }
    if let Some(j) = j {
        if j.dim() != n {
            return Err(Error::DimensionMismatch { expected: n, got: j.dim() });
        }
        let jm = j.matrix();
        // (DJ − JD)_{ab} = Σ_c D_{ac} J_{cb} − J_{ac} D_{cb}
        for a in 0..n {
            for b in 0..n {
                let mut row = vec![S::zero(); n * n];
                for c in 0..n {
                    row[var(a, c)] = row[var(a, c)].clone() + jm[(c, b)].clone();
                    row[var(c, b)] = row[var(c, b)].clone() - jm[(a, c)].clone();
                }
                rows.push(row);
            }
        }
    }
    Ok(g.solve_endomorphism_system(rows))
}

/// Summary of a Nijenhuis evaluation for reports.
#[derive(Clone, Debug, Serialize)]
pub struct IntegrabilitySummary {
    pub integrable: bool,
    pub max_entry: f64,
    pub witness: Option<(usize, usize)>,
}

impl<S: Scalar> From<&NijenhuisTensor<S>> for IntegrabilitySummary {
    fn from(n: &NijenhuisTensor<S>) -> Self {
        Self { integrable: n.is_zero(), max_entry: n.max_abs(), witness: n.witness() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{self, AlgebraId, Branch, DeltaParam, EpsilonVector, LckCoefficients};
    use crate::scalar::{qi, Q};

    fn rot2() -> ComplexStructure<Q> {
        ComplexStructure::new(Matrix::from_rows(vec![vec![qi(0), qi(-1)], vec![qi(1), qi(0)]])).unwrap()
    }

    #[test]
    fn rejects_non_complex_structure() {
        assert!(ComplexStructure::new(Matrix::<Q>::identity(2)).is_err());
    }

    #[test]
    fn plane_rotation_fundamental_form() {
        // J e_1 = e_2 gives ω(e_1, e_2) = ⟨e_1, J e_2⟩ = −1; the opposite rotation gives +1.
        let w = fundamental_form(&BilinearForm::identity(2), &rot2()).unwrap();
        assert_eq!(w.component(&[0, 1]), qi(-1));
        let opposite = ComplexStructure::new(rot2().matrix().neg()).unwrap();
        let w = fundamental_form(&BilinearForm::identity(2), &opposite).unwrap();
        assert_eq!(w, KForm::dual(2, 0).wedge(&KForm::dual(2, 1)));
    }

    #[test]
    fn non_skew_j_rejected() {
        let m = BilinearForm::new(Matrix::from_rows(vec![vec![qi(2), qi(0)], vec![qi(0), qi(1)]])).unwrap();
        assert!(fundamental_form(&m, &rot2()).is_err());
    }

    #[test]
    fn swapping_j_on_gl2r_not_integrable() {
        // J: T -> X, X -> -T, Y -> Z, Z -> -Y.
        let g = catalog::make_gl2r();
        let mut j = Matrix::<Q>::zeros(4, 4);
        j[(1, 0)] = qi(1);
        j[(0, 1)] = qi(-1);
        j[(3, 2)] = qi(1);
        j[(2, 3)] = qi(-1);
        let j = ComplexStructure::new(j).unwrap();
        let n = nijenhuis(&g, &j).unwrap();
        assert!(!n.is_zero());
        assert!(n.witness().is_some());
    }

    #[test]
    fn gh6_family_integrable() {
        let id = AlgebraId::Gh(2);
        let g = id.build().unwrap();
        let eps = EpsilonVector::new(vec![1, -1]).unwrap();
        let j = catalog::complex_structure(&id, &DeltaParam::new(qi(1), qi(0)).unwrap(), Some(&eps), Branch::V)
            .unwrap();
        assert!(is_integrable(&g, &j).unwrap());
    }

    #[test]
    fn gl2r_lee_form_is_t() {
        let id = AlgebraId::Gl2r;
        let g = id.build().unwrap();
        let coeffs = LckCoefficients::Reductive { a: qi(1), b: qi(-2), c: qi(3) };
        let omega = catalog::lck_form(&g, id.layout().unwrap(), &coeffs).unwrap();
        let lee = lee_form(&g, &omega).unwrap().unwrap();
        assert_eq!(lee.theta, KForm::dual(4, 0));
        assert!(lee.is_unique());
    }

    #[test]
    fn closed_form_has_zero_lee_form() {
        // On the abelian R^4 the standard symplectic form is closed.
        let g = LieAlgebra::<Q>::abelian(4);
        let omega = KForm::dual(4, 0).wedge(&KForm::dual(4, 1)).add(&KForm::dual(4, 2).wedge(&KForm::dual(4, 3)));
        let lee = lee_form(&g, &omega).unwrap().unwrap();
        assert!(lee.theta.is_zero());
    }

    #[test]
    fn degenerate_omega_has_no_lee_form() {
        let g = LieAlgebra::<Q>::abelian(4);
        let omega = KForm::dual(4, 0).wedge(&KForm::dual(4, 1));
        assert!(lee_form(&g, &omega).unwrap().is_none());
    }

    #[test]
    fn abelian_plane_skew_hermitian_derivations() {
        let g = LieAlgebra::<Q>::abelian(2);
        let d = skew_hermitian_derivations(&g, &BilinearForm::identity(2), Some(&rot2())).unwrap();
        assert_eq!(d.len(), 1);
    }
}
