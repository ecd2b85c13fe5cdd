//! Modifications `[X,Y]_φ = [X,Y] + φ(X)Y − φ(Y)X` of metric Lie algebras.

mod decompose;

pub use decompose::{decompose_gh_modification, GhDecomposition};

use serde::Serialize;

use crate::algebra::{Endomorphism, LieAlgebra, Subspace};
use crate::catalog::Layout;
use crate::error::{Error, Result};
use crate::forms::ce_differential;
use crate::hermitian::{
    classify_hermitian, fundamental_form, lee_form, nijenhuis, BilinearForm, ComplexStructure, HermitianClass,
};
use crate::matrix::Matrix;
use crate::scalar::{Scalar, Q};

/// A linear map `g → End(g)` given by its values on basis vectors.
#[derive(Clone, Debug, PartialEq)]
pub struct Modification<S> {
    phi: Vec<Endomorphism<S>>,
}

impl<S: Scalar> Modification<S> {
    pub fn new(phi: Vec<Endomorphism<S>>) -> Result<Self> {
        let n = phi.len();
        if let Some(bad) = phi.iter().find(|m| m.rows() != n || m.cols() != n) {
            return Err(Error::DimensionMismatch { expected: n, got: bad.rows() });
        }
        Ok(Self { phi })
    }

    pub fn zero(n: usize) -> Self {
        Self { phi: vec![Matrix::zeros(n, n); n] }
    }

    pub fn dim(&self) -> usize {
        self.phi.len()
    }

    pub fn on_basis(&self, i: usize) -> &Endomorphism<S> {
        &self.phi[i]
    }

    pub fn values(&self) -> &[Endomorphism<S>] {
        &self.phi
    }

    /// `φ(x)` extended linearly.
    pub fn apply(&self, x: &[S]) -> Endomorphism<S> {
        let n = self.dim();
        let mut out = Matrix::zeros(n, n);
        for (xi, m) in x.iter().zip(&self.phi) {
            if !xi.is_zero() {
                out = out.add(&m.scale(xi));
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.phi.iter().all(Matrix::is_negligible)
    }

    /// `Im φ(g) = span{φ(e_i) e_j}`.
    pub fn image(&self) -> Subspace<S> {
        let n = self.dim();
        let vectors = self.phi.iter().flat_map(|m| (0..n).map(move |j| m.column(j))).collect();
        Subspace::from_spanning(n, vectors)
    }

    /// Common kernel of all `φ(e_i)`.
    pub fn common_kernel(&self) -> Subspace<S> {
        let n = self.dim();
        let rows: Vec<Vec<S>> = self.phi.iter().flat_map(|m| (0..n).map(move |r| m.row(r))).collect();
        Subspace::from_spanning(n, Matrix::from_rows(rows).nullspace())
    }

    /// Transport by a linear isomorphism `u`: `φ'(x) = u φ(u⁻¹ x) u⁻¹`.
    pub fn conjugate(&self, u: &Matrix<S>) -> Result<Self> {
        let inv = u.inverse().ok_or_else(|| Error::InvalidParameter("conjugating map is singular".into()))?;
        let n = self.dim();
        let phi = (0..n).map(|i| u.mul(&self.apply(&inv.column(i))).mul(&inv)).collect();
        Ok(Self { phi })
    }

    pub fn to_f64(&self) -> Modification<f64> {
        Modification { phi: self.phi.iter().map(Matrix::to_f64).collect() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ModificationReport {
    /// First basis vector whose image is not a derivation.
    pub not_derivation: Option<usize>,
    pub not_skew: Option<usize>,
    /// `None` for the Riemannian variant.
    pub not_j_linear: Option<usize>,
    /// First basis pair with `φ([e_i,e_j]) ≠ [φ(e_i), φ(e_j)]`.
    pub not_homomorphism: Option<(usize, usize)>,
    pub vanishes_on_derived: bool,
    pub vanishes_on_image: bool,
}

impl ModificationReport {
    pub fn is_valid(&self) -> bool {
        self.not_derivation.is_none()
            && self.not_skew.is_none()
            && self.not_j_linear.is_none()
            && self.not_homomorphism.is_none()
            && self.vanishes_on_derived
            && self.vanishes_on_image
    }

    /// The conditions that do not involve a metric or complex structure.
    pub fn is_structurally_valid(&self) -> bool {
        self.not_derivation.is_none() && self.not_homomorphism.is_none() && self.vanishes_on_derived && self.vanishes_on_image
    }
}

fn check_dims<S: Scalar>(g: &LieAlgebra<S>, phi: &Modification<S>) -> Result<()> {
    if phi.dim() != g.dim() {
        return Err(Error::DimensionMismatch { expected: g.dim(), got: phi.dim() });
    }
    Ok(())
}

fn structural_report<S: Scalar>(g: &LieAlgebra<S>, phi: &Modification<S>) -> ModificationReport {
    let n = g.dim();
    let not_derivation = (0..n).find(|&i| !g.is_derivation(phi.on_basis(i)));
    let mut not_homomorphism = None;
    'outer: for i in 0..n {
        for j in i + 1..n {
            let lhs = phi.apply(&g.bracket_basis(i, j));
            let rhs = phi.on_basis(i).commutator(phi.on_basis(j));
            if !lhs.sub(&rhs).is_negligible() {
                not_homomorphism = Some((i, j));
                break 'outer;
            }
        }
    }
    let vanishes = |s: &Subspace<S>| s.basis().iter().all(|v| phi.apply(v).is_negligible());
    ModificationReport {
        not_derivation,
        not_skew: None,
        not_j_linear: None,
        not_homomorphism,
        vanishes_on_derived: vanishes(&g.derived_algebra()),
        vanishes_on_image: vanishes(&phi.image()),
    }
}

/// Checks all defining conditions. Without `j` this is the Riemannian
/// variant (values in `Der(g) ∩ so(g)`).
pub fn validate_modification<S: Scalar>(
    g: &LieAlgebra<S>,
    metric: &BilinearForm<S>,
    j: Option<&ComplexStructure<S>>,
    phi: &Modification<S>,
) -> Result<ModificationReport> {
    check_dims(g, phi)?;
    if metric.dim() != g.dim() {
        return Err(Error::DimensionMismatch { expected: g.dim(), got: metric.dim() });
    }
    let mut report = structural_report(g, phi);
    let m = metric.matrix();
    report.not_skew = phi.values().iter().position(|d| !d.transpose().mul(m).add(&m.mul(d)).is_negligible());
    if let Some(j) = j {
        report.not_j_linear = phi.values().iter().position(|d| !d.commutator(j.matrix()).is_negligible());
    }
    Ok(report)
}

/// Structure constants of `g_φ`. Fails when `φ` violates a metric-free
/// defining condition.
pub fn modify<S: Scalar>(g: &LieAlgebra<S>, phi: &Modification<S>) -> Result<LieAlgebra<S>> {
    check_dims(g, phi)?;
    let report = structural_report(g, phi);
    if !report.is_structurally_valid() {
        return Err(Error::InvalidModification(format!("{report:?}")));
    }
    Ok(modify_unchecked(g, phi))
}

pub(crate) fn modify_unchecked<S: Scalar>(g: &LieAlgebra<S>, phi: &Modification<S>) -> LieAlgebra<S> {
    let n = g.dim();
    let mut c = g.structure_tensor();
    for i in 0..n {
        for j in 0..n {
            let a = phi.on_basis(i).column(j);
            let b = phi.on_basis(j).column(i);
            for k in 0..n {
                c[i][j][k] = c[i][j][k].clone() + a[k].clone() - b[k].clone();
            }
        }
    }
    LieAlgebra::from_structure_constants(g.basis_names().to_vec(), c).expect("modified bracket stays antisymmetric")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PreservationReport {
    pub jacobi: bool,
    pub nijenhuis_equal: bool,
    pub domega_equal: bool,
    pub unimodular_equal: bool,
}

impl PreservationReport {
    pub fn all(&self) -> bool {
        self.jacobi && self.nijenhuis_equal && self.domega_equal && self.unimodular_equal
    }
}

/// Compares `g` and `g_φ`: Jacobi for `g_φ`, `N^φ_J = N_J`, `d^φ ω = dω`,
/// and unimodularity. `φ` must satisfy the Riemannian conditions; commuting
/// with `J` is not required, so its failure shows up in the report.
pub fn check_preservation<S: Scalar>(
    g: &LieAlgebra<S>,
    metric: &BilinearForm<S>,
    j: &ComplexStructure<S>,
    phi: &Modification<S>,
) -> Result<PreservationReport> {
    let report = validate_modification(g, metric, None, phi)?;
    if !report.is_valid() {
        return Err(Error::InvalidModification(format!("{report:?}")));
    }
    let gp = modify_unchecked(g, phi);
    let omega = fundamental_form(metric, j)?;
    Ok(PreservationReport {
        jacobi: gp.check_jacobi().ok,
        nijenhuis_equal: nijenhuis(&gp, j)? == nijenhuis(g, j)?,
        domega_equal: ce_differential(&gp, &omega)?.sub(&ce_differential(g, &omega)?).is_zero(),
        unimodular_equal: gp.is_unimodular() == g.is_unimodular(),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VaismanModificationReport {
    /// `θ(Im φ(g)) = 0`.
    pub lee_kills_image: bool,
    /// Independent classification of `(g_φ, ⟨·,·⟩, J)`.
    pub modified_class: HermitianClass,
    pub agree: bool,
}

/// Tests the criterion `g_φ` Vaisman ⟺ `θ(Im φ(g)) = 0` against a direct
/// classification of the modified algebra.
pub fn vaisman_modification_check<S: Scalar>(
    g: &LieAlgebra<S>,
    metric: &BilinearForm<S>,
    j: &ComplexStructure<S>,
    phi: &Modification<S>,
) -> Result<VaismanModificationReport> {
    let base = classify_hermitian(g, j, metric)?;
    if base.class != (HermitianClass::Lck { vaisman: true }) {
        return Err(Error::InvalidParameter(format!("input structure is not Vaisman: {:?}", base.class)));
    }
    let report = validate_modification(g, metric, Some(j), phi)?;
    if !report.is_valid() {
        return Err(Error::InvalidModification(format!("{report:?}")));
    }
    let omega = fundamental_form(metric, j)?;
    let theta = lee_form(g, &omega)?
        .ok_or_else(|| Error::InvalidParameter("no Lee form".into()))?
        .theta
        .to_covector();
    let lee_kills_image = phi
        .image()
        .basis()
        .iter()
        .all(|v| v.iter().zip(&theta).fold(S::zero(), |a, (x, t)| a + x.clone() * t.clone()).is_negligible());
    let gp = modify_unchecked(g, phi);
    let modified_class = classify_hermitian(&gp, j, metric)?.class;
    let vaisman = modified_class == HermitianClass::Lck { vaisman: true };
    Ok(VaismanModificationReport { lee_kills_image, agree: vaisman == lee_kills_image, modified_class })
}

/// Checks that every skew-symmetric derivation of `g` is inner.
pub fn skew_derivations_are_inner<S: Scalar>(g: &LieAlgebra<S>, metric: &BilinearForm<S>) -> Result<bool> {
    let skew = crate::hermitian::skew_hermitian_derivations(g, metric, None)?;
    let n = g.dim();
    let inner = Subspace::from_spanning(n * n, (0..n).map(|i| g.ad_basis(i).entries().to_vec()).collect());
    Ok(skew.iter().all(|d| inner.contains(d.entries())))
}

/// For `g = R Z ⊕ s` reductive with one-dimensional center: recovers
/// `φ(Z) = ad_{X₀}` and returns `X + λZ ↦ X + λZ + λX₀`, verified to be an
/// isomorphism `g_φ → g`.
pub fn reductive_modification_iso<S: Scalar>(g: &LieAlgebra<S>, phi: &Modification<S>) -> Result<Endomorphism<S>> {
    check_dims(g, phi)?;
    let n = g.dim();
    let center = g.center();
    if center.dim() != 1 {
        return Err(Error::InvalidAlgebra("expected a one-dimensional center".into()));
    }
    let derived = g.derived_algebra();
    if derived.dim() != n - 1 {
        return Err(Error::InvalidAlgebra("expected [g,g] of codimension one".into()));
    }
    let report = structural_report(g, phi);
    if !report.is_structurally_valid() {
        return Err(Error::InvalidModification(format!("{report:?}")));
    }
    let z = center.basis()[0].clone();
    let target = phi.apply(&z);
    // Solve Σ_a x_a ad(s_a) = φ(Z) over a basis s_a of [g,g].
    let s = derived.basis();
    let cols: Vec<Vec<S>> = s.iter().map(|v| g.ad(v).map(|m| m.entries().to_vec())).collect::<Result<_>>()?;
    let coeffs = Matrix::from_columns(&cols)
        .solve(target.entries())
        .ok_or_else(|| Error::InvalidModification("phi(Z) is not an inner derivation".into()))?;
    let mut x0 = vec![S::zero(); n];
    for (c, v) in coeffs.iter().zip(s) {
        for k in 0..n {
            x0[k] = x0[k].clone() + c.clone() * v[k].clone();
        }
    }
    // f = identity on [g,g], Z ↦ Z + X₀; expressed in the standard basis.
    let mut adapted: Vec<Vec<S>> = s.to_vec();
    adapted.push(z.clone());
    let p = Matrix::from_columns(&adapted);
    let mut images = s.to_vec();
    images.push(z.iter().zip(&x0).map(|(a, b)| a.clone() + b.clone()).collect());
    let q = Matrix::from_columns(&images);
    let pinv = p.inverse().ok_or_else(|| Error::InvalidAlgebra("g is not [g,g] ⊕ center".into()))?;
    let f = q.mul(&pinv);
    let gp = modify_unchecked(g, phi);
    if let Some(w) = gp.homomorphism_defect(g, &f) {
        return Err(Error::InvalidModification(format!("candidate map fails on basis pair {w:?}")));
    }
    if f.rank() != n {
        return Err(Error::InvalidModification("candidate map is singular".into()));
    }
    Ok(f)
}

/// Rotation on the plane `(X_j, Y_j)` of `gh(2m+2)`: `X_j ↦ Y_j`, `Y_j ↦ −X_j`.
pub fn plane_rotation(layout: Layout, j: usize) -> Matrix<Q> {
    let n = layout.dim();
    let mut r = Matrix::zeros(n, n);
    r[(layout.y(j), layout.x(j))] = Q::from_i64(1);
    r[(layout.x(j), layout.y(j))] = Q::from_i64(-1);
    r
}

/// The Cartan modification of `gh(2m+2)` inducing `gh(ψ)`: generator `g_r`
/// (`T, X_1..X_p, Y_1..Y_p`) acts on the plane of `X_{p+j}` by
/// `weights[r][j]` times the plane rotation; `φ` vanishes on `Z` and on the
/// last `q` planes.
pub fn cartan_modification(m: usize, p: usize, weights: &Matrix<Q>) -> Result<Modification<Q>> {
    if p >= m {
        return Err(Error::InvalidParameter("need q = m - p >= 1".into()));
    }
    let q = m - p;
    if weights.rows() != 2 * p + 1 || weights.cols() != q {
        return Err(Error::InvalidParameter(format!("weight matrix must be {}x{q}", 2 * p + 1)));
    }
    let lay = Layout::new(m);
    let n = lay.dim();
    let mut phi = vec![Matrix::zeros(n, n); n];
    let generators: Vec<usize> =
        std::iter::once(lay.t()).chain((0..p).map(|i| lay.x(i))).chain((0..p).map(|i| lay.y(i))).collect();
    for (r, &g) in generators.iter().enumerate() {
        for j in 0..q {
            phi[g] = phi[g].add(&plane_rotation(lay, p + j).scale(&weights[(r, j)]));
        }
    }
    Modification::new(phi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{self, make_gh, make_gh_psi, AlgebraId, Branch, DeltaParam, EpsilonVector};
    use crate::scalar::{q, qi};

    fn canonical_gh(m: usize) -> (LieAlgebra<Q>, BilinearForm<Q>, ComplexStructure<Q>) {
        let id = AlgebraId::Gh(m);
        let j = catalog::complex_structure(
            &id,
            &DeltaParam::new(qi(1), qi(0)).unwrap(),
            Some(&EpsilonVector::all_positive(m)),
            Branch::V,
        )
        .unwrap();
        (id.build().unwrap(), BilinearForm::identity(2 * m + 2), j)
    }

    #[test]
    fn zero_modification_is_valid_and_trivial() {
        let (g, metric, j) = canonical_gh(2);
        let phi = Modification::zero(6);
        assert!(validate_modification(&g, &metric, Some(&j), &phi).unwrap().is_valid());
        assert_eq!(modify(&g, &phi).unwrap(), g);
        assert!(check_preservation(&g, &metric, &j, &phi).unwrap().all());
    }

    #[test]
    fn cartan_modification_gives_gh_psi() {
        let w = Matrix::from_rows(vec![vec![q(1, 2)], vec![qi(2)], vec![qi(-1)]]);
        let (g, metric, j) = canonical_gh(2);
        let phi = cartan_modification(2, 1, &w).unwrap();
        assert!(validate_modification(&g, &metric, Some(&j), &phi).unwrap().is_valid());
        let gp = modify(&g, &phi).unwrap();
        assert_eq!(gp.structure_tensor(), make_gh_psi(1, 1, &w).unwrap().structure_tensor());
        assert!(check_preservation(&g, &metric, &j, &phi).unwrap().all());
        let v = vaisman_modification_check(&g, &metric, &j, &phi).unwrap();
        assert!(v.lee_kills_image && v.agree);
    }

    #[test]
    fn non_derivation_rejected_with_witness() {
        let g = make_gh(1).unwrap();
        let mut bad = Matrix::<Q>::zeros(4, 4);
        bad[(1, 1)] = qi(1);
        let mut phi = vec![Matrix::zeros(4, 4); 4];
        phi[0] = bad;
        let phi = Modification::new(phi).unwrap();
        let r = validate_modification(&g, &BilinearForm::identity(4), None, &phi).unwrap();
        assert_eq!(r.not_derivation, Some(0));
        assert!(modify(&g, &phi).is_err());
    }

    #[test]
    fn rotation_on_own_plane_is_rejected() {
        let g = make_gh(1).unwrap();
        let mut phi = vec![Matrix::zeros(4, 4); 4];
        phi[1] = plane_rotation(Layout::new(1), 0);
        let phi = Modification::new(phi).unwrap();
        let r = validate_modification(&g, &BilinearForm::identity(4), None, &phi).unwrap();
        assert!(!r.vanishes_on_image);
    }

    #[test]
    fn non_j_linear_modification_reported() {
        // Unitary for the canonical J but not for J with ε = (1, −1).
        let lay = Layout::new(2);
        let g = make_gh(2).unwrap();
        let mut d = Matrix::<Q>::zeros(6, 6);
        d[(lay.x(1), lay.x(0))] = qi(1);
        d[(lay.x(0), lay.x(1))] = qi(-1);
        d[(lay.y(1), lay.y(0))] = qi(1);
        d[(lay.y(0), lay.y(1))] = qi(-1);
        let mut phi = vec![Matrix::zeros(6, 6); 6];
        phi[0] = d;
        let phi = Modification::new(phi).unwrap();
        let j = catalog::complex_structure(
            &AlgebraId::Gh(2),
            &DeltaParam::new(qi(1), qi(0)).unwrap(),
            Some(&EpsilonVector::new(vec![1, -1]).unwrap()),
            Branch::V,
        )
        .unwrap();
        let metric = BilinearForm::identity(6);
        let r = validate_modification(&g, &metric, Some(&j), &phi).unwrap();
        assert_eq!(r.not_j_linear, Some(0));
        assert!(r.is_structurally_valid());
        let p = check_preservation(&g, &metric, &j, &phi).unwrap();
        assert!(p.jacobi && p.unimodular_equal);
    }

    #[test]
    fn reductive_isomorphisms() {
        let u2 = catalog::make_u2();
        let mut phi = vec![Matrix::zeros(4, 4); 4];
        phi[0] = u2.ad_basis(1);
        let phi = Modification::new(phi).unwrap();
        let f = reductive_modification_iso(&u2, &phi).unwrap();
        assert_eq!(f.column(0), vec![qi(1), qi(1), qi(0), qi(0)]);
        let f0 = reductive_modification_iso(&u2, &Modification::zero(4)).unwrap();
        assert_eq!(f0, Matrix::identity(4));
        let gl = catalog::make_gl2r();
        let mut phi = vec![Matrix::zeros(4, 4); 4];
        phi[0] = gl.ad_basis(3);
        assert!(reductive_modification_iso(&gl, &Modification::new(phi).unwrap()).is_ok());
    }

    #[test]
    fn unitary_derivations_annihilate_lee_form() {
        // exp(sD) preserves ω and hence its unique Lee form, so θ ∘ D = 0 and
        // θ(Im φ) = 0 holds for every modification of these structures.
        let cases = [
            catalog::sasaki_affine(),
            catalog::sasaki_heisenberg(2).unwrap(),
            catalog::sasaki_su2(),
            catalog::sasaki_sl2(),
        ];
        for (s, data) in cases {
            for (c, d) in [(qi(1), qi(0)), (qi(-2), qi(3))] {
                let v = crate::hermitian::vaisman_from_sasaki(&s, &data, &c, &d).unwrap();
                let omega = fundamental_form(&v.metric, &v.j).unwrap();
                let lee = lee_form(&v.algebra, &omega).unwrap().unwrap();
                assert!(lee.is_unique());
                let theta = lee.theta.to_covector();
                for dd in crate::hermitian::skew_hermitian_derivations(&v.algebra, &v.metric, Some(&v.j)).unwrap() {
                    let row = dd.transpose().mul_vec(&theta);
                    assert!(row.iter().all(|x| x.is_negligible()));
                }
            }
        }
    }

    #[test]
    fn skew_derivations_of_u2_are_inner() {
        assert!(skew_derivations_are_inner(&catalog::make_u2(), &BilinearForm::identity(4)).unwrap());
    }
}
