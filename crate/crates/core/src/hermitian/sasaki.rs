use serde::Serialize;

use crate::algebra::LieAlgebra;
use crate::error::{Error, Result};
use crate::forms::{ce_differential, KForm};
use crate::matrix::Matrix;
use crate::scalar::Scalar;

use super::{BilinearForm, ComplexStructure};

/// Contact metric data `(φ, η, ⟨·,·⟩, J̃)` on an odd-dimensional algebra.
#[derive(Clone, Debug, PartialEq)]
pub struct SasakiData<S> {
    pub phi: KForm<S>,
    pub eta: Vec<S>,
    pub jt: Matrix<S>,
    pub metric: BilinearForm<S>,
}

impl<S: Scalar> SasakiData<S> {
    /// Completes `(φ, η, J̃)` with the metric `⟨X,Y⟩ = φ(X)φ(Y) + dφ(J̃X, Y)`.
    pub fn with_contact_metric(g: &LieAlgebra<S>, phi: KForm<S>, eta: Vec<S>, jt: Matrix<S>) -> Result<Self> {
        let n = g.dim();
        let dm = ce_differential(g, &phi)?.to_matrix();
        let c = phi.to_covector();
        let m = Matrix::from_fn(n, n, |i, j| c[i].clone() * c[j].clone()).add(&jt.transpose().mul(&dm));
        Ok(Self { phi, eta, jt, metric: BilinearForm::new(m)? })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SasakiReport {
    pub reeb: bool,
    pub tensor: bool,
    pub metric_identity: bool,
    pub killing: bool,
    pub cr_integrable: bool,
}

impl SasakiReport {
    pub fn passes(&self) -> bool {
        self.reeb && self.tensor && self.metric_identity && self.killing && self.cr_integrable
    }
}

/// Checks every Sasaki condition. A degenerate contact form is an error.
pub fn sasaki_check<S: Scalar>(g: &LieAlgebra<S>, data: &SasakiData<S>) -> Result<SasakiReport> {
    let n = g.dim();
    if n % 2 == 0 {
        return Err(Error::InvalidParameter(format!("Sasaki data needs odd dimension, got {n}")));
    }
    if data.phi.degree() != 1 || data.phi.dim() != n || data.eta.len() != n || data.jt.rows() != n {
        return Err(Error::DimensionMismatch { expected: n, got: data.phi.dim() });
    }
    let dphi = ce_differential(g, &data.phi)?;
    let mut top = data.phi.clone();
    for _ in 0..n / 2 {
        top = top.wedge(&dphi);
    }
    if top.is_zero() {
        return Err(Error::DegenerateContactForm);
    }
    let phi = data.phi.to_covector();
    let phi_of = |v: &[S]| v.iter().zip(&phi).fold(S::zero(), |a, (x, y)| a + x.clone() * y.clone());
    let eta = &data.eta;

    let reeb = (phi_of(eta) - S::one()).is_negligible() && dphi.interior(eta).is_zero();

    // J̃² + I − η ⊗ φ = 0
    let jt = &data.jt;
    let eta_phi = Matrix::from_fn(n, n, |i, j| eta[i].clone() * phi[j].clone());
    let tensor = jt.mul(jt).add(&Matrix::identity(n)).sub(&eta_phi).is_negligible();

    let dm = dphi.to_matrix();
    let expected = Matrix::from_fn(n, n, |i, j| phi[i].clone() * phi[j].clone()).add(&jt.transpose().mul(&dm));
    let metric_identity = expected.sub(data.metric.matrix()).is_negligible();

    let ad = g.ad(eta)?;
    let m = data.metric.matrix();
    let killing = ad.transpose().mul(m).add(&m.mul(&ad)).is_negligible();

    let d_basis = Matrix::from_rows(vec![phi.clone()]).nullspace();
    let mut cr_integrable = true;
    'outer: for (a, x) in d_basis.iter().enumerate() {
        for y in &d_basis[a + 1..] {
            let jx = jt.mul_vec(x);
            let jy = jt.mul_vec(y);
            let t1 = g.bracket_unchecked(&jx, &jy);
            let t2 = g.bracket_unchecked(x, y);
            let t3 = jt.mul_vec(&g.bracket_unchecked(x, &jy));
            let t4 = jt.mul_vec(&g.bracket_unchecked(&jx, y));
            let nv: Vec<S> = (0..n)
                .map(|k| t1[k].clone() - t2[k].clone() - t3[k].clone() - t4[k].clone())
                .collect();
            let c = phi_of(&nv);
            if (0..n).any(|k| !(nv[k].clone() - c.clone() * eta[k].clone()).is_negligible()) {
                cr_integrable = false;
                break 'outer;
            }
        }
    }

    Ok(SasakiReport { reeb, tensor, metric_identity, killing, cr_integrable })
}

/// `R ⊕ g` with its induced Vaisman data.
#[derive(Clone, Debug)]
pub struct VaismanFromSasaki<S> {
    pub algebra: LieAlgebra<S>,
    pub metric: BilinearForm<S>,
    pub j: ComplexStructure<S>,
    pub omega: KForm<S>,
}

/// Builds `R T ⊕ g` with `ω = −dt ∧ φ + dφ` and
/// `Ĵ T = (−d/c) T + ((c² + d²)/c) η`, `Ĵ η = (−1/c) T + (d/c) η`, `Ĵ|D = J̃|D`.
/// The metric is `⟨U, V⟩ = ω(ĴU, V)`.
pub fn vaisman_from_sasaki<S: Scalar>(
    g: &LieAlgebra<S>,
    data: &SasakiData<S>,
    c: &S,
    d: &S,
) -> Result<VaismanFromSasaki<S>> {
    if c.is_negligible() {
        return Err(Error::InvalidParameter("c must be nonzero".into()));
    }
    if !sasaki_check(g, data)?.passes() {
        return Err(Error::InvalidParameter("input is not a Sasaki structure".into()));
    }
    let n = g.dim();
    let big = g.with_central_line("T");
    let shift: Vec<usize> = (1..=n).collect();
    let t = KForm::dual(n + 1, 0);
    let phi_hat = data.phi.reindex(n + 1, &shift);
    let dphi_hat = ce_differential(g, &data.phi)?.reindex(n + 1, &shift);
    let omega = phi_hat.wedge(&t).add(&dphi_hat);

    let mut j = Matrix::zeros(n + 1, n + 1);
    let eta = &data.eta;
    let phi = data.phi.to_covector();
    let c2d2 = (c.clone() * c.clone() + d.clone() * d.clone()) / c.clone();
    // Ĵ T
    j[(0, 0)] = -(d.clone() / c.clone());
    for k in 0..n {
        j[(k + 1, 0)] = c2d2.clone() * eta[k].clone();
    }
    // Ĵ η in the big algebra.
    let mut jeta = vec![S::zero(); n + 1];
    jeta[0] = -(S::one() / c.clone());
    for k in 0..n {
        jeta[k + 1] = d.clone() / c.clone() * eta[k].clone();
    }
    let jt_eta = data.jt.mul_vec(eta);
    for i in 0..n {
        // e_i = (e_i − φ_i η) + φ_i η
        let col = data.jt.column(i);
        let pi = phi[i].clone();
        j[(0, i + 1)] = pi.clone() * jeta[0].clone();
        for k in 0..n {
            j[(k + 1, i + 1)] = col[k].clone() - pi.clone() * jt_eta[k].clone() + pi.clone() * jeta[k + 1].clone();
        }
    }
    let j = ComplexStructure::new(j)?;
    let metric = BilinearForm::new(j.matrix().transpose().mul(&omega.to_matrix()))?;
    Ok(VaismanFromSasaki { algebra: big, metric, j, omega })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{self, AlgebraId, Branch, DeltaParam, EpsilonVector};
    use crate::hermitian::{classify_hermitian, HermitianClass};
    use crate::scalar::{q, qi, Q};

    #[test]
    fn heisenberg_sasaki_passes() {
        let (g, data) = catalog::sasaki_heisenberg(1).unwrap();
        assert!(sasaki_check(&g, &data).unwrap().passes());
    }

    #[test]
    fn even_dimension_rejected() {
        let g = catalog::make_gl2r();
        let data = SasakiData {
            phi: KForm::dual(4, 3),
            eta: g.basis_vector(3),
            jt: Matrix::zeros(4, 4),
            metric: BilinearForm::identity(4),
        };
        assert!(sasaki_check(&g, &data).is_err());
    }

    #[test]
    fn non_unimodular_spurious_data_fails() {
        // [e1, e2] = e2 plus a central e3.
        let g = LieAlgebra::<Q>::from_brackets(&["e1", "e2", "e3"], &[(0, 1, vec![qi(0), qi(1), qi(0)])]).unwrap();
        let data = SasakiData {
            phi: KForm::dual(3, 1),
            eta: g.basis_vector(1),
            jt: Matrix::zeros(3, 3),
            metric: BilinearForm::identity(3),
        };
        match sasaki_check(&g, &data) {
            Err(Error::DegenerateContactForm) => {}
            Ok(r) => assert!(!r.passes()),
            Err(e) => panic!("unexpected error {e}"),
        }
    }

    #[test]
    fn heisenberg_cone_is_canonical_gh() {
        let (g, data) = catalog::sasaki_heisenberg(1).unwrap();
        let v = vaisman_from_sasaki(&g, &data, &qi(1), &qi(0)).unwrap();
        assert_eq!(v.algebra.structure_tensor(), catalog::make_gh(1).unwrap().structure_tensor());
        let j = catalog::complex_structure(
            &AlgebraId::Gh(1),
            &DeltaParam::new(qi(1), qi(0)).unwrap(),
            Some(&EpsilonVector::all_positive(1)),
            Branch::V,
        )
        .unwrap();
        assert_eq!(v.j, j);
        assert_eq!(*v.metric.matrix(), Matrix::identity(4));
    }

    #[test]
    fn cone_jt_matches_explicit_matrix() {
        let (g, data) = catalog::sasaki_heisenberg(1).unwrap();
        let d = q(3, 2);
        let v = vaisman_from_sasaki(&g, &data, &qi(2), &d).unwrap();
        let col = v.j.matrix().column(0);
        assert_eq!(col[0], -d.clone() / qi(2));
        assert_eq!(col[3], (qi(4) + d.clone() * d) / qi(2));
    }

    #[test]
    fn cones_are_vaisman() {
        for (g, data) in [catalog::sasaki_su2(), catalog::sasaki_sl2(), catalog::sasaki_heisenberg(2).unwrap()] {
            for (c, d) in [(qi(1), qi(0)), (qi(-2), qi(1))] {
                let v = vaisman_from_sasaki(&g, &data, &c, &d).unwrap();
                let r = classify_hermitian(&v.algebra, &v.j, &v.metric).unwrap();
                assert_eq!(r.class, HermitianClass::Lck { vaisman: true });
            }
        }
    }

    #[test]
    fn zero_c_rejected() {
        let (g, data) = catalog::sasaki_su2();
        assert!(vaisman_from_sasaki(&g, &data, &qi(0), &qi(1)).is_err());
    }
}
