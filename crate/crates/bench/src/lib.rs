//! Fixtures shared by the criterion benchmarks in `benches/`.

use vaisman_core::catalog::{
    complex_structure, lck_form, make_gh, metric_matrix, AlgebraId, Branch, DeltaParam, EpsilonVector, LckCoefficients,
};
use vaisman_core::hermitian::{BilinearForm, ComplexStructure};
use vaisman_core::scalar::{q, qi};
use vaisman_core::{LieAlgebra, Q};

/// An lcK structure on `gh(m)`: the algebra, J for `δ = 1 + i/2`, and the metric.
pub struct GhFixture {
    pub g: LieAlgebra<Q>,
    pub j: ComplexStructure<Q>,
    pub metric: BilinearForm<Q>,
}

pub fn gh_fixture(m: usize) -> GhFixture {
    let id = AlgebraId::Gh(m);
    let g = make_gh(m).expect("m >= 1");
    let delta = DeltaParam::new(qi(1), q(1, 2)).expect("k != 0");
    let eps = EpsilonVector::all_positive(m);
    let j = complex_structure(&id, &delta, Some(&eps), Branch::V).expect("family member");
    let coeffs = LckCoefficients::Heisenberg { a: vec![qi(0); m], b: vec![qi(0); m], c0: qi(1) };
    let omega = lck_form(&g, id.layout().expect("gh layout"), &coeffs).expect("lcK form");
    let metric = BilinearForm::new(metric_matrix(&omega, &j)).expect("square metric");
    GhFixture { g, j, metric }
}

#[cfg(test)]
mod tests {
    use super::*;
    use vaisman_core::hermitian::{classify_hermitian, HermitianClass};

    #[test]
    fn fixture_is_vaisman() {
        let f = gh_fixture(2);
        let rep = classify_hermitian(&f.g, &f.j, &f.metric).unwrap();
        assert!(matches!(rep.class, HermitianClass::Lck { vaisman: true }), "{:?}", rep.class);
    }
}
