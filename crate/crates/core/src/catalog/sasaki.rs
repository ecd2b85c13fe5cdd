use crate::algebra::LieAlgebra;
use crate::error::{Error, Result};
use crate::forms::KForm;
use crate::hermitian::{BilinearForm, SasakiData};
use crate::matrix::Matrix;
use crate::scalar::{Scalar, Q};

use super::{make_gh_psi, make_heisenberg, make_sl2, make_su2};

fn contact_data(n: usize, z: usize, jt: Matrix<Q>) -> SasakiData<Q> {
    let mut eta = vec![Q::from_i64(0); n];
    eta[z] = Q::from_i64(1);
    SasakiData { phi: KForm::dual(n, z), eta, jt, metric: BilinearForm::identity(n) }
}

/// `J̃ X_i = s Y_i`, `J̃ Y_i = −s X_i` on `m` planes laid out as `X.., Y..`.
fn plane_rotation(n: usize, m: usize, s: i64) -> Matrix<Q> {
    let mut j = Matrix::zeros(n, n);
    for i in 0..m {
        j[(m + i, i)] = Q::from_i64(s);
        j[(i, m + i)] = Q::from_i64(-s);
    }
    j
}

/// `h(2m+1)` with `φ = z`, `η = Z`, `J̃ X_i = Y_i` and the standard metric.
pub fn sasaki_heisenberg(m: usize) -> Result<(LieAlgebra<Q>, SasakiData<Q>)> {
    let g = make_heisenberg(m)?;
    let n = g.dim();
    Ok((g, contact_data(n, 2 * m, plane_rotation(n, m, 1))))
}

/// `su(2)` with `φ = z`, `η = Z`, `J̃ X = −Y`.
pub fn sasaki_su2() -> (LieAlgebra<Q>, SasakiData<Q>) {
    (make_su2(), contact_data(3, 2, plane_rotation(3, 1, -1)))
}

/// `sl(2,R)` with `φ = z`, `η = Z`, `J̃ X = Y`.
pub fn sasaki_sl2() -> (LieAlgebra<Q>, SasakiData<Q>) {
    (make_sl2(), contact_data(3, 2, plane_rotation(3, 1, 1)))
}

/// `aff(R) ⊕ R`: `[e1, e2] = e2` with `e3` central, `φ = e2* + e3*`,
/// `η = e3`, `J̃ e1 = e2 − e3`. Not unimodular.
pub fn sasaki_affine() -> (LieAlgebra<Q>, SasakiData<Q>) {
    let one = || Q::from_i64(1);
    let zero = || Q::from_i64(0);
    let g = LieAlgebra::from_brackets(&["e1", "e2", "e3"], &[(0, 1, vec![zero(), one(), zero()])])
        .expect("aff(R) brackets are consistent");
    let mut jt = Matrix::zeros(3, 3);
    jt[(1, 0)] = one();
    jt[(2, 0)] = -one();
    jt[(0, 1)] = -one();
    let phi = KForm::from_covector(&[zero(), one(), one()]);
    let data = SasakiData::with_contact_metric(&g, phi, vec![zero(), zero(), one()], jt)
        .expect("contact metric is symmetric");
    (g, data)
}

/// The modified Heisenberg algebra `h_{2m+1}(φ)`: `R^{2p} ⋉ C^q` centrally
/// extended, with `weights` a `2p × q` matrix of rotation speeds. Basis
/// `X_1..X_m, Y_1..Y_m, Z_1`; Sasaki data as for `h(2m+1)`.
pub fn sasaki_modified_heisenberg(
    p: usize,
    q: usize,
    weights: &Matrix<Q>,
) -> Result<(LieAlgebra<Q>, SasakiData<Q>)> {
    if weights.rows() != 2 * p || weights.cols() != q {
        return Err(Error::InvalidParameter(format!("weight matrix must be {}x{q}", 2 * p)));
    }
    let full = Matrix::from_fn(2 * p + 1, q, |r, c| if r == 0 { Q::from_i64(0) } else { weights[(r - 1, c)].clone() });
    let gh = make_gh_psi(p, q, &full)?;
    // Z0 is central here; drop it.
    let n = gh.dim() - 1;
    let c: Vec<Vec<Vec<Q>>> =
        (1..=n).map(|i| (1..=n).map(|j| (1..=n).map(|k| gh.c(i, j, k).clone()).collect()).collect()).collect();
    let names = gh.basis_names()[1..].to_vec();
    let g = LieAlgebra::from_structure_constants(names, c)?;
    let m = p + q;
    Ok((g, contact_data(n, 2 * m, plane_rotation(n, m, 1))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hermitian::sasaki_check;
    use crate::scalar::{q, qi};

    #[test]
    fn catalog_sasaki_data_pass() {
        for (g, d) in [sasaki_su2(), sasaki_sl2(), sasaki_heisenberg(3).unwrap(), sasaki_affine()] {
            assert!(sasaki_check(&g, &d).unwrap().passes());
        }
    }

    #[test]
    fn modified_heisenberg_is_sasaki_and_unimodular() {
        let w = Matrix::from_rows(vec![vec![q(1, 2), qi(2)], vec![qi(-3), qi(1)]]);
        let (g, d) = sasaki_modified_heisenberg(1, 2, &w).unwrap();
        assert!(g.check_jacobi().ok);
        assert!(g.is_unimodular());
        assert!(sasaki_check(&g, &d).unwrap().passes());
    }
}
