use crate::algebra::{LieAlgebra, Subspace};
use crate::catalog::{make_gh, make_gh_psi, Layout};
use crate::error::{Error, Result};
use crate::hermitian::{BilinearForm, ComplexStructure};
use crate::matrix::Matrix;
use crate::scalar::{rationalize, sqrt_q, Scalar, Q};

use super::{modify_unchecked, validate_modification, Modification};

/// `V = V₀ ⊕ V₁` for a modification of `gh(2m+2)`, the induced weights `ψ`,
/// and a basis change carrying `gh(ψ)` onto `gh_φ`.
#[derive(Clone, Debug)]
pub struct GhDecomposition {
    pub v0: Subspace<Q>,
    pub v1: Subspace<Q>,
    pub p: usize,
    pub q: usize,
    /// `(2p+1) × q`; rows for `Z₀, X_1..X_p, Y_1..Y_p`.
    pub weights: Matrix<Q>,
    /// Columns are the images of the `gh(ψ)` basis in `gh_φ`.
    pub basis_change: Matrix<Q>,
    pub model: LieAlgebra<Q>,
}

fn dot(m: &Matrix<Q>, a: &[Q], b: &[Q]) -> Q {
    a.iter().zip(m.mul_vec(b)).fold(Q::from_i64(0), |acc, (x, y)| acc + x.clone() * y)
}

fn axpy(a: &Q, x: &[Q], y: &mut [Q]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi = yi.clone() + a.clone() * xi.clone();
    }
}

/// Metric-orthogonal projector onto `w`.
fn projector(metric: &Matrix<Q>, w: &Subspace<Q>) -> Result<Matrix<Q>> {
    let b = Matrix::from_columns(w.basis());
    let gram = b.transpose().mul(metric).mul(&b);
    let inv = gram.inverse().ok_or_else(|| Error::InvalidMetric("metric degenerate on subspace".into()))?;
    Ok(b.mul(&inv).mul(&b.transpose()).mul(metric))
}

/// A basis `u_1, J u_1, …` of the `J`-invariant subspace `w`, orthonormal for
/// the metric, built from projections of `candidates`. Requires rational norms.
fn unitary_basis(
    metric: &Matrix<Q>,
    j: &Matrix<Q>,
    w: &Subspace<Q>,
    candidates: &[Vec<Q>],
) -> Result<Vec<Vec<Q>>> {
    let need = w.dim() / 2;
    if need == 0 {
        return Ok(Vec::new());
    }
    let proj = projector(metric, w)?;
    let mut chosen: Vec<Vec<Q>> = Vec::new();
    for c in candidates {
        let mut v = proj.mul_vec(c);
        for u in &chosen {
            let ju = j.mul_vec(u);
            let a = -dot(metric, &v, u);
            let b = -dot(metric, &v, &ju);
            axpy(&a, u, &mut v);
            axpy(&b, &ju, &mut v);
        }
        let norm2 = dot(metric, &v, &v);
        if norm2.is_negligible() {
            continue;
        }
        if let Some(norm) = sqrt_q(&norm2) {
            chosen.push(v.iter().map(|x| x.clone() / norm.clone()).collect());
            if chosen.len() == need {
                return Ok(chosen);
            }
        }
    }
    Err(Error::Unsupported("no unitary basis with rational norms was found".into()))
}

/// Splits `spaces` into joint eigenspaces of `s`, using floating eigenvalues
/// as rational candidates and exact kernels as the certificate.
fn split(spaces: Vec<Subspace<Q>>, s: &Matrix<Q>) -> Result<Vec<(Subspace<Q>, Vec<Q>)>> {
    let n = s.rows();
    let a = nalgebra::DMatrix::from_fn(n, n, |r, c| s[(r, c)].to_f64());
    let mut lambdas: Vec<Q> = Vec::new();
    for e in a.complex_eigenvalues().iter() {
        let cand = rationalize(e.re, 1_000_000)
            .ok_or_else(|| Error::Unsupported("eigenvalue not representable".into()))?;
        if !lambdas.contains(&cand) {
            lambdas.push(cand);
        }
    }
    let mut out = Vec::new();
    for w in spaces {
        let mut covered = 0;
        for l in &lambdas {
            let shifted = s.sub(&Matrix::identity(n).scale(l));
            let kernel = Subspace::from_spanning(n, shifted.nullspace());
            let piece = w.intersection(&kernel);
            if piece.dim() > 0 {
                covered += piece.dim();
                out.push((piece, vec![l.clone()]));
            }
        }
        if covered != w.dim() {
            return Err(Error::Unsupported("weights are not rational".into()));
        }
    }
    Ok(out)
}

/// Decomposes a modification of `gh(2m+2)` with values in `u(m)` and
/// recovers `gh(ψ)` with an explicit, exactly verified isomorphism.
pub fn decompose_gh_modification(
    g: &LieAlgebra<Q>,
    metric: &BilinearForm<Q>,
    j: &ComplexStructure<Q>,
    phi: &Modification<Q>,
) -> Result<GhDecomposition> {
    let n = g.dim();
    if n < 4 || n % 2 != 0 {
        return Err(Error::InvalidAlgebra("expected gh(2m+2)".into()));
    }
    let m = (n - 2) / 2;
    if g.structure_tensor() != make_gh(m)?.structure_tensor() {
        return Err(Error::InvalidAlgebra("expected gh(2m+2) in its standard basis".into()));
    }
    let report = validate_modification(g, metric, Some(j), phi)?;
    if !report.is_valid() {
        return Err(Error::InvalidModification(format!("{report:?}")));
    }
    let values = phi.values();
    for a in 0..n {
        for b in a + 1..n {
            if !values[a].commutator(&values[b]).is_negligible() {
                return Err(Error::InvalidModification(format!("phi({a}) and phi({b}) do not commute")));
            }
        }
    }
    let lay = Layout::new(m);
    let v_basis: Vec<Vec<Q>> = (0..m).flat_map(|i| [g.basis_vector(lay.x(i)), g.basis_vector(lay.y(i))]).collect();
    let v = Subspace::from_spanning(n, v_basis.clone());
    let v1 = phi.image();
    if !v.contains_subspace(&v1) {
        return Err(Error::InvalidModification("Im phi is not contained in V".into()));
    }
    let v0 = phi.common_kernel().intersection(&v);
    if v0.dim() + v1.dim() != 2 * m || v0.sum(&v1).dim() != 2 * m {
        return Err(Error::InvalidModification("V is not ker phi ⊕ Im phi".into()));
    }
    let (p, q) = (v0.dim() / 2, v1.dim() / 2);
    let jm = j.matrix();
    let mm = metric.matrix();

    let active: Vec<usize> = (0..n).filter(|&i| !values[i].is_negligible()).collect();
    let mut pieces: Vec<(Subspace<Q>, Vec<Q>)> = vec![(v1.clone(), Vec::new())];
    if v1.dim() > 0 {
        for &e in &active {
            let s = jm.mul(&values[e]).neg();
            let mut next = Vec::new();
            for (w, _) in pieces {
                next.extend(split(vec![w], &s)?);
            }
            pieces = next;
        }
    } else {
        pieces.clear();
    }

    let mut planes: Vec<Vec<Q>> = Vec::new();
    for (w, _) in &pieces {
        planes.extend(unitary_basis(mm, jm, w, &v_basis)?);
    }
    let base = unitary_basis(mm, jm, &v0, &v_basis)?;

    let generators: Vec<Vec<Q>> = std::iter::once(g.basis_vector(lay.t()))
        .chain(base.iter().cloned())
        .chain(base.iter().map(|u| jm.mul_vec(u)))
        .collect();
    let weights = Matrix::from_fn(2 * p + 1, q, |r, c| {
        let s = jm.mul(&phi.apply(&generators[r])).neg();
        let u = &planes[c];
        dot(mm, &s.mul_vec(u), u) / dot(mm, u, u)
    });

    let mut cols: Vec<Vec<Q>> = vec![g.basis_vector(lay.t())];
    cols.extend(base.iter().cloned());
    cols.extend(planes.iter().cloned());
    cols.extend(base.iter().map(|u| jm.mul_vec(u)));
    cols.extend(planes.iter().map(|u| jm.mul_vec(u)));
    cols.push(g.basis_vector(lay.z()));
    let f = Matrix::from_columns(&cols);

    let model = if q == 0 { make_gh(m)? } else { make_gh_psi(p, q, &weights)? };
    let gp = modify_unchecked(g, phi);
    if f.rank() != n {
        return Err(Error::InvalidModification("basis change is singular".into()));
    }
    if let Some(w) = model.homomorphism_defect(&gp, &f) {
        return Err(Error::InvalidModification(format!("basis change fails on pair {w:?}")));
    }
    Ok(GhDecomposition { v0, v1, p, q, weights, basis_change: f, model })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{self, AlgebraId, Branch, DeltaParam, EpsilonVector};
    use crate::modification::{cartan_modification, plane_rotation};
    use crate::scalar::{q, qi};

    fn canonical(m: usize) -> (LieAlgebra<Q>, BilinearForm<Q>, ComplexStructure<Q>) {
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

    /// Unitary map mixing planes `a` and `b` by the rotation (3/5, 4/5).
    fn pythagorean(m: usize, a: usize, b: usize) -> Matrix<Q> {
        let lay = Layout::new(m);
        let mut u = Matrix::identity(2 * m + 2);
        for (ia, ib) in [(lay.x(a), lay.x(b)), (lay.y(a), lay.y(b))] {
            u[(ia, ia)] = q(3, 5);
            u[(ib, ia)] = q(4, 5);
            u[(ia, ib)] = q(-4, 5);
            u[(ib, ib)] = q(3, 5);
        }
        u
    }

    #[test]
    fn zero_phi_gives_trivial_split() {
        let (g, metric, j) = canonical(2);
        let d = decompose_gh_modification(&g, &metric, &j, &Modification::zero(6)).unwrap();
        assert_eq!((d.p, d.q, d.v1.dim()), (2, 0, 0));
    }

    #[test]
    fn rotation_on_second_factor() {
        let (g, metric, j) = canonical(2);
        let mut phi = vec![Matrix::zeros(6, 6); 6];
        phi[0] = plane_rotation(Layout::new(2), 1).scale(&q(5, 3));
        let d = decompose_gh_modification(&g, &metric, &j, &Modification::new(phi).unwrap()).unwrap();
        assert_eq!((d.p, d.q), (1, 1));
        assert!(d.v0.contains(&g.basis_vector(1)));
        assert!(d.v1.contains(&g.basis_vector(2)));
        assert_eq!(d.weights[(0, 0)], q(5, 3));
    }

    #[test]
    fn conjugated_cartan_round_trips() {
        let (g, metric, j) = canonical(3);
        let w = Matrix::from_rows(vec![
            vec![q(1, 2), qi(-2)],
            vec![qi(3), q(1, 7)],
            vec![qi(0), qi(1)],
        ]);
        let phi = cartan_modification(3, 1, &w).unwrap().conjugate(&pythagorean(3, 0, 1)).unwrap();
        let d = decompose_gh_modification(&g, &metric, &j, &phi).unwrap();
        assert_eq!((d.p, d.q), (1, 2));
        assert!(d.model.check_jacobi().ok);
    }

    #[test]
    fn rotation_on_own_plane_rejected() {
        let (g, metric, j) = canonical(1);
        let mut phi = vec![Matrix::zeros(4, 4); 4];
        phi[1] = plane_rotation(Layout::new(1), 0);
        assert!(decompose_gh_modification(&g, &metric, &j, &Modification::new(phi).unwrap()).is_err());
    }
}
