//! Constructors for the concrete algebras, complex-structure families, lcK
//! forms and metrics used throughout the crate.
//!
//! Basis orders are fixed: `(T, X, Y, Z)` for `gl(2,R)` and `u(2)`,
//! `(X_1..X_m, Y_1..Y_m, Z)` for `h(2m+1)` and
//! `(T, X_1..X_m, Y_1..Y_m, Z)` for `gh(2m+2)` and `gh(ψ)`.

mod complexify;
mod sasaki;

pub use complexify::{holomorphic_subalgebra, verify_hj, Complexification, HolomorphicSubalgebra, HjReport};
pub use sasaki::{sasaki_affine, sasaki_heisenberg, sasaki_modified_heisenberg, sasaki_sl2, sasaki_su2};

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::algebra::LieAlgebra;
use crate::error::{Error, Result};
use crate::forms::{ce_differential, KForm};
use crate::hermitian::ComplexStructure;
use crate::matrix::Matrix;
use crate::scalar::{Scalar, Q};

/// Names understood by the command line: `gl2r`, `u2`, `h:<m>`, `gh:<m>`,
/// `ghpsi:<p>,<q>` (the weight matrix is supplied separately).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum AlgebraId {
    Gl2r,
    U2,
    Heisenberg(usize),
    Gh(usize),
    GhPsi { p: usize, q: usize },
}

impl AlgebraId {
    pub fn dim(&self) -> usize {
        match self {
            AlgebraId::Gl2r | AlgebraId::U2 => 4,
            AlgebraId::Heisenberg(m) => 2 * m + 1,
            AlgebraId::Gh(m) => 2 * m + 2,
            AlgebraId::GhPsi { p, q } => 2 * (p + q) + 2,
        }
    }

    /// Number of complex `(X_i, Y_i)` planes.
    pub fn planes(&self) -> usize {
        match self {
            AlgebraId::Gl2r | AlgebraId::U2 => 1,
            AlgebraId::Heisenberg(m) | AlgebraId::Gh(m) => *m,
            AlgebraId::GhPsi { p, q } => p + q,
        }
    }

    pub fn is_reductive(&self) -> bool {
        matches!(self, AlgebraId::Gl2r | AlgebraId::U2)
    }

    /// Basis indices `(T, X_i, Y_i, Z)` of an even-dimensional family algebra.
    pub fn layout(&self) -> Result<Layout> {
        match self {
            AlgebraId::Heisenberg(_) => {
                Err(Error::Unsupported("h(2m+1) is odd-dimensional; no complex structures".into()))
            }
            _ => Ok(Layout::new(self.planes())),
        }
    }

    /// Exact algebra for every id except `GhPsi`, which needs its weights.
    pub fn build(&self) -> Result<LieAlgebra<Q>> {
        match self {
            AlgebraId::Gl2r => Ok(make_gl2r()),
            AlgebraId::U2 => Ok(make_u2()),
            AlgebraId::Heisenberg(m) => make_heisenberg(*m),
            AlgebraId::Gh(m) => make_gh(*m),
            AlgebraId::GhPsi { .. } => {
                Err(Error::InvalidParameter("ghpsi needs a weight matrix; use make_gh_psi".into()))
            }
        }
    }
}

impl fmt::Display for AlgebraId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlgebraId::Gl2r => write!(f, "gl2r"),
            AlgebraId::U2 => write!(f, "u2"),
            AlgebraId::Heisenberg(m) => write!(f, "h:{m}"),
            AlgebraId::Gh(m) => write!(f, "gh:{m}"),
            AlgebraId::GhPsi { p, q } => write!(f, "ghpsi:{p},{q}"),
        }
    }
}

impl FromStr for AlgebraId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("unknown algebra {s:?}"));
        let parse_n = |t: &str| t.trim().parse::<usize>().map_err(|_| bad());
        match s.trim() {
            "gl2r" => Ok(AlgebraId::Gl2r),
            "u2" => Ok(AlgebraId::U2),
            other => {
                let (head, tail) = other.split_once(':').ok_or_else(bad)?;
                match head {
                    "h" => Ok(AlgebraId::Heisenberg(parse_n(tail)?)),
                    "gh" => Ok(AlgebraId::Gh(parse_n(tail)?)),
                    "ghpsi" => {
                        let (p, q) = tail.split_once(',').ok_or_else(bad)?;
                        Ok(AlgebraId::GhPsi { p: parse_n(p)?, q: parse_n(q)? })
                    }
                    _ => Err(bad()),
                }
            }
        }
    }
}

/// Positions of `T`, the `(X_i, Y_i)` planes and `Z` in the fixed basis order.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Layout {
    pub planes: usize,
}

impl Layout {
    pub fn new(planes: usize) -> Self {
        Self { planes }
    }
    pub fn dim(&self) -> usize {
        2 * self.planes + 2
    }
    pub fn t(&self) -> usize {
        0
    }
    pub fn x(&self, i: usize) -> usize {
        1 + i
    }
    pub fn y(&self, i: usize) -> usize {
        1 + self.planes + i
    }
    pub fn z(&self) -> usize {
        2 * self.planes + 1
    }
}

fn unit(n: usize, i: usize) -> Vec<Q> {
    let mut v = vec![Q::from_i64(0); n];
    v[i] = Q::from_i64(1);
    v
}

fn scaled_unit(n: usize, i: usize, s: i64) -> Vec<Q> {
    let mut v = vec![Q::from_i64(0); n];
    v[i] = Q::from_i64(s);
    v
}

/// `R ⊕ sl(2,R)`: `[X,Y] = Z`, `[Z,X] = −Y`, `[Z,Y] = X`.
pub fn make_gl2r() -> LieAlgebra<Q> {
    LieAlgebra::from_brackets(
        &["T", "X", "Y", "Z"],
        &[(1, 2, unit(4, 3)), (3, 1, scaled_unit(4, 2, -1)), (3, 2, unit(4, 1))],
    )
    .expect("gl(2,R) brackets are consistent")
}

/// `R ⊕ su(2)`: `[X,Y] = −Z`, `[Z,X] = −Y`, `[Z,Y] = X`.
pub fn make_u2() -> LieAlgebra<Q> {
    LieAlgebra::from_brackets(
        &["T", "X", "Y", "Z"],
        &[(1, 2, scaled_unit(4, 3, -1)), (3, 1, scaled_unit(4, 2, -1)), (3, 2, unit(4, 1))],
    )
    .expect("u(2) brackets are consistent")
}

/// `sl(2,R)` on `(X, Y, Z)`.
pub fn make_sl2() -> LieAlgebra<Q> {
    LieAlgebra::from_brackets(
        &["X", "Y", "Z"],
        &[(0, 1, unit(3, 2)), (2, 0, scaled_unit(3, 1, -1)), (2, 1, unit(3, 0))],
    )
    .expect("sl(2,R) brackets are consistent")
}

/// `su(2)` on `(X, Y, Z)`.
pub fn make_su2() -> LieAlgebra<Q> {
    LieAlgebra::from_brackets(
        &["X", "Y", "Z"],
        &[(0, 1, scaled_unit(3, 2, -1)), (2, 0, scaled_unit(3, 1, -1)), (2, 1, unit(3, 0))],
    )
    .expect("su(2) brackets are consistent")
}

fn heisenberg_names(m: usize, with_t: bool) -> Vec<String> {
    let mut names = Vec::new();
    if with_t {
        names.push("T".to_string());
    }
    names.extend((1..=m).map(|i| format!("X{i}")));
    names.extend((1..=m).map(|i| format!("Y{i}")));
    names.push("Z".to_string());
    names
}

/// Heisenberg algebra `h(2m+1)`: `[X_i, Y_i] = Z`.
pub fn make_heisenberg(m: usize) -> Result<LieAlgebra<Q>> {
    if m < 1 {
        return Err(Error::InvalidParameter("Heisenberg algebra needs m >= 1".into()));
    }
    let n = 2 * m + 1;
    let names = heisenberg_names(m, false);
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    let brackets: Vec<_> = (0..m).map(|i| (i, m + i, unit(n, 2 * m))).collect();
    LieAlgebra::from_brackets(&refs, &brackets)
}

/// `gh(2m+2) = R T ⊕ h(2m+1)`.
pub fn make_gh(m: usize) -> Result<LieAlgebra<Q>> {
    let names = heisenberg_names(m, true);
    Ok(make_heisenberg(m)?.with_central_line("T").with_names(names))
}

/// `gh(ψ)`: the central extension of `R^{2p+1} ⋉_ψ C^q` by the pulled-back
/// standard symplectic cocycle.
///
/// Row `r` of `weights` ((2p+1) × q) gives the rotation speeds of the
/// generator `Z_0, X_1..X_p, Y_1..Y_p` (in that order) on the planes
/// `(X_{p+j}, Y_{p+j})`: `[g_r, X_{p+j}] = a Y_{p+j}`, `[g_r, Y_{p+j}] = −a X_{p+j}`.
pub fn make_gh_psi(p: usize, q: usize, weights: &Matrix<Q>) -> Result<LieAlgebra<Q>> {
    if q < 1 {
        return Err(Error::InvalidParameter("gh(psi) needs q >= 1".into()));
    }
    if weights.rows() != 2 * p + 1 || weights.cols() != q {
        return Err(Error::InvalidParameter(format!(
            "weight matrix must be {}x{q}, got {}x{}",
            2 * p + 1,
            weights.rows(),
            weights.cols()
        )));
    }
    let m = p + q;
    let lay = Layout::new(m);
    let n = lay.dim();
    let mut c = vec![vec![vec![Q::from_i64(0); n]; n]; n];
    let mut put = |i: usize, j: usize, k: usize, v: Q| {
        c[i][j][k] = c[i][j][k].clone() + v.clone();
        c[j][i][k] = c[j][i][k].clone() - v;
    };
    for i in 0..m {
        put(lay.x(i), lay.y(i), lay.z(), Q::from_i64(1));
    }
    let generators: Vec<usize> =
        std::iter::once(lay.t()).chain((0..p).map(|i| lay.x(i))).chain((0..p).map(|i| lay.y(i))).collect();
    for (r, &g) in generators.iter().enumerate() {
        for j in 0..q {
            let a = weights[(r, j)].clone();
            if a.is_negligible() {
                continue;
            }
            put(g, lay.x(p + j), lay.y(p + j), a.clone());
            put(g, lay.y(p + j), lay.x(p + j), -a);
        }
    }
    let mut names = heisenberg_names(m, true);
    names[0] = "Z0".to_string();
    names[n - 1] = "Z1".to_string();
    LieAlgebra::from_structure_constants(names, c)
}

/// `δ = k + i l` with `k ≠ 0`. The `gh` family is often written
/// `δ = c + i d`; the two spellings are the same parameter.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DeltaParam<S> {
    pub k: S,
    pub l: S,
}

impl<S: Scalar> DeltaParam<S> {
    pub fn new(k: S, l: S) -> Result<Self> {
        if k.is_negligible() {
            return Err(Error::InvalidParameter("delta requires k != 0".into()));
        }
        Ok(Self { k, l })
    }
}

/// Signs `ε_i = ±1` of `J X_i = ε_i Y_i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EpsilonVector(Vec<i8>);

impl EpsilonVector {
    pub fn new(signs: Vec<i8>) -> Result<Self> {
        if signs.iter().any(|&s| s != 1 && s != -1) {
            return Err(Error::InvalidParameter("epsilon entries must be +1 or -1".into()));
        }
        Ok(Self(signs))
    }

    pub fn all_positive(m: usize) -> Self {
        Self(vec![1; m])
    }

    pub fn signs(&self) -> &[i8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Every sign pattern of length `m`.
    pub fn all_patterns(m: usize) -> Vec<Self> {
        (0..1usize << m)
            .map(|mask| Self((0..m).map(|i| if mask >> i & 1 == 1 { -1 } else { 1 }).collect()))
            .collect()
    }
}

/// Which of the conjugate families: `V` has `J X = Y`, `W` has `J X = −Y`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Branch {
    V,
    W,
}

impl Branch {
    pub fn sign(self) -> i8 {
        match self {
            Branch::V => 1,
            Branch::W => -1,
        }
    }

    pub fn from_sign(s: i8) -> Self {
        if s >= 0 {
            Branch::V
        } else {
            Branch::W
        }
    }

    /// Branch compatible with the standard lcK form `ω = z∧t + dz`:
    /// `V` on `gl(2,R)`, `W` on `u(2)`.
    pub fn canonical_for(id: &AlgebraId) -> Self {
        match id {
            AlgebraId::U2 => Branch::W,
            _ => Branch::V,
        }
    }
}

/// Family member `J(T − lZ) = kZ`, `J(kZ) = −(T − lZ)`, `J X_i = s_i Y_i`,
/// `J Y_i = −s_i X_i`, with `s_i` the branch sign (reductive case) or `ε_i`.
pub fn family_matrix<S: Scalar>(layout: Layout, delta: &DeltaParam<S>, signs: &[i8]) -> Result<Matrix<S>> {
    if delta.k.is_negligible() {
        return Err(Error::InvalidParameter("delta requires k != 0".into()));
    }
    if signs.len() != layout.planes {
        return Err(Error::InvalidParameter(format!(
            "expected {} signs, got {}",
            layout.planes,
            signs.len()
        )));
    }
    let n = layout.dim();
    let (k, l) = (delta.k.clone(), delta.l.clone());
    let mut j = Matrix::zeros(n, n);
    // JT = -(l/k) T + ((k^2 + l^2)/k) Z,  JZ = -(1/k) T + (l/k) Z
    j[(layout.t(), layout.t())] = -(l.clone() / k.clone());
    j[(layout.z(), layout.t())] = (k.clone() * k.clone() + l.clone() * l.clone()) / k.clone();
    j[(layout.t(), layout.z())] = -(S::one() / k.clone());
    j[(layout.z(), layout.z())] = l / k;
    for (i, &s) in signs.iter().enumerate() {
        let s = S::from_i64(s as i64);
        j[(layout.y(i), layout.x(i))] = s.clone();
        j[(layout.x(i), layout.y(i))] = -s;
    }
    Ok(j)
}

/// The complex structure `J_δ` (reductive algebras: branch selects the sign
/// of `J X`; Heisenberg-type algebras: `ε` selects the signs).
pub fn complex_structure<S: Scalar>(
    id: &AlgebraId,
    delta: &DeltaParam<S>,
    eps: Option<&EpsilonVector>,
    branch: Branch,
) -> Result<ComplexStructure<S>> {
    let layout = id.layout()?;
    let signs: Vec<i8> = if id.is_reductive() {
        vec![branch.sign()]
    } else {
        let eps = eps.ok_or_else(|| Error::InvalidParameter("epsilon signs required for gh".into()))?;
        if eps.len() != layout.planes {
            return Err(Error::InvalidParameter(format!(
                "expected {} epsilon signs, got {}",
                layout.planes,
                eps.len()
            )));
        }
        // The W branch is the conjugate family: all signs flipped.
        eps.signs().iter().map(|&e| e * branch.sign()).collect()
    };
    ComplexStructure::new(family_matrix(layout, delta, &signs)?)
}

/// Coefficients of `ψ` in `ω_ψ = ψ ∧ t + dψ`.
#[derive(Clone, Debug, PartialEq)]
pub enum LckCoefficients {
    /// `ψ = a x + b y + c z` on `gl(2,R)` or `u(2)`.
    Reductive { a: Q, b: Q, c: Q },
    /// `ψ = Σ a_i x_i + Σ b_i y_i + c_0 z` on `gh(2m+2)`.
    Heisenberg { a: Vec<Q>, b: Vec<Q>, c0: Q },
}

impl LckCoefficients {
    pub fn psi_covector(&self, layout: Layout) -> Result<Vec<Q>> {
        let n = layout.dim();
        let mut v = vec![Q::from_i64(0); n];
        match self {
            LckCoefficients::Reductive { a, b, c } => {
                if layout.planes != 1 {
                    return Err(Error::InvalidParameter("(a,b,c) coefficients need a 4-dim algebra".into()));
                }
                v[layout.x(0)] = a.clone();
                v[layout.y(0)] = b.clone();
                v[layout.z()] = c.clone();
            }
            LckCoefficients::Heisenberg { a, b, c0 } => {
                if a.len() != layout.planes || b.len() != layout.planes {
                    return Err(Error::InvalidParameter(format!(
                        "expected {} a- and b-coefficients",
                        layout.planes
                    )));
                }
                for i in 0..layout.planes {
                    v[layout.x(i)] = a[i].clone();
                    v[layout.y(i)] = b[i].clone();
                }
                v[layout.z()] = c0.clone();
            }
        }
        Ok(v)
    }

    /// Parses a comma-separated list: `a,b,c` or `a_1..a_m,b_1..b_m,c_0`.
    pub fn parse(id: &AlgebraId, s: &str) -> Result<Self> {
        let vals: Vec<Q> = s.split(',').map(crate::scalar::parse_q).collect::<Result<_>>()?;
        if id.is_reductive() {
            if vals.len() != 3 {
                return Err(Error::Parse("expected a,b,c".into()));
            }
            Ok(LckCoefficients::Reductive { a: vals[0].clone(), b: vals[1].clone(), c: vals[2].clone() })
        } else {
            let m = id.planes();
            if vals.len() != 2 * m + 1 {
                return Err(Error::Parse(format!("expected {} coefficients", 2 * m + 1)));
            }
            Ok(LckCoefficients::Heisenberg {
                a: vals[..m].to_vec(),
                b: vals[m..2 * m].to_vec(),
                c0: vals[2 * m].clone(),
            })
        }
    }
}

/// `ω_ψ = ψ ∧ t + dψ`.
pub fn lck_form(g: &LieAlgebra<Q>, layout: Layout, coeffs: &LckCoefficients) -> Result<KForm<Q>> {
    let psi = KForm::from_covector(&coeffs.psi_covector(layout)?);
    let t = KForm::dual(layout.dim(), layout.t());
    Ok(psi.wedge(&t).add(&ce_differential(g, &psi)?))
}

/// Matrix of `⟨U, V⟩ = ω(JU, V)`. Symmetry is not imposed: a non-symmetric
/// result means `ω` is not `J`-compatible.
pub fn metric_matrix<S: Scalar>(omega: &KForm<S>, j: &ComplexStructure<S>) -> Matrix<S> {
    let w = omega.to_matrix();
    // ⟨e_u, e_v⟩ = Σ_a J_{au} ω_{av}  =  (Jᵀ W)_{uv}
    j.matrix().transpose().mul(&w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q, qi};

    #[test]
    fn gl2r_brackets() {
        let g = make_gl2r();
        assert_eq!(g.bracket_basis(3, 1), vec![qi(0), qi(0), qi(-1), qi(0)]);
        assert_eq!(g.bracket_basis(1, 2), g.basis_vector(3));
        assert!((0..4).all(|j| g.bracket_basis(0, j).iter().all(|x| x == &qi(0))));
    }

    #[test]
    fn u2_brackets() {
        let g = make_u2();
        assert_eq!(g.bracket_basis(1, 2), vec![qi(0), qi(0), qi(0), qi(-1)]);
    }

    #[test]
    fn gh_dims_and_center() {
        let g = make_gh(3).unwrap();
        assert_eq!(g.dim(), 8);
        let center = g.center();
        assert_eq!(center.dim(), 2);
        assert!(center.contains(&g.basis_vector(0)));
        assert!(center.contains(&g.basis_vector(7)));
        assert!(make_heisenberg(0).is_err());
        assert_eq!(make_heisenberg(2).unwrap().derived_series_length(), Some(2));
    }

    #[test]
    fn gh_psi_single_plane() {
        let alpha = q(3, 2);
        let g = make_gh_psi(0, 1, &Matrix::from_rows(vec![vec![alpha.clone()]])).unwrap();
        assert_eq!(g.bracket_basis(0, 1), vec![qi(0), qi(0), alpha.clone(), qi(0)]);
        assert_eq!(g.bracket_basis(0, 2), vec![qi(0), -alpha, qi(0), qi(0)]);
        assert_eq!(g.bracket_basis(1, 2), vec![qi(0), qi(0), qi(0), qi(1)]);
        assert!(g.check_jacobi().ok);
        assert!(g.is_unimodular());
    }

    #[test]
    fn gh_psi_zero_weights_is_gh() {
        let w = Matrix::zeros(3, 1);
        let a = make_gh_psi(1, 1, &w).unwrap();
        let b = make_gh(2).unwrap();
        assert_eq!(a.structure_tensor(), b.structure_tensor());
        assert!(make_gh_psi(1, 1, &Matrix::zeros(2, 1)).is_err());
    }

    #[test]
    fn algebra_id_parse() {
        assert_eq!("gh:3".parse::<AlgebraId>().unwrap(), AlgebraId::Gh(3));
        assert_eq!("ghpsi:1,2".parse::<AlgebraId>().unwrap(), AlgebraId::GhPsi { p: 1, q: 2 });
        assert!("sl3".parse::<AlgebraId>().is_err());
        assert_eq!(AlgebraId::Heisenberg(2).to_string(), "h:2");
    }

    #[test]
    fn family_at_delta_one() {
        let j = complex_structure(&AlgebraId::Gl2r, &DeltaParam::new(qi(1), qi(0)).unwrap(), None, Branch::V)
            .unwrap();
        let m = j.matrix();
        assert_eq!(m.column(0), vec![qi(0), qi(0), qi(0), qi(1)]);
        assert_eq!(m.column(3), vec![qi(-1), qi(0), qi(0), qi(0)]);
        assert_eq!(m.column(1), vec![qi(0), qi(0), qi(1), qi(0)]);
    }

    #[test]
    fn family_jt_formula() {
        // JT = -(l/k) T + ((k^2+l^2)/k) Z for k = 2, l = 3.
        let id = AlgebraId::Gh(2);
        let eps = EpsilonVector::new(vec![1, -1]).unwrap();
        let j = complex_structure(&id, &DeltaParam::new(qi(2), qi(3)).unwrap(), Some(&eps), Branch::V).unwrap();
        let jt = j.matrix().column(0);
        assert_eq!(jt[0], q(-3, 2));
        assert_eq!(jt[5], q(13, 2));
        assert!(DeltaParam::new(qi(0), qi(1)).is_err());
        assert!(complex_structure(&id, &DeltaParam::new(qi(1), qi(0)).unwrap(), None, Branch::V).is_err());
    }

    #[test]
    fn conjugate_branch_is_minus_j() {
        for id in [AlgebraId::Gl2r, AlgebraId::Gh(2)] {
            let eps = EpsilonVector::new(vec![1, -1]).unwrap();
            let e = if id.is_reductive() { None } else { Some(&eps) };
            let a = complex_structure(&id, &DeltaParam::new(qi(2), qi(1)).unwrap(), e, Branch::V).unwrap();
            let b = complex_structure(&id, &DeltaParam::new(qi(-2), qi(1)).unwrap(), e, Branch::W).unwrap();
            assert_eq!(a.matrix().neg(), *b.matrix());
        }
    }
}
