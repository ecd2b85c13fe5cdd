//! Numerical rediscovery of the complex structures on the family algebras.
//!
//! Gauss–Newton on `{J² + I = 0, N_J = 0}` from randomized seeds, then each
//! solution is brought to normal form by an explicit automorphism and compared
//! with the family member carrying the extracted parameters.

use nalgebra::DMatrix;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::LieAlgebra;
use crate::biholo::sample_rng;
use crate::catalog::{complex_structure, AlgebraId, Branch, DeltaParam, EpsilonVector, Layout};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SearchConfig {
    pub seeds: usize,
    pub newton_max_iter: usize,
    pub residual_tol: f64,
    pub match_tol: f64,
    pub rng_seed: u64,
    /// Frobenius distance below which two solutions are the same.
    pub dedup_tol: f64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self { seeds: 200, newton_max_iter: 100, residual_tol: 1e-10, match_tol: 1e-7, rng_seed: 42, dedup_tol: 1e-4 }
    }
}

impl SearchConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.residual_tol > 0.0 && self.match_tol > 0.0 && self.dedup_tol > 0.0) {
            return Err(Error::InvalidParameter("tolerances must be positive".into()));
        }
        Ok(())
    }
}

/// A converged Newton solution.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Solution {
    pub seed_index: usize,
    /// Row-major entries of J.
    pub matrix: Vec<f64>,
    pub residual: f64,
    pub iterations: usize,
}

impl Solution {
    pub fn to_matrix(&self) -> Matrix<f64> {
        let n = (self.matrix.len() as f64).sqrt().round() as usize;
        Matrix::from_fn(n, n, |r, c| self.matrix[r * n + c])
    }
}

struct System {
    n: usize,
    c: Vec<f64>,
}

impl System {
    fn new(g: &LieAlgebra<f64>) -> Self {
        let n = g.dim();
        let mut c = vec![0.0; n * n * n];
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    c[(i * n + j) * n + k] = *g.c(i, j, k);
                }
            }
        }
        Self { n, c }
    }

    fn bracket(&self, u: &[f64], v: &[f64]) -> Vec<f64> {
        let n = self.n;
        let mut out = vec![0.0; n];
        for i in 0..n {
            if u[i] == 0.0 {
                continue;
            }
            for j in 0..n {
                let s = u[i] * v[j];
                if s == 0.0 {
                    continue;
                }
                let base = (i * n + j) * n;
                for k in 0..n {
                    out[k] += s * self.c[base + k];
                }
            }
        }
        out
    }

    fn apply(&self, j: &[f64], v: &[f64]) -> Vec<f64> {
        let n = self.n;
        (0..n).map(|r| (0..n).map(|c| j[r * n + c] * v[c]).sum()).collect()
    }

    fn col(&self, j: &[f64], c: usize) -> Vec<f64> {
        (0..self.n).map(|r| j[r * self.n + c]).collect()
    }

    fn unit(&self, i: usize) -> Vec<f64> {
        let mut e = vec![0.0; self.n];
        e[i] = 1.0;
        e
    }

    fn residual_len(&self) -> usize {
        let n = self.n;
        n * n + n * n * (n - 1) / 2
    }

    fn residual(&self, j: &[f64]) -> Vec<f64> {
        let n = self.n;
        let mut r = Vec::with_capacity(self.residual_len());
        for a in 0..n {
            for b in 0..n {
                let s: f64 = (0..n).map(|k| j[a * n + k] * j[k * n + b]).sum();
                r.push(s + if a == b { 1.0 } else { 0.0 });
            }
        }
        for a in 0..n {
            for b in a + 1..n {
                let (ea, eb) = (self.unit(a), self.unit(b));
                let (ja, jb) = (self.col(j, a), self.col(j, b));
                let t1 = self.bracket(&ja, &jb);
                let t2 = self.bracket(&ea, &eb);
                let t3 = self.apply(j, &self.bracket(&ea, &jb));
                let t4 = self.apply(j, &self.bracket(&ja, &eb));
                r.extend((0..n).map(|k| t1[k] - t2[k] - t3[k] - t4[k]));
            }
        }
        r
    }

    /// Analytic Jacobian of [`Self::residual`] with respect to the row-major entries of J.
    fn jacobian(&self, j: &[f64]) -> DMatrix<f64> {
        let n = self.n;
        let mut jac = DMatrix::zeros(self.residual_len(), n * n);
        let cols: Vec<Vec<f64>> = (0..n).map(|c| self.col(j, c)).collect();
        for p in 0..n {
            for q in 0..n {
                let var = p * n + q;
                // d(J²)_{ab} / dJ_{pq} = δ_{ap} J_{qb} + J_{ap} δ_{qb}
                for b in 0..n {
                    jac[(p * n + b, var)] += j[q * n + b];
                }
                for a in 0..n {
                    jac[(a * n + q, var)] += j[a * n + p];
                }
                // E = E_pq: E e_i = δ_iq e_p
                let ep = self.unit(p);
                let e_apply = |v: &[f64]| -> Vec<f64> {
                    let mut out = vec![0.0; n];
                    out[p] = v[q];
                    out
                };
                let mut row = n * n;
                for a in 0..n {
                    for b in a + 1..n {
                        let (ea, eb) = (self.unit(a), self.unit(b));
                        let (ja, jb) = (&cols[a], &cols[b]);
                        let zero = vec![0.0; n];
                        let ea_e = if a == q { &ep } else { &zero };
                        let eb_e = if b == q { &ep } else { &zero };
                        let mut d = vec![0.0; n];
                        let add = |d: &mut Vec<f64>, v: Vec<f64>, s: f64| d.iter_mut().zip(v).for_each(|(x, y)| *x += s * y);
                        add(&mut d, self.bracket(ea_e, jb), 1.0);
                        add(&mut d, self.bracket(ja, eb_e), 1.0);
                        add(&mut d, e_apply(&self.bracket(&ea, jb)), -1.0);
                        add(&mut d, self.apply(j, &self.bracket(&ea, eb_e)), -1.0);
                        add(&mut d, e_apply(&self.bracket(ja, &eb)), -1.0);
                        add(&mut d, self.apply(j, &self.bracket(ea_e, &eb)), -1.0);
                        for (k, v) in d.into_iter().enumerate() {
                            jac[(row + k, var)] = v;
                        }
                        row += n;
                    }
                }
            }
        }
        jac
    }
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

fn norm2(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Random seed `J₀ = P J_ref P⁻¹`: `J_ref` a block rotation with random block
/// signs, `P` the orthogonal polar factor of `I + S` (S skew) times a positive diagonal.
fn seed_matrix(n: usize, rng: &mut impl Rng) -> DMatrix<f64> {
    let mut jref = DMatrix::zeros(n, n);
    for b in 0..n / 2 {
        let s = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
        jref[(2 * b + 1, 2 * b)] = s;
        jref[(2 * b, 2 * b + 1)] = -s;
    }
    let mut s = DMatrix::zeros(n, n);
    for r in 0..n {
        for c in r + 1..n {
            let v = rng.gen_range(-1.5..1.5);
            s[(r, c)] = v;
            s[(c, r)] = -v;
        }
    }
    let svd = (DMatrix::identity(n, n) + s).svd(true, true);
    let q = svd.u.expect("u requested") * svd.v_t.expect("v requested");
    let d = DMatrix::from_diagonal(&nalgebra::DVector::from_fn(n, |_, _| rng.gen_range(-0.5f64..0.5).exp()));
    let p = q * d;
    let pinv = p.clone().try_inverse().expect("orthogonal times positive diagonal is invertible");
    p * jref * pinv
}

fn newton(sys: &System, mut x: Vec<f64>, cfg: &SearchConfig) -> Option<(Vec<f64>, f64, usize)> {
    let mut r = sys.residual(&x);
    let mut norm = norm2(&r);
    let mut accepted: Vec<f64> = vec![norm];
    for it in 0..cfg.newton_max_iter {
        if max_abs(&r) < cfg.residual_tol {
            return Some((x, max_abs(&r), it));
        }
        let jac = sys.jacobian(&x);
        let rhs = DMatrix::from_column_slice(r.len(), 1, &r);
        let step = jac.svd(true, true).solve(&rhs, 1e-12).ok()?;
        let mut t = 1.0;
        let mut improved = None;
        for _ in 0..40 {
            let trial: Vec<f64> = x.iter().zip(step.iter()).map(|(a, d)| a - t * d).collect();
            let rt = sys.residual(&trial);
            let nt = norm2(&rt);
            if nt.is_finite() && nt < norm {
                improved = Some((trial, rt, nt));
                break;
            }
            t *= 0.5;
        }
        let (trial, rt, nt) = improved?;
        x = trial;
        r = rt;
        norm = nt;
        accepted.push(norm);
        if max_abs(&x) > 1e6 {
            return None;
        }
    }
    let ok = max_abs(&r) < cfg.residual_tol && accepted.windows(2).rev().take(3).all(|w| w[1] < w[0]);
    ok.then(|| {
        let res = max_abs(&r);
        (x, res, cfg.newton_max_iter)
    })
}

/// Runs Gauss–Newton from `cfg.seeds` random seeds and returns the
/// deduplicated converged solutions, in seed order.
pub fn solve_complex_structures(g: &LieAlgebra<f64>, cfg: &SearchConfig) -> Result<Vec<Solution>> {
    cfg.validate()?;
    let n = g.dim();
    if n % 2 != 0 || n == 0 {
        return Err(Error::InvalidParameter(format!("dimension {n} is not even")));
    }
    let sys = System::new(g);
    let raw: Vec<Option<Solution>> = (0..cfg.seeds)
        .into_par_iter()
        .map(|i| {
            let mut rng = sample_rng(cfg.rng_seed, i);
            let j0 = seed_matrix(n, &mut rng);
            let x0: Vec<f64> = (0..n * n).map(|k| j0[(k / n, k % n)]).collect();
            newton(&sys, x0, cfg).map(|(x, residual, iterations)| Solution { seed_index: i, matrix: x, residual, iterations })
        })
        .collect();
    let mut out: Vec<Solution> = Vec::new();
    for s in raw.into_iter().flatten() {
        let dup = out.iter().any(|o| norm2(&o.matrix.iter().zip(&s.matrix).map(|(a, b)| a - b).collect::<Vec<_>>()) < cfg.dedup_tol);
        if !dup {
            out.push(s);
        }
    }
    Ok(out)
}

/// Parameters of a family member.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExtractedDelta<S> {
    pub k: S,
    pub l: S,
    pub branch: Branch,
    /// Plane signs (gh only).
    pub eps: Option<EpsilonVector>,
}

impl<S: Scalar> ExtractedDelta<S> {
    /// Rebuilds the family member these parameters name.
    pub fn complex_structure(&self, id: &AlgebraId) -> Result<Matrix<S>> {
        let delta = DeltaParam::new(self.k.clone(), self.l.clone())?;
        Ok(complex_structure(id, &delta, self.eps.as_ref(), self.branch)?.matrix().clone())
    }
}

fn close<S: Scalar>(a: &S, b: &S, tol: f64) -> bool {
    let d = a.clone() - b.clone();
    if S::EXACT {
        d.is_negligible()
    } else {
        d.to_f64().abs() <= tol
    }
}

/// Reads `(k, l)` and the plane signs off a matrix in family form:
/// `JZ = −(1/k)T + (l/k)Z`, `J X_i = s_i Y_i`, every other entry zero.
pub fn extract_delta<S: Scalar>(id: &AlgebraId, j: &Matrix<S>, tol: f64) -> Result<ExtractedDelta<S>> {
    let layout = id.layout()?;
    let n = layout.dim();
    if j.rows() != n || j.cols() != n {
        return Err(Error::DimensionMismatch { expected: n, got: j.rows() });
    }
    let absent = |what: String| Error::InvalidComplexStructure(format!("family block structure absent: {what}"));
    let (t, z) = (layout.t(), layout.z());
    let mut signs = Vec::with_capacity(layout.planes);
    for i in 0..layout.planes {
        let s = j[(layout.y(i), layout.x(i))].clone();
        let sign = if close(&s, &S::one(), tol) {
            1
        } else if close(&s, &-S::one(), tol) {
            -1
        } else {
            return Err(absent(format!("J X{} has Y{} coefficient {:?}", i + 1, i + 1, s)));
        };
        if !close(&j[(layout.x(i), layout.y(i))], &S::from_i64(-sign as i64), tol) {
            return Err(absent(format!("J Y{} is not -s X{}", i + 1, i + 1)));
        }
        signs.push(sign);
    }
    for r in 0..n {
        for c in 0..n {
            let in_center = (r == t || r == z) && (c == t || c == z);
            let in_plane = (0..layout.planes).any(|i| {
                (r == layout.y(i) && c == layout.x(i)) || (r == layout.x(i) && c == layout.y(i))
            });
            if !in_center && !in_plane && !close(&j[(r, c)], &S::zero(), tol) {
                return Err(absent(format!("entry ({r}, {c}) = {:?}", j[(r, c)])));
            }
        }
    }
    let p = j[(t, z)].clone();
    if p.is_negligible() || (!S::EXACT && p.to_f64().abs() <= tol) {
        return Err(absent("JZ has no T component".into()));
    }
    let k = -(S::one() / p);
    let l = k.clone() * j[(z, z)].clone();
    let (branch, eps) = if id.is_reductive() {
        (Branch::from_sign(signs[0]), None)
    } else {
        (Branch::V, Some(EpsilonVector::new(signs)?))
    };
    let out = ExtractedDelta { k, l, branch, eps };
    let rebuilt = out.complex_structure(id)?;
    for r in 0..n {
        for c in 0..n {
            if !close(&rebuilt[(r, c)], &j[(r, c)], tol) {
                return Err(absent(format!("center block entry ({r}, {c}) is inconsistent with J^2 = -I")));
            }
        }
    }
    Ok(out)
}

/// A solution brought to family form: `J = B J_δ B⁻¹` with `B` an automorphism.
#[derive(Debug, Clone, PartialEq)]
pub struct Canonical {
    pub params: ExtractedDelta<f64>,
    pub automorphism: Matrix<f64>,
    /// Max entry of `J − B J_δ B⁻¹`.
    pub distance: f64,
    /// Max structure-constant error of `B`.
    pub automorphism_defect: f64,
}

fn to_dm(m: &Matrix<f64>) -> DMatrix<f64> {
    DMatrix::from_fn(m.rows(), m.cols(), |r, c| m[(r, c)])
}

fn from_dm(m: &DMatrix<f64>) -> Matrix<f64> {
    Matrix::from_fn(m.nrows(), m.ncols(), |r, c| m[(r, c)])
}

fn automorphism_defect(g: &LieAlgebra<f64>, b: &DMatrix<f64>) -> Option<f64> {
    let n = g.dim();
    let binv = b.clone().try_inverse()?;
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for jj in i + 1..n {
            let u: Vec<f64> = b.column(i).iter().copied().collect();
            let v: Vec<f64> = b.column(jj).iter().copied().collect();
            let br = g.bracket(&u, &v).ok()?;
            let back = &binv * nalgebra::DVector::from_vec(br);
            for k in 0..n {
                worst = worst.max((back[k] - g.c(i, jj, k)).abs());
            }
        }
    }
    Some(worst)
}

fn column_basis(n: usize, cols: &[Vec<f64>]) -> DMatrix<f64> {
    DMatrix::from_fn(n, cols.len(), |r, c| cols[c][r])
}

/// Brings an approximate complex structure on a family algebra to family form.
pub fn canonicalize(id: &AlgebraId, g: &LieAlgebra<f64>, j: &Matrix<f64>, tol: f64) -> Result<Canonical> {
    let layout = id.layout()?;
    let n = layout.dim();
    if g.dim() != n || j.rows() != n {
        return Err(Error::DimensionMismatch { expected: n, got: j.rows() });
    }
    let jd = to_dm(j);
    let basis = if id.is_reductive() { reductive_basis(g, layout, &jd, tol)? } else { heisenberg_basis(g, layout, &jd, tol)? };
    let defect = automorphism_defect(g, &basis).ok_or_else(|| Error::InvalidComplexStructure("singular basis change".into()))?;
    if defect > tol.max(1e-8) {
        return Err(Error::InvalidComplexStructure(format!("basis change is not an automorphism (defect {defect:.3e})")));
    }
    let binv = basis.clone().try_inverse().ok_or_else(|| Error::InvalidComplexStructure("singular basis change".into()))?;
    let normal = &binv * &jd * &basis;
    let params = extract_delta(id, &from_dm(&normal), tol.max(1e-8).sqrt())?;
    let family = to_dm(&params.complex_structure(id)?);
    let rebuilt = &basis * family * &binv;
    let distance = (&rebuilt - &jd).abs().max();
    Ok(Canonical { params, automorphism: from_dm(&basis), distance, automorphism_defect: defect })
}

/// `(T, X', Y', ρ)` with `ρ ∝ JT − (JT)_T T` normalized to the Killing length of Z.
fn reductive_basis(g: &LieAlgebra<f64>, layout: Layout, j: &DMatrix<f64>, tol: f64) -> Result<DMatrix<f64>> {
    let n = layout.dim();
    let (t, x, y, z) = (layout.t(), layout.x(0), layout.y(0), layout.z());
    let fail = |m: &str| Error::InvalidComplexStructure(m.to_string());
    let mut w: Vec<f64> = j.column(t).iter().copied().collect();
    w[t] = 0.0;
    let ad_w = to_dm(&g.ad(&w)?);
    let ad_z = to_dm(&g.ad_basis(z));
    let ref_len = -(&ad_z * &ad_z).trace();
    let mu2 = -(&ad_w * &ad_w).trace() / ref_len;
    if mu2 <= tol {
        return Err(fail("derived part of JT is not elliptic"));
    }
    let rho: Vec<f64> = w.iter().map(|v| v / mu2.sqrt()).collect();
    let ad_rho = to_dm(&g.ad(&rho)?);
    let x0 = (0..n)
        .map(|i| ad_rho.column(i).iter().copied().collect::<Vec<f64>>())
        .max_by(|a, b| norm2(a).total_cmp(&norm2(b)))
        .expect("nonempty");
    let beta = *g.c(z, x, y);
    let gamma = *g.c(x, y, z);
    let y0: Vec<f64> = g.bracket(&rho, &x0)?.iter().map(|v| v / beta).collect();
    let br = g.bracket(&x0, &y0)?;
    let lambda = br.iter().zip(&rho).map(|(a, b)| a * b).sum::<f64>() / rho.iter().map(|v| v * v).sum::<f64>();
    let s2 = gamma / lambda;
    if !(s2 > 0.0) {
        return Err(fail("plane normalization has the wrong sign"));
    }
    let s = s2.sqrt();
    let mut cols = vec![vec![0.0; n]; n];
    cols[t][t] = 1.0;
    cols[x] = x0.iter().map(|v| v * s).collect();
    cols[y] = y0.iter().map(|v| v * s).collect();
    cols[z] = rho;
    Ok(column_basis(n, &cols))
}

/// `(T, X'_i, ε_i J X'_i, Z)` from Gram–Schmidt for `h(u, v) = ω_V(u, J̄ v)`.
fn heisenberg_basis(g: &LieAlgebra<f64>, layout: Layout, j: &DMatrix<f64>, tol: f64) -> Result<DMatrix<f64>> {
    let n = layout.dim();
    let m = layout.planes;
    let (t, z) = (layout.t(), layout.z());
    let fail = |m: String| Error::InvalidComplexStructure(m);
    let v_idx: Vec<usize> = (0..m).map(|i| layout.x(i)).chain((0..m).map(|i| layout.y(i))).collect();
    for &c in &[t, z] {
        if v_idx.iter().any(|&r| j[(r, c)].abs() > tol.max(1e-8).sqrt()) {
            return Err(fail("center is not J-invariant".into()));
        }
    }
    let omega = |u: &[f64], v: &[f64]| -> f64 { g.bracket(u, v).map(|b| b[z]).unwrap_or(f64::NAN) };
    let jbar = |u: &[f64]| -> Vec<f64> {
        let mut v: Vec<f64> = (0..n).map(|r| (0..n).map(|c| j[(r, c)] * u[c]).sum()).collect();
        v[t] = 0.0;
        v[z] = 0.0;
        v
    };
    let h = |u: &[f64], v: &[f64]| omega(u, &jbar(v));
    let mut span: Vec<Vec<f64>> = v_idx
        .iter()
        .map(|&i| {
            let mut e = vec![0.0; n];
            e[i] = 1.0;
            e
        })
        .collect();
    let mut planes: Vec<(i8, Vec<f64>)> = Vec::new();
    while !span.is_empty() {
        let mut cands = span.clone();
        for a in 0..span.len() {
            for b in a + 1..span.len() {
                cands.push(span[a].iter().zip(&span[b]).map(|(p, q)| p + q).collect());
            }
        }
        let u = cands
            .into_iter()
            .max_by(|a, b| h(a, a).abs().total_cmp(&h(b, b).abs()))
            .expect("nonempty");
        let hu = h(&u, &u);
        if hu.abs() <= tol {
            return Err(fail("h is degenerate on a J-invariant subspace".into()));
        }
        let eps: i8 = if hu > 0.0 { 1 } else { -1 };
        let u: Vec<f64> = u.iter().map(|v| v / hu.abs().sqrt()).collect();
        let ju = jbar(&u);
        // padded to square so the SVD returns a full V
        let rows = span.len().max(2);
        let coeffs = DMatrix::from_fn(rows, span.len(), |r, c| match r {
            0 => h(&span[c], &u),
            1 => h(&span[c], &ju),
            _ => 0.0,
        });
        let svd = coeffs.svd(false, true);
        let vt = svd.v_t.expect("v requested");
        let rank = svd.singular_values.iter().filter(|s| **s > tol.max(1e-12)).count();
        span = (rank..span.len())
            .map(|r| (0..n).map(|k| (0..span.len()).map(|c| vt[(r, c)] * span[c][k]).sum()).collect())
            .collect();
        planes.push((eps, u));
        if planes.len() > m {
            return Err(fail("too many planes".into()));
        }
    }
    if planes.len() != m {
        return Err(fail("Gram-Schmidt did not split V into planes".into()));
    }
    planes.sort_by_key(|(e, _)| -e);
    let mut cols = vec![vec![0.0; n]; n];
    cols[t][t] = 1.0;
    cols[z][z] = 1.0;
    for (i, (eps, u)) in planes.iter().enumerate() {
        let ju: Vec<f64> = (0..n).map(|r| (0..n).map(|c| j[(r, c)] * u[c]).sum::<f64>() * *eps as f64).collect();
        cols[layout.x(i)] = u.clone();
        cols[layout.y(i)] = ju;
    }
    Ok(column_basis(n, &cols))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MatchRecord {
    pub seed_index: usize,
    pub k: f64,
    pub l: f64,
    pub branch: Branch,
    pub eps: Option<Vec<i8>>,
    pub residual: f64,
    pub distance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UnmatchedRecord {
    pub seed_index: usize,
    pub matrix: Vec<f64>,
    pub residual: f64,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub algebra: String,
    pub seeds: usize,
    pub solutions: usize,
    pub matched: Vec<MatchRecord>,
    pub unmatched: Vec<UnmatchedRecord>,
    /// Solutions with |k| < 1e−6, outside the family by definition.
    pub flagged_k_zero: Vec<MatchRecord>,
}

impl VerificationReport {
    pub fn passes(&self) -> bool {
        self.unmatched.is_empty()
    }
}

/// Solve, canonicalize and rebuild: every solution must equal `B J_δ B⁻¹`
/// within `match_tol` for an automorphism `B`.
pub fn verify_classification(id: &AlgebraId, cfg: &SearchConfig) -> Result<VerificationReport> {
    let g = id.build()?.to_f64();
    let sols = solve_complex_structures(&g, cfg)?;
    let mut rep = VerificationReport {
        algebra: id.to_string(),
        seeds: cfg.seeds,
        solutions: sols.len(),
        matched: Vec::new(),
        unmatched: Vec::new(),
        flagged_k_zero: Vec::new(),
    };
    let outcomes: Vec<Result<Canonical>> = sols.par_iter().map(|s| canonicalize(id, &g, &s.to_matrix(), cfg.match_tol)).collect();
    for (s, out) in sols.iter().zip(outcomes) {
        match out {
            Ok(c) if c.distance < cfg.match_tol => {
                let rec = MatchRecord {
                    seed_index: s.seed_index,
                    k: c.params.k,
                    l: c.params.l,
                    branch: c.params.branch,
                    eps: c.params.eps.as_ref().map(|e| e.signs().to_vec()),
                    residual: s.residual,
                    distance: c.distance,
                };
                if rec.k.abs() < 1e-6 {
                    rep.flagged_k_zero.push(rec);
                } else {
                    rep.matched.push(rec);
                }
            }
            Ok(c) => rep.unmatched.push(UnmatchedRecord {
                seed_index: s.seed_index,
                matrix: s.matrix.clone(),
                residual: s.residual,
                reason: format!("rebuilt family member differs by {:.3e}", c.distance),
            }),
            Err(e) => rep.unmatched.push(UnmatchedRecord {
                seed_index: s.seed_index,
                matrix: s.matrix.clone(),
                residual: s.residual,
                reason: e.to_string(),
            }),
        }
    }
    Ok(rep)
}
