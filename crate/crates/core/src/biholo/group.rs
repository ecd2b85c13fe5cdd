//! Group laws of GH and GH(ψ) in complex coordinates.

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{pushforward_field, sample_rng, Family, FamilyChart, FiniteDifference};
use crate::error::{Error, Result};

/// Heisenberg × ℝ product in `(x, y, z, t)` coordinates:
/// `(x, y, z, t)(x', y', z', t') = (x + x', y + y', z + z' + x·y', t + t')`.
pub(crate) fn heisenberg_product(p: &[f64], q: &[f64], m: usize) -> Vec<f64> {
    let mut r: Vec<f64> = p.iter().zip(q).map(|(a, b)| a + b).collect();
    r[2 * m] += (0..m).map(|i| p[i] * q[m + i]).sum::<f64>();
    r
}

/// `(w, v)·(z, u) = (w + z, v + Σ ε_i w̄_i z_i + u)`; `eps = None` means all ε_i = +1.
pub fn gh_group_law(w: &[Complex64], v: Complex64, z: &[Complex64], u: Complex64, eps: Option<&[i8]>) -> (Vec<Complex64>, Complex64) {
    let herm: Complex64 = w
        .iter()
        .zip(z)
        .enumerate()
        .map(|(i, (a, b))| a.conj() * b * eps.map_or(1.0, |e| e[i] as f64))
        .sum();
    (w.iter().zip(z).map(|(a, b)| a + b).collect(), v + herm + u)
}

fn phases(weights: &[Vec<f64>], t: &[f64]) -> Vec<Complex64> {
    let q = weights.first().map_or(0, |r| r.len());
    (0..q)
        .map(|j| {
            let angle: f64 = weights.iter().zip(t).map(|(row, ti)| row[j] * ti).sum();
            Complex64::from_polar(1.0, angle)
        })
        .collect()
}

/// `(t, w)·(s, z) = (t + s, (w_j + e^{i a_j·t} z_j)_j)` on ℝ^{2p+1} ⋉ ℂ^q.
/// `weights` has one row per ℝ^{2p+1} coordinate and one column per ℂ factor.
pub fn semidirect_law(t: &[f64], w: &[Complex64], s: &[f64], z: &[Complex64], weights: &[Vec<f64>]) -> (Vec<f64>, Vec<Complex64>) {
    let ph = phases(weights, t);
    (
        t.iter().zip(s).map(|(a, b)| a + b).collect(),
        w.iter().zip(z).zip(&ph).map(|((a, b), e)| a + e * b).collect(),
    )
}

/// A point of GH(ψ) in ℂ^{m+1} = ℂ^p × ℂ^q × ℂ coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct GhPsiPoint {
    pub a: Vec<Complex64>,
    pub w: Vec<Complex64>,
    pub u: Complex64,
}

impl GhPsiPoint {
    pub fn identity(p: usize, q: usize) -> Self {
        Self { a: vec![Complex64::new(0.0, 0.0); p], w: vec![Complex64::new(0.0, 0.0); q], u: Complex64::new(0.0, 0.0) }
    }

    /// The ℝ^{2p+1} coordinate `(Re a, Im a, (Re u − ½‖(a, w)‖²)/2)`, additive under the law.
    pub fn torus_coordinate(&self) -> Vec<f64> {
        let norm: f64 = self.a.iter().chain(&self.w).map(|c| c.norm_sqr()).sum();
        let mut t: Vec<f64> = self.a.iter().map(|c| c.re).collect();
        t.extend(self.a.iter().map(|c| c.im));
        t.push((self.u.re - 0.5 * norm) / 2.0);
        t
    }

    /// `(a, w, u) ↦ (λ_a a, λ_w w, u)`.
    pub fn scale(&self, lambda: &[Complex64]) -> Self {
        let p = self.a.len();
        Self {
            a: self.a.iter().zip(lambda).map(|(c, l)| c * l).collect(),
            w: self.w.iter().zip(&lambda[p..]).map(|(c, l)| c * l).collect(),
            u: self.u,
        }
    }

    fn distance(&self, other: &Self) -> f64 {
        let d = self.a.iter().zip(&other.a).chain(self.w.iter().zip(&other.w)).map(|(x, y)| (x - y).norm());
        d.fold((self.u - other.u).norm(), f64::max)
    }

    fn magnitude(&self) -> f64 {
        self.a.iter().chain(&self.w).map(|c| c.norm()).fold(self.u.norm(), f64::max)
    }

    fn random(p: usize, q: usize, rng: &mut impl Rng) -> Self {
        let mut c = || Complex64::new(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
        Self { a: (0..p).map(|_| c()).collect(), w: (0..q).map(|_| c()).collect(), u: c() }
    }
}

/// Central extension of the semidirect law by the GH cocycle:
/// `g·h = (a + b, w + R(τ(g)) z, u + u' + ā·b + w̄·R(τ(g)) z)` with `R = diag(e^{i a_j·τ})`.
pub fn gh_psi_group_law(g: &GhPsiPoint, h: &GhPsiPoint, weights: &[Vec<f64>]) -> Result<GhPsiPoint> {
    let p = g.a.len();
    let q = g.w.len();
    if h.a.len() != p || h.w.len() != q {
        return Err(Error::DimensionMismatch { expected: p + q, got: h.a.len() + h.w.len() });
    }
    if weights.len() != 2 * p + 1 || weights.iter().any(|r| r.len() != q) {
        return Err(Error::DimensionMismatch { expected: 2 * p + 1, got: weights.len() });
    }
    let ph = phases(weights, &g.torus_coordinate());
    let rz: Vec<Complex64> = h.w.iter().zip(&ph).map(|(z, e)| e * z).collect();
    let (a, ua) = gh_group_law(&g.a, g.u, &h.a, h.u, None);
    let (w, uw) = gh_group_law(&g.w, Complex64::new(0.0, 0.0), &rz, Complex64::new(0.0, 0.0), None);
    Ok(GhPsiPoint { a, w, u: ua + uw })
}

/// `λ(g·h) = λ(g)·λ(h)` on random samples, relative tolerance 1e−12.
pub fn lambda_automorphism_check(weights: &[Vec<f64>], p: usize, lambda: &[Complex64], samples: usize, seed: u64) -> Result<bool> {
    let q = weights.first().map_or(0, |r| r.len());
    if lambda.len() != p + q {
        return Err(Error::DimensionMismatch { expected: p + q, got: lambda.len() });
    }
    for i in 0..samples {
        let mut rng = sample_rng(seed, i);
        let g = GhPsiPoint::random(p, q, &mut rng);
        let h = GhPsiPoint::random(p, q, &mut rng);
        let lhs = gh_psi_group_law(&g, &h, weights)?.scale(lambda);
        let rhs = gh_psi_group_law(&g.scale(lambda), &h.scale(lambda), weights)?;
        if lhs.distance(&rhs) > 1e-12 * lhs.magnitude().max(1.0) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GroupLawReport {
    pub gh_associativity: f64,
    pub gh_identity: f64,
    pub gh_psi_associativity: f64,
    pub gh_psi_identity: f64,
}

impl GroupLawReport {
    pub fn passes(&self, tol: f64) -> bool {
        [self.gh_associativity, self.gh_identity, self.gh_psi_associativity, self.gh_psi_identity]
            .iter()
            .all(|e| *e < tol)
    }
}

/// Relative associativity and identity errors of both laws on random triples.
pub fn check_group_laws(eps: &[i8], weights: &[Vec<f64>], p: usize, samples: usize, seed: u64) -> Result<GroupLawReport> {
    let m = eps.len();
    let q = weights.first().map_or(0, |r| r.len());
    let zero = Complex64::new(0.0, 0.0);
    let mut rep = GroupLawReport { gh_associativity: 0.0, gh_identity: 0.0, gh_psi_associativity: 0.0, gh_psi_identity: 0.0 };
    for i in 0..samples {
        let mut rng = sample_rng(seed, i);
        let mut pt = || {
            let w: Vec<Complex64> =
                (0..m).map(|_| Complex64::new(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0))).collect();
            (w, Complex64::new(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0)))
        };
        let (a, b, c) = (pt(), pt(), pt());
        let mul = |x: &(Vec<Complex64>, Complex64), y: &(Vec<Complex64>, Complex64)| gh_group_law(&x.0, x.1, &y.0, y.1, Some(eps));
        let left = mul(&mul(&a, &b), &c);
        let right = mul(&a, &mul(&b, &c));
        let dist = |x: &(Vec<Complex64>, Complex64), y: &(Vec<Complex64>, Complex64)| {
            let scale = x.0.iter().map(|c| c.norm()).fold(x.1.norm(), f64::max).max(1.0);
            x.0.iter().zip(&y.0).map(|(s, t)| (s - t).norm()).fold((x.1 - y.1).norm(), f64::max) / scale
        };
        rep.gh_associativity = rep.gh_associativity.max(dist(&left, &right));
        let e = (vec![zero; m], zero);
        rep.gh_identity = rep.gh_identity.max(dist(&mul(&e, &a), &a)).max(dist(&mul(&a, &e), &a));

        let g = GhPsiPoint::random(p, q, &mut rng);
        let h = GhPsiPoint::random(p, q, &mut rng);
        let k = GhPsiPoint::random(p, q, &mut rng);
        let left = gh_psi_group_law(&gh_psi_group_law(&g, &h, weights)?, &k, weights)?;
        let right = gh_psi_group_law(&g, &gh_psi_group_law(&h, &k, weights)?, weights)?;
        rep.gh_psi_associativity = rep.gh_psi_associativity.max(left.distance(&right) / left.magnitude().max(1.0));
        let e = GhPsiPoint::identity(p, q);
        let l1 = gh_psi_group_law(&e, &g, weights)?.distance(&g);
        let l2 = gh_psi_group_law(&g, &e, weights)?.distance(&g);
        rep.gh_psi_identity = rep.gh_psi_identity.max(l1.max(l2) / g.magnitude().max(1.0));
    }
    Ok(rep)
}

fn split(v: &[f64]) -> (Vec<Complex64>, Complex64) {
    let c: Vec<Complex64> = v.chunks(2).map(|p| Complex64::new(p[0], p[1])).collect();
    let (u, w) = c.split_last().expect("nonempty");
    (w.to_vec(), *u)
}

fn join(w: &[Complex64], u: Complex64) -> Vec<f64> {
    w.iter().chain(std::iter::once(&u)).flat_map(|c| [c.re, c.im]).collect()
}

/// Max of `|Φ(g·h) − Φ(g)·Φ(h)|` for the ε-holomorphic GH map.
pub fn check_gh_homomorphism(eps: &[i8], delta: Complex64, samples: usize, seed: u64) -> Result<f64> {
    let chart = FamilyChart::new(Family::Gh { eps: eps.to_vec() }, delta)?;
    let m = eps.len();
    let mut worst: f64 = 0.0;
    for i in 0..samples {
        let mut rng = sample_rng(seed, i);
        let g = chart.sample(&mut rng);
        let h = chart.sample(&mut rng);
        let lhs = chart.eval(&heisenberg_product(&g, &h, m))?;
        let (wg, ug) = split(&chart.eval(&g)?);
        let (wh, uh) = split(&chart.eval(&h)?);
        let (w, u) = gh_group_law(&wg, ug, &wh, uh, Some(eps));
        let rhs = join(&w, u);
        worst = worst.max(lhs.iter().zip(&rhs).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max));
    }
    Ok(worst)
}

/// Left translation in ℂ^{m+1} carries each pushed-forward field at the identity
/// to the pushed-forward field at `g`. Returns the max residual.
pub fn check_left_invariance(eps: &[i8], delta: Complex64, samples: usize, seed: u64, fd: FiniteDifference) -> Result<f64> {
    let chart = FamilyChart::new(Family::Gh { eps: eps.to_vec() }, delta)?;
    let n = chart.family.field_names().len();
    let origin = vec![0.0; chart.family.source_dim()];
    let at_identity: Vec<Vec<f64>> = (0..n)
        .map(|f| pushforward_field(|q| chart.eval(q), |q, s| chart.flow(f, q, s), &origin, fd, &[]))
        .collect::<Result<_>>()?;
    let e_image = chart.eval(&origin)?;
    let per: Vec<f64> = (0..samples)
        .into_par_iter()
        .map(|i| -> Result<f64> {
            let g = chart.sample(&mut sample_rng(seed, i));
            let (wg, ug) = split(&chart.eval(&g)?);
            let mut worst: f64 = 0.0;
            for (f, v) in at_identity.iter().enumerate() {
                let translate = |q: &[f64]| -> Result<Vec<f64>> {
                    let (w, u) = split(q);
                    let (w, u) = gh_group_law(&wg, ug, &w, u, Some(eps));
                    Ok(join(&w, u))
                };
                let line = |q: &[f64], s: f64| q.iter().zip(v).map(|(a, b)| a + s * b).collect::<Vec<f64>>();
                let moved = pushforward_field(translate, line, &e_image, fd, &[])?;
                let direct = pushforward_field(|q| chart.eval(q), |q, s| chart.flow(f, q, s), &g, fd, &[])?;
                worst = worst.max(moved.iter().zip(&direct).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max));
            }
            Ok(worst)
        })
        .collect::<Result<_>>()?;
    Ok(per.into_iter().fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn gh_law_examples() {
        let zero = c(0.0, 0.0);
        let z = vec![c(1.5, -2.0)];
        assert_eq!(gh_group_law(&[zero], zero, &z, c(0.5, 1.0), None), (z.clone(), c(0.5, 1.0)));
        assert_eq!(gh_group_law(&[c(1.0, 0.0)], zero, &[c(0.0, 1.0)], zero, None), (vec![c(1.0, 1.0)], c(0.0, 1.0)));
    }

    #[test]
    fn semidirect_with_zero_translation_is_plain_sum() {
        let a = vec![vec![1.0, -2.0], vec![0.5, 3.0], vec![2.0, 1.0]];
        let (t, w) = semidirect_law(&[0.0; 3], &[c(1.0, 2.0), c(0.0, 1.0)], &[0.0; 3], &[c(-1.0, 0.5), c(2.0, 2.0)], &a);
        assert_eq!(t, vec![0.0; 3]);
        assert_eq!(w, vec![c(0.0, 2.5), c(2.0, 3.0)]);
    }

    #[test]
    fn laws_are_associative() {
        let a = vec![vec![1.0, -2.0], vec![0.5, 3.0], vec![2.0, 1.0]];
        let r = check_group_laws(&[1, -1, 1], &a, 1, 200, 4).unwrap();
        assert!(r.passes(1e-12), "{r:?}");
    }

    #[test]
    fn lambda_examples() {
        let a = vec![vec![1.0, -2.0]];
        assert!(lambda_automorphism_check(&a, 0, &[c(1.0, 0.0), c(1.0, 0.0)], 50, 1).unwrap());
        assert!(lambda_automorphism_check(&a, 0, &[c(0.0, 1.0), c(-1.0, 0.0)], 50, 1).unwrap());
        assert!(!lambda_automorphism_check(&a, 0, &[c(2.0, 0.0), c(1.0, 0.0)], 50, 1).unwrap());
        let b = vec![vec![1.0], vec![0.0], vec![-1.0]];
        let unit = Complex64::from_polar(1.0, 0.7);
        assert!(lambda_automorphism_check(&b, 1, &[c(1.0, 0.0), unit], 50, 1).unwrap());
        // rotating an ℂ^p coordinate moves the torus coordinate the weights see
        assert!(!lambda_automorphism_check(&b, 1, &[unit, c(1.0, 0.0)], 50, 1).unwrap());
    }

    #[test]
    fn gh_map_is_a_homomorphism() {
        for eps in [vec![1], vec![1, -1], vec![-1, -1, 1]] {
            assert!(check_gh_homomorphism(&eps, c(2.0, -1.0), 50, 3).unwrap() < 1e-12 * 100.0);
        }
    }

    #[test]
    fn fields_are_left_invariant() {
        let r = check_left_invariance(&[1, -1], c(1.0, 1.0), 30, 8, FiniteDifference::default()).unwrap();
        assert!(r < 1e-6, "{r}");
    }
}
