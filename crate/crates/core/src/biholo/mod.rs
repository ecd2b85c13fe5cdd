//! Chart-level numerics: the maps Φ, Φ_δ, pushed-forward left-invariant fields,
//! group laws in complex coordinates, and finite-difference compatibility checks.
//!
//! Everything here is `f64`. Left-invariant fields are never hand-coded: each is
//! the derivative of `s ↦ map(p · exp(sX))`, and the closed-form field formulas are
//! used only as oracles.

mod group;
mod maps;

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};

pub use group::{
    check_gh_homomorphism, check_group_laws, check_left_invariance, gh_group_law, gh_psi_group_law, lambda_automorphism_check,
    semidirect_law, GhPsiPoint, GroupLawReport,
};
pub use maps::{
    gl2_basis, hxc_coords, iwasawa_gl2, phi_delta_gh, phi_delta_gh_signed, phi_delta_su2, phi_delta_sl2, phi_gl2, rotation,
    su2_basis, su2_matrix, su2_point, wrap_angle, CMat2, Iwasawa, Mat2,
};

/// Default finite-difference step.
pub const DEFAULT_STEP: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Chart {
    /// `(x, y, r, θ)` on ℍ × ℂ*.
    UpperHalfPlaneCstar,
    /// `(Re z₁, Im z₁, Re z₂, Im z₂)` on ℂ² ∖ {0}.
    PuncturedC2,
    /// Interleaved real and imaginary parts on ℂⁿ.
    Complex(usize),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChartPoint {
    pub chart: Chart,
    pub coords: Vec<f64>,
}

impl ChartPoint {
    pub fn new(chart: Chart, coords: Vec<f64>) -> Result<Self> {
        let n = match chart {
            Chart::UpperHalfPlaneCstar | Chart::PuncturedC2 => 4,
            Chart::Complex(n) => 2 * n,
        };
        if coords.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: coords.len() });
        }
        match chart {
            Chart::UpperHalfPlaneCstar if !(coords[1] > 0.0 && coords[2] > 0.0) => {
                return Err(Error::OutsideChart("need y > 0 and r > 0".into()))
            }
            Chart::PuncturedC2 if coords.iter().all(|c| *c == 0.0) => {
                return Err(Error::OutsideChart("(z1, z2) = 0".into()))
            }
            _ => {}
        }
        Ok(Self { chart, coords })
    }

    /// Coordinates that are angles, differenced modulo 2π.
    pub fn periodic(&self) -> &'static [usize] {
        match self.chart {
            Chart::UpperHalfPlaneCstar => &[3],
            _ => &[],
        }
    }

    /// The canonical complex structure of the target chart applied to `v` at this point.
    pub fn apply_j(&self, v: &[f64]) -> Vec<f64> {
        match self.chart {
            Chart::UpperHalfPlaneCstar => {
                let r = self.coords[2];
                vec![-v[1], v[0], -r * v[3], v[2] / r]
            }
            _ => v.chunks(2).flat_map(|p| [-p[1], p[0]]).collect(),
        }
    }
}

/// Finite-difference scheme for pushforwards.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FiniteDifference {
    pub step: f64,
    pub richardson: bool,
}

impl Default for FiniteDifference {
    fn default() -> Self {
        Self { step: DEFAULT_STEP, richardson: false }
    }
}

/// Pushforward of the field whose flow through `p` is `flow(p, s)` under `map`.
/// Angle coordinates listed in `periodic` are unwrapped before differencing.
pub fn pushforward_field<M, F>(map: M, flow: F, p: &[f64], fd: FiniteDifference, periodic: &[usize]) -> Result<Vec<f64>>
where
    M: Fn(&[f64]) -> Result<Vec<f64>>,
    F: Fn(&[f64], f64) -> Vec<f64>,
{
    let central = |h: f64| -> Result<Vec<f64>> {
        let plus = map(&flow(p, h))?;
        let minus = map(&flow(p, -h))?;
        Ok(plus
            .iter()
            .zip(&minus)
            .enumerate()
            .map(|(i, (a, b))| {
                let d = if periodic.contains(&i) { wrap_angle(a - b) } else { a - b };
                d / (2.0 * h)
            })
            .collect())
    };
    let coarse = central(fd.step)?;
    if !fd.richardson {
        return Ok(coarse);
    }
    let fine = central(fd.step / 2.0)?;
    Ok(fine.iter().zip(&coarse).map(|(f, c)| (4.0 * f - c) / 3.0).collect())
}

/// Jacobian of `map` at `p` by central differences along coordinate directions.
pub fn jacobian<M>(map: M, p: &[f64], fd: FiniteDifference, periodic: &[usize]) -> Result<Vec<Vec<f64>>>
where
    M: Fn(&[f64]) -> Result<Vec<f64>>,
{
    (0..p.len())
        .map(|j| {
            pushforward_field(
                &map,
                |q: &[f64], s: f64| {
                    let mut q = q.to_vec();
                    q[j] += s;
                    q
                },
                p,
                fd,
                periodic,
            )
        })
        .collect()
}

/// Families of chart maps onto complex manifolds.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum Family {
    /// Φ on GL⁺(2,ℝ).
    Gl2,
    /// Φ_δ on ℝ × SL(2,ℝ).
    Sl2,
    /// Φ_δ on ℝ × SU(2).
    Su2,
    /// Φ_δ on GH = H × ℝ with plane signs ε.
    Gh { eps: Vec<i8> },
}

impl Family {
    pub fn name(&self) -> String {
        match self {
            Family::Gl2 => "gl2".into(),
            Family::Sl2 => "sl2".into(),
            Family::Su2 => "su2".into(),
            Family::Gh { eps } => format!("gh:{}", eps.len()),
        }
    }

    pub fn source_dim(&self) -> usize {
        match self {
            Family::Gl2 => 4,
            Family::Sl2 | Family::Su2 => 5,
            Family::Gh { eps } => 2 * eps.len() + 2,
        }
    }

    /// Names of the left-invariant fields, in the order used by [`FamilyChart`].
    pub fn field_names(&self) -> Vec<String> {
        match self {
            Family::Gl2 | Family::Sl2 => ["T", "X1", "Y1", "Z1"].map(String::from).to_vec(),
            Family::Su2 => ["T", "X2", "Y2", "Z2"].map(String::from).to_vec(),
            Family::Gh { eps } => {
                let m = eps.len();
                let mut v = vec!["T".to_string()];
                v.extend((1..=m).map(|i| format!("X{i}")));
                v.extend((1..=m).map(|i| format!("Y{i}")));
                v.push("Z".into());
                v
            }
        }
    }
}

/// A family together with δ: source sampling, the map, field flows and closed-form oracles.
#[derive(Debug, Clone)]
pub struct FamilyChart {
    pub family: Family,
    pub delta: Complex64,
    /// For GH: use the sign-free map instead of the ε-holomorphic variant.
    pub unsigned_gh_map: bool,
}

impl FamilyChart {
    pub fn new(family: Family, delta: Complex64) -> Result<Self> {
        if delta.re == 0.0 {
            return Err(Error::InvalidParameter("Re δ must be nonzero".into()));
        }
        if family == Family::Gl2 && delta != Complex64::new(1.0, 0.0) {
            return Err(Error::InvalidParameter("the GL⁺(2,ℝ) map has δ = 1".into()));
        }
        if let Family::Gh { eps } = &family {
            if eps.is_empty() || eps.iter().any(|e| e.abs() != 1) {
                return Err(Error::InvalidParameter("ε must be a nonempty ±1 vector".into()));
            }
        }
        Ok(Self { family, delta, unsigned_gh_map: false })
    }

    pub fn target_chart(&self) -> Chart {
        match &self.family {
            Family::Gl2 | Family::Sl2 => Chart::UpperHalfPlaneCstar,
            Family::Su2 => Chart::PuncturedC2,
            Family::Gh { eps } => Chart::Complex(eps.len() + 1),
        }
    }

    fn periodic(&self) -> &'static [usize] {
        match self.target_chart() {
            Chart::UpperHalfPlaneCstar => &[3],
            _ => &[],
        }
    }

    fn m(&self) -> usize {
        match &self.family {
            Family::Gh { eps } => eps.len(),
            _ => 1,
        }
    }

    /// The map in real coordinates.
    pub fn eval(&self, p: &[f64]) -> Result<Vec<f64>> {
        if p.len() != self.family.source_dim() {
            return Err(Error::DimensionMismatch { expected: self.family.source_dim(), got: p.len() });
        }
        match &self.family {
            Family::Gl2 => {
                let (w, q) = phi_gl2(&Mat2::new(p[0], p[1], p[2], p[3]))?;
                Ok(hxc_coords(w, q).to_vec())
            }
            Family::Sl2 => {
                let (w, q) = phi_delta_sl2(p[0], &Mat2::new(p[1], p[2], p[3], p[4]), self.delta)?;
                Ok(hxc_coords(w, q).to_vec())
            }
            Family::Su2 => {
                let (a, b) =
                    phi_delta_su2(p[0], Complex64::new(p[1], p[2]), Complex64::new(p[3], p[4]), self.delta)?;
                Ok(vec![a.re, a.im, b.re, b.im])
            }
            Family::Gh { eps } => {
                let m = eps.len();
                let (x, y, z, t) = (&p[..m], &p[m..2 * m], p[2 * m], p[2 * m + 1]);
                let (w, u) = if self.unsigned_gh_map {
                    phi_delta_gh(x, y, z, t, self.delta, eps)?
                } else {
                    phi_delta_gh_signed(x, y, z, t, self.delta, eps)?
                };
                Ok(w.iter().chain(std::iter::once(&u)).flat_map(|c| [c.re, c.im]).collect())
            }
        }
    }

    /// `p · exp(s X_field)` in source coordinates.
    pub fn flow(&self, field: usize, p: &[f64], s: f64) -> Vec<f64> {
        match &self.family {
            Family::Gl2 => {
                let g = Mat2::new(p[0], p[1], p[2], p[3]) * (gl2_basis()[field] * s).exp();
                vec![g[(0, 0)], g[(0, 1)], g[(1, 0)], g[(1, 1)]]
            }
            Family::Sl2 => {
                if field == 0 {
                    let mut q = p.to_vec();
                    q[0] += s / 2.0;
                    return q;
                }
                let g = Mat2::new(p[1], p[2], p[3], p[4]) * (gl2_basis()[field] * s).exp();
                vec![p[0], g[(0, 0)], g[(0, 1)], g[(1, 0)], g[(1, 1)]]
            }
            Family::Su2 => {
                if field == 0 {
                    let mut q = p.to_vec();
                    q[0] += s / 2.0;
                    return q;
                }
                let g = su2_matrix(Complex64::new(p[1], p[2]), Complex64::new(p[3], p[4]));
                let (a, b) = su2_point(&(g * (su2_basis()[field - 1] * Complex64::new(s, 0.0)).exp()));
                vec![p[0], a.re, a.im, b.re, b.im]
            }
            Family::Gh { eps } => {
                let m = eps.len();
                let mut e = vec![0.0; 2 * m + 2];
                match field {
                    0 => e[2 * m + 1] = s,
                    f if f <= 2 * m => e[f - 1] = s,
                    _ => e[2 * m] = s,
                }
                group::heisenberg_product(p, &e, m)
            }
        }
    }

    /// A random source point whose image is a uniform-ish chart sample.
    pub fn sample(&self, rng: &mut impl Rng) -> Vec<f64> {
        let (k, l) = (self.delta.re, self.delta.im);
        match &self.family {
            Family::Gl2 | Family::Sl2 => {
                let x = rng.gen_range(-3.0..3.0);
                let y = rng.gen_range(0.2..5.0);
                let r: f64 = rng.gen_range(0.2..5.0);
                let theta = rng.gen_range(-PI..PI);
                if self.family == Family::Gl2 {
                    let g = Iwasawa { det: r * r * y, x, y, theta }.recompose();
                    vec![g[(0, 0)], g[(0, 1)], g[(1, 0)], g[(1, 1)]]
                } else {
                    let t = (r * y.sqrt()).ln() / k;
                    let g = Iwasawa { det: 1.0, x, y, theta: theta - l * t }.recompose();
                    vec![t, g[(0, 0)], g[(0, 1)], g[(1, 0)], g[(1, 1)]]
                }
            }
            Family::Su2 => {
                let dir = loop {
                    let v: [f64; 4] = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
                    let n = v.iter().map(|c| c * c).sum::<f64>().sqrt();
                    if n > 0.1 && n <= 1.0 {
                        break v.map(|c| c / n);
                    }
                };
                let r: f64 = rng.gen_range(0.2..5.0);
                let t = r.ln() / k;
                let back = (-self.delta * t).exp() * r;
                let z1 = back * Complex64::new(dir[0], dir[1]);
                let z2 = back * Complex64::new(dir[2], dir[3]);
                vec![t, z1.re, z1.im, z2.re, z2.im]
            }
            Family::Gh { .. } => (0..self.family.source_dim()).map(|_| rng.gen_range(-3.0..3.0)).collect(),
        }
    }

    /// Closed-form field formulas, evaluated at the image of `p`.
    ///
    /// For SL(2) and SU(2) with `l ≠ 0` the X/Y formulas are read in the factor
    /// coordinates: θ is the Iwasawa angle of the SL(2,ℝ) factor, and `z̄` stands
    /// for `e^{δt} z̄` with `z` on S³. For `l = 0` these coincide with the chart values.
    pub fn closed_form_field(&self, field: usize, p: &[f64], image: &[f64]) -> Vec<f64> {
        let (k, l) = (self.delta.re, self.delta.im);
        match &self.family {
            Family::Gl2 | Family::Sl2 => {
                let (y, r) = (image[1], image[2]);
                let theta = match self.family {
                    Family::Gl2 => image[3],
                    _ => p[3].atan2(p[4]),
                };
                let (s2, c2) = (2.0 * theta).sin_cos();
                match field {
                    0 => vec![0.0, 0.0, k * r / 2.0, l / 2.0],
                    1 => vec![y * c2, -y * s2, r / 2.0 * s2, c2 / 2.0],
                    2 => vec![y * s2, y * c2, -r / 2.0 * c2, s2 / 2.0],
                    _ => vec![0.0, 0.0, 0.0, 0.5],
                }
            }
            Family::Su2 => {
                let w = [Complex64::new(image[0], image[1]), Complex64::new(image[2], image[3])];
                let e = (self.delta * p[0]).exp();
                let zb = [e * Complex64::new(p[1], -p[2]), e * Complex64::new(p[3], -p[4])];
                let half = Complex64::new(0.5, 0.0);
                let i = Complex64::i();
                let v = match field {
                    0 => [self.delta * half * w[0], self.delta * half * w[1]],
                    1 => [-half * zb[1], half * zb[0]],
                    2 => [-i * half * zb[1], i * half * zb[0]],
                    _ => [i * half * w[0], i * half * w[1]],
                };
                vec![v[0].re, v[0].im, v[1].re, v[1].im]
            }
            Family::Gh { eps } => {
                let m = eps.len();
                let mut v = vec![0.0; 2 * m + 2];
                let (re_u, im_u) = (2 * m, 2 * m + 1);
                match field {
                    0 => {
                        v[re_u] = 2.0 * k;
                        v[im_u] = 2.0 * l;
                    }
                    f if f <= m => {
                        let i = f - 1;
                        let (x, y, e) = (p[i], p[m + i], eps[i] as f64);
                        v[2 * i] = 1.0;
                        v[re_u] = e * x;
                        v[im_u] = -y;
                    }
                    f if f <= 2 * m => {
                        let i = f - m - 1;
                        let (x, y, e) = (p[i], p[m + i], eps[i] as f64);
                        v[2 * i + 1] = e;
                        v[re_u] = e * y;
                        v[im_u] = x;
                    }
                    _ => v[im_u] = 2.0,
                }
                v
            }
        }
    }

    /// The relations `J X_i' = s_i Y_i'` as (X index, Y index, s_i).
    fn plane_relations(&self) -> Vec<(usize, usize, f64)> {
        match &self.family {
            Family::Gh { eps } => {
                let m = eps.len();
                (0..m).map(|i| (1 + i, 1 + m + i, eps[i] as f64)).collect()
            }
            _ => vec![(1, 2, 1.0)],
        }
    }

    fn z_index(&self) -> usize {
        2 * self.m() + 1
    }

    /// Residuals at a single source point: (J relations, closed-form fields).
    pub fn residuals_at(&self, p: &[f64], fd: FiniteDifference) -> Result<(f64, f64)> {
        let image = ChartPoint::new(self.target_chart(), self.eval(p)?)?;
        let n = self.family.field_names().len();
        let fields: Vec<Vec<f64>> = (0..n)
            .map(|f| pushforward_field(|q| self.eval(q), |q, s| self.flow(f, q, s), p, fd, self.periodic()))
            .collect::<Result<_>>()?;
        let max_diff = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
        let mut rel: f64 = 0.0;
        for (xi, yi, s) in self.plane_relations() {
            let jx = image.apply_j(&fields[xi]);
            let sy: Vec<f64> = fields[yi].iter().map(|c| s * c).collect();
            rel = rel.max(max_diff(&jx, &sy));
        }
        let (k, l) = (self.delta.re, self.delta.im);
        let z = &fields[self.z_index()];
        let shifted: Vec<f64> = fields[0].iter().zip(z).map(|(t, z)| t - l * z).collect();
        let kz: Vec<f64> = z.iter().map(|c| k * c).collect();
        rel = rel.max(max_diff(&image.apply_j(&shifted), &kz));
        let mut closed: f64 = 0.0;
        for (f, v) in fields.iter().enumerate() {
            closed = closed.max(max_diff(v, &self.closed_form_field(f, p, &image.coords)));
        }
        Ok((rel, closed))
    }
}

/// Outcome of [`check_j_compatibility`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompatibilityReport {
    pub family: String,
    pub k: f64,
    pub l: f64,
    pub eps: Option<Vec<i8>>,
    pub samples: usize,
    /// Max residual of `J X' = ±Y'` and `J(T' − lZ') = kZ'`.
    pub max_residual: f64,
    /// Max deviation from the closed-form field formulas.
    pub max_field_residual: f64,
}

impl CompatibilityReport {
    pub fn passes(&self, tol: f64) -> bool {
        self.max_residual < tol && self.max_field_residual < tol
    }
}

pub(crate) fn sample_rng(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng
}

/// Pushes every basis field forward at `samples` random points and checks the
/// relations under the canonical complex structure of the target chart.
pub fn check_j_compatibility(chart: &FamilyChart, samples: usize, seed: u64, fd: FiniteDifference) -> Result<CompatibilityReport> {
    let per: Vec<(f64, f64)> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let p = chart.sample(&mut sample_rng(seed, i));
            chart.residuals_at(&p, fd)
        })
        .collect::<Result<_>>()?;
    let (rel, closed) = per.iter().fold((0.0f64, 0.0f64), |(a, b), (r, p)| (a.max(*r), b.max(*p)));
    Ok(CompatibilityReport {
        family: chart.family.name(),
        k: chart.delta.re,
        l: chart.delta.im,
        eps: match &chart.family {
            Family::Gh { eps } => Some(eps.clone()),
            _ => None,
        },
        samples,
        max_residual: rel,
        max_field_residual: closed,
    })
}

/// Max Iwasawa recomposition error over random matrices with det ∈ [0.1, 10].
pub fn iwasawa_recomposition_error(samples: usize, seed: u64) -> f64 {
    (0..samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = sample_rng(seed, i);
            let mut g = Mat2::from_fn(|_, _| rng.gen_range(-3.0..3.0));
            while g.determinant().abs() < 1e-3 {
                g = Mat2::from_fn(|_, _| rng.gen_range(-3.0..3.0));
            }
            if g.determinant() < 0.0 {
                g.swap_rows(0, 1);
            }
            let target: f64 = rng.gen_range(0.1..10.0);
            g *= (target / g.determinant()).sqrt();
            let iw = iwasawa_gl2(&g).expect("positive determinant");
            (iw.recompose() - g).abs().max() / g.abs().max().max(1.0)
        })
        .reduce(|| 0.0, f64::max)
}

/// Sign of the Jacobian determinant of `Φ_{δ̄'} ∘ Φ_δ⁻¹` relating the GH structure
/// `(k, l, ε)` to its conjugate `(−k, l, −ε)`, one entry per sample point.
pub fn conjugation_jacobian_signs(eps: &[i8], delta: Complex64, samples: usize, seed: u64) -> Result<Vec<i8>> {
    let a = FamilyChart::new(Family::Gh { eps: eps.to_vec() }, delta)?;
    let b = FamilyChart::new(
        Family::Gh { eps: eps.iter().map(|e| -e).collect() },
        Complex64::new(-delta.re, delta.im),
    )?;
    let fd = FiniteDifference::default();
    (0..samples)
        .map(|i| {
            let p = a.sample(&mut sample_rng(seed, i));
            let ja = jacobian(|q| a.eval(q), &p, fd, &[])?;
            let jb = jacobian(|q| b.eval(q), &p, fd, &[])?;
            let n = p.len();
            let da = nalgebra::DMatrix::from_fn(n, n, |r, c| ja[c][r]).determinant();
            let db = nalgebra::DMatrix::from_fn(n, n, |r, c| jb[c][r]).determinant();
            Ok(if da * db > 0.0 { 1 } else { -1 })
        })
        .collect()
}

/// The δ grid used for the numeric checks: `k ∈ {±1, ±2}`, `l ∈ {0, ±1}`.
pub fn delta_grid() -> Vec<Complex64> {
    let mut v = Vec::new();
    for k in [1.0, -1.0, 2.0, -2.0] {
        for l in [0.0, 1.0, -1.0] {
            v.push(Complex64::new(k, l));
        }
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn gl2_fields_match_closed_form() {
        let chart = FamilyChart::new(Family::Gl2, c(1.0, 0.0)).unwrap();
        let r = check_j_compatibility(&chart, 50, 7, FiniteDifference::default()).unwrap();
        assert!(r.max_residual < 1e-6, "{r:?}");
        assert!(r.max_field_residual < 1e-6, "{r:?}");
    }

    #[test]
    fn z_and_t_fields() {
        let chart = FamilyChart::new(Family::Gl2, c(1.0, 0.0)).unwrap();
        let p = chart.sample(&mut sample_rng(3, 0));
        let image = chart.eval(&p).unwrap();
        let fd = FiniteDifference::default();
        let z = pushforward_field(|q| chart.eval(q), |q, s| chart.flow(3, q, s), &p, fd, &[3]).unwrap();
        assert!(z.iter().zip([0.0, 0.0, 0.0, 0.5]).all(|(a, b)| (a - b).abs() < 1e-6));
        let t = pushforward_field(|q| chart.eval(q), |q, s| chart.flow(0, q, s), &p, fd, &[3]).unwrap();
        assert!((t[2] - image[2] / 2.0).abs() < 1e-6);
    }

    #[test]
    fn spec_families() {
        let fd = FiniteDifference::default();
        let sl2 = FamilyChart::new(Family::Sl2, c(1.0, 0.0)).unwrap();
        assert!(check_j_compatibility(&sl2, 100, 1, fd).unwrap().passes(1e-6));
        let su2 = FamilyChart::new(Family::Su2, c(2.0, 1.0)).unwrap();
        assert!(check_j_compatibility(&su2, 100, 1, fd).unwrap().passes(1e-6));
        let gh = FamilyChart::new(Family::Gh { eps: vec![1, 1] }, c(1.0, 1.0)).unwrap();
        assert!(check_j_compatibility(&gh, 100, 1, fd).unwrap().passes(1e-6));
    }

    #[test]
    fn delta_grid_all_families() {
        let fd = FiniteDifference::default();
        for d in delta_grid() {
            for fam in [Family::Sl2, Family::Su2, Family::Gh { eps: vec![1, -1] }] {
                let r = check_j_compatibility(&FamilyChart::new(fam, d).unwrap(), 20, 11, fd).unwrap();
                assert!(r.passes(1e-5), "{r:?}");
            }
        }
    }

    #[test]
    fn unsigned_gh_map_needs_positive_signs() {
        let fd = FiniteDifference::default();
        let mut chart = FamilyChart::new(Family::Gh { eps: vec![1, -1] }, c(1.0, 0.0)).unwrap();
        chart.unsigned_gh_map = true;
        let r = check_j_compatibility(&chart, 10, 2, fd).unwrap();
        assert!(r.max_residual > 1e-2);
        let mut chart = FamilyChart::new(Family::Gh { eps: vec![1, 1] }, c(1.0, 0.0)).unwrap();
        chart.unsigned_gh_map = true;
        assert!(check_j_compatibility(&chart, 10, 2, fd).unwrap().passes(1e-6));
    }

    #[test]
    fn richardson_is_at_least_as_good() {
        let chart = FamilyChart::new(Family::Su2, c(2.0, -1.0)).unwrap();
        let p = chart.sample(&mut sample_rng(5, 0));
        let plain = chart.residuals_at(&p, FiniteDifference { step: 1e-3, richardson: false }).unwrap();
        let rich = chart.residuals_at(&p, FiniteDifference { step: 1e-3, richardson: true }).unwrap();
        assert!(rich.1 <= plain.1);
    }

    #[test]
    fn iwasawa_recomposes() {
        assert!(iwasawa_recomposition_error(1000, 42) < 1e-12);
    }

    #[test]
    fn conjugation_orientation() {
        for m in 1..=3usize {
            let signs = conjugation_jacobian_signs(&vec![1; m], c(1.0, 0.5), 5, 9).unwrap();
            let expected = if m % 2 == 0 { -1 } else { 1 };
            assert!(signs.iter().all(|s| *s == expected), "m = {m}: {signs:?}");
        }
    }

    #[test]
    fn chart_point_constraints() {
        assert!(ChartPoint::new(Chart::UpperHalfPlaneCstar, vec![0.0, -1.0, 1.0, 0.0]).is_err());
        assert!(ChartPoint::new(Chart::PuncturedC2, vec![0.0; 4]).is_err());
        assert!(ChartPoint::new(Chart::Complex(2), vec![0.0; 3]).is_err());
    }

    #[test]
    fn sampling_is_deterministic() {
        let chart = FamilyChart::new(Family::Su2, c(1.0, 1.0)).unwrap();
        let a = check_j_compatibility(&chart, 30, 5, FiniteDifference::default()).unwrap();
        let b = check_j_compatibility(&chart, 30, 5, FiniteDifference::default()).unwrap();
        assert_eq!(a, b);
    }
}
