//! The chart maps: Iwasawa coordinates on GL⁺(2,ℝ) and the maps Φ, Φ_δ.

use std::f64::consts::PI;

use nalgebra::Matrix2;
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type Mat2 = Matrix2<f64>;
pub type CMat2 = Matrix2<Complex64>;

/// `g = √D · [[1,x],[0,1]] · diag(√y, 1/√y) · R(θ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Iwasawa {
    pub det: f64,
    pub x: f64,
    pub y: f64,
    pub theta: f64,
}

impl Iwasawa {
    pub fn recompose(&self) -> Mat2 {
        let n = Mat2::new(1.0, self.x, 0.0, 1.0);
        let a = Mat2::new(self.y.sqrt(), 0.0, 0.0, 1.0 / self.y.sqrt());
        n * a * rotation(self.theta) * self.det.sqrt()
    }
}

pub fn rotation(theta: f64) -> Mat2 {
    let (s, c) = theta.sin_cos();
    Mat2::new(c, -s, s, c)
}

pub fn iwasawa_gl2(g: &Mat2) -> Result<Iwasawa> {
    let det = g.determinant();
    if !(det > 0.0) {
        return Err(Error::OutsideChart(format!("det g = {det} is not positive")));
    }
    let (a, b, c, d) = (g[(0, 0)], g[(0, 1)], g[(1, 0)], g[(1, 1)]);
    let n2 = c * c + d * d;
    Ok(Iwasawa { det, x: (a * c + b * d) / n2, y: det / n2, theta: c.atan2(d) })
}

/// Φ(g) = (x + iy, d + ic) on ℍ × ℂ*.
pub fn phi_gl2(g: &Mat2) -> Result<(Complex64, Complex64)> {
    let iw = iwasawa_gl2(g)?;
    Ok((Complex64::new(iw.x, iw.y), Complex64::new(g[(1, 1)], g[(1, 0)])))
}

fn check_k(k: f64) -> Result<()> {
    if k == 0.0 || !k.is_finite() {
        return Err(Error::InvalidParameter("Re δ must be nonzero".into()));
    }
    Ok(())
}

/// Φ_δ(t, g) = (x + iy, e^{δt}(d + ic)) on ℝ × SL(2,ℝ).
pub fn phi_delta_sl2(t: f64, g: &Mat2, delta: Complex64) -> Result<(Complex64, Complex64)> {
    check_k(delta.re)?;
    let (w, q) = phi_gl2(g)?;
    Ok((w, (delta * t).exp() * q))
}

/// Φ_δ(t, z₁, z₂) = e^{δt}(z₁, z₂).
pub fn phi_delta_su2(t: f64, z1: Complex64, z2: Complex64, delta: Complex64) -> Result<(Complex64, Complex64)> {
    check_k(delta.re)?;
    if z1.norm_sqr() + z2.norm_sqr() == 0.0 {
        return Err(Error::OutsideChart("(z1, z2) = 0".into()));
    }
    let e = (delta * t).exp();
    Ok((e * z1, e * z2))
}

/// The sign-free map on GH = H × ℝ: `w = x + iy`,
/// `u = (2kt + ½(‖x‖² + ‖y‖²)) + i(2(lt + z) − x·y)` with ε-weighted products.
pub fn phi_delta_gh(x: &[f64], y: &[f64], z: f64, t: f64, delta: Complex64, eps: &[i8]) -> Result<(Vec<Complex64>, Complex64)> {
    gh_map(x, y, z, t, delta, eps, false)
}

/// Variant holomorphic for every ε: `w_i = x_i + iε_i y_i`, the imaginary part of `u`
/// uses the unweighted `Σ x_i y_i`. Agrees with [`phi_delta_gh`] when all ε_i = +1.
pub fn phi_delta_gh_signed(x: &[f64], y: &[f64], z: f64, t: f64, delta: Complex64, eps: &[i8]) -> Result<(Vec<Complex64>, Complex64)> {
    gh_map(x, y, z, t, delta, eps, true)
}

fn gh_map(x: &[f64], y: &[f64], z: f64, t: f64, delta: Complex64, eps: &[i8], signed: bool) -> Result<(Vec<Complex64>, Complex64)> {
    check_k(delta.re)?;
    let m = eps.len();
    if x.len() != m || y.len() != m {
        return Err(Error::DimensionMismatch { expected: m, got: x.len().min(y.len()) });
    }
    let (k, l) = (delta.re, delta.im);
    let mut re = 2.0 * k * t;
    let mut im = 2.0 * (l * t + z);
    let mut w = Vec::with_capacity(m);
    for i in 0..m {
        let e = eps[i] as f64;
        re += 0.5 * e * (x[i] * x[i] + y[i] * y[i]);
        if signed {
            im -= x[i] * y[i];
            w.push(Complex64::new(x[i], e * y[i]));
        } else {
            im -= e * x[i] * y[i];
            w.push(Complex64::new(x[i], y[i]));
        }
    }
    Ok((w, Complex64::new(re, im)))
}

/// SU(2) element `[[z₁, −z̄₂], [z₂, z̄₁]]`.
pub fn su2_matrix(z1: Complex64, z2: Complex64) -> CMat2 {
    CMat2::new(z1, -z2.conj(), z2, z1.conj())
}

pub fn su2_point(m: &CMat2) -> (Complex64, Complex64) {
    (m[(0, 0)], m[(1, 0)])
}

/// Basis `T, X₁, Y₁, Z₁` of gl(2,ℝ).
pub fn gl2_basis() -> [Mat2; 4] {
    [
        Mat2::new(0.5, 0.0, 0.0, 0.5),
        Mat2::new(0.0, 0.5, 0.5, 0.0),
        Mat2::new(0.5, 0.0, 0.0, -0.5),
        Mat2::new(0.0, -0.5, 0.5, 0.0),
    ]
}

/// Basis `X₂, Y₂, Z₂` of su(2).
pub fn su2_basis() -> [CMat2; 3] {
    let o = Complex64::new(0.0, 0.0);
    let h = Complex64::new(0.5, 0.0);
    let ih = Complex64::new(0.0, 0.5);
    [CMat2::new(o, -h, h, o), CMat2::new(o, ih, ih, o), CMat2::new(ih, o, o, -ih)]
}

/// Wraps an angle difference into (−π, π].
pub fn wrap_angle(a: f64) -> f64 {
    let mut r = a % (2.0 * PI);
    if r <= -PI {
        r += 2.0 * PI;
    } else if r > PI {
        r -= 2.0 * PI;
    }
    r
}

/// `(x, y, r, θ)` real coordinates of a point of ℍ × ℂ*.
pub fn hxc_coords(w: Complex64, q: Complex64) -> [f64; 4] {
    [w.re, w.im, q.norm(), q.arg()]
}
