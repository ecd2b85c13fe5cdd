//! Scalar backends.
//!
//! Two backends exist: exact rationals ([`Q`]) for every identity check, and
//! `f64` for the numerical search and chart computations. A tensor never mixes
//! the two; conversion goes one way through [`Scalar::to_f64`].

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::matrix::Matrix;

/// Exact rational scalar.
pub type Q = BigRational;

/// Absolute tolerance used by the approximate backend for zero tests.
pub const F64_ZERO_TOL: f64 = 1e-10;

pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Send
    + Sync
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + 'static
{
    const EXACT: bool;

    /// Zero test: exact for rationals, `|x| <= 1e-10` for floats.
    fn is_negligible(&self) -> bool;

    fn to_f64(&self) -> f64;

    fn from_i64(n: i64) -> Self;

    fn from_ratio(p: i64, q: i64) -> Self {
        Self::from_i64(p) / Self::from_i64(q)
    }

    /// Sign with the backend's zero test applied first.
    fn signum_i8(&self) -> i8 {
        if self.is_negligible() {
            0
        } else if self.to_f64() > 0.0 {
            1
        } else {
            -1
        }
    }

    /// Magnitude used for pivot selection and residual reporting.
    fn magnitude(&self) -> f64 {
        self.to_f64().abs()
    }

    /// Brings `m` to reduced row echelon form in place and returns the pivot
    /// columns.
    fn row_reduce(m: &mut Matrix<Self>) -> Vec<usize>;
}

impl Scalar for Q {
    const EXACT: bool = true;

    fn is_negligible(&self) -> bool {
        self.is_zero()
    }

    fn to_f64(&self) -> f64 {
        self.to_f64_lossy()
    }

    fn from_i64(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }

    fn row_reduce(m: &mut Matrix<Self>) -> Vec<usize> {
        crate::matrix::rref_fraction_free(m)
    }

    fn signum_i8(&self) -> i8 {
        if self.is_zero() {
            0
        } else if self.is_positive() {
            1
        } else {
            -1
        }
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn is_negligible(&self) -> bool {
        self.abs() <= F64_ZERO_TOL
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn from_i64(n: i64) -> Self {
        n as f64
    }

    fn row_reduce(m: &mut Matrix<Self>) -> Vec<usize> {
        crate::matrix::rref_partial_pivot(m)
    }
}

trait LossyF64 {
    fn to_f64_lossy(&self) -> f64;
}

impl LossyF64 for BigRational {
    fn to_f64_lossy(&self) -> f64 {
        match (self.numer().to_f64(), self.denom().to_f64()) {
            (Some(n), Some(d)) if n.is_finite() && d.is_finite() => n / d,
            _ => {
                // Huge numerator/denominator: shift both down before dividing.
                let shift = self.numer().bits().max(self.denom().bits()).saturating_sub(1000);
                let n = (self.numer() >> shift).to_f64().unwrap_or(f64::NAN);
                let d = (self.denom() >> shift).to_f64().unwrap_or(f64::NAN);
                n / d
            }
        }
    }
}

/// Shorthand for the rational `p/q`.
pub fn q(p: i64, d: i64) -> Q {
    Q::new(BigInt::from(p), BigInt::from(d))
}

/// Shorthand for an integer rational.
pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// Parses `"p/q"`, `"p"` or a terminating decimal such as `"0.5"`.
pub fn parse_q(s: &str) -> Result<Q> {
    let s = s.trim();
    let err = || Error::Parse(format!("not a rational: {s:?}"));
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| err())?;
        let d: BigInt = d.trim().parse().map_err(|_| err())?;
        if d.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        return Ok(Q::new(n, d));
    }
    if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.chars().all(|c| c.is_ascii_digit()) {
            return Err(err());
        }
        let neg = int.trim_start().starts_with('-');
        let int_part: BigInt = if int.is_empty() || int == "-" || int == "+" {
            BigInt::zero()
        } else {
            int.parse().map_err(|_| err())?
        };
        let frac_part: BigInt = frac.parse().map_err(|_| err())?;
        let scale = num_traits::pow(BigInt::from(10), frac.len());
        let mag = int_part.abs() * &scale + frac_part;
        let n = if neg { -mag } else { mag };
        return Ok(Q::new(n, scale));
    }
    let n: BigInt = s.parse().map_err(|_| err())?;
    Ok(Q::from_integer(n))
}

/// Formats a rational as `"p/q"` (or `"p"` for integers).
pub fn fmt_q(x: &Q) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Best rational approximation with denominator at most `max_den`
/// (continued fractions).
pub fn rationalize(x: f64, max_den: i64) -> Option<Q> {
    if !x.is_finite() {
        return None;
    }
    let neg = x < 0.0;
    let mut v = x.abs();
    let (mut p0, mut q0, mut p1, mut q1) = (0i64, 1i64, 1i64, 0i64);
    for _ in 0..64 {
        let a = v.floor();
        if a > i64::MAX as f64 / 4.0 {
            break;
        }
        let a = a as i64;
        let p2 = a.checked_mul(p1)?.checked_add(p0)?;
        let q2 = a.checked_mul(q1)?.checked_add(q0)?;
        if q2 > max_den {
            break;
        }
        p0 = p1;
        q0 = q1;
        p1 = p2;
        q1 = q2;
        let frac = v - a as f64;
        if frac < 1e-15 {
            break;
        }
        v = 1.0 / frac;
    }
    if q1 == 0 {
        return None;
    }
    let r = q(if neg { -p1 } else { p1 }, q1);
    Some(r)
}

/// Exact square root of a non-negative rational, when it is a perfect square.
pub fn sqrt_q(x: &Q) -> Option<Q> {
    if x.is_negative() {
        return None;
    }
    let n = x.numer().sqrt();
    let d = x.denom().sqrt();
    if &(&n * &n) == x.numer() && &(&d * &d) == x.denom() {
        Some(Q::new(n, d))
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        assert_eq!(parse_q("3/4").unwrap(), q(3, 4));
        assert_eq!(parse_q("-2").unwrap(), qi(-2));
        assert_eq!(parse_q("0.5").unwrap(), q(1, 2));
        assert_eq!(parse_q("-1.25").unwrap(), q(-5, 4));
        assert!(parse_q("1/0").is_err());
        assert!(parse_q("abc").is_err());
    }

    #[test]
    fn format_roundtrip() {
        for x in [q(3, 4), qi(-7), q(-1, 9)] {
            assert_eq!(parse_q(&fmt_q(&x)).unwrap(), x);
        }
    }

    #[test]
    fn rationalize_recovers_small_fractions() {
        assert_eq!(rationalize(0.75, 100).unwrap(), q(3, 4));
        assert_eq!(rationalize(-1.0 / 3.0 + 1e-13, 1000).unwrap(), q(-1, 3));
    }

    #[test]
    fn perfect_square_roots() {
        assert_eq!(sqrt_q(&q(9, 25)).unwrap(), q(3, 5));
        assert!(sqrt_q(&qi(2)).is_none());
    }
}
