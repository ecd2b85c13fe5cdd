//! Multivariate polynomials over ℚ, enough for symbolic determinants of small
//! matrices with linear entries.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::matrix::Matrix;
use crate::scalar::{fmt_q, Q};

/// Sparse polynomial in `nvars` variables; keys are exponent vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, Q>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Self { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Q) -> Self {
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(vec![0; nvars], c);
        }
        p
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut p = Self::zero(nvars);
        p.terms.insert(e, Q::one());
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, c: &Q) -> Self {
        let mut p = Self::zero(self.nvars);
        if !c.is_zero() {
            for (e, v) in &self.terms {
                p.terms.insert(e.clone(), v * c);
            }
        }
        p
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Self::constant(self.nvars, Q::one()), |acc, _| &acc * self)
    }

    /// Value at a rational point.
    pub fn eval(&self, point: &[Q]) -> Q {
        self.terms.iter().fold(Q::zero(), |acc, (e, c)| {
            let mono = e.iter().zip(point).fold(Q::one(), |m, (k, x)| (0..*k).fold(m, |m, _| m * x));
            acc + c * mono
        })
    }

    fn insert(&mut self, e: Vec<u32>, c: Q) {
        let entry = self.terms.entry(e.clone()).or_insert_with(Q::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&e);
        }
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let mut p = self.clone();
        for (e, c) in &rhs.terms {
            p.insert(e.clone(), c.clone());
        }
        p
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self + &(-rhs)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.scale(&-Q::one())
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        let mut p = Poly::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                p.insert(e, c1 * c2);
            }
        }
        p
    }
}

impl Poly {
    /// Human-readable form with the given variable names (`x<i>` past the end).
    pub fn render(&self, names: &[&str]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(e, c)| {
                let mono: Vec<String> = e
                    .iter()
                    .enumerate()
                    .filter(|(_, k)| **k > 0)
                    .map(|(i, k)| {
                        let n = names.get(i).map_or_else(|| format!("x{i}"), |s| s.to_string());
                        if *k == 1 {
                            n
                        } else {
                            format!("{n}^{k}")
                        }
                    })
                    .collect();
                if mono.is_empty() {
                    fmt_q(c)
                } else {
                    format!("{}*{}", fmt_q(c), mono.join("*"))
                }
            })
            .collect();
        parts.join(" + ")
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(&[]))
    }
}

/// Matrix whose entries are polynomials.
pub type PolyMatrix = Vec<Vec<Poly>>;

/// `Σ_i vars_i · M_i` for rational matrices `M_i`; `vars_i` is variable `i`.
pub fn linear_combination(nvars: usize, ms: &[Matrix<Q>]) -> PolyMatrix {
    let n = ms[0].rows();
    (0..n)
        .map(|r| {
            (0..n)
                .map(|c| ms.iter().enumerate().fold(Poly::zero(nvars), |acc, (i, m)| &acc + &Poly::var(nvars, i).scale(&m[(r, c)])))
                .collect()
        })
        .collect()
}

/// Determinant by cofactor expansion along the first row.
pub fn det(m: &PolyMatrix) -> Poly {
    let n = m.len();
    let nvars = m.first().and_then(|r| r.first()).map_or(0, Poly::nvars);
    if n == 0 {
        return Poly::constant(nvars, Q::one());
    }
    if n == 1 {
        return m[0][0].clone();
    }
    let mut acc = Poly::zero(nvars);
    for c in 0..n {
        if m[0][c].is_zero() {
            continue;
        }
        let minor: PolyMatrix = m[1..].iter().map(|row| row.iter().enumerate().filter(|(j, _)| *j != c).map(|(_, p)| p.clone()).collect()).collect();
        let term = &m[0][c] * &det(&minor);
        acc = if c % 2 == 0 { &acc + &term } else { &acc - &term };
    }
    acc
}

/// `det(u I − M)` with `u` the variable `u_index`.
pub fn char_poly(m: &PolyMatrix, u_index: usize) -> Poly {
    let nvars = m[0][0].nvars();
    let u = Poly::var(nvars, u_index);
    let shifted: PolyMatrix = m
        .iter()
        .enumerate()
        .map(|(r, row)| row.iter().enumerate().map(|(c, p)| if r == c { &u - p } else { -p }).collect())
        .collect();
    det(&shifted)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::qi;

    #[test]
    fn arithmetic() {
        let x = Poly::var(2, 0);
        let y = Poly::var(2, 1);
        let s = &x + &y;
        let d = &x - &y;
        assert_eq!(&s * &d, &x.pow(2) - &y.pow(2));
        assert_eq!((&s * &d).eval(&[qi(3), qi(2)]), qi(5));
        assert!((&x - &x).is_zero());
    }

    #[test]
    fn char_poly_of_rotation() {
        let j = Matrix::from_rows(vec![vec![qi(0), qi(-1)], vec![qi(1), qi(0)]]);
        // entries: variable 0 times J
        let m = linear_combination(2, &[j]);
        let p = char_poly(&m, 1);
        let a = Poly::var(2, 0);
        let u = Poly::var(2, 1);
        assert_eq!(p, &u.pow(2) + &a.pow(2));
        assert_eq!(p.render(&["a", "u"]), "1*a^2 + 1*u^2");
        assert_eq!(p.to_string(), "1*x0^2 + 1*x1^2");
    }
}
