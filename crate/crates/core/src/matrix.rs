//! Small dense matrices over a [`Scalar`] backend.
//!
//! Exact matrices are row reduced with fraction-free (Bareiss) elimination on
//! integer-scaled rows; float matrices use partial pivoting.

use std::fmt;
use std::ops::{Index, IndexMut};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::scalar::{Scalar, Q};

#[derive(Clone, PartialEq)]
pub struct Matrix<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

impl<S: fmt::Debug> fmt::Debug for Matrix<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", &self.data[r * self.cols..(r + 1) * self.cols])?;
        }
        write!(f, "]")
    }
}

impl<S> Index<(usize, usize)> for Matrix<S> {
    type Output = S;
    fn index(&self, (r, c): (usize, usize)) -> &S {
        &self.data[r * self.cols + c]
    }
}

impl<S> IndexMut<(usize, usize)> for Matrix<S> {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut S {
        &mut self.data[r * self.cols + c]
    }
}

impl<S: Scalar> Matrix<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![S::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = S::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<S>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Self { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(cols: &[Vec<S>]) -> Self {
        let n = cols.first().map_or(0, Vec::len);
        let mut m = Self::zeros(n, cols.len());
        for (j, col) in cols.iter().enumerate() {
            for i in 0..n {
                m[(i, j)] = col[i].clone();
            }
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> S) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Self { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, r: usize) -> Vec<S> {
        self.data[r * self.cols..(r + 1) * self.cols].to_vec()
    }

    pub fn column(&self, c: usize) -> Vec<S> {
        (0..self.rows).map(|r| self[(r, c)].clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)].clone())
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matrix product shape");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if b.is_zero() {
                        continue;
                    }
                    out[(i, j)] = out[(i, j)].clone() + a.clone() * b.clone();
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[S]) -> Vec<S> {
        assert_eq!(self.cols, v.len(), "matrix-vector shape");
        (0..self.rows)
            .map(|i| {
                let mut acc = S::zero();
                for (k, x) in v.iter().enumerate() {
                    let a = &self[(i, k)];
                    if !a.is_zero() && !x.is_zero() {
                        acc = acc + a.clone() * x.clone();
                    }
                }
                acc
            })
            .collect()
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self::from_fn(self.rows, self.cols, |r, c| self[(r, c)].clone() + other[(r, c)].clone())
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self::from_fn(self.rows, self.cols, |r, c| self[(r, c)].clone() - other[(r, c)].clone())
    }

    pub fn scale(&self, s: &S) -> Self {
        Self::from_fn(self.rows, self.cols, |r, c| self[(r, c)].clone() * s.clone())
    }

    pub fn neg(&self) -> Self {
        Self::from_fn(self.rows, self.cols, |r, c| -self[(r, c)].clone())
    }

    /// `[A, B] = AB - BA`.
    pub fn commutator(&self, other: &Self) -> Self {
        self.mul(other).sub(&other.mul(self))
    }

    pub fn trace(&self) -> S {
        (0..self.rows.min(self.cols)).fold(S::zero(), |acc, i| acc + self[(i, i)].clone())
    }

    /// True when every entry passes the backend zero test.
    pub fn is_negligible(&self) -> bool {
        self.data.iter().all(Scalar::is_negligible)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(Scalar::magnitude).fold(0.0, f64::max)
    }

    pub fn frobenius_distance(&self, other: &Self) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a.clone() - b.clone()).to_f64().powi(2))
            .sum::<f64>()
            .sqrt()
    }

    pub fn entries(&self) -> &[S] {
        &self.data
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Matrix<T> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn to_f64(&self) -> Matrix<f64> {
        self.map(Scalar::to_f64)
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let pivots = S::row_reduce(&mut m);
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of `{x : A x = 0}` read off the reduced echelon form; each basis
    /// vector has a single 1 in its free column.
    pub fn nullspace(&self) -> Vec<Vec<S>> {
        let (r, pivots) = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![S::zero(); self.cols];
            v[free] = S::one();
            for (row, &p) in pivots.iter().enumerate() {
                v[p] = -r[(row, free)].clone();
            }
            basis.push(v);
        }
        basis
    }

    /// Some solution of `A x = b`, if the system is consistent.
    pub fn solve(&self, b: &[S]) -> Option<Vec<S>> {
        assert_eq!(b.len(), self.rows);
        let aug = Self::from_fn(self.rows, self.cols + 1, |r, c| {
            if c < self.cols {
                self[(r, c)].clone()
            } else {
                b[r].clone()
            }
        });
        let (red, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![S::zero(); self.cols];
        for (row, &p) in pivots.iter().enumerate() {
            x[p] = red[(row, self.cols)].clone();
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<Self> {
        assert!(self.is_square());
        let n = self.rows;
        let aug = Self::from_fn(n, 2 * n, |r, c| {
            if c < n {
                self[(r, c)].clone()
            } else if c - n == r {
                S::one()
            } else {
                S::zero()
            }
        });
        let (red, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        Some(Self::from_fn(n, n, |r, c| red[(r, c + n)].clone()))
    }

    /// Determinant by elimination.
    pub fn det(&self) -> S {
        assert!(self.is_square());
        let n = self.rows;
        let mut m = self.clone();
        let mut det = S::one();
        for c in 0..n {
            let pivot = (c..n)
                .filter(|&r| !m[(r, c)].is_negligible())
                .max_by(|&a, &b| m[(a, c)].magnitude().total_cmp(&m[(b, c)].magnitude()));
            let Some(p) = pivot else {
                return S::zero();
            };
            if p != c {
                m.swap_rows(p, c);
                det = -det;
            }
            let pv = m[(c, c)].clone();
            det = det * pv.clone();
            for r in c + 1..n {
                let f = m[(r, c)].clone() / pv.clone();
                if f.is_zero() {
                    continue;
                }
                for k in c..n {
                    let v = m[(c, k)].clone();
                    m[(r, k)] = m[(r, k)].clone() - f.clone() * v;
                }
            }
        }
        det
    }

    /// Leading principal minors `det A[..k, ..k]`, `k = 1..=n`.
    pub fn leading_minors(&self) -> Vec<S> {
        (1..=self.rows)
            .map(|k| Self::from_fn(k, k, |r, c| self[(r, c)].clone()).det())
            .collect()
    }

    /// Characteristic polynomial `det(uI - A)` as coefficients of
    /// `u^0, u^1, ..., u^n` (Faddeev–LeVerrier).
    pub fn char_poly(&self) -> Vec<S> {
        let n = self.rows;
        let mut coeffs = vec![S::zero(); n + 1];
        coeffs[n] = S::one();
        let mut m = Self::zeros(n, n);
        for k in 1..=n {
            // M_k = A M_{k-1} + c_{n-k+1} I
            let mut next = self.mul(&m);
            for i in 0..n {
                next[(i, i)] = next[(i, i)].clone() + coeffs[n - k + 1].clone();
            }
            m = next;
            let am = self.mul(&m);
            coeffs[n - k] = -am.trace() / S::from_i64(k as i64);
        }
        coeffs
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square()
            && (0..self.rows)
                .all(|i| (0..i).all(|j| (self[(i, j)].clone() - self[(j, i)].clone()).is_negligible()))
    }

    pub(crate) fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }
}

/// Fraction-free reduction: rows are scaled to integers, brought to echelon
/// form with Bareiss' exact-division recurrence, then normalized.
pub(crate) fn rref_fraction_free(m: &mut Matrix<Q>) -> Vec<usize> {
    let (rows, cols) = (m.rows, m.cols);
    let mut a: Vec<Vec<BigInt>> = (0..rows)
        .map(|r| {
            let lcm = (0..cols).fold(BigInt::one(), |acc, c| acc.lcm(m[(r, c)].denom()));
            (0..cols).map(|c| (m[(r, c)].clone() * Q::from_integer(lcm.clone())).to_integer()).collect()
        })
        .collect();

    let mut pivots = Vec::new();
    let mut prev = BigInt::one();
    let mut rank = 0;
    for c in 0..cols {
        if rank == rows {
            break;
        }
        let Some(p) = (rank..rows).find(|&r| !a[r][c].is_zero()) else {
            continue;
        };
        a.swap(p, rank);
        for r in rank + 1..rows {
            let factor = a[r][c].clone();
            for k in c..cols {
                let v = &a[rank][c] * &a[r][k] - &factor * &a[rank][k];
                a[r][k] = v / &prev;
            }
        }
        prev = a[rank][c].clone();
        pivots.push(c);
        rank += 1;
    }

    // Back to rationals, normalize pivots and clear above.
    let mut out: Vec<Vec<Q>> = a
        .into_iter()
        .take(rank)
        .zip(&pivots)
        .map(|(row, &p)| {
            let pv = Q::from_integer(row[p].clone());
            row.into_iter().map(|x| Q::from_integer(x) / pv.clone()).collect()
        })
        .collect();
    for i in (0..rank).rev() {
        let p = pivots[i];
        for j in 0..i {
            let f = out[j][p].clone();
            if f.is_zero() {
                continue;
            }
            for k in p..cols {
                let v = f.clone() * out[i][k].clone();
                out[j][k] = out[j][k].clone() - v;
            }
        }
    }
    for r in 0..rows {
        for c in 0..cols {
            m[(r, c)] = if r < rank { out[r][c].clone() } else { Q::zero() };
        }
    }
    pivots
}

pub(crate) fn rref_partial_pivot(m: &mut Matrix<f64>) -> Vec<usize> {
    let (rows, cols) = (m.rows, m.cols);
    let scale = m.max_abs().max(1.0);
    let tol = crate::scalar::F64_ZERO_TOL * scale;
    let mut pivots = Vec::new();
    let mut rank = 0;
    for c in 0..cols {
        if rank == rows {
            break;
        }
        let (p, best) = (rank..rows)
            .map(|r| (r, m[(r, c)].abs()))
            .fold((rank, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if best <= tol {
            for r in rank..rows {
                m[(r, c)] = 0.0;
            }
            continue;
        }
        m.swap_rows(p, rank);
        let pv = m[(rank, c)];
        for k in 0..cols {
            m[(rank, k)] /= pv;
        }
        for r in 0..rows {
            if r == rank {
                continue;
            }
            let f = m[(r, c)];
            if f == 0.0 {
                continue;
            }
            for k in 0..cols {
                m[(r, k)] -= f * m[(rank, k)];
            }
        }
        pivots.push(c);
        rank += 1;
    }
    pivots
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q, qi};

    fn qm(rows: &[&[i64]]) -> Matrix<Q> {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| qi(x)).collect()).collect())
    }

    #[test]
    fn exact_rref_and_nullspace() {
        let a = qm(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(a.rank(), 2);
        let ns = a.nullspace();
        assert_eq!(ns.len(), 1);
        assert!(a.mul_vec(&ns[0]).iter().all(Zero::is_zero));
    }

    #[test]
    fn exact_inverse_and_det() {
        let a = Matrix::from_rows(vec![vec![q(1, 2), qi(3)], vec![qi(-1), q(2, 3)]]);
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv), Matrix::identity(2));
        assert_eq!(a.det(), q(1, 3) + qi(3));
        assert!(qm(&[&[1, 2], &[2, 4]]).inverse().is_none());
    }

    #[test]
    fn char_poly_of_rotation() {
        let r = qm(&[&[0, -1], &[1, 0]]);
        assert_eq!(r.char_poly(), vec![qi(1), qi(0), qi(1)]);
    }

    #[test]
    fn float_rref_matches_exact_rank() {
        let a = qm(&[&[1, 2, 3, 4], &[2, 4, 6, 8], &[0, 1, 1, 1]]);
        assert_eq!(a.to_f64().rank(), a.rank());
    }

    #[test]
    fn inconsistent_solve() {
        let a = qm(&[&[1, 1], &[1, 1]]);
        assert!(a.solve(&[qi(1), qi(2)]).is_none());
        let x = a.solve(&[qi(2), qi(2)]).unwrap();
        assert_eq!(a.mul_vec(&x), vec![qi(2), qi(2)]);
    }
}
