//! Small dense matrices and vector helpers.
//!
//! Every matrix in this crate is tiny (at most `2d x 2d` with `d <= 3`), so a
//! row-major `Vec` with LU-based determinant/inverse covers all needs without
//! pulling in a linear-algebra dependency. Entries are either the real scalar
//! `T` or `Complex<T>`, abstracted by [`Entry`].

use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::Scalar;

/// Matrix entry: the real scalar itself or a complex number over it.
pub trait Entry<T: Scalar>:
    Copy
    + PartialEq
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + AddAssign
    + SubAssign
    + MulAssign
    + std::fmt::Debug
{
    fn mag_sq(self) -> T;
    fn from_real(x: T) -> Self;
}

impl<T: Scalar> Entry<T> for T {
    fn mag_sq(self) -> T {
        self * self
    }
    fn from_real(x: T) -> Self {
        x
    }
}

impl<T: Scalar> Entry<T> for Complex<T> {
    fn mag_sq(self) -> T {
        self.norm_sqr()
    }
    fn from_real(x: T) -> Self {
        Complex::new(x, T::zero())
    }
}

/// Dense row-major matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Mat<E> {
    rows: usize,
    cols: usize,
    data: Vec<E>,
}

impl<E: Copy> Mat<E> {
    pub fn from_rows(rows: Vec<Vec<E>>) -> Self {
        let r = rows.len();
        assert!(r > 0, "matrix needs at least one row");
        let c = rows[0].len();
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Self {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> E) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
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

    pub fn at(&self, i: usize, j: usize) -> E {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: E) {
        self.data[i * self.cols + j] = v;
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.at(j, i))
    }

    pub fn col(&self, j: usize) -> Vec<E> {
        (0..self.rows).map(|i| self.at(i, j)).collect()
    }

    pub fn map<F, E2: Copy>(&self, f: F) -> Mat<E2>
    where
        F: Fn(E) -> E2,
    {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&e| f(e)).collect(),
        }
    }

    pub fn block(&self, i0: usize, j0: usize, h: usize, w: usize) -> Self {
        Self::from_fn(h, w, |i, j| self.at(i0 + i, j0 + j))
    }

    /// Assembles `[[a, b], [c, d]]` from equally sized square blocks.
    pub fn from_blocks(a: &Self, b: &Self, c: &Self, d: &Self) -> Self {
        let n = a.rows;
        assert!(
            [a, b, c, d]
                .iter()
                .all(|m| m.rows == n && m.cols == n),
            "blocks must be square and equally sized"
        );
        Self::from_fn(2 * n, 2 * n, |i, j| match (i < n, j < n) {
            (true, true) => a.at(i, j),
            (true, false) => b.at(i, j - n),
            (false, true) => c.at(i - n, j),
            (false, false) => d.at(i - n, j - n),
        })
    }
}

impl<E> Mat<E> {
    pub fn data(&self) -> &[E] {
        &self.data
    }
}

impl<T: Scalar> Mat<T> {
    pub fn complexify(&self) -> Mat<Complex<T>> {
        self.map(|x| Complex::new(x, T::zero()))
    }
}

impl<T: Scalar> Mat<Complex<T>> {
    pub fn real_part(&self) -> Mat<T> {
        self.map(|z| z.re)
    }

    pub fn imag_part(&self) -> Mat<T> {
        self.map(|z| z.im)
    }

    pub fn conj(&self) -> Self {
        self.map(|z| z.conj())
    }
}

impl<E: Copy> Mat<E> {
    fn zip_with(&self, other: &Self, f: impl Fn(E, E) -> E) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        }
    }
}

impl<E> Mat<E> {
    pub fn zeros_like<T>(rows: usize, cols: usize) -> Mat<E>
    where
        T: Scalar,
        E: Entry<T>,
    {
        Mat {
            rows,
            cols,
            data: vec![E::zero(); rows * cols],
        }
    }
}

pub fn zeros<T: Scalar, E: Entry<T>>(rows: usize, cols: usize) -> Mat<E> {
    Mat::zeros_like::<T>(rows, cols)
}

pub fn identity<T: Scalar, E: Entry<T>>(n: usize) -> Mat<E> {
    Mat::from_fn(n, n, |i, j| if i == j { E::one() } else { E::zero() })
}

impl<E> Mat<E> {
    pub fn add<T>(&self, other: &Self) -> Self
    where
        T: Scalar,
        E: Entry<T>,
    {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub<T>(&self, other: &Self) -> Self
    where
        T: Scalar,
        E: Entry<T>,
    {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn scale<T>(&self, s: E) -> Self
    where
        T: Scalar,
        E: Entry<T>,
    {
        self.map(|a| a * s)
    }

    pub fn mul<T>(&self, other: &Self) -> Self
    where
        T: Scalar,
        E: Entry<T>,
    {
        assert_eq!(self.cols, other.rows, "matmul dimension mismatch");
        Mat::from_fn(self.rows, other.cols, |i, j| {
            let mut acc = E::zero();
            for k in 0..self.cols {
                acc += self.at(i, k) * other.at(k, j);
            }
            acc
        })
    }

    pub fn mul_vec<T>(&self, v: &[E]) -> Vec<E>
    where
        T: Scalar,
        E: Entry<T>,
    {
        assert_eq!(self.cols, v.len(), "matvec dimension mismatch");
        (0..self.rows)
            .map(|i| {
                let mut acc = E::zero();
                for k in 0..self.cols {
                    acc += self.at(i, k) * v[k];
                }
                acc
            })
            .collect()
    }

    /// Largest entry magnitude.
    pub fn max_abs<T>(&self) -> T
    where
        T: Scalar,
        E: Entry<T>,
    {
        self.data
            .iter()
            .map(|e| e.mag_sq())
            .fold(T::zero(), T::max)
            .sqrt()
    }

    /// Max absolute row sum (operator infinity norm).
    pub fn norm_inf<T>(&self) -> T
    where
        T: Scalar,
        E: Entry<T>,
    {
        (0..self.rows)
            .map(|i| {
                (0..self.cols)
                    .map(|j| self.at(i, j).mag_sq().sqrt())
                    .fold(T::zero(), |a, b| a + b)
            })
            .fold(T::zero(), T::max)
    }

    /// `(M + M^T) / 2`; removes round-off drift after congruence transforms.
    pub fn symmetrize<T>(&self) -> Self
    where
        T: Scalar,
        E: Entry<T>,
    {
        assert!(self.is_square());
        let half = E::from_real(T::cst(0.5));
        Mat::from_fn(self.rows, self.cols, |i, j| {
            (self.at(i, j) + self.at(j, i)) * half
        })
    }

    pub fn is_symmetric<T>(&self, tol: T) -> bool
    where
        T: Scalar,
        E: Entry<T>,
    {
        if !self.is_square() {
            return false;
        }
        for i in 0..self.rows {
            for j in (i + 1)..self.cols {
                if (self.at(i, j) - self.at(j, i)).mag_sq().sqrt() > tol {
                    return false;
                }
            }
        }
        true
    }

    /// Determinant via LU with partial pivoting; exact zero for a matrix with
    /// a vanishing pivot.
    pub fn det<T>(&self) -> E
    where
        T: Scalar,
        E: Entry<T>,
    {
        assert!(self.is_square(), "determinant of non-square matrix");
        let n = self.rows;
        let mut a = self.clone();
        let mut det = E::one();
        for k in 0..n {
            let mut p = k;
            let mut best = a.at(k, k).mag_sq();
            for i in (k + 1)..n {
                let m = a.at(i, k).mag_sq();
                if m > best {
                    best = m;
                    p = i;
                }
            }
            if best == T::zero() {
                return E::zero();
            }
            if p != k {
                for j in 0..n {
                    let tmp = a.at(k, j);
                    a.set(k, j, a.at(p, j));
                    a.set(p, j, tmp);
                }
                det = -det;
            }
            let pivot = a.at(k, k);
            det *= pivot;
            for i in (k + 1)..n {
                let factor = a.at(i, k) / pivot;
                for j in k..n {
                    let v = a.at(i, j) - factor * a.at(k, j);
                    a.set(i, j, v);
                }
            }
        }
        det
    }

    /// Inverse via Gauss-Jordan with partial pivoting.
    pub fn inverse<T>(&self) -> Result<Self>
    where
        T: Scalar,
        E: Entry<T>,
    {
        assert!(self.is_square(), "inverse of non-square matrix");
        let n = self.rows;
        let mut a = self.clone();
        let mut inv: Mat<E> = identity(n);
        for k in 0..n {
            let mut p = k;
            let mut best = a.at(k, k).mag_sq();
            for i in (k + 1)..n {
                let m = a.at(i, k).mag_sq();
                if m > best {
                    best = m;
                    p = i;
                }
            }
            if best == T::zero() {
                return Err(Error::Singular(format!("zero pivot at column {k}")));
            }
            if p != k {
                for j in 0..n {
                    let tmp = a.at(k, j);
                    a.set(k, j, a.at(p, j));
                    a.set(p, j, tmp);
                    let tmp = inv.at(k, j);
                    inv.set(k, j, inv.at(p, j));
                    inv.set(p, j, tmp);
                }
            }
            let pivot = a.at(k, k);
            for j in 0..n {
                a.set(k, j, a.at(k, j) / pivot);
                inv.set(k, j, inv.at(k, j) / pivot);
            }
            for i in 0..n {
                if i == k {
                    continue;
                }
                let factor = a.at(i, k);
                if factor == E::zero() {
                    continue;
                }
                for j in 0..n {
                    let v = a.at(i, j) - factor * a.at(k, j);
                    a.set(i, j, v);
                    let v = inv.at(i, j) - factor * inv.at(k, j);
                    inv.set(i, j, v);
                }
            }
        }
        Ok(inv)
    }

    /// Cheap condition estimate `||M||_inf * ||M^-1||_inf`.
    pub fn cond_estimate<T>(&self) -> Result<T>
    where
        T: Scalar,
        E: Entry<T>,
    {
        Ok(self.norm_inf() * self.inverse()?.norm_inf())
    }
}

impl<T: Scalar> Mat<T> {
    /// Cholesky success test: does `M - shift*I` admit a factorization?
    fn cholesky_ok(&self, shift: T) -> bool {
        let n = self.rows;
        let mut l: Mat<T> = zeros::<T, T>(n, n);
        for i in 0..n {
            for j in 0..=i {
                let mut s = self.at(i, j) - if i == j { shift } else { T::zero() };
                for k in 0..j {
                    s = s - l.at(i, k) * l.at(j, k);
                }
                if i == j {
                    if s <= T::zero() {
                        return false;
                    }
                    l.set(i, j, s.sqrt());
                } else {
                    l.set(i, j, s / l.at(j, j));
                }
            }
        }
        true
    }

    /// Smallest eigenvalue of a real symmetric matrix by Cholesky bisection.
    pub fn sym_min_eig(&self) -> T {
        assert!(self.is_square());
        let bound = self.norm_inf() + T::one();
        let (mut lo, mut hi) = (-bound, bound);
        // invariant: cholesky_ok(lo) may fail, cholesky_ok(hi) fails
        if self.cholesky_ok(hi) {
            return hi;
        }
        if !self.cholesky_ok(lo) {
            return lo;
        }
        for _ in 0..80 {
            let mid = (lo + hi) * T::cst(0.5);
            if self.cholesky_ok(mid) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        lo
    }
}

// ---------------------------------------------------------------------------
// vector helpers

pub fn dot<T: Scalar, E: Entry<T>>(a: &[E], b: &[E]) -> E {
    assert_eq!(a.len(), b.len());
    let mut acc = E::zero();
    for (&x, &y) in a.iter().zip(b) {
        acc += x * y;
    }
    acc
}

pub fn norm2<T: Scalar>(v: &[T]) -> T {
    v.iter().map(|&x| x * x).sum::<T>().sqrt()
}

pub fn vec_add<T: Scalar, E: Entry<T>>(a: &[E], b: &[E]) -> Vec<E> {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(&x, &y)| x + y).collect()
}

pub fn vec_sub<T: Scalar, E: Entry<T>>(a: &[E], b: &[E]) -> Vec<E> {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(&x, &y)| x - y).collect()
}

pub fn vec_neg<T: Scalar, E: Entry<T>>(a: &[E]) -> Vec<E> {
    a.iter().map(|&x| -x).collect()
}

pub fn vec_scale<T: Scalar, E: Entry<T>>(a: &[E], s: E) -> Vec<E> {
    a.iter().map(|&x| x * s).collect()
}

pub fn complexify_vec<T: Scalar>(v: &[T]) -> Vec<Complex<T>> {
    v.iter().map(|&x| Complex::new(x, T::zero())).collect()
}
