//! Full-rank lattices in R^n: generating matrices, reciprocal lattices,
//! fundamental domains, classification and the two factorizations the
//! counterexample builders rely on.

use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::linalg::{self, norm2, Mat};
use crate::{Rational, Scalar};

/// Default absolute tolerance on integer-coordinate residuals for point
/// membership; lattices here are exact matrices, not noisy data.
pub const MEMBERSHIP_TOL: f64 = 1e-9;

/// Full-rank lattice `A Z^n` given by an invertible generating matrix `A`
/// whose columns are the basis vectors.
#[derive(Clone, Debug)]
pub struct Lattice<T: Scalar> {
    dim: usize,
    gen: Mat<T>,
    inv: Mat<T>,
}

impl<T: Scalar> Lattice<T> {
    pub fn new(gen: Mat<T>) -> Result<Self> {
        if !gen.is_square() || gen.rows() == 0 {
            return Err(Error::DimMismatch(format!(
                "lattice generator must be square and non-empty, got {}x{}",
                gen.rows(),
                gen.cols()
            )));
        }
        let det = gen.det();
        if det.abs() <= T::cst(1e-12) {
            return Err(Error::Singular(format!(
                "lattice generator has |det| = {:e} <= 1e-12",
                det.abs().to_f64().unwrap_or(0.0)
            )));
        }
        let inv = gen.inverse()?;
        Ok(Self {
            dim: gen.rows(),
            gen,
            inv,
        })
    }

    /// `a Z^n` for a scalar spacing `a`.
    pub fn scaled_integer(dim: usize, a: T) -> Result<Self> {
        Self::new(Mat::from_fn(dim, dim, |i, j| {
            if i == j {
                a
            } else {
                T::zero()
            }
        }))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generator(&self) -> &Mat<T> {
        &self.gen
    }

    /// Lattice point `A k` for an integer index vector `k`.
    pub fn point(&self, k: &[i64]) -> Vec<T> {
        assert_eq!(k.len(), self.dim);
        let kv: Vec<T> = k.iter().map(|&z| T::cst(z as f64)).collect();
        self.gen.mul_vec(&kv)
    }

    /// Reciprocal (dual) lattice, generated by `A^-T`.
    pub fn reciprocal(&self) -> Self {
        let gen = self.inv.transpose();
        let inv = self.gen.transpose();
        Self {
            dim: self.dim,
            gen,
            inv,
        }
    }

    /// `|det A|^-1`, independent of the choice of basis.
    pub fn density(&self) -> T {
        self.gen.det().abs().recip()
    }

    /// Membership up to `tol` on the integer-coordinate residual.
    pub fn contains(&self, x: &[T], tol: T) -> bool {
        assert_eq!(x.len(), self.dim, "point dimension mismatch");
        let z = self.inv.mul_vec(x);
        z.iter().all(|&c| (c - c.round()).abs() <= tol)
    }

    /// Integer index vectors `k` with `||A k||_2 <= radius`, in lexicographic
    /// order.
    pub fn enumerate_indices(&self, radius: T) -> Vec<Vec<i64>> {
        assert!(radius >= T::zero());
        // ||k||_inf <= ||A^-1||_inf * ||Ak||_inf <= ||A^-1||_inf * radius
        let bound_f = (self.inv.norm_inf() * radius).to_f64().unwrap_or(0.0);
        let bound = bound_f.ceil() as i64;
        let mut out = Vec::new();
        let mut k = vec![-bound; self.dim];
        loop {
            let p = self.point(&k);
            if norm2(&p) <= radius {
                out.push(k.clone());
            }
            // odometer increment, last coordinate fastest: emits lexicographic order
            let mut axis = self.dim;
            loop {
                if axis == 0 {
                    return out;
                }
                axis -= 1;
                if k[axis] < bound {
                    k[axis] += 1;
                    for c in k.iter_mut().skip(axis + 1) {
                        *c = -bound;
                    }
                    break;
                }
            }
        }
    }

    /// Lattice points with Euclidean norm `<= radius`, ordered by the
    /// lexicographic order of their integer coordinates.
    pub fn enumerate(&self, radius: T) -> Vec<Vec<T>> {
        self.enumerate_indices(radius)
            .iter()
            .map(|k| self.point(k))
            .collect()
    }

    /// Shortest nonzero lattice vector; ties broken by lexicographically
    /// smallest integer coordinates. Returns `(index, point)`.
    pub fn shortest_nonzero(&self) -> (Vec<i64>, Vec<T>) {
        // grow the search radius until a nonzero vector shows up
        let mut radius = self.gen.norm_inf();
        for _ in 0..64 {
            let mut best: Option<(Vec<i64>, Vec<T>, T)> = None;
            for k in self.enumerate_indices(radius) {
                if k.iter().all(|&z| z == 0) {
                    continue;
                }
                let p = self.point(&k);
                let n = norm2(&p);
                let better = match &best {
                    None => true,
                    Some((bk, _, bn)) => n < *bn - T::cst(1e-12) || (n <= *bn + T::cst(1e-12) && k < *bk),
                };
                if better {
                    best = Some((k, p, n));
                }
            }
            if let Some((k, p, _)) = best {
                return (k, p);
            }
            radius = radius * T::cst(2.0);
        }
        unreachable!("full-rank lattice has a shortest nonzero vector");
    }

    /// Images under `A` of the `m^d` uniform grid points of `[0,1)^d`.
    pub fn fundamental_domain_grid(&self, m: usize) -> Vec<Vec<T>> {
        assert!(m >= 1);
        let d = self.dim;
        let mut out = Vec::with_capacity(m.pow(d as u32));
        let mut idx = vec![0usize; d];
        loop {
            let frac: Vec<T> = idx
                .iter()
                .map(|&i| T::cst(i as f64) / T::cst(m as f64))
                .collect();
            out.push(self.gen.mul_vec(&frac));
            let mut axis = d;
            loop {
                if axis == 0 {
                    return out;
                }
                axis -= 1;
                idx[axis] += 1;
                if idx[axis] < m {
                    break;
                }
                idx[axis] = 0;
            }
        }
    }

    /// Classification with priority Rectangular > Separable > Symplectic >
    /// General; the first matching tag wins.
    pub fn classify(&self) -> LatticeClass<T> {
        if self.is_rectangular() {
            return LatticeClass::Rectangular;
        }
        let n = self.dim;
        if n % 2 != 0 {
            return LatticeClass::General;
        }
        if self.is_separable() {
            return LatticeClass::Separable;
        }
        if n == 2 {
            // every invertible 2x2 generator is a scaled SL2 matrix after an
            // orientation-fixing column flip
            let (alpha, s) = sl2_normalize(&self.gen).expect("generator is invertible");
            return LatticeClass::Symplectic { alpha, s };
        }
        let d2 = n as i32;
        let alpha = self.gen.det().abs().powf(T::one() / T::cst(d2 as f64));
        let s = self.gen.scale(alpha.recip());
        if is_symplectic(&s, T::cst(1e-9)).unwrap_or(false) {
            return LatticeClass::Symplectic { alpha, s };
        }
        LatticeClass::General
    }

    fn is_rectangular(&self) -> bool {
        // some column permutation of the generator is diagonal: every column
        // has exactly one entry that is not negligibly small
        let scale = self.gen.max_abs();
        let tol = T::cst(1e-12) * scale;
        for j in 0..self.dim {
            let nonzero = (0..self.dim)
                .filter(|&i| self.gen.at(i, j).abs() > tol)
                .count();
            if nonzero != 1 {
                return false;
            }
        }
        true
    }

    fn is_separable(&self) -> bool {
        // after a column permutation the generator is diag(A, B): each column
        // is supported entirely in the first or entirely in the second half
        let n = self.dim;
        let d = n / 2;
        let scale = self.gen.max_abs();
        let tol = T::cst(1e-12) * scale;
        let mut first = 0usize;
        let mut second = 0usize;
        for j in 0..n {
            let top = (0..d).any(|i| self.gen.at(i, j).abs() > tol);
            let bottom = (d..n).any(|i| self.gen.at(i, j).abs() > tol);
            match (top, bottom) {
                (true, false) => first += 1,
                (false, true) => second += 1,
                _ => return false,
            }
        }
        first == d && second == d
    }
}

/// Classification tag of a lattice generator.
#[derive(Clone, Debug)]
pub enum LatticeClass<T: Scalar> {
    /// `gen = alpha * S` with `S` symplectic and `alpha > 0`.
    Symplectic { alpha: T, s: Mat<T> },
    Rectangular,
    Separable,
    General,
}

/// The standard symplectic matrix `[[0, -I], [I, 0]]` in dimension `2d`.
pub fn j_matrix<T: Scalar>(d: usize) -> Mat<T> {
    Mat::from_fn(2 * d, 2 * d, |i, j| {
        if i < d && j == i + d {
            -T::one()
        } else if i >= d && j == i - d {
            T::one()
        } else {
            T::zero()
        }
    })
}

/// `S^T J S = J` up to `tol` in the max norm.
pub fn is_symplectic<T: Scalar>(s: &Mat<T>, tol: T) -> Result<bool> {
    if !s.is_square() || s.rows() % 2 != 0 || s.rows() == 0 {
        return Err(Error::DimMismatch(format!(
            "symplectic test needs an even-dimension square matrix, got {}x{}",
            s.rows(),
            s.cols()
        )));
    }
    let j = j_matrix::<T>(s.rows() / 2);
    let lhs = s.transpose().mul(&j).mul(s);
    Ok(lhs.sub(&j).max_abs() <= tol)
}

/// Block criterion for membership in the symplectic group: with
/// `S = [[A, B], [C, D]]`, the matrix is symplectic iff `A^T C` and `B^T D`
/// are symmetric and `A^T D - C^T B = I`.
pub fn symplectic_block_criterion<T: Scalar>(s: &Mat<T>, tol: T) -> Result<bool> {
    if !s.is_square() || s.rows() % 2 != 0 || s.rows() == 0 {
        return Err(Error::DimMismatch(format!(
            "block criterion needs an even-dimension square matrix, got {}x{}",
            s.rows(),
            s.cols()
        )));
    }
    let d = s.rows() / 2;
    let a = s.block(0, 0, d, d);
    let b = s.block(0, d, d, d);
    let c = s.block(d, 0, d, d);
    let dd = s.block(d, d, d, d);
    let atc = a.transpose().mul(&c);
    let btd = b.transpose().mul(&dd);
    let atd_ctb = a.transpose().mul(&dd).sub(&c.transpose().mul(&b));
    let id: Mat<T> = linalg::identity(d);
    Ok(atc.sub(&atc.transpose()).max_abs() <= tol
        && btd.sub(&btd.transpose()).max_abs() <= tol
        && atd_ctb.sub(&id).max_abs() <= tol)
}

/// Normalizes an invertible 2x2 generator `L` into `(alpha, S)` with
/// `alpha > 0`, `det S = 1` and `(alpha S) Z^2 = L Z^2`.
///
/// A negative determinant is fixed up first by flipping the sign of the
/// second column, which generates the same lattice; then `alpha = sqrt(det)`
/// is the unique positive scale making `S = L / alpha` unimodular.
pub fn sl2_normalize<T: Scalar>(l: &Mat<T>) -> Result<(T, Mat<T>)> {
    if !l.is_square() || l.rows() != 2 {
        return Err(Error::DimMismatch(format!(
            "sl2_normalize needs a 2x2 matrix, got {}x{}",
            l.rows(),
            l.cols()
        )));
    }
    let det = l.det();
    if det.abs() <= T::cst(1e-12) {
        return Err(Error::Singular("sl2_normalize of a singular matrix".into()));
    }
    let flipped = if det < T::zero() {
        Mat::from_fn(2, 2, |i, j| if j == 1 { -l.at(i, j) } else { l.at(i, j) })
    } else {
        l.clone()
    };
    let alpha = det.abs().sqrt();
    let s = flipped.scale(alpha.recip());
    Ok((alpha, s))
}

/// Diagonal rational envelope of a rational generator: returns a rectangular
/// lattice `D Z^n` with `L Z^n` contained in it, together with the exact
/// diagonal entries. Entries of `L` are `(numerator, denominator)` pairs.
///
/// `D_ii` is the reciprocal of the product of the (reduced, positive)
/// denominators in row `i`; containment of `L z` for every `||z||_inf <= 3`
/// is verified exactly in rational arithmetic before returning.
pub fn rational_envelope<T: Scalar>(
    entries: &[Vec<(i64, i64)>],
) -> Result<(Vec<Rational>, Lattice<T>)> {
    let n = entries.len();
    if n == 0 || entries.iter().any(|row| row.len() != n) {
        return Err(Error::DimMismatch(
            "rational generator must be square and non-empty".into(),
        ));
    }
    let mut q = vec![vec![Rational::default(); n]; n];
    for (i, row) in entries.iter().enumerate() {
        for (j, &(num, den)) in row.iter().enumerate() {
            if den == 0 {
                return Err(Error::ZeroDenominator(i, j));
            }
            q[i][j] = Ratio::new(num, den); // reduced, denominator > 0
        }
    }
    let mut diag = Vec::with_capacity(n);
    for row in &q {
        let prod: i64 = row.iter().map(|r| *r.denom()).product();
        diag.push(Ratio::new(1, prod));
    }
    // exhaustive containment check over the integer box
    let mut z = vec![-3i64; n];
    loop {
        for i in 0..n {
            let mut acc = Rational::default();
            for j in 0..n {
                acc += q[i][j] * Ratio::from_integer(z[j]);
            }
            if !(acc / diag[i]).is_integer() {
                return Err(Error::InvalidInput(format!(
                    "envelope containment failed at z = {z:?}, row {i}"
                )));
            }
        }
        let mut axis = n;
        loop {
            if axis == 0 {
                let gen = Mat::from_fn(n, n, |i, j| {
                    if i == j {
                        T::cst(*diag[i].numer() as f64) / T::cst(*diag[i].denom() as f64)
                    } else {
                        T::zero()
                    }
                });
                return Ok((diag, Lattice::new(gen)?));
            }
            axis -= 1;
            if z[axis] < 3 {
                z[axis] += 1;
                for c in z.iter_mut().skip(axis + 1) {
                    *c = -3;
                }
                break;
            }
        }
    }
}

/// Float-valued generator of a rational matrix, for sampling points.
pub fn rational_to_mat<T: Scalar>(entries: &[Vec<(i64, i64)>]) -> Result<Mat<T>> {
    let n = entries.len();
    if n == 0 || entries.iter().any(|row| row.len() != n) {
        return Err(Error::DimMismatch(
            "rational generator must be square and non-empty".into(),
        ));
    }
    for (i, row) in entries.iter().enumerate() {
        for (j, &(_, den)) in row.iter().enumerate() {
            if den == 0 {
                return Err(Error::ZeroDenominator(i, j));
            }
        }
    }
    Ok(Mat::from_fn(n, n, |i, j| {
        let (num, den) = entries[i][j];
        T::cst(num as f64) / T::cst(den as f64)
    }))
}
