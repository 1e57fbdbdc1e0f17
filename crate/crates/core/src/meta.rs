//! Metaplectic operators as words in generators, the conjugated shift
//! `mu(S) T_lambda mu(S)^-1`, and the residual of the symplectic
//! interaction identity for the STFT.
//!
//! Operators are defined by words rather than by matrices, so the sign
//! ambiguity of the metaplectic representation never appears at the operator
//! level: a word pins one concrete unitary, and its matrix is the ordered
//! product of the generator matrices.

use crate::atoms::AtomSum;
use crate::error::{Error, Result};
use crate::lattice::{is_symplectic, j_matrix};
use crate::linalg::{self, Mat};
use crate::Scalar;

/// Generator of the metaplectic word algebra.
///
/// * `Dilate(A)`: matrix `diag(A, A^-T)`, operator `|det A|^{-1/2} f(A^{-1} x)`.
/// * `FourierJ(sign)`: matrix `sign * J`; `-1` is the Fourier transform,
///   `+1` its inverse.
/// * `Chirp(C)`: matrix `[[I, 0], [C, I]]`, operator `exp(pi i x^T C x) f(x)`.
#[derive(Clone, Debug)]
pub enum MetaGen<T: Scalar> {
    Dilate(Mat<T>),
    FourierJ(i8),
    Chirp(Mat<T>),
}

impl<T: Scalar> MetaGen<T> {
    fn validate(&self, dim: usize) -> Result<()> {
        match self {
            MetaGen::Dilate(a) => {
                if !a.is_square() || a.rows() != dim {
                    return Err(Error::DimMismatch("dilation generator".into()));
                }
                if a.det().abs() <= T::cst(1e-14) {
                    return Err(Error::Singular("dilation generator".into()));
                }
            }
            MetaGen::FourierJ(s) => {
                if *s != 1 && *s != -1 {
                    return Err(Error::InvalidInput(format!(
                        "Fourier generator sign must be +1 or -1, got {s}"
                    )));
                }
            }
            MetaGen::Chirp(c) => {
                if !c.is_square() || c.rows() != dim {
                    return Err(Error::DimMismatch("chirp generator".into()));
                }
                if !c.is_symmetric(T::cst(1e-12)) {
                    return Err(Error::NotSymmetric("chirp generator".into()));
                }
            }
        }
        Ok(())
    }

    fn matrix(&self, dim: usize) -> Mat<T> {
        match self {
            MetaGen::Dilate(a) => {
                let ainv_t = a.inverse().expect("validated invertible").transpose();
                let z: Mat<T> = linalg::zeros::<T, T>(dim, dim);
                Mat::from_blocks(a, &z, &z, &ainv_t)
            }
            MetaGen::FourierJ(s) => j_matrix::<T>(dim).scale(T::cst(*s as f64)),
            MetaGen::Chirp(c) => {
                let id: Mat<T> = linalg::identity(dim);
                let z: Mat<T> = linalg::zeros::<T, T>(dim, dim);
                Mat::from_blocks(&id, &z, c, &id)
            }
        }
    }

    fn apply(&self, f: &AtomSum<T>) -> Result<AtomSum<T>> {
        match self {
            MetaGen::Dilate(a) => f.dilate(a),
            MetaGen::FourierJ(-1) => f.fourier(),
            MetaGen::FourierJ(_) => f.fourier_inverse(),
            MetaGen::Chirp(c) => f.chirp(c),
        }
    }

    fn inverted(&self) -> Self {
        match self {
            MetaGen::Dilate(a) => MetaGen::Dilate(a.inverse().expect("validated invertible")),
            MetaGen::FourierJ(s) => MetaGen::FourierJ(-s),
            MetaGen::Chirp(c) => MetaGen::Chirp(c.scale(-T::one())),
        }
    }
}

/// Word in metaplectic generators acting on `L^2(R^d)`.
///
/// The matrix is the product of generator matrices in list order, and the
/// operator composes in the same order: the last factor acts on the function
/// first.
#[derive(Clone, Debug)]
pub struct SympWord<T: Scalar> {
    dim: usize,
    factors: Vec<MetaGen<T>>,
}

impl<T: Scalar> SympWord<T> {
    pub fn new(dim: usize, factors: Vec<MetaGen<T>>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::DimMismatch("word dimension must be positive".into()));
        }
        for f in &factors {
            f.validate(dim)?;
        }
        let word = Self { dim, factors };
        let m = word.matrix();
        if !is_symplectic(&m, T::cst(1e-10))? {
            return Err(Error::InvalidInput(
                "word matrix failed the symplectic check".into(),
            ));
        }
        Ok(word)
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            dim,
            factors: vec![],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn factors(&self) -> &[MetaGen<T>] {
        &self.factors
    }

    pub fn is_identity(&self) -> bool {
        self.factors.is_empty()
    }

    /// Ordered product of the generator matrices; always symplectic.
    pub fn matrix(&self) -> Mat<T> {
        let mut m: Mat<T> = linalg::identity(2 * self.dim);
        for f in &self.factors {
            m = m.mul(&f.matrix(self.dim));
        }
        m
    }

    /// Applies the word's operator; the rightmost factor acts first so the
    /// realized unitary matches [`Self::matrix`] up to the metaplectic sign.
    pub fn apply(&self, f: &AtomSum<T>) -> Result<AtomSum<T>> {
        if f.dim() != self.dim {
            return Err(Error::DimMismatch("word applied to wrong dimension".into()));
        }
        let mut out = f.clone();
        for g in self.factors.iter().rev() {
            out = g.apply(&out)?;
        }
        Ok(out)
    }

    /// Reversed list of inverted generators; inverts both the matrix and the
    /// operator exactly.
    pub fn inverse(&self) -> Self {
        Self {
            dim: self.dim,
            factors: self.factors.iter().rev().map(MetaGen::inverted).collect(),
        }
    }

    pub fn concat(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::DimMismatch("concatenated words".into()));
        }
        let mut factors = self.factors.clone();
        factors.extend(other.factors.iter().cloned());
        Ok(Self {
            dim: self.dim,
            factors,
        })
    }

    /// `T_lambda^S f = mu(S) T_lambda mu(S)^-1 f`.
    pub fn s_shift(&self, lambda: &[T], f: &AtomSum<T>) -> Result<AtomSum<T>> {
        let inner = self.inverse().apply(f)?;
        self.apply(&inner.translate(lambda))
    }
}

/// Factors an `SL_2(R)` matrix into a word whose matrix reproduces it.
///
/// With `S = [[a, b], [c, d]]` and `|b|` above the branch threshold the word
/// is `Chirp(d/b) . Dilate(b) . FourierJ(-1) . Chirp(a/b)`; otherwise `S` is
/// lower triangular and factors as `Chirp(c/a) . Dilate(a)`. Identity factors
/// are dropped.
pub fn word_for_sl2<T: Scalar>(s: &Mat<T>) -> Result<SympWord<T>> {
    if !s.is_square() || s.rows() != 2 {
        return Err(Error::DimMismatch("word_for_sl2 needs a 2x2 matrix".into()));
    }
    let det = s.det();
    if (det - T::one()).abs() > T::cst(1e-10) {
        return Err(Error::NotUnimodular(det.to_f64().unwrap_or(f64::NAN)));
    }
    let (a, b) = (s.at(0, 0), s.at(0, 1));
    let (c, d) = (s.at(1, 0), s.at(1, 1));
    let mut factors = Vec::new();
    let chirp1 = |g: T| Mat::from_rows(vec![vec![g]]);
    // the generic branch divides by b; keep it away from tiny b
    if b.abs() > T::cst(1e-8) {
        if d != T::zero() {
            factors.push(MetaGen::Chirp(chirp1(d / b)));
        }
        if b != T::one() {
            factors.push(MetaGen::Dilate(chirp1(b)));
        }
        factors.push(MetaGen::FourierJ(-1));
        if a != T::zero() {
            factors.push(MetaGen::Chirp(chirp1(a / b)));
        }
    } else {
        if c != T::zero() {
            factors.push(MetaGen::Chirp(chirp1(c / a)));
        }
        if a != T::one() {
            factors.push(MetaGen::Dilate(chirp1(a)));
        }
    }
    SympWord::new(1, factors)
}

/// Residual of the interaction identity in magnitude form:
/// `| |V_g f(S z)| - |V_{U^-1 g}(U^-1 f)(z)| |` with `U` the word's operator
/// and `S` its matrix. The magnitude form is used because the operator sign
/// and the global phase factor drop out of spectrograms.
pub fn interaction_residual<T: Scalar>(
    word: &SympWord<T>,
    f: &AtomSum<T>,
    g: &AtomSum<T>,
    z: &[T],
) -> Result<T> {
    let d = word.dim();
    if f.dim() != d || g.dim() != d || z.len() != 2 * d {
        return Err(Error::DimMismatch("interaction residual arguments".into()));
    }
    let s = word.matrix();
    let sz = s.mul_vec(&z.to_vec());
    let lhs = f.stft(g, &sz[..d], &sz[d..])?.norm();
    let inv = word.inverse();
    let fi = inv.apply(f)?;
    let gi = inv.apply(g)?;
    let rhs = fi.stft(&gi, &z[..d], &z[d..])?.norm();
    Ok((lhs - rhs).abs())
}
