//! Exact closed-form function algebra: finite sums of generalized Gaussian
//! atoms, closed under translation, modulation, reflection, Fourier
//! transform, dilation, chirp multiplication and complex conjugation, with
//! closed-form inner products and STFT values.
//!
//! An atom is `f(t) = c exp(-pi (t-a)^T M (t-a)) exp(2 pi i b.t)` with a
//! complex amplitude `c`, real center `a`, real frequency `b` and a complex
//! symmetric width matrix `M` whose real part is positive definite. Every
//! operator below maps this canonical form to itself by exact field
//! arithmetic on `(c, a, b, M)`, so compositions never accumulate
//! re-normalization drift.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::linalg::{self, complexify_vec, dot, vec_add, vec_neg, vec_sub, Mat};
use crate::Scalar;

/// Condition-estimate ceiling beyond which width matrices are treated as
/// numerically singular.
const COND_LIMIT: f64 = 1e12;

/// Single generalized Gaussian atom.
#[derive(Clone, Debug)]
pub struct GaussAtom<T: Scalar> {
    dim: usize,
    amp: Complex<T>,
    center: Vec<T>,
    freq: Vec<T>,
    width: Mat<Complex<T>>,
}

impl<T: Scalar> GaussAtom<T> {
    /// Validates the canonical-form invariants: `M` symmetric within `1e-12`
    /// entrywise and `Re M` positive definite.
    pub fn new(
        amp: Complex<T>,
        center: Vec<T>,
        freq: Vec<T>,
        width: Mat<Complex<T>>,
    ) -> Result<Self> {
        let dim = center.len();
        if dim == 0 || freq.len() != dim || !width.is_square() || width.rows() != dim {
            return Err(Error::DimMismatch(format!(
                "atom fields disagree: center {}, freq {}, width {}x{}",
                center.len(),
                freq.len(),
                width.rows(),
                width.cols()
            )));
        }
        if !width.is_symmetric(T::cst(1e-12)) {
            return Err(Error::NotSymmetric("atom width matrix".into()));
        }
        let min_eig = width.real_part().sym_min_eig();
        if min_eig <= T::cst(1e-12) {
            return Err(Error::NotPositiveDefinite(min_eig.to_f64().unwrap_or(0.0)));
        }
        Ok(Self {
            dim,
            amp,
            center,
            freq,
            width,
        })
    }

    /// `exp(-pi |t|^2)` in dimension `d`: unit amplitude, centered, Fourier
    /// invariant.
    pub fn standard(dim: usize) -> Self {
        Self {
            dim,
            amp: Complex::new(T::one(), T::zero()),
            center: vec![T::zero(); dim],
            freq: vec![T::zero(); dim],
            width: linalg::identity::<T, Complex<T>>(dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn amp(&self) -> Complex<T> {
        self.amp
    }

    pub fn center(&self) -> &[T] {
        &self.center
    }

    pub fn freq(&self) -> &[T] {
        &self.freq
    }

    pub fn width(&self) -> &Mat<Complex<T>> {
        &self.width
    }

    /// Canonical pointwise value.
    pub fn eval(&self, t: &[T]) -> Complex<T> {
        assert_eq!(t.len(), self.dim, "evaluation point dimension mismatch");
        let shifted = complexify_vec(&vec_sub::<T, T>(t, &self.center));
        let q = dot(&shifted, &self.width.mul_vec(&shifted));
        let two_pi = T::TAU();
        let phase = Complex::new(T::zero(), two_pi * dot::<T, T>(&self.freq, t));
        self.amp * (-q * Complex::new(T::PI(), T::zero()) + phase).exp()
    }

    /// Upper bound on the modulus: `|c|` and the decay rate `lambda_min(Re M)`
    /// together with `||a||` control the Gaussian tail.
    pub(crate) fn tail_data(&self) -> (T, T, T) {
        let rate = self.width.real_part().sym_min_eig();
        (self.amp.norm(), rate, linalg::norm2(&self.center))
    }
}

/// Finite sum of atoms sharing one dimension; the empty sum is the zero
/// function.
#[derive(Clone, Debug)]
pub struct AtomSum<T: Scalar> {
    dim: usize,
    atoms: Vec<GaussAtom<T>>,
}

impl<T: Scalar> AtomSum<T> {
    pub fn zero(dim: usize) -> Self {
        assert!(dim > 0);
        Self { dim, atoms: vec![] }
    }

    pub fn from_atoms(dim: usize, atoms: Vec<GaussAtom<T>>) -> Result<Self> {
        if atoms.iter().any(|a| a.dim != dim) {
            return Err(Error::DimMismatch(
                "all atoms of a sum must share the ambient dimension".into(),
            ));
        }
        Ok(Self { dim, atoms })
    }

    pub fn single(atom: GaussAtom<T>) -> Self {
        Self {
            dim: atom.dim,
            atoms: vec![atom],
        }
    }

    /// The standard Gaussian `exp(-pi |t|^2)` as a one-atom sum.
    pub fn standard_gaussian(dim: usize) -> Self {
        Self::single(GaussAtom::standard(dim))
    }

    /// `exp(-|t|^2)`: width `I / pi`, the usual non-normalized real Gaussian
    /// window.
    pub fn plain_gaussian(dim: usize) -> Self {
        let w = linalg::identity::<T, Complex<T>>(dim).scale(Complex::new(T::PI().recip(), T::zero()));
        Self::single(
            GaussAtom::new(
                Complex::new(T::one(), T::zero()),
                vec![T::zero(); dim],
                vec![T::zero(); dim],
                w,
            )
            .expect("plain Gaussian is a valid atom"),
        )
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn atoms(&self) -> &[GaussAtom<T>] {
        &self.atoms
    }

    pub fn is_zero(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::DimMismatch("sum of atom sums".into()));
        }
        let mut atoms = self.atoms.clone();
        atoms.extend(other.atoms.iter().cloned());
        Ok(Self {
            dim: self.dim,
            atoms,
        })
    }

    pub fn scale(&self, s: Complex<T>) -> Self {
        let atoms = self
            .atoms
            .iter()
            .map(|a| GaussAtom {
                amp: a.amp * s,
                ..a.clone()
            })
            .collect();
        Self {
            dim: self.dim,
            atoms,
        }
    }

    /// `f(. - tau)`: center shift plus the phase the canonical form absorbs
    /// into the amplitude.
    pub fn translate(&self, tau: &[T]) -> Self {
        assert_eq!(tau.len(), self.dim, "translation vector dimension mismatch");
        let atoms = self
            .atoms
            .iter()
            .map(|a| GaussAtom {
                amp: a.amp * unit_phase(-T::TAU() * dot::<T, T>(&a.freq, tau)),
                center: vec_add::<T, T>(&a.center, tau),
                ..a.clone()
            })
            .collect();
        Self {
            dim: self.dim,
            atoms,
        }
    }

    /// `exp(2 pi i nu.t) f(t)`.
    pub fn modulate(&self, nu: &[T]) -> Self {
        assert_eq!(nu.len(), self.dim, "modulation vector dimension mismatch");
        let atoms = self
            .atoms
            .iter()
            .map(|a| GaussAtom {
                freq: vec_add::<T, T>(&a.freq, nu),
                ..a.clone()
            })
            .collect();
        Self {
            dim: self.dim,
            atoms,
        }
    }

    /// `f(-t)`.
    pub fn reflect(&self) -> Self {
        let atoms = self
            .atoms
            .iter()
            .map(|a| GaussAtom {
                center: vec_neg::<T, T>(&a.center),
                freq: vec_neg::<T, T>(&a.freq),
                ..a.clone()
            })
            .collect();
        Self {
            dim: self.dim,
            atoms,
        }
    }

    /// Pointwise complex conjugate.
    pub fn conjugate(&self) -> Self {
        let atoms = self
            .atoms
            .iter()
            .map(|a| GaussAtom {
                amp: a.amp.conj(),
                freq: vec_neg::<T, T>(&a.freq),
                width: a.width.conj(),
                ..a.clone()
            })
            .collect();
        Self {
            dim: self.dim,
            atoms,
        }
    }

    /// Unitary Fourier transform, atom by atom:
    /// `exp(-pi t^T M t)` maps to `det(M)^{-1/2} exp(-pi w^T M^{-1} w)` and
    /// the translation/modulation parameters exchange roles.
    pub fn fourier(&self) -> Result<Self> {
        let mut atoms = Vec::with_capacity(self.atoms.len());
        for a in &self.atoms {
            let cond = a.width.cond_estimate()?;
            if cond > T::cst(COND_LIMIT) {
                return Err(Error::IllConditioned(cond.to_f64().unwrap_or(f64::INFINITY)));
            }
            let dis = det_inv_sqrt(&a.width)?;
            let minv = a.width.inverse()?.symmetrize();
            let phase = unit_phase(T::TAU() * dot::<T, T>(&a.center, &a.freq));
            atoms.push(GaussAtom {
                dim: a.dim,
                amp: a.amp * dis * phase,
                center: a.freq.clone(),
                freq: vec_neg::<T, T>(&a.center),
                width: minv,
            });
        }
        Ok(Self {
            dim: self.dim,
            atoms,
        })
    }

    /// Inverse Fourier transform; exact because `F^-1 = R F = F R`.
    pub fn fourier_inverse(&self) -> Result<Self> {
        Ok(self.fourier()?.reflect())
    }

    /// `|det A|^{-1/2} f(A^{-1} x)` for an invertible real matrix `A`.
    pub fn dilate(&self, a_mat: &Mat<T>) -> Result<Self> {
        if !a_mat.is_square() || a_mat.rows() != self.dim {
            return Err(Error::DimMismatch("dilation matrix".into()));
        }
        let det = a_mat.det();
        if det.abs() <= T::cst(1e-14) {
            return Err(Error::Singular("dilation by a singular matrix".into()));
        }
        let ainv = a_mat.inverse()?;
        let ainv_t = ainv.transpose();
        let ainv_c = ainv.complexify();
        let ainv_t_c = ainv_t.complexify();
        let gain = Complex::new(det.abs().sqrt().recip(), T::zero());
        let atoms = self
            .atoms
            .iter()
            .map(|a| GaussAtom {
                dim: a.dim,
                amp: a.amp * gain,
                center: a_mat.mul_vec(&a.center),
                freq: ainv_t.mul_vec(&a.freq),
                width: ainv_t_c.mul(&a.width).mul(&ainv_c).symmetrize(),
            })
            .collect();
        Ok(Self {
            dim: self.dim,
            atoms,
        })
    }

    /// `exp(pi i x^T C x) f(x)` for a real symmetric `C`: the width gains
    /// `-iC` and the cross terms of the `(t-a)` expansion land in the
    /// frequency and amplitude.
    pub fn chirp(&self, c_mat: &Mat<T>) -> Result<Self> {
        if !c_mat.is_square() || c_mat.rows() != self.dim {
            return Err(Error::DimMismatch("chirp matrix".into()));
        }
        if !c_mat.is_symmetric(T::cst(1e-12)) {
            return Err(Error::NotSymmetric("chirp matrix".into()));
        }
        let minus_i_c = c_mat.map(|x| Complex::new(T::zero(), -x));
        let atoms = self
            .atoms
            .iter()
            .map(|a| {
                let ca = c_mat.mul_vec(&a.center);
                let quad = dot::<T, T>(&a.center, &ca);
                GaussAtom {
                    dim: a.dim,
                    amp: a.amp * unit_phase(-T::PI() * quad),
                    center: a.center.clone(),
                    freq: vec_add::<T, T>(&a.freq, &ca),
                    width: a.width.add(&minus_i_c),
                }
            })
            .collect();
        Ok(Self {
            dim: self.dim,
            atoms,
        })
    }

    pub fn eval(&self, t: &[T]) -> Complex<T> {
        assert_eq!(t.len(), self.dim, "evaluation point dimension mismatch");
        self.atoms
            .iter()
            .fold(Complex::new(T::zero(), T::zero()), |acc, a| acc + a.eval(t))
    }

    /// `<f, g> = integral of f(t) conj(g(t)) dt`, exact Gram double sum via
    /// the complex Gaussian integral
    /// `int exp(-pi t^T N t + 2 pi w.t) dt = det(N)^{-1/2} exp(pi w^T N^{-1} w)`.
    pub fn inner_product(&self, other: &Self) -> Result<Complex<T>> {
        if self.dim != other.dim {
            return Err(Error::DimMismatch("inner product".into()));
        }
        let pi_c = Complex::new(T::PI(), T::zero());
        let mut acc = Complex::new(T::zero(), T::zero());
        for p in &self.atoms {
            let a1 = complexify_vec(&p.center);
            let m1a1 = p.width.mul_vec(&a1);
            let q1 = dot(&a1, &m1a1);
            for q in &other.atoms {
                let m2c = q.width.conj();
                let a2 = complexify_vec(&q.center);
                let m2a2 = m2c.mul_vec(&a2);
                let q2 = dot(&a2, &m2a2);
                let n = p.width.add(&m2c).symmetrize();
                let dis = det_inv_sqrt(&n)?;
                let ninv = n.inverse()?.symmetrize();
                let mut w = vec_add::<T, Complex<T>>(&m1a1, &m2a2);
                for (wk, (bf, bg)) in w.iter_mut().zip(p.freq.iter().zip(&q.freq)) {
                    *wk += Complex::new(T::zero(), *bf - *bg);
                }
                let wnw = dot(&w, &ninv.mul_vec(&w));
                let exponent = (wnw - q1 - q2) * pi_c;
                acc = acc + p.amp * q.amp.conj() * dis * exponent.exp();
            }
        }
        Ok(acc)
    }

    pub fn norm_sq(&self) -> Result<T> {
        Ok(self.inner_product(self)?.re)
    }

    /// `V_g f(x, omega) = <f, M_omega T_x g>`.
    pub fn stft(&self, window: &Self, x: &[T], omega: &[T]) -> Result<Complex<T>> {
        if window.dim != self.dim {
            return Err(Error::DimMismatch("stft window".into()));
        }
        assert_eq!(x.len(), self.dim, "stft time coordinate dimension");
        assert_eq!(omega.len(), self.dim, "stft frequency coordinate dimension");
        let shifted = window.translate(x).modulate(omega);
        self.inner_product(&shifted)
    }

    /// Maximum modulus and maximum decay data over atoms, for tail bounds.
    pub(crate) fn tail_data(&self) -> Option<(T, T, T)> {
        if self.atoms.is_empty() {
            return None;
        }
        let mut amp_sum = T::zero();
        let mut rate = T::infinity();
        let mut center = T::zero();
        for a in &self.atoms {
            let (c, r, n) = a.tail_data();
            amp_sum = amp_sum + c;
            rate = rate.min(r);
            center = center.max(n);
        }
        Some((amp_sum, rate, center))
    }
}

/// `exp(i angle)` as a complex scalar.
pub(crate) fn unit_phase<T: Scalar>(angle: T) -> Complex<T> {
    Complex::from_polar(T::one(), angle)
}

/// `det(M)^{-1/2}` for a complex symmetric `M` with positive definite real
/// part, on the branch obtained by continuous deformation from `Re M`.
///
/// The segment `Re M + i s Im M`, `s` in `[0,1]`, stays inside the convex set
/// of symmetric matrices with positive definite real part, where the
/// determinant never vanishes; unwrapping the determinant's argument along
/// the segment therefore pins the analytic square-root branch that continues
/// the classical positive value at `s = 0`.
pub(crate) fn det_inv_sqrt<T: Scalar>(m: &Mat<Complex<T>>) -> Result<Complex<T>> {
    let p = m.real_part();
    let q = m.imag_part();
    let start = p.det();
    if start <= T::zero() {
        return Err(Error::NotPositiveDefinite(start.to_f64().unwrap_or(0.0)));
    }
    if q.max_abs() == T::zero() {
        return Ok(Complex::new(start.sqrt().recip(), T::zero()));
    }
    let pc = p.complexify();
    let mut steps = 8usize;
    loop {
        let mut theta = T::zero();
        let mut prev = Complex::new(start, T::zero());
        let mut ok = true;
        let mut last = prev;
        for k in 1..=steps {
            let s = T::cst(k as f64) / T::cst(steps as f64);
            let mk = pc.add(&q.map(|x| Complex::new(T::zero(), x * s)));
            let z = mk.det();
            if z.norm_sqr() == T::zero() {
                ok = false;
                break;
            }
            let dphi = (z / prev).arg();
            if dphi.abs() > T::cst(0.5) {
                ok = false;
                break;
            }
            theta = theta + dphi;
            prev = z;
            last = z;
        }
        if ok {
            let magnitude = last.norm().sqrt().recip();
            return Ok(Complex::from_polar(magnitude, -theta * T::cst(0.5)));
        }
        steps *= 2;
        if steps > 1 << 14 {
            return Err(Error::IllConditioned(f64::INFINITY));
        }
    }
}
