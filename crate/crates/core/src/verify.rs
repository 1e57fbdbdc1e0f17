//! Verification engine: spectrogram equality reports, phase-minimized
//! distance, slice difference grids, periodization bounds, the Bargmann
//! cross-check and the sampled numeric STFT path.

use num_complex::Complex;
use rustfft::{FftDirection, FftNum, FftPlanner};

use crate::atoms::{det_inv_sqrt, unit_phase, AtomSum};
use crate::error::{Error, Result};
use crate::factory::CounterexamplePair;
use crate::lattice::Lattice;
use crate::linalg::{norm2, Mat};
use crate::Scalar;

/// Outcome of comparing two spectrograms over a point set.
///
/// `max_rel_diff` is anchored to `reference_scale`, the largest magnitude
/// seen over the set, because spectrogram values decay like Gaussians across
/// any probe region.
#[derive(Clone, Debug)]
pub struct EqualityReport<T: Scalar> {
    pub n_points: usize,
    pub max_abs_diff: T,
    pub max_rel_diff: T,
    pub worst_point: Vec<T>,
    pub reference_scale: T,
}

impl<T: Scalar> EqualityReport<T> {
    pub fn passes(&self, tol: T) -> bool {
        self.max_rel_diff <= tol
    }
}

/// Uniform tensor grid: shared scalar step, per-axis origin and point count.
#[derive(Clone, Debug, PartialEq)]
pub struct GridSpec<T: Scalar> {
    pub origin: Vec<T>,
    pub step: T,
    pub npts: Vec<usize>,
}

impl<T: Scalar> GridSpec<T> {
    pub fn new(origin: Vec<T>, step: T, npts: Vec<usize>) -> Result<Self> {
        if origin.len() != npts.len() || origin.is_empty() {
            return Err(Error::DimMismatch("grid origin/extents".into()));
        }
        if step <= T::zero() {
            return Err(Error::InvalidInput("grid step must be positive".into()));
        }
        if npts.iter().any(|&n| n == 0) {
            return Err(Error::InvalidInput("grid extents must be positive".into()));
        }
        Ok(Self { origin, step, npts })
    }

    /// Centered cube grid `[-half, half]^d` with `n` points per axis.
    pub fn centered(dim: usize, half: T, n: usize) -> Self {
        assert!(n >= 2);
        let step = half * T::cst(2.0) / T::cst((n - 1) as f64);
        Self {
            origin: vec![-half; dim],
            step,
            npts: vec![n; dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.npts.len()
    }

    pub fn len(&self) -> usize {
        self.npts.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn point(&self, idx: &[usize]) -> Vec<T> {
        idx.iter()
            .zip(&self.origin)
            .map(|(&i, &o)| o + self.step * T::cst(i as f64))
            .collect()
    }

    /// Row-major iteration over all grid points (last axis fastest).
    pub fn points(&self) -> Vec<Vec<T>> {
        let mut out = Vec::with_capacity(self.len());
        let d = self.dim();
        let mut idx = vec![0usize; d];
        loop {
            out.push(self.point(&idx));
            let mut axis = d;
            loop {
                if axis == 0 {
                    return out;
                }
                axis -= 1;
                idx[axis] += 1;
                if idx[axis] < self.npts[axis] {
                    break;
                }
                idx[axis] = 0;
            }
        }
    }
}

/// `|V_g f(z)|` at a time-frequency point `z = (x, omega)`.
pub fn spectrogram<T: Scalar>(f: &AtomSum<T>, g: &AtomSum<T>, z: &[T]) -> Result<T> {
    let d = f.dim();
    if z.len() != 2 * d {
        return Err(Error::DimMismatch(
            "spectrogram point must have dimension 2d".into(),
        ));
    }
    Ok(f.stft(g, &z[..d], &z[d..])?.norm())
}

/// Compares the two spectrograms of a pair over a point set.
pub fn check_equality_on_set<T: Scalar>(
    pair: &CounterexamplePair<T>,
    points: &[Vec<T>],
) -> Result<EqualityReport<T>> {
    if points.is_empty() {
        return Err(Error::EmptyPoints);
    }
    let mut max_abs = T::zero();
    let mut scale = T::zero();
    let mut worst = points[0].clone();
    for z in points {
        let v1 = spectrogram(&pair.f1, &pair.window, z)?;
        let v2 = spectrogram(&pair.f2, &pair.window, z)?;
        let diff = (v1 - v2).abs();
        scale = scale.max(v1).max(v2);
        if diff > max_abs {
            max_abs = diff;
            worst = z.clone();
        }
    }
    let rel = if scale > T::zero() {
        max_abs / scale
    } else {
        T::zero()
    };
    Ok(EqualityReport {
        n_points: points.len(),
        max_abs_diff: max_abs,
        max_rel_diff: rel,
        worst_point: worst,
        reference_scale: scale,
    })
}

/// `min over |nu| = 1 of ||f1 - nu f2||^2 = ||f1||^2 + ||f2||^2 - 2 |<f1, f2>|`;
/// zero exactly when the two functions agree up to a global phase.
pub fn phase_distance<T: Scalar>(f1: &AtomSum<T>, f2: &AtomSum<T>) -> Result<T> {
    let n1 = f1.norm_sq()?;
    let n2 = f2.norm_sq()?;
    let ip = f1.inner_product(f2)?.norm();
    Ok((n1 + n2 - T::cst(2.0) * ip).max(T::zero()))
}

/// Values of
/// `| |V_g f1(x, omega)|^2 - |V_g f2(x, omega)|^2 |`
/// over a frequency grid at a fixed time slice `x`, row-major.
#[derive(Clone, Debug)]
pub struct SliceGrid<T: Scalar> {
    pub spec: GridSpec<T>,
    pub x: Vec<T>,
    pub values: Vec<T>,
}

impl<T: Scalar> SliceGrid<T> {
    pub fn max_value(&self) -> T {
        self.values.iter().copied().fold(T::zero(), T::max)
    }
}

/// Squared-spectrogram difference of the pair at time slice `x` over the
/// frequency grid; entries are nonnegative by construction.
pub fn qx_grid<T: Scalar>(
    pair: &CounterexamplePair<T>,
    x: &[T],
    spec: &GridSpec<T>,
) -> Result<SliceGrid<T>> {
    let d = pair.f1.dim();
    if x.len() != d || spec.dim() != d {
        return Err(Error::DimMismatch("qx slice coordinates".into()));
    }
    let mut values = Vec::with_capacity(spec.len());
    for omega in spec.points() {
        values.push(qx_value(pair, x, &omega)?);
    }
    Ok(SliceGrid {
        spec: spec.clone(),
        x: x.to_vec(),
        values,
    })
}

/// Single value of the squared-spectrogram difference.
pub fn qx_value<T: Scalar>(pair: &CounterexamplePair<T>, x: &[T], omega: &[T]) -> Result<T> {
    let v1 = pair.f1.stft(&pair.window, x, omega)?.norm_sqr();
    let v2 = pair.f2.stft(&pair.window, x, omega)?.norm_sqr();
    Ok((v1 - v2).abs())
}

/// Truncated minimum and maximum of
/// `sum over lattice points |F phi(t + lambda)|^2`
/// over the `m^d` fundamental-domain grid of the lattice.
///
/// The truncation at radius `r` is certified against an analytic Gaussian
/// tail bound driven by the slowest-decaying atom of `F phi`; the bound must
/// stay below `1e-14` of the largest partial sum, otherwise the required
/// radius is reported.
pub fn periodization_bounds<T: Scalar>(
    phi: &AtomSum<T>,
    lattice: &Lattice<T>,
    m: usize,
    r: T,
) -> Result<(T, T)> {
    if m < 8 {
        return Err(Error::InvalidInput(
            "periodization needs at least 8 grid points per axis".into(),
        ));
    }
    if lattice.dim() != phi.dim() {
        return Err(Error::DimMismatch("periodization lattice".into()));
    }
    let fhat = phi.fourier()?;
    let grid = lattice.fundamental_domain_grid(m);
    let shifts = lattice.enumerate(r);
    let mut lo = T::infinity();
    let mut hi = T::zero();
    for t in &grid {
        let mut acc = T::zero();
        for lam in &shifts {
            let p: Vec<T> = t.iter().zip(lam).map(|(&a, &b)| a + b).collect();
            acc = acc + fhat.eval(&p).norm_sqr();
        }
        lo = lo.min(acc);
        hi = hi.max(acc);
    }
    // analytic tail bound beyond radius r
    let (amp_sum, rate, center_max) = match fhat.tail_data() {
        None => return Ok((T::zero(), T::zero())),
        Some(d) => d,
    };
    let t_max = grid
        .iter()
        .map(|t| norm2(t))
        .fold(T::zero(), T::max);
    let tail = |radius: T| -> T {
        let shift = t_max + center_max;
        let mut k = radius.max(shift + T::one());
        let mut acc = T::zero();
        let count_norm = lattice.generator().inverse().expect("valid lattice").norm_inf();
        for _ in 0..400 {
            let dist = k - shift;
            let count = ((T::cst(2.0) * (k + T::one()) * count_norm + T::one()))
                .powi(lattice.dim() as i32);
            let term = count
                * amp_sum
                * amp_sum
                * (-T::cst(2.0) * T::PI() * rate * dist * dist).exp();
            acc = acc + term;
            if term < T::cst(1e-300) {
                break;
            }
            k = k + T::one();
        }
        acc
    };
    let bound = tail(r);
    let budget = T::cst(1e-14) * hi.max(T::min_positive_value());
    if bound > budget {
        let mut required = r.max(T::one());
        for _ in 0..60 {
            required = required * T::cst(1.5);
            if tail(required) <= budget {
                break;
            }
        }
        return Err(Error::TailBound {
            given: r.to_f64().unwrap_or(0.0),
            required: required.to_f64().unwrap_or(f64::INFINITY),
        });
    }
    Ok((lo, hi))
}

/// Max mismatch between `|V_phi f(x, -omega)|` for the normalized Gaussian
/// window `phi(t) = 2^{1/4} exp(-pi t^2)` and the weighted modulus of the
/// entire-function transform
/// `Bf(z) = 2^{1/4} int f(t) exp(2 pi t z - pi t^2 - pi z^2 / 2) dt`
/// at `z = x + i omega`, over the given points. Two independent closed forms
/// must agree.
pub fn bargmann_residual<T: Scalar>(f: &AtomSum<T>, points: &[(T, T)]) -> Result<T> {
    if f.dim() != 1 {
        return Err(Error::DimMismatch(
            "the entire-function cross-check is univariate".into(),
        ));
    }
    let phi = normalized_gaussian_window();
    let mut worst = T::zero();
    for &(x, omega) in points {
        let lhs = f.stft(&phi, &[x], &[-omega])?.norm();
        let z = Complex::new(x, omega);
        let weight = (-T::cst(0.5) * T::PI() * z.norm_sqr()).exp();
        let rhs = weight * bargmann_transform(f, z)?.norm();
        worst = worst.max((lhs - rhs).abs());
    }
    Ok(worst)
}

/// `2^{1/4} exp(-pi t^2)`, the unit-norm Gaussian.
pub fn normalized_gaussian_window<T: Scalar>() -> AtomSum<T> {
    AtomSum::standard_gaussian(1).scale(Complex::new(T::cst(2.0f64.powf(0.25)), T::zero()))
}

/// Closed-form value of the entire-function transform of an atom sum.
pub fn bargmann_transform<T: Scalar>(f: &AtomSum<T>, z: Complex<T>) -> Result<Complex<T>> {
    if f.dim() != 1 {
        return Err(Error::DimMismatch(
            "the entire-function transform is univariate".into(),
        ));
    }
    let pi = Complex::new(T::PI(), T::zero());
    let quarter_pow = Complex::new(T::cst(2.0f64.powf(0.25)), T::zero());
    let mut acc = Complex::new(T::zero(), T::zero());
    for atom in f.atoms() {
        let m = atom.width().at(0, 0);
        let a = Complex::new(atom.center()[0], T::zero());
        let b = atom.freq()[0];
        let n = m + Complex::new(T::one(), T::zero());
        let n_mat = Mat::from_rows(vec![vec![n]]);
        let n_inv_sqrt = det_inv_sqrt(&n_mat)?;
        let w = m * a + Complex::new(T::zero(), b) + z;
        let exponent = pi * (w * w / n - m * a * a - z * z * Complex::new(T::cst(0.5), T::zero()));
        acc = acc + atom.amp() * quarter_pow * n_inv_sqrt * exponent.exp();
    }
    Ok(acc)
}

/// Complex samples of a function on a uniform tensor grid.
#[derive(Clone, Debug)]
pub struct SampledWindow<T: Scalar> {
    pub grid: GridSpec<T>,
    pub values: Vec<Complex<T>>,
}

impl<T: Scalar> SampledWindow<T> {
    pub fn new(grid: GridSpec<T>, values: Vec<Complex<T>>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::GridMismatch(format!(
                "value array has {} entries, grid has {}",
                values.len(),
                grid.len()
            )));
        }
        Ok(Self { grid, values })
    }

    /// Samples an atom sum on the grid.
    pub fn sample(f: &AtomSum<T>, grid: &GridSpec<T>) -> Result<Self> {
        if f.dim() != grid.dim() {
            return Err(Error::DimMismatch("sampling grid".into()));
        }
        let values = grid.points().iter().map(|t| f.eval(t)).collect();
        Self::new(grid.clone(), values)
    }

    /// The DFT frequencies `k_j / (N_j h)` of the grid, row-major, the order
    /// in which the FFT fast path emits values.
    pub fn canonical_freqs(&self) -> Vec<Vec<T>> {
        let d = self.grid.dim();
        let mut out = Vec::with_capacity(self.grid.len());
        let mut idx = vec![0usize; d];
        loop {
            out.push(
                idx.iter()
                    .zip(&self.grid.npts)
                    .map(|(&k, &n)| T::cst(k as f64) / (T::cst(n as f64) * self.grid.step))
                    .collect(),
            );
            let mut axis = d;
            loop {
                if axis == 0 {
                    return out;
                }
                axis -= 1;
                idx[axis] += 1;
                if idx[axis] < self.grid.npts[axis] {
                    break;
                }
                idx[axis] = 0;
            }
        }
    }

    fn grids_match(&self, other: &Self) -> bool {
        let g1 = &self.grid;
        let g2 = &other.grid;
        if g1.npts != g2.npts {
            return false;
        }
        let tol = T::cst(1e-12) * (T::one() + g1.step.abs());
        if (g1.step - g2.step).abs() > tol {
            return false;
        }
        g1.origin
            .iter()
            .zip(&g2.origin)
            .all(|(&a, &b)| (a - b).abs() <= tol)
    }
}

/// Discrete short-time Fourier transform values
/// `V_g f(x, omega) ~ h^d sum_n f[n] conj(g[n - x/h]) exp(-2 pi i omega . t_n)`
/// for a grid-aligned time shift `x`. Falls back to direct summation for an
/// arbitrary frequency list and uses an FFT pass per axis when `omegas` is
/// exactly the canonical reciprocal grid.
pub fn stft_numeric<T: Scalar + FftNum>(
    f: &SampledWindow<T>,
    g: &SampledWindow<T>,
    x: &[T],
    omegas: &[Vec<T>],
) -> Result<Vec<Complex<T>>> {
    if !f.grids_match(g) {
        return Err(Error::GridMismatch(
            "both windows must share origin, step and extents".into(),
        ));
    }
    let grid = &f.grid;
    let d = grid.dim();
    if x.len() != d {
        return Err(Error::DimMismatch("time shift dimension".into()));
    }
    // integer shift in grid steps
    let mut shift = Vec::with_capacity(d);
    for &xi in x {
        let s = xi / grid.step;
        let r = s.round();
        if (s - r).abs() > T::cst(1e-9) {
            return Err(Error::OffGrid(format!(
                "time coordinate {xi} is not an integer multiple of the step"
            )));
        }
        shift.push(r.to_f64().unwrap() as i64);
    }
    // pointwise product f * conj(T_x g)
    let mut product = vec![Complex::new(T::zero(), T::zero()); grid.len()];
    let strides = row_major_strides(&grid.npts);
    let mut idx = vec![0usize; d];
    for slot in product.iter_mut() {
        let mut in_range = true;
        let mut g_flat = 0usize;
        for a in 0..d {
            let gi = idx[a] as i64 - shift[a];
            if gi < 0 || gi >= grid.npts[a] as i64 {
                in_range = false;
                break;
            }
            g_flat += gi as usize * strides[a];
        }
        if in_range {
            let f_flat: usize = idx.iter().zip(&strides).map(|(&i, &s)| i * s).sum();
            *slot = f.values[f_flat] * g.values[g_flat].conj();
        }
        increment(&mut idx, &grid.npts);
    }
    let weight = grid.step.powi(d as i32);

    if omegas_are_canonical(f, omegas) {
        return Ok(fft_all_axes(&product, &grid.npts)
            .into_iter()
            .zip(omegas)
            .map(|(v, omega)| {
                let phase = unit_phase(-T::TAU() * dot_real(omega, &grid.origin));
                v * phase * Complex::new(weight, T::zero())
            })
            .collect());
    }

    // direct evaluation
    let points = grid.points();
    let mut out = Vec::with_capacity(omegas.len());
    for omega in omegas {
        if omega.len() != d {
            return Err(Error::DimMismatch("frequency dimension".into()));
        }
        let mut acc = Complex::new(T::zero(), T::zero());
        for (p, t) in product.iter().zip(&points) {
            if p.norm_sqr() == T::zero() {
                continue;
            }
            acc = acc + *p * unit_phase(-T::TAU() * dot_real(omega, t));
        }
        out.push(acc * Complex::new(weight, T::zero()));
    }
    Ok(out)
}

fn dot_real<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).map(|(&x, &y)| x * y).sum()
}

fn row_major_strides(npts: &[usize]) -> Vec<usize> {
    let d = npts.len();
    let mut strides = vec![1usize; d];
    for a in (0..d.saturating_sub(1)).rev() {
        strides[a] = strides[a + 1] * npts[a + 1];
    }
    strides
}

fn increment(idx: &mut [usize], npts: &[usize]) {
    let mut axis = idx.len();
    while axis > 0 {
        axis -= 1;
        idx[axis] += 1;
        if idx[axis] < npts[axis] {
            return;
        }
        idx[axis] = 0;
    }
}

fn omegas_are_canonical<T: Scalar + FftNum>(f: &SampledWindow<T>, omegas: &[Vec<T>]) -> bool {
    if omegas.len() != f.grid.len() {
        return false;
    }
    let canon = f.canonical_freqs();
    let tol = T::cst(1e-12) / f.grid.step;
    canon
        .iter()
        .zip(omegas)
        .all(|(c, o)| c.len() == o.len() && c.iter().zip(o).all(|(&a, &b)| (a - b).abs() <= tol))
}

/// Forward DFT along every axis of a row-major array.
fn fft_all_axes<T: Scalar + FftNum>(data: &[Complex<T>], npts: &[usize]) -> Vec<Complex<T>> {
    let mut planner = FftPlanner::<T>::new();
    let mut buf = data.to_vec();
    let strides = row_major_strides(npts);
    let total = buf.len();
    for (axis, &n) in npts.iter().enumerate() {
        let fft = planner.plan_fft(n, FftDirection::Forward);
        let stride = strides[axis];
        let mut line = vec![Complex::new(T::zero(), T::zero()); n];
        for start in 0..total {
            // first element of a line along `axis` has axis index zero
            if (start / stride) % n != 0 {
                continue;
            }
            for k in 0..n {
                line[k] = buf[start + k * stride];
            }
            fft.process(&mut line);
            for k in 0..n {
                buf[start + k * stride] = line[k];
            }
        }
    }
    buf
}

/// Max over the grid of `||f1(t)| - |f2(t)||` relative to `max |f1|`.
pub fn modulus_equal_on_grid<T: Scalar>(
    f1: &AtomSum<T>,
    f2: &AtomSum<T>,
    spec: &GridSpec<T>,
    tol: T,
) -> Result<bool> {
    if f1.dim() != f2.dim() || spec.dim() != f1.dim() {
        return Err(Error::DimMismatch("modulus comparison grid".into()));
    }
    let mut worst = T::zero();
    let mut scale = T::zero();
    for t in spec.points() {
        let a = f1.eval(&t).norm();
        let b = f2.eval(&t).norm();
        worst = worst.max((a - b).abs());
        scale = scale.max(a);
    }
    Ok(scale > T::zero() && worst <= tol * scale)
}

/// Max over the grid of `|Im f(t)|` relative to `max |f|`.
pub fn is_real_on_grid<T: Scalar>(f: &AtomSum<T>, spec: &GridSpec<T>, tol: T) -> Result<bool> {
    if spec.dim() != f.dim() {
        return Err(Error::DimMismatch("realness probe grid".into()));
    }
    let mut worst = T::zero();
    let mut scale = T::zero();
    for t in spec.points() {
        let v = f.eval(&t);
        worst = worst.max(v.im.abs());
        scale = scale.max(v.norm());
    }
    if scale == T::zero() {
        return Ok(true);
    }
    Ok(worst <= tol * scale)
}

/// Max imaginary part over the grid, relative to the max modulus; the raw
/// quantity behind [`is_real_on_grid`].
pub fn imag_ratio_on_grid<T: Scalar>(f: &AtomSum<T>, spec: &GridSpec<T>) -> T {
    let mut worst = T::zero();
    let mut scale = T::zero();
    for t in spec.points() {
        let v = f.eval(&t);
        worst = worst.max(v.im.abs());
        scale = scale.max(v.norm());
    }
    if scale == T::zero() {
        T::zero()
    } else {
        worst / scale
    }
}
