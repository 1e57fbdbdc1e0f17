//! Shared test support: an independent quadrature oracle over evaluated
//! samples, and deterministic random fixtures.
//!
//! The oracle integrates pointwise values only; it never touches the
//! closed-form Gaussian integral path it is used to check.

#![allow(dead_code)]

use num_complex::Complex;
use phasepair::atoms::{AtomSum, GaussAtom};
use phasepair::lattice::Lattice;
use phasepair::linalg::Mat;
use phasepair::meta::{MetaGen, SympWord};
use phasepair::Scenario64;
use rand::Rng;

pub type C64 = Complex<f64>;

pub fn c(re: f64, im: f64) -> C64 {
    Complex::new(re, im)
}

/// Trapezoid tensor-grid quadrature of `integrand` over `[-8, 8]^d`.
///
/// 2048 points per axis at d = 1 and 512 at d = 2 push the Gaussian tails of
/// every test atom below 1e-25 at the boundary.
pub fn quad<F>(dim: usize, n_per_axis: usize, mut integrand: F) -> C64
where
    F: FnMut(&[f64]) -> C64,
{
    let lo = -8.0;
    let hi = 8.0;
    let n = n_per_axis;
    let h = (hi - lo) / n as f64;
    let mut idx = vec![0usize; dim];
    let mut acc = c(0.0, 0.0);
    loop {
        let mut weight = 1.0;
        let mut t = Vec::with_capacity(dim);
        for &i in &idx {
            t.push(lo + h * i as f64);
            weight *= if i == 0 || i == n { 0.5 * h } else { h };
        }
        acc += integrand(&t) * weight;
        let mut axis = dim;
        loop {
            if axis == 0 {
                return acc;
            }
            axis -= 1;
            idx[axis] += 1;
            if idx[axis] <= n {
                break;
            }
            idx[axis] = 0;
        }
    }
}

pub fn default_axis_points(dim: usize) -> usize {
    match dim {
        1 => 2048,
        _ => 512,
    }
}

/// `<f, g>` by quadrature of evaluated samples.
pub fn quad_inner(f: &AtomSum<f64>, g: &AtomSum<f64>) -> C64 {
    let d = f.dim();
    quad(d, default_axis_points(d), |t| f.eval(t) * g.eval(t).conj())
}

/// `V_g f(x, omega)` by quadrature of evaluated samples.
pub fn quad_stft(f: &AtomSum<f64>, g: &AtomSum<f64>, x: &[f64], omega: &[f64]) -> C64 {
    let d = f.dim();
    quad(d, default_axis_points(d), |t| {
        let shifted: Vec<f64> = t.iter().zip(x).map(|(a, b)| a - b).collect();
        let phase = c(0.0, -std::f64::consts::TAU * dotf(omega, t)).exp();
        f.eval(t) * g.eval(&shifted).conj() * phase
    })
}

pub fn dotf(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

// ---------------------------------------------------------------------------
// deterministic random fixtures

/// Random atom with moderate parameters and a safely positive width.
pub fn rand_atom<R: Rng>(rng: &mut R, dim: usize) -> GaussAtom<f64> {
    let amp = c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)) + c(0.3, 0.0);
    let center: Vec<f64> = (0..dim).map(|_| rng.gen_range(-1.5..1.5)).collect();
    let freq: Vec<f64> = (0..dim).map(|_| rng.gen_range(-1.5..1.5)).collect();
    let r = Mat::from_fn(dim, dim, |_, _| rng.gen_range(-0.7f64..0.7));
    let p = r.transpose().mul(&r).add(
        &phasepair::linalg::identity::<f64, f64>(dim).scale(rng.gen_range(0.35f64..1.2)),
    );
    let q = Mat::from_fn(dim, dim, |_, _| rng.gen_range(-0.5f64..0.5)).symmetrize();
    let width = Mat::from_fn(dim, dim, |i, j| c(p.at(i, j), q.at(i, j)));
    GaussAtom::new(amp, center, freq, width).expect("random atom is valid")
}

pub fn rand_sum<R: Rng>(rng: &mut R, dim: usize, max_atoms: usize) -> AtomSum<f64> {
    let n = rng.gen_range(1..=max_atoms);
    let atoms = (0..n).map(|_| rand_atom(rng, dim)).collect();
    AtomSum::from_atoms(dim, atoms).expect("random sum is valid")
}

pub fn rand_vec<R: Rng>(rng: &mut R, dim: usize, amp: f64) -> Vec<f64> {
    (0..dim).map(|_| rng.gen_range(-amp..amp)).collect()
}

/// Random word over well-conditioned generators.
pub fn rand_word<R: Rng>(rng: &mut R, dim: usize, len: usize) -> SympWord<f64> {
    let mut factors = Vec::new();
    for _ in 0..len {
        match rng.gen_range(0..3) {
            0 => {
                let a = loop {
                    let m = Mat::from_fn(dim, dim, |i, j| {
                        let base = if i == j { 1.0 } else { 0.0 };
                        base + rng.gen_range(-0.4f64..0.4)
                    });
                    if m.det().abs() > 0.3 {
                        break m;
                    }
                };
                factors.push(MetaGen::Dilate(a));
            }
            1 => factors.push(MetaGen::FourierJ(if rng.gen_bool(0.5) { -1 } else { 1 })),
            _ => {
                let c_m = Mat::from_fn(dim, dim, |_, _| rng.gen_range(-0.8f64..0.8)).symmetrize();
                factors.push(MetaGen::Chirp(c_m));
            }
        }
    }
    SympWord::new(dim, factors).expect("random word is valid")
}

// ---------------------------------------------------------------------------
// named fixtures shared by the oracle and acceptance suites

/// `exp(-x^2-y^2)` window in the plane.
pub fn plane_window() -> AtomSum<f64> {
    AtomSum::plain_gaussian(2)
}

/// Semi-discrete scenario sampling `R^2 x (1/8) Z^2` with shifts on `8 Z^2`.
pub fn example_i_scenario() -> Scenario64 {
    Scenario64::SemiDiscrete {
        word: SympWord::identity(2),
        lattice: Lattice::scaled_integer(2, 0.125).unwrap(),
    }
}

/// Coefficients `(1, i, 1+i)` on the shifts `(0,0), (8,0), (0,8)`.
pub fn example_i_sequence() -> Vec<(Vec<i64>, C64)> {
    vec![
        (vec![0, 0], c(1.0, 0.0)),
        (vec![1, 0], c(0.0, 1.0)),
        (vec![0, 1], c(1.0, 1.0)),
    ]
}

/// Hexagonal-dual scenario: sampling on `R^2 x B^-T Z^2` with shifts on the
/// lattice generated by `B = 5 [[1, 0], [-1/sqrt(3), 2/sqrt(3)]]`.
pub fn example_ii_scenario() -> Scenario64 {
    Scenario64::SemiDiscrete {
        word: SympWord::identity(2),
        lattice: example_ii_b().reciprocal(),
    }
}

pub fn example_ii_b() -> Lattice<f64> {
    let s3 = 3.0f64.sqrt();
    Lattice::new(Mat::from_rows(vec![
        vec![5.0, 0.0],
        vec![-5.0 / s3, 10.0 / s3],
    ]))
    .unwrap()
}

/// Three-term and four-term coefficient sets on `0, a, b, a+b`.
pub fn example_ii_sequence(four_term: bool) -> Vec<(Vec<i64>, C64)> {
    let mut s = vec![
        (vec![0, 0], c(1.0, 0.0)),
        (vec![1, 0], c(0.0, 1.0)),
        (vec![0, 1], c(1.0, 1.0)),
    ];
    if four_term {
        s.push((vec![1, 1], c(0.5, 0.5)));
    }
    s
}

/// Rational generator fixture in the plane: `[[1/2, 1/3], [0, 1/5]]`.
pub fn rational_entries_d1() -> Vec<Vec<(i64, i64)>> {
    vec![vec![(1, 2), (1, 3)], vec![(0, 1), (1, 5)]]
}

/// Block-structured rational generator fixture in dimension 4.
pub fn rational_entries_d2() -> Vec<Vec<(i64, i64)>> {
    vec![
        vec![(1, 2), (1, 3), (0, 1), (0, 1)],
        vec![(0, 1), (1, 5), (0, 1), (0, 1)],
        vec![(0, 1), (0, 1), (1, 2), (1, 4)],
        vec![(0, 1), (0, 1), (1, 6), (1, 2)],
    ]
}

/// Real window with a wide frequency profile, so modulation shifts a few
/// units apart still interfere visibly.
pub fn narrow_window(dim: usize) -> AtomSum<f64> {
    let third = phasepair::linalg::identity::<f64, f64>(dim).scale(1.0 / 3.0);
    AtomSum::standard_gaussian(dim).dilate(&third).unwrap()
}
