//! Randomized and property-based invariants of the operator algebra,
//! lattice geometry and coefficient predicates.

mod common;

use common::*;
use num_complex::Complex;
use phasepair::atoms::AtomSum;
use phasepair::coeffs::CoeffSeq;
use phasepair::lattice::{is_symplectic, symplectic_block_criterion, Lattice};
use phasepair::linalg::Mat;
use phasepair::meta::interaction_residual;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

#[test]
fn unitarity_battery() {
    let mut rng = ChaCha12Rng::seed_from_u64(41);
    for case in 0..100 {
        let dim = if case % 2 == 0 { 1 } else { 2 };
        let f = rand_sum(&mut rng, dim, 3);
        let base = f.norm_sq().unwrap();
        let tau = rand_vec(&mut rng, dim, 1.5);
        let nu = rand_vec(&mut rng, dim, 1.5);
        let a = loop {
            let m = Mat::from_fn(dim, dim, |i, j| {
                let b = if i == j { 1.0 } else { 0.0 };
                b + rng.gen_range(-0.5f64..0.5)
            });
            if m.det().abs() > 0.3 {
                break m;
            }
        };
        let c_m = Mat::from_fn(dim, dim, |_, _| rng.gen_range(-1.0f64..1.0)).symmetrize();
        let variants = [
            f.translate(&tau),
            f.modulate(&nu),
            f.reflect(),
            f.fourier().unwrap(),
            f.dilate(&a).unwrap(),
            f.chirp(&c_m).unwrap(),
        ];
        for v in variants {
            let n = v.norm_sq().unwrap();
            assert!((n - base).abs() <= 1e-10 * base, "case {case}: {n} vs {base}");
        }
    }
}

#[test]
fn operator_relations_battery() {
    // conj(F f) = R F conj(f);   F R = R F;   F T_tau = M_{-tau} F;
    // R T_tau = T_{-tau} R  -- all pointwise at random points
    let mut rng = ChaCha12Rng::seed_from_u64(42);
    for case in 0..40 {
        let dim = if case % 2 == 0 { 1 } else { 2 };
        let f = rand_sum(&mut rng, dim, 2);
        let tau = rand_vec(&mut rng, dim, 1.5);
        let minus_tau: Vec<f64> = tau.iter().map(|x| -x).collect();
        let pairs: Vec<(AtomSum<f64>, AtomSum<f64>)> = vec![
            (
                f.fourier().unwrap().conjugate(),
                f.conjugate().fourier().unwrap().reflect(),
            ),
            (
                f.reflect().fourier().unwrap(),
                f.fourier().unwrap().reflect(),
            ),
            (
                f.translate(&tau).fourier().unwrap(),
                f.fourier().unwrap().modulate(&minus_tau),
            ),
            (
                f.translate(&tau).reflect(),
                f.reflect().translate(&minus_tau),
            ),
        ];
        for _ in 0..20 {
            let t = rand_vec(&mut rng, dim, 2.0);
            for (lhs, rhs) in &pairs {
                let a = lhs.eval(&t);
                let b = rhs.eval(&t);
                assert!(
                    (a - b).norm() <= 1e-10 * (1.0 + a.norm()),
                    "relation broke at {t:?}: {a} vs {b}"
                );
            }
        }
    }
}

#[test]
fn covariance_battery() {
    // V_g(T_tau M_nu f)(x, w) = exp(-2 pi i tau.w) V_g f(x - tau, w - nu),
    // checked as complex numbers relative to ||f|| ||g||
    let mut rng = ChaCha12Rng::seed_from_u64(43);
    for case in 0..50 {
        let dim = if case % 2 == 0 { 1 } else { 2 };
        let f = rand_sum(&mut rng, dim, 2);
        let g = rand_sum(&mut rng, dim, 2);
        let scale = (f.norm_sq().unwrap() * g.norm_sq().unwrap()).sqrt();
        let tau = rand_vec(&mut rng, dim, 1.0);
        let nu = rand_vec(&mut rng, dim, 1.0);
        let shifted = f.modulate(&nu).translate(&tau);
        for _ in 0..4 {
            let x = rand_vec(&mut rng, dim, 1.5);
            let w = rand_vec(&mut rng, dim, 1.5);
            let lhs = shifted.stft(&g, &x, &w).unwrap();
            let xs: Vec<f64> = x.iter().zip(&tau).map(|(a, b)| a - b).collect();
            let ws: Vec<f64> = w.iter().zip(&nu).map(|(a, b)| a - b).collect();
            let phase = Complex::from_polar(1.0, -std::f64::consts::TAU * dotf(&tau, &w));
            let rhs = phase * f.stft(&g, &xs, &ws).unwrap();
            assert!(
                (lhs - rhs).norm() <= 1e-9 * scale,
                "covariance broke: {lhs} vs {rhs}"
            );
        }
    }
}

#[test]
fn interaction_identity_battery() {
    let mut rng = ChaCha12Rng::seed_from_u64(44);
    for case in 0..60 {
        let dim = if case % 3 == 0 { 2 } else { 1 };
        let f = rand_sum(&mut rng, dim, 2);
        let g = rand_sum(&mut rng, dim, 2);
        let scale = (f.norm_sq().unwrap() * g.norm_sq().unwrap()).sqrt();
        let len = rng.gen_range(0..=3);
        let word = rand_word(&mut rng, dim, len);
        let z = rand_vec(&mut rng, 2 * dim, 1.0);
        let r = interaction_residual(&word, &f, &g, &z).unwrap();
        assert!(r <= 1e-9 * scale.max(1.0), "case {case}: residual {r}");
    }
}

#[test]
fn apply_respects_composition_up_to_global_phase() {
    let mut rng = ChaCha12Rng::seed_from_u64(45);
    for _ in 0..30 {
        let dim = 1 + rng.gen_range(0..2usize);
        let f = rand_sum(&mut rng, dim, 2);
        let h = rand_sum(&mut rng, dim, 2);
        let len1 = rng.gen_range(0..=2);
        let len2 = rng.gen_range(0..=2);
        let w1 = rand_word(&mut rng, dim, len1);
        let w2 = rand_word(&mut rng, dim, len2);
        let combined = w1.concat(&w2).unwrap();
        let a = combined.apply(&f).unwrap().inner_product(&h).unwrap().norm();
        let b = w1
            .apply(&w2.apply(&f).unwrap())
            .unwrap()
            .inner_product(&h)
            .unwrap()
            .norm();
        assert!((a - b).abs() <= 1e-10 * (1.0 + a.abs()));
    }
}

#[test]
fn symplectic_test_agrees_with_block_criterion() {
    let mut rng = ChaCha12Rng::seed_from_u64(46);
    let mut symplectic_seen = 0usize;
    for case in 0..1000 {
        let d = 1 + case % 3;
        let m = if case % 2 == 0 {
            // genuine symplectic sample from a word
            symplectic_seen += 1;
            let len = rng.gen_range(1..=4);
            rand_word(&mut rng, d, len).matrix()
        } else {
            // perturbed into a generic matrix
            let len = rng.gen_range(1..=3);
            let base = rand_word(&mut rng, d, len).matrix();
            let noise = Mat::from_fn(2 * d, 2 * d, |_, _| rng.gen_range(-0.05f64..0.05));
            base.add(&noise)
        };
        let a = is_symplectic(&m, 1e-8).unwrap();
        let b = symplectic_block_criterion(&m, 1e-8).unwrap();
        assert_eq!(a, b, "criteria disagree on case {case}: {m:?}");
    }
    assert!(symplectic_seen >= 400);
}

// ---------------------------------------------------------------------------
// property-based invariants

proptest! {
    #[test]
    fn dual_pairing_is_integral_for_random_generators(
        entries in proptest::collection::vec(-3.0f64..3.0, 4),
        scale in 0.5f64..3.0,
    ) {
        let gen = Mat::from_rows(vec![
            vec![entries[0] + 4.0, entries[1]],
            vec![entries[2], entries[3] + 4.0],
        ]).scale(scale / 4.0);
        prop_assume!(gen.det().abs() > 0.05);
        let lat = Lattice::new(gen).unwrap();
        let dual = lat.reciprocal();
        for p in lat.enumerate(3.0 * scale) {
            for q in dual.enumerate(3.0 / scale) {
                let d = dotf(&p, &q);
                prop_assert!((d - d.round()).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn line_predicate_is_phase_and_scale_invariant(
        res in proptest::collection::vec(-2.0f64..2.0, 3),
        ims in proptest::collection::vec(-2.0f64..2.0, 3),
        phase in 0.0f64..std::f64::consts::TAU,
        kappa in 0.1f64..10.0,
    ) {
        let lattice = Lattice::scaled_integer(1, 1.0).unwrap();
        let pairs: Vec<(Vec<i64>, C64)> = res.iter().zip(&ims).enumerate()
            .map(|(k, (&re, &im))| (vec![k as i64], c(re, im)))
            .collect();
        let seq = CoeffSeq::new(lattice, pairs).unwrap();
        let base = seq.is_on_line(1e-10);
        let rotated = seq.scale(Complex::from_polar(1.0, phase));
        let scaled = seq.scale(c(kappa, 0.0));
        prop_assert_eq!(rotated.is_on_line(1e-9), base);
        prop_assert_eq!(scaled.is_on_line(1e-9), base);
        prop_assert_eq!(seq.conjugate_seq().is_on_line(1e-10), base);
    }

    #[test]
    fn hermitian_predicate_is_conjugation_and_scale_invariant(
        re1 in -2.0f64..2.0,
        im1 in -2.0f64..2.0,
        re0 in -2.0f64..2.0,
        kappa in 0.1f64..10.0,
        hermitian in proptest::bool::ANY,
    ) {
        let lattice = Lattice::scaled_integer(1, 1.0).unwrap();
        let partner = if hermitian { c(re1, -im1) } else { c(re1 + 1.0, im1 + 0.5) };
        let seq = CoeffSeq::new(lattice, vec![
            (vec![0], c(re0, 0.0)),
            (vec![1], c(re1, im1)),
            (vec![-1], partner),
        ]).unwrap();
        let base = seq.is_hermitian(1e-10);
        prop_assert_eq!(seq.conjugate_seq().is_hermitian(1e-10), base);
        prop_assert_eq!(seq.scale(c(kappa, 0.0)).is_hermitian(1e-9), base);
    }

    #[test]
    fn enumerate_points_are_members_and_within_radius(
        a in 0.3f64..2.0,
        b in -0.9f64..0.9,
        d in 0.3f64..2.0,
        radius in 0.5f64..4.0,
    ) {
        let gen = Mat::from_rows(vec![vec![a, b], vec![0.0, d]]);
        let lat = Lattice::new(gen).unwrap();
        for p in lat.enumerate(radius) {
            prop_assert!(phasepair::linalg::norm2(&p) <= radius + 1e-12);
            prop_assert!(lat.contains(&p, 1e-9));
        }
    }
}
