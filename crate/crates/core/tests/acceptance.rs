//! Acceptance suite: one test per criterion, each printing a pass/fail line.
//!
//! Run with `cargo test -p phasepair --test acceptance -- --nocapture` to see
//! every line; tolerances are pinned in the assertions.

mod common;

use std::time::Instant;

use common::*;
use phasepair::atoms::{AtomSum, GaussAtom};
use phasepair::factory::{build, CounterexamplePair, Scenario};
use phasepair::lattice::{rational_envelope, Lattice};
use phasepair::linalg::{identity, Mat};
use phasepair::meta::interaction_residual;
use phasepair::verify::{
    check_equality_on_set, imag_ratio_on_grid, modulus_equal_on_grid, qx_grid, qx_value,
    spectrogram, stft_numeric, GridSpec, SampledWindow,
};
use phasepair::Rational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

fn check(criterion: &str, pass: bool, detail: &str) {
    let verdict = if pass { "PASS" } else { "FAIL" };
    println!("[{criterion}] {verdict} - {detail}");
    assert!(pass, "{criterion} failed: {detail}");
}

fn example_i_pair() -> CounterexamplePair<f64> {
    build(
        &example_i_scenario(),
        &plane_window(),
        Some(&example_i_sequence()),
    )
    .unwrap()
}

fn pauli_scenario() -> Scenario<f64> {
    Scenario::PauliSeparable {
        a: identity::<f64, f64>(2),
        b: identity::<f64, f64>(2),
    }
}

fn real_sign_scenario() -> Scenario<f64> {
    Scenario::RealSign {
        lattice: Lattice::scaled_integer(1, 1.0).unwrap(),
    }
}

/// Off-lattice probe with two-shift interference for the corrected pair:
/// time slice between the first two shifts, frequency off the dual lattice.
const EXAMPLE_I_PROBE: [f64; 4] = [4.0, 0.0, 1.0 / 16.0, 0.0];

#[test]
fn criterion_01_spectrogram_equality_at_desk_scale() {
    let start = Instant::now();
    let pair = example_i_pair();
    let points = pair.equality_points(50, 2.0);
    assert_eq!(points.len(), 50);
    let report = check_equality_on_set(&pair, &points).unwrap();
    let elapsed = start.elapsed().as_secs_f64();
    check(
        "criterion 1",
        report.max_rel_diff <= 1e-9 && elapsed < 5.0,
        &format!(
            "max relative mismatch {:.3e} on 50 points of R^2 x (1/8)Z^2, {:.2}s",
            report.max_rel_diff, elapsed
        ),
    );
}

#[test]
fn criterion_02_non_equivalence_certificate() {
    let pair = example_i_pair();
    let n1 = pair.f1.norm_sq().unwrap();
    let n2 = pair.f2.norm_sq().unwrap();
    let pd = pair.certificate.phase_distance;
    let bound = 1e-6 * (n1 + n2);
    let v1 = spectrogram(&pair.f1, &pair.window, &EXAMPLE_I_PROBE).unwrap();
    let v2 = spectrogram(&pair.f2, &pair.window, &EXAMPLE_I_PROBE).unwrap();
    let probe_rel = (v1 - v2).abs() / v1.max(v2);
    check(
        "criterion 2",
        pd >= bound && probe_rel > 1e-3,
        &format!(
            "phase distance {pd:.6} >= {bound:.3e}; off-lattice probe relative gap {probe_rel:.3e}"
        ),
    );
}

#[test]
fn criterion_03_hexagonal_dual_grid() {
    let start = Instant::now();
    let g = plane_window();
    let dual = example_ii_b().reciprocal();
    let window = 0.35f64;
    let nodes: Vec<Vec<f64>> = dual
        .enumerate(window * 1.5)
        .into_iter()
        .filter(|p| p.iter().all(|x| x.abs() <= window))
        .collect();
    assert!(nodes.len() >= 10, "expected several dual nodes in the window");
    // time slice halfway between the first two shifts, where the pair
    // actually interferes
    let s3 = 3.0f64.sqrt();
    let x = [2.5, -2.5 / s3];
    let spec = GridSpec::new(vec![-window, -window], 2.0 * window / 200.0, vec![201, 201]).unwrap();
    let mut pass = true;
    let mut detail = String::new();
    for (label, four_term) in [("3-term", false), ("4-term", true)] {
        let pair = build(
            &example_ii_scenario(),
            &g,
            Some(&example_ii_sequence(four_term)),
        )
        .unwrap();
        let grid = qx_grid(&pair, &x, &spec).unwrap();
        let grid_max = grid.max_value();
        let mut node_max = 0.0f64;
        for node in &nodes {
            node_max = node_max.max(qx_value(&pair, &x, node).unwrap());
        }
        let ratio = node_max / grid_max;
        pass &= ratio <= 1e-10;
        detail.push_str(&format!(
            "{label}: node/grid ratio {ratio:.3e} over {} nodes; ",
            nodes.len()
        ));
    }
    let elapsed = start.elapsed().as_secs_f64();
    detail.push_str(&format!("{elapsed:.2}s at 201x201"));
    check("criterion 3", pass && elapsed < 30.0, &detail);
}

#[test]
fn criterion_04_pauli_pair() {
    let g = AtomSum::standard_gaussian(2);
    let pair = build(&pauli_scenario(), &g, None).unwrap();
    let points = pair.equality_points(50, 2.0);
    assert_eq!(points.len(), 50);
    let report = check_equality_on_set(&pair, &points).unwrap();
    let spec = GridSpec::centered(2, 4.0, 41);
    let modulus_ok = modulus_equal_on_grid(&pair.f1, &pair.f2, &spec, 1e-12).unwrap();
    let n1 = pair.f1.norm_sq().unwrap();
    let n2 = pair.f2.norm_sq().unwrap();
    let pd_ok = pair.certificate.phase_distance >= 1e-6 * (n1 + n2);
    check(
        "criterion 4",
        report.max_rel_diff <= 1e-9 && modulus_ok && pd_ok,
        &format!(
            "lattice mismatch {:.3e}; |f1| = |f2| on 41^2 grid at 1e-12: {modulus_ok}; phase distance {:.6}",
            report.max_rel_diff, pair.certificate.phase_distance
        ),
    );
}

#[test]
fn criterion_05_sign_retrieval_pair() {
    let g = AtomSum::standard_gaussian(1);
    let pair = build(&real_sign_scenario(), &g, None).unwrap();
    let spec = GridSpec::centered(1, 4.0, 41);
    let im1 = imag_ratio_on_grid(&pair.f1, &spec);
    let im2 = imag_ratio_on_grid(&pair.f2, &spec);
    let points = pair.equality_points(50, 2.5);
    let report = check_equality_on_set(&pair, &points).unwrap();
    let n1 = pair.f1.norm_sq().unwrap();
    let n2 = pair.f2.norm_sq().unwrap();
    let pd_ok = pair.certificate.phase_distance >= 1e-6 * (n1 + n2);
    check(
        "criterion 5",
        im1 <= 1e-10 && im2 <= 1e-10 && report.max_rel_diff <= 1e-9 && pd_ok,
        &format!(
            "imaginary ratios {im1:.2e}/{im2:.2e}; mismatch {:.3e} on 50 points of Z x R; phase distance {:.6}",
            report.max_rel_diff, pair.certificate.phase_distance
        ),
    );
}

#[test]
fn criterion_06_rational_lattice_corollary() {
    let mut pass = true;
    let mut detail = String::new();

    // d = 1 fixture: envelope must reproduce the hand value diag(1/6, 1/5)
    let (diag, _) = rational_envelope::<f64>(&rational_entries_d1()).unwrap();
    pass &= diag == vec![Rational::new(1, 6), Rational::new(1, 5)];

    for (label, entries, dim, probe) in [
        (
            "d=1",
            rational_entries_d1(),
            1usize,
            vec![1.0 / 24.0, 0.0],
        ),
        (
            "d=2",
            rational_entries_d2(),
            2usize,
            vec![1.0 / 24.0, 1.0 / 20.0, 0.0, 0.0],
        ),
    ] {
        // the envelope call performs the exhaustive ||z||_inf <= 3 containment
        // check internally and fails otherwise
        let env = rational_envelope::<f64>(&entries);
        pass &= env.is_ok();
        let g = narrow_window(dim);
        let scenario = Scenario::RationalLattice { entries };
        let pair = build(&scenario, &g, None).unwrap();
        let points = pair.equality_points(50, if dim == 1 { 2.0 } else { 1.5 });
        assert_eq!(points.len(), 50);
        let report = check_equality_on_set(&pair, &points).unwrap();
        let n1 = pair.f1.norm_sq().unwrap();
        let n2 = pair.f2.norm_sq().unwrap();
        let pd_ok = pair.certificate.phase_distance >= 1e-6 * (n1 + n2);
        let v1 = spectrogram(&pair.f1, &pair.window, &probe).unwrap();
        let v2 = spectrogram(&pair.f2, &pair.window, &probe).unwrap();
        let probe_rel = (v1 - v2).abs() / v1.max(v2);
        pass &= report.max_rel_diff <= 1e-9 && pd_ok && probe_rel > 1e-3;
        detail.push_str(&format!(
            "{label}: mismatch {:.2e} on L Z^(2d), probe gap {probe_rel:.2e}; ",
            report.max_rel_diff
        ));
    }
    check("criterion 6", pass, detail.trim_end_matches("; "));
}

#[test]
fn criterion_07_operator_identity_suite() {
    let mut rng = ChaCha12Rng::seed_from_u64(2024);
    let mut worst_cov = 0.0f64;
    let mut worst_conj = 0.0f64;
    let mut worst_ft = 0.0f64;
    let mut worst_rt = 0.0f64;
    let mut worst_inter = 0.0f64;
    for case in 0..100 {
        let dim = if case % 2 == 0 { 1 } else { 2 };
        let f = rand_sum(&mut rng, dim, 2);
        let g = rand_sum(&mut rng, dim, 2);
        let scale = (f.norm_sq().unwrap() * g.norm_sq().unwrap()).sqrt();
        let tau = rand_vec(&mut rng, dim, 1.0);
        let nu = rand_vec(&mut rng, dim, 1.0);
        let minus_tau: Vec<f64> = tau.iter().map(|v| -v).collect();

        // covariance of the windowed transform
        let x = rand_vec(&mut rng, dim, 1.0);
        let w = rand_vec(&mut rng, dim, 1.0);
        let lhs = f.modulate(&nu).translate(&tau).stft(&g, &x, &w).unwrap();
        let xs: Vec<f64> = x.iter().zip(&tau).map(|(a, b)| a - b).collect();
        let ws: Vec<f64> = w.iter().zip(&nu).map(|(a, b)| a - b).collect();
        let phase = num_complex::Complex::from_polar(1.0, -std::f64::consts::TAU * dotf(&tau, &w));
        let rhs = phase * f.stft(&g, &xs, &ws).unwrap();
        worst_cov = worst_cov.max((lhs - rhs).norm() / scale);

        // pointwise operator relations
        let t = rand_vec(&mut rng, dim, 1.5);
        let a = f.fourier().unwrap().conjugate().eval(&t);
        let b = f.conjugate().fourier().unwrap().reflect().eval(&t);
        worst_conj = worst_conj.max((a - b).norm() / (1.0 + a.norm()));
        let a = f.translate(&tau).fourier().unwrap().eval(&t);
        let b = f.fourier().unwrap().modulate(&minus_tau).eval(&t);
        worst_ft = worst_ft.max((a - b).norm() / (1.0 + a.norm()));
        let a = f.translate(&tau).reflect().eval(&t);
        let b = f.reflect().translate(&minus_tau).eval(&t);
        worst_rt = worst_rt.max((a - b).norm() / (1.0 + a.norm()));

        // symplectic interaction identity in magnitude
        let len = rng.gen_range(0..=3);
        let word = rand_word(&mut rng, dim, len);
        let z = rand_vec(&mut rng, 2 * dim, 1.0);
        let r = interaction_residual(&word, &f, &g, &z).unwrap();
        worst_inter = worst_inter.max(r / scale.max(1.0));
    }
    let worst = worst_cov
        .max(worst_conj)
        .max(worst_ft)
        .max(worst_rt)
        .max(worst_inter);
    check(
        "criterion 7",
        worst <= 1e-9,
        &format!(
            "100-case battery: covariance {worst_cov:.2e}, conjugation {worst_conj:.2e}, \
             fourier-shift {worst_ft:.2e}, reflect-shift {worst_rt:.2e}, interaction {worst_inter:.2e}"
        ),
    );
}

#[test]
fn criterion_08_oracle_equivalence() {
    // closed forms against quadrature
    let mut rng = ChaCha12Rng::seed_from_u64(88);
    let mut worst_quad = 0.0f64;
    for dim in [1usize, 2] {
        let cases = if dim == 1 { 5 } else { 2 };
        for _ in 0..cases {
            let f = rand_sum(&mut rng, dim, 2);
            let g = rand_sum(&mut rng, dim, 2);
            let ip_exact = f.inner_product(&g).unwrap();
            let ip_quad = quad_inner(&f, &g);
            worst_quad = worst_quad.max((ip_exact - ip_quad).norm() / ip_exact.norm().max(1e-6));
            let x = rand_vec(&mut rng, dim, 1.0);
            let w = rand_vec(&mut rng, dim, 1.0);
            let v_exact = f.stft(&g, &x, &w).unwrap();
            let v_quad = quad_stft(&f, &g, &x, &w);
            worst_quad = worst_quad.max((v_exact - v_quad).norm() / v_exact.norm().max(1e-6));
        }
    }

    // sampled path against the closed form: smooth pair at h = 1/64
    let f = AtomSum::plain_gaussian(1).modulate(&[0.4]);
    let g = AtomSum::standard_gaussian(1);
    let omegas = vec![vec![0.0], vec![0.5], vec![-0.25]];
    let err_smooth = numeric_error(&f, &g, 64, &omegas);

    // broadband atom where the discretization error is visible, to measure
    // the order of convergence
    let wide = AtomSum::single(
        GaussAtom::new(
            c(1.0, 0.0),
            vec![0.1],
            vec![0.0],
            Mat::from_rows(vec![vec![c(700.0, 0.0)]]),
        )
        .unwrap(),
    );
    let err64 = numeric_error(&wide, &g, 64, &omegas);
    let err128 = numeric_error(&wide, &g, 128, &omegas);
    check(
        "criterion 8",
        worst_quad <= 1e-8 && err_smooth <= 1e-6 && err64 <= 1e-6 && err128 <= err64 / 4.0,
        &format!(
            "quadrature gap {worst_quad:.2e}; sampled path: smooth {err_smooth:.2e}, \
             h=1/64 {err64:.2e}, h=1/128 {err128:.2e} (improvement {:.1}x)",
            err64 / err128
        ),
    );
}

fn numeric_error(f: &AtomSum<f64>, g: &AtomSum<f64>, h_inv: usize, omegas: &[Vec<f64>]) -> f64 {
    let n = 16 * h_inv;
    let grid = GridSpec::new(vec![-8.0], 1.0 / h_inv as f64, vec![n]).unwrap();
    let fs = SampledWindow::sample(f, &grid).unwrap();
    let gs = SampledWindow::sample(g, &grid).unwrap();
    let numeric = stft_numeric(&fs, &gs, &[0.0], omegas).unwrap();
    let mut scale = 0.0f64;
    let mut err = 0.0f64;
    for (v, w) in numeric.iter().zip(omegas) {
        let exact = f.stft(g, &[0.0], w).unwrap();
        scale = scale.max(exact.norm());
        err = err.max((v - exact).norm());
    }
    err / scale
}

#[test]
fn criterion_09_entire_function_cross_check() {
    let mut rng = ChaCha12Rng::seed_from_u64(909);
    let mut worst = 0.0f64;
    for _ in 0..10 {
        let f = rand_sum(&mut rng, 1, 3);
        let points: Vec<(f64, f64)> = (0..20)
            .map(|_| (rng.gen_range(-1.5..1.5), rng.gen_range(-1.5..1.5)))
            .collect();
        worst = worst.max(phasepair::verify::bargmann_residual(&f, &points).unwrap());
    }
    check(
        "criterion 9",
        worst <= 1e-9,
        &format!("max residual {worst:.3e} over 10 sums x 20 points"),
    );
}

#[test]
fn criterion_10_cone_properties() {
    let mut pass = true;
    let mut detail = String::new();

    // base slice values for the squared-difference scaling law
    let base_pair = example_i_pair();
    let spec = GridSpec::new(vec![0.0, -0.1], 0.01, vec![21, 21]).unwrap();
    let x = [4.0, 0.0];
    let base_grid = qx_grid(&base_pair, &x, &spec).unwrap();
    let base_max = base_grid.max_value();

    for kappa in [0.5f64, 2.0, 10.0] {
        let scaled_seq: Vec<(Vec<i64>, C64)> = example_i_sequence()
            .into_iter()
            .map(|(k, v)| (k, v * kappa))
            .collect();
        let pair = build(&example_i_scenario(), &plane_window(), Some(&scaled_seq)).unwrap();

        // criterion 1 outcome preserved
        let points = pair.equality_points(50, 2.0);
        let report = check_equality_on_set(&pair, &points).unwrap();
        pass &= report.max_rel_diff <= 1e-9;

        // criterion 2 outcome preserved
        let n1 = pair.f1.norm_sq().unwrap();
        let n2 = pair.f2.norm_sq().unwrap();
        pass &= pair.certificate.phase_distance >= 1e-6 * (n1 + n2);
        let v1 = spectrogram(&pair.f1, &pair.window, &EXAMPLE_I_PROBE).unwrap();
        let v2 = spectrogram(&pair.f2, &pair.window, &EXAMPLE_I_PROBE).unwrap();
        pass &= (v1 - v2).abs() / v1.max(v2) > 1e-3;

        // squared-difference values scale by kappa^2
        let grid = qx_grid(&pair, &x, &spec).unwrap();
        let k2 = kappa * kappa;
        let mut worst = 0.0f64;
        for (a, b) in grid.values.iter().zip(&base_grid.values) {
            worst = worst.max((a - k2 * b).abs());
        }
        let rel = worst / (k2 * base_max);
        pass &= rel <= 1e-10;
        detail.push_str(&format!("kappa {kappa}: scaling defect {rel:.2e}; "));
    }

    // criteria 4 and 5 outcomes preserved under scaling
    for kappa in [0.5f64, 2.0, 10.0] {
        let g2 = AtomSum::standard_gaussian(2);
        let pauli_seq: Vec<(Vec<i64>, C64)> = pauli_scenario()
            .default_sequence()
            .unwrap()
            .into_iter()
            .map(|(k, v)| (k, v * kappa))
            .collect();
        let pair = build(&pauli_scenario(), &g2, Some(&pauli_seq)).unwrap();
        let spec2 = GridSpec::centered(2, 4.0, 41);
        pass &= modulus_equal_on_grid(&pair.f1, &pair.f2, &spec2, 1e-12).unwrap();
        let report = check_equality_on_set(&pair, &pair.equality_points(50, 2.0)).unwrap();
        pass &= report.max_rel_diff <= 1e-9;

        let g1 = AtomSum::standard_gaussian(1);
        let rs_seq: Vec<(Vec<i64>, C64)> = real_sign_scenario()
            .default_sequence()
            .unwrap()
            .into_iter()
            .map(|(k, v)| (k, v * kappa))
            .collect();
        let pair = build(&real_sign_scenario(), &g1, Some(&rs_seq)).unwrap();
        let spec1 = GridSpec::centered(1, 4.0, 41);
        pass &= imag_ratio_on_grid(&pair.f1, &spec1) <= 1e-10;
        let report = check_equality_on_set(&pair, &pair.equality_points(50, 2.5)).unwrap();
        pass &= report.max_rel_diff <= 1e-9;
    }

    check("criterion 10", pass, detail.trim_end_matches("; "));
}
