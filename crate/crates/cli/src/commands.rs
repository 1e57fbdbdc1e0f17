//! Subcommand implementations.

use std::path::{Path, PathBuf};

use num_complex::Complex;
use phasepair::factory::{build, CounterexamplePair};
use phasepair::lattice::{Lattice, LatticeClass};
use phasepair::linalg::Mat;
use phasepair::verify::{
    check_equality_on_set, imag_ratio_on_grid, modulus_equal_on_grid, qx_grid, qx_value,
    spectrogram, stft_numeric, GridSpec, SampledWindow, SliceGrid,
};
use phasepair::{AtomSum64, Complex64, Scenario64};
use serde::Serialize;

use crate::config::{
    load_config, sequence_pairs, LatticeSpec, ProbeGridSpec, ProbeSpec, RunConfig, ScenarioSpec,
    SeqEntry, VerificationSpec, WindowSpec,
};
use crate::report::{
    certificate_report, equality_set_report, sequence_echo, write_grid_csv, write_report,
    ChecksReport, EqualityCheckReport, NumericCheckReport, ProbeReport, RealnessReport, Report,
};
use crate::{png, CliError};

pub struct CommonArgs {
    pub config: PathBuf,
    pub out: PathBuf,
    pub tol: Option<f64>,
    pub png: bool,
}

fn prepare(cfg: &RunConfig) -> Result<(AtomSum64, Scenario64, CounterexamplePair<f64>), CliError> {
    let window = cfg.window.to_atom_sum()?;
    let scenario = cfg.scenario.to_scenario()?;
    let pairs = cfg.sequence.as_ref().map(|s| sequence_pairs(s));
    let pair = build(&scenario, &window, pairs.as_deref())?;
    Ok((window, scenario, pair))
}

fn ensure_out_dir(out: &Path) -> Result<(), CliError> {
    std::fs::create_dir_all(out)
        .map_err(|e| CliError::Config(format!("cannot create {}: {e}", out.display())))
}

pub fn cmd_build(args: &CommonArgs) -> Result<(), CliError> {
    let cfg = load_config(&args.config)?;
    ensure_out_dir(&args.out)?;
    let (_, _, pair) = prepare(&cfg)?;
    let report = Report {
        command: "build".into(),
        scenario: cfg.scenario.clone(),
        window: cfg.window.clone(),
        sequence: sequence_echo(&pair),
        note: None,
        certificate: certificate_report(&pair)?,
        equality_set: equality_set_report(&pair),
        f1: WindowSpec::from_atom_sum(&pair.f1),
        f2: WindowSpec::from_atom_sum(&pair.f2),
        checks: None,
        pass: true,
    };
    let path = args.out.join(&cfg.output.report);
    write_report(&path, &report)?;
    println!(
        "built pair: phase distance {:.6e}, report at {}",
        pair.certificate.phase_distance,
        path.display()
    );
    Ok(())
}

/// Runs the verification battery for an already-built pair. The perturbation
/// oracle, when configured, replaces `f2` by a synthesis from a perturbed
/// conjugate sequence; the resulting pair must then fail.
fn run_checks(
    cfg: &RunConfig,
    scenario: &Scenario64,
    pair: &mut CounterexamplePair<f64>,
    tol_override: Option<f64>,
) -> Result<ChecksReport, CliError> {
    let v = &cfg.verification;
    let tol_rel = tol_override.unwrap_or(v.tol_rel);
    if v.point_count == 0 {
        return Err(CliError::Config(
            "verification.point_count must be at least 1".into(),
        ));
    }

    if let Some(p) = &v.perturb_f2 {
        let perturbed: Vec<(Vec<i64>, Complex64)> = {
            let mut entries: Vec<(Vec<i64>, Complex64)> = pair
                .sequence
                .iter()
                .map(|(k, c)| (k.clone(), c.conj()))
                .collect();
            let delta = Complex::new(p.delta[0], p.delta[1]);
            if let Some(slot) = entries.iter_mut().find(|(k, _)| *k == p.index) {
                slot.1 += delta;
            } else {
                entries.push((p.index.clone(), delta));
            }
            entries
        };
        // synthesize the perturbed partner through the same construction
        let broken = build(scenario, &pair.window, Some(&perturbed))?;
        pair.f2 = broken.f1;
    }

    let points = pair.equality_points(v.point_count, v.radius);
    if points.is_empty() {
        return Err(CliError::Config(
            "no equality points inside the configured radius".into(),
        ));
    }
    let equality = EqualityCheckReport::new(&check_equality_on_set(pair, &points)?, tol_rel);

    let mut probes = Vec::new();
    for ProbeSpec { point, min_rel } in &v.probes {
        let v1 = spectrogram(&pair.f1, &pair.window, point)?;
        let v2 = spectrogram(&pair.f2, &pair.window, point)?;
        let rel_gap = if v1.max(v2) > 0.0 {
            (v1 - v2).abs() / v1.max(v2)
        } else {
            0.0
        };
        probes.push(ProbeReport {
            point: point.clone(),
            magnitude_f1: v1,
            magnitude_f2: v2,
            rel_gap,
            min_rel: *min_rel,
            pass: rel_gap > *min_rel,
        });
    }

    let ProbeGridSpec {
        half_width,
        points_per_axis,
    } = v.probe_grid;
    let dim = pair.f1.dim();
    let probe_grid = GridSpec::centered(dim, half_width, points_per_axis);

    let modulus_equal = match scenario {
        Scenario64::PauliSeparable { .. } => Some(modulus_equal_on_grid(
            &pair.f1,
            &pair.f2,
            &probe_grid,
            v.modulus_tol,
        )?),
        _ => None,
    };
    let real_valued = match scenario {
        Scenario64::RealSign { .. } => {
            let r1 = imag_ratio_on_grid(&pair.f1, &probe_grid);
            let r2 = imag_ratio_on_grid(&pair.f2, &probe_grid);
            Some(RealnessReport {
                imag_ratio_f1: r1,
                imag_ratio_f2: r2,
                tol: v.realness_tol,
                pass: r1 <= v.realness_tol && r2 <= v.realness_tol,
            })
        }
        _ => None,
    };

    let numeric = match &v.numeric_check {
        None => None,
        Some(nc) => {
            let step = 1.0 / nc.step_inverse as f64;
            let n = (2.0 * nc.extent * nc.step_inverse as f64).round() as usize;
            let grid = GridSpec::new(vec![-nc.extent; dim], step, vec![n; dim])?;
            let fs = SampledWindow::sample(&pair.f1, &grid)?;
            let gs = SampledWindow::sample(&pair.window, &grid)?;
            let omegas: Vec<Vec<f64>> = [0.0, 0.5, -0.25]
                .iter()
                .map(|&w| vec![w; dim])
                .collect();
            let x = vec![0.0; dim];
            let numeric_vals = stft_numeric(&fs, &gs, &x, &omegas)?;
            let mut scale = 0.0f64;
            let mut err = 0.0f64;
            for (nv, w) in numeric_vals.iter().zip(&omegas) {
                let exact = pair.f1.stft(&pair.window, &x, w)?;
                scale = scale.max(exact.norm());
                err = err.max((nv - exact).norm());
            }
            let rel = if scale > 0.0 { err / scale } else { 0.0 };
            Some(NumericCheckReport {
                step,
                max_rel_mismatch: rel,
                tol: nc.tol,
                pass: rel <= nc.tol,
            })
        }
    };

    let pass = equality.pass
        && probes.iter().all(|p| p.pass)
        && modulus_equal.unwrap_or(true)
        && real_valued.as_ref().map(|r| r.pass).unwrap_or(true)
        && numeric.as_ref().map(|n| n.pass).unwrap_or(true);
    Ok(ChecksReport {
        equality,
        probes,
        modulus_equal,
        real_valued,
        numeric,
        pass,
    })
}

pub fn cmd_verify(args: &CommonArgs) -> Result<(), CliError> {
    let cfg = load_config(&args.config)?;
    ensure_out_dir(&args.out)?;
    let (_, scenario, mut pair) = prepare(&cfg)?;
    let checks = run_checks(&cfg, &scenario, &mut pair, args.tol)?;
    let pass = checks.pass;
    let report = Report {
        command: "verify".into(),
        scenario: cfg.scenario.clone(),
        window: cfg.window.clone(),
        sequence: sequence_echo(&pair),
        note: None,
        certificate: certificate_report(&pair)?,
        equality_set: equality_set_report(&pair),
        f1: WindowSpec::from_atom_sum(&pair.f1),
        f2: WindowSpec::from_atom_sum(&pair.f2),
        checks: Some(checks),
        pass,
    };
    let path = args.out.join(&cfg.output.report);
    write_report(&path, &report)?;
    println!(
        "verify: {} (report at {})",
        if pass { "pass" } else { "FAIL" },
        path.display()
    );
    if pass {
        Ok(())
    } else {
        Err(CliError::Verification(format!(
            "see {} for details",
            path.display()
        )))
    }
}

fn compute_grid(
    cfg: &RunConfig,
    pair: &CounterexamplePair<f64>,
) -> Result<SliceGrid<f64>, CliError> {
    let section = cfg
        .grid
        .as_ref()
        .ok_or_else(|| CliError::Config("grid section missing from config".into()))?;
    let spec = GridSpec::new(section.origin.clone(), section.step, section.npts.clone())?;
    Ok(qx_grid(pair, &section.x, &spec)?)
}

/// Frequency-plane nodes of the scenario's discrete lattice inside the grid
/// window, used for the image overlay.
fn overlay_nodes(pair: &CounterexamplePair<f64>, grid: &SliceGrid<f64>) -> Vec<Vec<f64>> {
    let es = &pair.equality_set;
    let d = pair.f1.dim();
    if grid.spec.dim() != 2 || es.lattice.dim() != d || d != 2 {
        return Vec::new();
    }
    let lo = &grid.spec.origin;
    let hi: Vec<f64> = (0..2)
        .map(|a| lo[a] + grid.spec.step * (grid.spec.npts[a] - 1) as f64)
        .collect();
    let radius = hi
        .iter()
        .zip(lo)
        .map(|(h, l)| h.abs().max(l.abs()))
        .fold(0.0f64, f64::max)
        * 1.6
        + 1.0;
    es.lattice
        .enumerate(radius)
        .into_iter()
        .filter(|p| (0..2).all(|a| p[a] >= lo[a] - 1e-12 && p[a] <= hi[a] + 1e-12))
        .collect()
}

pub fn cmd_grid(args: &CommonArgs) -> Result<(), CliError> {
    let cfg = load_config(&args.config)?;
    ensure_out_dir(&args.out)?;
    let (_, _, pair) = prepare(&cfg)?;
    let grid = compute_grid(&cfg, &pair)?;
    let csv_path = args.out.join(&cfg.output.grid_csv);
    write_grid_csv(&csv_path, &grid)?;
    println!(
        "grid: {} values, max {:.6e}, csv at {}",
        grid.values.len(),
        grid.max_value(),
        csv_path.display()
    );
    if args.png {
        let nodes = overlay_nodes(&pair, &grid);
        let png_path = args.out.join(&cfg.output.grid_png);
        png::render_grid(&png_path, &grid, &nodes)?;
        println!("image at {}", png_path.display());
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// built-in reproduction runs

fn plane_window_spec() -> WindowSpec {
    // exp(-x^2 - y^2): width I / pi
    let w = 1.0 / std::f64::consts::PI;
    WindowSpec {
        atoms: vec![crate::config::AtomSpec {
            amp: [1.0, 0.0],
            center: vec![0.0, 0.0],
            freq: vec![0.0, 0.0],
            width: vec![
                vec![[w, 0.0], [0.0, 0.0]],
                vec![[0.0, 0.0], [w, 0.0]],
            ],
        }],
    }
}

fn standard_gaussian_spec(dim: usize) -> WindowSpec {
    WindowSpec {
        atoms: vec![crate::config::AtomSpec {
            amp: [1.0, 0.0],
            center: vec![0.0; dim],
            freq: vec![0.0; dim],
            width: (0..dim)
                .map(|i| {
                    (0..dim)
                        .map(|j| if i == j { [1.0, 0.0] } else { [0.0, 0.0] })
                        .collect()
                })
                .collect(),
        }],
    }
}

/// Real window with a wide frequency profile: the standard Gaussian squeezed
/// by 3 in time.
fn narrow_window_spec(dim: usize) -> Result<WindowSpec, CliError> {
    let third = phasepair::linalg::identity::<f64, f64>(dim).scale(1.0 / 3.0);
    let f = AtomSum64::standard_gaussian(dim).dilate(&third)?;
    Ok(WindowSpec::from_atom_sum(&f))
}

fn seq_entries(values: &[(Vec<i64>, [f64; 2])]) -> Vec<SeqEntry> {
    values
        .iter()
        .map(|(k, v)| SeqEntry {
            index: k.clone(),
            value: *v,
        })
        .collect()
}

fn example_i_config() -> RunConfig {
    RunConfig {
        window: plane_window_spec(),
        scenario: ScenarioSpec::SemiDiscrete {
            word: vec![],
            lattice: LatticeSpec {
                gen: vec![vec![0.125, 0.0], vec![0.0, 0.125]],
            },
        },
        sequence: Some(seq_entries(&[
            (vec![0, 0], [1.0, 0.0]),
            (vec![1, 0], [0.0, 1.0]),
            (vec![0, 1], [1.0, 1.0]),
        ])),
        verification: VerificationSpec {
            probes: vec![ProbeSpec {
                point: vec![4.0, 0.0, 1.0 / 16.0, 0.0],
                min_rel: 1e-3,
            }],
            ..VerificationSpec::default()
        },
        grid: Some(crate::config::GridSection {
            x: vec![4.0, 0.0],
            origin: vec![-0.25, -0.25],
            step: 0.0025,
            npts: vec![201, 201],
        }),
        output: Default::default(),
    }
}

fn example_ii_config(four_term: bool) -> RunConfig {
    let s3 = 3.0f64.sqrt();
    // sampling lattice is the reciprocal of B = 5 [[1, 0], [-1/s3, 2/s3]]
    let b = Mat::from_rows(vec![vec![5.0, 0.0], vec![-5.0 / s3, 10.0 / s3]]);
    let dual = Lattice::new(b).unwrap().reciprocal();
    let gen = (0..2)
        .map(|i| (0..2).map(|j| dual.generator().at(i, j)).collect())
        .collect();
    let mut seq = vec![
        (vec![0, 0], [1.0, 0.0]),
        (vec![1, 0], [0.0, 1.0]),
        (vec![0, 1], [1.0, 1.0]),
    ];
    if four_term {
        seq.push((vec![1, 1], [0.5, 0.5]));
    }
    let window = 0.35;
    RunConfig {
        window: plane_window_spec(),
        scenario: ScenarioSpec::SemiDiscrete {
            word: vec![],
            lattice: LatticeSpec { gen },
        },
        sequence: Some(seq_entries(&seq)),
        verification: VerificationSpec::default(),
        grid: Some(crate::config::GridSection {
            // halfway between the first two shifts, where the pair interferes
            x: vec![2.5, -2.5 / s3],
            origin: vec![-window, -window],
            step: 2.0 * window / 200.0,
            npts: vec![201, 201],
        }),
        output: Default::default(),
    }
}

fn pauli_config() -> RunConfig {
    RunConfig {
        window: standard_gaussian_spec(2),
        scenario: ScenarioSpec::PauliSeparable {
            a: vec![vec![1.0, 0.0], vec![0.0, 1.0]],
            b: vec![vec![1.0, 0.0], vec![0.0, 1.0]],
        },
        sequence: None,
        verification: VerificationSpec::default(),
        grid: None,
        output: Default::default(),
    }
}

fn real_sign_config() -> RunConfig {
    RunConfig {
        window: standard_gaussian_spec(1),
        scenario: ScenarioSpec::RealSign {
            lattice: LatticeSpec {
                gen: vec![vec![1.0]],
            },
        },
        sequence: None,
        verification: VerificationSpec {
            radius: 2.5,
            ..VerificationSpec::default()
        },
        grid: None,
        output: Default::default(),
    }
}

fn rational_config(dim: usize) -> Result<RunConfig, CliError> {
    let (entries, radius, probe) = if dim == 1 {
        (
            vec![vec![[1i64, 2i64], [1, 3]], vec![[0, 1], [1, 5]]],
            2.0,
            vec![1.0 / 24.0, 0.0],
        )
    } else {
        (
            vec![
                vec![[1i64, 2i64], [1, 3], [0, 1], [0, 1]],
                vec![[0, 1], [1, 5], [0, 1], [0, 1]],
                vec![[0, 1], [0, 1], [1, 2], [1, 4]],
                vec![[0, 1], [0, 1], [1, 6], [1, 2]],
            ],
            1.5,
            vec![1.0 / 24.0, 1.0 / 20.0, 0.0, 0.0],
        )
    };
    Ok(RunConfig {
        window: narrow_window_spec(dim)?,
        scenario: ScenarioSpec::RationalLattice { entries },
        sequence: None,
        verification: VerificationSpec {
            radius,
            probes: vec![ProbeSpec {
                point: probe,
                min_rel: 1e-3,
            }],
            ..VerificationSpec::default()
        },
        grid: None,
        output: Default::default(),
    })
}

#[derive(Serialize)]
struct NodeCheck {
    nodes: usize,
    node_max: f64,
    grid_max: f64,
    ratio: f64,
    tol: f64,
    pass: bool,
}

fn grid_with_node_check(
    cfg: &RunConfig,
    pair: &CounterexamplePair<f64>,
    out: &Path,
    csv_name: &str,
    png_name: Option<&str>,
) -> Result<NodeCheck, CliError> {
    let grid = compute_grid(cfg, pair)?;
    write_grid_csv(&out.join(csv_name), &grid)?;
    let nodes = overlay_nodes(pair, &grid);
    if let Some(name) = png_name {
        png::render_grid(&out.join(name), &grid, &nodes)?;
    }
    let section = cfg.grid.as_ref().expect("caller checked");
    let mut node_max = 0.0f64;
    for node in &nodes {
        node_max = node_max.max(qx_value(pair, &section.x, node)?);
    }
    let grid_max = grid.max_value();
    let ratio = node_max / grid_max;
    Ok(NodeCheck {
        nodes: nodes.len(),
        node_max,
        grid_max,
        ratio,
        tol: 1e-10,
        pass: ratio <= 1e-10,
    })
}

fn repro_run(
    name: &str,
    cfg: &RunConfig,
    out: &Path,
    tol: Option<f64>,
    with_png: bool,
    note: Option<String>,
    report_name: &str,
    csv_name: &str,
    png_name: &str,
) -> Result<bool, CliError> {
    let (_, scenario, mut pair) = prepare(cfg)?;
    let checks = run_checks(cfg, &scenario, &mut pair, tol)?;
    let mut pass = checks.pass;
    let mut note = note;
    if cfg.grid.is_some() {
        let nc = grid_with_node_check(
            cfg,
            &pair,
            out,
            csv_name,
            with_png.then_some(png_name),
        )?;
        pass &= nc.pass;
        let line = format!(
            "difference at {} lattice nodes / grid max = {:.3e} (tol 1e-10)",
            nc.nodes, nc.ratio
        );
        note = Some(match note {
            Some(n) => format!("{n}; {line}"),
            None => line,
        });
    }
    let report = Report {
        command: format!("repro {name}"),
        scenario: cfg.scenario.clone(),
        window: cfg.window.clone(),
        sequence: sequence_echo(&pair),
        note,
        certificate: certificate_report(&pair)?,
        equality_set: equality_set_report(&pair),
        f1: WindowSpec::from_atom_sum(&pair.f1),
        f2: WindowSpec::from_atom_sum(&pair.f2),
        checks: Some(checks),
        pass,
    };
    write_report(&out.join(report_name), &report)?;
    println!("repro {name}: {}", if pass { "pass" } else { "FAIL" });
    Ok(pass)
}

pub fn cmd_repro(name: &str, out: &Path, tol: Option<f64>, with_png: bool) -> Result<(), CliError> {
    ensure_out_dir(out)?;
    let pass = match name {
        "example-i" => {
            let note = "shift set uses points of the 8Z^2 shift lattice; unit shifts \
                        (1,0), (0,1) are not points of that lattice and do not produce \
                        dual-lattice equality"
                .to_string();
            repro_run(
                name,
                &example_i_config(),
                out,
                tol,
                with_png,
                Some(note),
                "report.json",
                "grid.csv",
                "grid.png",
            )?
        }
        "example-ii" => {
            let a = repro_run(
                "example-ii (3-term)",
                &example_ii_config(false),
                out,
                tol,
                with_png,
                None,
                "report_f2.json",
                "grid_f2.csv",
                "grid_f2.png",
            )?;
            let b = repro_run(
                "example-ii (4-term)",
                &example_ii_config(true),
                out,
                tol,
                with_png,
                None,
                "report_f3.json",
                "grid_f3.csv",
                "grid_f3.png",
            )?;
            a && b
        }
        "pauli" => repro_run(
            name,
            &pauli_config(),
            out,
            tol,
            with_png,
            None,
            "report.json",
            "grid.csv",
            "grid.png",
        )?,
        "real-sign" => repro_run(
            name,
            &real_sign_config(),
            out,
            tol,
            with_png,
            None,
            "report.json",
            "grid.csv",
            "grid.png",
        )?,
        "rational" => {
            let a = repro_run(
                "rational (d=1)",
                &rational_config(1)?,
                out,
                tol,
                with_png,
                None,
                "report_d1.json",
                "grid_d1.csv",
                "grid_d1.png",
            )?;
            let b = repro_run(
                "rational (d=2)",
                &rational_config(2)?,
                out,
                tol,
                with_png,
                None,
                "report_d2.json",
                "grid_d2.csv",
                "grid_d2.png",
            )?;
            a && b
        }
        other => {
            return Err(CliError::Config(format!(
                "unknown reproduction name '{other}'; expected one of \
                 example-i, example-ii, pauli, real-sign, rational"
            )))
        }
    };
    if pass {
        Ok(())
    } else {
        Err(CliError::Verification(format!(
            "reproduction '{name}' missed its thresholds"
        )))
    }
}

// ---------------------------------------------------------------------------
// lattice-info

#[derive(serde::Deserialize)]
#[serde(deny_unknown_fields)]
struct LatticeInfoConfig {
    lattice: LatticeSpec,
}

#[derive(Serialize)]
struct LatticeInfo {
    dim: usize,
    generator: Vec<Vec<f64>>,
    determinant: f64,
    density: f64,
    reciprocal_generator: Vec<Vec<f64>>,
    class: LatticeClassInfo,
}

#[derive(Serialize)]
#[serde(rename_all = "snake_case", tag = "tag")]
enum LatticeClassInfo {
    Symplectic { alpha: f64, s: Vec<Vec<f64>> },
    Rectangular,
    Separable,
    General,
}

fn mat_rows(m: &Mat<f64>) -> Vec<Vec<f64>> {
    (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| m.at(i, j)).collect())
        .collect()
}

pub fn cmd_lattice_info(config: &Path, out: Option<&Path>) -> Result<(), CliError> {
    let text = std::fs::read_to_string(config)
        .map_err(|e| CliError::Config(format!("cannot read config {}: {e}", config.display())))?;
    let cfg: LatticeInfoConfig =
        serde_json::from_str(&text).map_err(|e| CliError::Config(format!("invalid config: {e}")))?;
    if cfg.lattice.gen.is_empty() || cfg.lattice.gen.iter().any(|r| r.len() != cfg.lattice.gen.len())
    {
        return Err(CliError::Config("lattice generator must be square".into()));
    }
    let lat = Lattice::new(Mat::from_rows(cfg.lattice.gen.clone()))?;
    let info = LatticeInfo {
        dim: lat.dim(),
        generator: mat_rows(lat.generator()),
        determinant: lat.generator().det(),
        density: lat.density(),
        reciprocal_generator: mat_rows(lat.reciprocal().generator()),
        class: match lat.classify() {
            LatticeClass::Symplectic { alpha, s } => LatticeClassInfo::Symplectic {
                alpha,
                s: mat_rows(&s),
            },
            LatticeClass::Rectangular => LatticeClassInfo::Rectangular,
            LatticeClass::Separable => LatticeClassInfo::Separable,
            LatticeClass::General => LatticeClassInfo::General,
        },
    };
    let text = serde_json::to_string_pretty(&info)
        .map_err(|e| CliError::Config(format!("serialization: {e}")))?;
    println!("{text}");
    if let Some(path) = out {
        ensure_out_dir(path)?;
        std::fs::write(path.join("lattice.json"), text + "\n")
            .map_err(|e| CliError::Config(format!("cannot write lattice info: {e}")))?;
    }
    Ok(())
}
