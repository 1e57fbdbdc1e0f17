//! Machine-readable run reports and grid exports.

use phasepair::factory::CounterexamplePair;
use phasepair::verify::{EqualityReport, SliceGrid};
use serde::Serialize;

use crate::config::{ScenarioSpec, SeqEntry, WindowSpec};
use crate::CliError;

#[derive(Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub scenario: ScenarioSpec,
    pub window: WindowSpec,
    pub sequence: Vec<SeqEntry>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    pub certificate: CertificateReport,
    pub equality_set: EqualitySetReport,
    pub f1: WindowSpec,
    pub f2: WindowSpec,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub checks: Option<ChecksReport>,
    pub pass: bool,
}

#[derive(Debug, Serialize)]
pub struct CertificateReport {
    pub seq_in_l2o: bool,
    pub seq_hermitian: bool,
    pub phase_distance: f64,
    pub norm_sq_f1: f64,
    pub norm_sq_f2: f64,
}

#[derive(Debug, Serialize)]
pub struct EqualitySetReport {
    pub transform: Vec<Vec<f64>>,
    pub lattice_gen: Vec<Vec<f64>>,
    pub free_mask: Vec<bool>,
    pub shift: Vec<f64>,
}

#[derive(Debug, Serialize)]
pub struct EqualityCheckReport {
    pub n_points: usize,
    pub max_abs_diff: f64,
    pub max_rel_diff: f64,
    pub worst_point: Vec<f64>,
    pub reference_scale: f64,
    pub tol_rel: f64,
    pub pass: bool,
}

impl EqualityCheckReport {
    pub fn new(r: &EqualityReport<f64>, tol_rel: f64) -> Self {
        Self {
            n_points: r.n_points,
            max_abs_diff: r.max_abs_diff,
            max_rel_diff: r.max_rel_diff,
            worst_point: r.worst_point.clone(),
            reference_scale: r.reference_scale,
            tol_rel,
            pass: r.max_rel_diff <= tol_rel,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct ProbeReport {
    pub point: Vec<f64>,
    pub magnitude_f1: f64,
    pub magnitude_f2: f64,
    pub rel_gap: f64,
    pub min_rel: f64,
    pub pass: bool,
}

#[derive(Debug, Serialize)]
pub struct RealnessReport {
    pub imag_ratio_f1: f64,
    pub imag_ratio_f2: f64,
    pub tol: f64,
    pub pass: bool,
}

#[derive(Debug, Serialize)]
pub struct NumericCheckReport {
    pub step: f64,
    pub max_rel_mismatch: f64,
    pub tol: f64,
    pub pass: bool,
}

#[derive(Debug, Serialize)]
pub struct ChecksReport {
    pub equality: EqualityCheckReport,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub probes: Vec<ProbeReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub modulus_equal: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub real_valued: Option<RealnessReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub numeric: Option<NumericCheckReport>,
    pub pass: bool,
}

pub fn certificate_report(pair: &CounterexamplePair<f64>) -> Result<CertificateReport, CliError> {
    Ok(CertificateReport {
        seq_in_l2o: pair.certificate.seq_in_l2o,
        seq_hermitian: pair.certificate.seq_hermitian,
        phase_distance: pair.certificate.phase_distance,
        norm_sq_f1: pair.f1.norm_sq()?,
        norm_sq_f2: pair.f2.norm_sq()?,
    })
}

pub fn equality_set_report(pair: &CounterexamplePair<f64>) -> EqualitySetReport {
    let es = &pair.equality_set;
    let t = &es.transform;
    let g = es.lattice.generator();
    EqualitySetReport {
        transform: (0..t.rows())
            .map(|i| (0..t.cols()).map(|j| t.at(i, j)).collect())
            .collect(),
        lattice_gen: (0..g.rows())
            .map(|i| (0..g.cols()).map(|j| g.at(i, j)).collect())
            .collect(),
        free_mask: es.free_mask.clone(),
        shift: es.shift.clone(),
    }
}

pub fn sequence_echo(pair: &CounterexamplePair<f64>) -> Vec<SeqEntry> {
    pair.sequence
        .iter()
        .map(|(k, v)| SeqEntry {
            index: k.clone(),
            value: [v.re, v.im],
        })
        .collect()
}

pub fn write_report(path: &std::path::Path, report: &Report) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(report)
        .map_err(|e| CliError::Config(format!("report serialization: {e}")))?;
    std::fs::write(path, text + "\n")
        .map_err(|e| CliError::Config(format!("cannot write {}: {e}", path.display())))?;
    Ok(())
}

/// CSV with one `omega..., qx` row per grid node, row-major, 17 significant
/// digits so values round-trip exactly.
pub fn write_grid_csv(path: &std::path::Path, grid: &SliceGrid<f64>) -> Result<(), CliError> {
    let d = grid.spec.dim();
    let mut text = String::new();
    for k in 0..d {
        text.push_str(&format!("omega{},", k + 1));
    }
    text.push_str("qx\n");
    for (point, value) in grid.spec.points().iter().zip(&grid.values) {
        for coord in point {
            text.push_str(&format!("{coord:.16e},"));
        }
        text.push_str(&format!("{value:.16e}\n"));
    }
    std::fs::write(path, text)
        .map_err(|e| CliError::Config(format!("cannot write {}: {e}", path.display())))?;
    Ok(())
}
