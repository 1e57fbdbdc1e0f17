//! JSON run configuration: schema types and conversion into core values.
//!
//! The schema is strict: unknown keys are rejected before any computation.

use num_complex::Complex;
use phasepair::atoms::{AtomSum, GaussAtom};
use phasepair::lattice::Lattice;
use phasepair::linalg::Mat;
use phasepair::meta::{MetaGen, SympWord};
use phasepair::{Complex64, Scenario64};
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub window: WindowSpec,
    pub scenario: ScenarioSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sequence: Option<Vec<SeqEntry>>,
    #[serde(default)]
    pub verification: VerificationSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridSection>,
    #[serde(default)]
    pub output: OutputSpec,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WindowSpec {
    pub atoms: Vec<AtomSpec>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AtomSpec {
    pub amp: [f64; 2],
    pub center: Vec<f64>,
    pub freq: Vec<f64>,
    /// Row-major complex matrix; each entry is `[re, im]`.
    pub width: Vec<Vec<[f64; 2]>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "snake_case")]
pub enum ScenarioSpec {
    SemiDiscrete {
        word: Vec<WordGen>,
        lattice: LatticeSpec,
    },
    FactoredLattice {
        word: Vec<WordGen>,
        a: Vec<Vec<f64>>,
        b: Vec<Vec<f64>>,
    },
    AnyLattice2d {
        l: Vec<Vec<f64>>,
    },
    PauliSeparable {
        a: Vec<Vec<f64>>,
        b: Vec<Vec<f64>>,
    },
    RealSign {
        lattice: LatticeSpec,
    },
    RationalLattice {
        /// Entries as `[numerator, denominator]` pairs, row-major.
        entries: Vec<Vec<[i64; 2]>>,
    },
    Shifted {
        base: Box<ScenarioSpec>,
        p: Vec<f64>,
    },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "snake_case")]
pub enum WordGen {
    Dilate(Vec<Vec<f64>>),
    Fourier(i8),
    Chirp(Vec<Vec<f64>>),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeSpec {
    /// Row-major generating matrix; columns are the basis vectors.
    pub gen: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeqEntry {
    pub index: Vec<i64>,
    pub value: [f64; 2],
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerificationSpec {
    #[serde(default = "default_point_count")]
    pub point_count: usize,
    #[serde(default = "default_radius")]
    pub radius: f64,
    /// Relative tolerance for spectrogram equality on the guaranteed set.
    #[serde(default = "default_tol_rel")]
    pub tol_rel: f64,
    /// Off-set probes that must show a relative gap above `min_rel`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub probes: Vec<ProbeSpec>,
    #[serde(default = "default_modulus_tol")]
    pub modulus_tol: f64,
    #[serde(default = "default_realness_tol")]
    pub realness_tol: f64,
    #[serde(default)]
    pub probe_grid: ProbeGridSpec,
    /// Additive perturbation of one coefficient of the second function,
    /// applied only by `verify`: a failure oracle.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub perturb_f2: Option<PerturbSpec>,
    /// Cross-check of the sampled numeric transform against the closed form.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub numeric_check: Option<NumericCheckSpec>,
}

impl Default for VerificationSpec {
    fn default() -> Self {
        Self {
            point_count: default_point_count(),
            radius: default_radius(),
            tol_rel: default_tol_rel(),
            probes: Vec::new(),
            modulus_tol: default_modulus_tol(),
            realness_tol: default_realness_tol(),
            probe_grid: ProbeGridSpec::default(),
            perturb_f2: None,
            numeric_check: None,
        }
    }
}

fn default_point_count() -> usize {
    50
}
fn default_radius() -> f64 {
    2.0
}
fn default_tol_rel() -> f64 {
    1e-9
}
fn default_modulus_tol() -> f64 {
    1e-12
}
fn default_realness_tol() -> f64 {
    1e-10
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProbeSpec {
    pub point: Vec<f64>,
    #[serde(default = "default_probe_min_rel")]
    pub min_rel: f64,
}

fn default_probe_min_rel() -> f64 {
    1e-3
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProbeGridSpec {
    pub half_width: f64,
    pub points_per_axis: usize,
}

impl Default for ProbeGridSpec {
    fn default() -> Self {
        Self {
            half_width: 4.0,
            points_per_axis: 41,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PerturbSpec {
    pub index: Vec<i64>,
    pub delta: [f64; 2],
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NumericCheckSpec {
    /// Grid step is `1 / step_inverse`.
    pub step_inverse: usize,
    #[serde(default = "default_extent")]
    pub extent: f64,
    #[serde(default = "default_numeric_tol")]
    pub tol: f64,
}

fn default_extent() -> f64 {
    8.0
}
fn default_numeric_tol() -> f64 {
    1e-6
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSection {
    /// Time slice the frequency grid is evaluated at.
    pub x: Vec<f64>,
    pub origin: Vec<f64>,
    pub step: f64,
    pub npts: Vec<usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    #[serde(default = "default_report_name")]
    pub report: String,
    #[serde(default = "default_csv_name")]
    pub grid_csv: String,
    #[serde(default = "default_png_name")]
    pub grid_png: String,
}

impl Default for OutputSpec {
    fn default() -> Self {
        Self {
            report: default_report_name(),
            grid_csv: default_csv_name(),
            grid_png: default_png_name(),
        }
    }
}

fn default_report_name() -> String {
    "report.json".into()
}
fn default_csv_name() -> String {
    "grid.csv".into()
}
fn default_png_name() -> String {
    "grid.png".into()
}

// ---------------------------------------------------------------------------
// conversions into core types

fn mat_from_rows(rows: &[Vec<f64>], what: &str) -> Result<Mat<f64>, CliError> {
    if rows.is_empty() || rows.iter().any(|r| r.len() != rows[0].len()) {
        return Err(CliError::Config(format!("{what}: ragged or empty matrix")));
    }
    Ok(Mat::from_rows(rows.to_vec()))
}

impl AtomSpec {
    pub fn to_atom(&self) -> Result<GaussAtom<f64>, CliError> {
        let d = self.center.len();
        if self.width.len() != d || self.width.iter().any(|r| r.len() != d) {
            return Err(CliError::Config(format!(
                "atom width must be a {d}x{d} matrix"
            )));
        }
        let width = Mat::from_fn(d, d, |i, j| {
            Complex::new(self.width[i][j][0], self.width[i][j][1])
        });
        GaussAtom::new(
            Complex::new(self.amp[0], self.amp[1]),
            self.center.clone(),
            self.freq.clone(),
            width,
        )
        .map_err(CliError::from)
    }

    pub fn from_atom(atom: &GaussAtom<f64>) -> Self {
        let d = atom.dim();
        Self {
            amp: [atom.amp().re, atom.amp().im],
            center: atom.center().to_vec(),
            freq: atom.freq().to_vec(),
            width: (0..d)
                .map(|i| {
                    (0..d)
                        .map(|j| {
                            let z = atom.width().at(i, j);
                            [z.re, z.im]
                        })
                        .collect()
                })
                .collect(),
        }
    }
}

impl WindowSpec {
    pub fn to_atom_sum(&self) -> Result<AtomSum<f64>, CliError> {
        if self.atoms.is_empty() {
            return Err(CliError::Config("window needs at least one atom".into()));
        }
        let dim = self.atoms[0].center.len();
        let atoms = self
            .atoms
            .iter()
            .map(|a| a.to_atom())
            .collect::<Result<Vec<_>, _>>()?;
        AtomSum::from_atoms(dim, atoms).map_err(CliError::from)
    }

    pub fn from_atom_sum(f: &AtomSum<f64>) -> Self {
        Self {
            atoms: f.atoms().iter().map(AtomSpec::from_atom).collect(),
        }
    }
}

fn word_from_spec(gens: &[WordGen], dim: usize) -> Result<SympWord<f64>, CliError> {
    let factors = gens
        .iter()
        .map(|g| {
            Ok(match g {
                WordGen::Dilate(a) => MetaGen::Dilate(mat_from_rows(a, "dilation generator")?),
                WordGen::Fourier(s) => MetaGen::FourierJ(*s),
                WordGen::Chirp(c) => MetaGen::Chirp(mat_from_rows(c, "chirp generator")?),
            })
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    SympWord::new(dim, factors).map_err(CliError::from)
}

impl ScenarioSpec {
    pub fn to_scenario(&self) -> Result<Scenario64, CliError> {
        Ok(match self {
            ScenarioSpec::SemiDiscrete { word, lattice } => {
                let lat = Lattice::new(mat_from_rows(&lattice.gen, "sampling lattice")?)?;
                Scenario64::SemiDiscrete {
                    word: word_from_spec(word, lat.dim())?,
                    lattice: lat,
                }
            }
            ScenarioSpec::FactoredLattice { word, a, b } => {
                let a = mat_from_rows(a, "block A")?;
                let b = mat_from_rows(b, "block B")?;
                Scenario64::FactoredLattice {
                    word: word_from_spec(word, a.rows())?,
                    a,
                    b,
                }
            }
            ScenarioSpec::AnyLattice2d { l } => Scenario64::AnyLattice2d {
                l: mat_from_rows(l, "planar generator")?,
            },
            ScenarioSpec::PauliSeparable { a, b } => Scenario64::PauliSeparable {
                a: mat_from_rows(a, "block A")?,
                b: mat_from_rows(b, "block B")?,
            },
            ScenarioSpec::RealSign { lattice } => Scenario64::RealSign {
                lattice: Lattice::new(mat_from_rows(&lattice.gen, "sampling lattice")?)?,
            },
            ScenarioSpec::RationalLattice { entries } => Scenario64::RationalLattice {
                entries: entries
                    .iter()
                    .map(|row| row.iter().map(|&[n, d]| (n, d)).collect())
                    .collect(),
            },
            ScenarioSpec::Shifted { base, p } => Scenario64::Shifted {
                base: Box::new(base.to_scenario()?),
                p: p.clone(),
            },
        })
    }
}

pub fn sequence_pairs(entries: &[SeqEntry]) -> Vec<(Vec<i64>, Complex64)> {
    entries
        .iter()
        .map(|e| (e.index.clone(), Complex::new(e.value[0], e.value[1])))
        .collect()
}

pub fn load_config(path: &std::path::Path) -> Result<RunConfig, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read config {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Config(format!("invalid config: {e}")))
}
