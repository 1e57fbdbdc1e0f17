//! Constructive builders: every supported sampling geometry is turned into a
//! concrete pair of functions whose spectrograms agree on the guaranteed set
//! while the functions themselves differ by more than a global phase, plus a
//! machine-checkable certificate.

use num_complex::Complex;

use crate::atoms::AtomSum;
use crate::coeffs::{CoeffSeq, PREDICATE_TOL};
use crate::error::{Error, Result};
use crate::lattice::{rational_envelope, rational_to_mat, sl2_normalize, Lattice};
use crate::linalg::{self, norm2, Mat};
use crate::meta::{word_for_sl2, MetaGen, SympWord};
use crate::verify::{phase_distance, GridSpec};
#[cfg(test)]
use crate::verify::imag_ratio_on_grid;
use crate::Scalar;

/// Absolute ceiling on `max |Im g|` over the probe grid for constructions
/// that require a real-valued window.
pub const WINDOW_REAL_TOL: f64 = 1e-12;

/// Sampling geometry a pair is built for.
#[derive(Clone, Debug)]
pub enum Scenario<T: Scalar> {
    /// Samples fill `matrix(word) . (R^d x lattice)`: the frequency-like
    /// coordinates are discrete, the rest of the slice stays free.
    SemiDiscrete {
        word: SympWord<T>,
        lattice: Lattice<T>,
    },
    /// Full lattice `matrix(word) . (A Z^d x B Z^d)`.
    FactoredLattice {
        word: SympWord<T>,
        a: Mat<T>,
        b: Mat<T>,
    },
    /// Any planar lattice `L Z^2`, normalized internally.
    AnyLattice2d { l: Mat<T> },
    /// Separable lattice with a real window; the pair additionally shares
    /// its pointwise modulus.
    PauliSeparable { a: Mat<T>, b: Mat<T> },
    /// Real-valued pair for samples on `lattice x R^d`, real window.
    RealSign { lattice: Lattice<T> },
    /// Lattice with rational generator, given as (numerator, denominator)
    /// entries; handled through its diagonal envelope.
    RationalLattice { entries: Vec<Vec<(i64, i64)>> },
    /// Any of the above moved to a shifted sampling set `p + base`.
    Shifted { base: Box<Scenario<T>>, p: Vec<T> },
}

impl<T: Scalar> Scenario<T> {
    /// Ambient dimension of the functions the scenario produces.
    pub fn dim(&self) -> Result<usize> {
        match self {
            Scenario::SemiDiscrete { lattice, .. } => Ok(lattice.dim()),
            Scenario::FactoredLattice { a, .. } => Ok(a.rows()),
            Scenario::AnyLattice2d { .. } => Ok(1),
            Scenario::PauliSeparable { a, .. } => Ok(a.rows()),
            Scenario::RealSign { lattice } => Ok(lattice.dim()),
            Scenario::RationalLattice { entries } => {
                if entries.len() % 2 != 0 || entries.is_empty() {
                    return Err(Error::DimMismatch(
                        "rational generator must act on an even-dimensional plane".into(),
                    ));
                }
                Ok(entries.len() / 2)
            }
            Scenario::Shifted { base, .. } => base.dim(),
        }
    }

    /// Lattice carrying the defining sequence.
    pub fn shift_lattice(&self) -> Result<Lattice<T>> {
        match self {
            Scenario::SemiDiscrete { lattice, .. } => Ok(lattice.reciprocal()),
            Scenario::FactoredLattice { b, .. } => Ok(Lattice::new(b.clone())?.reciprocal()),
            Scenario::AnyLattice2d { l } => {
                let (alpha, _) = sl2_normalize(l)?;
                Lattice::scaled_integer(1, alpha.recip())
            }
            Scenario::PauliSeparable { b, .. } => Ok(Lattice::new(b.clone())?.reciprocal()),
            Scenario::RealSign { lattice } => Ok(lattice.reciprocal()),
            Scenario::RationalLattice { .. } => self.delegate_for_window(None)?.shift_lattice(),
            Scenario::Shifted { base, .. } => base.shift_lattice(),
        }
    }

    /// Word whose operator realizes the scenario's shifts.
    pub fn word(&self) -> Result<SympWord<T>> {
        match self {
            Scenario::SemiDiscrete { word, .. } | Scenario::FactoredLattice { word, .. } => {
                Ok(word.clone())
            }
            Scenario::AnyLattice2d { l } => {
                let (_, s) = sl2_normalize(l)?;
                word_for_sl2(&s)
            }
            Scenario::PauliSeparable { a, .. } => Ok(SympWord::identity(a.rows())),
            Scenario::RealSign { lattice } => {
                SympWord::new(lattice.dim(), vec![MetaGen::FourierJ(-1)])
            }
            Scenario::RationalLattice { .. } => self.delegate_for_window(None)?.word(),
            Scenario::Shifted { base, .. } => base.word(),
        }
    }

    /// The rational scenario delegates to a construction on its diagonal
    /// envelope: the real-sign path when the window is real, the factored
    /// path otherwise. `window = None` assumes a real window (used for
    /// geometry-only queries).
    fn delegate_for_window(&self, window: Option<&AtomSum<T>>) -> Result<Scenario<T>> {
        let entries = match self {
            Scenario::RationalLattice { entries } => entries,
            _ => unreachable!("delegate is only defined for rational scenarios"),
        };
        let d = self.dim()?;
        let (_, envelope) = rational_envelope::<T>(entries)?;
        let gen = envelope.generator();
        let a = gen.block(0, 0, d, d);
        let b = gen.block(d, d, d, d);
        let window_is_real = match window {
            None => true,
            Some(g) => window_realness(g) <= T::cst(WINDOW_REAL_TOL),
        };
        if window_is_real {
            Ok(Scenario::RealSign {
                lattice: Lattice::new(a)?,
            })
        } else {
            Ok(Scenario::FactoredLattice {
                word: SympWord::identity(d),
                a,
                b,
            })
        }
    }

    /// Built-in defining sequence.
    ///
    /// Generic scenarios use the three-point sequence with values
    /// `(1, i, 1+i)`; the real-sign family uses the Hermitian two-point
    /// sequence `(1+2i, 1-2i)` on the shortest dual pair; the Pauli builder
    /// uses `(1, i)` on the shortest dual pair.
    pub fn default_sequence(&self) -> Result<Vec<(Vec<i64>, Complex<T>)>> {
        let one = Complex::new(T::one(), T::zero());
        let i = Complex::new(T::zero(), T::one());
        match self {
            Scenario::RealSign { .. } => {
                let lam = self.shift_lattice()?.shortest_nonzero().0;
                let neg: Vec<i64> = lam.iter().map(|&z| -z).collect();
                Ok(vec![
                    (lam, Complex::new(T::one(), T::cst(2.0))),
                    (neg, Complex::new(T::one(), T::cst(-2.0))),
                ])
            }
            Scenario::PauliSeparable { .. } => {
                let lam = self.shift_lattice()?.shortest_nonzero().0;
                let neg: Vec<i64> = lam.iter().map(|&z| -z).collect();
                Ok(vec![(neg, one), (lam, i)])
            }
            Scenario::RationalLattice { .. } => self.delegate_for_window(None)?.default_sequence(),
            Scenario::Shifted { base, .. } => base.default_sequence(),
            _ => {
                let d = self.dim()?;
                if d == 1 {
                    Ok(vec![
                        (vec![-1], one),
                        (vec![0], i),
                        (vec![1], one + i),
                    ])
                } else {
                    let mut e1 = vec![0i64; d];
                    e1[0] = 1;
                    let mut e2 = vec![0i64; d];
                    e2[1] = 1;
                    Ok(vec![(vec![0; d], one), (e1, i), (e2, one + i)])
                }
            }
        }
    }
}

/// Symbolic description of the set on which spectrogram equality is
/// guaranteed: raw points combine swept free coordinates with lattice points
/// per the mask, then pass through the transform and the shift.
#[derive(Clone, Debug)]
pub struct EqualitySet<T: Scalar> {
    pub transform: Mat<T>,
    pub lattice: Lattice<T>,
    /// Length `2d`; `true` marks a free real coordinate of the raw point.
    pub free_mask: Vec<bool>,
    pub shift: Vec<T>,
}

impl<T: Scalar> EqualitySet<T> {
    fn assemble(&self, free: &[T], discrete: &[T]) -> Vec<T> {
        let mut fi = 0;
        let mut di = 0;
        let raw: Vec<T> = self
            .free_mask
            .iter()
            .map(|&is_free| {
                if is_free {
                    fi += 1;
                    free[fi - 1]
                } else {
                    di += 1;
                    discrete[di - 1]
                }
            })
            .collect();
        let mut z = self.transform.mul_vec(&raw);
        for (zi, si) in z.iter_mut().zip(&self.shift) {
            *zi = *zi + *si;
        }
        z
    }

    /// Deterministic sample of the set: lattice coordinates enumerate points
    /// by increasing norm; free coordinates follow a fixed quasi-random sweep
    /// with amplitude `radius`.
    pub fn sample_points(&self, count: usize, radius: T) -> Vec<Vec<T>> {
        let n_free = self.free_mask.iter().filter(|&&b| b).count();
        let mut idx = self.lattice.enumerate_indices(radius);
        idx.sort_by(|a, b| {
            let na = norm2(&self.lattice.point(a));
            let nb = norm2(&self.lattice.point(b));
            na.partial_cmp(&nb)
                .unwrap_or(std::cmp::Ordering::Equal)
                .then_with(|| a.cmp(b))
        });
        if idx.is_empty() {
            return Vec::new();
        }
        let mut out = Vec::with_capacity(count);
        if n_free == 0 {
            for k in idx.iter().take(count) {
                out.push(self.assemble(&[], &self.lattice.point(k)));
            }
            return out;
        }
        for i in 0..count {
            let k = &idx[i % idx.len()];
            let free = weyl_sweep::<T>(i, n_free, radius);
            out.push(self.assemble(&free, &self.lattice.point(k)));
        }
        out
    }
}

/// Low-discrepancy sweep of `[-radius, radius]^n`: fractional parts of
/// multiples of square roots of primes, fixed constants so runs are
/// reproducible.
fn weyl_sweep<T: Scalar>(i: usize, n: usize, radius: T) -> Vec<T> {
    const PRIMES: [f64; 8] = [2.0, 3.0, 5.0, 7.0, 11.0, 13.0, 17.0, 19.0];
    (0..n)
        .map(|j| {
            let gamma = PRIMES[j % PRIMES.len()].sqrt();
            let frac = ((i + 1) as f64 * gamma).fract();
            radius * T::cst(2.0 * frac - 1.0)
        })
        .collect()
}

/// Non-equivalence certificate attached to every built pair.
#[derive(Clone, Debug)]
pub struct Certificate<T: Scalar> {
    pub seq_in_l2o: bool,
    pub seq_hermitian: bool,
    pub phase_distance: T,
}

/// A constructed pair: two functions, the window, the set on which their
/// spectrograms provably agree, and the certificate that they are not equal
/// up to a global phase.
#[derive(Clone, Debug)]
pub struct CounterexamplePair<T: Scalar> {
    pub f1: AtomSum<T>,
    pub f2: AtomSum<T>,
    pub window: AtomSum<T>,
    pub equality_set: EqualitySet<T>,
    pub certificate: Certificate<T>,
    pub sequence: CoeffSeq<T>,
}

impl<T: Scalar> CounterexamplePair<T> {
    /// Deterministic sample from the guaranteed equality set.
    pub fn equality_points(&self, count: usize, radius: T) -> Vec<Vec<T>> {
        self.equality_set.sample_points(count, radius)
    }
}

/// Max `|Im g|` over the default probe grid, for the real-window checks.
fn window_realness<T: Scalar>(g: &AtomSum<T>) -> T {
    let spec = GridSpec::centered(g.dim(), T::cst(4.0), 41);
    let mut worst = T::zero();
    for t in spec.points() {
        worst = worst.max(g.eval(&t).im.abs());
    }
    worst
}

/// Builds the pair for a scenario, window and optional defining sequence
/// (the scenario default is used when none is given).
///
/// The construction synthesizes `f1` from the sequence and `f2` from its
/// entrywise conjugate over the scenario's shifted copies of the reflected
/// window, then certifies non-equivalence through the phase-minimized
/// distance.
pub fn build<T: Scalar>(
    scenario: &Scenario<T>,
    g: &AtomSum<T>,
    sequence: Option<&[(Vec<i64>, Complex<T>)]>,
) -> Result<CounterexamplePair<T>> {
    let d = scenario.dim()?;
    if g.dim() != d {
        return Err(Error::DimMismatch(format!(
            "window dimension {} does not match scenario dimension {d}",
            g.dim()
        )));
    }
    if g.is_zero() {
        return Err(Error::InvalidInput(
            "window must be a nonzero function".into(),
        ));
    }
    match scenario {
        Scenario::Shifted { base, p } => {
            if p.len() != 2 * d {
                return Err(Error::DimMismatch(
                    "shift vector must live in the time-frequency plane".into(),
                ));
            }
            let inner = build(base, g, sequence)?;
            let (pa, pb) = (&p[..d], &p[d..]);
            let f1 = inner.f1.translate(pa).modulate(pb);
            let f2 = inner.f2.translate(pa).modulate(pb);
            let pd = phase_distance(&f1, &f2)?;
            let mut equality_set = inner.equality_set.clone();
            equality_set.shift = p.clone();
            return Ok(CounterexamplePair {
                f1,
                f2,
                window: inner.window,
                equality_set,
                certificate: Certificate {
                    phase_distance: pd,
                    ..inner.certificate
                },
                sequence: inner.sequence,
            });
        }
        Scenario::RationalLattice { entries } => {
            let delegate = scenario.delegate_for_window(Some(g))?;
            let inner = build(&delegate, g, sequence)?;
            // the guaranteed set is recorded as the requested rational
            // lattice, contained in the delegate's larger set
            let l = rational_to_mat::<T>(entries)?;
            let equality_set = EqualitySet {
                transform: linalg::identity(2 * d),
                lattice: Lattice::new(l)?,
                free_mask: vec![false; 2 * d],
                shift: vec![T::zero(); 2 * d],
            };
            return Ok(CounterexamplePair {
                equality_set,
                ..inner
            });
        }
        _ => {}
    }

    // window realness where the theorem hypotheses demand it
    if matches!(
        scenario,
        Scenario::PauliSeparable { .. } | Scenario::RealSign { .. }
    ) {
        let worst = window_realness(g);
        if worst > T::cst(WINDOW_REAL_TOL) {
            return Err(Error::WindowNotReal(worst.to_f64().unwrap_or(f64::NAN)));
        }
    }

    let shift_lattice = scenario.shift_lattice()?;
    let word = scenario.word()?;
    let default_pairs;
    let pairs: &[(Vec<i64>, Complex<T>)] = match sequence {
        Some(p) => p,
        None => {
            default_pairs = scenario.default_sequence()?;
            &default_pairs
        }
    };
    let seq = CoeffSeq::new(shift_lattice, pairs.to_vec())?;
    if seq.is_on_line(T::cst(PREDICATE_TOL)) {
        return Err(Error::SequenceOnLine);
    }
    let hermitian = seq.is_hermitian(T::cst(PREDICATE_TOL));
    if matches!(scenario, Scenario::RealSign { .. }) && !hermitian {
        return Err(Error::SequenceNotHermitian);
    }

    let phi = g.reflect();
    let f1 = seq.synthesize(&word, &phi)?;
    let f2 = seq.conjugate_seq().synthesize(&word, &phi)?;
    let pd = phase_distance(&f1, &f2)?;
    if pd <= T::zero() {
        return Err(Error::InvalidInput(
            "construction degenerated: the pair collapsed to a global phase".into(),
        ));
    }

    let equality_set = equality_set_for(scenario, &word)?;
    Ok(CounterexamplePair {
        f1,
        f2,
        window: g.clone(),
        equality_set,
        certificate: Certificate {
            seq_in_l2o: true,
            seq_hermitian: hermitian,
            phase_distance: pd,
        },
        sequence: seq,
    })
}

fn equality_set_for<T: Scalar>(
    scenario: &Scenario<T>,
    word: &SympWord<T>,
) -> Result<EqualitySet<T>> {
    let d = scenario.dim()?;
    let zero_shift = vec![T::zero(); 2 * d];
    match scenario {
        Scenario::SemiDiscrete { lattice, .. } => Ok(EqualitySet {
            transform: word.matrix(),
            lattice: lattice.clone(),
            free_mask: semi_discrete_mask(d),
            shift: zero_shift,
        }),
        Scenario::FactoredLattice { a, b, .. } => {
            let z: Mat<T> = linalg::zeros::<T, T>(d, d);
            let gen = Mat::from_blocks(a, &z, &z, b);
            Ok(EqualitySet {
                transform: word.matrix(),
                lattice: Lattice::new(gen)?,
                free_mask: vec![false; 2 * d],
                shift: zero_shift,
            })
        }
        Scenario::AnyLattice2d { l } => {
            let (alpha, _) = sl2_normalize(l)?;
            Ok(EqualitySet {
                transform: word.matrix(),
                lattice: Lattice::scaled_integer(2, alpha)?,
                free_mask: vec![false; 2],
                shift: zero_shift,
            })
        }
        Scenario::PauliSeparable { a, b } => {
            let z: Mat<T> = linalg::zeros::<T, T>(d, d);
            let gen = Mat::from_blocks(a, &z, &z, b);
            Ok(EqualitySet {
                transform: linalg::identity(2 * d),
                lattice: Lattice::new(gen)?,
                free_mask: vec![false; 2 * d],
                shift: zero_shift,
            })
        }
        Scenario::RealSign { lattice } => Ok(EqualitySet {
            transform: word.matrix(),
            lattice: lattice.clone(),
            free_mask: semi_discrete_mask(d),
            shift: zero_shift,
        }),
        Scenario::RationalLattice { .. } | Scenario::Shifted { .. } => {
            unreachable!("handled by build before reaching here")
        }
    }
}

fn semi_discrete_mask(d: usize) -> Vec<bool> {
    let mut mask = vec![true; d];
    mask.extend(vec![false; d]);
    mask
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex;

    type C = Complex<f64>;

    fn c(re: f64, im: f64) -> C {
        Complex::new(re, im)
    }

    /// Example-style semi-discrete scenario: sampling on `R^2 x (1/8) Z^2`,
    /// shifts on `8 Z^2`.
    fn semi_discrete_8() -> Scenario<f64> {
        Scenario::SemiDiscrete {
            word: SympWord::identity(2),
            lattice: Lattice::scaled_integer(2, 0.125).unwrap(),
        }
    }

    fn example_sequence() -> Vec<(Vec<i64>, C)> {
        vec![
            (vec![0, 0], c(1.0, 0.0)),
            (vec![1, 0], c(0.0, 1.0)),
            (vec![0, 1], c(1.0, 1.0)),
        ]
    }

    #[test]
    fn shift_lattice_is_the_reciprocal_of_the_sampling_lattice() {
        let sc = semi_discrete_8();
        let sl = sc.shift_lattice().unwrap();
        assert!((sl.generator().at(0, 0) - 8.0).abs() < 1e-12);
        assert!(sl.contains(&[8.0, 0.0], 1e-9));
    }

    #[test]
    fn build_semi_discrete_pair() {
        let g = AtomSum::plain_gaussian(2);
        let pair = build(&semi_discrete_8(), &g, Some(&example_sequence())).unwrap();
        assert!(pair.certificate.seq_in_l2o);
        assert!(!pair.certificate.seq_hermitian);
        assert!(pair.certificate.phase_distance > 0.0);
        assert_eq!(pair.f1.atoms().len(), 3);
        // f2 carries the conjugated sequence
        assert_eq!(
            pair.sequence.conjugate_seq().get(&[1, 0]).unwrap(),
            c(0.0, -1.0)
        );
        // sampled equality points stay in R^2 x (1/8)Z^2
        let pts = pair.equality_points(20, 1.0);
        assert_eq!(pts.len(), 20);
        let dual = Lattice::scaled_integer(2, 0.125).unwrap();
        for z in &pts {
            assert!(dual.contains(&z[2..], 1e-9));
        }
    }

    #[test]
    fn build_rejects_sequences_on_a_line() {
        let g = AtomSum::plain_gaussian(2);
        let all_real = vec![
            (vec![0, 0], c(1.0, 0.0)),
            (vec![1, 0], c(-2.0, 0.0)),
            (vec![0, 1], c(0.5, 0.0)),
        ];
        assert!(matches!(
            build(&semi_discrete_8(), &g, Some(&all_real)),
            Err(Error::SequenceOnLine)
        ));
    }

    #[test]
    fn pauli_pair_is_an_exact_conjugate() {
        let g = AtomSum::standard_gaussian(1);
        let id: Mat<f64> = linalg::identity(1);
        let sc = Scenario::PauliSeparable {
            a: id.clone(),
            b: id,
        };
        let pair = build(&sc, &g, None).unwrap();
        // atom-field equality of f2 and conj(f1)
        let conj = pair.f1.conjugate();
        assert_eq!(conj.atoms().len(), pair.f2.atoms().len());
        for (x, y) in conj.atoms().iter().zip(pair.f2.atoms()) {
            assert!((x.amp() - y.amp()).norm() < 1e-15);
            assert!(x
                .center()
                .iter()
                .zip(y.center())
                .all(|(a, b)| (a - b).abs() < 1e-15));
            assert!(x
                .freq()
                .iter()
                .zip(y.freq())
                .all(|(a, b)| (a - b).abs() < 1e-15));
            assert!(x.width().sub(y.width()).max_abs() < 1e-15);
        }
    }

    #[test]
    fn pauli_rejects_complex_windows() {
        let g = AtomSum::standard_gaussian(1).scale(c(0.0, 1.0));
        let id: Mat<f64> = linalg::identity(1);
        let sc = Scenario::PauliSeparable {
            a: id.clone(),
            b: id,
        };
        assert!(matches!(build(&sc, &g, None), Err(Error::WindowNotReal(_))));
    }

    #[test]
    fn real_sign_requires_hermitian_sequences() {
        let g = AtomSum::standard_gaussian(1);
        let sc = Scenario::RealSign {
            lattice: Lattice::scaled_integer(1, 1.0).unwrap(),
        };
        // spans two directions (not on a line) but breaks the symmetry
        let bad = vec![(vec![1], c(1.0, 0.0)), (vec![-1], c(0.0, 1.0))];
        assert!(matches!(
            build(&sc, &g, Some(&bad)),
            Err(Error::SequenceNotHermitian)
        ));
        let pair = build(&sc, &g, None).unwrap();
        assert!(pair.certificate.seq_hermitian);
    }

    #[test]
    fn shifted_by_zero_matches_the_base_pair() {
        let g = AtomSum::plain_gaussian(2);
        let base = semi_discrete_8();
        let shifted = Scenario::Shifted {
            base: Box::new(base.clone()),
            p: vec![0.0; 4],
        };
        let p1 = build(&base, &g, Some(&example_sequence())).unwrap();
        let p2 = build(&shifted, &g, Some(&example_sequence())).unwrap();
        for t in [[0.0, 0.0], [0.7, -0.4]] {
            assert!((p1.f1.eval(&t) - p2.f1.eval(&t)).norm() < 1e-14);
            assert!((p1.f2.eval(&t) - p2.f2.eval(&t)).norm() < 1e-14);
        }
        let a = p1.equality_points(10, 1.0);
        let b = p2.equality_points(10, 1.0);
        for (x, y) in a.iter().zip(&b) {
            assert!(x.iter().zip(y).all(|(u, v)| (u - v).abs() < 1e-14));
        }
    }

    #[test]
    fn shifted_points_are_translated_base_points() {
        let g = AtomSum::plain_gaussian(2);
        let p = vec![0.3, -0.2, 0.55, 0.1];
        let shifted = Scenario::Shifted {
            base: Box::new(semi_discrete_8()),
            p: p.clone(),
        };
        let base_pair = build(&semi_discrete_8(), &g, Some(&example_sequence())).unwrap();
        let pair = build(&shifted, &g, Some(&example_sequence())).unwrap();
        let a = base_pair.equality_points(12, 1.0);
        let b = pair.equality_points(12, 1.0);
        for (x, y) in a.iter().zip(&b) {
            for k in 0..4 {
                assert!((x[k] + p[k] - y[k]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn factored_lattice_points_lie_on_the_lattice() {
        let g = AtomSum::plain_gaussian(2);
        let eight: Mat<f64> = linalg::identity::<f64, f64>(2).scale(8.0);
        let sc = Scenario::FactoredLattice {
            word: SympWord::identity(2),
            a: eight.clone(),
            b: eight,
        };
        let pair = build(&sc, &g, Some(&example_sequence())).unwrap();
        let pts = pair.equality_points(30, 20.0);
        assert!(!pts.is_empty());
        let l8 = Lattice::scaled_integer(4, 8.0).unwrap();
        for z in &pts {
            assert!(l8.contains(z, 1e-9));
        }
    }

    #[test]
    fn default_sequences() {
        let sc = semi_discrete_8();
        let s = sc.default_sequence().unwrap();
        assert_eq!(s.len(), 3);
        assert_eq!(s[0].1, c(1.0, 0.0));
        assert_eq!(s[1].1, c(0.0, 1.0));
        assert_eq!(s[2].1, c(1.0, 1.0));

        let sc1 = Scenario::AnyLattice2d {
            l: Mat::from_rows(vec![vec![1.0, 0.5], vec![0.0, 2.0]]),
        };
        let s = sc1.default_sequence().unwrap();
        assert_eq!(s.len(), 3);
        assert_eq!(s[0].0, vec![-1]);
        assert_eq!(s[1].0, vec![0]);
        assert_eq!(s[2].0, vec![1]);
    }

    #[test]
    fn rational_scenario_records_the_requested_lattice() {
        let g = AtomSum::standard_gaussian(1);
        let sc = Scenario::RationalLattice {
            entries: vec![vec![(1, 2), (1, 3)], vec![(0, 1), (1, 5)]],
        };
        let pair = build(&sc, &g, None).unwrap();
        // pair functions are real (real-sign delegate)
        let spec = GridSpec::centered(1, 4.0, 41);
        assert!(imag_ratio_on_grid(&pair.f1, &spec) < 1e-10);
        // equality points live on L Z^2
        let pts = pair.equality_points(25, 3.0);
        let l = Lattice::new(rational_to_mat::<f64>(&[
            vec![(1, 2), (1, 3)],
            vec![(0, 1), (1, 5)],
        ])
        .unwrap())
        .unwrap();
        for z in &pts {
            assert!(l.contains(z, 1e-9));
        }
    }

    #[test]
    fn any_lattice_2d_negative_determinant() {
        let g = AtomSum::standard_gaussian(1);
        let l = Mat::from_rows(vec![vec![1.5, 0.0], vec![0.7, -0.8]]);
        let sc = Scenario::AnyLattice2d { l: l.clone() };
        let pair = build(&sc, &g, None).unwrap();
        let pts = pair.equality_points(10, 4.0);
        let lat = Lattice::new(l).unwrap();
        for z in &pts {
            assert!(lat.contains(z, 1e-7), "point {z:?} escaped the lattice");
        }
    }
}
