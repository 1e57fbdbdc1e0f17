//! Pairs of square-integrable functions that produce identical short-time
//! Fourier transform magnitudes on prescribed sampling lattices while not
//! being equal up to a global phase.
//!
//! The crate is organized around an exact closed-form function algebra
//! (finite sums of generalized Gaussian atoms, [`atoms`]), lattice geometry
//! ([`lattice`]), metaplectic operators given as words in generators
//! ([`meta`]), finitely supported coefficient sequences ([`coeffs`]),
//! constructive builders for the counterexample pairs ([`factory`]) and a
//! verification engine for every identity the builders promise ([`verify`]).
//!
//! All numeric code is generic over the scalar type through [`Scalar`];
//! the aliases at the crate root fix the common double-precision
//! instantiation.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign};

pub mod atoms;
pub mod coeffs;
pub mod error;
pub mod factory;
pub mod lattice;
pub mod linalg;
pub mod meta;
pub mod verify;

pub use error::{Error, Result};

/// Floating-point scalar the whole crate is generic over.
///
/// Implemented by `f32` and `f64`; nothing else is required for the
/// blanket impl to kick in.
pub trait Scalar:
    Float
    + FloatConst
    + NumAssign
    + FromPrimitive
    + std::iter::Sum
    + Debug
    + Display
    + Send
    + Sync
    + 'static
{
    /// Converts an `f64` constant, panicking only on types that cannot
    /// represent ordinary literals (none of the supported ones).
    fn cst(x: f64) -> Self {
        Self::from_f64(x).expect("scalar type cannot represent constant")
    }
}

impl<T> Scalar for T where
    T: Float
        + FloatConst
        + NumAssign
        + FromPrimitive
        + std::iter::Sum
        + Debug
        + Display
        + Send
        + Sync
        + 'static
{
}

/// Exact rational scalar used for rational lattice generators.
pub type Rational = num_rational::Ratio<i64>;

pub type Complex64 = num_complex::Complex<f64>;
pub type Mat64 = linalg::Mat<f64>;
pub type CMat64 = linalg::Mat<Complex64>;
pub type Lattice64 = lattice::Lattice<f64>;
pub type LatticeClass64 = lattice::LatticeClass<f64>;
pub type GaussAtom64 = atoms::GaussAtom<f64>;
pub type AtomSum64 = atoms::AtomSum<f64>;
pub type SympWord64 = meta::SympWord<f64>;
pub type MetaGen64 = meta::MetaGen<f64>;
pub type CoeffSeq64 = coeffs::CoeffSeq<f64>;
pub type Scenario64 = factory::Scenario<f64>;
pub type CounterexamplePair64 = factory::CounterexamplePair<f64>;
pub type EqualitySet64 = factory::EqualitySet<f64>;
pub type GridSpec64 = verify::GridSpec<f64>;
pub type SampledWindow64 = verify::SampledWindow<f64>;
pub type EqualityReport64 = verify::EqualityReport<f64>;
