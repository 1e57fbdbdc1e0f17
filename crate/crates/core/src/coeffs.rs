//! Finitely supported complex coefficient sequences on lattice points,
//! the line and Hermitian predicates, and synthesis of
//! `f = sum c_lambda T_lambda^S phi`.

use std::collections::BTreeMap;

use num_complex::Complex;

use crate::atoms::AtomSum;
use crate::error::{Error, Result};
use crate::lattice::Lattice;
use crate::meta::SympWord;
use crate::Scalar;

/// Default relative tolerance for the line and Hermitian predicates.
pub const PREDICATE_TOL: f64 = 1e-10;

/// Finite map from integer index vectors `k` to complex coefficients; the
/// lattice point carrying `c_k` is `gen * k`. Exact zeros are not stored.
#[derive(Clone, Debug)]
pub struct CoeffSeq<T: Scalar> {
    lattice: Lattice<T>,
    entries: BTreeMap<Vec<i64>, Complex<T>>,
}

impl<T: Scalar> CoeffSeq<T> {
    pub fn new(lattice: Lattice<T>, pairs: Vec<(Vec<i64>, Complex<T>)>) -> Result<Self> {
        let dim = lattice.dim();
        let mut entries = BTreeMap::new();
        for (k, c) in pairs {
            if k.len() != dim {
                return Err(Error::DimMismatch(format!(
                    "index {k:?} has wrong length for a dimension-{dim} lattice"
                )));
            }
            if c.norm_sqr() == T::zero() {
                continue;
            }
            entries.insert(k, c);
        }
        Ok(Self { lattice, entries })
    }

    pub fn lattice(&self) -> &Lattice<T> {
        &self.lattice
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, k: &[i64]) -> Option<Complex<T>> {
        self.entries.get(k).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Vec<i64>, &Complex<T>)> {
        self.entries.iter()
    }

    /// Lattice point of index `k`.
    pub fn point(&self, k: &[i64]) -> Vec<T> {
        self.lattice.point(k)
    }

    /// Entrywise complex conjugate on the same support.
    pub fn conjugate_seq(&self) -> Self {
        Self {
            lattice: self.lattice.clone(),
            entries: self
                .entries
                .iter()
                .map(|(k, c)| (k.clone(), c.conj()))
                .collect(),
        }
    }

    pub fn scale(&self, s: Complex<T>) -> Self {
        Self {
            lattice: self.lattice.clone(),
            entries: self
                .entries
                .iter()
                .filter(|(_, c)| (**c * s).norm_sqr() != T::zero())
                .map(|(k, c)| (k.clone(), *c * s))
                .collect(),
        }
    }

    /// True iff all coefficients lie on one real line through the origin of
    /// the complex plane, i.e. there is an `alpha` with every `c` in
    /// `exp(i alpha) R`. Pairwise algebraic form: `Im(c_j conj(c_k)) = 0`
    /// for all pairs, up to `tol` relative to the largest magnitude squared.
    pub fn is_on_line(&self, tol: T) -> bool {
        let max_sq = self
            .entries
            .values()
            .map(|c| c.norm_sqr())
            .fold(T::zero(), T::max);
        if max_sq == T::zero() {
            return true;
        }
        let values: Vec<&Complex<T>> = self.entries.values().collect();
        for (i, a) in values.iter().enumerate() {
            for b in &values[i + 1..] {
                if ((**a) * b.conj()).im.abs() > tol * max_sq {
                    return false;
                }
            }
        }
        true
    }

    /// True iff `c_{-k} = conj(c_k)` for every stored index, up to `tol`
    /// relative to the largest magnitude. Forces a real coefficient at the
    /// origin if one is stored.
    pub fn is_hermitian(&self, tol: T) -> bool {
        let max_mag = self
            .entries
            .values()
            .map(|c| c.norm())
            .fold(T::zero(), T::max);
        if max_mag == T::zero() {
            return true;
        }
        for (k, c) in &self.entries {
            let neg: Vec<i64> = k.iter().map(|&z| -z).collect();
            match self.entries.get(&neg) {
                Some(cn) => {
                    if (*cn - c.conj()).norm() > tol * max_mag {
                        return false;
                    }
                }
                None => return false,
            }
        }
        true
    }

    /// `sum_k c_k T_{gen k}^S phi` as an atom sum. The word is factored out:
    /// the plain-shift combination is formed first and the word applied once,
    /// which is the same operator arithmetic per atom as shifting term by
    /// term.
    pub fn synthesize(&self, word: &SympWord<T>, phi: &AtomSum<T>) -> Result<AtomSum<T>> {
        if self.lattice.dim() != phi.dim() || word.dim() != phi.dim() {
            return Err(Error::DimMismatch(
                "sequence lattice, word and generator dimensions disagree".into(),
            ));
        }
        let psi = word.inverse().apply(phi)?;
        let mut acc = AtomSum::zero(phi.dim());
        for (k, c) in &self.entries {
            let shifted = psi.translate(&self.point(k)).scale(*c);
            acc = acc.add(&shifted)?;
        }
        word.apply(&acc)
    }
}
