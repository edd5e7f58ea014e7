//! Elementary operators on the truncated space, stored as sparse triplets.
//!
//! Ladder operators act on the retained levels only: `a†|m_max⟩` and
//! `b†|n_max⟩` are dropped, so `a†` is the exact adjoint of `a` within the
//! truncation.

use std::collections::BTreeMap;

use num_complex::Complex;

use super::{FockCutoffs, Ion, SystemState};
use crate::error::{Error, Result};
use crate::scalar::{Real, C};

/// Square sparse matrix in coordinate form, duplicates already merged.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseOperator<T> {
    dim: usize,
    entries: Vec<(usize, usize, C<T>)>,
}

impl<T: Real> SparseOperator<T> {
    /// Builds an operator, summing duplicate coordinates and dropping exact
    /// zeros.
    pub fn from_triplets(dim: usize, triplets: impl IntoIterator<Item = (usize, usize, C<T>)>) -> Self {
        let mut merged: BTreeMap<(usize, usize), C<T>> = BTreeMap::new();
        for (r, c, v) in triplets {
            assert!(r < dim && c < dim, "triplet ({r}, {c}) outside dimension {dim}");
            *merged.entry((r, c)).or_insert_with(|| Complex::new(T::zero(), T::zero())) += v;
        }
        let entries = merged
            .into_iter()
            .filter(|(_, v)| v.re != T::zero() || v.im != T::zero())
            .map(|((r, c), v)| (r, c, v))
            .collect();
        Self { dim, entries }
    }

    pub fn zero(dim: usize) -> Self {
        Self { dim, entries: Vec::new() }
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_triplets(dim, (0..dim).map(|i| (i, i, Complex::new(T::one(), T::zero()))))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[(usize, usize, C<T>)] {
        &self.entries
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, row: usize, col: usize) -> C<T> {
        self.entries
            .binary_search_by(|&(r, c, _)| (r, c).cmp(&(row, col)))
            .map(|i| self.entries[i].2)
            .unwrap_or_else(|_| Complex::new(T::zero(), T::zero()))
    }

    pub fn adjoint(&self) -> Self {
        Self::from_triplets(self.dim, self.entries.iter().map(|&(r, c, v)| (c, r, v.conj())))
    }

    pub fn scale(&self, s: C<T>) -> Self {
        Self::from_triplets(self.dim, self.entries.iter().map(|&(r, c, v)| (r, c, v * s)))
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        Self::from_triplets(self.dim, self.entries.iter().chain(&other.entries).copied())
    }

    /// Matrix product `self · other`.
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let mut by_row: Vec<Vec<(usize, C<T>)>> = vec![Vec::new(); other.dim];
        for &(r, c, v) in &other.entries {
            by_row[r].push((c, v));
        }
        let triplets = self.entries.iter().flat_map(|&(r, k, a)| {
            by_row[k].iter().map(move |&(c, b)| (r, c, a * b))
        });
        Self::from_triplets(self.dim, triplets.collect::<Vec<_>>())
    }

    /// `y = A x`.
    pub fn apply(&self, x: &[C<T>]) -> Vec<C<T>> {
        assert_eq!(x.len(), self.dim);
        let mut y = vec![Complex::new(T::zero(), T::zero()); self.dim];
        for &(r, c, v) in &self.entries {
            y[r] += v * x[c];
        }
        y
    }

    /// Applies the operator to a state. The result is generally not
    /// normalized, so the raw amplitudes are returned.
    pub fn apply_to(&self, state: &SystemState<T>) -> Result<Vec<C<T>>> {
        if state.cutoffs().dim() != self.dim {
            return Err(Error::DimensionMismatch(format!(
                "operator dimension {} vs state dimension {}",
                self.dim,
                state.cutoffs().dim()
            )));
        }
        Ok(self.apply(state.amplitudes()))
    }

    /// Row-major dense copy.
    pub fn to_dense(&self) -> Vec<C<T>> {
        let mut d = vec![Complex::new(T::zero(), T::zero()); self.dim * self.dim];
        for &(r, c, v) in &self.entries {
            d[r * self.dim + c] += v;
        }
        d
    }

    /// `max |A_ij − conj(A_ji)|`.
    pub fn hermiticity_defect(&self) -> T {
        let adj = self.adjoint();
        let diff = self.add(&adj.scale(Complex::new(-T::one(), T::zero())));
        diff.entries.iter().map(|e| e.2.norm()).fold(T::zero(), T::max)
    }

    /// Largest absolute row sum, an upper bound on the spectral norm of a
    /// Hermitian operator.
    pub fn row_sum_bound(&self) -> T {
        let mut rows = vec![T::zero(); self.dim];
        for &(r, _, v) in &self.entries {
            rows[r] += v.norm();
        }
        rows.into_iter().fold(T::zero(), T::max)
    }
}

fn real<T: Real>(x: T) -> C<T> {
    Complex::new(x, T::zero())
}

/// Phonon annihilation `a ⊗ 𝟙`.
pub fn phonon_lowering<T: Real>(c: FockCutoffs) -> SparseOperator<T> {
    let mut t = Vec::new();
    for ion in [Ion::Ground, Ion::Excited] {
        for m in 1..=c.m_max {
            for n in 0..=c.n_max {
                t.push((c.flat(ion, m - 1, n), c.flat(ion, m, n), real(T::from_count(m).sqrt())));
            }
        }
    }
    SparseOperator::from_triplets(c.dim(), t)
}

/// Photon annihilation `b`.
pub fn photon_lowering<T: Real>(c: FockCutoffs) -> SparseOperator<T> {
    let mut t = Vec::new();
    for ion in [Ion::Ground, Ion::Excited] {
        for m in 0..=c.m_max {
            for n in 1..=c.n_max {
                t.push((c.flat(ion, m, n - 1), c.flat(ion, m, n), real(T::from_count(n).sqrt())));
            }
        }
    }
    SparseOperator::from_triplets(c.dim(), t)
}

/// `σ₊ = |e⟩⟨g|` on the ion.
pub fn sigma_plus<T: Real>(c: FockCutoffs) -> SparseOperator<T> {
    let t = (0..=c.m_max).flat_map(|m| {
        (0..=c.n_max).map(move |n| (c.flat(Ion::Excited, m, n), c.flat(Ion::Ground, m, n), real(T::one())))
    });
    SparseOperator::from_triplets(c.dim(), t.collect::<Vec<_>>())
}

pub fn sigma_minus<T: Real>(c: FockCutoffs) -> SparseOperator<T> {
    sigma_plus(c).adjoint()
}

/// `σ_z = |e⟩⟨e| − |g⟩⟨g|`.
pub fn sigma_z<T: Real>(c: FockCutoffs) -> SparseOperator<T> {
    let half = c.block_dim();
    SparseOperator::from_triplets(
        c.dim(),
        (0..c.dim()).map(|i| (i, i, real(if i < half { -T::one() } else { T::one() }))),
    )
}

pub fn phonon_number<T: Real>(c: FockCutoffs) -> SparseOperator<T> {
    let a = phonon_lowering::<T>(c);
    a.adjoint().mul(&a)
}

pub fn photon_number<T: Real>(c: FockCutoffs) -> SparseOperator<T> {
    let b = photon_lowering::<T>(c);
    b.adjoint().mul(&b)
}

/// `A^p` by repeated multiplication.
pub fn power<T: Real>(op: &SparseOperator<T>, p: usize) -> SparseOperator<T> {
    (0..p).fold(SparseOperator::identity(op.dim()), |acc, _| acc.mul(op))
}
