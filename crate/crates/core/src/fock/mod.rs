//! Truncated ion ⊗ phonon ⊗ photon Hilbert space.
//!
//! Basis vectors are `|s, m, n⟩` with `s ∈ {g, e}` the internal state of the
//! ion, `m ∈ 0..=m_max` the number of vibrational quanta and `n ∈ 0..=n_max`
//! the number of cavity photons. The flat layout is ion-major, then phonon,
//! then photon:
//!
//! ```text
//! index = s·(m_max+1)·(n_max+1) + m·(n_max+1) + n      (g = 0, e = 1)
//! ```
//!
//! so the ground block occupies the first half of the vector and the excited
//! block the second half.

pub mod ops;

use std::fmt;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{Real, C};

/// Internal state of the two-level ion.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Ion {
    #[serde(rename = "g")]
    Ground,
    #[serde(rename = "e")]
    Excited,
}

impl Ion {
    pub fn flipped(self) -> Self {
        match self {
            Ion::Ground => Ion::Excited,
            Ion::Excited => Ion::Ground,
        }
    }

    fn block(self) -> usize {
        match self {
            Ion::Ground => 0,
            Ion::Excited => 1,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Ion::Ground => 'g',
            Ion::Excited => 'e',
        }
    }
}

/// Truncation of the two bosonic modes.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FockCutoffs {
    /// Highest retained phonon number.
    pub m_max: usize,
    /// Highest retained photon number.
    pub n_max: usize,
    /// Probability allowed to be lost through the truncation edges.
    pub leak_tol: f64,
}

impl Default for FockCutoffs {
    fn default() -> Self {
        Self { m_max: 32, n_max: 4, leak_tol: 1e-8 }
    }
}

impl FockCutoffs {
    pub fn new(m_max: usize, n_max: usize, leak_tol: f64) -> Result<Self> {
        let c = Self { m_max, n_max, leak_tol };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        if self.m_max < 1 {
            return Err(Error::InvalidArgument("m_max must be at least 1".into()));
        }
        if !(self.leak_tol > 0.0 && self.leak_tol < 1.0) {
            return Err(Error::InvalidArgument(format!(
                "leak_tol must lie in (0, 1), got {}",
                self.leak_tol
            )));
        }
        Ok(())
    }

    /// Returns a copy with a different phonon cutoff.
    pub fn with_m_max(self, m_max: usize) -> Self {
        Self { m_max, ..self }
    }

    pub fn with_n_max(self, n_max: usize) -> Self {
        Self { n_max, ..self }
    }

    #[inline]
    pub fn phonon_levels(&self) -> usize {
        self.m_max + 1
    }

    #[inline]
    pub fn photon_levels(&self) -> usize {
        self.n_max + 1
    }

    /// Size of one internal-state block.
    #[inline]
    pub fn block_dim(&self) -> usize {
        self.phonon_levels() * self.photon_levels()
    }

    #[inline]
    pub fn dim(&self) -> usize {
        2 * self.block_dim()
    }

    pub fn contains(&self, label: BasisLabel) -> bool {
        label.m <= self.m_max && label.n <= self.n_max
    }

    /// Flat index of a label. Fails when the label lies outside the cutoffs.
    pub fn index_of(&self, label: BasisLabel) -> Result<usize> {
        if !self.contains(label) {
            return Err(Error::OutOfCutoff {
                ion: label.ion.symbol(),
                m: label.m,
                n: label.n,
                m_max: self.m_max,
                n_max: self.n_max,
            });
        }
        Ok(self.flat(label.ion, label.m, label.n))
    }

    /// Unchecked flat index; callers guarantee `m ≤ m_max`, `n ≤ n_max`.
    #[inline]
    pub(crate) fn flat(&self, ion: Ion, m: usize, n: usize) -> usize {
        ion.block() * self.block_dim() + m * self.photon_levels() + n
    }

    pub fn label_of(&self, index: usize) -> Result<BasisLabel> {
        if index >= self.dim() {
            return Err(Error::DimensionMismatch(format!(
                "index {index} outside basis of dimension {}",
                self.dim()
            )));
        }
        let ion = if index < self.block_dim() { Ion::Ground } else { Ion::Excited };
        let rest = index % self.block_dim();
        Ok(BasisLabel { ion, m: rest / self.photon_levels(), n: rest % self.photon_levels() })
    }

    /// All labels in flat-index order.
    pub fn labels(&self) -> impl Iterator<Item = BasisLabel> + '_ {
        [Ion::Ground, Ion::Excited].into_iter().flat_map(move |ion| {
            (0..=self.m_max)
                .flat_map(move |m| (0..=self.n_max).map(move |n| BasisLabel { ion, m, n }))
        })
    }
}

/// `|s, m, n⟩`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BasisLabel {
    pub ion: Ion,
    pub m: usize,
    pub n: usize,
}

impl BasisLabel {
    pub const fn new(ion: Ion, m: usize, n: usize) -> Self {
        Self { ion, m, n }
    }

    pub const fn g(m: usize, n: usize) -> Self {
        Self::new(Ion::Ground, m, n)
    }

    pub const fn e(m: usize, n: usize) -> Self {
        Self::new(Ion::Excited, m, n)
    }
}

impl fmt::Display for BasisLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "|{},{},{}⟩", self.ion.symbol(), self.m, self.n)
    }
}

/// Normalized pure state over the truncated basis.
#[derive(Clone, Debug, PartialEq)]
pub struct SystemState<T> {
    amplitudes: Vec<C<T>>,
    cutoffs: FockCutoffs,
}

impl<T: Real> SystemState<T> {
    /// Unit vector on a single basis label.
    pub fn basis(label: BasisLabel, cutoffs: FockCutoffs) -> Result<Self> {
        let idx = cutoffs.index_of(label)?;
        let mut amplitudes = vec![Complex::new(T::zero(), T::zero()); cutoffs.dim()];
        amplitudes[idx] = Complex::new(T::one(), T::zero());
        Ok(Self { amplitudes, cutoffs })
    }

    /// Wraps an amplitude vector that must already be normalized.
    pub fn from_amplitudes(amplitudes: Vec<C<T>>, cutoffs: FockCutoffs) -> Result<Self> {
        if amplitudes.len() != cutoffs.dim() {
            return Err(Error::DimensionMismatch(format!(
                "{} amplitudes for a basis of dimension {}",
                amplitudes.len(),
                cutoffs.dim()
            )));
        }
        let state = Self { amplitudes, cutoffs };
        let ns = state.norm_sqr().as_f64();
        if !((ns - 1.0).abs() <= T::NORM_TOL) {
            return Err(Error::NotNormalized { norm_sqr: ns });
        }
        Ok(state)
    }

    /// Builds `Σ c_j |label_j⟩ / ‖·‖`. This is the only constructor that
    /// rescales its input.
    pub fn normalized_superposition(
        terms: &[(BasisLabel, C<T>)],
        cutoffs: FockCutoffs,
    ) -> Result<Self> {
        let mut amplitudes = vec![Complex::new(T::zero(), T::zero()); cutoffs.dim()];
        for &(label, c) in terms {
            amplitudes[cutoffs.index_of(label)?] += c;
        }
        let norm = amplitudes.iter().map(|a| a.norm_sqr()).sum::<T>().sqrt();
        if norm == T::zero() {
            return Err(Error::InvalidArgument("superposition has zero norm".into()));
        }
        amplitudes.iter_mut().for_each(|a| *a = *a / norm);
        Ok(Self { amplitudes, cutoffs })
    }

    /// Crate-internal constructor for evolvers that preserve the norm by
    /// construction.
    pub(crate) fn from_raw(amplitudes: Vec<C<T>>, cutoffs: FockCutoffs) -> Self {
        debug_assert_eq!(amplitudes.len(), cutoffs.dim());
        Self { amplitudes, cutoffs }
    }

    pub fn cutoffs(&self) -> FockCutoffs {
        self.cutoffs
    }

    pub fn amplitudes(&self) -> &[C<T>] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<C<T>> {
        self.amplitudes
    }

    pub fn amplitude(&self, label: BasisLabel) -> Result<C<T>> {
        Ok(self.amplitudes[self.cutoffs.index_of(label)?])
    }

    pub fn probability(&self, label: BasisLabel) -> Result<T> {
        self.amplitude(label).map(|a| a.norm_sqr())
    }

    pub fn norm_sqr(&self) -> T {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn norm(&self) -> T {
        self.norm_sqr().sqrt()
    }

    /// Multiplies every amplitude by `e^{iθ}`.
    pub fn with_global_phase(&self, theta: T) -> Self {
        let ph = Complex::new(theta.cos(), theta.sin());
        Self::from_raw(self.amplitudes.iter().map(|a| a * ph).collect(), self.cutoffs)
    }

    /// Explicit renormalization.
    pub fn renormalized(&self) -> Self {
        let n = self.norm();
        Self::from_raw(self.amplitudes.iter().map(|a| a / n).collect(), self.cutoffs)
    }

    /// Probability of finding `n` photons, for each `n` in `0..=n_max`.
    pub fn photon_distribution(&self) -> Vec<T> {
        let mut p = vec![T::zero(); self.cutoffs.photon_levels()];
        for (i, a) in self.amplitudes.iter().enumerate() {
            p[i % self.cutoffs.photon_levels()] += a.norm_sqr();
        }
        p
    }

    /// Probability of finding `m` phonons, for each `m` in `0..=m_max`.
    pub fn phonon_distribution(&self) -> Vec<T> {
        let mut p = vec![T::zero(); self.cutoffs.phonon_levels()];
        for (i, a) in self.amplitudes.iter().enumerate() {
            let m = (i % self.cutoffs.block_dim()) / self.cutoffs.photon_levels();
            p[m] += a.norm_sqr();
        }
        p
    }

    /// Probability of the excited internal state.
    pub fn excited_population(&self) -> T {
        self.amplitudes[self.cutoffs.block_dim()..].iter().map(|a| a.norm_sqr()).sum()
    }

    /// Labels with non-negligible weight, in index order.
    pub fn support(&self, threshold: T) -> Vec<(BasisLabel, C<T>)> {
        self.amplitudes
            .iter()
            .enumerate()
            .filter(|(_, a)| a.norm_sqr() > threshold)
            .map(|(i, a)| (self.cutoffs.label_of(i).expect("index in range"), *a))
            .collect()
    }
}

/// `⟨a|b⟩`.
pub fn inner<T: Real>(a: &SystemState<T>, b: &SystemState<T>) -> Result<C<T>> {
    if a.cutoffs.m_max != b.cutoffs.m_max || a.cutoffs.n_max != b.cutoffs.n_max {
        return Err(Error::DimensionMismatch(format!(
            "cutoffs (m_max={}, n_max={}) vs (m_max={}, n_max={})",
            a.cutoffs.m_max, a.cutoffs.n_max, b.cutoffs.m_max, b.cutoffs.n_max
        )));
    }
    Ok(a.amplitudes.iter().zip(&b.amplitudes).map(|(x, y)| x.conj() * y).sum())
}

/// `|⟨a|b⟩|²`, insensitive to global phase and exactly symmetric.
pub fn fidelity<T: Real>(a: &SystemState<T>, b: &SystemState<T>) -> Result<T> {
    Ok(inner(a, b)?.norm_sqr())
}

/// Weight carried by the truncation edges: the top `margin` phonon levels
/// plus, when the cavity has more than one level, the highest photon level.
pub fn leak_probability<T: Real>(state: &SystemState<T>, margin: usize) -> T {
    let c = state.cutoffs;
    let first_edge_m = c.phonon_levels().saturating_sub(margin);
    let photon_edge = c.n_max >= 1;
    state
        .amplitudes
        .iter()
        .enumerate()
        .filter(|(i, _)| {
            let rest = i % c.block_dim();
            let m = rest / c.photon_levels();
            let n = rest % c.photon_levels();
            m >= first_edge_m || (photon_edge && n == c.n_max)
        })
        .map(|(_, a)| a.norm_sqr())
        .sum()
}
