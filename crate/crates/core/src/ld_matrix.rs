//! Matrix elements of the displacement operator `exp[iη(a† + a)]` beyond the
//! Lamb-Dicke regime.
//!
//! Normal ordering splits the displacement into terms that change the phonon
//! number by `k`; each carries the diagonal operator
//!
//! ```text
//! Ô_k = e^{-η²/2} Σ_p (iη)^{2p} a†^p a^p / (p! (p+k)!)
//! ⟨m|Ô_k|m⟩ = e^{-η²/2} Σ_{p=0}^{m} (-1)^p η^{2p} m! / (p! (p+k)! (m-p)!)
//! ```
//!
//! The F-factors that set Rabi rates are built from these diagonal elements
//! and the ladder factor `∏_{i<k} √(m-i)`. All F values handed to the
//! dynamics are magnitudes; the stripped power of `i` is kept in
//! [`MatrixElementReport::phase_power`].

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{i_pow, CompensatedSum, Real, C};

/// Validated Lamb-Dicke parameter, `0 ≤ η < 1`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct LambDicke<T>(T);

impl<T: Real> LambDicke<T> {
    pub fn new(eta: T) -> Result<Self> {
        if eta >= T::zero() && eta < T::one() {
            Ok(Self(eta))
        } else {
            Err(Error::InvalidArgument(format!("Lamb-Dicke parameter must lie in [0, 1), got {eta}")))
        }
    }

    pub fn get(self) -> T {
        self.0
    }
}

/// One F-factor with the bookkeeping needed to reproduce the complex value.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixElementReport<T> {
    /// Phonon number of the higher-lying level of the transition.
    pub m: usize,
    pub k: usize,
    pub eta: T,
    /// Magnitude of the matrix element.
    pub f: T,
    /// The complex element equals `i^phase_power · f`.
    pub phase_power: i64,
}

impl<T: Real> MatrixElementReport<T> {
    pub fn value(&self) -> C<T> {
        i_pow::<T>(self.phase_power) * self.f
    }
}

/// `⟨m|Ô_k|m⟩` for the given η.
///
/// The series is summed in increasing `p` with each term obtained from the
/// previous by the ratio `-η² (m-p) / ((p+1)(p+k+1))`, so no factorial is
/// ever formed and `m` can exceed 170 without overflow.
pub fn o_k_diag<T: Real>(eta: T, k: usize, m: usize) -> Result<T> {
    let eta = LambDicke::new(eta)?.get();
    let x = eta * eta;
    let mut term = (1..=k).fold(T::one(), |acc, j| acc / T::from_count(j));
    let mut acc = CompensatedSum::new();
    acc.add(term);
    for p in 0..m {
        let num = -x * T::from_count(m - p);
        let den = T::from_count(p + 1) * T::from_count(p + k + 1);
        term = term * num / den;
        if term == T::zero() {
            break;
        }
        acc.add(term);
    }
    Ok((-x / T::lit(2.0)).exp() * acc.value())
}

/// `∏_{i=0}^{k-1} √(m-i) = √(m!/(m-k)!)`; requires `m ≥ k`.
pub fn ladder_factor<T: Real>(m: usize, k: usize) -> T {
    debug_assert!(m >= k);
    (0..k).fold(T::one(), |acc, i| acc * T::from_count(m - i).sqrt())
}

/// Carrier factor `F^L_{m,m} = ⟨m|Ô_0^L|m⟩`; tends to one in the Lamb-Dicke
/// limit and drops below one beyond it.
pub fn f_carrier<T: Real>(eta_l: T, m: usize) -> Result<T> {
    o_k_diag(eta_l, 0, m)
}

/// `η^k ∏√(m-i) ⟨m-k|Ô_k|m-k⟩` with its sign; negative only past the first
/// Laguerre zero of the diagonal element.
pub(crate) fn sideband_real<T: Real>(eta: T, k: usize, m: usize) -> Result<T> {
    if k == 0 {
        return Err(Error::InvalidArgument("sideband order k must be at least 1".into()));
    }
    if m < k {
        return Err(Error::InvalidArgument(format!(
            "no |m-k⟩ level for m={m} < k={k}: the transition does not exist"
        )));
    }
    let diag = o_k_diag(eta, k, m - k)?;
    Ok(eta.powi(k as i32) * ladder_factor::<T>(m, k) * diag)
}

/// A negative real part is written as `i²` so that `f` stays a magnitude.
fn report<T: Real>(m: usize, k: usize, eta: T, real: T, phase_power: i64) -> MatrixElementReport<T> {
    let extra = if real < T::zero() { 2 } else { 0 };
    MatrixElementReport { m, k, eta, f: real.abs(), phase_power: phase_power + extra }
}

/// Laser sideband factor `F^L_{m-k,m}`: couples `|m⟩` and `|m-k⟩` through
/// `(iη_L)^k Ô_k^L a^k`. The magnitude is
/// `η_L^k ∏√(m-i) ⟨m-k|Ô_k^L|m-k⟩` and the stripped phase is `i^k`.
///
/// The conjugate element `F^L_{m,m-k}` has the same magnitude, so the factor
/// for the raising transition `|m⟩ → |m+k⟩` is `f_sideband_laser(η, k, m+k)`.
pub fn f_sideband_laser<T: Real>(eta_l: T, k: usize, m: usize) -> Result<MatrixElementReport<T>> {
    let r = sideband_real(eta_l, k, m)?;
    Ok(report(m, k, eta_l, r, k as i64))
}

/// Cavity sideband factor `F^c_{m-k,m} = ⟨m-k| i^{k-1} η_c^k Ô_k^c a^k |m⟩`.
/// Only odd `k` appear when the trap sits at a node of the standing wave.
pub fn f_sideband_cavity<T: Real>(eta_c: T, k: usize, m: usize) -> Result<MatrixElementReport<T>> {
    if k % 2 == 0 {
        return Err(Error::InvalidArgument(format!(
            "cavity coupling at the field node has odd sidebands only, got k={k}"
        )));
    }
    let r = sideband_real(eta_c, k, m)?;
    Ok(report(m, k, eta_c, r, k as i64 - 1))
}

/// Signed (complex) element `⟨m-k| (iη)^k Ô_k a^k |m⟩` used by the
/// Hamiltonian builder; zero when `m < k`.
pub(crate) fn lowering_element<T: Real>(eta: T, k: usize, m: usize) -> Result<C<T>> {
    if m < k {
        return Ok(C::new(T::zero(), T::zero()));
    }
    let mag = if k == 0 { o_k_diag(eta, 0, m)? } else { sideband_real(eta, k, m)? };
    Ok(i_pow::<T>(k as i64) * mag)
}
