//! Ion–laser–cavity dynamics.
//!
//! Two routes are provided:
//!
//! * [`rwa`]: closed-form two-level rotations for the three resonance
//!   conditions (carrier laser, k-th laser sideband, cavity tuned to the k-th
//!   blue sideband);
//! * [`hamiltonian`] + [`propagate`]: the interaction-picture Hamiltonian
//!   with all sideband families up to a chosen order, integrated numerically
//!   to check the rotating-wave results.

pub mod hamiltonian;
pub mod propagate;
pub mod rwa;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ld_matrix::LambDicke;
use crate::scalar::Real;

/// Physical constants of one ion in the trap/cavity system. Frequencies are
/// angular (rad/s).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SystemParams<T> {
    /// Laser Rabi frequency Ω.
    pub omega: T,
    /// Ion–cavity coupling g.
    pub g: T,
    /// Laser Lamb-Dicke parameter η_L.
    pub eta_l: T,
    /// Cavity Lamb-Dicke parameter η_c.
    pub eta_c: T,
    /// Trap frequency ν.
    pub nu: T,
    /// ω₀ − ω_L.
    pub delta_0l: T,
    /// ω₀ − ω_c.
    pub delta_0c: T,
    /// Laser phase φ.
    pub phi: T,
    /// Cavity frequency, only used by the counter-rotating cavity terms.
    pub omega_c: T,
}

impl<T: Real> SystemParams<T> {
    /// Ω = g = 2π×140 kHz, η_L = η_c = 0.2, ν = 2π×10 MHz,
    /// ω_c = 2π×10¹⁴ rad/s, zero detunings and phase.
    pub fn reference_defaults() -> Self {
        let two_pi = T::lit(std::f64::consts::TAU);
        Self {
            omega: two_pi * T::lit(140e3),
            g: two_pi * T::lit(140e3),
            eta_l: T::lit(0.2),
            eta_c: T::lit(0.2),
            nu: two_pi * T::lit(10e6),
            delta_0l: T::zero(),
            delta_0c: T::zero(),
            phi: T::zero(),
            omega_c: two_pi * T::lit(1e14),
        }
    }

    /// Same system with both Lamb-Dicke parameters set to `eta`.
    pub fn with_eta(self, eta: T) -> Self {
        Self { eta_l: eta, eta_c: eta, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        LambDicke::new(self.eta_l)?;
        LambDicke::new(self.eta_c)?;
        if !(self.omega >= T::zero()) || !(self.g >= T::zero()) {
            return Err(Error::InvalidArgument("couplings Ω and g must be non-negative".into()));
        }
        if !(self.nu > T::zero()) {
            return Err(Error::InvalidArgument("trap frequency ν must be positive".into()));
        }
        for (name, v) in [
            ("delta_0l", self.delta_0l),
            ("delta_0c", self.delta_0c),
            ("phi", self.phi),
            ("omega_c", self.omega_c),
        ] {
            if !v.is_finite() {
                return Err(Error::InvalidArgument(format!("{name} must be finite")));
            }
        }
        Ok(())
    }
}

impl Default for SystemParams<f64> {
    fn default() -> Self {
        Self::reference_defaults()
    }
}

/// Resonance condition selected for a pulse.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InteractionCase {
    /// δ_0L = 0: carrier transition `|g,m⟩ ↔ |e,m⟩`.
    ResonantLaser,
    /// δ_0L = kν: `|g,m⟩ ↔ |e,m−k⟩`.
    SidebandLaser,
    /// δ_0c = −kν, k odd: `|e,m,n⟩ ↔ |g,m−k,n+1⟩`.
    BlueSidebandCavity,
}

/// One pulse of a schedule.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PulseSpec<T> {
    pub case: InteractionCase,
    /// Sideband order, 0 for the carrier.
    pub k: usize,
    /// Laser phase φ₁ or φ₂; ignored by cavity pulses.
    pub phase: T,
    /// Seconds.
    pub duration: T,
}

impl<T: Real> PulseSpec<T> {
    pub fn carrier(phase: T, duration: T) -> Self {
        Self { case: InteractionCase::ResonantLaser, k: 0, phase, duration }
    }

    pub fn laser_sideband(k: usize, phase: T, duration: T) -> Self {
        Self { case: InteractionCase::SidebandLaser, k, phase, duration }
    }

    pub fn cavity_sideband(k: usize, duration: T) -> Self {
        Self { case: InteractionCase::BlueSidebandCavity, k, phase: T::zero(), duration }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.duration >= T::zero()) || !self.duration.is_finite() {
            return Err(Error::InvalidArgument(format!("pulse duration must be ≥ 0, got {}", self.duration)));
        }
        match self.case {
            InteractionCase::ResonantLaser if self.k != 0 => {
                Err(Error::InvalidArgument("carrier pulses have k = 0".into()))
            }
            InteractionCase::SidebandLaser if self.k == 0 => {
                Err(Error::InvalidArgument("laser sideband pulses need k ≥ 1".into()))
            }
            InteractionCase::BlueSidebandCavity if self.k % 2 == 0 => {
                Err(Error::InvalidArgument(format!("cavity sideband order must be odd, got {}", self.k)))
            }
            _ => Ok(()),
        }
    }

    /// Parameters under which the full Hamiltonian realizes this pulse.
    ///
    /// Only the drive belonging to the pulse is switched on. The laser phase
    /// absorbs the `i^k` carried by the k-th laser sideband element, so the
    /// resonant term of the full Hamiltonian equals the closed-form generator
    /// with phase `self.phase`.
    pub fn full_params(&self, base: &SystemParams<T>) -> SystemParams<T> {
        let kf = T::from_count(self.k);
        match self.case {
            InteractionCase::ResonantLaser => SystemParams {
                g: T::zero(),
                delta_0l: T::zero(),
                phi: self.phase,
                ..*base
            },
            InteractionCase::SidebandLaser => SystemParams {
                g: T::zero(),
                delta_0l: kf * base.nu,
                phi: self.phase + kf * T::FRAC_PI_2(),
                ..*base
            },
            InteractionCase::BlueSidebandCavity => SystemParams {
                omega: T::zero(),
                delta_0c: -kf * base.nu,
                ..*base
            },
        }
    }
}
