//! Gate compilation from matrix elements.
//!
//! The target qubit is the internal state of the ion, the control qubit is
//! the vibrational state (`control_zero_m` vs `control_one_m` phonons) and the
//! cavity is an auxiliary mode that starts and ends in vacuum.
//!
//! * Hadamard at phonon number `m`: a carrier quarter turn with φ₁ = π/2,
//!   followed by a full 2π-cycle that flips the sign of `|e,m,0⟩`, through
//!   the k-th laser sideband when `m < k`, through the cavity on the k-th
//!   blue sideband when `m ≥ k`.
//! * Phase gate: one cavity pulse of area π at `control_one_m`, which flips
//!   `|e,m,0⟩` for `m ≥ k` and leaves every other computational state alone.
//! * CNOT: Hadamard, phase, Hadamard. The closing Hadamard is played in
//!   mirror order (sign flip, then the carrier with φ₁ + π) so that the
//!   carrier rotations cancel on the control-zero branch whatever its Rabi
//!   rate.

mod report;

pub use report::{gate_fidelity_report, gate_fidelity_report_with, FidelityEntry, FidelityReport};

use serde::{Deserialize, Serialize};

use crate::dynamics::propagate::{propagate_from, StepControl};
use crate::dynamics::rwa::evolve_pulse;
use crate::dynamics::{InteractionCase, PulseSpec, SystemParams};
use crate::error::{Error, Result};
use crate::fock::{FockCutoffs, Ion, SystemState};
use crate::ld_matrix::{f_carrier, f_sideband_cavity, f_sideband_laser};
use crate::scalar::Real;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GateKind {
    Hadamard,
    Phase,
    Cnot,
}

/// Which field drives a sideband transition.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Source {
    Laser,
    Cavity,
}

/// Internal state used for the target qubit's |0⟩ and |1⟩.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TargetMap {
    pub zero: Ion,
    pub one: Ion,
}

impl Default for TargetMap {
    fn default() -> Self {
        Self { zero: Ion::Ground, one: Ion::Excited }
    }
}

impl TargetMap {
    pub fn ion(&self, bit: u8) -> Ion {
        if bit == 0 {
            self.zero
        } else {
            self.one
        }
    }
}

/// Control qubit in the phonon number, target qubit in the ion.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QubitEncoding {
    pub control_zero_m: usize,
    pub control_one_m: usize,
    pub k: usize,
    pub target: TargetMap,
}

impl Default for QubitEncoding {
    fn default() -> Self {
        Self { control_zero_m: 0, control_one_m: 1, k: 1, target: TargetMap::default() }
    }
}

impl QubitEncoding {
    /// Requires `control_one_m ≥ k > control_zero_m`.
    pub fn new(control_zero_m: usize, control_one_m: usize, k: usize) -> Result<Self> {
        let e = Self { control_zero_m, control_one_m, k, target: TargetMap::default() };
        e.validate()?;
        Ok(e)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.control_one_m >= self.k && self.k > self.control_zero_m) {
            return Err(Error::InvalidArgument(format!(
                "encoding needs control_one_m ≥ k > control_zero_m, got m1={}, k={}, m0={}",
                self.control_one_m, self.k, self.control_zero_m
            )));
        }
        if self.target.zero == self.target.one {
            return Err(Error::InvalidArgument("target |0⟩ and |1⟩ must be different ion states".into()));
        }
        Ok(())
    }

    pub fn control_m(&self, bit: u8) -> usize {
        if bit == 0 {
            self.control_zero_m
        } else {
            self.control_one_m
        }
    }
}

/// Ordered pulse sequence realizing one gate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GateSchedule<T> {
    pub kind: GateKind,
    pub pulses: Vec<PulseSpec<T>>,
    /// Encoding the schedule was compiled for; `None` for a stand-alone
    /// Hadamard compiled at a single phonon number.
    pub encoding: Option<QubitEncoding>,
    /// Phonon number whose Rabi rates fixed the pulse durations.
    pub compiled_m: usize,
    pub k: usize,
    pub cutoffs: FockCutoffs,
    /// Sum of pulse durations, seconds.
    pub total_time: T,
}

impl<T: Real> GateSchedule<T> {
    fn new(
        kind: GateKind,
        pulses: Vec<PulseSpec<T>>,
        encoding: Option<QubitEncoding>,
        compiled_m: usize,
        k: usize,
        cutoffs: FockCutoffs,
    ) -> Self {
        let total_time = pulses.iter().map(|p| p.duration).sum();
        Self { kind, pulses, encoding, compiled_m, k, cutoffs, total_time }
    }

    /// Schedule with no pulses.
    pub fn empty(kind: GateKind, cutoffs: FockCutoffs) -> Self {
        Self::new(kind, Vec::new(), None, 0, 0, cutoffs)
    }
}

/// Carrier quarter-turn time `t_{m,m} = π / (4 Ω F^L_{m,m})`.
pub fn t_carrier<T: Real>(m: usize, params: &SystemParams<T>) -> Result<T> {
    let f = f_carrier(params.eta_l, m)?;
    let rate = params.omega * f;
    if !(rate.abs() > T::zero()) {
        return Err(Error::DegenerateMatrixElement(format!("Ω·F^L_{{{m},{m}}} = {rate}")));
    }
    Ok(T::FRAC_PI_4() / rate.abs())
}

/// Sideband π-time `t_{m−k,m} = π / (rate · |F_{m−k,m}|)`, rate Ω or g.
pub fn t_sideband<T: Real>(m: usize, k: usize, source: Source, params: &SystemParams<T>) -> Result<T> {
    let (rate, f) = match source {
        Source::Laser => (params.omega, f_sideband_laser(params.eta_l, k, m)?.f),
        Source::Cavity => (params.g, f_sideband_cavity(params.eta_c, k, m)?.f),
    };
    let r = rate * f;
    if !(r > T::zero()) {
        return Err(Error::DegenerateMatrixElement(format!("rate·|F_{{{},{m}}}| = {r}", m - k)));
    }
    Ok(T::PI() / r)
}

/// The whole amplitude of a computational state would be pushed past the
/// cutoffs.
fn overflow(cutoffs: FockCutoffs) -> Error {
    Error::TruncationOverflow { leak: 1.0, tol: cutoffs.leak_tol }
}

/// Sign flip of `|e,m,0⟩`, leaving `|g,m,0⟩` untouched.
fn sign_flip_pulse<T: Real>(
    m: usize,
    k: usize,
    params: &SystemParams<T>,
    cutoffs: FockCutoffs,
) -> Result<PulseSpec<T>> {
    if m < k {
        if m + k > cutoffs.m_max {
            return Err(overflow(cutoffs));
        }
        Ok(PulseSpec::laser_sideband(k, T::zero(), t_sideband(m + k, k, Source::Laser, params)?))
    } else {
        if cutoffs.n_max < 1 {
            return Err(overflow(cutoffs));
        }
        Ok(PulseSpec::cavity_sideband(k, t_sideband(m, k, Source::Cavity, params)?))
    }
}

/// Two-pulse Hadamard on the ion for control phonon number `m`.
pub fn schedule_hadamard<T: Real>(
    m: usize,
    k: usize,
    params: &SystemParams<T>,
    cutoffs: FockCutoffs,
) -> Result<GateSchedule<T>> {
    params.validate()?;
    if k == 0 {
        return Err(Error::InvalidArgument("sideband order k must be ≥ 1".into()));
    }
    if m > cutoffs.m_max {
        return Err(overflow(cutoffs));
    }
    let pulses = vec![
        PulseSpec::carrier(T::FRAC_PI_2(), t_carrier(m, params)?),
        sign_flip_pulse(m, k, params, cutoffs)?,
    ];
    Ok(GateSchedule::new(GateKind::Hadamard, pulses, None, m, k, cutoffs))
}

/// Controlled phase gate: one cavity π pulse timed at `control_one_m`.
pub fn schedule_phase<T: Real>(
    encoding: &QubitEncoding,
    params: &SystemParams<T>,
    cutoffs: FockCutoffs,
) -> Result<GateSchedule<T>> {
    params.validate()?;
    encoding.validate()?;
    if encoding.control_one_m > cutoffs.m_max {
        return Err(overflow(cutoffs));
    }
    if cutoffs.n_max < 1 {
        return Err(overflow(cutoffs));
    }
    let t = t_sideband(encoding.control_one_m, encoding.k, Source::Cavity, params)?;
    let pulses = vec![PulseSpec::cavity_sideband(encoding.k, t)];
    Ok(GateSchedule::new(GateKind::Phase, pulses, Some(*encoding), encoding.control_one_m, encoding.k, cutoffs))
}

/// Hadamard · phase · Hadamard, five pulses.
pub fn schedule_cnot<T: Real>(
    encoding: &QubitEncoding,
    params: &SystemParams<T>,
    cutoffs: FockCutoffs,
) -> Result<GateSchedule<T>> {
    let phase = schedule_phase(encoding, params, cutoffs)?;
    let h = schedule_hadamard(encoding.control_one_m, encoding.k, params, cutoffs)?;
    let mut pulses = h.pulses.clone();
    pulses.extend(phase.pulses.iter().copied());
    pulses.extend(h.pulses.iter().rev().map(|p| match p.case {
        InteractionCase::ResonantLaser => PulseSpec { phase: p.phase + T::PI(), ..*p },
        _ => *p,
    }));
    Ok(GateSchedule::new(GateKind::Cnot, pulses, Some(*encoding), encoding.control_one_m, encoding.k, cutoffs))
}

/// How pulses are applied.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Evolution {
    /// Closed-form rotating-wave evolvers.
    Rwa,
    /// Numerical propagation of the interaction-picture Hamiltonian; each
    /// pulse runs with only its own drive switched on.
    Full(StepControl),
}

/// Plays a schedule on a state.
pub fn apply_schedule<T: Real>(
    state: &SystemState<T>,
    schedule: &GateSchedule<T>,
    mode: Evolution,
    params: &SystemParams<T>,
) -> Result<SystemState<T>> {
    let mut psi = state.clone();
    let mut clock = T::zero();
    for pulse in &schedule.pulses {
        psi = match mode {
            Evolution::Rwa => evolve_pulse(&psi, pulse, params)?,
            Evolution::Full(ctrl) => {
                pulse.validate()?;
                propagate_from(&psi, &pulse.full_params(params), clock, pulse.duration, &ctrl)?.state
            }
        };
        clock += pulse.duration;
    }
    Ok(psi)
}

/// One row of a characteristic-time table.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TimingRow<T> {
    pub eta: T,
    pub m: usize,
    /// Matrix element magnitude.
    pub f: T,
    /// Seconds.
    pub t: T,
    /// Reference time divided by this row's time.
    pub r: T,
    /// Pulse area `rate·F·t` this row was timed for.
    pub area: T,
}

/// Carrier quarter-turn times for every (η, m); `R = t(η₀, m₀) / t`.
pub fn carrier_table<T: Real>(etas: &[T], ms: &[usize], params: &SystemParams<T>) -> Result<Vec<TimingRow<T>>> {
    if etas.is_empty() || ms.is_empty() {
        return Err(Error::InvalidArgument("table needs at least one η and one m".into()));
    }
    let mut rows = Vec::with_capacity(etas.len() * ms.len());
    let t_ref = t_carrier(ms[0], &params.with_eta(etas[0]))?;
    for &eta in etas {
        let p = params.with_eta(eta);
        for &m in ms {
            let t = t_carrier(m, &p)?;
            rows.push(TimingRow { eta, m, f: f_carrier(eta, m)?, t, r: t_ref / t, area: T::FRAC_PI_4() });
        }
    }
    Ok(rows)
}

/// Sideband π-times `t_{m−k,m}` for every (η, m); `R = t(η₀, m₀) / t`.
pub fn sideband_table<T: Real>(
    etas: &[T],
    ms: &[usize],
    k: usize,
    source: Source,
    params: &SystemParams<T>,
) -> Result<Vec<TimingRow<T>>> {
    if etas.is_empty() || ms.is_empty() {
        return Err(Error::InvalidArgument("table needs at least one η and one m".into()));
    }
    let f_of = |eta: T, m: usize| -> Result<T> {
        Ok(match source {
            Source::Laser => f_sideband_laser(eta, k, m)?.f,
            Source::Cavity => f_sideband_cavity(eta, k, m)?.f,
        })
    };
    let t_ref = t_sideband(ms[0], k, source, &params.with_eta(etas[0]))?;
    let mut rows = Vec::with_capacity(etas.len() * ms.len());
    for &eta in etas {
        let p = params.with_eta(eta);
        for &m in ms {
            let t = t_sideband(m, k, source, &p)?;
            rows.push(TimingRow { eta, m, f: f_of(eta, m)?, t, r: t_ref / t, area: T::PI() });
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use std::f64::consts::FRAC_1_SQRT_2;

    use num_complex::Complex;

    use super::*;
    use crate::fock::{fidelity, BasisLabel};

    fn p() -> SystemParams<f64> {
        SystemParams::default()
    }

    fn cut() -> FockCutoffs {
        FockCutoffs::new(20, 2, 1e-8).unwrap()
    }

    #[test]
    fn characteristic_times() {
        assert!((t_carrier(1, &p()).unwrap() * 1e6 - 0.95).abs() < 0.01);
        assert!((t_carrier(16, &p()).unwrap() * 1e6 - 2.02).abs() < 0.01);
        assert!((t_carrier(4, &p().with_eta(0.02)).unwrap() * 1e6 - 0.90).abs() < 0.01);
        let ld = p().with_eta(0.02);
        assert!((t_sideband(1, 1, Source::Cavity, &ld).unwrap() * 1e6 - 178.57).abs() < 0.5);
        assert!((t_sideband(16, 1, Source::Cavity, &p()).unwrap() * 1e6 - 6.26).abs() < 0.02);
        assert!((t_sideband(9, 1, Source::Laser, &p()).unwrap() * 1e6 - 7.17).abs() < 0.02);
        assert!(matches!(t_sideband(0, 1, Source::Laser, &p()), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn degenerate_rates_are_errors() {
        let off = SystemParams { omega: 0.0, ..p() };
        assert!(matches!(t_carrier(1, &off), Err(Error::DegenerateMatrixElement(_))));
    }

    #[test]
    fn hadamard_structure_depends_on_m_vs_k() {
        let low = schedule_hadamard(0, 1, &p(), cut()).unwrap();
        assert_eq!(low.pulses[1].case, InteractionCase::SidebandLaser);
        let high = schedule_hadamard(16, 1, &p(), cut()).unwrap();
        assert_eq!(high.pulses[1].case, InteractionCase::BlueSidebandCavity);
        let want = t_carrier(16, &p()).unwrap() + t_sideband(16, 1, Source::Cavity, &p()).unwrap();
        assert!((high.total_time - want).abs() < 1e-18);
        assert!((high.total_time * 1e6 - (2.02 + 6.26)).abs() < 0.03);
        assert!(matches!(
            schedule_hadamard(20, 1, &p(), cut().with_m_max(20)).map(|_| ()),
            Ok(())
        ));
        assert!(matches!(
            schedule_hadamard(0, 3, &p(), cut().with_m_max(2)),
            Err(Error::TruncationOverflow { .. })
        ));
    }

    #[test]
    fn hadamard_outputs() {
        let c = cut();
        let h = schedule_hadamard(0, 1, &p(), c).unwrap();
        let out = apply_schedule(&SystemState::basis(BasisLabel::g(0, 0), c).unwrap(), &h, Evolution::Rwa, &p()).unwrap();
        let want = SystemState::normalized_superposition(
            &[(BasisLabel::g(0, 0), Complex::new(1.0, 0.0)), (BasisLabel::e(0, 0), Complex::new(1.0, 0.0))],
            c,
        )
        .unwrap();
        assert!(1.0 - fidelity(&out, &want).unwrap() < 1e-10);

        let h = schedule_hadamard(1, 1, &p(), c).unwrap();
        let out = apply_schedule(&SystemState::basis(BasisLabel::e(1, 0), c).unwrap(), &h, Evolution::Rwa, &p()).unwrap();
        assert!((out.amplitude(BasisLabel::g(1, 0)).unwrap().re - FRAC_1_SQRT_2).abs() < 1e-10);
        assert!((out.amplitude(BasisLabel::e(1, 0)).unwrap().re + FRAC_1_SQRT_2).abs() < 1e-10);
    }

    #[test]
    fn phase_gate_sign_map() {
        let c = cut();
        let enc = QubitEncoding::default();
        let ph = schedule_phase(&enc, &p(), c).unwrap();
        assert!((ph.total_time * 1e6 - 18.22).abs() < 0.01);
        let run = |l: BasisLabel| apply_schedule(&SystemState::basis(l, c).unwrap(), &ph, Evolution::Rwa, &p()).unwrap();
        assert_eq!(run(BasisLabel::g(5, 0)).amplitude(BasisLabel::g(5, 0)).unwrap(), Complex::new(1.0, 0.0));
        assert_eq!(run(BasisLabel::e(0, 0)).amplitude(BasisLabel::e(0, 0)).unwrap(), Complex::new(1.0, 0.0));
        let flipped = run(BasisLabel::e(1, 0));
        assert!((flipped.amplitude(BasisLabel::e(1, 0)).unwrap() + 1.0).norm() < 1e-12);
        assert!((flipped.photon_distribution()[0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn cnot_has_five_pulses_and_mirrored_closing_hadamard() {
        let s = schedule_cnot(&QubitEncoding::default(), &p(), cut()).unwrap();
        assert_eq!(s.pulses.len(), 5);
        assert_eq!(s.pulses[0].case, InteractionCase::ResonantLaser);
        assert_eq!(s.pulses[4].case, InteractionCase::ResonantLaser);
        assert!((s.pulses[4].phase - s.pulses[0].phase - std::f64::consts::PI).abs() < 1e-15);
        let sum: f64 = s.pulses.iter().map(|p| p.duration).sum();
        assert_eq!(s.total_time, sum);
    }

    #[test]
    fn encoding_invariant() {
        assert!(QubitEncoding::new(0, 1, 1).is_ok());
        assert!(QubitEncoding::new(0, 3, 3).is_ok());
        assert!(QubitEncoding::new(15, 16, 1).is_err());
        assert!(QubitEncoding::new(0, 0, 1).is_err());
    }

    #[test]
    fn empty_schedule_is_identity() {
        let c = cut();
        let s = SystemState::basis(BasisLabel::e(3, 1), c).unwrap();
        let out = apply_schedule(&s, &GateSchedule::empty(GateKind::Cnot, c), Evolution::Rwa, &p()).unwrap();
        assert_eq!(out, s);
    }

    #[test]
    fn timing_rows_hit_their_areas() {
        let rows = carrier_table(&[0.02, 0.2], &[1, 4, 9, 16], &p()).unwrap();
        for r in &rows {
            assert!((p().omega * r.f * r.t - r.area).abs() < 1e-12);
        }
        let rows = sideband_table(&[0.02, 0.2], &[1, 4, 9, 16], 1, Source::Cavity, &p()).unwrap();
        for r in &rows {
            assert!((p().g * r.f * r.t - r.area).abs() < 1e-12);
        }
        assert!((rows.last().unwrap().r - 28.5).abs() < 0.1);
    }
}
