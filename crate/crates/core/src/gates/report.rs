use num_complex::Complex;
use serde::Serialize;

use super::{apply_schedule, Evolution, GateKind, GateSchedule, QubitEncoding};
use crate::dynamics::SystemParams;
use crate::error::Result;
use crate::fock::{fidelity, BasisLabel, SystemState};
use crate::scalar::Real;

/// Outcome for one computational basis input `|control, target⟩`.
#[derive(Clone, Debug, Serialize)]
pub struct FidelityEntry<T> {
    pub control: u8,
    pub target: u8,
    pub input: BasisLabel,
    pub fidelity: T,
    /// Probability left outside the cavity vacuum.
    pub photon_population: T,
    #[serde(skip)]
    pub achieved: SystemState<T>,
    #[serde(skip)]
    pub ideal: SystemState<T>,
}

#[derive(Clone, Debug, Serialize)]
pub struct FidelityReport<T> {
    pub gate: GateKind,
    pub entries: Vec<FidelityEntry<T>>,
    /// `max(1 − F)` over the four inputs.
    pub worst_infidelity: T,
}

/// Ideal image of `|c, s⟩` under the named gate.
fn ideal_image<T: Real>(
    kind: GateKind,
    control: u8,
    target: u8,
    enc: &QubitEncoding,
    state_cutoffs: crate::fock::FockCutoffs,
) -> Result<SystemState<T>> {
    let m = enc.control_m(control);
    let ion = |bit: u8| enc.target.ion(bit);
    let one = Complex::new(T::one(), T::zero());
    match kind {
        GateKind::Hadamard => {
            let sign = if target == 0 { one } else { -one };
            SystemState::normalized_superposition(
                &[(BasisLabel::new(ion(0), m, 0), one), (BasisLabel::new(ion(1), m, 0), sign)],
                state_cutoffs,
            )
        }
        GateKind::Phase => {
            let s = SystemState::basis(BasisLabel::new(ion(target), m, 0), state_cutoffs)?;
            Ok(if control == 1 && target == 1 { s.with_global_phase(T::PI()) } else { s })
        }
        GateKind::Cnot => SystemState::basis(BasisLabel::new(ion(target ^ control), m, 0), state_cutoffs),
    }
}

/// Applies the schedule with the closed-form evolvers to the four
/// computational basis states and compares against the ideal gate.
pub fn gate_fidelity_report<T: Real>(
    schedule: &GateSchedule<T>,
    encoding: &QubitEncoding,
    params: &SystemParams<T>,
) -> Result<FidelityReport<T>> {
    gate_fidelity_report_with(schedule, encoding, params, Evolution::Rwa)
}

/// As [`gate_fidelity_report`] with a chosen evolution mode.
pub fn gate_fidelity_report_with<T: Real>(
    schedule: &GateSchedule<T>,
    encoding: &QubitEncoding,
    params: &SystemParams<T>,
    mode: Evolution,
) -> Result<FidelityReport<T>> {
    encoding.validate()?;
    let cutoffs = schedule.cutoffs;
    let mut entries = Vec::with_capacity(4);
    for control in [0u8, 1] {
        for target in [0u8, 1] {
            let input = BasisLabel::new(encoding.target.ion(target), encoding.control_m(control), 0);
            let start = SystemState::basis(input, cutoffs)?;
            let achieved = apply_schedule(&start, schedule, mode, params)?;
            let ideal = ideal_image(schedule.kind, control, target, encoding, cutoffs)?;
            let photon_population = T::one() - achieved.photon_distribution()[0];
            entries.push(FidelityEntry {
                control,
                target,
                input,
                fidelity: fidelity(&achieved, &ideal)?,
                photon_population,
                achieved,
                ideal,
            });
        }
    }
    let worst_infidelity = entries.iter().map(|e| T::one() - e.fidelity).fold(T::zero(), T::max);
    Ok(FidelityReport { gate: schedule.kind, entries, worst_infidelity })
}
