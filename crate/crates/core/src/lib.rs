//! Trapped two-level ion driven by a laser and coupled to a single cavity
//! mode, beyond the Lamb-Dicke regime.
//!
//! * [`fock`]: truncated ion ⊗ phonon ⊗ photon space, states, operators,
//!   fidelity and truncation diagnostics.
//! * [`ld_matrix`]: diagonal elements of the normal-ordered displacement
//!   operator and the carrier/sideband F-factors.
//! * [`dynamics`]: closed-form rotating-wave evolutions, the
//!   interaction-picture Hamiltonian, and a numerical propagator.
//! * [`gates`]: Hadamard, phase and CNOT schedules, characteristic-time
//!   tables, truth-table fidelity reports.
//!
//! Everything numerical is generic over [`Real`] (`f32` or `f64`); the
//! aliases below fix the scalar to `f64`.

pub mod dynamics;
pub mod error;
pub mod fock;
pub mod gates;
pub mod ld_matrix;
pub mod scalar;

pub use dynamics::hamiltonian::{build_interaction_hamiltonian, InteractionHamiltonian, TermSelection};
pub use dynamics::propagate::{propagate, propagate_from, Propagation, StepControl};
pub use dynamics::rwa::{evolve_case1, evolve_case2, evolve_case3, evolve_pulse};
pub use dynamics::{InteractionCase, PulseSpec, SystemParams};
pub use error::{Error, Result};
pub use fock::{fidelity, inner, leak_probability, BasisLabel, FockCutoffs, Ion, SystemState};
pub use gates::{
    apply_schedule, carrier_table, gate_fidelity_report, gate_fidelity_report_with, schedule_cnot,
    schedule_hadamard, schedule_phase, sideband_table, t_carrier, t_sideband, Evolution, FidelityEntry,
    FidelityReport, GateKind, GateSchedule, QubitEncoding, Source, TargetMap, TimingRow,
};
pub use ld_matrix::{f_carrier, f_sideband_cavity, f_sideband_laser, o_k_diag, LambDicke, MatrixElementReport};
pub use scalar::Real;

pub type Complex64 = num_complex::Complex<f64>;
pub type State = SystemState<f64>;
pub type Params = SystemParams<f64>;
pub type Pulse = PulseSpec<f64>;
pub type Schedule = GateSchedule<f64>;
pub type Row = TimingRow<f64>;
pub type Report = FidelityReport<f64>;
