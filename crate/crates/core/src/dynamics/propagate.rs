//! Numerical propagation of `i d|ψ⟩/dt = H_I(t)|ψ⟩`.
//!
//! The evolution over `[t₀, t₀+T]` is split into `N` equal steps; each step
//! applies `exp(−i H̄ Δt)` where `H̄` is the step average of `H_I`, evaluated
//! about the step midpoint: each term `c e^{iωt}` becomes
//! `c e^{iω t_mid} sinc(ωΔt/2)`. Fast off-resonant terms are then integrated
//! exactly to first order and the step error is set by commutators alone.
//! The exponential acts on the state through a Taylor series summed
//! to machine precision, so every step is unitary up to round-off.
//!
//! `N` is chosen by refinement: the run is repeated with `2N` steps until the
//! two final states differ in fidelity by less than the requested tolerance.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use super::hamiltonian::{InteractionHamiltonian, TermSelection};
use super::SystemParams;
use crate::error::{Error, Result};
use crate::fock::{fidelity, SystemState};
use crate::scalar::{Real, C};

/// Accuracy contract for [`propagate`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct StepControl {
    pub terms: TermSelection,
    /// Accept when halving the step changes the final fidelity by less than
    /// this.
    pub fidelity_tol: f64,
    /// Give up (with [`Error::StepControlFailure`]) beyond this many steps.
    pub max_steps: usize,
    /// Largest phase (rad) any retained term may advance within one step
    /// on the first attempt.
    pub initial_phase_per_step: f64,
}

impl Default for StepControl {
    fn default() -> Self {
        Self {
            terms: TermSelection::default(),
            fidelity_tol: 1e-8,
            max_steps: 1 << 22,
            initial_phase_per_step: 0.5,
        }
    }
}

impl StepControl {
    pub fn with_terms(terms: TermSelection) -> Self {
        Self { terms, ..Self::default() }
    }
}

/// Final state plus refinement diagnostics.
#[derive(Clone, Debug)]
pub struct Propagation<T> {
    pub state: SystemState<T>,
    pub steps: usize,
    /// `1 − F(ψ_N, ψ_{N/2})` at acceptance; zero when a single pass sufficed.
    pub refinement_change: T,
    /// `|‖ψ‖² − 1|` of the returned state.
    pub norm_drift: T,
}

fn expm_apply<T: Real>(
    h: &InteractionHamiltonian<T>,
    values: &[C<T>],
    dt: T,
    psi: &mut [C<T>],
    term: &mut Vec<C<T>>,
    scratch: &mut Vec<C<T>>,
) {
    let eps = T::epsilon() * T::epsilon();
    term.copy_from_slice(psi);
    for j in 1..=64usize {
        h.apply_values(values, term, scratch);
        let coef = Complex::new(T::zero(), -dt / T::from_count(j));
        let mut size = T::zero();
        for (t, s) in term.iter_mut().zip(scratch.iter()) {
            *t = s * coef;
            size += t.norm_sqr();
        }
        for (p, t) in psi.iter_mut().zip(term.iter()) {
            *p += t;
        }
        if size <= eps {
            break;
        }
    }
}

fn run_fixed<T: Real>(
    h: &InteractionHamiltonian<T>,
    psi0: &[C<T>],
    t0: T,
    duration: T,
    steps: usize,
) -> Vec<C<T>> {
    let dt = duration / T::from_count(steps);
    let half = dt / T::lit(2.0);
    let mut psi = psi0.to_vec();
    let mut term = vec![Complex::new(T::zero(), T::zero()); psi.len()];
    let mut scratch = term.clone();
    for s in 0..steps {
        let t_mid = t0 + dt * T::from_count(s) + half;
        let values = h.values_averaged(t_mid, dt);
        expm_apply(h, &values, dt, &mut psi, &mut term, &mut scratch);
    }
    psi
}

/// Propagates from `t = 0`.
pub fn propagate<T: Real>(
    state: &SystemState<T>,
    params: &SystemParams<T>,
    duration: T,
    ctrl: &StepControl,
) -> Result<SystemState<T>> {
    propagate_from(state, params, T::zero(), duration, ctrl).map(|p| p.state)
}

/// Propagates over `[t0, t0 + duration]` of the interaction-picture clock.
pub fn propagate_from<T: Real>(
    state: &SystemState<T>,
    params: &SystemParams<T>,
    t0: T,
    duration: T,
    ctrl: &StepControl,
) -> Result<Propagation<T>> {
    if !(duration >= T::zero()) {
        return Err(Error::InvalidArgument(format!("duration must be ≥ 0, got {duration}")));
    }
    let h = InteractionHamiltonian::new(params, state.cutoffs(), ctrl.terms)?;
    let cutoffs = state.cutoffs();
    if duration == T::zero() || h.coupling_count() == 0 {
        return Ok(Propagation {
            state: state.clone(),
            steps: 0,
            refinement_change: T::zero(),
            norm_drift: (state.norm_sqr() - T::one()).abs(),
        });
    }

    let rate = (h.max_frequency() + h.norm_bound()).as_f64();
    let first = (duration.as_f64() * rate / ctrl.initial_phase_per_step).ceil();
    if !first.is_finite() || first > ctrl.max_steps as f64 {
        return Err(Error::StepControlFailure(format!(
            "resolving frequencies up to {rate:e} rad/s over {:e} s needs more than {} steps",
            duration.as_f64(),
            ctrl.max_steps
        )));
    }
    let mut steps = (first as usize).max(1);
    let psi0 = state.amplitudes();
    let mut coarse = run_fixed(&h, psi0, t0, duration, steps);
    loop {
        if 2 * steps > ctrl.max_steps {
            return Err(Error::StepControlFailure(format!(
                "fidelity change still above {:e} at {} steps",
                ctrl.fidelity_tol, steps
            )));
        }
        steps *= 2;
        let fine = run_fixed(&h, psi0, t0, duration, steps);
        let a = SystemState::from_raw(coarse, cutoffs);
        let b = SystemState::from_raw(fine, cutoffs);
        let change = (T::one() - fidelity(&a, &b)?).abs();
        if change.as_f64() < ctrl.fidelity_tol {
            let drift = (b.norm_sqr() - T::one()).abs();
            let drift_tol = T::NORM_TOL * 10.0;
            if drift.as_f64() > drift_tol {
                return Err(Error::StepControlFailure(format!(
                    "norm drift {:e} exceeds {:e}",
                    drift.as_f64(),
                    drift_tol
                )));
            }
            return Ok(Propagation { state: b, steps, refinement_change: change, norm_drift: drift });
        }
        coarse = b.into_amplitudes();
    }
}
