//! Closed-form rotating-wave evolutions.
//!
//! Each resonance condition couples basis states in disjoint pairs
//! `(|g,…⟩, |e,…⟩)`. Within a pair the evolution is the rotation
//!
//! ```text
//! |g⟩ → cos θ |g⟩ − i e^{−iφ} sin θ |e⟩
//! |e⟩ → cos θ |e⟩ − i e^{+iφ} sin θ |g⟩
//! ```
//!
//! with θ = (coupling)·F·t. F is the real matrix element with its power of
//! `i` removed; it equals |F| until the diagonal element crosses its first
//! zero, far beyond the phonon numbers of interest. Unpaired states are left untouched. A state
//! whose partner would lie beyond the Fock cutoffs is also left untouched,
//! provided the weight it carries stays below the leak tolerance.

use num_complex::Complex;

use super::{InteractionCase, PulseSpec, SystemParams};
use crate::error::{Error, Result};
use crate::fock::{Ion, SystemState};
use crate::ld_matrix::{f_carrier, f_sideband_cavity, sideband_real};
use crate::scalar::{cis, Real, C};

fn rotate_pair<T: Real>(amps: &mut [C<T>], ig: usize, ie: usize, theta: T, phi: T) {
    let (s, c) = theta.sin_cos();
    let minus_i = Complex::new(T::zero(), -T::one());
    let to_e = minus_i * cis(-phi) * s;
    let to_g = minus_i * cis(phi) * s;
    let a = amps[ig];
    let b = amps[ie];
    amps[ig] = a * c + to_g * b;
    amps[ie] = to_e * a + b * c;
}

fn check_overflow<T: Real>(state: &SystemState<T>, stranded: &[usize]) -> Result<()> {
    let leak: T = stranded.iter().map(|&i| state.amplitudes()[i].norm_sqr()).sum();
    let tol = state.cutoffs().leak_tol;
    if leak.as_f64() > tol {
        return Err(Error::TruncationOverflow { leak: leak.as_f64(), tol });
    }
    Ok(())
}

/// Resonant laser (δ_0L = 0): `|g,m,n⟩ ↔ |e,m,n⟩` at angle `Ω F^L_{m,m} t`.
pub fn evolve_case1<T: Real>(
    state: &SystemState<T>,
    phase: T,
    duration: T,
    params: &SystemParams<T>,
) -> Result<SystemState<T>> {
    let c = state.cutoffs();
    let mut amps = state.amplitudes().to_vec();
    for m in 0..=c.m_max {
        let theta = params.omega * f_carrier(params.eta_l, m)? * duration;
        for n in 0..=c.n_max {
            rotate_pair(&mut amps, c.flat(Ion::Ground, m, n), c.flat(Ion::Excited, m, n), theta, phase);
        }
    }
    Ok(SystemState::from_raw(amps, c))
}

/// Laser on the k-th sideband (δ_0L = kν): `|g,m,n⟩ ↔ |e,m−k,n⟩` at angle
/// `Ω F^L_{m−k,m} t` with `i^k` absorbed into the phase. Ground states with `m < k` do not move.
pub fn evolve_case2<T: Real>(
    state: &SystemState<T>,
    k: usize,
    phase: T,
    duration: T,
    params: &SystemParams<T>,
) -> Result<SystemState<T>> {
    if k == 0 {
        return Err(Error::InvalidArgument("laser sideband order must be ≥ 1".into()));
    }
    let c = state.cutoffs();
    if duration == T::zero() {
        return Ok(state.clone());
    }
    let mut stranded = Vec::new();
    for m in 0..=c.m_max {
        if m + k > c.m_max {
            stranded.extend((0..=c.n_max).map(|n| c.flat(Ion::Excited, m, n)));
        }
    }
    check_overflow(state, &stranded)?;

    let mut amps = state.amplitudes().to_vec();
    for m_low in 0..=c.m_max.saturating_sub(k) {
        let m_high = m_low + k;
        if m_high > c.m_max {
            break;
        }
        let theta = params.omega * sideband_real(params.eta_l, k, m_high)? * duration;
        for n in 0..=c.n_max {
            rotate_pair(
                &mut amps,
                c.flat(Ion::Ground, m_high, n),
                c.flat(Ion::Excited, m_low, n),
                theta,
                phase,
            );
        }
    }
    Ok(SystemState::from_raw(amps, c))
}

/// Cavity tuned to the k-th blue sideband (δ_0c = −kν, k odd):
/// `|g,m,n⟩ ↔ |e,m+k,n−1⟩` at angle `g √n F^c_{m,m+k} t`, where `F^c` keeps
/// the real sign of `i^{k−1}`. Excited states with `m < k` and ground states
/// with `n = 0` do not move.
pub fn evolve_case3<T: Real>(
    state: &SystemState<T>,
    k: usize,
    duration: T,
    params: &SystemParams<T>,
) -> Result<SystemState<T>> {
    if k % 2 == 0 {
        return Err(Error::InvalidArgument(format!("cavity sideband order must be odd, got {k}")));
    }
    let c = state.cutoffs();
    if duration == T::zero() {
        return Ok(state.clone());
    }
    let mut stranded = Vec::new();
    for m in 0..=c.m_max {
        if m + k > c.m_max {
            stranded.extend((1..=c.n_max).map(|n| c.flat(Ion::Ground, m, n)));
        }
        if m >= k {
            stranded.push(c.flat(Ion::Excited, m, c.n_max));
        }
    }
    check_overflow(state, &stranded)?;

    let mut amps = state.amplitudes().to_vec();
    for m_low in 0..=c.m_max {
        let m_high = m_low + k;
        if m_high > c.m_max {
            break;
        }
        // i^{k-1} is real for odd k and stays in the rotation angle
        let f = f_sideband_cavity(params.eta_c, k, m_high)?.value().re;
        for n in 1..=c.n_max {
            let theta = params.g * T::from_count(n).sqrt() * f * duration;
            rotate_pair(
                &mut amps,
                c.flat(Ion::Ground, m_low, n),
                c.flat(Ion::Excited, m_high, n - 1),
                theta,
                T::zero(),
            );
        }
    }
    Ok(SystemState::from_raw(amps, c))
}

/// Applies one pulse with the matching closed-form evolver.
pub fn evolve_pulse<T: Real>(
    state: &SystemState<T>,
    pulse: &PulseSpec<T>,
    params: &SystemParams<T>,
) -> Result<SystemState<T>> {
    pulse.validate()?;
    match pulse.case {
        InteractionCase::ResonantLaser => evolve_case1(state, pulse.phase, pulse.duration, params),
        InteractionCase::SidebandLaser => evolve_case2(state, pulse.k, pulse.phase, pulse.duration, params),
        InteractionCase::BlueSidebandCavity => evolve_case3(state, pulse.k, pulse.duration, params),
    }
}

#[cfg(test)]
mod tests {
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4, PI};

    use super::*;
    use crate::fock::{fidelity, BasisLabel, FockCutoffs};
    use crate::ld_matrix::f_sideband_laser;

    fn cut() -> FockCutoffs {
        FockCutoffs::new(8, 2, 1e-8).unwrap()
    }

    fn basis(l: BasisLabel) -> SystemState<f64> {
        SystemState::basis(l, cut()).unwrap()
    }

    fn sup(a: (BasisLabel, f64), b: (BasisLabel, f64)) -> SystemState<f64> {
        SystemState::normalized_superposition(
            &[(a.0, Complex::new(a.1, 0.0)), (b.0, Complex::new(b.1, 0.0))],
            cut(),
        )
        .unwrap()
    }

    #[test]
    fn zero_duration_is_identity() {
        let p = SystemParams::default();
        let s = sup((BasisLabel::g(2, 0), 1.0), (BasisLabel::e(3, 1), 0.5));
        assert_eq!(evolve_case1(&s, 0.4, 0.0, &p).unwrap(), s);
        assert_eq!(evolve_case2(&s, 1, 0.4, 0.0, &p).unwrap(), s);
        assert_eq!(evolve_case3(&s, 1, 0.0, &p).unwrap(), s);
    }

    #[test]
    fn carrier_quarter_turn_is_hadamard_first_step() {
        let p = SystemParams::default();
        for m in [0usize, 1, 5] {
            let t = FRAC_PI_4 / (p.omega * f_carrier(p.eta_l, m).unwrap());
            let out = evolve_case1(&basis(BasisLabel::g(m, 0)), FRAC_PI_2, t, &p).unwrap();
            let want = sup((BasisLabel::g(m, 0), 1.0), (BasisLabel::e(m, 0), -1.0));
            assert!((fidelity(&out, &want).unwrap() - 1.0).abs() < 1e-12);
            assert!((out.amplitude(BasisLabel::e(m, 0)).unwrap().re + FRAC_1_SQRT_2).abs() < 1e-12);

            let out = evolve_case1(&basis(BasisLabel::e(m, 0)), FRAC_PI_2, t, &p).unwrap();
            assert!((out.amplitude(BasisLabel::g(m, 0)).unwrap().re - FRAC_1_SQRT_2).abs() < 1e-12);
            assert!((out.amplitude(BasisLabel::e(m, 0)).unwrap().re - FRAC_1_SQRT_2).abs() < 1e-12);
        }
    }

    #[test]
    fn table_one_pulse_gives_equal_weights() {
        let p = SystemParams::default();
        let out = evolve_case1(&basis(BasisLabel::g(1, 0)), FRAC_PI_2, 0.95e-6, &p).unwrap();
        let pe = out.probability(BasisLabel::e(1, 0)).unwrap();
        assert!((pe - 0.5).abs() < 0.005, "{pe}");
    }

    #[test]
    fn sideband_laser_examples() {
        let p = SystemParams::default();
        let g0 = basis(BasisLabel::g(0, 0));
        assert_eq!(evolve_case2(&g0, 1, 0.7, 3e-5, &p).unwrap(), g0);

        let f = f_sideband_laser(p.eta_l, 1, 1).unwrap().f;
        let out = evolve_case2(&basis(BasisLabel::e(0, 0)), 1, 0.3, PI / (p.omega * f), &p).unwrap();
        assert!((out.amplitude(BasisLabel::e(0, 0)).unwrap().re + 1.0).abs() < 1e-12);

        // half transfer |g,2⟩ → |e,1⟩ with the printed phase −i e^{−iφ}
        let f = f_sideband_laser(p.eta_l, 1, 2).unwrap().f;
        let phi = 0.3;
        let out =
            evolve_case2(&basis(BasisLabel::g(2, 1)), 1, phi, FRAC_PI_2 / (p.omega * f), &p).unwrap();
        let amp = out.amplitude(BasisLabel::e(1, 1)).unwrap();
        let expect = Complex::new(0.0, -1.0) * Complex::new(phi.cos(), -phi.sin());
        assert!((amp - expect).norm() < 1e-12);
    }

    #[test]
    fn cavity_examples() {
        let p = SystemParams::default();
        let g = basis(BasisLabel::g(4, 0));
        assert_eq!(evolve_case3(&g, 1, 1e-4, &p).unwrap(), g);
        let e0 = basis(BasisLabel::e(0, 0));
        assert_eq!(evolve_case3(&e0, 1, 1e-4, &p).unwrap(), e0);

        for (k, m) in [(1usize, 1usize), (1, 4), (3, 5)] {
            let f = f_sideband_cavity(p.eta_c, k, m).unwrap().f;
            let out = evolve_case3(&basis(BasisLabel::e(m, 0)), k, PI / (p.g * f), &p).unwrap();
            assert!((out.amplitude(BasisLabel::e(m, 0)).unwrap().re + 1.0).abs() < 1e-12);
            assert!((out.photon_distribution()[0] - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn truncation_overflow_is_reported() {
        let p = SystemParams::default();
        let c = cut();
        let top = SystemState::basis(BasisLabel::e(c.m_max, 0), c).unwrap();
        assert!(matches!(
            evolve_case2(&top, 1, 0.0, 1e-6, &p),
            Err(Error::TruncationOverflow { .. })
        ));
        let full_cavity = SystemState::basis(BasisLabel::e(3, c.n_max), c).unwrap();
        assert!(matches!(
            evolve_case3(&full_cavity, 1, 1e-6, &p),
            Err(Error::TruncationOverflow { .. })
        ));
    }

    #[test]
    fn rejects_bad_orders() {
        let p = SystemParams::default();
        let s = basis(BasisLabel::g(0, 0));
        assert!(evolve_case2(&s, 0, 0.0, 1.0, &p).is_err());
        assert!(evolve_case3(&s, 2, 1.0, &p).is_err());
    }
}
