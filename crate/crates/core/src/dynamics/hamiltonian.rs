//! Interaction-picture Hamiltonian with truncated sideband sums.
//!
//! In the frame of `H₀ = ν(a†a + ½) + ω_c b†b + ω₀σ_z/2` every coupling is a
//! `σ₊` term times a phase `e^{iωt}`, plus its Hermitian conjugate:
//!
//! | family            | operator                          | ω                  |
//! |-------------------|-----------------------------------|--------------------|
//! | laser carrier     | `Ω Ô₀^L e^{−iφ}`                  | δ_0L               |
//! | laser red, k      | `Ω (iη_L)^k Ô_k^L a^k e^{−iφ}`    | δ_0L − kν          |
//! | laser blue, k     | `Ω (iη_L)^k a†^k Ô_k^L e^{−iφ}`   | δ_0L + kν          |
//! | cavity `b`, k odd | `g i^{k−1}η_c^k b Ô_k^c a^k`      | δ_0c − kν          |
//! | cavity `b`, k odd | `g i^{k−1}η_c^k b a†^k Ô_k^c`     | δ_0c + kν          |
//! | cavity `b†`, k odd| `g i^{k−1}η_c^k b† Ô_k^c a^k`     | δ_0c − kν + 2ω_c   |
//! | cavity `b†`, k odd| `g i^{k−1}η_c^k b† a†^k Ô_k^c`    | δ_0c + kν + 2ω_c   |
//!
//! The last two families are the counter-rotating cavity terms and are
//! only built on request.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use super::SystemParams;
use crate::error::Result;
use crate::fock::ops::SparseOperator;
use crate::fock::{FockCutoffs, Ion};
use crate::ld_matrix::lowering_element;
use crate::scalar::{cis, Real, C};

/// Which terms of the interaction Hamiltonian are kept.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermSelection {
    /// Highest sideband order retained in every family.
    pub k_max: usize,
    /// Build the `σ₊b†` families oscillating at `2ω_c`.
    pub include_counter_rotating: bool,
    /// Keep only terms with zero oscillation frequency (the secular part).
    pub secular_only: bool,
}

impl Default for TermSelection {
    fn default() -> Self {
        Self { k_max: 5, include_counter_rotating: false, secular_only: false }
    }
}

#[derive(Clone, Copy, Debug)]
struct Coupling<T> {
    /// Excited-block index.
    row: usize,
    /// Ground-block index.
    col: usize,
    amp: C<T>,
    freq: usize,
}

/// `H_I(t) = Σ_j (c_j e^{iω_j t} |e_j⟩⟨g_j| + h.c.)`, stored as its
/// `σ₊` couplings so that evaluating it at a new time only costs one phase
/// per distinct frequency.
#[derive(Clone, Debug)]
pub struct InteractionHamiltonian<T> {
    cutoffs: FockCutoffs,
    couplings: Vec<Coupling<T>>,
    freqs: Vec<T>,
}

struct Builder<T> {
    couplings: Vec<Coupling<T>>,
    freqs: Vec<T>,
    secular_only: bool,
    resonance_tol: T,
}

impl<T: Real> Builder<T> {
    fn push(&mut self, row: usize, col: usize, amp: C<T>, freq: T) {
        if amp.norm_sqr() == T::zero() {
            return;
        }
        if self.secular_only && freq.abs() > self.resonance_tol {
            return;
        }
        let idx = match self.freqs.iter().position(|&f| f == freq) {
            Some(i) => i,
            None => {
                self.freqs.push(freq);
                self.freqs.len() - 1
            }
        };
        self.couplings.push(Coupling { row, col, amp, freq: idx });
    }
}

impl<T: Real> InteractionHamiltonian<T> {
    pub fn new(params: &SystemParams<T>, cutoffs: FockCutoffs, terms: TermSelection) -> Result<Self> {
        params.validate()?;
        cutoffs.validate()?;
        let scale = params.nu * T::from_count(terms.k_max.max(1))
            + params.delta_0l.abs()
            + params.delta_0c.abs();
        let mut b = Builder {
            couplings: Vec::new(),
            freqs: Vec::new(),
            secular_only: terms.secular_only,
            resonance_tol: scale * T::lit(1e-12),
        };
        let c = cutoffs;
        let zero = Complex::new(T::zero(), T::zero());

        if params.omega != T::zero() {
            let drive = cis(-params.phi) * params.omega;
            for m in 0..=c.m_max {
                let k_lo = terms.k_max.min(m);
                let k_hi = terms.k_max.min(c.m_max - m);
                for n in 0..=c.n_max {
                    let col = c.flat(Ion::Ground, m, n);
                    b.push(
                        c.flat(Ion::Excited, m, n),
                        col,
                        drive * lowering_element(params.eta_l, 0, m)?,
                        params.delta_0l,
                    );
                    for k in 1..=k_lo {
                        let kf = T::from_count(k);
                        b.push(
                            c.flat(Ion::Excited, m - k, n),
                            col,
                            drive * lowering_element(params.eta_l, k, m)?,
                            params.delta_0l - kf * params.nu,
                        );
                    }
                    for k in 1..=k_hi {
                        let kf = T::from_count(k);
                        // ⟨m+k| a†^k Ô_k |m⟩ equals ⟨m| Ô_k a^k |m+k⟩
                        b.push(
                            c.flat(Ion::Excited, m + k, n),
                            col,
                            drive * lowering_element(params.eta_l, k, m + k)?,
                            params.delta_0l + kf * params.nu,
                        );
                    }
                }
            }
        }

        if params.g != T::zero() {
            // i^{k−1} = i^k · (−i)
            let minus_i = Complex::new(T::zero(), -T::one());
            for m in 0..=c.m_max {
                for k in (1..=terms.k_max).step_by(2) {
                    let kf = T::from_count(k);
                    let down = if m >= k {
                        minus_i * lowering_element(params.eta_c, k, m)?
                    } else {
                        zero
                    };
                    let up = if m + k <= c.m_max {
                        minus_i * lowering_element(params.eta_c, k, m + k)?
                    } else {
                        zero
                    };
                    for n in 0..=c.n_max {
                        let col = c.flat(Ion::Ground, m, n);
                        if n >= 1 {
                            let root = T::from_count(n).sqrt() * params.g;
                            if m >= k {
                                b.push(c.flat(Ion::Excited, m - k, n - 1), col, down * root, params.delta_0c - kf * params.nu);
                            }
                            if m + k <= c.m_max {
                                b.push(c.flat(Ion::Excited, m + k, n - 1), col, up * root, params.delta_0c + kf * params.nu);
                            }
                        }
                        if terms.include_counter_rotating && n < c.n_max {
                            let root = T::from_count(n + 1).sqrt() * params.g;
                            let shift = T::lit(2.0) * params.omega_c;
                            if m >= k {
                                b.push(
                                    c.flat(Ion::Excited, m - k, n + 1),
                                    col,
                                    down * root,
                                    params.delta_0c - kf * params.nu + shift,
                                );
                            }
                            if m + k <= c.m_max {
                                b.push(
                                    c.flat(Ion::Excited, m + k, n + 1),
                                    col,
                                    up * root,
                                    params.delta_0c + kf * params.nu + shift,
                                );
                            }
                        }
                    }
                }
            }
        }

        Ok(Self { cutoffs, couplings: b.couplings, freqs: b.freqs })
    }

    pub fn cutoffs(&self) -> FockCutoffs {
        self.cutoffs
    }

    pub fn coupling_count(&self) -> usize {
        self.couplings.len()
    }

    /// Largest |ω| among retained terms.
    pub fn max_frequency(&self) -> T {
        self.freqs.iter().fold(T::zero(), |a, f| a.max(f.abs()))
    }

    /// Time-independent upper bound on ‖H_I(t)‖ (largest absolute row sum).
    pub fn norm_bound(&self) -> T {
        let mut rows = vec![T::zero(); self.cutoffs.dim()];
        for c in &self.couplings {
            let a = c.amp.norm();
            rows[c.row] += a;
            rows[c.col] += a;
        }
        rows.into_iter().fold(T::zero(), T::max)
    }

    /// `c_j e^{iω_j t}` for every coupling.
    pub(crate) fn values_at(&self, t: T) -> Vec<C<T>> {
        let phases: Vec<C<T>> = self.freqs.iter().map(|&f| cis(f * t)).collect();
        self.couplings.iter().map(|c| c.amp * phases[c.freq]).collect()
    }

    /// Step average `(1/Δt)∫ c_j e^{iω_j t} dt` over `[t_mid − Δt/2, t_mid + Δt/2]`,
    /// i.e. the midpoint value damped by `sinc(ω_j Δt/2)`.
    pub(crate) fn values_averaged(&self, t_mid: T, dt: T) -> Vec<C<T>> {
        let half = dt / T::lit(2.0);
        let phases: Vec<C<T>> = self
            .freqs
            .iter()
            .map(|&f| {
                let x = f * half;
                let sinc = if x.abs() < T::lit(1e-4) { T::one() - x * x / T::lit(6.0) } else { x.sin() / x };
                cis(f * t_mid) * sinc
            })
            .collect();
        self.couplings.iter().map(|c| c.amp * phases[c.freq]).collect()
    }

    /// `y = H x` given one value per coupling.
    pub(crate) fn apply_values(&self, values: &[C<T>], x: &[C<T>], y: &mut [C<T>]) {
        y.iter_mut().for_each(|v| *v = Complex::new(T::zero(), T::zero()));
        for (c, v) in self.couplings.iter().zip(values) {
            y[c.row] += v * x[c.col];
            y[c.col] += v.conj() * x[c.row];
        }
    }

    /// Hermitian sparse matrix `H_I(t)`.
    pub fn at(&self, t: T) -> SparseOperator<T> {
        let values = self.values_at(t);
        let triplets = self
            .couplings
            .iter()
            .zip(&values)
            .flat_map(|(c, &v)| [(c.row, c.col, v), (c.col, c.row, v.conj())]);
        SparseOperator::from_triplets(self.cutoffs.dim(), triplets.collect::<Vec<_>>())
    }
}

/// `H_I(t)/ħ` with the sideband sums truncated at `k_max`.
pub fn build_interaction_hamiltonian<T: Real>(
    params: &SystemParams<T>,
    cutoffs: FockCutoffs,
    k_max: usize,
    include_counter_rotating: bool,
    t: T,
) -> Result<SparseOperator<T>> {
    let terms = TermSelection { k_max, include_counter_rotating, secular_only: false };
    Ok(InteractionHamiltonian::new(params, cutoffs, terms)?.at(t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::ops::{phonon_lowering, photon_lowering, power, sigma_minus, sigma_plus};
    use crate::scalar::i_pow;

    fn cut() -> FockCutoffs {
        FockCutoffs::new(6, 2, 1e-8).unwrap()
    }

    #[test]
    fn zero_couplings_give_zero_matrix() {
        let p = SystemParams { omega: 0.0, g: 0.0, ..SystemParams::default() };
        let h = build_interaction_hamiltonian(&p, cut(), 5, true, 1.3e-6).unwrap();
        assert_eq!(h.nnz(), 0);
    }

    #[test]
    fn hermitian_for_assorted_parameters() {
        for (i, t) in [0.0, 1e-7, 3.3e-6].into_iter().enumerate() {
            let p = SystemParams {
                eta_l: 0.1 + 0.1 * i as f64,
                eta_c: 0.35,
                delta_0l: 1.7e5 * i as f64,
                delta_0c: -3.1e6,
                phi: 0.4 + i as f64,
                omega_c: 2e7,
                ..SystemParams::default()
            };
            let h = build_interaction_hamiltonian(&p, cut(), 4, true, t).unwrap();
            assert!(h.hermiticity_defect() < 1e-12 * p.omega.max(p.g));
        }
    }

    #[test]
    fn lamb_dicke_limit_is_bare_carrier() {
        let phi = 0.7;
        let p = SystemParams { g: 0.0, eta_l: 1e-12, phi, ..SystemParams::default() };
        let c = cut();
        let h = build_interaction_hamiltonian(&p, c, 5, false, 2.1e-6).unwrap();
        let direct = sigma_plus::<f64>(c)
            .scale(cis(-phi) * p.omega)
            .add(&sigma_minus::<f64>(c).scale(cis(phi) * p.omega));
        let (hd, dd) = (h.to_dense(), direct.to_dense());
        let err = hd.iter().zip(&dd).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        assert!(err < 1e-10 * p.omega, "{err}");
    }

    /// Builds `i^{k−1} η^k σ₊ b a†^k Ô_k` from ladder-operator products and
    /// the normal-ordered series, independently of the matrix-element path.
    fn cavity_blue_by_products(eta: f64, k: usize, c: FockCutoffs) -> SparseOperator<f64> {
        let a = phonon_lowering::<f64>(c);
        let ad = a.adjoint();
        let mut o_k = SparseOperator::zero(c.dim());
        let fact = |n: usize| (1..=n).map(|x| x as f64).product::<f64>();
        for p in 0..=c.m_max {
            let coeff = (-eta * eta).powi(p as i32) / (fact(p) * fact(p + k));
            o_k = o_k.add(&power(&ad, p).mul(&power(&a, p)).scale(Complex::new(coeff, 0.0)));
        }
        let o_k = o_k.scale(Complex::new((-eta * eta / 2.0).exp(), 0.0));
        let pref = i_pow::<f64>(k as i64 - 1) * eta.powi(k as i32);
        sigma_plus::<f64>(c)
            .mul(&photon_lowering(c))
            .mul(&power(&ad, k))
            .mul(&o_k)
            .scale(pref)
    }

    #[test]
    fn cavity_terms_match_operator_products() {
        let c = cut();
        for k in [1usize, 3] {
            let p = SystemParams {
                omega: 0.0,
                g: 1.0,
                eta_c: 0.3,
                delta_0c: -(k as f64) * SystemParams::<f64>::default().nu,
                ..SystemParams::default()
            };
            let terms = TermSelection { k_max: k, include_counter_rotating: false, secular_only: true };
            let h = InteractionHamiltonian::new(&p, c, terms).unwrap().at(0.0);
            let expect = cavity_blue_by_products(0.3, k, c);
            let expect = expect.add(&expect.adjoint());
            let (a, b) = (h.to_dense(), expect.to_dense());
            let err = a.iter().zip(&b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
            assert!(err < 1e-13, "k={k}: {err}");
        }
    }

    #[test]
    fn secular_filter_keeps_only_resonant_family() {
        let base = SystemParams::<f64>::default();
        let p = SystemParams { g: 0.0, delta_0l: 2.0 * base.nu, ..base };
        let terms = TermSelection { k_max: 5, include_counter_rotating: false, secular_only: true };
        let h = InteractionHamiltonian::new(&p, cut(), terms).unwrap();
        assert_eq!(h.max_frequency(), 0.0);
        // |g,m,n⟩ ↔ |e,m−2,n⟩ for m = 2..=6, n = 0..=2
        assert_eq!(h.coupling_count(), 5 * 3);
    }

    #[test]
    fn counter_rotating_terms_only_when_requested() {
        let p = SystemParams { omega: 0.0, ..SystemParams::default() };
        let without = InteractionHamiltonian::new(&p, cut(), TermSelection::default()).unwrap();
        let with = InteractionHamiltonian::new(
            &p,
            cut(),
            TermSelection { include_counter_rotating: true, ..TermSelection::default() },
        )
        .unwrap();
        assert!(with.coupling_count() > without.coupling_count());
        assert!(with.max_frequency() > 1e15);
    }
}
