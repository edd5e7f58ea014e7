#![allow(dead_code)]

use ioncavity::dynamics::hamiltonian::{InteractionHamiltonian, TermSelection};
use ioncavity::{FockCutoffs, Ion, SystemParams, SystemState};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

/// `C(n, r)` as an exact product.
fn binomial(n: u64, r: u64) -> f64 {
    (1..=r).fold(1.0, |acc, j| acc * (n - r + j) as f64 / j as f64)
}

fn factorial(n: u64) -> f64 {
    (1..=n).map(|x| x as f64).product()
}

/// `L_n^α(x) = Σ_j (−1)^j C(n+α, n−j) x^j / j!`.
pub fn laguerre(n: u64, alpha: u64, x: f64) -> f64 {
    (0..=n)
        .map(|j| {
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            sign * binomial(n + alpha, n - j) * x.powi(j as i32) / factorial(j)
        })
        .sum()
}

/// `e^{−η²/2} m!/(m+k)! L_m^k(η²)`.
pub fn laguerre_diag(eta: f64, k: u64, m: u64) -> f64 {
    let ratio: f64 = (1..=k).map(|j| 1.0 / (m + j) as f64).product();
    (-eta * eta / 2.0).exp() * ratio * laguerre(m, k, eta * eta)
}

/// Diagonal frame generator `κ(s,m,n) = mν + n(δ_0L − δ_0c) + [s=e]δ_0L`.
///
/// Every non-counter-rotating coupling `|e,m',n'⟩⟨g,m,n|` of the
/// interaction Hamiltonian oscillates at exactly `κ(e,m',n') − κ(g,m,n)`, so
/// `H_I(t) = e^{iKt} H_I(0) e^{−iKt}`.
fn frame(params: &SystemParams<f64>, c: FockCutoffs) -> Vec<f64> {
    c.labels()
        .map(|l| {
            let e = if l.ion == Ion::Excited { params.delta_0l } else { 0.0 };
            l.m as f64 * params.nu + l.n as f64 * (params.delta_0l - params.delta_0c) + e
        })
        .collect()
}

/// Exact interaction-picture evolution over `[t0, t0 + duration]`:
/// `ψ(t) = e^{iKt} e^{−i(K + H_I(0))(t − t0)} e^{−iKt0} ψ(t0)`.
pub fn exact_evolution(
    state: &SystemState<f64>,
    params: &SystemParams<f64>,
    terms: TermSelection,
    t0: f64,
    duration: f64,
) -> SystemState<f64> {
    assert!(!terms.include_counter_rotating, "frame oracle needs a time-independent rotating frame");
    let c = state.cutoffs();
    let dim = c.dim();
    let kappa = frame(params, c);
    let h0 = InteractionHamiltonian::new(params, c, terms).unwrap().at(0.0).to_dense();
    let mut g = DMatrix::from_row_slice(dim, dim, &h0);
    for (i, k) in kappa.iter().enumerate() {
        g[(i, i)] += Complex64::new(*k, 0.0);
    }
    let eig = g.symmetric_eigen();
    let psi0 = DVector::from_iterator(
        dim,
        state.amplitudes().iter().zip(&kappa).map(|(a, k)| a * Complex64::from_polar(1.0, -k * t0)),
    );
    let v = &eig.eigenvectors;
    let mut coeff = v.adjoint() * psi0;
    for (j, lam) in eig.eigenvalues.iter().enumerate() {
        coeff[j] *= Complex64::from_polar(1.0, -lam * duration);
    }
    let out = v * coeff;
    let t1 = t0 + duration;
    let amps = out.iter().zip(&kappa).map(|(a, k)| a * Complex64::from_polar(1.0, k * t1)).collect();
    SystemState::from_amplitudes(amps, c).unwrap()
}
