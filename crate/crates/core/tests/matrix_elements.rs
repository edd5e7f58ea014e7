mod common;

use ioncavity::{f_carrier, f_sideband_cavity, f_sideband_laser, o_k_diag};
use proptest::prelude::*;

#[test]
fn diagonal_element_matches_laguerre_on_grid() {
    for eta in [0.02, 0.1, 0.2, 0.5] {
        for k in 0..=6usize {
            for m in 0..=20usize {
                let got = o_k_diag(eta, k, m).unwrap();
                let want = common::laguerre_diag(eta, k as u64, m as u64);
                assert!((got - want).abs() < 1e-12, "η={eta} k={k} m={m}: {got} vs {want}");
            }
        }
    }
}

#[test]
fn laguerre_oracle_sanity() {
    // L_1^α(x) = 1 + α − x, L_2^0(x) = 1 − 2x + x²/2
    assert!((common::laguerre(1, 3, 0.25) - 3.75).abs() < 1e-15);
    assert!((common::laguerre(2, 0, 0.5) - (1.0 - 1.0 + 0.125)).abs() < 1e-15);
}

#[test]
fn k1_m3_spot_value() {
    let v = o_k_diag(0.2, 1, 3).unwrap();
    let l31 = 4.0 - 6.0 * 0.04 + 2.0 * 0.04f64.powi(2) - 0.04f64.powi(3) / 6.0;
    let want = (-0.02f64).exp() * (6.0 / 24.0) * l31;
    assert!((v - want).abs() < 1e-14);
}

#[test]
fn carrier_decreases_and_sideband_grows_with_m() {
    let ms = [1usize, 4, 9, 16];
    let carrier: Vec<f64> = ms.iter().map(|&m| f_carrier(0.2, m).unwrap()).collect();
    let cavity: Vec<f64> = ms.iter().map(|&m| f_sideband_cavity(0.2, 1, m).unwrap().f).collect();
    assert!(carrier.windows(2).all(|w| w[1] < w[0]), "{carrier:?}");
    assert!(cavity.windows(2).all(|w| w[1] > w[0]), "{cavity:?}");
}

#[test]
fn laser_and_cavity_elements_coincide_at_equal_eta() {
    for k in [1usize, 3, 5] {
        for m in k..15 {
            let l = f_sideband_laser(0.17, k, m).unwrap();
            let c = f_sideband_cavity(0.17, k, m).unwrap();
            assert_eq!(l.f, c.f);
            assert_eq!(l.phase_power, k as i64);
            assert_eq!(c.phase_power, k as i64 - 1);
        }
    }
}

#[test]
fn sign_past_the_first_zero_moves_into_the_phase() {
    // ⟨11|Ô_1|11⟩ < 0 at η = 0.57
    let diag = o_k_diag(0.57f64, 1, 11).unwrap();
    assert!(diag < 0.0);
    let r = f_sideband_laser(0.57, 1, 12).unwrap();
    assert!(r.f > 0.0);
    assert_eq!(r.phase_power, 3);
    let want = 0.57 * 12f64.sqrt() * diag;
    assert!((r.value().im - want).abs() < 1e-15 && r.value().re.abs() < 1e-15);
}

proptest! {
    #[test]
    fn carrier_tends_to_one(m in 0usize..60) {
        let f = f_carrier(1e-6f64, m).unwrap();
        prop_assert!((f - 1.0).abs() < 1e-5);
    }

    #[test]
    fn laguerre_identity_off_grid(eta in 0.0f64..0.6, k in 0u64..7, m in 0u64..21) {
        let got = o_k_diag(eta, k as usize, m as usize).unwrap();
        prop_assert!((got - common::laguerre_diag(eta, k, m)).abs() < 1e-12);
    }

    #[test]
    fn k1_closed_form(eta in 0.0f64..0.5, m in 1usize..25) {
        let fact = |n: usize| -> f64 { (1..=n).map(|x| x as f64).product() };
        let s: f64 = (0..m)
            .map(|p| (-1f64).powi(p as i32) * eta.powi(2 * p as i32) * fact(m - 1) / (fact(p + 1) * fact(p) * fact(m - 1 - p)))
            .sum();
        let closed = (-eta * eta / 2.0).exp() * eta * (m as f64).sqrt() * s;
        prop_assert!((closed - f_sideband_cavity(eta, 1, m).unwrap().value().re).abs() < 1e-12);
    }

    #[test]
    fn sideband_magnitude_is_nonnegative(eta in 0.0f64..0.99, k in 1usize..6, extra in 0usize..30) {
        let r = f_sideband_laser(eta, k, k + extra).unwrap();
        prop_assert!(r.f >= 0.0 && r.f.is_finite());
    }
}
