//! Property-based invariants over random inputs.

use proptest::prelude::*;

use gammascope_core::identity::{alpha, gate, identity_residual, term_pair};
use gammascope_core::special::recip_gamma_product;
use gammascope_core::summation::{nearest_pole, sum_rational_tail, SummationConfig};

fn cfg() -> SummationConfig {
    SummationConfig::default()
}

proptest! {
    // eta - alpha collapses to the elementary factor for any (s, j) away
    // from poles of the term family.
    #[test]
    fn decomposition_identity(s in 1.05f64..8.0, j in 0u64..12) {
        let c = cfg();
        let x = s - j as f64;
        prop_assume!(nearest_pole(x, c.pole_guard).is_none());
        let pair = term_pair(s, j, &c).unwrap();
        let recip = recip_gamma_product(x, &c).unwrap().value;
        let want = recip * (2.0 + s.ln() - j as f64 / s);
        let scale = pair.eta.abs().max(pair.alpha.abs()).max(1.0);
        prop_assert!((pair.eta - pair.alpha - want).abs() <= 1e-9 * scale);
    }

    // alpha(s, 0) has x = s, so psi(s+1) - psi(x+1) cancels identically.
    #[test]
    fn alpha_at_j_zero_vanishes(s in 1.05f64..20.0) {
        let a = alpha(s, 0, &cfg()).unwrap();
        prop_assert!(a.abs() <= 1e-12, "alpha(s,0) = {a}");
    }

    // The gating factor is a strict dichotomy under the snap rule: zero at
    // (snapped) integers, strictly positive otherwise.
    #[test]
    fn gate_dichotomy(s in 1.0f64..50.0) {
        let g = gate(s);
        let snapped = (s - s.round()).abs() <= 1e-12;
        if snapped {
            prop_assert_eq!(g, 0.0);
        } else {
            prop_assert!(g > 0.0, "gate({s}) = {g}");
        }
    }

    // Determinism: the same inputs give bit-identical results on repeat
    // evaluation (no hidden state, no iteration-order dependence).
    #[test]
    fn residual_bit_identical(s in 1.1f64..6.0, j_max in 5u64..30) {
        let c = cfg();
        let a = identity_residual(s, j_max, &c).unwrap();
        let b = identity_residual(s, j_max, &c).unwrap();
        prop_assert_eq!(a.residual.to_bits(), b.residual.to_bits());
        prop_assert_eq!(a.lhs.to_bits(), b.lhs.to_bits());
    }

    #[test]
    fn rational_tail_bit_identical(x in -0.9f64..10.0) {
        let c = cfg();
        prop_assume!(nearest_pole(x, c.pole_guard).is_none());
        let a = sum_rational_tail(x, &c).unwrap();
        let b = sum_rational_tail(x, &c).unwrap();
        prop_assert_eq!(a.value.to_bits(), b.value.to_bits());
        prop_assert_eq!(a.terms_used, b.terms_used);
    }
}
