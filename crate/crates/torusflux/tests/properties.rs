//! Property-based invariants for the pieces with algebraic contracts.

use proptest::prelude::*;
use torusflux::diagnostics::{smoothed_modulus, smoothed_sign};
use torusflux::fields::{io, maximal_function, Mollifier, MollifierSpec, PeriodicField, TorusGrid};
use torusflux::pressure::truncation_t;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn truncation_is_1_lipschitz(k in 1.0f64..20.0, a in 0.0f64..100.0, b in 0.0f64..100.0) {
        let ta = truncation_t(k, a).unwrap();
        let tb = truncation_t(k, b).unwrap();
        prop_assert!((ta - tb).abs() <= (a - b).abs() + 1e-12);
    }

    #[test]
    fn truncation_saturates_and_fixes(k in 1.0f64..20.0, x in 0.0f64..200.0) {
        let t = truncation_t(k, x).unwrap();
        if x <= k {
            prop_assert!((t - x).abs() <= 1e-12);
        }
        if x >= 3.0 * k {
            prop_assert!((t - 2.0 * k).abs() <= 1e-12);
        }
        prop_assert!(t <= 2.0 * k + 1e-12);
    }

    #[test]
    fn smoothed_modulus_bounds(w in -10.0f64..10.0, sigma in 1e-3f64..2.0) {
        let m = smoothed_modulus(w, sigma);
        let s = smoothed_sign(w, sigma);
        // 0 <= |w| - |w|^sigma <= sigma/2
        let gap = w.abs() - m;
        prop_assert!(gap >= -1e-14 && gap <= 0.5 * sigma + 1e-14);
        // |w sgn^sigma(w) - |w|^sigma| <= sigma
        prop_assert!((w * s - m).abs() <= sigma + 1e-14);
        prop_assert!(s.abs() <= 1.0 + 1e-14);
    }

    #[test]
    fn mollifier_contracts_and_preserves_mean(
        amps in proptest::collection::vec(-1.0f64..1.0, 3),
        eps in 0.25f64..1.0,
    ) {
        let grid = TorusGrid::standard(1, 64).unwrap();
        let f = PeriodicField::scalar_from_fn(grid, |x| {
            1.0 + amps[0] * x[0].sin() + amps[1] * (2.0 * x[0]).cos() + amps[2] * (5.0 * x[0]).sin()
        });
        let m = Mollifier::build(grid, MollifierSpec::new(eps)).unwrap();
        let out = m.apply(&f).unwrap();
        prop_assert!(out.l2_norm() <= f.l2_norm() + 1e-12);
        prop_assert!((out.mean() - f.mean()).abs() <= 1e-13);
    }

    #[test]
    fn maximal_function_dominates(amps in proptest::collection::vec(0.0f64..1.0, 4)) {
        let grid = TorusGrid::standard(1, 32).unwrap();
        let f = PeriodicField::scalar_from_fn(grid, |x| {
            amps.iter().enumerate().map(|(i, a)| a * ((i + 1) as f64 * x[0]).sin().abs()).sum()
        });
        let m = maximal_function(&f).unwrap();
        for (mv, fv) in m.component(0).iter().zip(f.component(0)) {
            prop_assert!(mv + 1e-12 >= *fv);
        }
    }

    #[test]
    fn field_dump_roundtrip(vals in proptest::collection::vec(-1e6f64..1e6, 16)) {
        let grid = TorusGrid::new(1, 16, 1.0).unwrap();
        let mut f = PeriodicField::scalar(grid);
        f.component_mut(0).copy_from_slice(&vals);
        let mut buf = Vec::new();
        io::write_field(&mut buf, &f).unwrap();
        let back = io::read_field(&mut buf.as_slice()).unwrap();
        prop_assert_eq!(f.values(), back.values());
    }
}
