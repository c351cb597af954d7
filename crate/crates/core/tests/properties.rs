use std::f64::consts::PI;

use orthokin::classifier::{classify, surface_values, Label, DEFAULT_EPS};
use orthokin::kinematics::{
    forward_kinematics, inverse_kinematics, jacobian_det, numeric_jacobian_det, reduced_fk, DesignParams, JointConfig,
};
use proptest::prelude::*;

fn design() -> impl Strategy<Value = DesignParams> {
    (0.2..3.0f64, 0.2..4.0f64, 0.1..3.0f64).prop_map(|(d3, d4, r2)| DesignParams::new(d3, d4, r2).unwrap())
}

fn joints() -> impl Strategy<Value = JointConfig> {
    (-PI..PI, -PI..PI, -PI..PI).prop_map(|(a, b, c)| JointConfig::new(a, b, c))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn ik_recovers_fk_preimage(p in design(), q in joints()) {
        prop_assume!(jacobian_det(&p, &q).abs() > 1e-3);
        let target = forward_kinematics(&p, &q);
        let sols = inverse_kinematics(&p, &target);
        prop_assert!(sols.contains(&q, 1e-6), "{:?} not in {:?}", q, sols.solutions);
        prop_assert!(sols.len().is_multiple_of(2) && sols.len() <= 4);
        for s in &sols.solutions {
            let x = forward_kinematics(&p, s);
            let err = ((x.x - target.x).powi(2) + (x.y - target.y).powi(2) + (x.z - target.z).powi(2)).sqrt();
            prop_assert!(err < 1e-8, "residual {}", err);
        }
    }

    #[test]
    fn determinant_matches_finite_differences(p in design(), q in joints()) {
        let a = p.d4() * jacobian_det(&p, &q);
        let b = numeric_jacobian_det(&p, &q, 1e-5);
        prop_assert!((a - b).abs() < 1e-5 * (1.0 + a.abs()), "{} vs {}", a, b);
    }

    #[test]
    fn cross_section_mirrors_in_theta2(p in design(), t2 in -PI..PI, t3 in -PI..PI) {
        let a = reduced_fk(&p, t2, t3);
        let b = reduced_fk(&p, -t2, t3);
        prop_assert!((a.rho - b.rho).abs() < 1e-12 && (a.z + b.z).abs() < 1e-12);
    }

    #[test]
    fn classification_is_scale_invariant(p in design(), k in 0.1..10.0f64) {
        let scaled = DesignParams::from_raw(k, k * p.d3(), k * p.d4(), k * p.r2()).unwrap();
        prop_assert_eq!(classify(&p, DEFAULT_EPS).unwrap().label, classify(&scaled, DEFAULT_EPS).unwrap().label);
    }

    #[test]
    fn generic_labels_survive_tiny_perturbations(p in design(), dir in 0..6usize) {
        let l = classify(&p, DEFAULT_EPS).unwrap().label;
        prop_assume!(l.is_generic());
        let h = 0.1 * DEFAULT_EPS * if dir % 2 == 0 { 1.0 } else { -1.0 };
        let (mut d3, mut d4, mut r2) = (p.d3(), p.d4(), p.r2());
        match dir / 2 {
            0 => d3 += h,
            1 => d4 += h,
            _ => r2 += h,
        }
        let q = DesignParams::new(d3, d4, r2).unwrap();
        prop_assert_eq!(classify(&q, DEFAULT_EPS).unwrap().label, l);
    }

    #[test]
    fn surface_stack_is_ordered(d3 in 0.05..5.0f64, r2 in 0.05..5.0f64) {
        let sv = surface_values(d3, r2).unwrap();
        prop_assert!(sv.stack_ordered(), "{:?}", sv);
        prop_assert!((sv.e1 * sv.e3 - d3).abs() < 1e-12 * d3.max(1.0));
        prop_assert_eq!(sv.e2, d3);
    }

    // Along a vertical line the label only moves forward through the type order.
    #[test]
    fn labels_advance_with_d4(d3 in 1.1..3.0f64, r2 in 0.1..3.0f64) {
        let mut last = 0u8;
        for i in 1..200 {
            let p = DesignParams::new(d3, 0.03 * i as f64, r2).unwrap();
            let l = classify(&p, DEFAULT_EPS).unwrap().label;
            if l == Label::NonGeneric {
                continue;
            }
            let rank = Label::WORKSPACE_TYPES.iter().position(|x| *x == l).unwrap() as u8 + 1;
            prop_assert!(rank >= last, "{} after WT{} at {:?}", l, last, p);
            last = rank;
        }
    }
}
