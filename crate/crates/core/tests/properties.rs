mod common;

use common::*;
use lissphere::curve::{eval_curve, CurveParams};
use lissphere::quadrature::integrate_samples;
use lissphere::{Flavor, FrequencyPair, NodeData, Scheme, Variant};
use proptest::prelude::*;

fn frequencies() -> impl Strategy<Value = FrequencyPair> {
    (1usize..12, 1usize..7).prop_map(|(m1, h)| fp(m1, 2 * h))
}

fn variants() -> impl Strategy<Value = Variant> {
    prop_oneof![Just(Variant::ExcludeU), Just(Variant::ExcludeD)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn curve_is_periodic_on_the_unit_sphere(m1 in 1usize..40, m2 in 1usize..40, alpha in -2.0f64..2.0, t in -10.0f64..10.0) {
        let p = CurveParams::new(FrequencyPair::general(m1, m2).unwrap(), alpha);
        let x = eval_curve(&p, t);
        let y = eval_curve(&p, t + std::f64::consts::TAU);
        let n = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt();
        prop_assert!((n - 1.0).abs() < 1e-14);
        for k in 0..3 {
            prop_assert!((x[k] - y[k]).abs() < 1e-11);
        }
    }

    #[test]
    fn round_trip_reproduces_data(m in frequencies(), variant in variants(), seed in any::<u64>()) {
        let scheme = Scheme::new(m, variant).unwrap();
        let mut r = rng(seed);
        let f = NodeData::new(m, random_complex(&mut r, scheme.index_set().len())).unwrap();
        for flavor in [Flavor::Complex, Flavor::Real, Flavor::Averaged] {
            let back = scheme.inverse(&scheme.forward(&f, flavor).unwrap()).unwrap();
            prop_assert!(back.max_abs_diff(&f) < 1e-11, "{} {:?}", flavor, variant);
        }
    }

    #[test]
    fn interpolant_matches_data_at_nodes(m in frequencies(), seed in any::<u64>()) {
        let scheme = Scheme::new(m, Variant::default()).unwrap();
        let mut r = rng(seed);
        let f = random_pole_consistent(&mut r, scheme.index_set());
        let p = scheme.forward(&f, Flavor::Real).unwrap();
        for (k, &i) in scheme.index_set().members().iter().enumerate() {
            let (pt, _) = scheme.index_set().node_point(i).unwrap();
            prop_assert!((p.evaluate(pt.theta, pt.phi) - f.values()[k]).norm() < 1e-11);
        }
    }

    #[test]
    fn quadrature_is_linear(m in frequencies(), seed in any::<u64>(), a in -3.0f64..3.0) {
        let scheme = Scheme::new(m, Variant::default()).unwrap();
        let set = scheme.index_set();
        let mut r = rng(seed);
        let (f, g) = (random_pole_consistent(&mut r, set), random_pole_consistent(&mut r, set));
        let h = NodeData::new(m, f.values().iter().zip(g.values()).map(|(x, y)| x * a + y).collect()).unwrap();
        let lhs = integrate_samples(&scheme, &h).unwrap();
        let rhs = integrate_samples(&scheme, &f).unwrap() * a + integrate_samples(&scheme, &g).unwrap();
        prop_assert!((lhs - rhs).norm() < 1e-12);
    }
}
