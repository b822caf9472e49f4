use ncentropy::entropy::{entropy_change, holevo_change, k_functor, segal, Units};
use ncentropy::harness::{generate_instance, InstanceFamily};
use ncentropy::json::{self, MorphismJson, StateJson};
use ncentropy::linalg::{self, Seed};
use ncentropy::morphism::Morphism;
use ncentropy::state::{check_density, State};
use proptest::prelude::*;

fn instance(seed: u64, family: &InstanceFamily) -> ncentropy::harness::Instance {
    generate_instance(family, Seed::new(seed)).expect("instance generation")
}

fn assert_is_state(s: &State) {
    let total: f64 = s.weights().iter().sum();
    assert!((total - 1.0).abs() < 1e-12);
    for rho in s.densities() {
        check_density(rho, 1e-9).unwrap();
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn pullbacks_are_states(seed in any::<u64>()) {
        let inst = instance(seed, &InstanceFamily::default());
        assert_is_state(&inst.morphism.pullback(&inst.omega).unwrap());
    }

    #[test]
    fn segal_is_bounded(seed in any::<u64>()) {
        let omega = instance(seed, &InstanceFamily::default()).omega;
        let s = segal(&omega);
        prop_assert!(s >= -1e-12);
        prop_assert!(s <= (omega.shape().total_dim() as f64).ln() + 1e-12);
    }

    #[test]
    fn pullback_is_affine(seed in any::<u64>(), lambda in 0.0f64..=1.0) {
        let inst = instance(seed, &InstanceFamily::default().with_orthogonal_pair());
        let xi = inst.xi.unwrap();
        let f = &inst.morphism;
        let mixed_then_pulled = f.pullback(&State::convex_combine(lambda, &inst.omega, &xi).unwrap()).unwrap();
        let pulled_then_mixed = State::convex_combine(lambda, &f.pullback(&inst.omega).unwrap(), &f.pullback(&xi).unwrap()).unwrap();
        prop_assert!(mixed_then_pulled.max_abs_diff(&pulled_then_mixed).unwrap() < 1e-12);
    }

    #[test]
    fn entropy_change_is_a_coboundary(seed in any::<u64>()) {
        let inst = instance(seed, &InstanceFamily::default());
        let s_f = entropy_change(&inst.morphism, &inst.omega).unwrap();
        let pulled = inst.morphism.pullback(&inst.omega).unwrap();
        prop_assert!((s_f - (segal(&inst.omega) - segal(&pulled))).abs() < 1e-12);
    }

    #[test]
    fn holevo_change_is_nonnegative(seed in any::<u64>(), lambda in 0.0f64..=1.0) {
        let fam = InstanceFamily::default();
        let inst = instance(seed, &fam);
        let mut rng = Seed::new(seed).with_stream(1).rng();
        let cod = inst.morphism.codomain();
        let xi = State::new(
            cod.clone(),
            linalg::sample_simplex_with(cod.num_blocks(), &mut rng),
            cod.blocks().iter().map(|&m| linalg::sample_density_with(m, &mut rng)).collect(),
        ).unwrap();
        prop_assert!(holevo_change(&inst.morphism, lambda, &inst.omega, &xi).unwrap() >= -1e-9);
    }

    #[test]
    fn commutative_changes_are_nonnegative(seed in any::<u64>()) {
        let inst = instance(seed, &InstanceFamily::classical());
        let s_f = entropy_change(&inst.morphism, &inst.omega).unwrap();
        prop_assert!(s_f >= -1e-12);
        prop_assert!((k_functor(&inst.morphism, &inst.omega).unwrap() - s_f).abs() < 1e-12);
    }

    #[test]
    fn isomorphisms_preserve_entropy(seed in any::<u64>()) {
        let inst = instance(seed, &InstanceFamily::default());
        let shape = inst.omega.shape().clone();
        let mut rng = Seed::new(seed).with_stream(2).rng();
        let u: Vec<_> = shape.blocks().iter().map(|&m| linalg::sample_unitary_with(m, &mut rng)).collect();
        let iso = Morphism::identity(&shape).conjugate(&u).unwrap();
        prop_assert!(iso.is_isomorphism());
        prop_assert!(entropy_change(&iso, &inst.omega).unwrap().abs() < 1e-10);
    }

    #[test]
    fn json_round_trips(seed in any::<u64>()) {
        let inst = instance(seed, &InstanceFamily::default());
        let s = json::state_from_str(&json::to_string_pretty(&StateJson::from(&inst.omega))).unwrap();
        prop_assert_eq!(&s, &inst.omega);
        let g = json::morphism_from_str(&json::to_string_pretty(&MorphismJson::from(&inst.morphism))).unwrap();
        prop_assert!(g.max_apply_diff(&inst.morphism).unwrap() == 0.0);
    }

    #[test]
    fn bits_rescale_by_log_two(x in -10.0f64..10.0) {
        prop_assert!((Units::Bits.convert(x) * std::f64::consts::LN_2 - x).abs() < 1e-12);
        prop_assert_eq!(Units::Nats.convert(x), x);
    }

    #[test]
    fn invalid_weights_are_rejected(w in proptest::collection::vec(0.0f64..1.0, 1..5)) {
        let total: f64 = w.iter().sum();
        prop_assume!((total - 1.0).abs() > 1e-6);
        let n = w.len();
        prop_assert!(State::classical(w).is_err());
        prop_assert!(n > 0);
    }
}
