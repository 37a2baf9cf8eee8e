use entangle::linalg::tensor_product;
use entangle::nonlocality::{bell_chsh_value, chsh_m, ChshSettings};
use entangle::rng::seeded;
use entangle::separability::{battery, check_entropic, CriterionKind, Verdict};
use entangle::Partition;
use entangle::states::{noisy_singlet, random_density, random_pure, random_unitary, State};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    #[test]
    fn chsh_m_is_local_unitary_invariant(seed in any::<u64>()) {
        let mut rng = seeded(seed);
        let rho = random_density(&[2, 2], 2, &mut rng).unwrap();
        let u = tensor_product(&random_unitary(2, &mut rng), &random_unitary(2, &mut rng)).unwrap();
        prop_assert!((chsh_m(&rho).unwrap() - chsh_m(&rho.conjugate(&u)).unwrap()).abs() < 1e-8);
    }

    #[test]
    fn chsh_value_respects_tsirelson(seed in any::<u64>()) {
        let mut rng = seeded(seed);
        let rho = random_pure(&[2, 2], &mut rng).unwrap().density();
        let s = ChshSettings::random(&mut rng);
        prop_assert!(bell_chsh_value(&rho, &s).unwrap().abs() <= 2.0 * 2f64.sqrt() + 1e-9);
    }

    #[test]
    fn violation_implies_entanglement_verdict(seed in any::<u64>(), rank in 1usize..3) {
        let rho = random_density(&[2, 2], rank, &mut seeded(seed)).unwrap();
        if chsh_m(&rho).unwrap() > 1.0 + 1e-9 {
            let r = battery(&State::Mixed(rho), &CriterionKind::defaults(), None).unwrap();
            prop_assert_eq!(r.verdict, Verdict::Entangled);
        }
    }
}

#[test]
fn entangled_states_without_violation_exist() {
    for p in [0.55, 0.6, 0.65, 0.7] {
        let rho = noisy_singlet(p).unwrap();
        assert!(chsh_m(&rho).unwrap() <= 1.0);
        let r = battery(&State::Mixed(rho), &CriterionKind::defaults(), None).unwrap();
        assert_eq!(r.verdict, Verdict::Entangled, "p = {p}");
    }
}

#[test]
fn renyi_two_detects_whenever_chsh_is_violated() {
    let cut = Partition::bipartition(&[0], 2).unwrap();
    let fires = |p: f64| check_entropic(&noisy_singlet(p).unwrap(), &cut, 2.0).unwrap().verdict == Verdict::Entangled;
    for i in 0..=200 {
        let p = i as f64 / 200.0;
        let rho = noisy_singlet(p).unwrap();
        if chsh_m(&rho).unwrap() > 1.0 + 1e-9 {
            assert!(fires(p), "p = {p}");
        }
    }
    // the entropic threshold sits at 1/sqrt(3), below the CHSH one at 1/sqrt(2)
    assert!(fires(0.6) && !fires(0.55));
    assert!(chsh_m(&noisy_singlet(0.6).unwrap()).unwrap() < 1.0);
}
