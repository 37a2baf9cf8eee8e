use entangle::rng::seeded;
use entangle::separability::{
    battery, check_entropic, check_ppt, check_reduction, make_witness, schmidt_rank, validate_witness,
    CriterionKind, Verdict, WitnessKind,
};
use entangle::nonlocality::ChshSettings;
use entangle::states::{random_density, random_pure, random_separable, State};
use entangle::Partition;
use proptest::prelude::*;

const SHAPES: [&[usize]; 4] = [&[2, 2], &[2, 3], &[3, 3], &[2, 2, 2]];

fn cut() -> Partition {
    Partition::bipartition(&[0], 2).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, ..ProptestConfig::default() })]

    #[test]
    fn battery_never_flags_separable_states(seed in any::<u64>(), shape in 0usize..4, terms in 1usize..8) {
        let rho = random_separable(SHAPES[shape], terms, &mut seeded(seed)).unwrap();
        let result = battery(&State::Mixed(rho), &CriterionKind::defaults(), None).unwrap();
        prop_assert!(result.verdict != Verdict::Entangled);
        prop_assert_eq!(result.fired().count(), 0);
    }

    #[test]
    fn reduction_never_beats_ppt(seed in any::<u64>(), shape in 0usize..3, rank in 1usize..5) {
        let rho = random_density(SHAPES[shape], rank, &mut seeded(seed)).unwrap();
        let red = check_reduction(&rho, &cut()).unwrap().verdict;
        let ppt = check_ppt(&rho, &cut()).unwrap().verdict;
        if red == Verdict::Entangled {
            prop_assert_eq!(ppt, Verdict::Entangled);
        }
    }

    #[test]
    fn entropic_never_beats_reduction(seed in any::<u64>(), shape in 0usize..3, rank in 1usize..5) {
        let rho = random_density(SHAPES[shape], rank, &mut seeded(seed)).unwrap();
        let ent = check_entropic(&rho, &cut(), f64::INFINITY).unwrap().verdict;
        let red = check_reduction(&rho, &cut()).unwrap().verdict;
        if ent == Verdict::Entangled {
            prop_assert_eq!(red, Verdict::Entangled);
        }
    }

    #[test]
    fn pure_verdict_is_schmidt_rank(seed in any::<u64>(), shape in 0usize..4, product in any::<bool>()) {
        let mut rng = seeded(seed);
        let dims = SHAPES[shape];
        let psi = if product {
            entangle::states::random_product_pure(dims, &mut rng).unwrap()
        } else {
            random_pure(dims, &mut rng).unwrap()
        };
        let n = dims.len();
        let entangled = Partition::all_bipartitions(n).iter().any(|p| schmidt_rank(&psi, p).unwrap() > 1);
        let result = battery(&State::Pure(psi), &CriterionKind::defaults(), None).unwrap();
        prop_assert_eq!(result.verdict == Verdict::Entangled, entangled);
        prop_assert_eq!(result.verdict == Verdict::Separable, !entangled);
    }
}

#[test]
fn constructed_witnesses_are_valid() {
    let mut rng = seeded(17);
    let kinds = [
        WitnessKind::Swap(2),
        WitnessKind::Swap(3),
        WitnessKind::Fidelity(2),
        WitnessKind::Fidelity(3),
        WitnessKind::Fidelity(4),
        WitnessKind::Chsh(ChshSettings::optimal_singlet()),
    ];
    for kind in kinds {
        let w = make_witness(kind.clone()).unwrap();
        let check = validate_witness(&w, 2000, &mut rng).unwrap();
        assert!(check.is_valid(), "{kind:?}: {check:?}");
    }
}
