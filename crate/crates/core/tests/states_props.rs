use entangle::linalg::{eigvalsh, max_hermitian_defect};
use entangle::locc::{twirl_isotropic, twirl_werner};
use entangle::rng::seeded;
use entangle::separability::{check_ppt, Verdict};
use entangle::states::{
    chessboard, dur_cirac, isotropic, random_density, random_separable, smolin, upb_shift, werner, DurCiracWeights,
    StateRecipe,
};
use entangle::{DensityMatrix, Partition};
use proptest::prelude::*;
use rand::Rng;

fn assert_density(rho: &DensityMatrix) {
    let m = rho.matrix();
    assert!(max_hermitian_defect(m) < 1e-10);
    assert!((m.trace().re - 1.0).abs() < 1e-10);
    assert!(eigvalsh(m).unwrap().iter().all(|&e| e > -1e-10));
}

#[test]
fn named_mixed_states_are_valid() {
    assert_density(&smolin());
    assert_density(&upb_shift());
    for a in [0.1, 0.5, 0.9] {
        assert_density(&chessboard(a).unwrap());
    }
    for d in 2..=5 {
        for p in [0.0, 0.3, 1.0] {
            assert_density(&werner(d, p).unwrap());
            assert_density(&isotropic(d, p).unwrap());
        }
    }
}

#[test]
fn recipes_build_valid_states() {
    let recipes = [
        StateRecipe::Bell(2),
        StateRecipe::Ghz { n: 3, d: 3 },
        StateRecipe::W(4),
        StateRecipe::Aharonov,
        StateRecipe::AvnHyper,
        StateRecipe::Smolin,
        StateRecipe::UpbShift,
        StateRecipe::RandomDensity { dims: vec![2, 3], rank: 2, seed: 5 },
        StateRecipe::RandomSeparable { dims: vec![2, 2, 2], terms: 4, seed: 5 },
    ];
    for r in recipes {
        let s = r.build().unwrap();
        assert_density(&s.density());
        if let Some(psi) = s.as_pure() {
            assert!((psi.amplitudes().norm() - 1.0).abs() < 1e-12);
        }
    }
}

fn random_weights<R: Rng>(m: usize, rng: &mut R) -> DurCiracWeights {
    let count = (1 << (m - 1)) - 1;
    let raw: Vec<f64> = (0..count + 2).map(|_| rng.random::<f64>()).collect();
    let (mut plus, mut minus) = (raw[0], raw[1]);
    if plus < minus {
        std::mem::swap(&mut plus, &mut minus);
    }
    let total = plus + minus + 2.0 * raw[2..].iter().sum::<f64>();
    let others = raw[2..].iter().map(|x| x / total).collect();
    DurCiracWeights::new(m, plus / total, minus / total, others).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, ..ProptestConfig::default() })]

    #[test]
    fn werner_and_isotropic_are_twirl_fixed_points(d in 2usize..5, p in 0.0f64..=1.0) {
        let w = werner(d, p).unwrap();
        prop_assert!((twirl_werner(&w).unwrap().matrix() - w.matrix()).norm() < 1e-9);
        let iso = isotropic(d, p).unwrap();
        prop_assert!((twirl_isotropic(&iso).unwrap().matrix() - iso.matrix()).norm() < 1e-9);
    }

    #[test]
    fn dur_cirac_rule_matches_ppt(seed in any::<u64>(), m in 3usize..=4) {
        let w = random_weights(m, &mut seeded(seed));
        let rho = dur_cirac(&w).unwrap();
        for cut in Partition::all_bipartitions(m) {
            let k = w.index_of_cut(cut.left()).unwrap();
            let ppt = check_ppt(&rho, &cut).unwrap().verdict != Verdict::Entangled;
            prop_assert_eq!(ppt, w.separable_across(k), "cut {}", cut);
        }
    }

    #[test]
    fn random_constructors_are_valid(seed in any::<u64>(), rank in 1usize..=6) {
        let mut rng = seeded(seed);
        assert_density(&random_density(&[2, 3], rank, &mut rng).unwrap());
        assert_density(&random_separable(&[3, 3], rank, &mut rng).unwrap());
    }
}
