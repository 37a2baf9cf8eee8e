use entangle::linalg::{
    c, eigvalsh, max_hermitian_defect, partial_trace, partial_transpose, realign, renyi_entropy, schmidt,
    tensor_product, trace_norm, CMatrix,
};
use entangle::rng::seeded;
use entangle::states::{random_density, random_pure, random_unitary};
use entangle::{DensityMatrix, Partition};
use proptest::prelude::*;

fn config() -> ProptestConfig {
    ProptestConfig { cases: 64, ..ProptestConfig::default() }
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn nested_partial_traces_agree(seed in any::<u64>()) {
        let rho = random_density(&[2, 2, 2], 3, &mut seeded(seed)).unwrap();
        let direct = partial_trace(&rho, &[0]).unwrap();
        let staged = partial_trace(&partial_trace(&rho, &[0, 2]).unwrap(), &[0]).unwrap();
        prop_assert!((direct.matrix() - staged.matrix()).norm() < 1e-12);
        let direct = partial_trace(&rho, &[2]).unwrap();
        let staged = partial_trace(&partial_trace(&rho, &[1, 2]).unwrap(), &[1]).unwrap();
        prop_assert!((direct.matrix() - staged.matrix()).norm() < 1e-12);
    }

    #[test]
    fn partial_transpose_keeps_trace_and_hermiticity(seed in any::<u64>(), sub in 0usize..2) {
        let rho = random_density(&[2, 3], 6, &mut seeded(seed)).unwrap();
        let pt = partial_transpose(&rho, &[sub]).unwrap();
        prop_assert!((pt.trace() - c(1.0, 0.0)).norm() < 1e-12);
        prop_assert!(max_hermitian_defect(&pt) < 1e-12);
    }

    #[test]
    fn realignment_norm_is_locally_invariant(seed in any::<u64>()) {
        let mut rng = seeded(seed);
        let rho = random_density(&[3, 3], 4, &mut rng).unwrap();
        let u = tensor_product(&random_unitary(3, &mut rng), &random_unitary(3, &mut rng)).unwrap();
        let before = trace_norm(&realign(&rho).unwrap());
        let after = trace_norm(&realign(&rho.conjugate(&u)).unwrap());
        prop_assert!((before - after).abs() < 1e-9);
    }

    #[test]
    fn schmidt_probabilities_match_reduced_spectra(seed in any::<u64>()) {
        let psi = random_pure(&[2, 3], &mut seeded(seed)).unwrap();
        let split = Partition::bipartition(&[0], 2).unwrap();
        let mut p = schmidt(&psi, &split).unwrap().probabilities();
        p.resize(3, 0.0);
        let rho = psi.density();
        for keep in [0usize, 1] {
            let mut ev = eigvalsh(partial_trace(&rho, &[keep]).unwrap().matrix()).unwrap();
            ev.resize(3, 0.0);
            for (a, b) in p.iter().zip(&ev) {
                prop_assert!((a - b).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn renyi_entropy_decreases_with_order(seed in any::<u64>()) {
        let rho = random_density(&[4], 4, &mut seeded(seed)).unwrap();
        let orders = [0.0, 0.5, 1.0, 2.0, 3.0, f64::INFINITY];
        let s: Vec<f64> = orders.iter().map(|&a| renyi_entropy(&rho, a).unwrap()).collect();
        for w in s.windows(2) {
            prop_assert!(w[1] <= w[0] + 1e-12);
        }
    }

    #[test]
    fn conjugation_preserves_spectrum(seed in any::<u64>()) {
        let mut rng = seeded(seed);
        let rho = random_density(&[3], 3, &mut rng).unwrap();
        let u: CMatrix = random_unitary(3, &mut rng);
        let moved: DensityMatrix = rho.conjugate(&u);
        for (a, b) in rho.eigenvalues().iter().zip(moved.eigenvalues()) {
            prop_assert!((a - b).abs() < 1e-10);
        }
    }
}
