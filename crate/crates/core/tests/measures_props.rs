use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use schmidt_distill::measures::{
    concurrence, entanglement_of_formation, entropy_of_entanglement, visibility_from_counts,
};
use schmidt_distill::quantum::linalg::kron;
use schmidt_distill::quantum::{DensityMatrix, Party, Register};
use schmidt_distill::random::{random_density, random_pure_state, random_unitary};
use schmidt_distill::schmidt::schmidt_pair;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn entropy_is_symmetric(seed in any::<u64>(), n in 1usize..4) {
        let reg = Register::n_pairs(n);
        let psi = random_pure_state::<f64, _>(reg.clone(), &mut rng(seed));
        let a = entropy_of_entanglement(&psi, &reg.party_labels(Party::A)).unwrap().0;
        let b = entropy_of_entanglement(&psi, &reg.party_labels(Party::B)).unwrap().0;
        prop_assert!((a - b).abs() < 1e-9);
    }

    #[test]
    fn formation_equals_entropy_on_pure(seed in any::<u64>()) {
        let reg = Register::polarization_pair();
        let psi = random_pure_state::<f64, _>(reg.clone(), &mut rng(seed));
        let e = entropy_of_entanglement(&psi, &reg.party_labels(Party::A)).unwrap().0;
        let f = entanglement_of_formation(&DensityMatrix::from_pure(&psi)).unwrap().0;
        prop_assert!((e - f).abs() < 1e-8);
    }

    #[test]
    fn concurrence_local_unitary_invariant(seed in any::<u64>(), rank in 1usize..5) {
        let mut r = rng(seed);
        let reg = Register::polarization_pair();
        let rho = random_density::<f64, _>(reg.clone(), rank, &mut r);
        let u = kron(&random_unitary::<f64, _>(2, &mut r), &random_unitary::<f64, _>(2, &mut r));
        let moved = rho.apply(&u, reg.labels()).unwrap();
        prop_assert!((concurrence(&rho).unwrap() - concurrence(&moved).unwrap()).abs() < 1e-8);
    }

    #[test]
    fn concurrence_of_schmidt_pair(theta in 0.0f64..90.0) {
        let psi = schmidt_pair::<f64>(theta, 1).unwrap();
        let c = concurrence(&DensityMatrix::from_pure(&psi)).unwrap();
        prop_assert!((c - (2.0 * theta.to_radians()).sin()).abs() < 1e-9);
    }

    #[test]
    fn visibility_scale_invariant(
        counts in proptest::collection::vec(0.0f64..1e5, 2..20),
        scale in 1e-3f64..1e3,
    ) {
        prop_assume!(counts.iter().any(|c| *c > 0.0));
        let scaled: Vec<f64> = counts.iter().map(|c| c * scale).collect();
        let a = visibility_from_counts(&counts).unwrap().value;
        let b = visibility_from_counts(&scaled).unwrap().value;
        prop_assert!((a - b).abs() < 1e-12);
    }
}

#[test]
fn concurrence_rejects_larger_registers() {
    let rho = DensityMatrix::<f64>::maximally_mixed(Register::hyperentangled());
    assert!(concurrence(&rho).is_err());
}

#[test]
fn visibility_undefined_for_zero_counts() {
    assert!(visibility_from_counts(&[0.0, 0.0, 0.0]).is_err());
    assert!(visibility_from_counts(&[1.0]).is_err());
}
