use num_complex::Complex;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use schmidt_distill::quantum::linalg::{cnot, identity, kron, pauli_x};
use schmidt_distill::quantum::{DensityMatrix, Party, Projector, PureState, QubitLabel, Register};
use schmidt_distill::random::{random_density, random_pure_state, random_unitary};
use schmidt_distill::schmidt::{schmidt_pair, schmidt_projectors};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn label(i: usize) -> QubitLabel {
    let party = if i % 2 == 0 { Party::A } else { Party::B };
    QubitLabel::pair(party, (i / 2 + 1) as u8)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn unitaries_preserve_norm(seed in any::<u64>(), target in 0usize..4) {
        let mut r = rng(seed);
        let psi = random_pure_state::<f64, _>(Register::hyperentangled(), &mut r);
        let u = random_unitary::<f64, _>(4, &mut r);
        let labels = Register::hyperentangled().labels().to_vec();
        let targets = [labels[target], labels[(target + 1) % 4]];
        let out = psi.apply(&u, &targets).unwrap();
        prop_assert!((out.norm_sqr() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn partial_trace_chain_keeps_unit_trace(seed in any::<u64>(), rank in 1usize..16) {
        let rho = random_density::<f64, _>(Register::hyperentangled(), rank, &mut rng(seed));
        let mut keep = Register::hyperentangled().labels().to_vec();
        let mut current = rho;
        while keep.len() > 1 {
            keep.remove(0);
            current = current.partial_trace(&keep).unwrap();
            prop_assert!((current.trace() - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn schmidt_family_is_complete(seed in any::<u64>(), n in 1usize..4) {
        let register = Register::n_pairs(n);
        let psi = random_pure_state::<f64, _>(register, &mut rng(seed));
        let subspaces = schmidt_projectors::<f64>(n).unwrap();
        let mut total = 0.0;
        for sa in &subspaces {
            let a = psi.project(&sa.alice).unwrap();
            let Some(after) = a.state else { continue };
            for sb in &subspaces {
                total += a.probability * after.project(&sb.bob).unwrap().probability;
            }
        }
        prop_assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn tensor_is_associative(t1 in 0.0f64..90.0, t2 in 0.0f64..90.0, t3 in 0.0f64..90.0) {
        let a = schmidt_pair::<f64>(t1, 1).unwrap();
        let b = schmidt_pair::<f64>(t2, 2).unwrap();
        let c = schmidt_pair::<f64>(t3, 3).unwrap();
        let left = a.tensor(&b).unwrap().tensor(&c).unwrap();
        let right = a.tensor(&b.tensor(&c).unwrap()).unwrap();
        prop_assert_eq!(left.register(), right.register());
        let diff = (left.amplitudes() - right.amplitudes()).camax();
        prop_assert!(diff < 1e-12);
    }

    #[test]
    fn projector_pair_is_complete(seed in any::<u64>(), q in 0usize..4) {
        let mut r = rng(seed);
        let psi = random_pure_state::<f64, _>(Register::n_pairs(2), &mut r);
        let targets = vec![label(q)];
        let p0 = Projector::onto_basis_states(&[0], targets.clone()).unwrap();
        let p1 = Projector::onto_basis_states(&[1], targets).unwrap();
        let sum = psi.project(&p0).unwrap().probability + psi.project(&p1).unwrap().probability;
        prop_assert!((sum - 1.0).abs() < 1e-12);
    }
}

#[test]
fn tensor_rejects_label_collision() {
    let a = schmidt_pair::<f64>(30.0, 1).unwrap();
    assert!(a.tensor(&a).is_err());
}

#[test]
fn cnot_example() {
    let reg = Register::new(vec![QubitLabel::pol(Party::A), QubitLabel::mom(Party::A)]).unwrap();
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let z = Complex::new(0.0, 0.0);
    let psi = PureState::new(reg.clone(), vec![Complex::new(h, 0.0), z, Complex::new(h, 0.0), z]).unwrap();
    let out = psi.apply(&cnot(), reg.labels()).unwrap();
    let expect = PureState::new(reg, vec![Complex::new(h, 0.0), z, z, Complex::new(h, 0.0)]).unwrap();
    assert!((out.amplitudes() - expect.amplitudes()).camax() < 1e-12);
}

#[test]
fn bit_flip_on_full_register() {
    let psi = PureState::<f64>::basis(Register::hyperentangled(), 0).unwrap();
    let out = psi.apply(&pauli_x(), &[QubitLabel::pol(Party::A)]).unwrap();
    assert_eq!(out.amplitude_of(&[1, 0, 0, 0]), Complex::new(1.0, 0.0));
}

#[test]
fn non_unitary_rejected() {
    let psi = PureState::<f64>::basis(Register::polarization_pair(), 0).unwrap();
    let m = identity::<f64>(2) * Complex::new(2.0, 0.0);
    assert!(psi.apply(&m, &[QubitLabel::pol(Party::A)]).is_err());
}

#[test]
fn density_apply_matches_pure() {
    let mut r = rng(11);
    let psi = random_pure_state::<f64, _>(Register::hyperentangled(), &mut r);
    let u = kron(&random_unitary::<f64, _>(2, &mut r), &random_unitary::<f64, _>(2, &mut r));
    let targets = [QubitLabel::pol(Party::A), QubitLabel::mom(Party::B)];
    let via_pure = DensityMatrix::from_pure(&psi.apply(&u, &targets).unwrap());
    let via_rho = DensityMatrix::from_pure(&psi).apply(&u, &targets).unwrap();
    assert!(via_pure.trace_distance(&via_rho).unwrap() < 1e-12);
}

#[test]
fn f32_state_is_normalized() {
    let psi = schmidt_distill::schmidt::n_pair_input::<f32>(35.9, 2).unwrap();
    assert!((psi.norm_sqr() - 1.0).abs() < 1e-5);
}
