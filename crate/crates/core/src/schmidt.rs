//! Schmidt projection: n-pair subspace projectors, the four-qubit photonic
//! pipeline and yield accounting.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measures::{entanglement_of_formation, entropy_of_entanglement, Ebits};
use crate::photonic::{m_cnot, p_cnot, pbs_transmit_projector, NoiseChannel, PCnotConfig, Path};
use crate::quantum::linalg::CMatrix;
use crate::quantum::{DensityMatrix, Party, Projector, PureState, QubitLabel, Register};
use crate::scalar::{cr, Real};

pub const MAX_PAIRS: usize = 6;

/// Input angles used in the experiment, in degrees.
pub const EXPERIMENTAL_ANGLES: [f64; 4] = [44.0, 41.9, 39.3, 35.9];

/// 0..=90 degrees in 1 degree steps plus the experimental angles, sorted.
pub fn theta_grid() -> Vec<f64> {
    let mut grid: Vec<f64> = (0..=90).map(f64::from).collect();
    for a in EXPERIMENTAL_ANGLES {
        if !grid.contains(&a) {
            grid.push(a);
        }
    }
    grid.sort_by(|a, b| a.partial_cmp(b).expect("finite grid"));
    grid
}

pub fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) as u64 / (i + 1) as u64)
}

/// Hamming-weight-`k` subspace of each party's `n` local qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct SchmidtSubspace<T: Real> {
    pub n: usize,
    pub k: usize,
    pub dimension: usize,
    pub alice: Projector<T>,
    pub bob: Projector<T>,
}

fn check_pairs(n: usize) -> Result<()> {
    if !(1..=MAX_PAIRS).contains(&n) {
        return Err(Error::OutOfRange {
            name: "n",
            value: n as f64,
            min: 1.0,
            max: MAX_PAIRS as f64,
        });
    }
    Ok(())
}

fn subspace<T: Real>(n: usize, k: usize) -> Result<SchmidtSubspace<T>> {
    let reg = Register::n_pairs(n);
    let span: Vec<usize> = (0..1usize << n)
        .filter(|i| i.count_ones() as usize == k)
        .collect();
    Ok(SchmidtSubspace {
        n,
        k,
        dimension: span.len(),
        alice: Projector::onto_basis_states(&span, reg.party_labels(Party::A))?,
        bob: Projector::onto_basis_states(&span, reg.party_labels(Party::B))?,
    })
}

/// The `n + 1` local projectors, indexed by excitation count `k`.
pub fn schmidt_projectors<T: Real>(n: usize) -> Result<Vec<SchmidtSubspace<T>>> {
    check_pairs(n)?;
    (0..=n).map(|k| subspace(n, k)).collect()
}

/// `cos t |00> + sin t |11>` on pair `index`.
pub fn schmidt_pair<T: Real>(theta_deg: T, index: u8) -> Result<PureState<T>> {
    let (s, co) = T::deg_to_rad(theta_deg).sin_cos();
    let zero = cr(T::zero());
    PureState::new(
        Register::new(vec![QubitLabel::pair(Party::A, index), QubitLabel::pair(Party::B, index)])?,
        vec![cr(co), zero, zero, cr(s)],
    )
}

/// `n` copies of the pair state over A1..An, B1..Bn.
pub fn n_pair_input<T: Real>(theta_deg: T, n: usize) -> Result<PureState<T>> {
    check_pairs(n)?;
    let mut state = schmidt_pair(theta_deg, 1)?;
    for i in 2..=n {
        state = state.tensor(&schmidt_pair(theta_deg, i as u8)?)?;
    }
    Ok(state)
}

#[derive(Debug, Clone, PartialEq)]
pub enum DistilledState<T: Real> {
    Pure(PureState<T>),
    Mixed(DensityMatrix<T>),
    /// Zero-probability outcome.
    Null,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DistillationOutcome<T: Real> {
    pub n: usize,
    pub k: usize,
    pub success_probability: T,
    pub output: DistilledState<T>,
    pub extracted_ebits: T,
    /// `k` is 0 or `n`: the output is a product state.
    pub zero_yield: bool,
}

/// Projects `n` copies of the pair state onto the weight-`k` subspace on
/// both sides.
pub fn project_n_pairs<T: Real>(theta_deg: T, n: usize, k: usize) -> Result<DistillationOutcome<T>> {
    check_pairs(n)?;
    if k > n {
        return Err(Error::OutOfRange {
            name: "k",
            value: k as f64,
            min: 0.0,
            max: n as f64,
        });
    }
    let subspace = subspace::<T>(n, k)?;
    let input = n_pair_input(theta_deg, n)?;
    let after_a = input.project(&subspace.alice)?;
    let (prob, output) = match after_a.state {
        None => (T::zero(), DistilledState::Null),
        Some(state) => {
            let after_b = state.project(&subspace.bob)?;
            let p = after_a.probability * after_b.probability;
            match after_b.state {
                Some(s) => (p, DistilledState::Pure(s)),
                None => (T::zero(), DistilledState::Null),
            }
        }
    };
    let zero_yield = k == 0 || k == n;
    let extracted_ebits = if zero_yield || matches!(output, DistilledState::Null) {
        T::zero()
    } else {
        T::from_u64(binomial(n, k)).expect("small binomial").log2()
    };
    Ok(DistillationOutcome {
        n,
        k,
        success_probability: prob,
        output,
        extracted_ebits,
        zero_yield,
    })
}

/// Gate settings of the photonic pipeline.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GateConfig<T> {
    pub p_cnot_compensated: bool,
    pub v_phase: T,
    /// Pair coherence of the p-CNOT stage; each photon's polarization is
    /// dephased with its square root.
    pub gate_coherence: T,
}

impl<T: Real> Default for GateConfig<T> {
    fn default() -> Self {
        Self {
            p_cnot_compensated: true,
            v_phase: T::FRAC_PI_2(),
            gate_coherence: T::one(),
        }
    }
}

impl<T: Real> GateConfig<T> {
    pub fn with_coherence(gate_coherence: T) -> Self {
        Self {
            gate_coherence,
            ..Self::default()
        }
    }
}

/// m-CNOT(R), PBS, m-CNOT(L) and p-CNOT on both photons.
///
/// The output lives on the full four-qubit register; momentum ends in
/// `|D>_A |D>_B`. With `gate_coherence < 1` the output is mixed.
pub fn run_photonic_sp<T: Real>(input: &PureState<T>, cfg: &GateConfig<T>) -> Result<DistillationOutcome<T>> {
    let expected = Register::hyperentangled();
    if input.register() != &expected {
        return Err(Error::RegisterShape {
            expected: expected.to_string(),
            got: input.register().to_string(),
        });
    }
    input.check_normalized()?;
    let noise = if cfg.gate_coherence < T::one() {
        Some(NoiseChannel::dephasing(cfg.gate_coherence)?)
    } else {
        NoiseChannel::dephasing(cfg.gate_coherence)?;
        None
    };
    let pc = PCnotConfig {
        compensated: cfg.p_cnot_compensated,
        v_phase: cfg.v_phase,
        noise: noise.map(|ch| NoiseChannel {
            coherence: ch.coherence.sqrt(),
            ..ch
        }),
    };

    let mut state = input.clone();
    for party in [Party::A, Party::B] {
        state = m_cnot(Path::R, party).apply(&state)?;
    }
    let mut probability = T::one();
    for party in [Party::A, Party::B] {
        let proj = pbs_transmit_projector(party).project(&state)?;
        probability *= proj.probability;
        match proj.state {
            Some(s) => state = s,
            None => {
                return Ok(DistillationOutcome {
                    n: 2,
                    k: 1,
                    success_probability: T::zero(),
                    output: DistilledState::Null,
                    extracted_ebits: T::zero(),
                    zero_yield: false,
                })
            }
        }
    }
    for party in [Party::A, Party::B] {
        state = m_cnot(Path::L, party).apply(&state)?;
    }
    let gates = [p_cnot(&pc, Party::A), p_cnot(&pc, Party::B)];
    let (output, ebits) = if pc.noise.is_some() {
        let mut rho = DensityMatrix::from_pure(&state);
        for g in &gates {
            rho = g.apply_density(&rho)?.0.expect("unitary keeps the state");
        }
        let pol = rho.partial_trace(&[QubitLabel::pol(Party::A), QubitLabel::pol(Party::B)])?;
        let e = entanglement_of_formation(&pol)?.0;
        (DistilledState::Mixed(rho), e)
    } else {
        for g in &gates {
            state = g.apply(&state)?;
        }
        let e = entropy_of_entanglement(&state, &state.register().party_labels(Party::A))?.0;
        (DistilledState::Pure(state), e)
    };
    Ok(DistillationOutcome {
        n: 2,
        k: 1,
        success_probability: probability,
        output,
        extracted_ebits: ebits,
        zero_yield: false,
    })
}

impl<T: Real> DistillationOutcome<T> {
    pub fn density(&self) -> Option<DensityMatrix<T>> {
        match &self.output {
            DistilledState::Pure(p) => Some(DensityMatrix::from_pure(p)),
            DistilledState::Mixed(m) => Some(m.clone()),
            DistilledState::Null => None,
        }
    }

    /// Polarization pair of a photonic run, momentum traced out.
    pub fn polarization_state(&self) -> Result<DensityMatrix<T>> {
        let rho = self
            .density()
            .ok_or_else(|| Error::InvalidArgument("null outcome has no state".into()))?;
        if rho.register() == &Register::polarization_pair() {
            return Ok(rho);
        }
        rho.partial_trace(&[QubitLabel::pol(Party::A), QubitLabel::pol(Party::B)])
    }
}

/// `(|HH> + |VV>) / sqrt 2` on (A.pol, B.pol).
pub fn phi_plus<T: Real>() -> PureState<T> {
    let h = cr(T::FRAC_1_SQRT_2());
    let zero = Complex::new(T::zero(), T::zero());
    PureState::new(Register::polarization_pair(), vec![h, zero, zero, h]).expect("static register")
}

/// Expected ebits from one Schmidt projection of `n` pairs:
/// `sum_{k=1}^{n-1} C(n,k) cos^{2(n-k)} sin^{2k} log2 C(n,k)`.
pub fn expected_yield_finite<T: Real>(theta_deg: T, n: usize) -> Result<Ebits<T>> {
    if n == 0 {
        return Err(Error::OutOfRange {
            name: "n",
            value: 0.0,
            min: 1.0,
            max: f64::INFINITY,
        });
    }
    let (s, co) = T::deg_to_rad(theta_deg).sin_cos();
    let (s2, c2) = (s * s, co * co);
    let total = (1..n).fold(T::zero(), |acc, k| {
        let b = T::from_u64(binomial(n, k)).expect("binomial fits");
        acc + b * c2.powi((n - k) as i32) * s2.powi(k as i32) * b.log2()
    });
    Ok(Ebits(total))
}

/// Asymptotic yield `n E(psi)`.
pub fn expected_yield_asymptotic<T: Real>(theta_deg: T, n: usize) -> Ebits<T> {
    let s = T::deg_to_rad(theta_deg).sin();
    let e = crate::measures::binary_entropy(s * s);
    Ebits(T::from_usize(n).expect("n fits") * e)
}

/// Entanglement of one pair state, `h(sin^2 t)`.
pub fn pair_entanglement<T: Real>(theta_deg: T) -> Ebits<T> {
    expected_yield_asymptotic(theta_deg, 1)
}

/// Full-register projector matrix `P_A (x) P_B` for small `n`.
pub fn joint_projector_matrix<T: Real>(sub: &SchmidtSubspace<T>) -> CMatrix<T> {
    crate::quantum::linalg::kron(sub.alice.matrix(), sub.bob.matrix())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn projector_dimensions() {
        let one = schmidt_projectors::<f64>(1).unwrap();
        assert_eq!(one.iter().map(|s| s.dimension).collect::<Vec<_>>(), vec![1, 1]);
        let two = schmidt_projectors::<f64>(2).unwrap();
        assert_eq!(two.iter().map(|s| s.dimension).collect::<Vec<_>>(), vec![1, 2, 1]);
        // k = 1 spans |01> and |10>.
        let p = two[1].alice.matrix();
        assert_eq!(p[(1, 1)].re, 1.0);
        assert_eq!(p[(2, 2)].re, 1.0);
        assert_eq!(p[(0, 0)].re, 0.0);
        assert_eq!(schmidt_projectors::<f64>(4).unwrap()[2].dimension, 6);
        assert!(schmidt_projectors::<f64>(0).is_err());
        assert!(schmidt_projectors::<f64>(7).is_err());
    }

    #[test]
    fn n_pair_examples() {
        let out = project_n_pairs(45.0f64, 2, 1).unwrap();
        assert_abs_diff_eq!(out.success_probability, 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(out.extracted_ebits, 1.0, epsilon = 1e-12);
        let out = project_n_pairs(35.9f64, 2, 1).unwrap();
        assert_abs_diff_eq!(out.success_probability, 0.451_223_449_338_978_57, epsilon = 1e-12);
        // 3 cos^4(30) sin^2(30) = 27/64
        let out = project_n_pairs(30.0f64, 3, 1).unwrap();
        assert_abs_diff_eq!(out.success_probability, 0.421_875, epsilon = 1e-12);
        assert_abs_diff_eq!(out.extracted_ebits, 3f64.log2(), epsilon = 1e-12);
    }

    #[test]
    fn edge_subspaces_are_zero_yield() {
        let out = project_n_pairs(30.0f64, 3, 0).unwrap();
        assert!(out.zero_yield);
        assert_eq!(out.extracted_ebits, 0.0);
        let out = project_n_pairs(0.0f64, 2, 1).unwrap();
        assert_eq!(out.output, DistilledState::Null);
        assert_eq!(out.success_probability, 0.0);
        assert!(project_n_pairs(30.0f64, 2, 3).is_err());
    }

    #[test]
    fn yield_examples() {
        assert_abs_diff_eq!(expected_yield_finite(45.0f64, 2).unwrap().0, 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(expected_yield_finite(0.0f64, 2).unwrap().0, 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(expected_yield_finite(35.9f64, 2).unwrap().0, 0.451_223_449_338_978_57, epsilon = 1e-12);
        assert_abs_diff_eq!(expected_yield_asymptotic(45.0f64, 2).0, 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(expected_yield_asymptotic(0.0f64, 2).0, 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(expected_yield_asymptotic(35.9f64, 2).0, 1.856_878_103_396_685_5, epsilon = 1e-9);
    }

    #[test]
    fn grid_contents() {
        let g = theta_grid();
        assert_eq!(g.len(), 94);
        for a in EXPERIMENTAL_ANGLES {
            assert!(g.contains(&a));
        }
        assert_eq!(g[0], 0.0);
        assert_eq!(*g.last().unwrap(), 90.0);
    }

    #[test]
    fn rejects_wrong_register() {
        let psi = n_pair_input(30.0f64, 2).unwrap();
        assert!(matches!(
            run_photonic_sp(&psi, &GateConfig::default()),
            Err(Error::RegisterShape { .. })
        ));
    }
}
