//! Partially hyperentangled photon pairs and single-photon two-qubit optics.
//!
//! Jones conventions: a wave plate at angle `a` is `R(a) diag(...) R(-a)`
//! with `R` the rotation matrix, the half-wave plate core is `diag(1, -1)`
//! and the quarter-wave plate core is `diag(1, i)`. On a photon the
//! polarization qubit is the most significant of the `(pol, mom)` pair.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quantum::linalg::{cnot, identity, kron, projector_deviation, unitarity_deviation, CMatrix};
use crate::quantum::{DensityMatrix, Party, Projection, PureState, QubitLabel, Register};
use crate::scalar::{c, cr, Real};

/// Pump and crystal settings of the source, angles in degrees, phase in
/// radians.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SourceSetting<T> {
    pub theta_p: T,
    pub theta_m: T,
    pub phi: T,
}

impl<T: Real> SourceSetting<T> {
    pub fn new(theta_p: T, theta_m: T, phi: T) -> Result<Self> {
        let s = Self { theta_p, theta_m, phi };
        s.validate()?;
        Ok(s)
    }

    pub fn symmetric(theta: T) -> Result<Self> {
        Self::new(theta, theta, T::zero())
    }

    pub fn validate(&self) -> Result<()> {
        check_angle("theta_p", self.theta_p)?;
        check_angle("theta_m", self.theta_m)
    }
}

fn check_angle<T: Real>(name: &'static str, deg: T) -> Result<()> {
    let ninety = T::lit(90.0);
    if !(deg >= T::zero() && deg <= ninety) {
        return Err(Error::OutOfRange {
            name,
            value: deg.to_f64_lossy(),
            min: 0.0,
            max: 90.0,
        });
    }
    Ok(())
}

/// Path value of the momentum qubit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Path {
    L,
    R,
}

impl Path {
    fn bit(self) -> usize {
        match self {
            Path::L => 0,
            Path::R => 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum NoiseKind {
    /// Scales H/V coherences of the target qubit.
    Dephasing,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseChannel<T> {
    pub kind: NoiseKind,
    pub coherence: T,
}

impl<T: Real> NoiseChannel<T> {
    pub fn dephasing(coherence: T) -> Result<Self> {
        if !(coherence >= T::zero() && coherence <= T::one()) {
            return Err(Error::OutOfRange {
                name: "coherence",
                value: coherence.to_f64_lossy(),
                min: 0.0,
                max: 1.0,
            });
        }
        Ok(Self {
            kind: NoiseKind::Dephasing,
            coherence,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ElementKind {
    Unitary,
    Projector,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OpticalElement<T: Real> {
    pub name: String,
    pub targets: Vec<QubitLabel>,
    pub kind: ElementKind,
    pub matrix: CMatrix<T>,
    pub noise: Option<NoiseChannel<T>>,
}

/// Configuration of the polarization-controlled NOT.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PCnotConfig<T> {
    /// `true` models the gate with its QWP-HWP-QWP compensator in place.
    pub compensated: bool,
    /// Phase picked up by V-polarized input when uncompensated (radians).
    pub v_phase: T,
    /// Dephasing applied to the photon's polarization after the gate.
    pub noise: Option<NoiseChannel<T>>,
}

impl<T: Real> Default for PCnotConfig<T> {
    fn default() -> Self {
        Self {
            compensated: true,
            v_phase: T::FRAC_PI_2(),
            noise: None,
        }
    }
}

impl<T: Real> OpticalElement<T> {
    fn unitary(name: String, targets: Vec<QubitLabel>, matrix: CMatrix<T>) -> Self {
        debug_assert!(unitarity_deviation(&matrix) <= T::tol());
        Self {
            name,
            targets,
            kind: ElementKind::Unitary,
            matrix,
            noise: None,
        }
    }

    fn projector(name: String, targets: Vec<QubitLabel>, matrix: CMatrix<T>) -> Self {
        debug_assert!(projector_deviation(&matrix) <= T::tol());
        Self {
            name,
            targets,
            kind: ElementKind::Projector,
            matrix,
            noise: None,
        }
    }

    pub fn with_noise(mut self, noise: Option<NoiseChannel<T>>) -> Self {
        self.noise = noise;
        self
    }

    /// Checks the unitary or projector invariant of the element.
    pub fn validate(&self) -> Result<()> {
        match self.kind {
            ElementKind::Unitary => {
                let dev = unitarity_deviation(&self.matrix);
                if dev > T::tol() {
                    return Err(Error::NotUnitary {
                        deviation: dev.to_f64_lossy(),
                    });
                }
            }
            ElementKind::Projector => {
                let dev = projector_deviation(&self.matrix);
                if dev > T::tol() {
                    return Err(Error::NotProjector {
                        deviation: dev.to_f64_lossy(),
                    });
                }
            }
        }
        Ok(())
    }

    /// Applies a unitary element to a pure state. Noise is ignored here;
    /// use [`OpticalElement::apply_density`] for noisy propagation.
    pub fn apply(&self, psi: &PureState<T>) -> Result<PureState<T>> {
        match self.kind {
            ElementKind::Unitary => psi.apply(&self.matrix, &self.targets),
            ElementKind::Projector => Err(Error::InvalidArgument(format!(
                "{} is a projector; use project()",
                self.name
            ))),
        }
    }

    pub fn project(&self, psi: &PureState<T>) -> Result<Projection<T>> {
        match self.kind {
            ElementKind::Projector => {
                let p = crate::quantum::Projector::new(self.matrix.clone(), self.targets.clone())?;
                psi.project(&p)
            }
            ElementKind::Unitary => Err(Error::InvalidArgument(format!(
                "{} is unitary; use apply()",
                self.name
            ))),
        }
    }

    /// Propagates a density matrix. For projectors the kept probability is
    /// returned alongside the renormalized state; it is 1 for unitaries.
    pub fn apply_density(&self, rho: &DensityMatrix<T>) -> Result<(Option<DensityMatrix<T>>, T)> {
        let (mut out, prob) = match self.kind {
            ElementKind::Unitary => (rho.apply(&self.matrix, &self.targets)?, T::one()),
            ElementKind::Projector => {
                let kept = rho.conjugate_unchecked(&self.matrix, &self.targets)?;
                let p = kept.trace();
                if p <= T::zero() {
                    return Ok((None, T::zero()));
                }
                let m = kept.matrix() / cr(p);
                (DensityMatrix::new_unchecked(rho.register().clone(), m), p)
            }
        };
        if let Some(ch) = &self.noise {
            let pol = self
                .targets
                .iter()
                .copied()
                .find(|l| l.dof == crate::quantum::Dof::Polarization)
                .unwrap_or(self.targets[0]);
            out = apply_noise(&out, ch, pol)?;
        }
        Ok((Some(out), prob))
    }
}

fn rotation<T: Real>(deg: T) -> CMatrix<T> {
    let (s, co) = T::deg_to_rad(deg).sin_cos();
    CMatrix::from_row_slice(2, 2, &[cr(co), cr(-s), cr(s), cr(co)])
}

fn rotated<T: Real>(core: CMatrix<T>, deg: T) -> CMatrix<T> {
    rotation(deg) * core * rotation(-deg)
}

pub fn hwp_matrix<T: Real>(deg: T) -> CMatrix<T> {
    let core = CMatrix::from_row_slice(2, 2, &[c(1., 0.), c(0., 0.), c(0., 0.), c(-1., 0.)]);
    rotated(core, deg)
}

pub fn qwp_matrix<T: Real>(deg: T) -> CMatrix<T> {
    let core = CMatrix::from_row_slice(2, 2, &[c(1., 0.), c(0., 0.), c(0., 0.), c(0., 1.)]);
    rotated(core, deg)
}

/// QWP(45) HWP(delta) QWP(45). This composite is diagonal with relative
/// V/H phase `pi + 4 delta`.
pub fn compensator_matrix<T: Real>(hwp_deg: T) -> CMatrix<T> {
    let q = qwp_matrix(T::lit(45.0));
    &q * hwp_matrix(hwp_deg) * &q
}

/// HWP angle that makes the compensator impart relative phase `phase`
/// (radians) on V.
pub fn compensator_angle<T: Real>(phase: T) -> T {
    let delta = (phase - T::PI()) / T::lit(4.0);
    delta * T::lit(180.0) / T::PI()
}

fn photon(party: Party) -> Vec<QubitLabel> {
    vec![QubitLabel::pol(party), QubitLabel::mom(party)]
}

fn party_name(p: Party) -> &'static str {
    match p {
        Party::A => "A",
        Party::B => "B",
    }
}

pub fn hwp<T: Real>(deg: T, party: Party) -> OpticalElement<T> {
    OpticalElement::unitary(
        format!("HWP({})[{}]", deg.to_f64_lossy(), party_name(party)),
        vec![QubitLabel::pol(party)],
        hwp_matrix(deg),
    )
}

pub fn qwp<T: Real>(deg: T, party: Party) -> OpticalElement<T> {
    OpticalElement::unitary(
        format!("QWP({})[{}]", deg.to_f64_lossy(), party_name(party)),
        vec![QubitLabel::pol(party)],
        qwp_matrix(deg),
    )
}

/// QWP-HWP-QWP stack imparting relative phase `phase` on V.
pub fn phase_compensator<T: Real>(phase: T, party: Party) -> OpticalElement<T> {
    OpticalElement::unitary(
        format!("compensator[{}]", party_name(party)),
        vec![QubitLabel::pol(party)],
        compensator_matrix(compensator_angle(phase)),
    )
}

/// Momentum-controlled NOT: flips polarization iff the path is `control`.
/// Physically a half-wave plate at 45 degrees placed in that path.
pub fn m_cnot<T: Real>(control: Path, party: Party) -> OpticalElement<T> {
    let on = control.bit();
    let mut m = CMatrix::zeros(4, 4);
    for pol in 0..2 {
        for mom in 0..2 {
            let from = pol * 2 + mom;
            let to_pol = if mom == on { 1 - pol } else { pol };
            m[(to_pol * 2 + mom, from)] = cr(T::one());
        }
    }
    OpticalElement::unitary(
        format!("m-CNOT({:?})[{}]", control, party_name(party)),
        photon(party),
        m,
    )
}

/// Polarization-controlled NOT on one photon: |HL>->|HU>, |HR>->|HD>,
/// |VL>->|VD>, |VR>->|VU>. The output U/D labels reuse the L/R slot.
pub fn p_cnot<T: Real>(config: &PCnotConfig<T>, party: Party) -> OpticalElement<T> {
    let mut m = cnot::<T>();
    if !config.compensated {
        let (s, co) = config.v_phase.sin_cos();
        let phase = CMatrix::from_row_slice(
            2,
            2,
            &[cr(T::one()), cr(T::zero()), cr(T::zero()), Complex::new(co, s)],
        );
        m = m * kron(&phase, &identity(2));
    }
    OpticalElement::unitary(
        format!(
            "p-CNOT{}[{}]",
            if config.compensated { "" } else { "(raw)" },
            party_name(party)
        ),
        photon(party),
        m,
    )
    .with_noise(config.noise)
}

/// PBS transmitting H on both paths of one photon.
pub fn pbs_transmit_projector<T: Real>(party: Party) -> OpticalElement<T> {
    let mut m = CMatrix::zeros(4, 4);
    m[(0, 0)] = cr(T::one());
    m[(1, 1)] = cr(T::one());
    OpticalElement::projector(format!("PBS[{}]", party_name(party)), photon(party), m)
}

/// Dephasing of `target` in the H/V basis: coherences scale by the channel
/// coherence, populations are unchanged.
pub fn apply_noise<T: Real>(
    rho: &DensityMatrix<T>,
    ch: &NoiseChannel<T>,
    target: QubitLabel,
) -> Result<DensityMatrix<T>> {
    match ch.kind {
        NoiseKind::Dephasing => {
            NoiseChannel::dephasing(ch.coherence)?;
            rho.scale_coherences(target, ch.coherence)
        }
    }
}

fn two_qubit_state<T: Real>(labels: [QubitLabel; 2], amps: [Complex<T>; 4]) -> Result<PureState<T>> {
    PureState::new(Register::new(labels.to_vec())?, amps.to_vec())
}

/// `(cos tp |VV> + e^{i phi} sin tp |HH>) (x) (cos tm |LL> + sin tm |RR>)`
/// over (A.pol, A.mom, B.pol, B.mom).
pub fn make_hyperentangled<T: Real>(s: &SourceSetting<T>) -> Result<PureState<T>> {
    s.validate()?;
    let (sp, cp) = T::deg_to_rad(s.theta_p).sin_cos();
    let (sm, cm) = T::deg_to_rad(s.theta_m).sin_cos();
    let (sphi, cphi) = s.phi.sin_cos();
    let zero = cr(T::zero());
    let pol = two_qubit_state(
        [QubitLabel::pol(Party::A), QubitLabel::pol(Party::B)],
        [Complex::new(cphi * sp, sphi * sp), zero, zero, cr(cp)],
    )?;
    let mom = two_qubit_state(
        [QubitLabel::mom(Party::A), QubitLabel::mom(Party::B)],
        [cr(cm), zero, zero, cr(sm)],
    )?;
    pol.tensor(&mom)
}

/// Collinear (R_A R_B) and non-collinear (L_A L_B) outputs of the Sagnac
/// source, `cos tp |H_A V_B> + e^{i phi} sin tp |V_A H_B>` on each path
/// pair, before Alice's 90 degree rotation.
pub fn psi_output_modes<T: Real>(s: &SourceSetting<T>) -> Result<(PureState<T>, PureState<T>)> {
    s.validate()?;
    let (sp, cp) = T::deg_to_rad(s.theta_p).sin_cos();
    let (sphi, cphi) = s.phi.sin_cos();
    let zero = cr(T::zero());
    let pol = two_qubit_state(
        [QubitLabel::pol(Party::A), QubitLabel::pol(Party::B)],
        [zero, cr(cp), Complex::new(cphi * sp, sphi * sp), zero],
    )?;
    let path = |bit: usize| {
        PureState::basis(
            Register::new(vec![QubitLabel::mom(Party::A), QubitLabel::mom(Party::B)])?,
            bit * 3,
        )
    };
    Ok((pol.tensor(&path(1)?)?, pol.tensor(&path(0)?)?))
}

/// Coherent four-path output `cos tm |psi>_L + sin tm |psi>_R`.
pub fn four_path_state<T: Real>(s: &SourceSetting<T>) -> Result<PureState<T>> {
    let (collinear, noncollinear) = psi_output_modes(s)?;
    let (sm, cm) = T::deg_to_rad(s.theta_m).sin_cos();
    let amps: Vec<Complex<T>> = noncollinear
        .amplitudes()
        .iter()
        .zip(collinear.amplitudes().iter())
        .map(|(l, r)| *l * cr(cm) + *r * cr(sm))
        .collect();
    PureState::normalized_from(Register::hyperentangled(), amps)
}

/// Half-wave plate at 45 degrees on Alice's polarization (H <-> V).
pub fn alice_rotation<T: Real>() -> OpticalElement<T> {
    hwp(T::lit(45.0), Party::A)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::linalg::{equal_up_to_phase, max_abs};
    use approx::assert_abs_diff_eq;

    fn ket(bits: &[u8]) -> PureState<f64> {
        let reg = Register::new(photon(Party::A)).unwrap();
        let idx = bits.iter().fold(0, |a, b| a * 2 + *b as usize);
        PureState::basis(reg, idx).unwrap()
    }

    const H: u8 = 0;
    const V: u8 = 1;
    const L: u8 = 0;
    const R: u8 = 1;

    #[test]
    fn hwp_examples() {
        let m = hwp_matrix::<f64>(45.0);
        assert!(max_abs(&(m - crate::quantum::linalg::pauli_x())) < 1e-15);
        let m0 = hwp_matrix::<f64>(0.0);
        assert!(max_abs(&(m0 - crate::quantum::linalg::pauli_z())) < 1e-15);
        let m = hwp_matrix::<f64>(22.5);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert_abs_diff_eq!(m[(0, 0)].re, s, epsilon = 1e-15);
        assert_abs_diff_eq!(m[(1, 0)].re, s, epsilon = 1e-15);
    }

    #[test]
    fn compensator_is_pure_phase() {
        // Analytic product: QWP(45) HWP(d) QWP(45) = i diag(e^{-2id}, -e^{2id}).
        for d in [0.0f64, 10.0, 22.5, 33.0, -67.5] {
            let m = compensator_matrix::<f64>(d);
            assert!(m[(0, 1)].norm() < 1e-14 && m[(1, 0)].norm() < 1e-14);
            let rel = (m[(1, 1)] / m[(0, 0)]).arg();
            let expected = std::f64::consts::PI + 4.0 * d.to_radians();
            let diff = (rel - expected).rem_euclid(std::f64::consts::TAU);
            assert!(diff < 1e-12 || (std::f64::consts::TAU - diff) < 1e-12, "d={d}");
        }
    }

    #[test]
    fn m_cnot_mappings() {
        let r = m_cnot::<f64>(Path::R, Party::A);
        assert!(r.apply(&ket(&[V, R])).unwrap().same_ray(&ket(&[H, R])));
        assert_eq!(r.apply(&ket(&[H, L])).unwrap(), ket(&[H, L]));
        let l = m_cnot::<f64>(Path::L, Party::A);
        assert!(l.apply(&ket(&[H, L])).unwrap().same_ray(&ket(&[V, L])));
        assert_eq!(l.apply(&ket(&[H, R])).unwrap(), ket(&[H, R]));
        let twice = &r.matrix * &r.matrix;
        assert!(max_abs(&(twice - identity::<f64>(4))) < 1e-15);
    }

    #[test]
    fn p_cnot_mapping_table() {
        let g = p_cnot::<f64>(&PCnotConfig::default(), Party::A);
        // U/D reuse the L/R slots: U = 0, D = 1.
        for (input, output) in [
            ([H, L], [H, 0]),
            ([H, R], [H, 1]),
            ([V, L], [V, 1]),
            ([V, R], [V, 0]),
        ] {
            assert!(g.apply(&ket(&input)).unwrap().same_ray(&ket(&output)));
        }
        assert!(g.validate().is_ok());
    }

    #[test]
    fn compensator_restores_p_cnot() {
        let raw = p_cnot::<f64>(
            &PCnotConfig {
                compensated: false,
                ..Default::default()
            },
            Party::A,
        );
        let ideal = p_cnot::<f64>(&PCnotConfig::default(), Party::A);
        let comp = phase_compensator::<f64>(-std::f64::consts::FRAC_PI_2, Party::A);
        let full_comp = kron(&comp.matrix, &identity(2));
        let composed = full_comp * &raw.matrix;
        assert!(equal_up_to_phase(&composed, &ideal.matrix, 1e-9));
        assert!(!equal_up_to_phase(&raw.matrix, &ideal.matrix, 1e-3));
    }

    #[test]
    fn pbs_keeps_h_only() {
        let pbs = pbs_transmit_projector::<f64>(Party::A);
        assert_abs_diff_eq!(pbs.project(&ket(&[H, L])).unwrap().probability, 1.0);
        let out = pbs.project(&ket(&[V, L])).unwrap();
        assert_eq!(out.probability, 0.0);
        assert!(out.state.is_none());
        assert!(pbs.apply(&ket(&[H, L])).is_err());
    }

    #[test]
    fn hyperentangled_examples() {
        let s = SourceSetting::new(45.0, 45.0, 0.0).unwrap();
        let psi = make_hyperentangled(&s).unwrap();
        for bits in [[V, L, V, L], [H, R, H, R], [V, R, V, R], [H, L, H, L]] {
            assert_abs_diff_eq!(psi.amplitude_of(&bits).norm(), 0.5, epsilon = 1e-15);
        }
        // cos(35.9) sin(35.9), cos^2(35.9)
        let psi = make_hyperentangled(&SourceSetting::symmetric(35.9).unwrap()).unwrap();
        assert_abs_diff_eq!(psi.amplitude_of(&[V, R, V, R]).re, 0.474_986_025_762_326_2, epsilon = 1e-12);
        assert_abs_diff_eq!(psi.amplitude_of(&[V, L, V, L]).re, 0.656_167_459_256_116_4, epsilon = 1e-12);
    }

    #[test]
    fn out_of_range_angles() {
        assert!(matches!(SourceSetting::new(95.0, 10.0, 0.0), Err(Error::OutOfRange { .. })));
        assert!(SourceSetting::new(10.0, -1.0, 0.0).is_err());
        assert!(SourceSetting::new(f64::NAN, 1.0, 0.0).is_err());
    }

    #[test]
    fn output_modes_at_balance() {
        let s = SourceSetting::new(45.0, 20.0, 0.3).unwrap();
        let (col, non) = psi_output_modes(&s).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert_abs_diff_eq!(col.amplitude_of(&[H, R, V, R]).re, h, epsilon = 1e-15);
        let z = col.amplitude_of(&[V, R, H, R]);
        assert_abs_diff_eq!(z.re, h * 0.3f64.cos(), epsilon = 1e-15);
        assert_abs_diff_eq!(z.im, h * 0.3f64.sin(), epsilon = 1e-15);
        assert_abs_diff_eq!(non.amplitude_of(&[H, L, V, L]).re, h, epsilon = 1e-15);
        let singlet = psi_output_modes(&SourceSetting::new(45.0, 20.0, std::f64::consts::PI).unwrap()).unwrap();
        assert_abs_diff_eq!(singlet.0.amplitude_of(&[V, R, H, R]).re, -h, epsilon = 1e-15);
        assert_abs_diff_eq!(singlet.1.amplitude_of(&[V, L, H, L]).re, -h, epsilon = 1e-15);
    }

    #[test]
    fn noise_identity_and_full_dephasing() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let phi = PureState::new(
            Register::polarization_pair(),
            vec![c(s, 0.), c(0., 0.), c(0., 0.), c(s, 0.)],
        )
        .unwrap();
        let rho = DensityMatrix::from_pure(&phi);
        let same = apply_noise(&rho, &NoiseChannel::dephasing(1.0).unwrap(), QubitLabel::pol(Party::A)).unwrap();
        assert!(rho.trace_distance(&same).unwrap() < 1e-12);
        let dead = apply_noise(&rho, &NoiseChannel::dephasing(0.0).unwrap(), QubitLabel::pol(Party::A)).unwrap();
        assert_abs_diff_eq!(dead.matrix()[(0, 3)].norm(), 0.0);
        assert_abs_diff_eq!(dead.matrix()[(0, 0)].re, 0.5, epsilon = 1e-15);
        assert!(NoiseChannel::dephasing(1.5).is_err());
    }
}
