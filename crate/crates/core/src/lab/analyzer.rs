//! Polarization analyzers: a wave-plate setting followed by a PBS that
//! transmits H.

use std::fmt;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::photonic::{hwp_matrix, qwp_matrix};
use crate::quantum::{DensityMatrix, Party, QubitLabel, Register};
use crate::scalar::{c, Real};

/// The state an analyzer projects onto.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum AnalyzerState {
    H,
    V,
    /// `(H + V) / sqrt 2`
    D,
    /// `(H - iV) / sqrt 2`
    R,
    /// HWP at the given angle (degrees) in front of the PBS.
    Hwp(f64),
    /// QWP then HWP (degrees) in front of the PBS.
    QwpHwp { qwp: f64, hwp: f64 },
}

/// Tomography basis in acquisition order.
pub const TOMOGRAPHY_BASIS: [AnalyzerState; 4] =
    [AnalyzerState::H, AnalyzerState::V, AnalyzerState::D, AnalyzerState::R];

impl AnalyzerState {
    /// Normalized projection vector `(h, v)`.
    pub fn vector<T: Real>(&self) -> [Complex<T>; 2] {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        match *self {
            AnalyzerState::H => [c(1., 0.), c(0., 0.)],
            AnalyzerState::V => [c(0., 0.), c(1., 0.)],
            AnalyzerState::D => [c(s, 0.), c(s, 0.)],
            AnalyzerState::R => [c(s, 0.), c(0., -s)],
            AnalyzerState::Hwp(a) => {
                // Transmitted amplitude <H| W |psi>: the analyzer state is W^dag |H>.
                let w = hwp_matrix::<T>(T::lit(a)).adjoint();
                [w[(0, 0)], w[(1, 0)]]
            }
            AnalyzerState::QwpHwp { qwp, hwp } => {
                let w = (hwp_matrix::<T>(T::lit(hwp)) * qwp_matrix::<T>(T::lit(qwp))).adjoint();
                [w[(0, 0)], w[(1, 0)]]
            }
        }
    }

    pub fn label(&self) -> String {
        self.to_string()
    }

    pub fn parse(label: &str) -> Option<Self> {
        match label {
            "H" => Some(Self::H),
            "V" => Some(Self::V),
            "D" => Some(Self::D),
            "R" => Some(Self::R),
            _ => None,
        }
    }
}

impl fmt::Display for AnalyzerState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AnalyzerState::H => write!(f, "H"),
            AnalyzerState::V => write!(f, "V"),
            AnalyzerState::D => write!(f, "D"),
            AnalyzerState::R => write!(f, "R"),
            AnalyzerState::Hwp(a) => write!(f, "HWP({a})"),
            AnalyzerState::QwpHwp { qwp, hwp } => write!(f, "QWP({qwp})HWP({hwp})"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnalyzerSetting {
    pub photon: Party,
    pub state: AnalyzerState,
}

/// Born probability of the joint analyzer projection. Accepts the
/// polarization pair or the full four-qubit register (momentum traced).
pub fn coincidence_probability<T: Real>(
    state: &DensityMatrix<T>,
    a: &AnalyzerState,
    b: &AnalyzerState,
) -> Result<T> {
    let pol;
    let rho = if state.register() == &Register::polarization_pair() {
        state
    } else if state.register() == &Register::hyperentangled() {
        pol = state.partial_trace(&[QubitLabel::pol(Party::A), QubitLabel::pol(Party::B)])?;
        &pol
    } else {
        return Err(Error::RegisterShape {
            expected: Register::polarization_pair().to_string(),
            got: state.register().to_string(),
        });
    };
    let va = a.vector::<T>();
    let vb = b.vector::<T>();
    let v = nalgebra::DVector::from_iterator(4, va.iter().flat_map(|x| vb.iter().map(move |y| *x * *y)));
    let p = (v.adjoint() * rho.matrix() * &v)[(0, 0)].re;
    Ok(p.max(T::zero()).min(T::one()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schmidt::phi_plus;
    use approx::assert_abs_diff_eq;

    #[test]
    fn vectors_are_normalized() {
        for s in TOMOGRAPHY_BASIS
            .into_iter()
            .chain([AnalyzerState::Hwp(17.0), AnalyzerState::QwpHwp { qwp: 10.0, hwp: 33.0 }])
        {
            let v = s.vector::<f64>();
            assert_abs_diff_eq!(v[0].norm_sqr() + v[1].norm_sqr(), 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn hwp_analyzer_at_22_5_is_diagonal() {
        let v = AnalyzerState::Hwp(22.5).vector::<f64>();
        let d = AnalyzerState::D.vector::<f64>();
        assert_abs_diff_eq!((v[0] - d[0]).norm() + (v[1] - d[1]).norm(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn bell_coincidences() {
        let rho = DensityMatrix::from_pure(&phi_plus::<f64>());
        use AnalyzerState::*;
        assert_abs_diff_eq!(coincidence_probability(&rho, &H, &H).unwrap(), 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(coincidence_probability(&rho, &H, &V).unwrap(), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(coincidence_probability(&rho, &D, &D).unwrap(), 0.5, epsilon = 1e-15);
    }

    #[test]
    fn wrong_register() {
        let rho = DensityMatrix::<f64>::maximally_mixed(Register::n_pairs(2));
        assert!(coincidence_probability(&rho, &AnalyzerState::H, &AnalyzerState::H).is_err());
    }
}
