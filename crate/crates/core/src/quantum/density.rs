//! Density matrices on a labeled qubit register.

use num_complex::Complex;

use super::linalg::{
    apply_kernel, hermitian_eigenvalues, hermiticity_deviation, map_hermitian, trace,
    unitarity_deviation, CMatrix,
};
use super::register::{QubitLabel, Register};
use super::state::{split_offsets, PureState};
use crate::error::{Error, Result};
use crate::scalar::{cr, Real};

/// Hermitian, unit-trace, positive-semidefinite matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix<T: Real> {
    register: Register,
    matrix: CMatrix<T>,
}

impl<T: Real> DensityMatrix<T> {
    /// Validates Hermiticity, unit trace and a minimum eigenvalue above
    /// `-tol`.
    pub fn new(register: Register, matrix: CMatrix<T>) -> Result<Self> {
        let dim = register.dim();
        if matrix.nrows() != dim || matrix.ncols() != dim {
            return Err(Error::Dimension {
                expected: dim,
                got: matrix.nrows(),
            });
        }
        let tol = T::tol();
        let herm = hermiticity_deviation(&matrix);
        if herm > tol {
            return Err(Error::NotPhysical(format!(
                "not Hermitian (deviation {:.3e})",
                herm.to_f64_lossy()
            )));
        }
        let tr = trace(&matrix);
        if (tr.re - T::one()).abs() > tol || tr.im.abs() > tol {
            return Err(Error::NotPhysical(format!(
                "trace {} + {}i",
                tr.re.to_f64_lossy(),
                tr.im.to_f64_lossy()
            )));
        }
        let min = min_eigenvalue(&matrix);
        if min < -tol {
            return Err(Error::NotPhysical(format!(
                "negative eigenvalue {:.3e}",
                min.to_f64_lossy()
            )));
        }
        Ok(Self { register, matrix })
    }

    pub(crate) fn new_unchecked(register: Register, matrix: CMatrix<T>) -> Self {
        Self { register, matrix }
    }

    pub fn from_pure(psi: &PureState<T>) -> Self {
        let v = psi.amplitudes();
        Self {
            register: psi.register().clone(),
            matrix: v * v.adjoint(),
        }
    }

    pub fn maximally_mixed(register: Register) -> Self {
        let dim = register.dim();
        let scale = cr(T::one() / T::from_usize(dim).expect("dimension fits"));
        Self {
            register,
            matrix: CMatrix::identity(dim, dim) * scale,
        }
    }

    pub fn register(&self) -> &Register {
        &self.register
    }

    pub fn matrix(&self) -> &CMatrix<T> {
        &self.matrix
    }

    pub fn trace(&self) -> T {
        trace(&self.matrix).re
    }

    pub fn purity(&self) -> T {
        (&self.matrix * &self.matrix).trace().re
    }

    /// Eigenvalues in descending order.
    pub fn eigenvalues(&self) -> Vec<T> {
        hermitian_eigenvalues(&self.matrix)
    }

    pub fn partial_trace(&self, keep: &[QubitLabel]) -> Result<Self> {
        let (keep_off, trace_off) = split_offsets(&self.register, keep)?;
        let k = keep_off.len();
        let mut out = CMatrix::zeros(k, k);
        for r in 0..k {
            for col in 0..k {
                let mut acc = Complex::new(T::zero(), T::zero());
                for t in &trace_off {
                    acc += self.matrix[(keep_off[r] + t, keep_off[col] + t)];
                }
                out[(r, col)] = acc;
            }
        }
        Ok(Self {
            register: Register::new(keep.to_vec())?,
            matrix: out,
        })
    }

    /// `U rho U^dag` with `U` acting on `targets`.
    pub fn apply(&self, u: &CMatrix<T>, targets: &[QubitLabel]) -> Result<Self> {
        let dim = 1usize << targets.len();
        if u.nrows() != dim || u.ncols() != dim {
            return Err(Error::Dimension {
                expected: dim,
                got: u.nrows(),
            });
        }
        let dev = unitarity_deviation(u);
        if dev > T::tol() {
            return Err(Error::NotUnitary {
                deviation: dev.to_f64_lossy(),
            });
        }
        Ok(self.conjugate_unchecked(u, targets)?)
    }

    /// `M rho M^dag` without unitarity or trace checks.
    pub(crate) fn conjugate_unchecked(&self, m: &CMatrix<T>, targets: &[QubitLabel]) -> Result<Self> {
        let shifts: Vec<usize> = self
            .register
            .positions(targets)?
            .into_iter()
            .map(|p| self.register.shift(p))
            .collect();
        let left = left_multiply(&self.matrix, &shifts, m);
        let right = left_multiply(&left.adjoint(), &shifts, m);
        Ok(Self {
            register: self.register.clone(),
            matrix: right.adjoint(),
        })
    }

    /// Scales every coherence between different values of `target` by
    /// `factor`. Populations are untouched.
    pub fn scale_coherences(&self, target: QubitLabel, factor: T) -> Result<Self> {
        let pos = self.register.position(target)?;
        let bit = 1usize << self.register.shift(pos);
        let mut m = self.matrix.clone();
        let f = cr(factor);
        for r in 0..m.nrows() {
            for col in 0..m.ncols() {
                if (r & bit) != (col & bit) {
                    m[(r, col)] *= f;
                }
            }
        }
        Ok(Self {
            register: self.register.clone(),
            matrix: m,
        })
    }

    /// `<psi| rho |psi>`.
    pub fn expectation_pure(&self, psi: &PureState<T>) -> Result<T> {
        if psi.register() != &self.register {
            return Err(Error::RegisterShape {
                expected: self.register.to_string(),
                got: psi.register().to_string(),
            });
        }
        let v = psi.amplitudes();
        Ok((v.adjoint() * &self.matrix * v)[(0, 0)].re)
    }

    /// Half the trace norm of `self - other`.
    pub fn trace_distance(&self, other: &Self) -> Result<T> {
        trace_distance(&self.matrix, &other.matrix)
    }

    /// Matrix square root through the eigendecomposition; negative
    /// eigenvalues are clamped to zero.
    pub fn sqrt_matrix(&self) -> CMatrix<T> {
        map_hermitian(&self.matrix, |x| x.max(T::zero()).sqrt())
    }
}

pub fn trace_distance<T: Real>(a: &CMatrix<T>, b: &CMatrix<T>) -> Result<T> {
    if a.shape() != b.shape() {
        return Err(Error::Dimension {
            expected: a.nrows(),
            got: b.nrows(),
        });
    }
    let diff = a - b;
    let sum = hermitian_eigenvalues(&diff)
        .into_iter()
        .fold(T::zero(), |acc, x| acc + x.abs());
    Ok(sum * T::lit(0.5))
}

pub(crate) fn min_eigenvalue<T: Real>(m: &CMatrix<T>) -> T {
    hermitian_eigenvalues(m)
        .last()
        .copied()
        .unwrap_or_else(T::zero)
}

fn left_multiply<T: Real>(rho: &CMatrix<T>, shifts: &[usize], m: &CMatrix<T>) -> CMatrix<T> {
    let mut out = rho.clone();
    for j in 0..out.ncols() {
        let mut col: Vec<Complex<T>> = out.column(j).iter().copied().collect();
        apply_kernel(&mut col, shifts, m);
        for (i, z) in col.into_iter().enumerate() {
            out[(i, j)] = z;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::linalg::{kron, pauli_x};
    use crate::quantum::register::Party;
    use crate::scalar::c;

    fn schmidt(theta_deg: f64) -> PureState<f64> {
        let t = theta_deg.to_radians();
        let mut amps = vec![c(0.0, 0.0); 4];
        amps[0] = c(t.cos(), 0.0);
        amps[3] = c(t.sin(), 0.0);
        PureState::new(Register::polarization_pair(), amps).unwrap()
    }

    #[test]
    fn bell_reduces_to_maximally_mixed() {
        let rho = DensityMatrix::from_pure(&schmidt(45.0));
        let a = rho.partial_trace(&[QubitLabel::pol(Party::A)]).unwrap();
        let mixed = DensityMatrix::maximally_mixed(a.register().clone());
        assert!(a.trace_distance(&mixed).unwrap() < 1e-12);
    }

    #[test]
    fn schmidt_reduction_diagonal() {
        let rho = DensityMatrix::from_pure(&schmidt(35.9));
        let a = rho.partial_trace(&[QubitLabel::pol(Party::A)]).unwrap();
        // cos^2 and sin^2 of 35.9 deg
        assert!((a.matrix()[(0, 0)].re - 0.656_167_459_256).abs() < 1e-6);
        assert!((a.matrix()[(1, 1)].re - 0.343_832_540_744).abs() < 1e-6);
        assert!(a.matrix()[(0, 1)].norm() < 1e-15);
    }

    #[test]
    fn partial_trace_keep_errors() {
        let rho = DensityMatrix::from_pure(&schmidt(10.0));
        assert_eq!(rho.partial_trace(&[]), Err(Error::ImproperSubset));
        assert!(matches!(
            rho.partial_trace(&[QubitLabel::mom(Party::A)]),
            Err(Error::UnknownLabel(_))
        ));
    }

    #[test]
    fn conjugation_matches_full_matrix() {
        let rho = DensityMatrix::from_pure(&schmidt(30.0));
        let out = rho.apply(&pauli_x(), &[QubitLabel::pol(Party::B)]).unwrap();
        let full = kron(&CMatrix::<f64>::identity(2, 2), &pauli_x());
        let expected = &full * rho.matrix() * full.adjoint();
        assert!(crate::quantum::linalg::max_abs(&(out.matrix() - expected)) < 1e-14);
    }

    #[test]
    fn validation_rejects_unphysical() {
        let reg = Register::new(vec![QubitLabel::pol(Party::A)]).unwrap();
        let bad = CMatrix::<f64>::from_diagonal(&nalgebra::DVector::from_vec(vec![c(1.5, 0.0), c(-0.5, 0.0)]));
        assert!(matches!(DensityMatrix::new(reg, bad), Err(Error::NotPhysical(_))));
    }
}
