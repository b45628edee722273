//! Entanglement and state-quality measures.
//!
//! Logarithms are base 2, so entanglement is reported in ebits. Eigenvalues
//! below `1e-12` are treated as zero before taking logarithms.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quantum::linalg::{hermitian_eigen, hermitian_eigenvalues, kron, map_hermitian, pauli_y, CMatrix};
use crate::quantum::{DensityMatrix, PureState, QubitLabel};
use crate::scalar::{cr, Real};

const EIGEN_FLOOR: f64 = 1e-12;
const PHYSICALITY_FLOOR: f64 = 1e-6;

/// Entanglement in ebits.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct Ebits<T>(pub T);

impl<T: Copy> Ebits<T> {
    pub fn value(self) -> T {
        self.0
    }
}

/// Fringe visibility `(c_max - c_min) / (c_max + c_min)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Visibility {
    pub value: f64,
    pub c_max: f64,
    pub c_min: f64,
}

/// `-p log2 p - (1-p) log2 (1-p)`.
pub fn binary_entropy<T: Real>(p: T) -> T {
    shannon_entropy(&[p, T::one() - p])
}

/// `-sum p log2 p` with `0 log 0 = 0`.
pub fn shannon_entropy<T: Real>(probs: &[T]) -> T {
    let floor = T::lit(EIGEN_FLOOR);
    probs.iter().fold(T::zero(), |acc, &p| {
        if p <= floor {
            acc
        } else {
            acc - p * p.log2()
        }
    })
}

pub fn von_neumann_entropy<T: Real>(rho: &CMatrix<T>) -> T {
    shannon_entropy(&hermitian_eigenvalues(rho))
}

/// Entropy of the reduced state on `partition`.
pub fn entropy_of_entanglement<T: Real>(psi: &PureState<T>, partition: &[QubitLabel]) -> Result<Ebits<T>> {
    psi.check_normalized()?;
    let rho = psi.reduced_density(partition)?;
    Ok(Ebits(von_neumann_entropy(&rho).max(T::zero())))
}

fn check_two_qubit<T: Real>(rho: &DensityMatrix<T>) -> Result<()> {
    if rho.register().len() != 2 {
        return Err(Error::Dimension {
            expected: 4,
            got: rho.register().dim(),
        });
    }
    let min = rho.eigenvalues().last().copied().unwrap_or_else(T::zero);
    if min < -T::lit(PHYSICALITY_FLOOR) {
        return Err(Error::NotPhysical(format!(
            "negative eigenvalue {:.3e}",
            min.to_f64_lossy()
        )));
    }
    Ok(())
}

/// Two-qubit concurrence.
///
/// With `rho = W W^dag` (columns of `W` are eigenvectors scaled by the root
/// of their eigenvalue), the `lambda_i` are the singular values of
/// `W^T (Y x Y) W`. This equals the usual spin-flip construction and keeps
/// full precision on pure and low-rank states.
pub fn concurrence<T: Real>(rho: &DensityMatrix<T>) -> Result<T> {
    check_two_qubit(rho)?;
    let yy = kron(&pauli_y::<T>(), &pauli_y::<T>());
    let (vals, vecs) = hermitian_eigen(rho.matrix());
    let floor = T::lit(EIGEN_FLOOR);
    let cols: Vec<_> = vals
        .iter()
        .enumerate()
        .filter(|(_, v)| **v > floor)
        .map(|(i, v)| vecs.column(i) * cr(v.sqrt()))
        .collect();
    if cols.is_empty() {
        return Ok(T::zero());
    }
    let w = CMatrix::from_columns(&cols);
    let tau = w.transpose() * yy * &w;
    let mut lambdas: Vec<T> = tau.singular_values().iter().copied().collect();
    lambdas.sort_by(|a, b| b.partial_cmp(a).expect("finite singular values"));
    lambdas.resize(4, T::zero());
    let c = lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3];
    Ok(c.max(T::zero()).min(T::one()))
}

pub fn tangle<T: Real>(rho: &DensityMatrix<T>) -> Result<T> {
    concurrence(rho).map(|c| c * c)
}

/// Closed-form two-qubit entanglement of formation.
pub fn entanglement_of_formation<T: Real>(rho: &DensityMatrix<T>) -> Result<Ebits<T>> {
    let c = concurrence(rho)?;
    let half = T::lit(0.5);
    let x = half + half * (T::one() - c * c).max(T::zero()).sqrt();
    Ok(Ebits(binary_entropy(x)))
}

/// `<target| rho |target>`.
pub fn fidelity_to_pure<T: Real>(rho: &DensityMatrix<T>, target: &PureState<T>) -> Result<T> {
    if rho.register().dim() != target.register().dim() {
        return Err(Error::Dimension {
            expected: rho.register().dim(),
            got: target.register().dim(),
        });
    }
    let v = target.amplitudes();
    let f = (v.adjoint() * rho.matrix() * v)[(0, 0)].re;
    Ok(f.max(T::zero()).min(T::one()))
}

pub fn purity<T: Real>(rho: &DensityMatrix<T>) -> T {
    rho.purity()
}

/// Uhlmann fidelity `(tr sqrt(sqrt(a) b sqrt(a)))^2` between two density
/// matrices of the same dimension.
pub fn state_fidelity<T: Real>(a: &DensityMatrix<T>, b: &DensityMatrix<T>) -> Result<T> {
    if a.register().dim() != b.register().dim() {
        return Err(Error::Dimension {
            expected: a.register().dim(),
            got: b.register().dim(),
        });
    }
    let root = a.sqrt_matrix();
    let inner = &root * b.matrix() * &root;
    let s = map_hermitian(&inner, |x| x.max(T::zero()).sqrt());
    let tr = crate::quantum::linalg::trace(&s).re;
    Ok((tr * tr).min(T::one()))
}

/// Visibility of a set of mean coincidence counts.
pub fn visibility_from_counts(counts: &[f64]) -> Result<Visibility> {
    if counts.len() < 2 {
        return Err(Error::InvalidArgument(
            "visibility needs at least two settings".into(),
        ));
    }
    if let Some(bad) = counts.iter().find(|c| !(**c >= 0.0) || !c.is_finite()) {
        return Err(Error::InvalidArgument(format!("invalid count {bad}")));
    }
    let c_max = counts.iter().copied().fold(f64::MIN, f64::max);
    let c_min = counts.iter().copied().fold(f64::MAX, f64::min);
    if c_max + c_min <= 0.0 {
        return Err(Error::UndefinedVisibility);
    }
    Ok(Visibility {
        value: (c_max - c_min) / (c_max + c_min),
        c_max,
        c_min,
    })
}

/// Visibility of a scan of count records, using each record's mean counts.
pub fn visibility(records: &[crate::lab::CountRecord]) -> Result<Visibility> {
    let means: Vec<f64> = records.iter().map(|r| r.mean_counts()).collect();
    visibility_from_counts(&means)
}
