//! Dense complex matrix helpers.

use nalgebra::DMatrix;
use num_complex::Complex;

use crate::scalar::{c, modulus, Real};

pub type CMatrix<T> = DMatrix<Complex<T>>;

pub fn identity<T: Real>(dim: usize) -> CMatrix<T> {
    CMatrix::identity(dim, dim)
}

/// Builds a matrix from row-major `(re, im)` entries.
pub fn from_rows<T: Real>(dim: usize, entries: &[(f64, f64)]) -> CMatrix<T> {
    assert_eq!(entries.len(), dim * dim);
    CMatrix::from_fn(dim, dim, |r, col| {
        let (re, im) = entries[r * dim + col];
        c(re, im)
    })
}

pub fn pauli_x<T: Real>() -> CMatrix<T> {
    from_rows(2, &[(0., 0.), (1., 0.), (1., 0.), (0., 0.)])
}

pub fn pauli_y<T: Real>() -> CMatrix<T> {
    from_rows(2, &[(0., 0.), (0., -1.), (0., 1.), (0., 0.)])
}

pub fn pauli_z<T: Real>() -> CMatrix<T> {
    from_rows(2, &[(1., 0.), (0., 0.), (0., 0.), (-1., 0.)])
}

/// CNOT with the first qubit as control.
pub fn cnot<T: Real>() -> CMatrix<T> {
    let mut m = CMatrix::zeros(4, 4);
    for (from, to) in [(0, 0), (1, 1), (2, 3), (3, 2)] {
        m[(to, from)] = c(1.0, 0.0);
    }
    m
}

pub fn kron<T: Real>(a: &CMatrix<T>, b: &CMatrix<T>) -> CMatrix<T> {
    a.kronecker(b)
}

pub fn max_abs<T: Real>(m: &CMatrix<T>) -> T {
    m.iter().fold(T::zero(), |acc, z| acc.max(modulus(*z)))
}

pub fn unitarity_deviation<T: Real>(u: &CMatrix<T>) -> T {
    if !u.is_square() {
        return T::max_value().unwrap_or_else(T::one);
    }
    let d = u.adjoint() * u - identity::<T>(u.nrows());
    max_abs(&d)
}

pub fn hermiticity_deviation<T: Real>(m: &CMatrix<T>) -> T {
    max_abs(&(m - m.adjoint()))
}

/// Largest of the Hermiticity and idempotence residuals.
pub fn projector_deviation<T: Real>(p: &CMatrix<T>) -> T {
    if !p.is_square() {
        return T::max_value().unwrap_or_else(T::one);
    }
    let idem = max_abs(&(p * p - p));
    idem.max(hermiticity_deviation(p))
}

pub fn trace<T: Real>(m: &CMatrix<T>) -> Complex<T> {
    m.diagonal().iter().fold(Complex::new(T::zero(), T::zero()), |a, z| a + z)
}

/// Eigenvalues and eigenvectors (as columns) of a Hermitian matrix.
pub fn hermitian_eigen<T: Real>(m: &CMatrix<T>) -> (Vec<T>, CMatrix<T>) {
    let herm = (m + m.adjoint()) * Complex::new(T::lit(0.5), T::zero());
    let eig = herm.symmetric_eigen();
    (eig.eigenvalues.iter().copied().collect(), eig.eigenvectors)
}

pub fn hermitian_eigenvalues<T: Real>(m: &CMatrix<T>) -> Vec<T> {
    let mut vals = hermitian_eigen(m).0;
    vals.sort_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
    vals
}

/// `f(M)` for Hermitian `M`, applied through the spectral decomposition.
pub fn map_hermitian<T: Real>(m: &CMatrix<T>, f: impl Fn(T) -> T) -> CMatrix<T> {
    let (vals, vecs) = hermitian_eigen(m);
    let n = m.nrows();
    let mut scaled = vecs.clone();
    for (j, v) in vals.iter().enumerate() {
        let fv = Complex::new(f(*v), T::zero());
        for i in 0..n {
            scaled[(i, j)] *= fv;
        }
    }
    scaled * vecs.adjoint()
}

/// Whether `a = e^{i phi} b` for some phase, within `tol` entrywise.
pub fn equal_up_to_phase<T: Real>(a: &CMatrix<T>, b: &CMatrix<T>, tol: T) -> bool {
    if a.shape() != b.shape() {
        return false;
    }
    let inner = a.iter().zip(b.iter()).fold(Complex::new(T::zero(), T::zero()), |acc, (x, y)| {
        acc + y.conj() * x
    });
    if modulus(inner) <= T::zero() {
        return max_abs(a) <= tol && max_abs(b) <= tol;
    }
    let phase = inner / Complex::new(modulus(inner), T::zero());
    max_abs(&(a - b * phase)) <= tol
}

/// Applies `u` (dimension `2^shifts.len()`) to the qubits at the given bit
/// shifts of every amplitude block. The first shift is the most significant
/// qubit of `u`.
pub(crate) fn apply_kernel<T: Real>(amps: &mut [Complex<T>], shifts: &[usize], u: &CMatrix<T>) {
    let k = shifts.len();
    let sub = 1usize << k;
    debug_assert_eq!(u.nrows(), sub);
    let mask: usize = shifts.iter().map(|s| 1usize << s).sum();
    let offsets: Vec<usize> = (0..sub)
        .map(|j| {
            shifts
                .iter()
                .enumerate()
                .filter(|(m, _)| (j >> (k - 1 - m)) & 1 == 1)
                .map(|(_, s)| 1usize << s)
                .sum()
        })
        .collect();
    let zero = Complex::new(T::zero(), T::zero());
    let mut gathered = vec![zero; sub];
    for base in 0..amps.len() {
        if base & mask != 0 {
            continue;
        }
        for (g, off) in gathered.iter_mut().zip(&offsets) {
            *g = amps[base + off];
        }
        for (row, off) in offsets.iter().enumerate() {
            let mut acc = zero;
            for (col, g) in gathered.iter().enumerate() {
                acc += u[(row, col)] * g;
            }
            amps[base + off] = acc;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel_matches_kron_embedding() {
        // X on the middle qubit of three equals I (x) X (x) I.
        let mut amps: Vec<Complex<f64>> = (0..8).map(|i| c(i as f64, 0.5 * i as f64)).collect();
        let full = kron(&kron(&identity(2), &pauli_x()), &identity(2));
        let expected = &full * nalgebra::DVector::from_vec(amps.clone());
        apply_kernel(&mut amps, &[1], &pauli_x());
        for (a, b) in amps.iter().zip(expected.iter()) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn kernel_respects_target_order() {
        // CNOT with control on qubit 2 (shift 0) and target on qubit 0 (shift 2).
        let mut amps = vec![c::<f64>(0.0, 0.0); 8];
        amps[0b001] = c(1.0, 0.0);
        apply_kernel(&mut amps, &[0, 2], &cnot());
        assert!((amps[0b101].re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn map_hermitian_square_root() {
        let m: CMatrix<f64> = from_rows(2, &[(2., 0.), (1., 0.), (1., 0.), (2., 0.)]);
        let s = map_hermitian(&m, |x| x.sqrt());
        assert!(max_abs(&(&s * &s - &m)) < 1e-12);
    }

    #[test]
    fn phase_equality() {
        let x: CMatrix<f64> = pauli_x();
        let ix = &x * c::<f64>(0.0, 1.0);
        assert!(equal_up_to_phase(&x, &ix, 1e-12));
        assert!(!equal_up_to_phase(&x, &pauli_z(), 1e-6));
    }
}
