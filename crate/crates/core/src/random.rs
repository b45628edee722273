//! Random states and unitaries for property tests and benchmarks.

use num_complex::Complex;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::quantum::linalg::CMatrix;
use crate::quantum::{DensityMatrix, PureState, Register};
use crate::scalar::{cr, modulus, Real};

fn gaussian<T: Real, R: Rng + ?Sized>(rng: &mut R) -> Complex<T> {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex::new(T::lit(re), T::lit(im))
}

/// Haar-random unitary (QR of a complex Ginibre matrix with phase fix).
pub fn random_unitary<T: Real, R: Rng + ?Sized>(dim: usize, rng: &mut R) -> CMatrix<T> {
    let g = CMatrix::<T>::from_fn(dim, dim, |_, _| gaussian(rng));
    let qr = g.qr();
    let (mut q, r) = qr.unpack();
    for j in 0..dim {
        let d = r[(j, j)];
        let m = modulus(d);
        if m > T::zero() {
            let phase = d / cr(m);
            for i in 0..dim {
                q[(i, j)] *= phase;
            }
        }
    }
    q
}

pub fn random_pure_state<T: Real, R: Rng + ?Sized>(register: Register, rng: &mut R) -> PureState<T> {
    let amps = (0..register.dim()).map(|_| gaussian(rng)).collect();
    PureState::normalized_from(register, amps).expect("gaussian vector is nonzero")
}

/// Random density matrix `G G^dag / tr` with `G` of shape `dim x rank`.
pub fn random_density<T: Real, R: Rng + ?Sized>(register: Register, rank: usize, rng: &mut R) -> DensityMatrix<T> {
    let dim = register.dim();
    let g = CMatrix::<T>::from_fn(dim, rank.max(1), |_, _| gaussian(rng));
    let m = &g * g.adjoint();
    let tr = crate::quantum::linalg::trace(&m).re;
    DensityMatrix::new_unchecked(register, m / cr(tr))
}
