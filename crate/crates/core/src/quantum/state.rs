//! Pure states on a labeled qubit register.

use nalgebra::DVector;
use num_complex::Complex;

use super::linalg::{apply_kernel, projector_deviation, unitarity_deviation, CMatrix};
use super::register::{QubitLabel, Register};
use crate::error::{Error, Result};
use crate::scalar::{cr, Real};

#[derive(Debug, Clone, PartialEq)]
pub struct PureState<T: Real> {
    register: Register,
    amplitudes: DVector<Complex<T>>,
}

/// An orthogonal projector acting on a subset of a register.
#[derive(Debug, Clone, PartialEq)]
pub struct Projector<T: Real> {
    matrix: CMatrix<T>,
    targets: Vec<QubitLabel>,
}

/// Result of a projective measurement. `state` is `None` when the
/// outcome has zero probability.
#[derive(Debug, Clone, PartialEq)]
pub struct Projection<T: Real> {
    pub state: Option<PureState<T>>,
    pub probability: T,
}

impl<T: Real> PureState<T> {
    /// Wraps raw amplitudes. No normalization is applied.
    pub fn new(register: Register, amplitudes: Vec<Complex<T>>) -> Result<Self> {
        if amplitudes.len() != register.dim() {
            return Err(Error::Dimension {
                expected: register.dim(),
                got: amplitudes.len(),
            });
        }
        Ok(Self {
            register,
            amplitudes: DVector::from_vec(amplitudes),
        })
    }

    /// Wraps amplitudes and rescales them to unit norm.
    pub fn normalized_from(register: Register, amplitudes: Vec<Complex<T>>) -> Result<Self> {
        Self::new(register, amplitudes)?.normalize()
    }

    pub fn basis(register: Register, index: usize) -> Result<Self> {
        let dim = register.dim();
        if index >= dim {
            return Err(Error::Dimension { expected: dim, got: index });
        }
        let mut amps = vec![Complex::new(T::zero(), T::zero()); dim];
        amps[index] = cr(T::one());
        Self::new(register, amps)
    }

    pub fn register(&self) -> &Register {
        &self.register
    }

    pub fn amplitudes(&self) -> &DVector<Complex<T>> {
        &self.amplitudes
    }

    pub fn amplitude(&self, index: usize) -> Complex<T> {
        self.amplitudes[index]
    }

    /// Amplitude of the basis state given as one bit per register label.
    pub fn amplitude_of(&self, bits: &[u8]) -> Complex<T> {
        let index = bits.iter().fold(0usize, |acc, b| (acc << 1) | (*b as usize & 1));
        self.amplitudes[index]
    }

    pub fn norm_sqr(&self) -> T {
        self.amplitudes.iter().fold(T::zero(), |acc, z| acc + z.norm_sqr())
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm_sqr() - T::one()).abs() <= T::tol()
    }

    pub fn check_normalized(&self) -> Result<()> {
        if self.is_normalized() {
            Ok(())
        } else {
            Err(Error::NotNormalized {
                norm_sqr: self.norm_sqr().to_f64_lossy(),
            })
        }
    }

    pub fn normalize(mut self) -> Result<Self> {
        let n = self.norm_sqr().sqrt();
        if n <= T::zero() {
            return Err(Error::ZeroNorm);
        }
        self.amplitudes.unscale_mut(n);
        Ok(self)
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &Self) -> Result<Complex<T>> {
        if self.register != other.register {
            return Err(Error::RegisterShape {
                expected: self.register.to_string(),
                got: other.register.to_string(),
            });
        }
        Ok(self.amplitudes.dotc(&other.amplitudes))
    }

    /// `|<self|other>|^2`.
    pub fn overlap(&self, other: &Self) -> Result<T> {
        Ok(self.inner(other)?.norm_sqr())
    }

    /// Equality of rays: `|<a|b>|^2 >= 1 - tol`. Global phase is ignored.
    pub fn same_ray(&self, other: &Self) -> bool {
        self.overlap(other).is_ok_and(|o| o >= T::one() - T::tol())
    }

    /// Kronecker product, reordered into canonical register order.
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        let mut labels = self.register.labels().to_vec();
        labels.extend_from_slice(other.register.labels());
        let joint = Register::new(labels)?;
        let amps = self.amplitudes.kronecker(&other.amplitudes);
        let state = Self {
            register: joint,
            amplitudes: amps,
        };
        state.into_canonical().normalize()
    }

    /// Permutes the amplitudes into the canonical label order.
    pub fn into_canonical(self) -> Self {
        if self.register.is_canonical() {
            return self;
        }
        let target = self.register.canonical();
        self.reordered(target)
            .expect("canonical register is a permutation of the original")
    }

    /// Permutes the amplitudes so the labels appear in `order`.
    pub fn reordered(&self, order: Register) -> Result<Self> {
        if order.len() != self.register.len() {
            return Err(Error::RegisterShape {
                expected: self.register.to_string(),
                got: order.to_string(),
            });
        }
        let n = order.len();
        let src_shifts: Vec<usize> = order
            .labels()
            .iter()
            .map(|l| self.register.position(*l).map(|p| self.register.shift(p)))
            .collect::<Result<_>>()?;
        let dim = order.dim();
        let mut amps = vec![Complex::new(T::zero(), T::zero()); dim];
        for (new_index, amp) in amps.iter_mut().enumerate() {
            let mut old_index = 0usize;
            for (pos, s) in src_shifts.iter().enumerate() {
                if (new_index >> (n - 1 - pos)) & 1 == 1 {
                    old_index |= 1 << s;
                }
            }
            *amp = self.amplitudes[old_index];
        }
        Self::new(order, amps)
    }

    /// Applies a unitary to the listed qubits (first target is the most
    /// significant qubit of `u`).
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
        self.apply_unchecked(u, targets)
    }

    pub(crate) fn apply_unchecked(&self, m: &CMatrix<T>, targets: &[QubitLabel]) -> Result<Self> {
        let shifts: Vec<usize> = self
            .register
            .positions(targets)?
            .into_iter()
            .map(|p| self.register.shift(p))
            .collect();
        let mut out = self.clone();
        apply_kernel(out.amplitudes.as_mut_slice(), &shifts, m);
        Ok(out)
    }

    /// Born-rule projection. The returned state is renormalized.
    pub fn project(&self, p: &Projector<T>) -> Result<Projection<T>> {
        let raw = self.apply_unchecked(p.matrix(), p.targets())?;
        let probability = raw.norm_sqr().min(T::one());
        let state = if probability > T::zero() {
            Some(raw.normalize()?)
        } else {
            None
        };
        Ok(Projection { state, probability })
    }

    /// Reduced density matrix on `keep`, computed as `Psi Psi^dag` with
    /// `Psi` the amplitudes reshaped to (kept, traced).
    pub fn reduced_density(&self, keep: &[QubitLabel]) -> Result<CMatrix<T>> {
        let (keep_offsets, trace_offsets) = split_offsets(&self.register, keep)?;
        let psi = CMatrix::from_fn(keep_offsets.len(), trace_offsets.len(), |r, c| {
            self.amplitudes[keep_offsets[r] + trace_offsets[c]]
        });
        Ok(&psi * psi.adjoint())
    }
}

impl<T: Real> Projector<T> {
    pub fn new(matrix: CMatrix<T>, targets: Vec<QubitLabel>) -> Result<Self> {
        let dim = 1usize << targets.len();
        if matrix.nrows() != dim || matrix.ncols() != dim {
            return Err(Error::Dimension {
                expected: dim,
                got: matrix.nrows(),
            });
        }
        Register::new(targets.clone())?;
        let dev = projector_deviation(&matrix);
        if dev > T::tol() {
            return Err(Error::NotProjector {
                deviation: dev.to_f64_lossy(),
            });
        }
        Ok(Self { matrix, targets })
    }

    /// Projector onto the span of computational basis states over `targets`.
    pub fn onto_basis_states(indices: &[usize], targets: Vec<QubitLabel>) -> Result<Self> {
        let dim = 1usize << targets.len();
        let mut m = CMatrix::zeros(dim, dim);
        for &i in indices {
            if i >= dim {
                return Err(Error::Dimension { expected: dim, got: i });
            }
            m[(i, i)] = cr(T::one());
        }
        Self::new(m, targets)
    }

    pub fn matrix(&self) -> &CMatrix<T> {
        &self.matrix
    }

    pub fn targets(&self) -> &[QubitLabel] {
        &self.targets
    }

    pub fn rank(&self) -> usize {
        let tr = super::linalg::trace(&self.matrix).re;
        tr.round().to_usize().unwrap_or(0)
    }
}

/// Index offsets of the kept and traced subsystems. A full basis index is
/// `keep[r] + traced[t]`.
pub(crate) fn split_offsets(register: &Register, keep: &[QubitLabel]) -> Result<(Vec<usize>, Vec<usize>)> {
    if keep.is_empty() || keep.len() >= register.len() {
        return Err(Error::ImproperSubset);
    }
    let keep_pos = register.positions(keep)?;
    let traced_pos: Vec<usize> = (0..register.len()).filter(|p| !keep_pos.contains(p)).collect();
    let offsets = |positions: &[usize]| -> Vec<usize> {
        let k = positions.len();
        (0..1usize << k)
            .map(|j| {
                positions
                    .iter()
                    .enumerate()
                    .filter(|(m, _)| (j >> (k - 1 - m)) & 1 == 1)
                    .map(|(_, p)| 1usize << register.shift(*p))
                    .sum()
            })
            .collect()
    };
    Ok((offsets(&keep_pos), offsets(&traced_pos)))
}
