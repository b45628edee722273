//! Two-qubit polarization tomography from the 16 analyzer pairs
//! `{H, V, D, R} x {H, V, D, R}`.
//!
//! Linear inversion expands the state in the Pauli basis. The physical
//! estimate is the trace-one PSD matrix closest to the raw one in Frobenius
//! norm, obtained by projecting the eigenvalues onto the probability simplex.

use nalgebra::{DMatrix, Matrix4};
use serde::{Deserialize, Serialize};

use super::analyzer::{coincidence_probability, AnalyzerState, TOMOGRAPHY_BASIS};
use super::counts::{sample_counts, Acquisition, CountRecord, SampleKey, Stream};
use crate::error::{Error, Result};
use crate::measures::fidelity_to_pure;
use crate::quantum::linalg::{hermitian_eigen, identity, kron, max_abs, pauli_x, pauli_y, pauli_z};
use crate::quantum::{CMatrix, DensityMatrix, PureState, Register};
use crate::scalar::cr;

pub const ML_MAX_ITERATIONS: usize = 1000;
pub const ML_TOLERANCE: f64 = 1e-10;

/// Reconstruction method.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Reconstruction {
    /// Linear inversion followed by eigenvalue clipping.
    #[default]
    LinearInversion,
    /// Linear inversion as a seed, refined by iterative maximum likelihood.
    MaximumLikelihood,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReconstructionInfo {
    pub method: Reconstruction,
    /// Norm in which the physical estimate is closest to the raw one.
    pub projection_norm: String,
    /// Total negative eigenvalue weight of the raw estimate.
    pub negative_weight: f64,
    pub ml_iterations: Option<usize>,
    pub ml_converged: Option<bool>,
}

#[derive(Debug, Clone)]
pub struct TomographyResult {
    /// Linear-inversion estimate, possibly with negative eigenvalues.
    pub raw_linear: CMatrix<f64>,
    pub physical: DensityMatrix<f64>,
    pub fidelity_to_target: Option<f64>,
    pub info: ReconstructionInfo,
}

/// The 16 analyzer pairs in acquisition order (A-major).
pub fn tomography_settings() -> Vec<(AnalyzerState, AnalyzerState)> {
    TOMOGRAPHY_BASIS
        .iter()
        .flat_map(|a| TOMOGRAPHY_BASIS.iter().map(move |b| (*a, *b)))
        .collect()
}

/// One count record per tomography setting, in [`tomography_settings`] order.
pub fn tomography_acquire(state: &DensityMatrix<f64>, acq: &Acquisition) -> Result<Vec<CountRecord>> {
    tomography_settings()
        .into_iter()
        .enumerate()
        .map(|(i, (a, b))| {
            let p = coincidence_probability(state, &a, &b)?;
            sample_counts(p, acq, a, b, SampleKey::new(Stream::Tomography, i as u32))
        })
        .collect()
}

fn basis_index(s: &AnalyzerState) -> Option<usize> {
    TOMOGRAPHY_BASIS.iter().position(|b| b == s)
}

/// Mean counts arranged as a 4x4 table indexed by the basis order.
fn count_table(records: &[CountRecord]) -> Result<Matrix4<f64>> {
    let mut table = Matrix4::zeros();
    let mut seen = [[false; 4]; 4];
    for r in records {
        let (Some(i), Some(j)) = (basis_index(&r.setting_a), basis_index(&r.setting_b)) else {
            return Err(Error::IncompleteTomography(format!(
                "unexpected setting ({}, {})",
                r.setting_a, r.setting_b
            )));
        };
        if seen[i][j] {
            return Err(Error::IncompleteTomography(format!(
                "duplicate setting ({}, {})",
                r.setting_a, r.setting_b
            )));
        }
        let m = r.mean_counts();
        if !(m >= 0.0 && m.is_finite()) {
            return Err(Error::IncompleteTomography(format!("invalid counts {m}")));
        }
        seen[i][j] = true;
        table[(i, j)] = m;
    }
    let missing: Vec<String> = tomography_settings()
        .iter()
        .filter(|(a, b)| !seen[basis_index(a).unwrap()][basis_index(b).unwrap()])
        .map(|(a, b)| format!("({a}, {b})"))
        .collect();
    if !missing.is_empty() {
        return Err(Error::IncompleteTomography(format!("missing {}", missing.join(" "))));
    }
    Ok(table)
}

fn paulis() -> [CMatrix<f64>; 4] {
    [identity(2), pauli_x(), pauli_y(), pauli_z()]
}

/// Stokes-like coefficients `tr(|s><s| sigma_j)` of each basis state.
fn analyzer_matrix() -> Matrix4<f64> {
    Matrix4::new(
        1.0, 0.0, 0.0, 1.0, //
        1.0, 0.0, 0.0, -1.0, //
        1.0, 1.0, 0.0, 0.0, //
        1.0, 0.0, -1.0, 0.0,
    )
}

fn linear_inversion(table: &Matrix4<f64>) -> Result<CMatrix<f64>> {
    let n = table[(0, 0)] + table[(0, 1)] + table[(1, 0)] + table[(1, 1)];
    if n <= 0.0 {
        return Err(Error::IncompleteTomography("no counts in the H/V settings".into()));
    }
    let p = table / n;
    let m_inv = analyzer_matrix().try_inverse().expect("analyzer matrix is invertible");
    let r = m_inv * p * m_inv.transpose() * 4.0;
    let s = paulis();
    let mut rho = CMatrix::zeros(4, 4);
    for i in 0..4 {
        for j in 0..4 {
            rho += kron(&s[i], &s[j]) * cr(r[(i, j)] / 4.0);
        }
    }
    Ok(rho)
}

/// Euclidean projection of `v` onto the probability simplex.
fn simplex_projection(v: &[f64]) -> Vec<f64> {
    let mut sorted = v.to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    let mut cum = 0.0;
    let mut mu = 0.0;
    for (i, x) in sorted.iter().enumerate() {
        cum += x;
        let t = (cum - 1.0) / (i + 1) as f64;
        if x - t > 0.0 {
            mu = t;
        }
    }
    v.iter().map(|x| (x - mu).max(0.0)).collect()
}

/// Closest trace-one PSD matrix in Frobenius norm, with the negative
/// eigenvalue weight of the input.
pub fn project_to_physical(raw: &CMatrix<f64>) -> (CMatrix<f64>, f64) {
    let (vals, vecs) = hermitian_eigen(raw);
    let negative = vals.iter().filter(|x| **x < 0.0).map(|x| -x).sum();
    let clipped = simplex_projection(&vals);
    let mut out = CMatrix::zeros(raw.nrows(), raw.ncols());
    for (k, lam) in clipped.iter().enumerate() {
        if *lam > 0.0 {
            let v = vecs.column(k);
            out += v * v.adjoint() * cr(*lam);
        }
    }
    (out, negative)
}

fn setting_projector(a: &AnalyzerState, b: &AnalyzerState) -> CMatrix<f64> {
    let va = a.vector::<f64>();
    let vb = b.vector::<f64>();
    let v = nalgebra::DVector::from_iterator(4, va.iter().flat_map(|x| vb.iter().map(move |y| x * y)));
    &v * v.adjoint()
}

/// Diluted iterative maximum likelihood for a non-POVM measurement set.
fn maximum_likelihood(table: &Matrix4<f64>, seed: &CMatrix<f64>) -> (CMatrix<f64>, usize, bool) {
    let settings = tomography_settings();
    let projectors: Vec<CMatrix<f64>> = settings.iter().map(|(a, b)| setting_projector(a, b)).collect();
    let counts: Vec<f64> = settings
        .iter()
        .map(|(a, b)| table[(basis_index(a).unwrap(), basis_index(b).unwrap())])
        .collect();
    let total: f64 = counts.iter().sum();
    let h = projectors.iter().fold(CMatrix::zeros(4, 4), |acc, p| acc + p);
    let h_inv = h.try_inverse().expect("tomography projectors span the space");
    let id = identity::<f64>(4);
    let dilution = 0.5;

    let mut rho = seed * cr(0.99) + &id * cr(0.01 / 4.0);
    for it in 1..=ML_MAX_ITERATIONS {
        let probs: Vec<f64> = projectors.iter().map(|p| (&rho * p).trace().re.max(1e-300)).collect();
        let scale = total / probs.iter().sum::<f64>();
        let r = projectors
            .iter()
            .zip(counts.iter().zip(&probs))
            .fold(CMatrix::zeros(4, 4), |acc, (p, (n, q))| acc + p * cr(n / (q * scale)));
        let g = &id * cr(1.0 - dilution) + &h_inv * r * cr(dilution);
        let mut next = &g * &rho * g.adjoint();
        let tr = next.trace().re;
        next /= cr(tr);
        next = (&next + next.adjoint()) * cr(0.5);
        let delta = max_abs(&(&next - &rho));
        rho = next;
        if delta < ML_TOLERANCE {
            return (rho, it, true);
        }
    }
    (rho, ML_MAX_ITERATIONS, false)
}

/// Reconstructs the polarization state from a complete set of 16 records.
/// Counts are normalized by the H/V block total, so absolute rates cancel.
pub fn tomography_reconstruct(
    records: &[CountRecord],
    method: Reconstruction,
    target: Option<&PureState<f64>>,
) -> Result<TomographyResult> {
    let table = count_table(records)?;
    if table.iter().all(|x| *x == 0.0) {
        return Err(Error::IncompleteTomography("all-zero data".into()));
    }
    let raw = linear_inversion(&table)?;
    let (clipped, negative_weight) = project_to_physical(&raw);
    let (estimate, ml_iterations, ml_converged) = match method {
        Reconstruction::LinearInversion => (clipped, None, None),
        Reconstruction::MaximumLikelihood => {
            let (rho, it, ok) = maximum_likelihood(&table, &clipped);
            (rho, Some(it), Some(ok))
        }
    };
    let physical = DensityMatrix::new(Register::polarization_pair(), estimate)?;
    let fidelity_to_target = target.map(|t| fidelity_to_pure(&physical, t)).transpose()?;
    Ok(TomographyResult {
        raw_linear: raw,
        physical,
        fidelity_to_target,
        info: ReconstructionInfo {
            method,
            projection_norm: "frobenius".into(),
            negative_weight,
            ml_iterations,
            ml_converged,
        },
    })
}

impl TomographyResult {
    pub fn real_part(&self) -> DMatrix<f64> {
        self.physical.matrix().map(|z| z.re)
    }

    pub fn imag_part(&self) -> DMatrix<f64> {
        self.physical.matrix().map(|z| z.im)
    }
}
