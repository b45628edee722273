//! Diagonal-basis visibility scans.

use serde::{Deserialize, Serialize};

use super::analyzer::{coincidence_probability, AnalyzerState};
use super::counts::{sample_counts, Acquisition, CountRecord, SampleKey, Stream};
use crate::error::{Error, Result};
use crate::measures::{visibility, Visibility};
use crate::quantum::DensityMatrix;

pub const DEFAULT_SCAN_POINTS: usize = 16;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanPoint {
    /// Bob's HWP angle in degrees.
    pub hwp_deg: f64,
    pub probability: f64,
    pub record: CountRecord,
}

/// Fixes Alice's analyzer at +45 deg and steps Bob's HWP uniformly over
/// `[0, 90)` deg, one full fringe period.
pub fn visibility_scan(
    state: &DensityMatrix<f64>,
    points: usize,
    acq: &Acquisition,
) -> Result<(Vec<ScanPoint>, Visibility)> {
    if points < 4 {
        return Err(Error::InvalidArgument(format!("scan needs at least 4 points, got {points}")));
    }
    let a = AnalyzerState::D;
    let curve = (0..points)
        .map(|i| {
            let hwp_deg = i as f64 * 90.0 / points as f64;
            let b = AnalyzerState::Hwp(hwp_deg);
            let probability = coincidence_probability(state, &a, &b)?;
            let record = sample_counts(probability, acq, a, b, SampleKey::new(Stream::Visibility, i as u32))?;
            Ok(ScanPoint {
                hwp_deg,
                probability,
                record,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let records: Vec<CountRecord> = curve.iter().map(|p| p.record.clone()).collect();
    let v = visibility(&records)?;
    Ok((curve, v))
}
