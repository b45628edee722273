//! File formats for count tables and tomography results.

use std::io::Write;

use serde::Serialize;

use super::counts::CountRecord;
use super::tomography::{ReconstructionInfo, TomographyResult};
use crate::error::{Error, Result};

pub const COUNT_COLUMNS: [&str; 6] = ["setting_a", "setting_b", "trial_index", "counts", "duration_s", "seed"];

fn io_err(e: impl std::fmt::Display) -> Error {
    Error::InvalidArgument(format!("write failed: {e}"))
}

/// Writes one row per trial. Unsampled records produce a single row with
/// the expected (real-valued) counts at trial index 0.
pub fn write_counts_csv<W: Write>(records: &[CountRecord], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(COUNT_COLUMNS).map_err(io_err)?;
    for r in records {
        let a = r.setting_a.to_string();
        let b = r.setting_b.to_string();
        let duration = r.duration_s.to_string();
        let seed = r.seed.to_string();
        if r.trials.is_empty() {
            let counts = r.expected_counts().to_string();
            w.write_record([a.as_str(), &b, "0", &counts, &duration, &seed]).map_err(io_err)?;
        } else {
            for (i, n) in r.trials.iter().enumerate() {
                w.write_record([a.as_str(), &b, &i.to_string(), &n.to_string(), &duration, &seed])
                    .map_err(io_err)?;
            }
        }
    }
    w.flush().map_err(io_err)
}

#[derive(Debug, Clone, Serialize)]
pub struct TomographyDocument {
    pub real: Vec<Vec<f64>>,
    pub imag: Vec<Vec<f64>>,
    pub raw_real: Vec<Vec<f64>>,
    pub raw_imag: Vec<Vec<f64>>,
    pub fidelity: Option<f64>,
    pub method: ReconstructionInfo,
}

fn rows(m: &nalgebra::DMatrix<f64>) -> Vec<Vec<f64>> {
    m.row_iter().map(|r| r.iter().copied().collect()).collect()
}

impl From<&TomographyResult> for TomographyDocument {
    fn from(t: &TomographyResult) -> Self {
        Self {
            real: rows(&t.real_part()),
            imag: rows(&t.imag_part()),
            raw_real: rows(&t.raw_linear.map(|z| z.re)),
            raw_imag: rows(&t.raw_linear.map(|z| z.im)),
            fidelity: t.fidelity_to_target,
            method: t.info.clone(),
        }
    }
}

pub fn tomography_json(t: &TomographyResult) -> Result<String> {
    serde_json::to_string_pretty(&TomographyDocument::from(t)).map_err(io_err)
}
