//! Detection side: analyzers, coincidence statistics, tomography and
//! visibility scans.

pub mod analyzer;
pub mod counts;
pub mod io;
pub mod scan;
pub mod tomography;

pub use analyzer::{coincidence_probability, AnalyzerSetting, AnalyzerState};
pub use counts::{pair_rate_for_mean_counts, sample_counts, Acquisition, CountMode, CountRecord, SampleKey, Stream};
pub use scan::{visibility_scan, ScanPoint};
pub use tomography::{
    project_to_physical, tomography_acquire, tomography_reconstruct, tomography_settings, Reconstruction,
    ReconstructionInfo, TomographyResult,
};
