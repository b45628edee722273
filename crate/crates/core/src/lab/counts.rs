//! Coincidence count records and Poisson sampling.
//!
//! Every `(stream, setting index, trial index)` draws from its own ChaCha
//! stream keyed by the master seed, so records do not depend on the order
//! in which settings or trials are evaluated.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};
use serde::{Deserialize, Serialize};

use super::analyzer::AnalyzerState;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CountMode {
    /// Poisson-distributed counts per trial.
    Poisson,
    /// No sampling; the record carries only the expected rate.
    Expected,
}

/// How counts are acquired for every setting.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Acquisition {
    /// Input pair rate in pairs per second.
    pub pair_rate: f64,
    pub trials: usize,
    pub duration_s: f64,
    pub seed: u64,
    pub mode: CountMode,
}

impl Default for Acquisition {
    fn default() -> Self {
        Self {
            pair_rate: 10_000.0,
            trials: 60,
            duration_s: 1.0,
            seed: 0,
            mode: CountMode::Poisson,
        }
    }
}

impl Acquisition {
    pub fn expected(pair_rate: f64) -> Self {
        Self {
            pair_rate,
            mode: CountMode::Expected,
            ..Self::default()
        }
    }

    pub fn poisson(pair_rate: f64, seed: u64) -> Self {
        Self {
            pair_rate,
            seed,
            ..Self::default()
        }
    }
}

/// Operation family a sample belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Stream {
    Generic,
    Characterize,
    Distill,
    Tomography,
    Visibility,
}

impl Stream {
    fn id(self) -> u64 {
        match self {
            Stream::Generic => 0,
            Stream::Characterize => 1,
            Stream::Distill => 2,
            Stream::Tomography => 3,
            Stream::Visibility => 4,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleKey {
    pub stream: Stream,
    pub setting_index: u32,
}

impl SampleKey {
    pub fn new(stream: Stream, setting_index: u32) -> Self {
        Self { stream, setting_index }
    }
}

/// Coincidence statistics of one analyzer pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CountRecord {
    pub setting_a: AnalyzerState,
    pub setting_b: AnalyzerState,
    /// Expected coincidence rate in counts per second.
    pub expected_rate: f64,
    /// Counts of every trial; empty in [`CountMode::Expected`].
    pub trials: Vec<u64>,
    pub duration_s: f64,
    pub seed: u64,
}

impl CountRecord {
    pub fn expected_counts(&self) -> f64 {
        self.expected_rate * self.duration_s
    }

    /// Mean counts per trial, or the expected counts when not sampled.
    pub fn mean_counts(&self) -> f64 {
        if self.trials.is_empty() {
            self.expected_counts()
        } else {
            self.total_counts() / self.trials.len() as f64
        }
    }

    pub fn total_counts(&self) -> f64 {
        self.trials.iter().map(|&n| n as f64).sum()
    }

    /// Poisson standard error of the mean counts.
    pub fn mean_sigma(&self) -> f64 {
        if self.trials.is_empty() {
            0.0
        } else {
            self.total_counts().sqrt() / self.trials.len() as f64
        }
    }

    pub fn mean_rate(&self) -> f64 {
        self.mean_counts() / self.duration_s
    }
}

/// Pair rate at which the settings with the given probabilities average
/// `mean_counts` expected counts per trial.
pub fn pair_rate_for_mean_counts(probabilities: &[f64], mean_counts: f64, duration_s: f64) -> Result<f64> {
    let total: f64 = probabilities.iter().sum();
    if probabilities.is_empty() || !(total > 0.0) {
        return Err(Error::InvalidArgument("no detectable settings".into()));
    }
    Ok(mean_counts * probabilities.len() as f64 / (total * duration_s))
}

fn substream(seed: u64, key: SampleKey, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream((key.stream.id() << 56) | ((key.setting_index as u64) << 32) | trial as u64);
    rng
}

/// Samples `acq.trials` trials with mean `p * pair_rate * duration` each.
pub fn sample_counts(
    p: f64,
    acq: &Acquisition,
    setting_a: AnalyzerState,
    setting_b: AnalyzerState,
    key: SampleKey,
) -> Result<CountRecord> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::OutOfRange {
            name: "probability",
            value: p,
            min: 0.0,
            max: 1.0,
        });
    }
    if !(acq.pair_rate >= 0.0 && acq.pair_rate.is_finite()) {
        return Err(Error::InvalidArgument(format!("pair rate {}", acq.pair_rate)));
    }
    if !(acq.duration_s > 0.0 && acq.duration_s.is_finite()) {
        return Err(Error::InvalidArgument(format!("duration {}", acq.duration_s)));
    }
    let expected_rate = p * acq.pair_rate;
    let mean = expected_rate * acq.duration_s;
    let trials = match acq.mode {
        CountMode::Expected => Vec::new(),
        CountMode::Poisson if mean <= 0.0 => vec![0; acq.trials],
        CountMode::Poisson => {
            let dist = Poisson::new(mean).map_err(|e| Error::InvalidArgument(e.to_string()))?;
            (0..acq.trials)
                .map(|t| dist.sample(&mut substream(acq.seed, key, t)) as u64)
                .collect()
        }
    };
    Ok(CountRecord {
        setting_a,
        setting_b,
        expected_rate,
        trials,
        duration_s: acq.duration_s,
        seed: acq.seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use AnalyzerState::*;

    const KEY: SampleKey = SampleKey {
        stream: Stream::Generic,
        setting_index: 0,
    };

    #[test]
    fn zero_probability_gives_zero_counts() {
        let r = sample_counts(0.0, &Acquisition::poisson(1000.0, 1), H, H, KEY).unwrap();
        assert_eq!(r.trials, vec![0; 60]);
    }

    #[test]
    fn mean_within_five_sigma() {
        let r = sample_counts(1.0, &Acquisition::poisson(1000.0, 7), H, H, KEY).unwrap();
        let sigma = (1000.0f64 / 60.0).sqrt();
        assert!((r.mean_counts() - 1000.0).abs() < 5.0 * sigma, "{}", r.mean_counts());
    }

    #[test]
    fn deterministic_for_seed() {
        let acq = Acquisition::poisson(500.0, 42);
        let a = sample_counts(0.3, &acq, H, V, KEY).unwrap();
        let b = sample_counts(0.3, &acq, H, V, KEY).unwrap();
        assert_eq!(a, b);
        let other = sample_counts(0.3, &acq, H, V, SampleKey::new(Stream::Generic, 1)).unwrap();
        assert_ne!(a.trials, other.trials);
    }

    #[test]
    fn expected_mode_has_no_trials() {
        let r = sample_counts(0.25, &Acquisition::expected(1000.0), H, H, KEY).unwrap();
        assert!(r.trials.is_empty());
        assert_eq!(r.mean_counts(), 250.0);
    }

    #[test]
    fn rejects_bad_probability() {
        assert!(sample_counts(1.5, &Acquisition::default(), H, H, KEY).is_err());
    }
}
