//! Experiment configuration and exhaustive validation.

use std::fmt;
use std::path::PathBuf;

use serde::Serialize;
use serde_json::{Map, Value};

use schmidt_distill::schmidt::MAX_PAIRS;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scenario {
    CharacterizeInput,
    Distill,
    Tomography,
    Visibility,
    EfficiencyCurve,
    NPair,
}

impl Scenario {
    pub const ALL: [Scenario; 6] = [
        Scenario::CharacterizeInput,
        Scenario::Distill,
        Scenario::Tomography,
        Scenario::Visibility,
        Scenario::EfficiencyCurve,
        Scenario::NPair,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Scenario::CharacterizeInput => "characterize-input",
            Scenario::Distill => "distill",
            Scenario::Tomography => "tomography",
            Scenario::Visibility => "visibility",
            Scenario::EfficiencyCurve => "efficiency-curve",
            Scenario::NPair => "n-pair",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|x| x.name() == s)
    }

    fn needs_angles(self) -> bool {
        matches!(self, Scenario::Distill | Scenario::Tomography | Scenario::Visibility)
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub scenario: Scenario,
    /// Degrees.
    pub theta_p: Option<f64>,
    /// Degrees.
    pub theta_m: Option<f64>,
    /// Radians.
    pub phi: f64,
    pub gate_coherence: f64,
    /// Pairs per second.
    pub pair_rate: f64,
    pub trials: usize,
    pub duration_s: f64,
    pub seed: u64,
    pub n: usize,
    #[serde(skip)]
    pub output_dir: PathBuf,
    /// Visibility scan points.
    pub points: usize,
    /// Refine tomography by iterative maximum likelihood.
    pub ml_refinement: bool,
}

impl ExperimentConfig {
    pub fn new(scenario: Scenario) -> Self {
        Self {
            scenario,
            theta_p: None,
            theta_m: None,
            phi: 0.0,
            gate_coherence: 1.0,
            pair_rate: 10_000.0,
            trials: 60,
            duration_s: 1.0,
            seed: 0,
            n: 2,
            output_dir: PathBuf::from("output"),
            points: 16,
            ml_refinement: false,
        }
    }

    pub fn with_angles(mut self, theta_p: f64, theta_m: f64) -> Self {
        self.theta_p = Some(theta_p);
        self.theta_m = Some(theta_m);
        self
    }
}

/// One violated constraint.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub field: String,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.field, self.message)
    }
}

const KEYS: [&str; 13] = [
    "scenario",
    "theta_p",
    "theta_m",
    "phi",
    "gate_coherence",
    "pair_rate",
    "trials",
    "duration_s",
    "seed",
    "n",
    "output_dir",
    "points",
    "ml_refinement",
];

struct Checker<'a> {
    obj: &'a Map<String, Value>,
    violations: Vec<Violation>,
}

impl Checker<'_> {
    fn fail(&mut self, field: &str, message: impl Into<String>) {
        self.violations.push(Violation {
            field: field.to_string(),
            message: message.into(),
        });
    }

    fn number(&mut self, key: &str, min: f64, max: f64) -> Option<f64> {
        let v = self.obj.get(key)?;
        match v.as_f64() {
            Some(x) if x.is_finite() && (min..=max).contains(&x) => Some(x),
            Some(x) => {
                self.fail(key, format!("{x} is out of range [{min}, {max}]"));
                None
            }
            None => {
                self.fail(key, format!("expected a number, got {v}"));
                None
            }
        }
    }

    fn positive(&mut self, key: &str) -> Option<f64> {
        let v = self.obj.get(key)?;
        match v.as_f64() {
            Some(x) if x.is_finite() && x > 0.0 => Some(x),
            _ => {
                self.fail(key, format!("expected a positive finite number, got {v}"));
                None
            }
        }
    }

    fn integer(&mut self, key: &str, min: u64, max: u64) -> Option<u64> {
        let v = self.obj.get(key)?;
        match v.as_u64() {
            Some(x) if (min..=max).contains(&x) => Some(x),
            Some(x) => {
                self.fail(key, format!("{x} is out of range [{min}, {max}]"));
                None
            }
            None => {
                self.fail(key, format!("expected a non-negative integer, got {v}"));
                None
            }
        }
    }
}

fn suggestion(key: &str) -> String {
    let lower = key.to_ascii_lowercase();
    if lower.contains("temp") {
        "unknown key; crystal temperature is not modeled, set theta_m directly".into()
    } else if lower == "theta" {
        "unknown key; use theta_p and theta_m".into()
    } else {
        format!("unknown key; expected one of {}", KEYS.join(", "))
    }
}

/// Validates a parsed JSON document, reporting every violation at once.
pub fn validate_value(value: &Value) -> Result<ExperimentConfig, Vec<Violation>> {
    let Some(obj) = value.as_object() else {
        return Err(vec![Violation {
            field: "<root>".into(),
            message: "expected a JSON object".into(),
        }]);
    };
    let mut ck = Checker {
        obj,
        violations: Vec::new(),
    };
    for key in obj.keys() {
        if !KEYS.contains(&key.as_str()) {
            ck.fail(key, suggestion(key));
        }
    }

    let scenario = match obj.get("scenario") {
        None => {
            ck.fail("scenario", "missing");
            None
        }
        Some(v) => match v.as_str().and_then(Scenario::parse) {
            Some(s) => Some(s),
            None => {
                let names: Vec<_> = Scenario::ALL.iter().map(|s| s.name()).collect();
                ck.fail("scenario", format!("{v} is not one of {}", names.join(", ")));
                None
            }
        },
    };
    let mut cfg = ExperimentConfig::new(scenario.unwrap_or(Scenario::Distill));

    cfg.theta_p = ck.number("theta_p", 0.0, 90.0);
    cfg.theta_m = ck.number("theta_m", 0.0, 90.0);
    if let Some(x) = ck.number("phi", f64::MIN, f64::MAX) {
        cfg.phi = x;
    }
    if let Some(x) = ck.number("gate_coherence", 0.0, 1.0) {
        cfg.gate_coherence = x;
    }
    if let Some(x) = ck.number("pair_rate", 0.0, f64::MAX) {
        cfg.pair_rate = x;
    }
    if let Some(x) = ck.integer("trials", 1, 1_000_000) {
        cfg.trials = x as usize;
    }
    if let Some(x) = ck.positive("duration_s") {
        cfg.duration_s = x;
    }
    if let Some(x) = ck.integer("seed", 0, u64::MAX) {
        cfg.seed = x;
    }
    if let Some(x) = ck.integer("n", 1, MAX_PAIRS as u64) {
        cfg.n = x as usize;
    }
    if let Some(x) = ck.integer("points", 4, 10_000) {
        cfg.points = x as usize;
    }
    match obj.get("output_dir") {
        Some(Value::String(s)) if !s.is_empty() => cfg.output_dir = PathBuf::from(s),
        Some(v) => ck.fail("output_dir", format!("expected a non-empty string, got {v}")),
        None => {}
    }
    match obj.get("ml_refinement") {
        Some(Value::Bool(b)) => cfg.ml_refinement = *b,
        Some(v) => ck.fail("ml_refinement", format!("expected true or false, got {v}")),
        None => {}
    }

    if let Some(s) = scenario {
        if s.needs_angles() {
            for key in ["theta_p", "theta_m"] {
                if !obj.contains_key(key) {
                    ck.fail(key, format!("required by scenario {s}"));
                }
            }
        }
        if s == Scenario::NPair && !obj.contains_key("theta_p") {
            ck.fail("theta_p", "required by scenario n-pair");
        }
    }

    if ck.violations.is_empty() {
        Ok(cfg)
    } else {
        Err(ck.violations)
    }
}

pub fn validate_str(text: &str) -> Result<ExperimentConfig, Vec<Violation>> {
    match serde_json::from_str::<Value>(text) {
        Ok(v) => validate_value(&v),
        Err(e) => Err(vec![Violation {
            field: "<root>".into(),
            message: format!("invalid JSON: {e}"),
        }]),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    fn fields(v: Vec<Violation>) -> Vec<String> {
        v.into_iter().map(|x| x.field).collect()
    }

    #[test]
    fn defaults() {
        let cfg = validate_value(&json!({"scenario": "efficiency-curve"})).unwrap();
        assert_eq!(cfg.gate_coherence, 1.0);
        assert_eq!(cfg.trials, 60);
        assert_eq!(cfg.n, 2);
    }

    #[test]
    fn out_of_range_angle() {
        let err = validate_value(&json!({"scenario": "distill", "theta_p": 95.0, "theta_m": 30.0})).unwrap_err();
        assert_eq!(fields(err), vec!["theta_p"]);
    }

    #[test]
    fn temperature_key_suggests_theta_m() {
        let err = validate_value(&json!({"scenario": "efficiency-curve", "tempC": 41.2})).unwrap_err();
        assert_eq!(err.len(), 1);
        assert!(err[0].message.contains("theta_m"));
    }

    #[test]
    fn every_violation_listed() {
        let err = validate_value(&json!({
            "scenario": "nope",
            "gate_coherence": 1.5,
            "trials": 0,
            "seed": -1,
            "extra": true
        }))
        .unwrap_err();
        let f = fields(err);
        for key in ["scenario", "gate_coherence", "trials", "seed", "extra"] {
            assert!(f.contains(&key.to_string()), "{key} missing from {f:?}");
        }
    }

    #[test]
    fn scenario_requirements() {
        let err = validate_value(&json!({"scenario": "tomography"})).unwrap_err();
        assert_eq!(fields(err), vec!["theta_p", "theta_m"]);
    }
}
