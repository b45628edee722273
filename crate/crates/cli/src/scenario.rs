//! The six scenario families.

use std::collections::BTreeMap;

use serde_json::json;

use schmidt_distill::lab::io::{tomography_json, write_counts_csv};
use schmidt_distill::lab::tomography::Reconstruction;
use schmidt_distill::lab::{
    coincidence_probability, sample_counts, tomography_acquire, tomography_reconstruct, visibility_scan,
    Acquisition, AnalyzerState, CountMode, CountRecord, SampleKey, Stream,
};
use schmidt_distill::measures::{concurrence, entanglement_of_formation, fidelity_to_pure, purity};
use schmidt_distill::photonic::{make_hyperentangled, SourceSetting};
use schmidt_distill::schmidt::{
    binomial, expected_yield_asymptotic, expected_yield_finite, pair_entanglement, phi_plus, project_n_pairs,
    run_photonic_sp, theta_grid, EXPERIMENTAL_ANGLES,
};
use schmidt_distill::{DensityMatrix, DistillationOutcome, GateConfig};

use crate::config::{ExperimentConfig, Scenario};
use crate::report::{Cell, Provenance, RunError, ScenarioOutput, ScenarioReport, Table};

use AnalyzerState::{H, V};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RunOptions {
    /// Unit gate coherence and expected (unsampled) counts.
    pub ideal: bool,
}

struct Builder {
    metrics: BTreeMap<String, f64>,
    details: BTreeMap<String, serde_json::Value>,
    tables: Vec<Table>,
    files: Vec<(String, String)>,
}

impl Builder {
    fn new() -> Self {
        Self {
            metrics: BTreeMap::new(),
            details: BTreeMap::new(),
            tables: Vec::new(),
            files: Vec::new(),
        }
    }

    fn metric(&mut self, name: &str, value: f64) {
        self.metrics.insert(name.to_string(), value);
    }

    fn counts(&mut self, records: &[CountRecord]) -> Result<(), RunError> {
        let mut buf = Vec::new();
        write_counts_csv(records, &mut buf)?;
        self.files.push(("counts.csv".into(), String::from_utf8(buf).expect("csv is utf-8")));
        Ok(())
    }
}

fn acquisition(cfg: &ExperimentConfig, opts: RunOptions, pair_rate: f64) -> Acquisition {
    Acquisition {
        pair_rate,
        trials: cfg.trials,
        duration_s: cfg.duration_s,
        seed: cfg.seed,
        mode: if opts.ideal { CountMode::Expected } else { CountMode::Poisson },
    }
}

fn gates(cfg: &ExperimentConfig, opts: RunOptions) -> GateConfig {
    GateConfig::with_coherence(if opts.ideal { 1.0 } else { cfg.gate_coherence })
}

fn distill(theta_p: f64, theta_m: f64, cfg: &ExperimentConfig, opts: RunOptions) -> Result<DistillationOutcome, RunError> {
    let input = make_hyperentangled(&SourceSetting::new(theta_p, theta_m, cfg.phi)?)?;
    Ok(run_photonic_sp(&input, &gates(cfg, opts))?)
}

fn angles(cfg: &ExperimentConfig) -> (f64, f64) {
    (cfg.theta_p.expect("validated"), cfg.theta_m.expect("validated"))
}

/// Coincidence record of one analyzer pair on the distilled output, rated
/// against the input pair rate.
fn output_record(
    out: &DistillationOutcome,
    pol: &DensityMatrix,
    a: AnalyzerState,
    b: AnalyzerState,
    acq: &Acquisition,
    key: SampleKey,
) -> Result<CountRecord, RunError> {
    let p = out.success_probability * coincidence_probability(pol, &a, &b)?;
    Ok(sample_counts(p.min(1.0), acq, a, b, key)?)
}

/// Ratio of mean counts with its Poisson standard error.
fn ratio(num: &CountRecord, den: &CountRecord) -> (f64, f64) {
    let r = num.mean_counts() / den.mean_counts();
    if num.trials.is_empty() {
        return (r, 0.0);
    }
    let sigma = r * (1.0 / num.total_counts() + 1.0 / den.total_counts()).sqrt();
    (r, sigma)
}

fn tan2(deg: f64) -> f64 {
    deg.to_radians().tan().powi(2)
}

fn characterize(cfg: &ExperimentConfig, opts: RunOptions, b: &mut Builder) -> Result<(), RunError> {
    let rows: Vec<(f64, f64)> = match (cfg.theta_p, cfg.theta_m) {
        (None, None) => EXPERIMENTAL_ANGLES.iter().map(|a| (*a, *a)).collect(),
        (p, m) => vec![(p.or(m).unwrap(), m.or(p).unwrap())],
    };
    let acq = acquisition(cfg, opts, cfg.pair_rate);
    let mut table = Table::new(
        "characterization.csv",
        &[
            "theta_p_deg",
            "theta_m_deg",
            "tan2_theta_p",
            "tan2_theta_p_sigma",
            "tan2_theta_m",
            "tan2_theta_m_sigma",
            "tan2_theta_p_ideal",
            "tan2_theta_m_ideal",
        ],
    );
    let mut records = Vec::new();
    let mut max_dev: f64 = 0.0;
    let mut max_sigmas: f64 = 0.0;
    for (i, (tp, tm)) in rows.into_iter().enumerate() {
        let idx = 4 * i as u32;
        let key = |j: u32| SampleKey::new(Stream::Characterize, idx + j);

        let m_run = distill(45.0, tm, cfg, opts)?;
        let m_pol = m_run.polarization_state()?;
        let hh = output_record(&m_run, &m_pol, H, H, &acq, key(0))?;
        let vv = output_record(&m_run, &m_pol, V, V, &acq, key(1))?;
        let (t_m, s_m) = ratio(&hh, &vv);

        let p_run = distill(tp, 45.0, cfg, opts)?;
        let p_pol = p_run.polarization_state()?;
        let hh_p = output_record(&p_run, &p_pol, H, H, &acq, key(2))?;
        let vv_p = output_record(&p_run, &p_pol, V, V, &acq, key(3))?;
        let (t_p, s_p) = ratio(&vv_p, &hh_p);

        let (i_p, i_m) = (tan2(tp), tan2(tm));
        max_dev = max_dev.max((t_p - i_p).abs()).max((t_m - i_m).abs());
        if s_p > 0.0 && s_m > 0.0 {
            max_sigmas = max_sigmas.max((t_p - i_p).abs() / s_p).max((t_m - i_m).abs() / s_m);
        }
        table.push(vec![
            Cell::Num(tp),
            Cell::Num(tm),
            Cell::Num(t_p),
            Cell::Num(s_p),
            Cell::Num(t_m),
            Cell::Num(s_m),
            Cell::Num(i_p),
            Cell::Num(i_m),
        ]);
        records.extend([hh, vv, hh_p, vv_p]);
    }
    b.metric("max_abs_deviation_tan2", max_dev);
    b.metric("max_deviation_sigmas", max_sigmas);
    b.tables.push(table);
    b.counts(&records)
}

fn distill_scenario(cfg: &ExperimentConfig, opts: RunOptions, b: &mut Builder) -> Result<(), RunError> {
    let (tp, tm) = angles(cfg);
    let out = distill(tp, tm, cfg, opts)?;
    let pol = out.polarization_state()?;
    let acq = acquisition(cfg, opts, cfg.pair_rate);
    let mut table = Table::new(
        "coincidences.csv",
        &["setting_a", "setting_b", "probability", "expected_rate", "mean_counts", "sigma"],
    );
    let mut records = Vec::new();
    for (i, (a, bb)) in [(H, H), (H, V), (V, H), (V, V)].into_iter().enumerate() {
        let r = output_record(&out, &pol, a, bb, &acq, SampleKey::new(Stream::Distill, i as u32))?;
        table.push(vec![
            Cell::Text(a.to_string()),
            Cell::Text(bb.to_string()),
            Cell::Num(r.expected_rate / cfg.pair_rate),
            Cell::Num(r.expected_rate),
            Cell::Num(r.mean_counts()),
            Cell::Num(r.mean_sigma()),
        ]);
        records.push(r);
    }
    let (r, sigma) = ratio(&records[0], &records[3]);
    b.metric("success_probability", out.success_probability);
    b.metric("ratio_hh_vv", r);
    b.metric("ratio_hh_vv_sigma", sigma);
    b.metric("fidelity_phi_plus", fidelity_to_pure(&pol, &phi_plus())?);
    b.metric("concurrence", concurrence(&pol)?);
    b.metric("output_ebits", out.extracted_ebits);
    b.metric("input_polarization_ebits", pair_entanglement(tp).0);
    b.metric("input_momentum_ebits", pair_entanglement(tm).0);
    b.tables.push(table);
    b.counts(&records)
}

fn tomography(cfg: &ExperimentConfig, opts: RunOptions, b: &mut Builder) -> Result<(), RunError> {
    let (tp, tm) = angles(cfg);
    let out = distill(tp, tm, cfg, opts)?;
    let pol = out.polarization_state()?;
    let acq = acquisition(cfg, opts, cfg.pair_rate * out.success_probability);
    let records = tomography_acquire(&pol, &acq)?;
    let method = if cfg.ml_refinement {
        Reconstruction::MaximumLikelihood
    } else {
        Reconstruction::LinearInversion
    };
    let target = phi_plus();
    let res = tomography_reconstruct(&records, method, Some(&target))?;
    b.metric("fidelity", res.fidelity_to_target.expect("target given"));
    b.metric("model_fidelity", fidelity_to_pure(&pol, &target)?);
    b.metric("purity", purity(&res.physical));
    b.metric("concurrence", concurrence(&res.physical)?);
    b.metric("entanglement_of_formation", entanglement_of_formation(&res.physical)?.0);
    b.metric("negative_weight", res.info.negative_weight);
    b.metric("success_probability", out.success_probability);
    b.details.insert("reconstruction".into(), json!(res.info));
    b.files.push(("tomography.json".into(), tomography_json(&res)? + "\n"));
    b.counts(&records)
}

fn visibility(cfg: &ExperimentConfig, opts: RunOptions, b: &mut Builder) -> Result<(), RunError> {
    let (tp, tm) = angles(cfg);
    let out = distill(tp, tm, cfg, opts)?;
    let pol = out.polarization_state()?;
    let acq = acquisition(cfg, opts, cfg.pair_rate * out.success_probability);
    let (curve, vis) = visibility_scan(&pol, cfg.points, &acq)?;
    let mut table = Table::new("visibility.csv", &["hwp_deg", "probability", "expected_counts", "mean_counts"]);
    for p in &curve {
        table.push(vec![
            Cell::Num(p.hwp_deg),
            Cell::Num(p.probability),
            Cell::Num(p.record.expected_counts()),
            Cell::Num(p.record.mean_counts()),
        ]);
    }
    b.metric("visibility", vis.value);
    b.metric("c_max", vis.c_max);
    b.metric("c_min", vis.c_min);
    b.metric("coherence", 2.0 * pol.matrix()[(0, 3)].norm());
    b.metric("success_probability", out.success_probability);
    b.tables.push(table);
    let records: Vec<CountRecord> = curve.into_iter().map(|p| p.record).collect();
    b.counts(&records)
}

fn efficiency(cfg: &ExperimentConfig, b: &mut Builder) -> Result<(), RunError> {
    let mut table = Table::new(
        "efficiency.csv",
        &["theta_deg", "entanglement_ebits", "yield_finite_ebits", "yield_asymptotic_ebits"],
    );
    for theta in theta_grid() {
        table.push(vec![
            Cell::Num(theta),
            Cell::Num(pair_entanglement(theta).0),
            Cell::Num(expected_yield_finite(theta, cfg.n)?.0),
            Cell::Num(expected_yield_asymptotic(theta, cfg.n).0),
        ]);
    }
    b.metric("n", cfg.n as f64);
    b.metric("yield_finite_at_45", expected_yield_finite(45.0, cfg.n)?.0);
    b.metric("yield_asymptotic_at_45", expected_yield_asymptotic(45.0, cfg.n).0);
    b.tables.push(table);
    Ok(())
}

fn n_pair(cfg: &ExperimentConfig, b: &mut Builder) -> Result<(), RunError> {
    let theta = cfg.theta_p.expect("validated");
    let mut table = Table::new("subspaces.csv", &["k", "dimension", "probability", "ebits"]);
    let (mut total, mut expected) = (0.0, 0.0);
    for k in 0..=cfg.n {
        let out = project_n_pairs(theta, cfg.n, k)?;
        total += out.success_probability;
        expected += out.success_probability * out.extracted_ebits;
        table.push(vec![
            Cell::Int(k as u64),
            Cell::Int(binomial(cfg.n, k)),
            Cell::Num(out.success_probability),
            Cell::Num(out.extracted_ebits),
        ]);
    }
    b.metric("probability_sum", total);
    b.metric("expected_ebits", expected);
    b.metric("asymptotic_ebits", expected_yield_asymptotic(theta, cfg.n).0);
    b.tables.push(table);
    Ok(())
}

/// Runs one scenario in memory. Nothing is written to disk.
pub fn run(cfg: &ExperimentConfig, opts: RunOptions) -> Result<ScenarioOutput, RunError> {
    let mut cfg = cfg.clone();
    if opts.ideal {
        cfg.gate_coherence = 1.0;
    }
    let mut b = Builder::new();
    match cfg.scenario {
        Scenario::CharacterizeInput => characterize(&cfg, opts, &mut b)?,
        Scenario::Distill => distill_scenario(&cfg, opts, &mut b)?,
        Scenario::Tomography => tomography(&cfg, opts, &mut b)?,
        Scenario::Visibility => visibility(&cfg, opts, &mut b)?,
        Scenario::EfficiencyCurve => efficiency(&cfg, &mut b)?,
        Scenario::NPair => n_pair(&cfg, &mut b)?,
    }
    let mut tables: Vec<String> = b.tables.iter().map(|t| t.file.clone()).collect();
    tables.extend(b.files.iter().map(|(n, _)| n.clone()));
    let output = ScenarioOutput {
        report: ScenarioReport {
            scenario: cfg.scenario,
            ideal: opts.ideal,
            metrics: b.metrics,
            tables,
            details: b.details,
            provenance: Provenance {
                tool: "sp-distill",
                version: env!("CARGO_PKG_VERSION"),
                seed: cfg.seed,
            },
            config: cfg,
        },
        tables: b.tables,
        files: b.files,
    };
    output.check_finite()?;
    Ok(output)
}
