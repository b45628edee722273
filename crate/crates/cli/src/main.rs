use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use schmidt_distill_cli::{run, validate_str, ExperimentConfig, RunOptions, Violation};

const EXIT_INVALID: u8 = 2;
const EXIT_RUNTIME: u8 = 3;

#[derive(Parser)]
#[command(name = "sp-distill", version, about = "Schmidt projection distillation scenarios")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario and write its tables and report.
    Run {
        config: PathBuf,
        /// Output directory, overriding `output_dir`.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Seed override.
        #[arg(long)]
        seed: Option<u64>,
        /// Noise-free gates and expected counts instead of sampled ones.
        #[arg(long)]
        ideal: bool,
    },
    /// Check a config and list every violated constraint.
    Validate { config: PathBuf },
}

fn load(path: &PathBuf) -> Result<ExperimentConfig, Vec<Violation>> {
    match fs::read_to_string(path) {
        Ok(text) => validate_str(&text),
        Err(e) => Err(vec![Violation {
            field: "<file>".into(),
            message: format!("cannot read {}: {e}", path.display()),
        }]),
    }
}

fn report_violations(violations: &[Violation]) {
    for v in violations {
        eprintln!("invalid: {v}");
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Validate { config } => match load(&config) {
            Ok(_) => {
                println!("valid");
                ExitCode::SUCCESS
            }
            Err(v) => {
                for x in &v {
                    println!("{x}");
                }
                ExitCode::from(EXIT_INVALID)
            }
        },
        Command::Run {
            config,
            out,
            seed,
            ideal,
        } => {
            let mut cfg = match load(&config) {
                Ok(c) => c,
                Err(v) => {
                    report_violations(&v);
                    return ExitCode::from(EXIT_INVALID);
                }
            };
            if let Some(s) = seed {
                cfg.seed = s;
            }
            if let Some(dir) = out {
                cfg.output_dir = dir;
            }
            let result = run(&cfg, RunOptions { ideal }).and_then(|o| o.write(&cfg.output_dir).map(|_| o));
            match result {
                Ok(o) => {
                    for (k, v) in &o.report.metrics {
                        println!("{k} = {v}");
                    }
                    println!("wrote {}", cfg.output_dir.display());
                    ExitCode::SUCCESS
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(EXIT_RUNTIME)
                }
            }
        }
    }
}
