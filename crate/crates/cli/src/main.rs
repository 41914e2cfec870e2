//! `krausviz`: scenario runner for the decoupled-qubit simulation.
//!
//! Exit codes: 0 on success, 1 on a configuration error (the message names
//! the key), 2 when a computed channel fails its invariants.

mod config;
mod scenarios;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use config::{ConfigError, RawConfig, ScenarioConfig};

#[derive(Parser, Debug)]
#[command(
    name = "krausviz",
    version,
    about = "Decoupled-qubit dephasing simulation, Kraus vectors and process tomography"
)]
struct Cli {
    /// pure-noise | gate | cdd | table1 | process-matrix | kraus | qpt
    #[arg(long)]
    scenario: Option<String>,
    /// Dimensionless noise strength.
    #[arg(long, allow_hyphen_values = true)]
    eta: Option<String>,
    /// Cutoff frequency in units of pi/tau.
    #[arg(long, allow_hyphen_values = true)]
    omega_c_over_pi: Option<String>,
    /// Temperature in units of hbar omega_c / k_B.
    #[arg(long, allow_hyphen_values = true)]
    temperature: Option<String>,
    /// off | gate | cdd:<n>
    #[arg(long)]
    pulse: Option<String>,
    /// RK4 step count over [0, tau].
    #[arg(long, allow_hyphen_values = true)]
    steps: Option<String>,
    /// Output directory.
    #[arg(long)]
    out: Option<String>,
    /// Process-matrix file format: csv | json.
    #[arg(long)]
    format: Option<String>,
    /// Shots per measurement axis for sampled tomography.
    #[arg(long, allow_hyphen_values = true)]
    shots: Option<String>,
    /// Seed for shot sampling.
    #[arg(long, allow_hyphen_values = true)]
    seed: Option<String>,
    /// Print the validation report and exit without writing files.
    #[arg(long)]
    validate_only: bool,
    /// Plain-text key = value file; flags override its entries.
    #[arg(long)]
    config: Option<PathBuf>,
}

impl Cli {
    fn raw_config(&self) -> Result<RawConfig, ConfigError> {
        let mut raw = match &self.config {
            Some(path) => RawConfig::read(path)?,
            None => RawConfig::default(),
        };
        let flags = [
            ("scenario", &self.scenario),
            ("eta", &self.eta),
            ("omega_c_over_pi", &self.omega_c_over_pi),
            ("temperature_in_cutoff_units", &self.temperature),
            ("pulse", &self.pulse),
            ("steps", &self.steps),
            ("out", &self.out),
            ("format", &self.format),
            ("shots", &self.shots),
            ("seed", &self.seed),
        ];
        for (key, value) in flags {
            if let Some(v) = value {
                raw.set(key, v)?;
            }
        }
        Ok(raw)
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let cfg = match cli.raw_config().and_then(|raw| ScenarioConfig::from_raw(&raw)) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("configuration error: {e}");
            return ExitCode::from(1);
        }
    };
    if cli.validate_only {
        let report = cfg.validate();
        println!("{report}");
        return ExitCode::from(if report.passed() { 0 } else { 1 });
    }
    match scenarios::run(&cfg) {
        Ok(lines) => {
            println!("scenario {}", cfg.scenario.name());
            for line in lines {
                println!("{line}");
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code())
        }
    }
}
