//! Scenario configuration: an optional `key = value` file overlaid by
//! command-line flags.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use krausviz::dynamics;
use krausviz::{BathSpec, BlochVector, CoherencePair, PulseSpec, SimConfig};

/// Keys accepted in a config file. Hyphens are read as underscores.
pub const KEYS: [&str; 10] = [
    "scenario",
    "eta",
    "omega_c_over_pi",
    "temperature_in_cutoff_units",
    "pulse",
    "steps",
    "out",
    "format",
    "shots",
    "seed",
];

/// Harmonics swept by the `table1` scenario.
pub const TABLE_HARMONICS: [i64; 5] = [0, 6, 12, 15, 30];

/// A configuration problem tied to one key.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub key: String,
    pub message: String,
}

impl ConfigError {
    pub fn new(key: impl Into<String>, message: impl Into<String>) -> Self {
        ConfigError {
            key: key.into(),
            message: message.into(),
        }
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.key, self.message)
    }
}

impl std::error::Error for ConfigError {}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scenario {
    PureNoise,
    Gate,
    Cdd,
    Table1,
    ProcessMatrix,
    Kraus,
    Qpt,
}

impl Scenario {
    pub const ALL: [Scenario; 7] = [
        Scenario::PureNoise,
        Scenario::Gate,
        Scenario::Cdd,
        Scenario::Table1,
        Scenario::ProcessMatrix,
        Scenario::Kraus,
        Scenario::Qpt,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Scenario::PureNoise => "pure-noise",
            Scenario::Gate => "gate",
            Scenario::Cdd => "cdd",
            Scenario::Table1 => "table1",
            Scenario::ProcessMatrix => "process-matrix",
            Scenario::Kraus => "kraus",
            Scenario::Qpt => "qpt",
        }
    }

    /// Pure noise and the bare gate use the weak bath; everything built on
    /// the decoupled gate uses the strong one.
    pub fn default_eta(self) -> f64 {
        match self {
            Scenario::PureNoise | Scenario::Gate => 0.01,
            _ => 0.05,
        }
    }

    pub fn default_pulse(self) -> PulseSpec {
        match self {
            Scenario::PureNoise => PulseSpec::Off,
            Scenario::Gate => PulseSpec::ConstantGate,
            _ => PulseSpec::Cdd(2),
        }
    }

    /// Initial Bloch vector of the headline trajectory.
    pub fn initial(self) -> BlochVector {
        match self {
            Scenario::PureNoise => CoherencePair::equal_superposition().bloch_vector(),
            _ => BlochVector::Z,
        }
    }
}

impl FromStr for Scenario {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Scenario::ALL.into_iter().find(|sc| sc.name() == s).ok_or_else(|| {
            let names: Vec<_> = Scenario::ALL.iter().map(|sc| sc.name()).collect();
            format!("unknown scenario {s:?}; expected one of {}", names.join(", "))
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err(format!("expected csv or json, got {s:?}")),
        }
    }
}

/// Raw string values by key; later layers override earlier ones.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct RawConfig {
    values: BTreeMap<String, String>,
}

fn canonical_key(key: &str) -> Result<String, ConfigError> {
    let k = key.trim().replace('-', "_");
    let k = match k.as_str() {
        "temperature" => "temperature_in_cutoff_units".to_string(),
        "step_count" => "steps".to_string(),
        _ => k,
    };
    if KEYS.contains(&k.as_str()) {
        Ok(k)
    } else {
        Err(ConfigError::new(key.trim(), "unknown configuration key"))
    }
}

impl RawConfig {
    /// Parses `key = value` lines. Blank lines and `#` comments are skipped.
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut raw = RawConfig::default();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| ConfigError::new(format!("line {}", lineno + 1), format!("expected key = value, got {line:?}")))?;
            raw.set(key, value.trim())?;
        }
        Ok(raw)
    }

    pub fn read(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError::new("config", format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        self.values.insert(canonical_key(key)?, value.to_string());
        Ok(())
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    fn parsed<T: FromStr>(&self, key: &str) -> Result<Option<T>, ConfigError>
    where
        T::Err: fmt::Display,
    {
        self.get(key)
            .map(|v| {
                v.parse::<T>()
                    .map_err(|e| ConfigError::new(key, format!("cannot parse {v:?}: {e}")))
            })
            .transpose()
    }
}

/// A fully typed scenario. Values are syntactically valid but not yet
/// checked against the physics; see [`ScenarioConfig::validate`].
#[derive(Clone, Debug, PartialEq)]
pub struct ScenarioConfig {
    pub scenario: Scenario,
    pub eta: f64,
    pub omega_c_over_pi: f64,
    pub temperature_in_cutoff_units: f64,
    pub pulse: PulseSpec,
    pub steps: Option<usize>,
    pub out: PathBuf,
    pub format: Format,
    pub shots: Option<u64>,
    pub seed: u64,
}

impl ScenarioConfig {
    pub fn from_raw(raw: &RawConfig) -> Result<Self, ConfigError> {
        let scenario: Scenario = raw
            .parsed("scenario")?
            .ok_or_else(|| ConfigError::new("scenario", "no scenario given"))?;
        Ok(ScenarioConfig {
            scenario,
            eta: raw.parsed("eta")?.unwrap_or(scenario.default_eta()),
            omega_c_over_pi: raw.parsed("omega_c_over_pi")?.unwrap_or(8.0),
            temperature_in_cutoff_units: raw.parsed("temperature_in_cutoff_units")?.unwrap_or(1.0),
            pulse: raw.parsed("pulse")?.unwrap_or(scenario.default_pulse()),
            steps: raw.parsed("steps")?,
            out: raw.parsed("out")?.unwrap_or_else(|| PathBuf::from("out")),
            format: raw.parsed("format")?.unwrap_or(Format::Json),
            shots: raw.parsed("shots")?,
            seed: raw.parsed("seed")?.unwrap_or(0),
        })
    }

    /// The bath, with domain errors reported under config key names.
    pub fn bath(&self) -> Result<BathSpec, ConfigError> {
        let checks = [
            ("eta", self.eta, self.eta >= 0.0, "must be finite and >= 0"),
            (
                "omega_c_over_pi",
                self.omega_c_over_pi,
                self.omega_c_over_pi > 0.0,
                "must be finite and > 0",
            ),
            (
                "temperature_in_cutoff_units",
                self.temperature_in_cutoff_units,
                self.temperature_in_cutoff_units > 0.0,
                "must be finite and > 0",
            ),
        ];
        for (key, value, ok, why) in checks {
            if !ok || !value.is_finite() {
                return Err(ConfigError::new(key, format!("{value} {why}")));
            }
        }
        BathSpec::from_cutoff_units(self.eta, self.omega_c_over_pi, self.temperature_in_cutoff_units)
            .map_err(|e| ConfigError::new("eta", e.to_string()))
    }

    /// Pulses integrated by this scenario.
    pub fn pulses(&self) -> Vec<PulseSpec> {
        match self.scenario {
            Scenario::Table1 => TABLE_HARMONICS.iter().map(|&n| PulseSpec::Cdd(n)).collect(),
            _ => vec![self.pulse],
        }
    }

    /// Simulation setup for one pulse, with the default grid unless a
    /// step count was given.
    pub fn sim_config(&self, bath: BathSpec, pulse: PulseSpec) -> SimConfig {
        let cfg = SimConfig::new(bath, pulse, self.scenario.initial());
        match self.steps {
            Some(n) => cfg.with_steps(n),
            None => cfg,
        }
    }

    /// Every physics check the scenario depends on. Never touches the
    /// file system.
    pub fn validate(&self) -> ValidationReport {
        let mut items = Vec::new();
        let bath = match self.bath() {
            Ok(b) => {
                items.push(Check::pass(
                    "bath",
                    format!(
                        "eta = {}, omega_c = {}pi, temperature = {} omega_c",
                        self.eta, self.omega_c_over_pi, self.temperature_in_cutoff_units
                    ),
                ));
                Some(b)
            }
            Err(e) => {
                items.push(Check::fail(e.key, e.message));
                None
            }
        };
        if self.scenario == Scenario::PureNoise && self.pulse != PulseSpec::Off {
            items.push(Check::fail("pulse", format!("pure-noise runs without drive, got {}", self.pulse)));
        }
        if let Some(bath) = bath {
            for pulse in self.pulses() {
                let cfg = self.sim_config(bath, pulse);
                let required = dynamics::required_step_count(&bath, &pulse);
                if cfg.step_count >= required {
                    items.push(Check::pass(
                        "steps",
                        format!("{} for {pulse} (required minimum {required})", cfg.step_count),
                    ));
                } else {
                    items.push(Check::fail(
                        "steps",
                        format!("{} for {pulse} is below the required minimum {required}", cfg.step_count),
                    ));
                }
            }
        }
        if self.shots == Some(0) {
            items.push(Check::fail("shots", "need at least one shot"));
        }
        ValidationReport { items }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub key: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn pass(key: impl Into<String>, detail: impl Into<String>) -> Self {
        Check {
            key: key.into(),
            passed: true,
            detail: detail.into(),
        }
    }

    fn fail(key: impl Into<String>, detail: impl Into<String>) -> Self {
        Check {
            key: key.into(),
            passed: false,
            detail: detail.into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ValidationReport {
    pub items: Vec<Check>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.items.iter().all(|c| c.passed)
    }

    pub fn first_failure(&self) -> Option<&Check> {
        self.items.iter().find(|c| !c.passed)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.items {
            writeln!(f, "{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.key, c.detail)?;
        }
        write!(f, "{}", if self.passed() { "PASS" } else { "FAIL" })
    }
}
