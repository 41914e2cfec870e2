//! Scenario runners. Each writes its files under the output directory and
//! returns the summary lines for stdout.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::Path;

use krausviz::io::fmt_decimal;
use krausviz::qpt::{self, PovmSet, PrepSet};
use krausviz::{dynamics, exact, kraus, ptm};
use krausviz::{BathSpec, CoherencePair, Error, ProcessMatrix, PulseSpec, Trajectory};

use crate::config::{ConfigError, Format, Scenario, ScenarioConfig, TABLE_HARMONICS};

/// Worst entrywise error tolerated by the noise-free tomography round trip.
const ROUND_TRIP_TOL: f64 = 1e-8;

#[derive(Debug)]
pub enum RunError {
    Config(ConfigError),
    Invariant(String),
}

impl RunError {
    pub fn exit_code(&self) -> u8 {
        match self {
            RunError::Config(_) => 1,
            RunError::Invariant(_) => 2,
        }
    }
}

impl std::fmt::Display for RunError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RunError::Config(e) => write!(f, "configuration error: {e}"),
            RunError::Invariant(m) => write!(f, "invariant failure: {m}"),
        }
    }
}

impl From<ConfigError> for RunError {
    fn from(e: ConfigError) -> Self {
        RunError::Config(e)
    }
}

impl From<Error> for RunError {
    fn from(e: Error) -> Self {
        match e {
            Error::Resolution { .. } => RunError::Config(ConfigError::new("steps", e.to_string())),
            Error::Io(io) => RunError::Config(ConfigError::new("out", io.to_string())),
            Error::Domain { name, .. } => RunError::Config(ConfigError::new(name, e.to_string())),
            Error::Parse(_) => RunError::Config(ConfigError::new("input", e.to_string())),
            other => RunError::Invariant(other.to_string()),
        }
    }
}

type Run = Result<Vec<String>, RunError>;

fn create(dir: &Path, name: &str) -> Result<BufWriter<File>, RunError> {
    let path = dir.join(name);
    File::create(&path)
        .map(BufWriter::new)
        .map_err(|e| ConfigError::new("out", format!("cannot write {}: {e}", path.display())).into())
}

fn finish(mut w: BufWriter<File>) -> Result<(), RunError> {
    w.flush().map_err(|e| ConfigError::new("out", e.to_string()).into())
}

fn io_err(e: std::io::Error) -> RunError {
    ConfigError::new("out", e.to_string()).into()
}

fn fmt_vec(r: &krausviz::BlochVector) -> String {
    format!("({:.6}, {:.6}, {:.6})", r.x, r.y, r.z)
}

pub fn run(cfg: &ScenarioConfig) -> Run {
    let report = cfg.validate();
    if let Some(fail) = report.first_failure() {
        return Err(ConfigError::new(fail.key.clone(), fail.detail.clone()).into());
    }
    let bath = cfg.bath()?;
    fs::create_dir_all(&cfg.out).map_err(|e| ConfigError::new("out", format!("cannot create {}: {e}", cfg.out.display())))?;
    match cfg.scenario {
        Scenario::PureNoise => pure_noise(cfg, bath),
        Scenario::Gate | Scenario::Cdd => single_trajectory(cfg, bath),
        Scenario::Table1 => table1(cfg, bath),
        Scenario::ProcessMatrix => process_matrix(cfg, bath),
        Scenario::Kraus => kraus_vectors(cfg, bath),
        Scenario::Qpt => tomography(cfg, bath),
    }
}

fn write_trajectory(cfg: &ScenarioConfig, traj: &Trajectory) -> Result<(), RunError> {
    let mut w = create(&cfg.out, "trajectory.csv")?;
    traj.write_csv(&mut w)?;
    finish(w)
}

fn pure_noise(cfg: &ScenarioConfig, bath: BathSpec) -> Run {
    let traj = dynamics::integrate(&cfg.sim_config(bath, PulseSpec::Off))?;
    write_trajectory(cfg, &traj)?;
    let analytic = exact::pure_noise_fidelity(&CoherencePair::equal_superposition(), &bath, 1.0)?;
    let numeric = traj.final_fidelity();
    Ok(vec![
        format!("F0(tau) = {numeric:.6} (integrator)"),
        format!("F0(tau) = {analytic:.6} (analytic)"),
        format!("|difference| = {:.3e}", (numeric - analytic).abs()),
    ])
}

fn single_trajectory(cfg: &ScenarioConfig, bath: BathSpec) -> Run {
    let traj = dynamics::integrate(&cfg.sim_config(bath, cfg.pulse))?;
    write_trajectory(cfg, &traj)?;
    let r = traj.final_point();
    Ok(vec![
        format!("pulse = {}, steps = {}", cfg.pulse, traj.len() - 1),
        format!("F(tau) = {:.6}", traj.final_fidelity()),
        format!("r(tau) = {}", fmt_vec(&r)),
        format!("|r(tau) - r(0)| = {:.6}", r.distance(&traj.initial())),
    ])
}

/// One independent run per harmonic, on scoped threads.
fn table1(cfg: &ScenarioConfig, bath: BathSpec) -> Run {
    let configs: Vec<_> = cfg.pulses().into_iter().map(|p| cfg.sim_config(bath, p)).collect();
    let results: Vec<_> = std::thread::scope(|s| {
        let handles: Vec<_> = configs.iter().map(|c| s.spawn(move || dynamics::integrate(c))).collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("integration thread panicked"))
            .collect()
    });
    let mut w = create(&cfg.out, "table1.csv")?;
    writeln!(w, "n,F_tau,r_distance").map_err(io_err)?;
    let mut lines = Vec::new();
    for (n, traj) in TABLE_HARMONICS.iter().zip(results) {
        let traj = traj?;
        let f = traj.final_fidelity();
        let d = traj.final_point().distance(&traj.initial());
        writeln!(w, "{n},{},{}", fmt_decimal(f), fmt_decimal(d)).map_err(io_err)?;
        lines.push(format!("n = {n:2}: F(tau) = {f:.4}, |r(tau) - r(0)| = {d:.4}"));
    }
    finish(w)?;
    Ok(lines)
}

fn process_matrices(cfg: &ScenarioConfig, bath: BathSpec) -> Result<Vec<ProcessMatrix>, RunError> {
    let set = ptm::evolve_basis(&cfg.sim_config(bath, cfg.pulse))?;
    Ok(ptm::assemble_all(&set)?)
}

fn write_matrix(dir: &Path, stem: &str, format: Format, m: &ProcessMatrix) -> Result<String, RunError> {
    let name = match format {
        Format::Json => format!("{stem}.json"),
        Format::Csv => format!("{stem}.csv"),
    };
    let mut w = create(dir, &name)?;
    match format {
        Format::Json => writeln!(w, "{}", m.to_json()?).map_err(io_err)?,
        Format::Csv => {
            writeln!(w, "t,nu,mu,re,im").map_err(io_err)?;
            for nu in 0..4 {
                for mu in 0..4 {
                    let z = m.matrix()[(nu, mu)];
                    writeln!(w, "{},{nu},{mu},{},{}", fmt_decimal(m.t()), fmt_decimal(z.re), fmt_decimal(z.im)).map_err(io_err)?;
                }
            }
        }
    }
    finish(w)?;
    Ok(name)
}

fn process_matrix(cfg: &ScenarioConfig, bath: BathSpec) -> Run {
    let matrices = process_matrices(cfg, bath)?;
    let m = matrices.last().expect("grid has points");
    let name = write_matrix(&cfg.out, "process_matrix", cfg.format, m)?;
    let inv = m.invariants();
    let block = ptm::check_block_structure(m);
    Ok(vec![
        format!(
            "pulse = {}, grid points = {}, wrote {name} at t = {}",
            cfg.pulse,
            matrices.len(),
            m.t()
        ),
        format!("eigenvalues(M(tau)) = {:?}", m.eigenvalues().map(|x| (x * 1e6).round() / 1e6)),
        format!(
            "hermiticity {:.1e}, min eigenvalue {:.1e}, trace preservation {:.1e}, off-block {:.1e}",
            inv.hermiticity, inv.min_eigenvalue, inv.trace_preservation, block.residual
        ),
    ])
}

fn kraus_vectors(cfg: &ScenarioConfig, bath: BathSpec) -> Run {
    let matrices = process_matrices(cfg, bath)?;
    let traj = kraus::kraus_trajectory(&matrices)?;
    for g in 0..4 {
        let mut w = create(&cfg.out, &format!("kraus_gamma{g}.csv"))?;
        traj.write_csv(&mut w, Some(g))?;
        finish(w)?;
    }
    for warning in traj.warnings() {
        eprintln!("warning: {warning}");
    }
    let last = traj.samples().last().expect("grid has points");
    let mut lines = vec![format!(
        "pulse = {}, grid points = {}, branch swaps = {}",
        cfg.pulse,
        traj.samples().len(),
        traj.warnings().len()
    )];
    for g in 0..4 {
        let v = last.vectors[g].v;
        lines.push(format!(
            "gamma {g}: D(tau) = {:.6}, v(tau) = ({:.6}, {:.6}, {:.6})",
            last.weights[g], v.x, v.y, v.z
        ));
    }
    Ok(lines)
}

fn tomography(cfg: &ScenarioConfig, bath: BathSpec) -> Run {
    let matrices = process_matrices(cfg, bath)?;
    let m = matrices.last().expect("grid has points");
    let exact_p = qpt::forward_probabilities(m, &PrepSet::default(), &PovmSet::default());
    let p = match cfg.shots {
        Some(shots) => qpt::sample_frequencies(&exact_p, shots, cfg.seed)?,
        None => exact_p,
    };
    let mut w = create(&cfg.out, "probabilities.csv")?;
    p.write_csv(&mut w)?;
    finish(w)?;
    let a = qpt::standard_superoperator();
    let back = qpt::tomographic_inverse_at(m.t(), &p, &a);
    let sim_name = write_matrix(&cfg.out, "process_matrix", cfg.format, m)?;
    let tomo_name = write_matrix(&cfg.out, "tomography", cfg.format, &back)?;
    let diff = back.matrix() - m.matrix();
    let max_err = diff.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let source = match cfg.shots {
        Some(n) => format!("{n} shots per axis, seed {}", cfg.seed),
        None => "exact probabilities".to_string(),
    };
    if cfg.shots.is_none() && max_err > ROUND_TRIP_TOL {
        return Err(RunError::Invariant(format!(
            "round trip error {max_err:e} exceeds {ROUND_TRIP_TOL:e}"
        )));
    }
    Ok(vec![
        format!("pulse = {}, {source}, wrote {sim_name} and {tomo_name}", cfg.pulse),
        format!("max |M_tomo - M_sim| = {max_err:.3e}"),
        format!("frobenius |M_tomo - M_sim| = {:.3e}", diff.norm()),
    ])
}
