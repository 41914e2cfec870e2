//! Process matrix `M(t)` of the qubit channel in the Pauli basis.
//!
//! The channel acts as `ρ ↦ Σ_{μν} σ_μ ρ σ_ν M_{νμ}` and is rebuilt from the
//! Bloch vectors `r_μ(t)` of four evolved states whose initial Bloch vectors
//! are `0, x̂, ŷ, ẑ`. Writing `x_{k,μ}` for component `k` of `r_μ(t)`, every
//! element of `M` is a closed-form linear combination of the twelve `x_{k,μ}`.

use nalgebra::{Matrix4, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::dynamics::{self, BlochVector, MemoryIntegrals, SimConfig, Trajectory};
use crate::error::{Error, Result};
use crate::pauli::{Mat2, BASIS, IDENTITY};
use crate::C64;

pub const HERMITICITY_TOL: f64 = 1e-8;
pub const EIGENVALUE_TOL: f64 = 1e-6;
pub const TRACE_PRESERVATION_TOL: f64 = 1e-6;
pub const RECONSTRUCTION_TOL: f64 = 1e-8;
pub const BLOCK_TOL: f64 = 1e-4;

/// Positions that vanish for a channel commuting with the `σx`-parity of
/// the drive-plus-dephasing dynamics.
pub const OFF_BLOCK_POSITIONS: [(usize, usize); 8] = [(0, 2), (2, 0), (0, 3), (3, 0), (1, 2), (2, 1), (1, 3), (3, 1)];

/// Initial Bloch vectors of the probe states, indexed by `μ`.
pub const PROBE_INITIALS: [BlochVector; 4] = [BlochVector::ZERO, BlochVector::X, BlochVector::Y, BlochVector::Z];

/// `M` at one instant; element `(ν, μ)` of the matrix is `M_{νμ}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(into = "ProcessMatrixJson", from = "ProcessMatrixJson")]
pub struct ProcessMatrix {
    t: f64,
    m: Matrix4<C64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct ProcessMatrixJson {
    t: f64,
    re: [[f64; 4]; 4],
    im: [[f64; 4]; 4],
}

impl From<ProcessMatrix> for ProcessMatrixJson {
    fn from(p: ProcessMatrix) -> Self {
        let mut re = [[0.0; 4]; 4];
        let mut im = [[0.0; 4]; 4];
        for r in 0..4 {
            for c in 0..4 {
                re[r][c] = p.m[(r, c)].re;
                im[r][c] = p.m[(r, c)].im;
            }
        }
        ProcessMatrixJson { t: p.t, re, im }
    }
}

impl From<ProcessMatrixJson> for ProcessMatrix {
    fn from(j: ProcessMatrixJson) -> Self {
        ProcessMatrix {
            t: j.t,
            m: Matrix4::from_fn(|r, c| C64::new(j.re[r][c], j.im[r][c])),
        }
    }
}

/// Residuals of the physical-channel invariants.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InvariantReport {
    /// `max |M − M†|`.
    pub hermiticity: f64,
    pub min_eigenvalue: f64,
    /// `max |Σ M_{νμ} σ_ν σ_μ − 𝕀|`.
    pub trace_preservation: f64,
}

impl InvariantReport {
    pub fn passes(&self) -> bool {
        self.hermiticity <= HERMITICITY_TOL && self.min_eigenvalue >= -EIGENVALUE_TOL && self.trace_preservation <= TRACE_PRESERVATION_TOL
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BlockReport {
    pub residual: f64,
    pub passes: bool,
}

impl ProcessMatrix {
    /// Validated constructor.
    pub fn new(t: f64, m: Matrix4<C64>) -> Result<Self> {
        let p = ProcessMatrix { t, m };
        p.validate()?;
        Ok(p)
    }

    /// No invariant checks; for raw estimates that are reported as-is.
    pub fn from_raw(t: f64, m: Matrix4<C64>) -> Self {
        ProcessMatrix { t, m }
    }

    pub fn identity(t: f64) -> Self {
        let mut m = Matrix4::zeros();
        m[(0, 0)] = C64::new(1.0, 0.0);
        ProcessMatrix { t, m }
    }

    /// `ρ ↦ ½(1 + ξ) ρ + ½(1 − ξ) σz ρ σz`.
    pub fn dephasing(t: f64, xi: f64) -> Self {
        let mut m = Matrix4::zeros();
        m[(0, 0)] = C64::new(0.5 * (1.0 + xi), 0.0);
        m[(3, 3)] = C64::new(0.5 * (1.0 - xi), 0.0);
        ProcessMatrix { t, m }
    }

    /// `M_{νμ} = Σ_γ c^γ_μ (c^γ_ν)*` with `K_γ = Σ_μ c^γ_μ σ_μ`.
    pub fn from_kraus_operators(t: f64, operators: &[Mat2]) -> Self {
        let mut m = Matrix4::zeros();
        for k in operators {
            let c = BASIS.map(|s| crate::pauli::trace_product(&s, k) * 0.5);
            for nu in 0..4 {
                for mu in 0..4 {
                    m[(nu, mu)] += c[mu] * c[nu].conj();
                }
            }
        }
        ProcessMatrix { t, m }
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn matrix(&self) -> &Matrix4<C64> {
        &self.m
    }

    /// `Σ_{μν} σ_μ ρ σ_ν M_{νμ}`.
    pub fn apply(&self, rho: &Mat2) -> Mat2 {
        let mut out = Mat2::zeros();
        for (mu, s_mu) in BASIS.iter().enumerate() {
            let left = s_mu * rho;
            for (nu, s_nu) in BASIS.iter().enumerate() {
                let w = self.m[(nu, mu)];
                if w != C64::new(0.0, 0.0) {
                    out += left * s_nu * w;
                }
            }
        }
        out
    }

    pub fn apply_bloch(&self, r: &BlochVector) -> Result<BlochVector> {
        let rho = dynamics::bloch_to_density(r)?;
        let out = self.apply(rho.matrix());
        Ok(bloch_of(&out))
    }

    pub fn eigenvalues(&self) -> [f64; 4] {
        let h = (self.m + self.m.adjoint()) * C64::new(0.5, 0.0);
        let e = SymmetricEigen::new(h).eigenvalues;
        let mut v = [e[0], e[1], e[2], e[3]];
        v.sort_by(f64::total_cmp);
        v
    }

    pub fn trace_preservation_residual(&self) -> f64 {
        let mut sum = -IDENTITY;
        for (nu, s_nu) in BASIS.iter().enumerate() {
            for (mu, s_mu) in BASIS.iter().enumerate() {
                sum += s_nu * s_mu * self.m[(nu, mu)];
            }
        }
        sum.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn invariants(&self) -> InvariantReport {
        InvariantReport {
            hermiticity: (self.m - self.m.adjoint()).iter().map(|c| c.norm()).fold(0.0, f64::max),
            min_eigenvalue: self.eigenvalues()[0],
            trace_preservation: self.trace_preservation_residual(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let r = self.invariants();
        if r.passes() {
            Ok(())
        } else {
            Err(Error::Reconstruction(format!(
                "process matrix at t = {} violates invariants: hermiticity {:e}, min eigenvalue {:e}, trace preservation {:e}",
                self.t, r.hermiticity, r.min_eigenvalue, r.trace_preservation
            )))
        }
    }

    /// `(M + M†)/2`.
    pub fn hermitized(&self) -> Self {
        ProcessMatrix {
            t: self.t,
            m: (self.m + self.m.adjoint()) * C64::new(0.5, 0.0),
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

fn bloch_of(m: &Mat2) -> BlochVector {
    let r = |k: usize| crate::pauli::trace_product(&BASIS[k], m).re;
    BlochVector::new(r(1), r(2), r(3))
}

/// Four trajectories started from [`PROBE_INITIALS`] on a shared grid.
#[derive(Clone, Debug)]
pub struct BasisTrajectorySet {
    config: SimConfig,
    trajectories: [Trajectory; 4],
}

impl BasisTrajectorySet {
    /// Checks that the four runs share a grid.
    pub fn new(config: SimConfig, trajectories: [Trajectory; 4]) -> Result<Self> {
        let times = trajectories[0].times();
        for (mu, tr) in trajectories.iter().enumerate() {
            if tr.times() != times {
                return Err(Error::Reconstruction(format!("probe trajectory {mu} uses a different time grid")));
            }
            if tr.initial() != PROBE_INITIALS[mu] {
                return Err(Error::Reconstruction(format!("probe trajectory {mu} has the wrong initial state")));
            }
        }
        Ok(BasisTrajectorySet { config, trajectories })
    }

    pub fn config(&self) -> &SimConfig {
        &self.config
    }

    pub fn trajectory(&self, mu: usize) -> &Trajectory {
        &self.trajectories[mu]
    }

    pub fn times(&self) -> &[f64] {
        self.trajectories[0].times()
    }

    pub fn len(&self) -> usize {
        self.trajectories[0].len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `x_{k,μ}` at grid index `i`, `k ∈ 1..=3`.
    pub fn component(&self, k: usize, mu: usize, i: usize) -> f64 {
        let r = self.trajectories[mu].points()[i];
        match k {
            1 => r.x,
            2 => r.y,
            3 => r.z,
            _ => panic!("Bloch component index {k} out of range"),
        }
    }
}

/// Integrates the four probe states; the memory integrals are tabulated
/// once and the runs proceed on scoped threads.
pub fn evolve_basis(template: &SimConfig) -> Result<BasisTrajectorySet> {
    template.validate()?;
    let memory = MemoryIntegrals::precompute(&template.bath, &template.pulse, template.step_count);
    let trajectories = std::thread::scope(|s| {
        let handles = PROBE_INITIALS.map(|r0| {
            let memory = &memory;
            s.spawn(move || dynamics::integrate_with(memory, r0))
        });
        handles.map(|h| h.join().expect("probe integration panicked"))
    });
    BasisTrajectorySet::new(template.with_initial(BlochVector::Z), trajectories)
}

/// `M` from the closed-form element formulas; no checks.
pub fn assemble_raw(x: impl Fn(usize, usize) -> f64) -> Matrix4<C64> {
    let i = C64::new(0.0, 1.0);
    let q = C64::new(0.25, 0.0);
    let r = |v: f64| C64::new(v, 0.0);
    let mut m = Matrix4::zeros();

    m[(0, 0)] = q * r(-x(1, 0) + x(1, 1) - x(2, 0) + x(2, 2) - x(3, 0) + x(3, 3) + 1.0);
    m[(1, 1)] = q * r(-x(1, 0) + x(1, 1) + x(2, 0) - x(2, 2) + x(3, 0) - x(3, 3) + 1.0);
    m[(2, 2)] = q * r(x(1, 0) - x(1, 1) - x(2, 0) + x(2, 2) + x(3, 0) - x(3, 3) + 1.0);
    m[(3, 3)] = q * r(x(1, 0) - x(1, 1) + x(2, 0) - x(2, 2) - x(3, 0) + x(3, 3) + 1.0);

    m[(0, 1)] = q * (r(x(1, 0)) - i * x(2, 0) + i * x(2, 3) + i * x(3, 0) - i * x(3, 2));
    m[(1, 0)] = q * (r(x(1, 0)) + i * x(2, 0) - i * x(2, 3) - i * x(3, 0) + i * x(3, 2));
    m[(0, 2)] = q * i * (r(x(1, 0) - x(1, 3)) - i * x(2, 0) + r(-x(3, 0) + x(3, 1)));
    m[(2, 0)] = -q * i * (r(x(1, 0) - x(1, 3)) + i * x(2, 0) + r(-x(3, 0) + x(3, 1)));
    m[(0, 3)] = -q * i * (r(x(1, 0) - x(1, 2) - x(2, 0) + x(2, 1)) + i * x(3, 0));
    m[(3, 0)] = q * i * (r(x(1, 0) - x(1, 2) - x(2, 0) + x(2, 1)) - i * x(3, 0));

    m[(1, 2)] = q * (r(-x(1, 0) + x(1, 2) - x(2, 0) + x(2, 1)) + i * x(3, 0));
    m[(2, 1)] = q * (r(-x(1, 0) + x(1, 2) - x(2, 0) + x(2, 1)) - i * x(3, 0));
    m[(1, 3)] = q * (r(-x(1, 0) + x(1, 3)) - i * x(2, 0) + r(-x(3, 0) + x(3, 1)));
    m[(3, 1)] = q * (r(-x(1, 0) + x(1, 3)) + i * x(2, 0) + r(-x(3, 0) + x(3, 1)));
    m[(2, 3)] = q * i * (r(x(1, 0)) + i * x(2, 0) - i * x(2, 3) + i * x(3, 0) - i * x(3, 2));
    m[(3, 2)] = -q * i * (r(x(1, 0)) - i * x(2, 0) + i * x(2, 3) - i * x(3, 0) + i * x(3, 2));
    m
}

/// Largest deviation between `M` applied to the probe initials and the
/// evolved probes.
pub fn reconstruction_residual(m: &ProcessMatrix, evolved: &[BlochVector; 4]) -> f64 {
    PROBE_INITIALS
        .iter()
        .zip(evolved)
        .map(|(r0, rt)| {
            let rho0 = dynamics::bloch_to_density(r0).expect("probe initials are physical");
            let out = m.apply(rho0.matrix());
            let target = dynamics::bloch_to_density(rt)
                .map(|d| *d.matrix())
                .unwrap_or_else(|_| raw_density(rt));
            (out - target).iter().map(|c| c.norm()).fold(0.0, f64::max)
        })
        .fold(0.0, f64::max)
}

fn raw_density(r: &BlochVector) -> Mat2 {
    (IDENTITY + BASIS[1] * C64::from(r.x) + BASIS[2] * C64::from(r.y) + BASIS[3] * C64::from(r.z)) * C64::new(0.5, 0.0)
}

/// `M` at grid index `t_index`, checked against the physical invariants and
/// the four probe equations.
pub fn assemble(set: &BasisTrajectorySet, t_index: usize) -> Result<ProcessMatrix> {
    if t_index >= set.len() {
        return Err(Error::Reconstruction(format!(
            "grid index {t_index} out of range (grid has {} points)",
            set.len()
        )));
    }
    let m = assemble_raw(|k, mu| set.component(k, mu, t_index));
    let pm = ProcessMatrix::new(set.times()[t_index], m)?;
    let evolved = [0, 1, 2, 3].map(|mu| set.trajectory(mu).points()[t_index]);
    let residual = reconstruction_residual(&pm, &evolved);
    if residual > RECONSTRUCTION_TOL {
        return Err(Error::Reconstruction(format!(
            "probe equations not satisfied at t = {} (residual {residual:e})",
            pm.t
        )));
    }
    Ok(pm)
}

/// [`assemble`] at every grid point.
pub fn assemble_all(set: &BasisTrajectorySet) -> Result<Vec<ProcessMatrix>> {
    (0..set.len()).map(|i| assemble(set, i)).collect()
}

pub fn check_block_structure(m: &ProcessMatrix) -> BlockReport {
    let residual = OFF_BLOCK_POSITIONS.iter().map(|&p| m.m[p].norm()).fold(0.0, f64::max);
    BlockReport {
        residual,
        passes: residual <= BLOCK_TOL,
    }
}
