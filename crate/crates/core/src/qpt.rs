//! Linear-inversion process tomography with four preparations and six
//! Pauli-eigenstate effects.
//!
//! The probability of effect `E_k` after preparing `ρ_i` is
//! `p_{ik} = Σ_{μν} M_{νμ} Q^{ik}_{μν}` with `Q^{ik}_{μν} = Tr[σ_μ ρ_i σ_ν E_k]`.
//! Stacking the 24 probabilities (row `4k + i`) and the 16 entries of `M`
//! (column-major) gives `|p⟩ = A |M⟩`, which is inverted by least squares.

use std::io::Write;

use nalgebra::{Matrix4, SMatrix, SVector, SVD};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};

use crate::dynamics::{self, BlochVector, DensityMatrix2};
use crate::error::{Error, Result};
use crate::io::fmt_decimal;
use crate::pauli::{trace_product, Mat2, BASIS, IDENTITY};
use crate::ptm::{ProcessMatrix, PROBE_INITIALS};
use crate::C64;

pub const PREPARATIONS: usize = 4;
pub const EFFECTS: usize = 6;
pub const ROWS: usize = PREPARATIONS * EFFECTS;

/// Smallest accepted `σ_min / σ_max` of the superoperator.
pub const RANK_TOL: f64 = 1e-8;

pub type SuperMatrix = SMatrix<C64, ROWS, 16>;

/// Projectors onto `±x, ±y, ±z`, in that order.
#[derive(Clone, Debug, PartialEq)]
pub struct PovmSet {
    effects: [Mat2; EFFECTS],
}

impl Default for PovmSet {
    fn default() -> Self {
        let half = C64::new(0.5, 0.0);
        let mut effects = [IDENTITY; EFFECTS];
        for j in 0..3 {
            effects[2 * j] = (IDENTITY + BASIS[j + 1]) * half;
            effects[2 * j + 1] = (IDENTITY - BASIS[j + 1]) * half;
        }
        PovmSet { effects }
    }
}

impl PovmSet {
    pub fn effects(&self) -> &[Mat2; EFFECTS] {
        &self.effects
    }

    pub fn effect(&self, k: usize) -> &Mat2 {
        &self.effects[k]
    }
}

/// Preparations with Bloch vectors `0, x̂, ŷ, ẑ`.
#[derive(Clone, Debug, PartialEq)]
pub struct PrepSet {
    states: [DensityMatrix2; PREPARATIONS],
}

impl Default for PrepSet {
    fn default() -> Self {
        PrepSet {
            states: PROBE_INITIALS.map(|r| dynamics::bloch_to_density(&r).expect("probe states are physical")),
        }
    }
}

impl PrepSet {
    pub fn states(&self) -> &[DensityMatrix2; PREPARATIONS] {
        &self.states
    }

    pub fn state(&self, i: usize) -> &DensityMatrix2 {
        &self.states[i]
    }

    pub fn bloch_vectors(&self) -> [BlochVector; PREPARATIONS] {
        self.states.map(|s| dynamics::density_to_bloch(&s))
    }
}

/// `p[i][k]` for preparation `i` and effect `k`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProbabilityTable {
    p: [[f64; EFFECTS]; PREPARATIONS],
}

impl ProbabilityTable {
    pub fn new(p: [[f64; EFFECTS]; PREPARATIONS]) -> Self {
        ProbabilityTable { p }
    }

    pub fn get(&self, i: usize, k: usize) -> f64 {
        self.p[i][k]
    }

    pub fn rows(&self) -> &[[f64; EFFECTS]; PREPARATIONS] {
        &self.p
    }

    /// Flattened with row index `4k + i`.
    pub fn to_vector(&self) -> SVector<f64, ROWS> {
        SVector::from_fn(|r, _| self.p[r % PREPARATIONS][r / PREPARATIONS])
    }

    pub fn from_vector(v: &SVector<f64, ROWS>) -> Self {
        let mut p = [[0.0; EFFECTS]; PREPARATIONS];
        for (r, x) in v.iter().enumerate() {
            p[r % PREPARATIONS][r / PREPARATIONS] = *x;
        }
        ProbabilityTable { p }
    }

    /// `max |p[i][2j] + p[i][2j+1] − 1|`.
    pub fn complementarity_residual(&self) -> f64 {
        self.p
            .iter()
            .flat_map(|row| (0..3).map(move |j| (row[2 * j] + row[2 * j + 1] - 1.0).abs()))
            .fold(0.0, f64::max)
    }

    pub fn max_abs_difference(&self, other: &ProbabilityTable) -> f64 {
        (self.to_vector() - other.to_vector()).abs().max()
    }

    /// Columns `i, k, p`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "i,k,p")?;
        for k in 0..EFFECTS {
            for i in 0..PREPARATIONS {
                writeln!(w, "{i},{k},{}", fmt_decimal(self.p[i][k]))?;
            }
        }
        Ok(())
    }
}

/// `Q[i][k]` with entry `(μ, ν)` equal to `Tr[σ_μ ρ_i σ_ν E_k]`.
#[derive(Clone, Debug, PartialEq)]
pub struct QTensor {
    q: [[Matrix4<C64>; EFFECTS]; PREPARATIONS],
}

impl QTensor {
    pub fn get(&self, i: usize, k: usize) -> &Matrix4<C64> {
        &self.q[i][k]
    }
}

pub fn q_tensor(preps: &PrepSet, povm: &PovmSet) -> QTensor {
    let q = std::array::from_fn(|i| {
        let rho = preps.state(i).matrix();
        std::array::from_fn(|k| {
            let e = povm.effect(k);
            Matrix4::from_fn(|mu, nu| trace_product(&(BASIS[mu] * rho * BASIS[nu]), e))
        })
    });
    QTensor { q }
}

/// Column-major position of `M_{νμ}` in `|M⟩`.
pub fn stacked_index(nu: usize, mu: usize) -> usize {
    nu + 4 * mu
}

/// The 24×16 map `|M⟩ ↦ |p⟩` with its least-squares inverse.
#[derive(Clone, Debug)]
pub struct Superoperator {
    a: SuperMatrix,
    pseudo_inverse: SMatrix<C64, 16, ROWS>,
    singular_values: SVector<f64, 16>,
}

impl Superoperator {
    pub fn matrix(&self) -> &SuperMatrix {
        &self.a
    }

    /// Descending.
    pub fn singular_values(&self) -> &SVector<f64, 16> {
        &self.singular_values
    }

    pub fn condition_ratio(&self) -> f64 {
        self.singular_values.min() / self.singular_values.max()
    }

    pub fn apply(&self, m: &ProcessMatrix) -> ProbabilityTable {
        let v = stack(m.matrix());
        ProbabilityTable::from_vector(&(self.a * v).map(|c| c.re))
    }
}

fn stack(m: &Matrix4<C64>) -> SVector<C64, 16> {
    SVector::from_fn(|r, _| m[(r % 4, r / 4)])
}

fn unstack(v: &SVector<C64, 16>) -> Matrix4<C64> {
    Matrix4::from_fn(|nu, mu| v[stacked_index(nu, mu)])
}

/// Row `4k + i` is `Q^{ik}` transposed and column-stacked.
pub fn assemble_superoperator(q: &QTensor) -> Result<Superoperator> {
    let a = SuperMatrix::from_fn(|row, col| {
        let (i, k) = (row % PREPARATIONS, row / PREPARATIONS);
        let (nu, mu) = (col % 4, col / 4);
        q.get(i, k)[(mu, nu)]
    });
    let svd = SVD::new(a, true, true);
    let mut singular_values = svd.singular_values;
    singular_values.as_mut_slice().sort_by(|x, y| y.total_cmp(x));
    let ratio = singular_values.min() / singular_values.max();
    if !(ratio > RANK_TOL) {
        return Err(Error::RankDeficiency { ratio });
    }
    let pseudo_inverse = svd
        .pseudo_inverse(RANK_TOL * singular_values.max())
        .map_err(|e| Error::Reconstruction(e.to_string()))?;
    Ok(Superoperator {
        a,
        pseudo_inverse,
        singular_values,
    })
}

/// Superoperator of the default preparations and effects.
pub fn standard_superoperator() -> Superoperator {
    assemble_superoperator(&q_tensor(&PrepSet::default(), &PovmSet::default()))
        .expect("standard tomography set is informationally complete")
}

/// Single-operator channel `K = (σx + σz)/√2`, with the entries `½` exact.
pub fn hadamard_channel() -> ProcessMatrix {
    let mut m = Matrix4::zeros();
    for (nu, mu) in [(1, 1), (1, 3), (3, 1), (3, 3)] {
        m[(nu, mu)] = C64::new(0.5, 0.0);
    }
    ProcessMatrix::from_raw(0.0, m)
}

/// `p_{ik} = Σ M_{νμ} Q^{ik}_{μν}`.
pub fn forward_probabilities(m: &ProcessMatrix, preps: &PrepSet, povm: &PovmSet) -> ProbabilityTable {
    let mut p = [[0.0; EFFECTS]; PREPARATIONS];
    for (i, row) in p.iter_mut().enumerate() {
        let out = m.apply(preps.state(i).matrix());
        for (k, x) in row.iter_mut().enumerate() {
            *x = trace_product(&out, povm.effect(k)).re;
        }
    }
    ProbabilityTable { p }
}

/// Least-squares `M`, Hermitized; no physicality projection.
pub fn tomographic_inverse(p: &ProbabilityTable, a: &Superoperator) -> ProcessMatrix {
    let pv = p.to_vector().map(|x| C64::new(x, 0.0));
    let m = unstack(&(a.pseudo_inverse * pv));
    ProcessMatrix::from_raw(f64::NAN, m).hermitized()
}

/// As [`tomographic_inverse`] with the time stamp of the source channel.
pub fn tomographic_inverse_at(t: f64, p: &ProbabilityTable, a: &Superoperator) -> ProcessMatrix {
    ProcessMatrix::from_raw(t, *tomographic_inverse(p, a).matrix())
}

/// Binomial sampling of each `(preparation, axis)` experiment.
pub fn sample_frequencies(p: &ProbabilityTable, shots: u64, seed: u64) -> Result<ProbabilityTable> {
    if shots == 0 {
        return Err(Error::domain("shots", 0.0, "need at least one shot"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = [[0.0; EFFECTS]; PREPARATIONS];
    for (row, exact) in out.iter_mut().zip(&p.p) {
        for j in 0..3 {
            let prob = exact[2 * j].clamp(0.0, 1.0);
            let dist = Binomial::new(shots, prob).map_err(|e| Error::Parse(e.to_string()))?;
            let hits = dist.sample(&mut rng);
            let f = hits as f64 / shots as f64;
            row[2 * j] = f;
            row[2 * j + 1] = 1.0 - f;
        }
    }
    Ok(ProbabilityTable { p: out })
}
