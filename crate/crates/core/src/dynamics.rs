//! Time-local Bloch-vector equation of the dephased, driven logical qubit:
//!
//! ```text
//! dr/dt = −4 Λ × Im G − 4 Λ × (r × Re[2F + G])
//! F(t)  = ∫₀ᵗ dt′ Λ(t′) I₁(t − t′)
//! G(t)  = ∫₀ᵗ dt′ Λ(t′) I₂(t − t′)
//! ```
//!
//! `F` and `G` depend on the bath and drive only, so they are tabulated once
//! on the half-step grid of the RK4 sweep and shared by every initial state.
//! Because `Λ` is a pure rotation at rate `ω = 2Ω`, each convolution splits
//! into running integrals `∫₀ᵗ e^{∓iωs} I(s) ds`, which are accumulated panel
//! by panel with Simpson's rule (one panel per half step).

use std::io::Write;

use nalgebra::{Matrix2, SymmetricEigen, Vector3};

use crate::control::{self, PulseSpec};
use crate::error::{Error, Result};
use crate::io::fmt_decimal;
use crate::noise::{self, BathSpec};
use crate::pauli::{Mat2, SIGMA_X, SIGMA_Y, SIGMA_Z};
use crate::C64;

/// Smallest accepted number of RK4 steps over `[0, τ]`.
pub const MIN_STEP_COUNT: usize = 1000;

/// Largest accepted `h · max(ω_c, 2Ω)`.
pub const MAX_PHASE_PER_STEP: f64 = 0.01;

/// Default step count when it resolves the bath and drive.
pub const DEFAULT_STEP_COUNT: usize = 20_000;

/// Default step count for drives the regular default cannot resolve.
pub const FINE_STEP_COUNT: usize = 200_000;

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct BlochVector {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl BlochVector {
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        BlochVector { x, y, z }
    }

    pub const ZERO: BlochVector = BlochVector::new(0.0, 0.0, 0.0);
    pub const X: BlochVector = BlochVector::new(1.0, 0.0, 0.0);
    pub const Y: BlochVector = BlochVector::new(0.0, 1.0, 0.0);
    pub const Z: BlochVector = BlochVector::new(0.0, 0.0, 1.0);

    pub fn to_vector(self) -> Vector3<f64> {
        Vector3::new(self.x, self.y, self.z)
    }

    pub fn from_vector(v: &Vector3<f64>) -> Self {
        BlochVector::new(v.x, v.y, v.z)
    }

    pub fn norm(&self) -> f64 {
        self.to_vector().norm()
    }

    pub fn distance(&self, other: &BlochVector) -> f64 {
        (self.to_vector() - other.to_vector()).norm()
    }
}

/// Trace-one Hermitian positive 2×2 matrix.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DensityMatrix2(Mat2);

impl DensityMatrix2 {
    pub const HERMITICITY_TOL: f64 = 1e-12;
    pub const TRACE_TOL: f64 = 1e-12;
    pub const EIGENVALUE_TOL: f64 = 1e-9;

    pub fn new(m: Mat2) -> Result<Self> {
        let herm = (m - m.adjoint()).iter().map(|c| c.norm()).fold(0.0, f64::max);
        if herm > Self::HERMITICITY_TOL {
            return Err(Error::NonPhysical(format!("density matrix not Hermitian (residual {herm:e})")));
        }
        let tr = m.trace();
        if (tr - C64::new(1.0, 0.0)).norm() > Self::TRACE_TOL {
            return Err(Error::NonPhysical(format!("density matrix trace {tr} != 1")));
        }
        let min = SymmetricEigen::new(m).eigenvalues.min();
        if min < -Self::EIGENVALUE_TOL {
            return Err(Error::NonPhysical(format!("density matrix eigenvalue {min:e} < 0")));
        }
        Ok(DensityMatrix2(m))
    }

    /// Pure state `|ψ⟩⟨ψ|` for `|ψ⟩ = c₁|1⟩ + c₂|2⟩` (normalized first).
    pub fn pure(c1: C64, c2: C64) -> Self {
        let n = (c1.norm_sqr() + c2.norm_sqr()).sqrt();
        let (a, b) = (c1 / n, c2 / n);
        DensityMatrix2(Matrix2::new(a * a.conj(), a * b.conj(), b * a.conj(), b * b.conj()))
    }

    pub(crate) fn from_raw(m: Mat2) -> Self {
        DensityMatrix2(m)
    }

    pub fn matrix(&self) -> &Mat2 {
        &self.0
    }

    pub fn trace(&self) -> C64 {
        self.0.trace()
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        (self.0 - self.0.adjoint()).iter().map(|c| c.norm()).fold(0.0, f64::max) <= tol
    }

    pub fn eigenvalues(&self) -> [f64; 2] {
        let e = SymmetricEigen::new(self.0).eigenvalues;
        [e[0].min(e[1]), e[0].max(e[1])]
    }
}

/// One integrator run: bath, drive, resolution and initial Bloch vector.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SimConfig {
    pub bath: BathSpec,
    pub pulse: PulseSpec,
    pub step_count: usize,
    pub initial: BlochVector,
}

impl SimConfig {
    /// Uses [`default_step_count`] for the resolution.
    pub fn new(bath: BathSpec, pulse: PulseSpec, initial: BlochVector) -> Self {
        SimConfig {
            bath,
            pulse,
            step_count: default_step_count(&bath, &pulse),
            initial,
        }
    }

    pub fn with_steps(mut self, step_count: usize) -> Self {
        self.step_count = step_count;
        self
    }

    pub fn with_initial(mut self, initial: BlochVector) -> Self {
        self.initial = initial;
        self
    }

    pub fn step(&self) -> f64 {
        1.0 / self.step_count as f64
    }

    pub fn required_step_count(&self) -> usize {
        required_step_count(&self.bath, &self.pulse)
    }

    pub fn validate(&self) -> Result<()> {
        self.bath.validate()?;
        let required = self.required_step_count();
        if self.step_count < required {
            return Err(Error::Resolution {
                step_count: self.step_count,
                required,
            });
        }
        if self.initial.norm() > 1.0 + 1e-9 {
            return Err(Error::NonPhysical(format!(
                "initial Bloch vector has norm {} > 1",
                self.initial.norm()
            )));
        }
        Ok(())
    }
}

fn fastest_rate(bath: &BathSpec, pulse: &PulseSpec) -> f64 {
    bath.omega_c.max(pulse.axis_rate().abs())
}

/// Smallest step count satisfying both [`MIN_STEP_COUNT`] and
/// [`MAX_PHASE_PER_STEP`].
pub fn required_step_count(bath: &BathSpec, pulse: &PulseSpec) -> usize {
    let by_rate = (fastest_rate(bath, pulse) / MAX_PHASE_PER_STEP).ceil() as usize;
    by_rate.max(MIN_STEP_COUNT)
}

/// [`DEFAULT_STEP_COUNT`] when it resolves the run, else [`FINE_STEP_COUNT`]
/// (or more, for drives beyond what that resolves).
pub fn default_step_count(bath: &BathSpec, pulse: &PulseSpec) -> usize {
    let required = required_step_count(bath, pulse);
    if required <= DEFAULT_STEP_COUNT {
        DEFAULT_STEP_COUNT
    } else {
        required.max(FINE_STEP_COUNT)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    times: Vec<f64>,
    points: Vec<BlochVector>,
    fidelity: Vec<f64>,
}

impl Trajectory {
    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn points(&self) -> &[BlochVector] {
        &self.points
    }

    /// `Tr[ρ(t) ρ(0)]` per grid point.
    pub fn fidelity(&self) -> &[f64] {
        &self.fidelity
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn initial(&self) -> BlochVector {
        self.points[0]
    }

    pub fn final_point(&self) -> BlochVector {
        *self.points.last().expect("trajectory has at least two points")
    }

    pub fn final_fidelity(&self) -> f64 {
        *self.fidelity.last().expect("trajectory has at least two points")
    }

    /// Columns `t, rx, ry, rz, fidelity` with a header row.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "t,rx,ry,rz,fidelity")?;
        for ((t, r), f) in self.times.iter().zip(&self.points).zip(&self.fidelity) {
            writeln!(
                w,
                "{},{},{},{},{}",
                fmt_decimal(*t),
                fmt_decimal(r.x),
                fmt_decimal(r.y),
                fmt_decimal(r.z),
                fmt_decimal(*f)
            )?;
        }
        Ok(())
    }
}

/// `Λ`, `F` and `G` sampled on the half-step grid `t_j = j h / 2`,
/// `j = 0..=2N`.
#[derive(Clone, Debug)]
pub struct MemoryIntegrals {
    spacing: f64,
    lambda: Vec<Vector3<f64>>,
    f: Vec<Vector3<C64>>,
    g: Vec<Vector3<C64>>,
}

/// Running integrals `A(t) = ∫₀ᵗ e^{−iωs} I(s) ds` and `B(t) = ∫₀ᵗ e^{iωs} I(s) ds`.
struct Modulated {
    minus: C64,
    plus: C64,
}

impl Modulated {
    /// Recombines into the `(y, z)` components of `∫₀ᵗ Λ(t′) I(t − t′) dt′`.
    fn convolution(&self, rotation: C64) -> (C64, C64) {
        let fwd = rotation * self.minus;
        let back = rotation.conj() * self.plus;
        let z = (fwd + back) * 0.5;
        let y = (fwd - back) * C64::new(0.0, -0.5);
        (y, z)
    }
}

impl MemoryIntegrals {
    /// Tabulates the memory integrals for an `step_count`-step sweep of
    /// `[0, 1]`.
    pub fn precompute(bath: &BathSpec, pulse: &PulseSpec, step_count: usize) -> Self {
        let points = 2 * step_count + 1;
        let spacing = 0.5 / step_count as f64;
        let omega = pulse.axis_rate();

        let mut lambda = Vec::with_capacity(points);
        let mut f = Vec::with_capacity(points);
        let mut g = Vec::with_capacity(points);

        let sample = |s: f64| {
            let phase = C64::from_polar(1.0, -omega * s);
            let i1 = noise::kernel_i1(bath, s);
            let i2 = noise::kernel_i2(bath, s);
            [phase * i1, phase.conj() * i1, phase * i2, phase.conj() * i2]
        };

        let zero = C64::new(0.0, 0.0);
        let mut acc = [zero; 4];
        let mut left = sample(0.0);
        for j in 0..points {
            let t = j as f64 * spacing;
            if j > 0 {
                let s0 = (j - 1) as f64 * spacing;
                let mid = sample(s0 + 0.5 * spacing);
                let right = sample(t);
                let w = spacing / 6.0;
                for k in 0..4 {
                    acc[k] += (left[k] + mid[k] * 4.0 + right[k]) * w;
                }
                left = right;
            }
            let rotation = C64::from_polar(1.0, omega * t);
            let (f_y, f_z) = Modulated {
                minus: acc[0],
                plus: acc[1],
            }
            .convolution(rotation);
            let (g_y, g_z) = Modulated {
                minus: acc[2],
                plus: acc[3],
            }
            .convolution(rotation);
            lambda.push(control::axis_at(pulse, t));
            f.push(Vector3::new(zero, f_y, f_z));
            g.push(Vector3::new(zero, g_y, g_z));
        }

        MemoryIntegrals { spacing, lambda, f, g }
    }

    pub fn len(&self) -> usize {
        self.lambda.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lambda.is_empty()
    }

    /// Grid spacing `h / 2`.
    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn time(&self, j: usize) -> f64 {
        j as f64 * self.spacing
    }

    pub fn lambda(&self, j: usize) -> &Vector3<f64> {
        &self.lambda[j]
    }

    pub fn f(&self, j: usize) -> &Vector3<C64> {
        &self.f[j]
    }

    pub fn g(&self, j: usize) -> &Vector3<C64> {
        &self.g[j]
    }

    fn rhs(&self, j: usize, r: &Vector3<f64>) -> Vector3<f64> {
        bloch_rhs(r, &self.lambda[j], &self.f[j], &self.g[j])
    }
}

fn check_time(t: f64) -> Result<()> {
    if (0.0..=1.0).contains(&t) {
        Ok(())
    } else {
        Err(Error::domain("t", t, "time must lie in [0, 1]"))
    }
}

/// Composite Simpson evaluation of `∫₀ᵗ Λ(t′) K(t − t′) dt′` directly in
/// the convolution form, with panels no wider than `quadrature_step`.
fn direct_convolution(pulse: &PulseSpec, t: f64, quadrature_step: f64, kernel: impl Fn(f64) -> C64) -> Result<Vector3<C64>> {
    check_time(t)?;
    if !(quadrature_step > 0.0) {
        return Err(Error::domain("quadrature_step", quadrature_step, "must be > 0"));
    }
    let zero = Vector3::new(C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0));
    if t == 0.0 {
        return Ok(zero);
    }
    let panels = (t / quadrature_step).ceil().max(1.0) as usize;
    let width = t / panels as f64;
    let integrand = |tp: f64| -> Vector3<C64> {
        let k = kernel(t - tp);
        control::axis_at(pulse, tp).map(|c| k * c)
    };
    let mut sum = zero;
    for p in 0..panels {
        let a = p as f64 * width;
        sum += (integrand(a) + integrand(a + 0.5 * width) * C64::new(4.0, 0.0) + integrand(a + width)) * C64::new(width / 6.0, 0.0);
    }
    Ok(sum)
}

/// `F(t)` by composite Simpson on panels of width at most `quadrature_step`.
pub fn memory_f(bath: &BathSpec, pulse: &PulseSpec, t: f64, quadrature_step: f64) -> Result<Vector3<C64>> {
    direct_convolution(pulse, t, quadrature_step, |s| noise::kernel_i1(bath, s))
}

/// `G(t)`, as [`memory_f`] with the vacuum kernel.
pub fn memory_g(bath: &BathSpec, pulse: &PulseSpec, t: f64, quadrature_step: f64) -> Result<Vector3<C64>> {
    direct_convolution(pulse, t, quadrature_step, |s| noise::kernel_i2(bath, s))
}

pub fn bloch_rhs(r: &Vector3<f64>, lambda: &Vector3<f64>, f: &Vector3<C64>, g: &Vector3<C64>) -> Vector3<f64> {
    let im_g = g.map(|c| c.im);
    let damping = f.zip_map(g, |a, b| 2.0 * a.re + b.re);
    -4.0 * lambda.cross(&im_g) - 4.0 * lambda.cross(&r.cross(&damping))
}

/// Fixed-step RK4 sweep of `[0, 1]`.
pub fn integrate(config: &SimConfig) -> Result<Trajectory> {
    config.validate()?;
    let memory = MemoryIntegrals::precompute(&config.bath, &config.pulse, config.step_count);
    Ok(integrate_with(&memory, config.initial))
}

/// RK4 sweep reusing tabulated memory integrals; the step is twice the
/// tabulation spacing.
pub fn integrate_with(memory: &MemoryIntegrals, initial: BlochVector) -> Trajectory {
    let steps = (memory.len() - 1) / 2;
    let h = 2.0 * memory.spacing();
    let r0 = initial.to_vector();

    let mut times = Vec::with_capacity(steps + 1);
    let mut points = Vec::with_capacity(steps + 1);
    let mut fidelity = Vec::with_capacity(steps + 1);

    let mut r = r0;
    let mut record = |i: usize, r: &Vector3<f64>| {
        times.push(i as f64 / steps as f64);
        points.push(BlochVector::from_vector(r));
        fidelity.push(0.5 * (1.0 + r.dot(&r0)));
    };
    record(0, &r);
    for i in 0..steps {
        let j = 2 * i;
        let k1 = memory.rhs(j, &r);
        let k2 = memory.rhs(j + 1, &(r + k1 * (0.5 * h)));
        let k3 = memory.rhs(j + 1, &(r + k2 * (0.5 * h)));
        let k4 = memory.rhs(j + 2, &(r + k3 * h));
        r += (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0);
        record(i + 1, &r);
    }

    Trajectory { times, points, fidelity }
}

/// `ρ = ½(𝕀 + r·σ)`.
pub fn bloch_to_density(r: &BlochVector) -> Result<DensityMatrix2> {
    let norm = r.norm();
    if !norm.is_finite() || norm > 1.0 + 1e-6 {
        return Err(Error::NonPhysical(format!("Bloch vector norm {norm} exceeds 1")));
    }
    let half = C64::new(0.5, 0.0);
    let m = (Matrix2::identity() + SIGMA_X * C64::from(r.x) + SIGMA_Y * C64::from(r.y) + SIGMA_Z * C64::from(r.z)) * half;
    Ok(DensityMatrix2::from_raw(m))
}

/// `r = Tr[σ ρ]`.
pub fn density_to_bloch(rho: &DensityMatrix2) -> BlochVector {
    let m = rho.matrix();
    BlochVector::new(
        crate::pauli::trace_product(&SIGMA_X, m).re,
        crate::pauli::trace_product(&SIGMA_Y, m).re,
        crate::pauli::trace_product(&SIGMA_Z, m).re,
    )
}

/// `Tr[ρ(t) ρ(0)]` for a pure reference `ρ(0)`.
pub fn fidelity(rho_t: &DensityMatrix2, rho_0: &DensityMatrix2) -> f64 {
    crate::pauli::trace_product(rho_t.matrix(), rho_0.matrix()).re
}
