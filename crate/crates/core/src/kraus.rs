//! Kraus decomposition of a block-diagonal process matrix and the
//! three-dimensional Kraus-vector encoding.
//!
//! `M` splits into the `(𝕀, σx)` block and the `(σy, σz)` block. Each 2×2
//! block `[[c, ρe^{iφ}], [ρe^{−iφ}, d]]` has eigenvalues `(c+d)/2 ± R`,
//! `R = √(δ² + ρ²)`, `δ = (c−d)/2`, and eigenvectors built from
//!
//! ```text
//! u± = e^{±iφ/2} √((1 ± δ/R)/2)
//! ```
//!
//! The four operators use fixed global phases:
//!
//! ```text
//! K₀ = √D₀ (|u₊| 𝕀 + e^{iφ}|u₋| σx)        K₁ = √D₁ (|u₋| 𝕀 − e^{iφ}|u₊| σx)
//! K₂ = σz √D₂ (|ũ₋| 𝕀 − i e^{−iφ̃}|ũ₊| σx)  K₃ = σz √D₃ (|ũ₊| 𝕀 + i e^{−iφ̃}|ũ₋| σx)
//! ```
//!
//! so that `K_γ|1⟩` has Bloch angles `(θ_γ, φ_γ)` read directly off the
//! amplitudes. The Kraus vector is `v_γ = √D_γ (sinθ cosφ, sinθ sinφ, cosθ)`.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::io::Write;

use nalgebra::{Vector2, Vector3};

use crate::error::{Error, Result};
use crate::io::fmt_decimal;
use crate::pauli::{Mat2, IDENTITY, SIGMA_X, SIGMA_Z};
use crate::ptm::{self, ProcessMatrix};
use crate::C64;

/// Eigenvalues in `[−CLAMP_TOL, 0)` are treated as round-off and set to 0.
pub const CLAMP_TOL: f64 = 1e-6;

/// Gaps at or below this are treated as degenerate by the branch matcher.
pub const DEGENERACY_GAP: f64 = 1e-12;

/// One Hermitian 2×2 block `[[c, a + ib], [a − ib, d]]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BlockParams {
    pub c: f64,
    pub d: f64,
    pub a: f64,
    pub b: f64,
}

impl BlockParams {
    pub fn new(c: f64, d: f64, off_diagonal: C64) -> Self {
        BlockParams {
            c,
            d,
            a: off_diagonal.re,
            b: off_diagonal.im,
        }
    }

    /// `(𝕀, σx)` block of `M`.
    pub fn upper(m: &ProcessMatrix) -> Self {
        let m = m.matrix();
        BlockParams::new(m[(0, 0)].re, m[(1, 1)].re, m[(0, 1)])
    }

    /// `(σy, σz)` block of `M`.
    pub fn lower(m: &ProcessMatrix) -> Self {
        let m = m.matrix();
        BlockParams::new(m[(2, 2)].re, m[(3, 3)].re, m[(2, 3)])
    }

    pub fn rho_mag(&self) -> f64 {
        self.a.hypot(self.b)
    }

    /// 0 when the off-diagonal vanishes.
    pub fn phi(&self) -> f64 {
        if self.a == 0.0 && self.b == 0.0 {
            0.0
        } else {
            self.b.atan2(self.a)
        }
    }

    pub fn delta(&self) -> f64 {
        0.5 * (self.c - self.d)
    }

    pub fn mean(&self) -> f64 {
        0.5 * (self.c + self.d)
    }
}

/// Eigen-decomposition of a [`BlockParams`].
///
/// `(u₊, u₋)` is the eigenvector of `d_plus` and `(u₋*, −u₊*)` that of
/// `d_minus`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BlockEigen {
    pub d_plus: f64,
    pub d_minus: f64,
    pub u_plus: C64,
    pub u_minus: C64,
    pub phi: f64,
}

impl BlockEigen {
    pub fn abs_plus(&self) -> f64 {
        self.u_plus.norm()
    }

    pub fn abs_minus(&self) -> f64 {
        self.u_minus.norm()
    }

    pub fn plus_vector(&self) -> Vector2<C64> {
        Vector2::new(self.u_plus, self.u_minus)
    }

    pub fn minus_vector(&self) -> Vector2<C64> {
        Vector2::new(self.u_minus.conj(), -self.u_plus.conj())
    }

    pub fn gap(&self) -> f64 {
        self.d_plus - self.d_minus
    }
}

/// Closed-form eigenpairs; a degenerate block takes `u₊ = 1`, `u₋ = 0`.
pub fn diagonalize_block(block: &BlockParams) -> BlockEigen {
    let delta = block.delta();
    let rho = block.rho_mag();
    let phi = block.phi();
    let r = delta.hypot(rho);
    let (abs_plus, abs_minus) = if r == 0.0 {
        (1.0, 0.0)
    } else {
        // The smaller amplitude comes from 2|u₊||u₋| = ρ/r, since √(1 − |s|)
        // cancels when ρ ≪ |δ|.
        let s = (delta / r).clamp(-1.0, 1.0);
        let large = ((1.0 + s.abs()) * 0.5).sqrt();
        let small = 0.5 * rho / (r * large);
        if s >= 0.0 {
            (large, small)
        } else {
            (small, large)
        }
    };
    BlockEigen {
        d_plus: block.mean() + r,
        d_minus: block.mean() - r,
        u_plus: C64::from_polar(abs_plus, 0.5 * phi),
        u_minus: C64::from_polar(abs_minus, -0.5 * phi),
        phi,
    }
}

/// Bloch angles of `K_γ|1⟩`; `θ ∈ [0, π]`, `φ ∈ (−π, π]`.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct KrausAngles {
    pub theta: f64,
    pub phi: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct KrausVector {
    pub v: Vector3<f64>,
}

impl KrausVector {
    pub fn from_angles(weight: f64, angles: &KrausAngles) -> Self {
        let s = weight.sqrt();
        let (st, ct) = angles.theta.sin_cos();
        let (sp, cp) = angles.phi.sin_cos();
        KrausVector {
            v: Vector3::new(s * st * cp, s * st * sp, s * ct),
        }
    }

    pub fn norm(&self) -> f64 {
        self.v.norm()
    }
}

/// Four Kraus operators at one instant, in the natural order
/// `(D₊, D₋, D̃₊, D̃₋)`.
#[derive(Clone, Debug, PartialEq)]
pub struct KrausSet {
    t: f64,
    operators: [Mat2; 4],
    weights: [f64; 4],
    upper: BlockEigen,
    lower: BlockEigen,
}

fn clamp_weight(d: f64, gamma: usize, t: f64) -> Result<f64> {
    if d >= 0.0 {
        Ok(d)
    } else if d >= -CLAMP_TOL {
        Ok(0.0)
    } else {
        Err(Error::NonPhysical(format!("Kraus weight D{gamma} = {d:e} < 0 at t = {t}")))
    }
}

fn wrap_phase(x: f64) -> f64 {
    let y = x.rem_euclid(2.0 * PI);
    if y > PI {
        y - 2.0 * PI
    } else {
        y
    }
}

fn half_angle(amplitude: f64) -> f64 {
    2.0 * amplitude.clamp(0.0, 1.0).acos()
}

impl KrausSet {
    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn operators(&self) -> &[Mat2; 4] {
        &self.operators
    }

    pub fn weights(&self) -> &[f64; 4] {
        &self.weights
    }

    pub fn upper(&self) -> &BlockEigen {
        &self.upper
    }

    pub fn lower(&self) -> &BlockEigen {
        &self.lower
    }

    /// `Σ K_γ ρ K_γ†`.
    pub fn apply(&self, rho: &Mat2) -> Mat2 {
        self.operators.iter().map(|k| k * rho * k.adjoint()).sum()
    }

    /// `max |Σ K†K − 𝕀|`.
    pub fn completeness_residual(&self) -> f64 {
        let s: Mat2 = self.operators.iter().map(|k| k.adjoint() * k).sum();
        (s - IDENTITY).iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn weight_sum(&self) -> f64 {
        self.weights.iter().sum()
    }
}

/// Kraus operators of a block-diagonal `M`.
pub fn build_kraus(m: &ProcessMatrix) -> Result<KrausSet> {
    let block = ptm::check_block_structure(m);
    if !block.passes {
        return Err(Error::NonPhysical(format!(
            "process matrix at t = {} is not block diagonal (residual {:e})",
            m.t(),
            block.residual
        )));
    }
    let upper = diagonalize_block(&BlockParams::upper(m));
    let lower = diagonalize_block(&BlockParams::lower(m));
    let t = m.t();
    let weights = [
        clamp_weight(upper.d_plus, 0, t)?,
        clamp_weight(upper.d_minus, 1, t)?,
        clamp_weight(lower.d_plus, 2, t)?,
        clamp_weight(lower.d_minus, 3, t)?,
    ];

    let i = C64::new(0.0, 1.0);
    let phase = C64::from_polar(1.0, upper.phi);
    let phase_l = C64::from_polar(1.0, -lower.phi);
    let re = |x: f64| C64::new(x, 0.0);
    let k0 = (IDENTITY * re(upper.abs_plus()) + SIGMA_X * (phase * upper.abs_minus())) * re(weights[0].sqrt());
    let k1 = (IDENTITY * re(upper.abs_minus()) - SIGMA_X * (phase * upper.abs_plus())) * re(weights[1].sqrt());
    let k2 = SIGMA_Z * (IDENTITY * re(lower.abs_minus()) - SIGMA_X * (i * phase_l * lower.abs_plus())) * re(weights[2].sqrt());
    let k3 = SIGMA_Z * (IDENTITY * re(lower.abs_plus()) + SIGMA_X * (i * phase_l * lower.abs_minus())) * re(weights[3].sqrt());

    Ok(KrausSet {
        t,
        operators: [k0, k1, k2, k3],
        weights,
        upper,
        lower,
    })
}

pub fn kraus_angles(set: &KrausSet) -> [KrausAngles; 4] {
    let (u, l) = (&set.upper, &set.lower);
    [
        KrausAngles {
            theta: half_angle(u.abs_plus()),
            phi: wrap_phase(u.phi),
        },
        KrausAngles {
            theta: half_angle(u.abs_minus()),
            phi: wrap_phase(u.phi + PI),
        },
        KrausAngles {
            theta: half_angle(l.abs_minus()),
            phi: wrap_phase(FRAC_PI_2 - l.phi),
        },
        KrausAngles {
            theta: half_angle(l.abs_plus()),
            phi: wrap_phase(-FRAC_PI_2 - l.phi),
        },
    ]
}

pub fn kraus_vectors(set: &KrausSet) -> [KrausVector; 4] {
    let angles = kraus_angles(set);
    [0, 1, 2, 3].map(|g| KrausVector::from_angles(set.weights[g], &angles[g]))
}

/// Emitted when branch continuity relabels the two Kraus operators of a
/// block.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BranchSwapWarning {
    pub t: f64,
    pub index: usize,
    /// The two γ labels that were exchanged.
    pub labels: (usize, usize),
}

impl fmt::Display for BranchSwapWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "eigenvalue branches crossed at t = {}: Kraus labels {} and {} exchanged",
            self.t, self.labels.0, self.labels.1
        )
    }
}

/// Kraus data for one grid point, in continuity-matched label order.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KrausSample {
    pub t: f64,
    pub weights: [f64; 4],
    pub angles: [KrausAngles; 4],
    pub vectors: [KrausVector; 4],
}

#[derive(Clone, Debug, PartialEq, Default)]
pub struct KrausTrajectory {
    samples: Vec<KrausSample>,
    warnings: Vec<BranchSwapWarning>,
}

impl KrausTrajectory {
    pub fn samples(&self) -> &[KrausSample] {
        &self.samples
    }

    pub fn warnings(&self) -> &[BranchSwapWarning] {
        &self.warnings
    }

    pub fn path(&self, gamma: usize) -> Vec<Vector3<f64>> {
        self.samples.iter().map(|s| s.vectors[gamma].v).collect()
    }

    /// Columns `t, gamma, D, theta, phi, vx, vy, vz`; all labels when
    /// `gamma` is `None`.
    pub fn write_csv<W: Write>(&self, mut w: W, gamma: Option<usize>) -> Result<()> {
        writeln!(w, "t,gamma,D,theta,phi,vx,vy,vz")?;
        for s in &self.samples {
            for g in 0..4 {
                if gamma.is_some_and(|only| only != g) {
                    continue;
                }
                let v = s.vectors[g].v;
                writeln!(
                    w,
                    "{},{},{},{},{},{},{},{}",
                    fmt_decimal(s.t),
                    g,
                    fmt_decimal(s.weights[g]),
                    fmt_decimal(s.angles[g].theta),
                    fmt_decimal(s.angles[g].phi),
                    fmt_decimal(v.x),
                    fmt_decimal(v.y),
                    fmt_decimal(v.z)
                )?;
            }
        }
        Ok(())
    }
}

fn overlap(a: &Vector2<C64>, b: &Vector2<C64>) -> f64 {
    a.dotc(b).norm()
}

/// Per-block label matcher. Eigenvectors of a degenerate block are
/// arbitrary, so matching always compares against the last
/// non-degenerate step.
struct BranchTracker {
    swapped: bool,
    previous: Option<(Vector2<C64>, Vector2<C64>)>,
}

impl BranchTracker {
    fn new() -> Self {
        BranchTracker {
            swapped: false,
            previous: None,
        }
    }

    /// Returns whether the labels changed at this step.
    fn update(&mut self, eig: &BlockEigen) -> bool {
        if eig.gap() <= DEGENERACY_GAP {
            return false;
        }
        let (plus, minus) = (eig.plus_vector(), eig.minus_vector());
        let mut changed = false;
        if let Some((p0, p1)) = &self.previous {
            let (slot0, slot1) = if self.swapped { (&minus, &plus) } else { (&plus, &minus) };
            let keep = overlap(p0, slot0) + overlap(p1, slot1);
            let flip = overlap(p0, slot1) + overlap(p1, slot0);
            if flip > keep {
                self.swapped = !self.swapped;
                changed = true;
            }
        }
        let (s0, s1) = if self.swapped { (minus, plus) } else { (plus, minus) };
        self.previous = Some((s0, s1));
        changed
    }
}

/// Kraus vectors along a time series of process matrices with
/// eigenvector-overlap branch matching.
pub fn kraus_trajectory(matrices: &[ProcessMatrix]) -> Result<KrausTrajectory> {
    let mut trackers = [BranchTracker::new(), BranchTracker::new()];
    let mut out = KrausTrajectory::default();
    for (index, m) in matrices.iter().enumerate() {
        let set = build_kraus(m)?;
        let angles = kraus_angles(&set);
        let vectors = kraus_vectors(&set);
        let mut order = [0usize, 1, 2, 3];
        for (block, (tracker, eig)) in trackers.iter_mut().zip([&set.upper, &set.lower]).enumerate() {
            let (a, b) = (2 * block, 2 * block + 1);
            if tracker.update(eig) {
                out.warnings.push(BranchSwapWarning {
                    t: set.t,
                    index,
                    labels: (a, b),
                });
            }
            if tracker.swapped {
                order.swap(a, b);
            }
        }
        out.samples.push(KrausSample {
            t: set.t,
            weights: order.map(|g| set.weights[g]),
            angles: order.map(|g| angles[g]),
            vectors: order.map(|g| vectors[g]),
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::{BASIS, SIGMA_Y};
    use nalgebra::{Matrix2, Matrix4};
    use std::f64::consts::FRAC_1_SQRT_2;

    fn max_abs(m: &Mat2) -> f64 {
        m.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    fn block_matrix(b: &BlockParams) -> Mat2 {
        Matrix2::new(C64::new(b.c, 0.0), C64::new(b.a, b.b), C64::new(b.a, -b.b), C64::new(b.d, 0.0))
    }

    #[test]
    fn diagonal_and_symmetric_blocks() {
        let e = diagonalize_block(&BlockParams::new(0.7, 0.2, C64::new(0.0, 0.0)));
        assert!((e.d_plus - 0.7).abs() < 1e-15 && (e.d_minus - 0.2).abs() < 1e-15);
        assert_eq!((e.abs_plus(), e.abs_minus()), (1.0, 0.0));

        let e = diagonalize_block(&BlockParams::new(0.3, 0.3, C64::new(0.5, 0.0)));
        assert!((e.d_plus - 0.8).abs() < 1e-15 && (e.d_minus + 0.2).abs() < 1e-15);
        assert!((e.abs_plus() - FRAC_1_SQRT_2).abs() < 1e-15);
        assert!((e.abs_minus() - FRAC_1_SQRT_2).abs() < 1e-15);
        assert_eq!(e.phi, 0.0);

        let e = diagonalize_block(&BlockParams::new(0.4, 0.4, C64::new(0.0, 0.0)));
        assert_eq!((e.abs_plus(), e.abs_minus(), e.phi), (1.0, 0.0, 0.0));
    }

    #[test]
    fn eigenpairs_reconstruct_block() {
        for b in [
            BlockParams::new(0.6, 0.1, C64::new(0.1, -0.2)),
            BlockParams::new(0.1, 0.6, C64::new(-0.3, 0.05)),
            BlockParams::new(0.0, 0.0, C64::new(0.0, 0.2)),
            BlockParams::new(1.0, 2.8e-17, C64::new(-1.4e-11, 5.0e-9)),
            BlockParams::new(3.0e-17, 0.9, C64::new(4.0e-9, 1.0e-10)),
        ] {
            let e = diagonalize_block(&b);
            let (p, m) = (e.plus_vector(), e.minus_vector());
            let rec = p * p.adjoint() * C64::from(e.d_plus) + m * m.adjoint() * C64::from(e.d_minus);
            assert!(max_abs(&(rec - block_matrix(&b))) < 1e-12);
            assert!((e.abs_plus().powi(2) + e.abs_minus().powi(2) - 1.0).abs() < 1e-15);
            assert!(p.dotc(&m).norm() < 1e-15);
        }
    }

    #[test]
    fn identity_channel_decomposition() {
        let set = build_kraus(&ProcessMatrix::identity(0.0)).unwrap();
        assert_eq!(set.operators()[0], IDENTITY);
        for k in &set.operators()[1..] {
            assert_eq!(max_abs(k), 0.0);
        }
        let a = kraus_angles(&set);
        assert_eq!((a[0].theta, a[0].phi), (0.0, 0.0));
        let v = kraus_vectors(&set);
        assert_eq!(v[0].v, Vector3::new(0.0, 0.0, 1.0));
        for k in &v[1..] {
            assert_eq!(k.norm(), 0.0);
        }
    }

    #[test]
    fn dephasing_decomposition() {
        let xi = 0.35;
        let set = build_kraus(&ProcessMatrix::dephasing(0.0, xi)).unwrap();
        let k = set.operators();
        assert!(max_abs(&(k[0] - IDENTITY * C64::from((0.5 * (1.0 + xi)).sqrt()))) < 1e-15);
        assert!(max_abs(&(k[2] - SIGMA_Z * C64::from((0.5 * (1.0 - xi)).sqrt()))) < 1e-15);
        assert_eq!(max_abs(&k[1]), 0.0);
        assert_eq!(max_abs(&k[3]), 0.0);
        let v = kraus_vectors(&set);
        assert!((v[0].norm() - (0.5 * (1.0 + xi)).sqrt()).abs() < 1e-15);
        assert!(v[0].v.x == 0.0 && v[0].v.y == 0.0);
        assert!((v[2].v - Vector3::new(0.0, 0.0, (0.5 * (1.0 - xi)).sqrt())).norm() < 1e-15);
    }

    #[test]
    fn angle_conventions() {
        let set = build_kraus(&ProcessMatrix::from_raw(0.0, {
            let mut m = Matrix4::zeros();
            m[(0, 0)] = C64::new(0.5, 0.0);
            m[(1, 1)] = C64::new(0.5, 0.0);
            m[(0, 1)] = C64::new(0.2, 0.0);
            m[(1, 0)] = C64::new(0.2, 0.0);
            m
        }))
        .unwrap();
        let a = kraus_angles(&set);
        assert!((a[0].theta - FRAC_PI_2).abs() < 1e-15 && a[0].phi == 0.0);
        assert!((a[1].phi - PI).abs() < 1e-15);
        assert_eq!(wrap_phase(-PI), PI);
        assert!((wrap_phase(3.0 * PI / 2.0) + FRAC_PI_2).abs() < 1e-15);
    }

    #[test]
    fn rejects_negative_weights_and_clamps_roundoff() {
        let mut m = *ProcessMatrix::identity(0.0).matrix();
        m[(0, 0)] = C64::new(1.0 + 1e-7, 0.0);
        m[(3, 3)] = C64::new(-1e-7, 0.0);
        let set = build_kraus(&ProcessMatrix::from_raw(0.0, m)).unwrap();
        assert_eq!(set.weights()[2..], [0.0, 0.0]);
        m[(0, 0)] = C64::new(1.1, 0.0);
        m[(3, 3)] = C64::new(-0.1, 0.0);
        assert!(matches!(build_kraus(&ProcessMatrix::from_raw(0.0, m)), Err(Error::NonPhysical(_))));
        let mut leak = *ProcessMatrix::identity(0.0).matrix();
        leak[(0, 2)] = C64::new(0.5, 0.0);
        assert!(build_kraus(&ProcessMatrix::from_raw(0.0, leak)).is_err());
    }

    #[test]
    fn operators_match_channel_action() {
        let mut m = Matrix4::zeros();
        m[(0, 0)] = C64::new(0.55, 0.0);
        m[(1, 1)] = C64::new(0.15, 0.0);
        m[(0, 1)] = C64::new(0.05, 0.12);
        m[(1, 0)] = m[(0, 1)].conj();
        m[(2, 2)] = C64::new(0.1, 0.0);
        m[(3, 3)] = C64::new(0.2, 0.0);
        m[(2, 3)] = C64::new(-0.04, 0.07);
        m[(3, 2)] = m[(2, 3)].conj();
        let pm = ProcessMatrix::from_raw(0.0, m);
        let set = build_kraus(&pm).unwrap();
        for s in BASIS.iter().chain([&SIGMA_Y]) {
            assert!(max_abs(&(set.apply(s) - pm.apply(s))) < 1e-14);
        }
    }

    #[test]
    fn branch_matching_follows_a_crossing() {
        // Upper block sweeps c − d through zero with a small fixed coupling,
        // so D₊ keeps its label while its eigenvector rotates smoothly.
        // Without coupling the eigenvectors stay put and labels must swap.
        let series = |coupling: f64| -> Vec<ProcessMatrix> {
            (0..=100)
                .map(|k| {
                    let s = k as f64 / 100.0;
                    let mut m = Matrix4::zeros();
                    m[(0, 0)] = C64::new(0.3 + 0.4 * (1.0 - s), 0.0);
                    m[(1, 1)] = C64::new(0.3 + 0.4 * s, 0.0);
                    m[(0, 1)] = C64::new(coupling, 0.0);
                    m[(1, 0)] = C64::new(coupling, 0.0);
                    ProcessMatrix::from_raw(s, m)
                })
                .collect()
        };
        let smooth = kraus_trajectory(&series(0.05)).unwrap();
        assert!(smooth.warnings().is_empty());
        let crossing = kraus_trajectory(&series(0.0)).unwrap();
        assert_eq!(crossing.warnings().len(), 1);
        assert_eq!(crossing.warnings()[0].labels, (0, 1));
        // After the crossing label 0 still tracks the 𝕀 direction.
        let last = crossing.samples().last().unwrap();
        assert!(last.weights[0] < last.weights[1]);
        assert!((last.vectors[0].v.normalize() - Vector3::new(0.0, 0.0, 1.0)).norm() < 1e-12);
    }

    #[test]
    fn csv_layout() {
        let traj = kraus_trajectory(&[ProcessMatrix::identity(0.0), ProcessMatrix::dephasing(0.5, 0.5)]).unwrap();
        let mut buf = Vec::new();
        traj.write_csv(&mut buf, None).unwrap();
        let s = String::from_utf8(buf).unwrap();
        let lines: Vec<_> = s.lines().collect();
        assert_eq!(lines[0], "t,gamma,D,theta,phi,vx,vy,vz");
        assert_eq!(lines.len(), 9);
        assert!(lines.iter().skip(1).all(|l| l.split(',').count() == 8));
        let mut one = Vec::new();
        traj.write_csv(&mut one, Some(2)).unwrap();
        assert_eq!(String::from_utf8(one).unwrap().lines().count(), 3);
    }
}
