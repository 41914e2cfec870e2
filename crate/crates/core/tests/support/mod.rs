//! Independent numerical oracles shared by the integration tests.
//!
//! Nothing here calls the closed forms under test: kernels are integrated
//! from the spectral density, gamma-family values come from their product
//! and series definitions, and process matrices are recovered by a generic
//! linear solve.

#![allow(dead_code)]

use std::f64::consts::PI;

use krausviz::pauli::{Mat2, BASIS};
use krausviz::{BathSpec, BlochVector, C64};
use nalgebra::{DMatrix, DVector, Matrix4};
use rand::Rng;

/// Compensated complex summation.
#[derive(Default, Clone, Copy)]
pub struct Kahan {
    sum: C64,
    c: C64,
}

impl Kahan {
    pub fn add(&mut self, x: C64) {
        let y = x - self.c;
        let t = self.sum + y;
        self.c = (t - self.sum) - y;
        self.sum = t;
    }

    pub fn value(&self) -> C64 {
        self.sum
    }
}

/// Gauss-Legendre nodes and weights on `[-1, 1]` by Newton iteration on
/// `P_n`.
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let k = k as f64;
                let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        out.push((x, 2.0 / ((1.0 - x * x) * dp * dp)));
    }
    out
}

/// Composite Gauss-Legendre over `[a, b]` with `panels` panels of `order`
/// nodes each.
pub fn composite_gauss_legendre(f: impl Fn(f64) -> C64, a: f64, b: f64, panels: usize, order: usize) -> C64 {
    let rule = gauss_legendre(order);
    let width = (b - a) / panels as f64;
    let mut acc = Kahan::default();
    for p in 0..panels {
        let mid = a + (p as f64 + 0.5) * width;
        let mut panel = C64::new(0.0, 0.0);
        for &(x, w) in &rule {
            panel += f(mid + 0.5 * width * x) * w;
        }
        acc.add(panel * (0.5 * width));
    }
    acc.value()
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn kronrod_panel(f: &impl Fn(f64) -> C64, a: f64, b: f64) -> (C64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = fc * WGK[7];
    let mut g = fc * WG[3];
    for j in 0..7 {
        let pair = f(c - h * XGK[j]) + f(c + h * XGK[j]);
        k += pair * WGK[j];
        if j % 2 == 1 {
            g += pair * WG[j / 2];
        }
    }
    (k * h, ((k - g) * h).norm())
}

/// Adaptive 7/15-point Gauss-Kronrod with bisection until the panel
/// error estimates sum below `tol`.
pub fn gauss_kronrod(f: impl Fn(f64) -> C64, a: f64, b: f64, tol: f64) -> C64 {
    let mut panels = vec![(a, b, kronrod_panel(&f, a, b))];
    for _ in 0..100_000 {
        let err: f64 = panels.iter().map(|p| p.2 .1).sum();
        if err <= tol {
            break;
        }
        let (worst, _) = panels
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .2 .1.total_cmp(&y.1 .2 .1))
            .expect("non-empty");
        let (l, r, _) = panels.swap_remove(worst);
        let m = 0.5 * (l + r);
        panels.push((l, m, kronrod_panel(&f, l, m)));
        panels.push((m, r, kronrod_panel(&f, m, r)));
    }
    let mut acc = Kahan::default();
    for p in &panels {
        acc.add(p.2 .0);
    }
    acc.value()
}

/// `J(ω) ⟨n(ω)⟩ e^{iωt}` integrated over `[0, 40 ω_c]` on 10⁶ nodes.
pub fn thermal_kernel_by_quadrature(bath: &BathSpec, t: f64) -> C64 {
    let b = bath.beta_inv;
    composite_gauss_legendre(
        |w| {
            let occupation_weight = w / (w / b).exp_m1();
            C64::from_polar(bath.eta * occupation_weight * (-w / bath.omega_c).exp(), w * t)
        },
        0.0,
        40.0 * bath.omega_c,
        50_000,
        20,
    )
}

/// `J(ω) e^{iωt}` integrated over `[0, 40 ω_c]` on 10⁶ nodes.
pub fn vacuum_kernel_by_quadrature(bath: &BathSpec, t: f64) -> C64 {
    composite_gauss_legendre(
        |w| C64::from_polar(bath.eta * w * (-w / bath.omega_c).exp(), w * t),
        0.0,
        40.0 * bath.omega_c,
        50_000,
        20,
    )
}

/// `4η ∫ e^{−ω/ω_c} (cos ωt − 1)/ω dω`.
pub fn vacuum_exponent_by_quadrature(bath: &BathSpec, t: f64) -> f64 {
    gauss_kronrod(
        |w| {
            let s = (0.5 * w * t).sin();
            let ratio = if w == 0.0 { 0.0 } else { -2.0 * s * s / w };
            C64::new(4.0 * bath.eta * (-w / bath.omega_c).exp() * ratio, 0.0)
        },
        0.0,
        80.0 * bath.omega_c,
        1e-13,
    )
    .re
}

/// `−8η ∫ e^{−ω/ω_c} (1 − cos ωt) / (ω (e^{ω/T} − 1)) dω`.
pub fn thermal_exponent_by_quadrature(bath: &BathSpec, t: f64) -> f64 {
    let b = bath.beta_inv;
    gauss_kronrod(
        |w| {
            if w == 0.0 {
                return C64::new(-8.0 * bath.eta * 0.5 * t * t * b, 0.0);
            }
            let s = (0.5 * w * t).sin();
            let v = (-w / bath.omega_c).exp() * 2.0 * s * s / (w * (w / b).exp_m1());
            C64::new(-8.0 * bath.eta * v, 0.0)
        },
        0.0,
        80.0 * bath.omega_c.min(b),
        1e-13,
    )
    .re
}

/// `ln Γ_n(z) = z ln n − ln z − Σ_{k=1}^{n} ln(1 + z/k)` at `n, 2n, 4n`,
/// combined by Richardson extrapolation in `1/n`.
pub fn log_gamma_by_product(z: C64, n: usize) -> C64 {
    let mut partial = Kahan::default();
    let mut levels = [C64::new(0.0, 0.0); 3];
    let mut k = 1usize;
    for (level, slot) in levels.iter_mut().enumerate() {
        let upto = n << level;
        while k <= upto {
            partial.add((z / k as f64).ln_1p_complex());
            k += 1;
        }
        *slot = z * (upto as f64).ln() - z.ln() - partial.value();
    }
    let [a, b, c] = levels;
    // Error expansion c₁/n + c₂/n² + …
    let ab = b * 2.0 - a;
    let bc = c * 2.0 - b;
    (bc * 4.0 - ab) / 3.0
}

trait Ln1p {
    fn ln_1p_complex(self) -> C64;
}

impl Ln1p for C64 {
    /// `ln(1 + w)` without cancellation for small `|w|`.
    fn ln_1p_complex(self) -> C64 {
        let re = (self.re * (2.0 + self.re) + self.im * self.im).ln_1p() * 0.5;
        let im = self.im.atan2(1.0 + self.re);
        C64::new(re, im)
    }
}

/// `Σ_{k≥0} (z + k)⁻²` summed backwards over `k < terms`, plus the
/// Euler-Maclaurin tail.
pub fn trigamma_by_series(z: C64, terms: usize) -> C64 {
    let mut acc = Kahan::default();
    for k in (0..terms).rev() {
        let w = z + k as f64;
        acc.add((w * w).inv());
    }
    let w = z + terms as f64;
    let tail = w.inv() + (w * w).inv() * 0.5 + (w * w * w).inv() / 6.0;
    acc.value() + tail
}

/// `ρ = ½(𝕀 + r·σ)` built from scratch.
pub fn density(r: &BlochVector) -> Mat2 {
    let half = C64::new(0.5, 0.0);
    (BASIS[0] + BASIS[1] * C64::from(r.x) + BASIS[2] * C64::from(r.y) + BASIS[3] * C64::from(r.z)) * half
}

/// Solves `Σ_{μν} σ_μ ρ_j σ_ν M_{νμ} = ρ′_j` for `M` by dense least squares
/// over all probes.
pub fn process_matrix_by_least_squares(initial: &[BlochVector], evolved: &[BlochVector]) -> Matrix4<C64> {
    let rows = 4 * initial.len();
    let mut a = DMatrix::<C64>::zeros(rows, 16);
    let mut rhs = DVector::<C64>::zeros(rows);
    for (j, (r0, rt)) in initial.iter().zip(evolved).enumerate() {
        let rho = density(r0);
        let target = density(rt);
        for nu in 0..4 {
            for mu in 0..4 {
                let term = BASIS[mu] * rho * BASIS[nu];
                for e in 0..4 {
                    a[(4 * j + e, 4 * nu + mu)] = term[(e / 2, e % 2)];
                }
            }
        }
        for e in 0..4 {
            rhs[4 * j + e] = target[(e / 2, e % 2)];
        }
    }
    let svd = a.svd(true, true);
    let x = svd.solve(&rhs, 1e-14).expect("svd solve");
    Matrix4::from_fn(|nu, mu| x[4 * nu + mu])
}

/// Applies `ρ ↦ Σ K ρ K†` elementwise with explicit index sums.
pub fn kraus_action(ops: &[Mat2], rho: &Mat2) -> Mat2 {
    let mut out = Mat2::zeros();
    for k in ops {
        for r in 0..2 {
            for c in 0..2 {
                let mut acc = C64::new(0.0, 0.0);
                for a in 0..2 {
                    for b in 0..2 {
                        acc += k[(r, a)] * rho[(a, b)] * k[(c, b)].conj();
                    }
                }
                out[(r, c)] += acc;
            }
        }
    }
    out
}

/// `Tr[σ_μ ρ σ_ν E]` by explicit index sums.
pub fn trace_of_product(mu: usize, rho: &Mat2, nu: usize, e: &Mat2) -> C64 {
    let (s, t) = (&BASIS[mu], &BASIS[nu]);
    let mut acc = C64::new(0.0, 0.0);
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    acc += s[(i, j)] * rho[(j, k)] * t[(k, l)] * e[(l, i)];
                }
            }
        }
    }
    acc
}

pub fn max_abs2(m: &Mat2) -> f64 {
    m.iter().map(|c| c.norm()).fold(0.0, f64::max)
}

pub fn max_abs4(m: &Matrix4<C64>) -> f64 {
    m.iter().map(|c| c.norm()).fold(0.0, f64::max)
}

fn random_c64(rng: &mut impl Rng) -> C64 {
    C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
}

fn inverse_sqrt_hermitian(s: &Mat2) -> Mat2 {
    let eig = nalgebra::SymmetricEigen::new(*s);
    let d = Mat2::from_diagonal(&eig.eigenvalues.map(|x| C64::new(x.powf(-0.5), 0.0)));
    eig.eigenvectors * d * eig.eigenvectors.adjoint()
}

/// Four random trace-preserving Kraus operators, two in `span{𝕀, σx}` and
/// two in `σz · span{𝕀, σx}`, so the process matrix is block diagonal.
pub fn random_block_kraus(rng: &mut impl Rng) -> [Mat2; 4] {
    let (id, sx, sz) = (BASIS[0], BASIS[1], BASIS[3]);
    let mut ops = [0, 1, 2, 3].map(|g| {
        let k = id * random_c64(rng) + sx * random_c64(rng);
        if g < 2 {
            k
        } else {
            sz * k
        }
    });
    let s: Mat2 = ops.iter().map(|k| k.adjoint() * k).sum();
    let fix = inverse_sqrt_hermitian(&s);
    for k in &mut ops {
        *k *= fix;
    }
    ops
}

/// `M_{νμ} = Σ_γ c^γ_μ (c^γ_ν)*` with `c_μ = ½ Tr[σ_μ K]`, by index sums.
pub fn process_matrix_of_kraus(ops: &[Mat2]) -> Matrix4<C64> {
    let mut m = Matrix4::zeros();
    for k in ops {
        let c: Vec<C64> = (0..4)
            .map(|mu| {
                let s = &BASIS[mu];
                (s[(0, 0)] * k[(0, 0)] + s[(0, 1)] * k[(1, 0)] + s[(1, 0)] * k[(0, 1)] + s[(1, 1)] * k[(1, 1)]) * 0.5
            })
            .collect();
        for nu in 0..4 {
            for mu in 0..4 {
                m[(nu, mu)] += c[mu] * c[nu].conj();
            }
        }
    }
    m
}

/// Uniform point in the closed unit ball.
pub fn random_bloch(rng: &mut impl Rng) -> BlochVector {
    loop {
        let v = BlochVector::new(
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
        );
        if v.norm() <= 1.0 {
            return v;
        }
    }
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn log_log_slope(x: &[f64], y: &[f64]) -> f64 {
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = lx.iter().map(|a| (a - mx) * (a - mx)).sum();
    sxy / sxx
}
