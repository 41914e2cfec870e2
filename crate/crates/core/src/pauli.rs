//! Pauli basis `(σ₀, σ₁, σ₂, σ₃) = (𝕀, σx, σy, σz)` on the logical qubit,
//! with `σz|1⟩ = |1⟩` (matrix row 0) and `σz|2⟩ = −|2⟩` (row 1).

use nalgebra::Matrix2;

use crate::C64;

pub type Mat2 = Matrix2<C64>;

const fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub const IDENTITY: Mat2 = Matrix2::new(c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0));
pub const SIGMA_X: Mat2 = Matrix2::new(c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0));
pub const SIGMA_Y: Mat2 = Matrix2::new(c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0));
pub const SIGMA_Z: Mat2 = Matrix2::new(c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0));

pub const BASIS: [Mat2; 4] = [IDENTITY, SIGMA_X, SIGMA_Y, SIGMA_Z];

pub fn sigma(mu: usize) -> &'static Mat2 {
    &BASIS[mu]
}

/// `Tr[a b]` without forming the product.
pub fn trace_product(a: &Mat2, b: &Mat2) -> C64 {
    a[(0, 0)] * b[(0, 0)] + a[(0, 1)] * b[(1, 0)] + a[(1, 0)] * b[(0, 1)] + a[(1, 1)] * b[(1, 1)]
}
