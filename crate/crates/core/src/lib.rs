//! Simulation of a logical qubit driven by a √SWAP-type exchange gate while an
//! Ohmic boson bath dephases it.
//!
//! The crate follows the qubit through four stages:
//!
//! 1. [`dynamics`] integrates the time-local Bloch-vector equation with the
//!    bath memory integrals of [`noise`] and the drive of [`control`].
//! 2. [`ptm`] rebuilds the 4×4 process matrix `M(t)` in the Pauli basis
//!    `(𝕀, σx, σy, σz)` from four evolved basis states.
//! 3. [`kraus`] diagonalizes the block-diagonal `M(t)` into four Kraus
//!    operators and maps each one to a three-dimensional vector.
//! 4. [`qpt`] predicts the measurement statistics of a process-tomography
//!    experiment and inverts them back to `M`.
//!
//! [`exact`] holds the closed-form pure-dephasing solution used as an oracle
//! for the integrator, and [`specfn`] the complex special functions behind
//! both.
//!
//! Units: `τ = ħ = k_B = 1`. Times live in `[0, 1]`, frequencies are angular
//! frequencies in rad/τ, and temperatures are expressed as `k_B T / ħ`.
//!
//! All density matrices and Bloch vectors are interaction-picture quantities,
//! so an ideal gate leaves them constant.

// `!(x > 0.0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod control;
pub mod dynamics;
pub mod error;
pub mod exact;
pub mod io;
pub mod kraus;
pub mod noise;
pub mod pauli;
pub mod ptm;
pub mod qpt;
pub mod specfn;

pub use control::PulseSpec;
pub use dynamics::{BlochVector, DensityMatrix2, SimConfig, Trajectory};
pub use error::{Error, Result};
pub use exact::CoherencePair;
pub use kraus::{KrausSet, KrausTrajectory, KrausVector};
pub use noise::BathSpec;
pub use ptm::{BasisTrajectorySet, ProcessMatrix};
pub use qpt::{PovmSet, PrepSet, ProbabilityTable, Superoperator};

/// Complex scalar used throughout the crate.
pub type C64 = num_complex::Complex64;
