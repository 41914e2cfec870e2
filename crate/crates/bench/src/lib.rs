//! Shared fixtures for the benchmarks.

use krausviz::{ptm, BathSpec, BlochVector, ProcessMatrix, PulseSpec, SimConfig};

/// The strong-bath `cdd:2` run on its default grid.
pub fn cdd2_config() -> SimConfig {
    SimConfig::new(BathSpec::canonical(0.05), PulseSpec::Cdd(2), BlochVector::Z)
}

/// Process matrices of [`cdd2_config`] with `step_count` steps.
pub fn cdd2_process_matrices(step_count: usize) -> Vec<ProcessMatrix> {
    let set = ptm::evolve_basis(&cdd2_config().with_steps(step_count)).expect("basis run");
    ptm::assemble_all(&set).expect("physical process matrices")
}
