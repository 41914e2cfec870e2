use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("pole of the gamma family at z = {re} + {im}i")]
    Pole { re: f64, im: f64 },

    #[error("{name} = {value} is outside the domain: {reason}")]
    Domain {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("step_count {step_count} does not resolve the dynamics (need at least {required})")]
    Resolution { step_count: usize, required: usize },

    #[error("non-physical state or channel: {0}")]
    NonPhysical(String),

    #[error("process-matrix reconstruction failed: {0}")]
    Reconstruction(String),

    #[error("tomography superoperator is rank deficient (sigma_min/sigma_max = {ratio:e})")]
    RankDeficiency { ratio: f64 },

    #[error("invalid input: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn domain(name: &'static str, value: f64, reason: &'static str) -> Self {
        Error::Domain { name, value, reason }
    }
}
