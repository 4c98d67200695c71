use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix dimension {0} is outside the supported range 2..=8")]
    InvalidDimension(usize),

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("subsystem index {index} out of range for {count} subsystems")]
    IndexOutOfRange { index: usize, count: usize },

    #[error("matrix is not Hermitian (max |M - M^dag| = {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("not a density matrix: {0}")]
    NotAState(String),

    #[error("matrix is not a real symmetric X-state (max off-pattern entry {deviation:e})")]
    NotXState { deviation: f64 },

    #[error("parameter `{name}` = {value} outside its domain {domain}")]
    Domain {
        name: &'static str,
        value: f64,
        domain: &'static str,
    },

    #[error("unknown {kind} `{name}`")]
    Unknown { kind: &'static str, name: String },

    #[error("eigensolver did not converge after {sweeps} sweeps (off-diagonal norm {residual:e})")]
    NoConvergence { sweeps: usize, residual: f64 },

    #[error("discord {0:e} is below the roundoff window")]
    NegativeDiscord(f64),

    #[error("{context}: {source}")]
    AtGridPoint {
        context: String,
        #[source]
        source: Box<Error>,
    },

    #[error("serialization failed: {0}")]
    Serialization(String),
}

impl Error {
    pub(crate) fn domain(name: &'static str, value: f64, domain: &'static str) -> Self {
        Error::Domain { name, value, domain }
    }

    pub(crate) fn at(self, context: impl Into<String>) -> Self {
        Error::AtGridPoint {
            context: context.into(),
            source: Box::new(self),
        }
    }
}
