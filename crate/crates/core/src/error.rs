use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("parameter `{name}` = {value} is outside its domain: {reason}")]
    Domain {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("Fock truncation inadequate at dimension {fock_dim}: {what} (deficit {deficit:.3e})")]
    Truncation {
        fock_dim: usize,
        what: String,
        deficit: f64,
    },

    #[error("top Fock level population {population:.3e} exceeded {threshold:.1e} at step {step}")]
    TruncationLeak {
        step: usize,
        population: f64,
        threshold: f64,
    },

    #[error("trace drifted by {magnitude:.3e} at step {step} (allowed {allowed:.1e})")]
    TraceDrift {
        step: usize,
        magnitude: f64,
        allowed: f64,
    },

    #[error("infeasible run: {0}")]
    Infeasible(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("operator is not Hermitian (deviation {deviation:.3e})")]
    NotHermitian { deviation: f64 },
}

impl Error {
    pub(crate) fn domain(name: &'static str, value: f64, reason: &'static str) -> Self {
        Error::Domain { name, value, reason }
    }

    /// Process exit code used by the command-line driver.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Domain { .. } | Error::Config(_) => 2,
            Error::Truncation { .. } | Error::TruncationLeak { .. } => 3,
            Error::TraceDrift { .. } | Error::NotHermitian { .. } => 4,
            Error::Infeasible(_) => 5,
            Error::DimensionMismatch { .. } => 2,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Error::Domain { .. } => "domain",
            Error::DimensionMismatch { .. } => "dimension",
            Error::Truncation { .. } => "truncation",
            Error::TruncationLeak { .. } => "truncation-leak",
            Error::TraceDrift { .. } => "trace-drift",
            Error::Infeasible(_) => "infeasible",
            Error::Config(_) => "config",
            Error::NotHermitian { .. } => "not-hermitian",
        }
    }
}
