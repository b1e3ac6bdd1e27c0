//! Error type shared by the whole crate.

/// Failures reported by the solver and its harnesses.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParams { name: &'static str, reason: String },
    #[error("degenerate scaling: the physical map needs tau > 0")]
    DegenerateScaling,
    #[error("tau family must be sorted in decreasing order")]
    UnsortedFamily,
    #[error("sonic defect exceeded: {0}")]
    SonicDefectExceeded(String),
    #[error("vacuum reached: {0}")]
    VacuumReached(String),
    #[error("no convergence in {0}")]
    NoConvergence(&'static str),
    #[error("strength out of range: {0}")]
    RangeExceeded(String),
    #[error("inconsistent Rankine-Hugoniot data, relative residual {0:e}")]
    InconsistentRh(f64),
    #[error("CFL violated: wave speed {speed:e} exceeds the admissible bound {limit:e}")]
    CflViolation { speed: f64, limit: f64 },
    #[error("point ({x}, {y}) lies outside the computational domain")]
    OutOfDomain { x: f64, y: f64 },
    #[error("this quantity is only defined for the limit system (tau = 0)")]
    UnsupportedTau,
    #[error("configuration error: {0}")]
    Config(String),
    #[error("i/o error: {0}")]
    Io(String),
    #[error("domain mismatch: {0}")]
    DomainMismatch(String),
    #[error("column {k}, cell {n}: {source}")]
    At {
        k: usize,
        n: i64,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    /// Attaches a mesh location to a solver failure.
    pub fn at(self, k: usize, n: i64) -> Self {
        Error::At {
            k,
            n,
            source: Box::new(self),
        }
    }

    /// Whether the failure comes from the inputs rather than from the numerics.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self.root(),
            Error::InvalidParams { .. }
                | Error::DegenerateScaling
                | Error::UnsortedFamily
                | Error::UnsupportedTau
                | Error::DomainMismatch(_)
                | Error::Config(_)
                | Error::Io(_)
        )
    }

    /// The innermost error, with mesh locations stripped.
    pub fn root(&self) -> &Error {
        match self {
            Error::At { source, .. } => source.root(),
            other => other,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
