use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("site {site} out of range for {n} sites")]
    SiteOutOfRange { site: usize, n: usize },
    #[error("duplicate site {0}")]
    DuplicateSite(usize),
    #[error("invalid spin value {0}, expected -1 or +1")]
    InvalidSpin(i8),
    #[error("resource cap exceeded: {0}")]
    Resource(String),
    #[error("structure error: {0}")]
    Structure(String),
    #[error("amplitude vanishes at the reference configuration")]
    SingularRatio,
    #[error("degenerate gate: {0}")]
    DegenerateGate(String),
    #[error("fit did not converge after {iterations} iterations (residual {residual:e})")]
    FitFailed { iterations: usize, residual: f64 },
    #[error("unsupported regime: {0}")]
    UnsupportedRegime(String),
    #[error("sign problem: {0}")]
    SignProblem(String),
    #[error("numeric failure: {0}")]
    Numeric(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("step {step}: {source}")]
    AtStep {
        step: usize,
        #[source]
        source: Box<Error>,
    },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

/// Process exit classes used by the command-line front end.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitClass {
    Config,
    Numeric,
    Resource,
}

impl Error {
    pub fn at_step(self, step: usize) -> Error {
        Error::AtStep { step, source: Box::new(self) }
    }

    pub fn exit_class(&self) -> ExitClass {
        match self {
            Error::Resource(_) => ExitClass::Resource,
            Error::FitFailed { .. }
            | Error::Numeric(_)
            | Error::SingularRatio
            | Error::DegenerateGate(_) => ExitClass::Numeric,
            Error::AtStep { source, .. } => source.exit_class(),
            _ => ExitClass::Config,
        }
    }
}
