use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter {name} = {value}: {reason}")]
    InvalidParams {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    /// The alternating kernel sum lost too many digits to cancellation.
    #[error("condition loss: estimate {condition:e} exceeds limit {limit:e}")]
    ConditionLoss { condition: f64, limit: f64 },

    #[error("hypergeometric series does not converge for y = {y}")]
    SeriesNonConvergent { y: f64 },

    #[error("series tail bound not met after {terms} terms")]
    TruncationFailure { terms: usize },

    #[error("index m + n = {sum} beyond supported kernel range {limit}")]
    IndexTooLarge { sum: usize, limit: usize },

    #[error("kernel entry ({m}, {n}): {source}")]
    Kernel {
        m: usize,
        n: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("negative probability {value:e} at ({m}, {n})")]
    NegativeProbability { m: usize, n: usize, value: f64 },

    #[error("mu = {re} + {im}i lies outside the convergence strip ({lo}, {hi}) for Im mu")]
    DomainError { re: f64, im: f64, lo: f64, hi: f64 },

    #[error("aliasing detected: mass {mass:e} at |k| = {k_max} exceeds tail tolerance {tolerance:e}")]
    AliasingDetected { k_max: usize, mass: f64, tolerance: f64 },

    #[error("inverted mass at k = {k} has imaginary residue {residue:e}")]
    ImaginaryResidue { k: i64, residue: f64 },

    #[error("quadrature needs at least {required} points, got {given}")]
    TooFewQuadraturePoints { required: usize, given: usize },

    #[error("cumulant mismatch for {what} at tau = {tau}: closed form {closed} vs finite difference {numeric}")]
    CumulantMismatch {
        what: &'static str,
        tau: f64,
        closed: f64,
        numeric: f64,
    },

    #[error("tau grid must be non-empty, finite and ascending")]
    InvalidGrid,

    #[error("half-step disagreement {difference:e} exceeds {tolerance:e}")]
    StepRejected { difference: f64, tolerance: f64 },

    #[error("only {found} testable lattice pairs, need {required}")]
    InsufficientSupport { found: usize, required: usize },

    #[error("unknown check {0:?}")]
    UnknownCheck(String),
}

impl Error {
    /// Short stable name of the variant, used in CLI diagnostics.
    pub fn name(&self) -> &'static str {
        match self {
            Error::InvalidParams { .. } => "InvalidParams",
            Error::ConditionLoss { .. } => "ConditionLoss",
            Error::SeriesNonConvergent { .. } => "SeriesNonConvergent",
            Error::TruncationFailure { .. } => "TruncationFailure",
            Error::IndexTooLarge { .. } => "IndexTooLarge",
            Error::Kernel { source, .. } => source.name(),
            Error::NegativeProbability { .. } => "NegativeProbability",
            Error::DomainError { .. } => "DomainError",
            Error::AliasingDetected { .. } => "AliasingDetected",
            Error::ImaginaryResidue { .. } => "ImaginaryResidue",
            Error::TooFewQuadraturePoints { .. } => "TooFewQuadraturePoints",
            Error::CumulantMismatch { .. } => "CumulantMismatch",
            Error::InvalidGrid => "InvalidGrid",
            Error::StepRejected { .. } => "StepRejected",
            Error::InsufficientSupport { .. } => "InsufficientSupport",
            Error::UnknownCheck(_) => "UnknownCheck",
        }
    }

    pub(crate) fn at(self, m: usize, n: usize) -> Error {
        Error::Kernel {
            m,
            n,
            source: Box::new(self),
        }
    }
}
