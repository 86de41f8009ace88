use thiserror::Error;

/// Errors raised by the hysteresis, inversion, constitutive and beam modules.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid coefficient: {0}")]
    InvalidCoefficient(String),

    #[error("invalid density: {0}")]
    InvalidDensity(String),

    /// Input history exceeded the memory grid cutoff while the density is still active there.
    #[error("cutoff violation: input history sup {sup} exceeds grid cutoff {cutoff}")]
    CutoffViolation { sup: f64, cutoff: f64 },

    #[error("value {value} outside working range [{lo}, {hi}]")]
    OutOfRange { value: f64, lo: f64, hi: f64 },

    #[error("shape function degenerate: f({eps}) = {f} below f_min")]
    ShapeDegeneracy { eps: f64, f: f64 },

    #[error("no sign change on bracket [{lo}, {hi}]: {context}")]
    NoBracket { lo: f64, hi: f64, context: String },

    #[error(
        "Picard iteration did not converge in {iterations} sweeps at t = {t} (last update {last_update}); reduce dt"
    )]
    StepDivergence { iterations: usize, t: f64, last_update: f64 },

    #[error("config: {0}")]
    Config(String),

    #[error("io: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
