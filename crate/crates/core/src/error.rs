use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("{what} = {value} is outside [{lo}, {hi}]")]
    Range { what: &'static str, value: f64, lo: f64, hi: f64 },

    #[error("outside the accuracy envelope: {0}")]
    Envelope(String),

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("Newton iteration did not converge after {iterations} iterations (last update {residual:e})")]
    SolverFailure { iterations: usize, residual: f64 },

    #[error("precision exhausted at l = {l}: {detail}")]
    PrecisionExhausted { l: usize, detail: String },

    #[error("exclusion process reached the window boundary at step {step}")]
    WindowOverflow { step: u64 },

    #[error("CDF is not monotone: density {value:e} at index {index}")]
    Monotonicity { index: usize, value: f64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for errors that come from running out of numerical accuracy
    /// rather than from bad input.
    pub fn is_numeric_envelope(&self) -> bool {
        matches!(
            self,
            Error::Envelope(_)
                | Error::PrecisionExhausted { .. }
                | Error::SolverFailure { .. }
                | Error::Monotonicity { .. }
        )
    }
}
