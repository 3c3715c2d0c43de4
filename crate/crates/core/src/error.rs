use thiserror::Error;

pub type Result<T, E = GeomError> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeomError {
    #[error("curve is not regular at sample {index}: tangent norm {norm:e}")]
    RegularityViolation { index: usize, norm: f64 },

    #[error("cannot unwrap turning angle at sample {index}: direction jump {jump:.3} rad (sampling too coarse)")]
    UnwrapFailure { index: usize, jump: f64 },

    #[error("not a TreadmillSled: at sample {index} z = {z:e} but w' = {dw:e} (w' = -f z cannot hold)")]
    NotATreadmillSled { index: usize, z: f64, dw: f64 },

    #[error("range violation: w f - z' has minimum {min:e} at sample {index}, must be positive")]
    RangeViolation { index: usize, min: f64 },

    #[error("curve is constant (total variation {variation:e}); companion function is not determined, supply it explicitly")]
    ConstantCurve { variation: f64 },

    #[error("degenerate metric at node ({i}, {j}): EG - F^2 = {det:e}")]
    DegenerateMetric { i: usize, j: usize, det: f64 },

    #[error("level set tracing failed: {0}")]
    EmptyLevelSet(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("csv: {0}")]
    Csv(String),

    #[error("io: {0}")]
    Io(String),
}

impl GeomError {
    /// Errors raised by the numerics on well-formed input, as opposed to
    /// malformed or out-of-range arguments.
    pub fn is_numeric(&self) -> bool {
        matches!(
            self,
            GeomError::NotATreadmillSled { .. }
                | GeomError::RangeViolation { .. }
                | GeomError::ConstantCurve { .. }
                | GeomError::DegenerateMetric { .. }
                | GeomError::EmptyLevelSet(_)
        )
    }
}

impl From<std::io::Error> for GeomError {
    fn from(e: std::io::Error) -> Self {
        GeomError::Io(e.to_string())
    }
}

impl From<csv::Error> for GeomError {
    fn from(e: csv::Error) -> Self {
        GeomError::Csv(e.to_string())
    }
}

pub(crate) fn invalid(msg: impl Into<String>) -> GeomError {
    GeomError::InvalidInput(msg.into())
}
