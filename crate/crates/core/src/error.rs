use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Argument outside the mathematical domain of the function.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("unsupported Bessel order {order} (maximum {max})")]
    UnsupportedOrder { order: u32, max: u32 },

    /// Argument outside the regime where an expansion is valid.
    #[error("range error: {0}")]
    Range(String),

    #[error("invalid input: {0}")]
    Validation(String),

    /// Eigenvalues too close for the partial-fraction formulas.
    #[error("degenerate spectrum: {0}")]
    Degenerate(String),

    #[error("numerical failure in {routine}: {detail}")]
    NumericalFailure { routine: &'static str, detail: String },

    #[error("result overflows the floating point range: {0}")]
    Overflow(String),

    #[error("insufficient data: {0}")]
    InsufficientData(String),
}

impl Error {
    /// True for errors caused by the caller's configuration rather than by the numerics.
    pub fn is_invalid_input(&self) -> bool {
        matches!(
            self,
            Error::Domain(_)
                | Error::UnsupportedOrder { .. }
                | Error::Range(_)
                | Error::Validation(_)
                | Error::Degenerate(_)
                | Error::InsufficientData(_)
        )
    }
}
