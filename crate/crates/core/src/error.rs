use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the domain of the function.
    #[error("domain error: {0}")]
    Domain(String),

    /// A configuration field violates its constraint.
    #[error("invalid configuration: `{field}`: {reason}")]
    Config { field: String, reason: String },

    /// Assembled matrices failed an internal consistency check.
    #[error("internal consistency error: {0}")]
    Consistency(String),

    /// The rotation-modified stiffness is no longer positive definite.
    #[error("spin-destabilized: effective stiffness eigenvalue {eigenvalue:e} < 0")]
    SpinDestabilized { eigenvalue: f64 },

    /// The integrator produced a non-finite state.
    #[error("integration blow-up at t = {time} s")]
    BlowUp { time: f64 },

    /// The scalar input gain of the tip output is too small to invert.
    #[error("loss of control authority: |decoupling gain| = {gain:e} below tolerance {tolerance:e}")]
    AuthorityLoss { gain: f64, tolerance: f64 },
}

impl Error {
    pub(crate) fn config(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Config {
            field: field.into(),
            reason: reason.into(),
        }
    }
}
