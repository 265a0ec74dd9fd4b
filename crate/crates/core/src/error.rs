use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A frequency fell outside the validity window of a model.
    #[error("{what}: ω = {omega:.6e} rad/s outside validity window [{lo:.6e}, {hi:.6e}] rad/s")]
    Domain {
        what: &'static str,
        omega: f64,
        lo: f64,
        hi: f64,
    },

    #[error("no sign change on [{lo:.6e}, {hi:.6e}]: f(lo) = {f_lo:.6e}, f(hi) = {f_hi:.6e}")]
    Bracket { lo: f64, hi: f64, f_lo: f64, f_hi: f64 },

    #[error("invalid configuration: {key}: {reason}")]
    Config { key: String, reason: String },

    #[error("degenerate state: {0}")]
    Degenerate(String),

    #[error("expected a state in the {expected} basis, got {found}")]
    Basis {
        expected: &'static str,
        found: &'static str,
    },

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("design infeasible: {0}")]
    Infeasible(String),

    #[error("at pump wavelength {wavelength_nm:.6} nm: {source}")]
    AtWavelength {
        wavelength_nm: f64,
        #[source]
        source: Box<Error>,
    },

    #[error("i/o error on {path}: {message}")]
    Io { path: String, message: String },
}

impl Error {
    pub(crate) fn config(key: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Config {
            key: key.into(),
            reason: reason.into(),
        }
    }

    /// Strips wavelength context and returns the underlying error.
    pub fn root(&self) -> &Error {
        match self {
            Error::AtWavelength { source, .. } => source.root(),
            other => other,
        }
    }
}
