//! Error types shared across the solver library.

use std::fmt;

use num_complex::Complex64;

/// A single violated constraint found while validating a problem description.
#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    /// Name of the violated constraint, e.g. `"breakpoints strictly increasing"`.
    pub constraint: String,
    /// Index of the offending layer/interface, when applicable.
    pub index: Option<usize>,
    /// Human-readable detail.
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.index {
            Some(i) => write!(f, "{} (index {}): {}", self.constraint, i, self.detail),
            None => write!(f, "{}: {}", self.constraint, self.detail),
        }
    }
}

/// Library error type.
#[derive(Debug, Clone)]
pub enum Error {
    /// One or more problem invariants failed; carries every diagnostic found.
    Invalid(Vec<Violation>),
    /// A requested feature is outside what the solver supports.
    Unsupported(String),
    /// A numerical routine failed (root finding, quadrature, linear solve, ...).
    Numerical(String),
    /// Evaluation produced a non-finite value; carries the offending location.
    NonFinite(String),
    /// Argument outside the domain of the operation.
    Domain(String),
    /// Configuration parse/serialize problem.
    Config(String),
}

impl Error {
    pub(crate) fn numerical(msg: impl Into<String>) -> Self {
        Error::Numerical(msg.into())
    }

    pub(crate) fn unsupported(msg: impl Into<String>) -> Self {
        Error::Unsupported(msg.into())
    }

    pub(crate) fn non_finite_at(what: &str, s: Complex64) -> Self {
        Error::NonFinite(format!("{what} evaluated non-finite at s = {s}"))
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Invalid(vs) => {
                write!(f, "invalid problem:")?;
                for v in vs {
                    write!(f, "\n  - {v}")?;
                }
                Ok(())
            }
            Error::Unsupported(m) => write!(f, "unsupported: {m}"),
            Error::Numerical(m) => write!(f, "numerical failure: {m}"),
            Error::NonFinite(m) => write!(f, "non-finite value: {m}"),
            Error::Domain(m) => write!(f, "domain error: {m}"),
            Error::Config(m) => write!(f, "config error: {m}"),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
