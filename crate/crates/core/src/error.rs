use std::fmt;

use thiserror::Error;

/// Numeric backend a value lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Backend {
    Exact,
    Float,
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Backend::Exact => f.write_str("exact"),
            Backend::Float => f.write_str("float"),
        }
    }
}

impl std::str::FromStr for Backend {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "exact" => Ok(Backend::Exact),
            "float" => Ok(Backend::Float),
            other => Err(Error::Usage(format!("unknown backend `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("backend mismatch: {0} vs {1}")]
    BackendMismatch(Backend, Backend),

    #[error("radius must be positive, got {0}")]
    NonPositiveRadius(String),

    #[error("radius mismatch: {0}")]
    RadiusMismatch(String),

    #[error("degree cap {cap} exceeded by degree {degree} and tail tracking is disabled")]
    DegreeCapExceeded { cap: usize, degree: i64 },

    #[error("|z| = {modulus} exceeds the radius {radius} of a non-polynomial series")]
    OutsideDisc { modulus: String, radius: String },

    #[error("negative-degree term evaluated at z = 0")]
    PoleAtZero,

    #[error("division by zero")]
    DivisionByZero,

    #[error("parse error at {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("ring invariant violated: {0}")]
    RingInvariant(String),

    #[error("norm on the open disc needs an explicit radius r < 1")]
    MissingRadius,

    #[error("element is not in the kernel of evaluation at U = T (residual norm {residual})")]
    NotInKernel { residual: String },

    #[error("support violation: {0}")]
    Support(String),

    #[error("comparison undecided at the boundary")]
    BoundaryUndecided,

    #[error("elements do not generate the unit ideal (common factor {witness})")]
    NotUnitIdeal { witness: String },

    #[error("valuation undefined: {0}")]
    ValuationUndefined(String),

    #[error("{0}")]
    Usage(String),

    #[error("{path}: {msg}")]
    Io { path: String, msg: String },
}

impl Error {
    pub(crate) fn parse(pos: usize, msg: impl Into<String>) -> Self {
        Error::Parse { pos, msg: msg.into() }
    }

    /// Process exit code: 3 for I/O failures, 2 for every other input or
    /// precondition error. Code 1 is reserved for counterexamples and
    /// failed checks.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Io { .. } => 3,
            _ => 2,
        }
    }

    pub fn io(path: impl AsRef<std::path::Path>, err: std::io::Error) -> Self {
        Error::Io {
            path: path.as_ref().display().to_string(),
            msg: err.to_string(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
