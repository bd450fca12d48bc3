//! Error type shared by the whole library.
//!
//! Two broad classes matter to callers: `Validation` errors mean the input
//! does not satisfy a documented type or shape contract (CLI exit code 2);
//! everything else is a mathematical precondition failure on structurally
//! valid input (CLI exit code 3).

use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    /// Input fails a shape, range or schema contract.
    #[error("validation: {0}")]
    Validation(String),

    /// A pair of points is not transverse where transversality is required.
    #[error("non-transverse configuration: {0}")]
    NonTransverse(String),

    /// The point is not transverse to the Cayley base point, so the Cayley
    /// transform is singular there.
    #[error("non-transverse to Cayley base point: {0}")]
    CayleyBasePoint(String),

    /// No usable auxiliary point was found for the extended Maslov cocycle.
    #[error("degenerate configuration: {0}")]
    DegenerateConfiguration(String),

    /// An eigenvalue left the half-plane on which the principal logarithm
    /// branch is guaranteed.
    #[error("outside guaranteed branch region: {0}")]
    BranchRegion(String),

    /// Generator matrices do not satisfy the surface-group relator.
    #[error("relator violation: {0}")]
    RelatorViolation(String),

    /// The winding-number path passed too close to a singular polar
    /// decomposition, or branch tracking failed to stabilize.
    #[error("singular polar decomposition on path: {0}")]
    SingularPolar(String),

    /// An iterative numeric kernel failed to converge.
    #[error("numerical failure: {0}")]
    Numerical(String),

    /// The requested operation is not defined for this family.
    #[error("unsupported family: {0}")]
    UnsupportedFamily(String),
}

impl Error {
    /// Stable machine-readable code for the CLI error object.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Validation(_) => "validation",
            Error::NonTransverse(_) => "non_transverse",
            Error::CayleyBasePoint(_) => "cayley_base_point",
            Error::DegenerateConfiguration(_) => "degenerate_configuration",
            Error::BranchRegion(_) => "branch_region",
            Error::RelatorViolation(_) => "relator_violation",
            Error::SingularPolar(_) => "singular_polar",
            Error::Numerical(_) => "numerical",
            Error::UnsupportedFamily(_) => "unsupported_family",
        }
    }

    /// True for errors the CLI reports as input validation (exit code 2).
    pub fn is_validation(&self) -> bool {
        matches!(self, Error::Validation(_))
    }

    /// Human-readable detail without the code prefix.
    pub fn detail(&self) -> String {
        match self {
            Error::Validation(d)
            | Error::NonTransverse(d)
            | Error::CayleyBasePoint(d)
            | Error::DegenerateConfiguration(d)
            | Error::BranchRegion(d)
            | Error::RelatorViolation(d)
            | Error::SingularPolar(d)
            | Error::Numerical(d)
            | Error::UnsupportedFamily(d) => d.clone(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
