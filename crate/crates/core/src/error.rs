use thiserror::Error;

use crate::Rational;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Every failure the library can report.
///
/// The variant names are part of the command-line contract: the driver prints
/// [`Error::name`] verbatim, so renaming a variant is a breaking change.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid fan input: {0}")]
    InvalidInput(String),
    #[error("maximal cone {cone:?} has determinant {det}, expected ±1")]
    NonSmooth { cone: Vec<usize>, det: String },
    #[error("wall {wall:?} lies on {count} maximal cones (expected 2)")]
    Incomplete { wall: Vec<usize>, count: usize },
    #[error("nef hypothesis fails: {0}")]
    NotNef(String),
    #[error("bad curve basis: {0}")]
    BadCurveBasis(String),
    #[error("enumeration region is unbounded: {0}")]
    UnboundedRegion(String),
    #[error("series live over different grading contexts or truncation orders")]
    ContextMismatch,
    #[error("series is not a unit: {0}")]
    NonUnit(String),
    #[error("series has a nonzero constant term")]
    NonzeroConstantTerm,
    #[error("constant part of the linear system does not have full column rank")]
    SingularConstantPart,
    #[error("linear system has no solution at degree {0}")]
    InconsistentAtOrder(Rational),
    #[error("z^-1 coefficient of the I-function has a scalar part at class {0:?}")]
    UnexpectedScalarTerm(Vec<i64>),
    #[error("associated-bundle mirror map disagrees with the direct computation: {0}")]
    BundleMirrorMismatch(String),
    #[error("Batyrev element routes disagree for D_{0}")]
    RouteMismatch(usize),
    #[error("logarithmic Jacobian is not integrable: {0}")]
    NotClosed(String),
    #[error("monomial {0:?} pairs to zero with every nef basis element")]
    DegreeZeroAmbiguity(Vec<i64>),
}

impl Error {
    /// Stable identifier of the variant, as printed by the CLI.
    pub fn name(&self) -> &'static str {
        match self {
            Error::InvalidInput(_) => "InvalidInput",
            Error::NonSmooth { .. } => "NonSmooth",
            Error::Incomplete { .. } => "Incomplete",
            Error::NotNef(_) => "NotNef",
            Error::BadCurveBasis(_) => "BadCurveBasis",
            Error::UnboundedRegion(_) => "UnboundedRegion",
            Error::ContextMismatch => "ContextMismatch",
            Error::NonUnit(_) => "NonUnit",
            Error::NonzeroConstantTerm => "NonzeroConstantTerm",
            Error::SingularConstantPart => "SingularConstantPart",
            Error::InconsistentAtOrder(_) => "InconsistentAtOrder",
            Error::UnexpectedScalarTerm(_) => "UnexpectedScalarTerm",
            Error::BundleMirrorMismatch(_) => "BundleMirrorMismatch",
            Error::RouteMismatch(_) => "RouteMismatch",
            Error::NotClosed(_) => "NotClosed",
            Error::DegreeZeroAmbiguity(_) => "DegreeZeroAmbiguity",
        }
    }
}
