//! Error type shared across the crate.

use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Values from distinct fields were combined.
    MixedFields(String),
    /// A scalar operation was impossible (division by zero, bad modulus...).
    Scalar(String),
    /// Form arithmetic violated a degree contract.
    DegreeMismatch(String),
    /// A matrix or morphism had the wrong shape for the operation.
    Shape(String),
    /// An operation required an injective morphism and the determinant is zero.
    NotInjective,
    /// A grading invariant of a morphism failed.
    InvalidGrading(String),
    /// The t^2 coefficient of a Hilbert polynomial did not vanish.
    RankMismatch(String),
    /// An internal exactness assertion failed (signals invalid input data).
    CohomologyAssertion(String),
    /// A Grassmannian enumeration would exceed the configured budget.
    EnumerationBudget { needed: u64, cap: u64 },
    /// A stratum sampler exhausted its retry cap.
    SamplerExhausted { space: String, label: String, retries: u32 },
    /// Text input did not conform to the grammar.
    Parse { line: usize, col: usize, msg: String },
    /// Anything else worth reporting verbatim.
    Other(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::MixedFields(m) => write!(f, "mixed field descriptors: {m}"),
            Error::Scalar(m) => write!(f, "scalar error: {m}"),
            Error::DegreeMismatch(m) => write!(f, "degree mismatch: {m}"),
            Error::Shape(m) => write!(f, "shape error: {m}"),
            Error::NotInjective => write!(f, "morphism is not injective (determinant is zero)"),
            Error::InvalidGrading(m) => write!(f, "invalid grading: {m}"),
            Error::RankMismatch(m) => write!(f, "rank mismatch: {m}"),
            Error::CohomologyAssertion(m) => write!(f, "cohomology assertion failed: {m}"),
            Error::EnumerationBudget { needed, cap } => {
                write!(f, "enumeration budget exceeded: need {needed} points, cap {cap}")
            }
            Error::SamplerExhausted { space, label, retries } => {
                write!(f, "sampler for {space} {label} exhausted {retries} retries")
            }
            Error::Parse { line, col, msg } => write!(f, "parse error at {line}:{col}: {msg}"),
            Error::Other(m) => write!(f, "{m}"),
        }
    }
}

impl std::error::Error for Error {}
