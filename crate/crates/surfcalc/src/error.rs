//! Engine-level errors. Parser diagnostics live in [`crate::dsl`].

use std::fmt;

use crate::exact::Rational;

#[derive(Debug, Clone, PartialEq)]
pub enum EngineError {
    /// Vector/matrix/class dimensions do not match.
    Dimension { expected: usize, got: usize },
    /// A symmetric matrix was required.
    NotSymmetric,
    /// A square matrix was required.
    NotSquare,
    /// A name was declared twice in the same scope.
    DuplicateName(String),
    /// A curve name is not tracked on the surface at hand.
    UnknownCurve(String),
    /// Blow-up center is not a single transverse tracked point.
    UnsupportedConfiguration(String),
    /// The requested curve set has a Gram matrix that is not negative definite.
    NotContractible(String),
    /// The divisor meets a contracted curve, so it does not descend.
    NotDescendable { curve: String, value: Rational },
    /// A nef certificate does not decompose the divisor it claims to certify.
    CertificateInvalid(String),
    /// A Pic^0 restriction runs through an undeclared intersection point.
    /// The numerical degree of the restriction is still known.
    ObstructionNotComputable { target: String, degree: Rational },
    /// Any other misuse of an operation.
    Usage(String),
}

impl fmt::Display for EngineError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EngineError::Dimension { expected, got } => {
                write!(f, "dimension mismatch: expected {expected}, got {got}")
            }
            EngineError::NotSymmetric => write!(f, "matrix is not symmetric"),
            EngineError::NotSquare => write!(f, "matrix is not square"),
            EngineError::DuplicateName(n) => write!(f, "name `{n}` is already declared"),
            EngineError::UnknownCurve(n) => write!(f, "no tracked curve named `{n}`"),
            EngineError::UnsupportedConfiguration(m) => {
                write!(f, "unsupported center configuration: {m}")
            }
            EngineError::NotContractible(m) => {
                write!(f, "curve set is not contractible: {m}")
            }
            EngineError::NotDescendable { curve, value } => {
                write!(f, "divisor meets contracted curve `{curve}` (value {value})")
            }
            EngineError::CertificateInvalid(m) => write!(f, "invalid nef certificate: {m}"),
            EngineError::ObstructionNotComputable { target, degree } => write!(
                f,
                "Pic^0 obstruction on `{target}` not computable (anonymous incidence point); \
                 degree of the restriction is {degree}"
            ),
            EngineError::Usage(m) => write!(f, "{m}"),
        }
    }
}

impl std::error::Error for EngineError {}

pub type Result<T> = std::result::Result<T, EngineError>;
