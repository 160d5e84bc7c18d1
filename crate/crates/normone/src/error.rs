//! Crate-wide error type.

use thiserror::Error;

/// Errors raised by the arithmetic and obstruction machinery.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An operation received zero where a nonzero element is required.
    #[error("zero input: {0}")]
    ZeroInput(&'static str),
    /// The requested degree is incompatible with the field modulus
    /// (e.g. n does not divide q - 1, or q fails a congruence).
    #[error("incompatible modulus: {0}")]
    IncompatibleModulus(String),
    /// The degree is divisible by the residue characteristic.
    #[error("wild characteristic: gcd({n}, {q}) != 1")]
    WildCharacteristic { n: u64, q: u64 },
    /// A Hensel-style lift requires residue 1.
    #[error("residue is not 1: {0}")]
    ResidueNotOne(String),
    /// A norm-one precondition failed.
    #[error("norm is not 1: {0}")]
    NormNotOne(String),
    /// The leading term of a series cannot be determined at the working
    /// precision.
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),
    /// A tower descriptor does not match the extension it describes.
    #[error("tower mismatch: {0}")]
    TowerMismatch(String),
    /// Kummer generators are not independent modulo n-th powers.
    #[error("dependent generators: {0}")]
    DependentGenerators(String),
    /// A branch extension shape outside the supported table.
    #[error("unsupported branch shape: {0}")]
    UnsupportedShape(String),
    /// Rational function evaluated at a pole.
    #[error("pole at point ({0}, {1})")]
    PoleAtPoint(i64, i64),
    /// A model references a component that was never declared.
    #[error("unknown component: {0}")]
    UnknownComponent(String),
    /// A model with no points or no components.
    #[error("empty model: {0}")]
    EmptyModel(&'static str),
    /// Graph operation that requires a tree received a non-tree.
    #[error("graph is not a tree: {0}")]
    NotATree(String),
    /// A branch has no assigned group element.
    #[error("missing edge value for branch {0}")]
    MissingEdgeValue(String),
    /// Vector length does not match the number of branches.
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    /// Locality evidence for a multi-norm reduction failed.
    #[error("evidence failed: {0}")]
    EvidenceFailed(String),
    /// A scripted reproduction disagreed with the recorded conclusion.
    #[error("verification mismatch: {0}")]
    VerificationMismatch(String),
    /// Malformed literal or file input.
    #[error("parse error: {0}")]
    ParseError(String),
}

pub type Result<T> = std::result::Result<T, Error>;
