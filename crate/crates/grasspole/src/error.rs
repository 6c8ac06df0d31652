use std::fmt;

/// Errors surfaced by the public constructors and checked entry points.
///
/// Internal arithmetic assumes operands were validated at a public boundary
/// (same field, compatible dimensions) and panics if that contract is broken.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// The requested characteristic is not a prime number.
    NonPrimeCharacteristic(u64),
    /// The extension modulus factors over the prime field.
    ReducibleModulus(String),
    /// The modulus string is malformed (wrong length, not monic, zero degree).
    InvalidModulus(String),
    /// Extension degree outside the supported range 2..=4, or parameters too
    /// large for exact construction.
    UnsupportedExtension(String),
    /// Division or inversion of zero.
    DivisionByZero,
    /// Two operands live in different fields.
    FieldMismatch(String, String),
    /// The operation needs a finite field but received the rationals.
    InfiniteField,
    /// Monic normalization of the zero polynomial.
    ZeroPolynomial,
    /// A square matrix was required.
    NonSquare(usize, usize),
    /// Matrix dimensions do not line up.
    DimensionMismatch(String),
    /// Kernel basis search exhausted its degree bound.
    DegreeBoundExceeded(usize),
    /// The matrix does not have full row rank.
    RankDeficient,
    /// The zero vector has no projective normalization.
    ZeroVector,
    /// The vector fails the quadratic decomposability relations.
    NotDecomposable,
    /// A projective compensator must have full row rank.
    RankDeficientCompensator,
    /// The (C, A) pair is not observable, so no left factorization exists.
    NotObservable,
    /// The leading block of the compensator is singular, so no affine
    /// feedback matrix can be recovered.
    DependentAtInfinity,
    /// The denominator block has identically zero determinant.
    ZeroDeterminant,
    /// Degree entries admit no row/column split on the coefficient support.
    DegreeLawViolation(String),
    /// A maximal minor of the realized matrix has more than one term.
    NotMonomial(String),
    /// The field has too few elements for the requested construction.
    FieldTooSmall { order: u64, needed: u64 },
    /// The requested degree is below the minimum for the construction.
    DegreeTooSmall { given: usize, minimum: usize },
    /// The system is degenerate, so fibers are not zero dimensional.
    DegenerateSystem,
    /// The operation only supports specific (m, p, n) shapes.
    UnsupportedShape(String),
    /// Malformed textual input (scalar, polynomial, spec string, JSON).
    Parse(String),
    /// An internal verification failed; indicates a bug, reported rather
    /// than silently ignored.
    Internal(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NonPrimeCharacteristic(p) => write!(f, "{p} is not prime"),
            Error::ReducibleModulus(m) => write!(f, "modulus {m} is reducible"),
            Error::InvalidModulus(m) => write!(f, "invalid modulus: {m}"),
            Error::UnsupportedExtension(s) => write!(f, "unsupported extension: {s}"),
            Error::DivisionByZero => write!(f, "division by zero"),
            Error::FieldMismatch(a, b) => write!(f, "field mismatch: {a} vs {b}"),
            Error::InfiniteField => write!(f, "operation requires a finite field"),
            Error::ZeroPolynomial => write!(f, "zero polynomial"),
            Error::NonSquare(r, c) => write!(f, "matrix is {r}x{c}, not square"),
            Error::DimensionMismatch(s) => write!(f, "dimension mismatch: {s}"),
            Error::DegreeBoundExceeded(b) => {
                write!(f, "no full kernel basis up to degree {b}")
            }
            Error::RankDeficient => write!(f, "matrix does not have full row rank"),
            Error::ZeroVector => write!(f, "zero vector"),
            Error::NotDecomposable => write!(f, "vector is not decomposable"),
            Error::RankDeficientCompensator => {
                write!(f, "compensator rows are linearly dependent")
            }
            Error::NotObservable => write!(f, "system is not observable"),
            Error::DependentAtInfinity => {
                write!(f, "leading block is singular; no affine feedback")
            }
            Error::ZeroDeterminant => write!(f, "denominator block has zero determinant"),
            Error::DegreeLawViolation(s) => write!(f, "degree law violation: {s}"),
            Error::NotMonomial(s) => write!(f, "minor is not a monomial: {s}"),
            Error::FieldTooSmall { order, needed } => {
                write!(f, "field with {order} elements is too small, need {needed}")
            }
            Error::DegreeTooSmall { given, minimum } => {
                write!(f, "degree {given} is below the minimum {minimum}")
            }
            Error::DegenerateSystem => write!(f, "system is degenerate"),
            Error::UnsupportedShape(s) => write!(f, "unsupported shape: {s}"),
            Error::Parse(s) => write!(f, "parse error: {s}"),
            Error::Internal(s) => write!(f, "internal invariant failed: {s}"),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
