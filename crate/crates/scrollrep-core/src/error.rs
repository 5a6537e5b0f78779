use alloc::string::String;
use core::fmt;

/// Crate-wide error type. Every fallible operation reports through this enum
/// so the pipelines can surface a single diagnostic stream.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// A modulus that is not an odd prime below 2^31.
    InvalidPrime(u64),
    /// Division by zero in a field or exact polynomial division.
    DivisionByZero,
    /// Operands built over different rings (field, variable count or order).
    RingMismatch,
    /// A tuple or matrix had the wrong length for the requested operation.
    LengthMismatch { expected: usize, got: usize },
    /// An input that must be homogeneous (or bihomogeneous) is not.
    NotHomogeneous,
    /// Exact division left a remainder.
    InexactDivision,
    /// A parser rejected its input.
    Parse(String),
    /// A geometric precondition failed (empty variety, map undefined, ...).
    Geometry(String),
    /// A pipeline ran out of retries or hit an unrecoverable state.
    Pipeline(String),
    /// Two primes produced different integer invariants.
    BadPrime(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidPrime(p) => write!(f, "invalid prime modulus {p}"),
            Error::DivisionByZero => write!(f, "division by zero"),
            Error::RingMismatch => write!(f, "operands belong to different rings"),
            Error::LengthMismatch { expected, got } => {
                write!(f, "length mismatch: expected {expected}, got {got}")
            }
            Error::NotHomogeneous => write!(f, "input is not homogeneous"),
            Error::InexactDivision => write!(f, "exact division left a remainder"),
            Error::Parse(m) => write!(f, "parse error: {m}"),
            Error::Geometry(m) => write!(f, "geometry error: {m}"),
            Error::Pipeline(m) => write!(f, "pipeline error: {m}"),
            Error::BadPrime(m) => write!(f, "bad prime: {m}"),
        }
    }
}

pub type Result<T> = core::result::Result<T, Error>;
