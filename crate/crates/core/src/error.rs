use alloc::string::String;
use core::fmt;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    NotPrime(u32),
    Shape {
        expected: (usize, usize),
        found: usize,
    },
    RaggedRow {
        row: usize,
        expected: usize,
        found: usize,
    },
    Unreduced {
        value: u32,
        p: u32,
    },
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        found: usize,
    },
    FieldMismatch {
        expected: u32,
        found: u32,
    },
    AlgebraMismatch(&'static str),
    SideMismatch(&'static str),
    InvalidAlgebra(String),
    InvalidModule(String),
    InvalidMap(String),
    InvalidComma(String),
    InvalidPresentation(String),
    /// The Hom space is too large for exhaustive isomorphism search.
    IsoCapExceeded {
        hom_dim: usize,
        cap: usize,
    },
    /// An enumeration exceeded its configured bound.
    EnumerationCap {
        what: &'static str,
        cap: usize,
    },
    Malformed(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NotPrime(p) => write!(f, "modulus {p} is not prime"),
            Error::Shape { expected, found } => write!(
                f,
                "expected {}x{} = {} entries, found {found}",
                expected.0,
                expected.1,
                expected.0 * expected.1
            ),
            Error::RaggedRow { row, expected, found } => {
                write!(f, "row {row} has {found} entries, expected {expected}")
            }
            Error::Unreduced { value, p } => write!(f, "entry {value} is not reduced mod {p}"),
            Error::DimensionMismatch {
                context,
                expected,
                found,
            } => write!(f, "{context}: expected dimension {expected}, found {found}"),
            Error::FieldMismatch { expected, found } => {
                write!(f, "field mismatch: expected F_{expected}, found F_{found}")
            }
            Error::AlgebraMismatch(ctx) => write!(f, "algebra mismatch in {ctx}"),
            Error::SideMismatch(ctx) => write!(f, "module side mismatch in {ctx}"),
            Error::InvalidAlgebra(msg) => write!(f, "invalid algebra: {msg}"),
            Error::InvalidModule(msg) => write!(f, "invalid module: {msg}"),
            Error::InvalidMap(msg) => write!(f, "invalid module map: {msg}"),
            Error::InvalidComma(msg) => write!(f, "invalid comma object: {msg}"),
            Error::InvalidPresentation(msg) => write!(f, "invalid presentation: {msg}"),
            Error::IsoCapExceeded { hom_dim, cap } => write!(
                f,
                "isomorphism search needs a Hom space of dimension {hom_dim}, above the cap {cap}"
            ),
            Error::EnumerationCap { what, cap } => {
                write!(f, "enumeration of {what} exceeded the cap {cap}")
            }
            Error::Malformed(msg) => write!(f, "malformed input: {msg}"),
        }
    }
}

impl core::error::Error for Error {}
