use thiserror::Error;

/// Errors raised anywhere in the crate.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("operands belong to different field contexts")]
    ContextMismatch,
    #[error("inverse of zero")]
    ZeroInverse,
    #[error("modulus is not prime")]
    NotPrime,
    #[error("reduction polynomial is not irreducible of degree {0}")]
    Reducible(usize),
    #[error("invalid curve parameters: {0}")]
    InvalidCurve(String),
    #[error("point is not on the curve")]
    NotOnCurve,
    #[error("point is not in the order-r subgroup")]
    NotInSubgroup,
    #[error("map-to-point needs p = 2 mod 3")]
    MapToPointUnsupported,
    #[error("hash-to-point retries exhausted")]
    HashRetriesExhausted,
    #[error("pairing input is degenerate after {0} auxiliary-point retries")]
    PairingDegenerate(u32),
    #[error("pairing operands have different orders")]
    OrderMismatch,
    #[error("empty identity")]
    EmptyIdentity,
    #[error("identity collides with the master secret; extraction aborted")]
    ExtractAbort,
    #[error("wrong message type for this scheme")]
    WrongMessageDomain,
    #[error("message must be {expected} bytes, got {got}")]
    MessageLength { expected: usize, got: usize },
    #[error("ciphertext rejected")]
    Rejected,
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error("missing element `{0}`")]
    MissingElement(String),
    #[error("element `{0}` has the wrong type")]
    ElementType(String),
    #[error("depth {depth} exceeds hierarchy depth {max}")]
    DepthOverflow { depth: usize, max: usize },
    #[error("key depth {key} does not match ciphertext depth {ct}")]
    DepthMismatch { key: usize, ct: usize },
    #[error("period {period} out of range for {periods} periods")]
    PeriodOutOfRange { period: u64, periods: u64 },
    #[error("no key for period {0} in the bundle")]
    NoPeriodKey(u64),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("checksum mismatch")]
    Checksum,
    #[error("unsupported format version {0}")]
    Version(u8),
    #[error("expected scheme {expected}, found {found}")]
    SchemeMismatch { expected: String, found: String },
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("unpriced cost term `{0}`")]
    Unpriced(String),
    #[error("division by zero in {0}")]
    DivisionByZero(&'static str),
    #[error("unknown {kind} `{name}`")]
    Unknown { kind: &'static str, name: String },
    #[error("i/o: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
