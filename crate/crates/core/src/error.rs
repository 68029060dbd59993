use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("{0} is not a usable prime")]
    NotPrime(u64),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("duplicate interpolation abscissa {0}")]
    DuplicateAbscissa(String),

    #[error("arrow {0:?} is a loop")]
    LoopDetected(String),
    #[error("duplicate identifier {0:?}")]
    DuplicateId(String),
    #[error("unknown vertex {0:?}")]
    UnknownVertex(String),
    #[error("unknown arrow {0:?}")]
    UnknownArrow(String),

    #[error("modules live over different quivers")]
    QuiverMismatch,
    #[error("modules live over different fields")]
    FieldMismatch,
    #[error("subspace is not stable under arrow {arrow:?}")]
    Unstable { arrow: String },
    #[error("prime {p} divides a denominator in {entry}")]
    BadPrime { p: u64, entry: String },
    #[error("parameter {0} is excluded for this family")]
    InvalidParameter(String),

    #[error("not a derivation: relation fails at vertex {vertex:?}")]
    NotDerivation { vertex: String },
    #[error("not a module homomorphism: fails at arrow {arrow:?}")]
    NotIntertwiner { arrow: String },
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("word content does not match the module dimension vector")]
    ContentMismatch,
    #[error("count overflow")]
    CountOverflow,
    #[error("flag counts for word {word} are not polynomial: {detail}")]
    NonPolynomialCount { word: String, detail: String },
    #[error("not enough good primes: {0}")]
    NotEnoughPrimes(String),

    #[error("dim Ext^1 is {0}, expected 1")]
    ExtDimension(usize),
    #[error("split class supplied: the derivation is inner")]
    SplitClass,
    #[error("formula meaningless: Ext^1 vanishes (the product formula is meaningless if there are no non-split extensions)")]
    FormulaMeaningless,
    #[error("stratum at prime {p} with fingerprint key matches no anchor")]
    UnanchoredStratum { p: u64 },
    #[error("anchors {0:?} and {1:?} fall into the same stratum")]
    AnchorCollision(String, String),
    #[error("no majority among candidate fingerprints; supply more candidates")]
    Inconclusive,
}
