use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("empty sequence literal")]
    EmptyInput,
    #[error("malformed term `{0}`")]
    MalformedTerm(String),
    #[error("multiplicity must be a positive integer in `{0}`")]
    BadMultiplicity(String),
    #[error("term {value} exceeds the norm limit {limit}")]
    TermOutOfRange { value: i64, limit: u32 },
    #[error("arithmetic overflow")]
    Overflow,
    #[error("operation is undefined on the trivial sequence")]
    Trivial,
    #[error("sequence {0} contains a zero term")]
    ZeroTerm(String),
    #[error("sequence {0} needs both positive and negative terms")]
    OneSided(String),
    #[error("sum is {0}, not zero")]
    NotZeroSum(i64),
    #[error("sequence length {len} exceeds the oracle cap {cap}")]
    LengthCap { len: u64, cap: u64 },
    #[error("term {value} is not present {needed} time(s)")]
    MissingTerm { value: i64, needed: u32 },
    #[error("{0} is not a minimal zero-sum sequence")]
    NotAtom(String),
    #[error("n = {n} is outside [1, {max}]")]
    NOutOfRange { n: u32, max: u32 },
    #[error("derived sequence {child} of {parent} is missing from the atom set")]
    IncompleteAtomSet { parent: String, child: String },
    #[error("bound chain violated at {atom}: {detail}")]
    ChainViolation { atom: String, detail: String },
    #[error("internal invariant violated: {0}")]
    Invariant(String),
    #[error("invalid atom file: {0}")]
    Schema(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}
