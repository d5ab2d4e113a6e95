//! Error type shared by every module.

use alloc::string::String;
use alloc::vec::Vec;

use crate::stallings::MalnormalityWitness;
use crate::word::Word;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("unknown letter symbol {0:?}")]
    UnknownSymbol(char),
    #[error("letter {symbol:?} is outside an alphabet of rank {rank}")]
    LetterOutOfRange { symbol: char, rank: usize },
    #[error("rank must be between 1 and 26, got {0}")]
    InvalidRank(usize),
    #[error("trivial subgroup not allowed")]
    TrivialSubgroup,
    #[error("subgroup is the whole free group")]
    WholeGroup,
    #[error("generator list must be nonempty")]
    NoGenerators,
    #[error("automorphism needs exactly {expected} images, got {got}")]
    ImageCount { expected: usize, got: usize },
    #[error("supplied inverse does not compose to the identity on generator {0}")]
    NotInverse(Word),
    #[error("subgroup system is not malnormal: {0}")]
    NotMalnormal(MalnormalityWitness),
    #[error("label {0} has no subword in C")]
    OutsideCylC(Word),
    #[error("path labels must be nonempty")]
    EmptyPath,
    #[error("the identity has no current")]
    TrivialElement,
    #[error("occurrence pattern must be nonempty")]
    EmptyPattern,
    #[error("depth {depth} is below the minimum {min}")]
    DepthTooSmall { depth: usize, min: usize },
    #[error("table depth {have} is smaller than the requested {want}")]
    DepthTooLarge { have: usize, want: usize },
    #[error("word {0} is not a key of this table")]
    NotInDomain(Word),
    #[error("negative weight at {0}")]
    NegativeWeight(Word),
    #[error("table is not additive at {0}")]
    Inconsistent(Word),
    #[error("linear system at length {level} is inconsistent: rows {plus:?} against rows {minus:?}")]
    UnsolvableLevel {
        level: usize,
        plus: Vec<Word>,
        minus: Vec<Word>,
    },
    #[error("repair current undefined for an empty subgroup system")]
    RepairUndefined,
    #[error("zero projective class")]
    ZeroProjectiveClass,
    #[error("automorphism does not stabilize the subgroup system")]
    DoesNotStabilize,
    #[error("tables belong to different systems or depths")]
    TableMismatch,
    #[error("concatenation reduces to the identity")]
    DegenerateProduct,
    #[error("scale must be positive")]
    NonPositiveScale,
    #[error("threshold exponent is too large to materialize")]
    ThresholdTooLarge,
    #[error("decomposition did not converge after {0} refinements")]
    NoConvergence(usize),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}
