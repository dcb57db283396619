use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("rank mismatch: {0} vs {1}")]
    RankMismatch(usize, usize),

    #[error("generator index {index} out of range for rank {rank}")]
    BadGenerator { index: i64, rank: usize },

    #[error("signature mismatch: expected (n={expected_n}, m={expected_m}), found (n={found_n}, m={found_m})")]
    SignatureMismatch {
        expected_n: usize,
        expected_m: usize,
        found_n: usize,
        found_m: usize,
    },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("word must be nontrivial")]
    TrivialWord,

    #[error("defining relation violated: {0}")]
    RelationViolated(String),

    #[error("not an endomorphism: {0}")]
    NotAnEndomorphism(String),

    #[error("degenerate signature: {0}")]
    DegenerateSignature(String),

    #[error("endomorphism is not injective")]
    NotInjective,

    #[error("result too large to materialize: {0}")]
    TooLarge(String),

    #[error("elements belong to different HNN extensions")]
    GroupMismatch,

    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("precondition violated: {0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, Error>;
