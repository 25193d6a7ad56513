use num_bigint::BigUint;
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },

    #[error("unknown relation symbol `{name}` at offset {offset}")]
    UnknownRelation { name: String, offset: usize },

    #[error("constant argument `{token}` at offset {offset}: queries are constant-free")]
    ConstantArgument { token: String, offset: usize },

    #[error("line {line}: {message}")]
    MalformedLine { line: usize, message: String },

    #[error("input is not valid UTF-8")]
    Utf8(#[from] std::string::FromUtf8Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("{what}: {actual} nodes exceeds the limit of {limit}")]
    ResourceGuard {
        what: &'static str,
        limit: usize,
        actual: usize,
    },

    #[error("instance has {count} repairs, exceeding the cap of {cap}")]
    CapExceeded { count: BigUint, cap: u64 },

    #[error("cycle length bound {bound} exceeded (requested {requested})")]
    BoundExceeded { requested: usize, bound: usize },

    #[error("invalid query: {0}")]
    InvalidQuery(String),

    #[error("invariant violation: {0}")]
    Invariant(String),
}
