use num_bigint::BigUint;
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid deck parameters k={k}, d={d}: {reason}")]
    InvalidSpec { k: u32, d: u32, reason: &'static str },

    #[error("capacity exceeded: {what} requires {required}, cap is {cap}")]
    Capacity {
        what: &'static str,
        required: BigUint,
        cap: u64,
    },

    #[error("{op} is not defined for D({k}^{d})")]
    UnsupportedSpec { op: &'static str, k: u32, d: u32 },

    #[error("hands or cards belong to different decks")]
    SpecMismatch,

    #[error("attribute {attribute} out of range for a deck with {d} attributes")]
    AttributeOutOfRange { attribute: usize, d: u32 },

    #[error("value {value} out of range for a deck with {k} values")]
    ValueOutOfRange { value: u32, k: u32 },

    #[error("expected two distinct cards")]
    DegeneratePair,

    #[error("duplicate card {0}")]
    DuplicateCard(String),

    #[error("expected {expected} cards, got {found}")]
    Arity { expected: usize, found: usize },

    #[error("hand of {size} cards cannot be split into blocks of {block}")]
    Divisibility { size: usize, block: usize },

    #[error("invalid symbol {0}")]
    InvalidSymbol(String),

    #[error("malformed map: {0}")]
    MalformedMap(String),

    #[error("invalid group element: {0}")]
    InvalidElement(String),

    #[error("goal {0}")]
    InvalidGoal(String),

    #[error("parse error at {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

impl Error {
    pub(crate) fn capacity(what: &'static str, required: impl Into<BigUint>, cap: u64) -> Self {
        Error::Capacity {
            what,
            required: required.into(),
            cap,
        }
    }

    pub(crate) fn parse(pos: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            pos,
            msg: msg.into(),
        }
    }
}
