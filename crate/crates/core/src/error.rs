use thiserror::Error;

use crate::matchmem::Mode;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("input contains no sequence data")]
    EmptyInput,

    /// `position` is the 1-based byte offset in the raw input.
    #[error("invalid character {:?} at position {position}", char::from(*byte))]
    InvalidCharacter { position: usize, byte: u8 },

    #[error("catalog line {line}: {reason}")]
    InvalidCatalogLine { line: usize, reason: String },

    #[error("invalid geometry: {0}")]
    InvalidGeometry(String),

    #[error("text of {len} characters does not fit an array holding {capacity}")]
    TextTooLong { len: usize, capacity: usize },

    #[error("pattern of length {len} exceeds the data width {width}")]
    PatternTooLong { len: usize, width: usize },

    #[error("pattern has length {actual}, array was loaded for length {expected}")]
    PatternLengthMismatch { expected: usize, actual: usize },

    #[error("window {window} is outside the data width {width}")]
    WindowOutOfRange { window: usize, width: usize },

    #[error("block {block} does not exist (array has {blocks} blocks)")]
    BlockOutOfRange { block: usize, blocks: usize },

    #[error("tag vector has {actual} bits, memory has {expected} rows")]
    TagLengthMismatch { expected: usize, actual: usize },

    #[error("column {got} written out of order, expected column {expected}")]
    OutOfOrderColumn { expected: usize, got: usize },

    #[error("column {0} already holds recorded matches")]
    DirtyColumn(usize),

    #[error("operation requires {expected:?} mode, memory is in {actual:?}")]
    ModeViolation { expected: Mode, actual: Mode },

    #[error("illegal memory mode transition {from:?} -> {to:?}")]
    IllegalTransition { from: Mode, to: Mode },

    #[error("detector stepped after reaching the exit state")]
    SteppedAfterExit,

    #[error("cycle-accurate detector supports 3 pointer blocks, got pattern length {0}")]
    UnsupportedPatternLength(usize),

    #[error("block {block} assigned to both {first} and {second}")]
    OverlappingAssignment {
        block: usize,
        first: String,
        second: String,
    },

    #[error("gene {0} has no block assignment")]
    GeneNotMapped(String),

    #[error("unknown disease {0:?}")]
    UnknownDisease(String),

    #[error("scan requires at least one active block")]
    NoActiveBlocks,

    #[error("internal invariant violated: {0}")]
    InvariantViolation(String),
}

impl Error {
    /// True for failures that indicate a simulator bug rather than bad input.
    pub fn is_internal(&self) -> bool {
        matches!(self, Error::InvariantViolation(_))
    }
}
