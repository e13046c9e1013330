use thiserror::Error;

/// Which line of the Latin-square condition a table violates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    Row,
    Column,
}

impl std::fmt::Display for Axis {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Axis::Row => f.write_str("row"),
            Axis::Column => f.write_str("column"),
        }
    }
}

#[derive(Debug, Error)]
pub enum LoopError {
    #[error("grid is not {order}x{order}: {detail}")]
    BadDimensions { order: usize, detail: String },

    #[error("entry {value} at row {row}, column {col} is outside [0, {order})")]
    EntryOutOfRange {
        row: usize,
        col: usize,
        value: usize,
        order: usize,
    },

    #[error("not a Latin square: {axis} {index} repeats value {value}")]
    NotLatinSquare {
        axis: Axis,
        index: usize,
        value: usize,
    },

    #[error("no two-sided identity element")]
    NoIdentity,

    #[error("order {order} exceeds the supported maximum {max}")]
    OrderTooLarge { order: usize, max: usize },

    #[error("unknown identity tag `{0}`")]
    UnknownIdentity(String),

    #[error("unknown statement tag `{0}`")]
    UnknownStatement(String),

    #[error("permutation degree {found} does not match table order {expected}")]
    DegreeMismatch { expected: usize, found: usize },

    #[error("group closure exceeded bound {bound} (reached {reached} elements)")]
    ClosureBoundExceeded { bound: usize, reached: usize },

    #[error("triple is not an autotopism; fails at {0:?}")]
    NotAutotopism(Vec<usize>),

    #[error("loop is not an Osborn loop")]
    NotOsborn,

    #[error("loop is not a CC-loop")]
    NotCC,

    #[error("permutation is not in the multiplication group")]
    NotInMultGroup,

    #[error("cipher scheme invariant violated: {0}")]
    SchemeInvariantViolated(String),

    #[error("invalid filter expression: {0}")]
    BadFilter(String),

    #[error("{path}:{line}: {msg}")]
    Parse {
        path: String,
        line: usize,
        msg: String,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, LoopError>;
