use thiserror::Error;

/// Errors produced by the code algebra, the transmission scheme, the
/// recovery simulator and the provisioner.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("matrix dimensions must be at least 1x1 (got {rows}x{cols})")]
    EmptyMatrix { rows: usize, cols: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("malformed matrix text at row {row}: {reason}")]
    MatrixText { row: usize, reason: String },

    #[error("not a generator matrix: rank {rank} < {rows} rows")]
    NotAGenerator { rank: usize, rows: usize },

    #[error("matrix is not in systematic form [I_k | P]")]
    NotSystematic,

    #[error("unrecoverable erasure pattern {positions:?}")]
    UnrecoverableErasure { positions: Vec<usize> },

    #[error("received word is inconsistent with the code on its known positions")]
    InconsistentReceived,

    #[error("inverse of zero in GF(2^{degree})")]
    ZeroInverse { degree: u32 },

    #[error("field elements from GF(2^{left}) and GF(2^{right}) cannot be combined")]
    FieldMismatch { left: u32, right: u32 },

    #[error("unsupported extension degree {0} (supported: 2..=10)")]
    UnsupportedDegree(u32),

    #[error("length {0} must be odd (gcd(n, 2) = 1)")]
    EvenLength(usize),

    #[error("designed distance out of closed-form range: {0}")]
    DesignedDistanceRange(String),

    #[error("invalid code parameters: {0}")]
    InvalidCode(String),

    #[error("rule `{rule}` is not applicable: {reason}")]
    InapplicableRule { rule: String, reason: String },

    #[error("invalid round plan: {0}")]
    InvalidPlan(String),

    #[error("failure index {index} outside 1..={n}")]
    InvalidScenario { index: usize, n: usize },

    #[error("catalog line {line}: {reason}")]
    Catalog { line: usize, reason: String },

    #[error("topology line {line}: {reason}")]
    Topology { line: usize, reason: String },

    #[error("graph not 2-link-connected between {source_node} and {target}")]
    NotTwoConnected { source_node: String, target: String },

    #[error("model is infeasible")]
    Infeasible,

    #[error("solver failure: {0}")]
    Solver(String),

    #[error("{path}: {reason}")]
    Io { path: String, reason: String },
}

pub type Result<T> = std::result::Result<T, Error>;
