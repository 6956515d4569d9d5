use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("symbol {symbol} at position {position} is outside the alphabet 0..{q}")]
    SymbolOutOfRange { symbol: u32, position: usize, q: u32 },

    #[error("cannot parse word {input:?}: {reason}")]
    Parse { input: String, reason: String },

    #[error("words carry different parameters: {left} vs {right}")]
    ParamMismatch { left: String, right: String },

    #[error("word of length {len} is shorter than the duplication length {k}")]
    TooShort { len: usize, k: usize },

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("word is not irreducible")]
    NotIrreducible,

    #[error("word does not lie in the descendant cone of the given root")]
    OutsideCone,

    #[error("words have different roots")]
    RootMismatch,

    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("weight mismatch: {left} vs {right}")]
    WeightMismatch { left: usize, right: usize },

    #[error("resource cap exceeded: {what} would exceed {cap}")]
    ResourceCap { what: &'static str, cap: usize },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("degenerate parameters: {0}")]
    Degenerate(String),

    #[error("search budget exhausted: {0}")]
    SearchBudget(String),

    #[error("fixed-point iteration did not converge after {iterations} steps")]
    NoConvergence { iterations: usize },

    #[error("infeasible geometry: {0}")]
    Infeasible(String),

    #[error("inverted interval: lower {lower} > upper {upper}")]
    InvertedInterval { lower: f64, upper: f64 },

    #[error("no codeword is consistent with the reads")]
    NoCandidate,

    #[error("{candidates} codewords are consistent with the reads")]
    Ambiguous { candidates: usize },

    #[error("invalid code: {0}")]
    InvalidCode(String),
}
