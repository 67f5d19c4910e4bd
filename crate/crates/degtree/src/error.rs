//! Error type shared by all modules.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// The defining identity `sum N_i = 1 + sum i*N_i` fails.
    #[error("balance violation: sum N_i = {total} but 1 + sum i*N_i = {weighted}")]
    BalanceViolation { total: u64, weighted: u64 },

    /// A degree sequence with no vertices at all.
    #[error("empty degree sequence")]
    Empty,

    /// A generator produced a sequence with no hubs.
    #[error("degenerate size: generated family member has no positive-degree vertex")]
    DegenerateSize,

    /// Offspring law with mean away from one.
    #[error("offspring law is not critical (mean {mean})")]
    NotCritical { mean: f64 },

    /// Offspring law whose support makes the requested conditioning impossible.
    #[error("offspring law is periodic with period {period}; no feasible size near request")]
    NotAperiodic { period: u64 },

    /// Rejection sampler exhausted its attempt budget.
    #[error("rejection budget of {budget} attempts exceeded (target size {size})")]
    RejectionBudgetExceeded { budget: u64, size: u64 },

    /// A lattice walk that does not stay positive before its endpoint.
    #[error("walk is not an excursion (prefix positivity fails at step {at})")]
    NotAnExcursion { at: usize },

    /// Vertex index outside `2..=s` or otherwise unusable.
    #[error("invalid vertex index {v} for tree of size {size}")]
    InvalidVertex { v: usize, size: usize },

    /// Band query with an inverted or out-of-range height window.
    #[error("invalid height range [{h1}, {h2}] for vertex at height {hv}")]
    InvalidRange { h1: u64, h2: u64, hv: u64 },

    /// Exhaustive enumeration refused above the configured bound.
    #[error("size {size} exceeds enumeration bound {bound}")]
    SizeTooLarge { size: u64, bound: u64 },

    /// Excursion permutation with the wrong number of blocks.
    #[error("permutation of length {got} does not match {expected} excursions")]
    PermutationSizeMismatch { got: usize, expected: usize },

    /// Tied minimum or maximum where a unique extremum is required.
    #[error("tied extremum at indices {a} and {b}")]
    TiedExtremum { a: usize, b: usize },

    /// Quadrature of 1/x over a grid where x is not positive.
    #[error("path is not positive at grid index {at}")]
    NonPositivePath { at: usize },

    /// Hitting time of a level the curve never reaches.
    #[error("curve never reaches level {level}")]
    LevelNotReached { level: f64 },

    /// Invalid parameter combination.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// Experiment configuration error.
    #[error("config error: {0}")]
    ConfigError(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    /// Malformed input file (CSV or JSON payload).
    #[error("parse error: {0}")]
    Parse(String),
}
