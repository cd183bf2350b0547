use thiserror::Error;

/// Errors produced by graph construction, labeling checks, the solver and
/// the theorem dispatch.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A graph could not be built because it would not be an oriented graph.
    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    /// An argument or document violated a documented precondition.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// The theorem dispatch was asked about dimensions outside its range.
    #[error("({m}, {n}) is outside the range m, n >= {min}; pass the solve option to compute it exactly")]
    OutOfRange { m: usize, n: usize, min: usize },

    /// The search stopped before resolving the question.
    ///
    /// `partial_count` is only meaningful as a lower bound; it is not a
    /// valid enumeration count. `last_resolved_k` is the largest budget a
    /// lambda search had already shown infeasible.
    #[error("search budget exhausted after {nodes} nodes ({partial_count} labelings counted so far)")]
    BudgetExhausted {
        nodes: u64,
        partial_count: u64,
        last_resolved_k: Option<u32>,
    },

    /// A result that should hold by construction failed its re-check.
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
