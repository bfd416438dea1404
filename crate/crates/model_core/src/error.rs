use thiserror::Error;

/// Errors raised by the model, solvers and transforms.
#[derive(Debug, Error)]
pub enum Error {
    #[error("shape: {0}")]
    Shape(String),
    #[error("infeasible: {0}")]
    Infeasible(String),
    #[error("budget-exceeded: search stopped after {nodes} nodes")]
    BudgetExceeded { nodes: u64 },
    #[error("timed-out after {seconds:.3} s")]
    TimedOut { seconds: f64 },
    #[error("too-large: enumeration would exceed {limit} flow tensors")]
    TooLarge { limit: u64 },
    #[error("config: {0}")]
    Config(String),
    #[error("range: {0}")]
    Range(String),
    #[error("empty front")]
    Empty,
    #[error("not-linearizable: {0}")]
    NotLinearizable(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
