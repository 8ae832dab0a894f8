use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("unsupported field: {0}")]
    UnsupportedField(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    /// Input to a reduction that has zero weight in its world.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("too large for exhaustive enumeration: {0}")]
    TooLarge(String),

    #[error("no coalescence after {epochs} epochs ({steps} steps into the past)")]
    NoCoalescence { epochs: u32, steps: u64 },

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("unknown statistic `{0}`")]
    UnknownStatistic(String),

    #[error("statistic `{stat}` is not defined for the {world} world")]
    StatisticUnavailable { stat: String, world: String },

    #[error("mismatched support: {0} vs {1}")]
    MismatchedSupport(usize, usize),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
