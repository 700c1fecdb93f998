use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("time step {dt} exceeds stability limit {limit}")]
    StepSize { dt: f64, limit: f64 },

    #[error("index {index} out of range for length {len}")]
    OutOfRange { index: usize, len: usize },

    #[error("only {crossed} sites crossed the front threshold, need at least {needed}")]
    InsufficientSignal { crossed: usize, needed: usize },

    #[error("speed {v} is not below signal speed {c_s}")]
    NotSubluminal { v: f64, c_s: f64 },

    #[error("reception time {t_recv} precedes send time {t_send}")]
    InvalidTimestamps { t_send: f64, t_recv: f64 },

    #[error("event set is degenerate (rank {rank} < 3)")]
    Degenerate { rank: usize },

    #[error("size mismatch: {left} vs {right}")]
    SizeMismatch { left: usize, right: usize },

    #[error("input too short: {len} < {needed}")]
    TooShort { len: usize, needed: usize },

    #[error("negative or non-finite quantity: {0}")]
    Negative(String),
}
