use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("exponent r = {r} must satisfy 2 <= r <= lg N")]
    ExponentOutOfRange { r: u32 },

    #[error("window index j = {j} is outside 0..={max}")]
    WindowOutOfRange { j: u32, max: u32 },

    #[error("search space does not fit in machine words: {0}")]
    Infeasible(String),

    #[error("no prime found in [{lo}, {hi}] after {tries} draws")]
    PrimeSearchExhausted { lo: String, hi: String, tries: u32 },

    #[error("line {line}: {msg}")]
    InstanceFormat { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
