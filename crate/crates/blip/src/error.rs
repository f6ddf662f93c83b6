use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// A parameter is outside its documented range.
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    /// A lattice site outside the logical domain of a field.
    #[error("site ({i}, {j}) outside field domain (need i >= 1, j >= {min_row})")]
    OutOfDomain { i: i64, j: i64, min_row: u32 },

    /// A run was configured inconsistently (bad horizon, bad rule family, ...).
    #[error("configuration error: {0}")]
    Config(String),

    /// A `tau <= n` comparison cannot be decided from the simulated horizon.
    #[error("tau({i},{k}) exceeds the simulated horizon {horizon}, cannot compare against {threshold}")]
    TauUndecidable { i: u32, k: u32, horizon: u64, threshold: u64 },

    /// The thin-strip sampler ran out of its configured row budget.
    #[error("strip budget exhausted: crossing not reached within {max_rows} rows")]
    StripExhausted { max_rows: u32 },

    /// A computation would exceed the configured cell budget.
    #[error("cell budget exceeded: {requested} cells requested, budget {budget}")]
    BudgetExceeded { requested: u64, budget: u64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter { name, reason: reason.into() }
    }
}
