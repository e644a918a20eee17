use thiserror::Error;

/// Failure modes shared across the engine.
///
/// Every variant belongs to one of four families (see [`Error::category`]) which the
/// command-line front end maps onto process exit codes.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("schema error: {0}")]
    Schema(String),
    #[error("invalid cell structure: {0}")]
    Complex(String),
    #[error("local system is not flat: {0}")]
    NotFlat(String),
    #[error("singular matrix: {0}")]
    Singular(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("ring error: {0}")]
    Ring(String),
    #[error("characteristic {p} too small: {what}")]
    Characteristic { p: u32, what: String },
    #[error("not mixed: {0}")]
    NotMixed(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("enumeration budget exceeded: {needed} candidates > budget {budget}")]
    Budget { needed: String, budget: u64 },
    #[error("oracle mismatch: {0}")]
    Mismatch(String),
}

/// Coarse failure family, used for exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Category {
    Schema,
    Math,
    Budget,
    Mismatch,
}

impl Error {
    pub fn category(&self) -> Category {
        match self {
            Error::Schema(_) => Category::Schema,
            Error::Budget { .. } => Category::Budget,
            Error::Mismatch(_) => Category::Mismatch,
            _ => Category::Math,
        }
    }

    /// Process exit code: 2 schema, 3 mathematical precondition, 4 budget, 5 oracle mismatch.
    pub fn exit_code(&self) -> i32 {
        match self.category() {
            Category::Schema => 2,
            Category::Math => 3,
            Category::Budget => 4,
            Category::Mismatch => 5,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
