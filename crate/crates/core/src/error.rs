use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// A precondition on the inputs was violated (non-positive point, n < k, ...).
    #[error("domain error: {0}")]
    Domain(String),

    #[error("shape error: {0}")]
    Shape(String),

    #[error("invalid monomial transform: {0}")]
    InvalidTransform(String),

    #[error(
        "no block of dimension {m} is registered; supply one through BlockRegistry::register"
    )]
    UnsupportedBlock { m: usize },

    #[error("malformed block recipe: {0}")]
    MalformedRecipe(String),

    #[error("block recipe rejected ({invariant}): {detail}")]
    RecipeRejected {
        invariant: &'static str,
        detail: String,
    },

    #[error("certification failed: {0}")]
    Certification(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
