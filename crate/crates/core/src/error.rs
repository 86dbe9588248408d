use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("ground set size {n} outside supported range 1..={max}")]
    GroundSize { n: usize, max: usize },

    #[error("element index {index} outside ground set of size {n}")]
    ElementOutOfRange { index: usize, n: usize },

    #[error("set systems live on different ground sets ({left} vs {right})")]
    GroundMismatch { left: usize, right: usize },

    #[error("malformed bipartition: {0}")]
    Bipartition(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("oracle shape {shape} not supported here: {reason}")]
    UnsupportedShape { shape: String, reason: String },

    #[error("oracle contradicts its declared shape {shape}: member {inside:?}, non-member {outside:?}")]
    ShapeViolation {
        shape: String,
        inside: Vec<usize>,
        outside: Vec<usize>,
    },

    #[error("invalid model: {0}")]
    Model(String),

    #[error("separator `{0}` returned no cut violated by the point it was asked to separate")]
    SeparatorStalled(String),

    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),

    #[error("invalid input: {0}")]
    Input(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
