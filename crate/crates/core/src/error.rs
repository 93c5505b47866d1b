use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("field order {0} exceeds the supported maximum of {max}", max = crate::ff::MAX_ORDER)]
    FieldTooLarge(u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("bad parameters: {0}")]
    BadParams(String),
    #[error("bad letter {0}: not a vertex of the presentation graph")]
    BadLetter(String),
    #[error("bad path: {0}")]
    BadPath(String),
    #[error("bad subset: {0}")]
    BadSubset(String),
    #[error("graph is not triangle-free")]
    NotTriangleFree,
    #[error("bad input: {0}")]
    BadInput(String),
    #[error("degenerate face walk of length {0}")]
    DegenerateFace(usize),
    #[error("result is not simplicial: {0}")]
    NotSimplicial(String),
    #[error("triangle {0} meets the subcomplex in two or more edges")]
    PatternMismatch(String),
    #[error("branching oracle found no witness at {0}")]
    OracleFailure(String),
    #[error("convexity violation at {0}")]
    ConvexityViolation(String),
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("graph exceeds {max} vertices", max = crate::graph::MAX_VERTICES)]
    TooManyVertices,
    #[error("json: {0}")]
    Json(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}
