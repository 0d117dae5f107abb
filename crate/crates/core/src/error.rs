use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: malformed line: {msg}")]
    Malformed { line: usize, msg: String },

    #[error("line {line}: non-positive activity for vertex {vertex}")]
    NonPositiveActivity { line: usize, vertex: usize },

    #[error("line {line}: vertex index {index} out of range 1..={q}")]
    VertexOutOfRange { line: usize, index: i64, q: usize },

    #[error("line {line}: duplicate activity declaration for vertex {vertex}")]
    DuplicateActivity { line: usize, vertex: usize },

    #[error("no pattern exists: the graph has no adjacent pair")]
    NoPattern,

    #[error("pattern {0} is not dominant")]
    NotDominant(String),

    #[error("{what}: {size} exceeds the cap of {cap} (pass --unsafe-cap to override)")]
    CapExceeded {
        what: &'static str,
        size: usize,
        cap: usize,
    },

    #[error("invalid torus Z_{m}^{n}: {reason}")]
    InvalidTorus {
        m: u32,
        n: u32,
        reason: &'static str,
    },

    #[error("cluster order k={0} is above the hard cap of {max}", max = crate::cluster::MAX_ORDER)]
    OrderTooLarge(usize),

    #[error("formal log needs constant coefficient 1, got {0}")]
    LogConstantTerm(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("bijection violated: {0}")]
    Bijection(String),

    #[error("internal inconsistency: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
