use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("line {line}: unknown vertex `{id}`")]
    UnknownVertex { line: usize, id: String },
    #[error("line {line}: unknown edge `{id}`")]
    UnknownEdge { line: usize, id: String },
    #[error("line {line}: duplicate id `{id}`")]
    Duplicate { line: usize, id: String },
    #[error("missing header line (expected `{expected} <name>`)")]
    MissingHeader { expected: &'static str },
    #[error("json: {0}")]
    Json(String),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex index {0} out of range")]
    VertexOutOfRange(usize),
    #[error("edge length must be at least 1")]
    ZeroLength,
    #[error("duplicate vertex id `{0}`")]
    DuplicateVertex(String),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PlaneError {
    #[error("order {0} is not prime")]
    NotPrime(u64),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RankError {
    #[error("girth {girth} is below 12 units, the rank functional is undefined")]
    GirthTooSmall { girth: u64 },
    #[error("the root system is empty")]
    NoRoots,
    #[error("one-missing-chamber rank needs q >= 2, got {0}")]
    OrderTooSmall(u64),
    #[error("vertex `{vertex}` has a link of girth {girth:?} below 12 units")]
    NotNpc { vertex: String, girth: Option<u64> },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ComplexError {
    #[error("face `{face}`: side {side} ends at `{head}` but the next side starts at `{tail}`")]
    OpenBoundary {
        face: String,
        side: usize,
        head: String,
        tail: String,
    },
    #[error("face `{face}`: angle sum {sum} differs from {expected}")]
    AngleSum {
        face: String,
        sum: u32,
        expected: u32,
    },
    #[error("face `{face}`: angle {angle} at side {side} is not a positive even number below 12")]
    BadAngle {
        face: String,
        side: usize,
        angle: u32,
    },
    #[error("face `{face}`: boundary does not develop to a simple lattice polygon")]
    NotSimple { face: String },
    #[error("face `{face}` has fewer than 3 sides")]
    TooFewSides { face: String },
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("the complex is not connected")]
    Disconnected,
    #[error("the complex has no vertices")]
    Empty,
    #[error("face `{0}` is not a unit triangle")]
    NotTriangulated(String),
    #[error("vertex `{vertex}` has a link of girth {girth:?} below 12 units")]
    NotNpc { vertex: String, girth: Option<u64> },
    #[error("vertex `{0}` has a link with a valency-1 or isolated vertex")]
    HasBoundary(String),
    #[error("{0}")]
    Invalid(String),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExtendError {
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error("no vertex link has an integral projective order")]
    NoProjectiveOrder,
    #[error("vertex `{0}` carries deficient edges but its link has no projective order")]
    UndefinedOrderAt(String),
    #[error("family does not match the complex: {0}")]
    BadFamily(String),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DevelopError {
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error("inconsistent gluing while lifting around `{0}`")]
    Inconsistent(String),
    #[error("vertex {0} is not an interior vertex of the ball")]
    NotInterior(usize),
    #[error("the prescribed link must have all edges of length 2 and girth >= 12")]
    BadLink,
}
