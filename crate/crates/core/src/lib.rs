//! Verification toolkit for infinite groups whose cubic Cayley graphs have
//! connectivity two: presentation families, Cayley balls, 2-separations,
//! tree-decompositions, planarity and the resulting splitting classification.

pub mod cayley;
pub mod classify;
pub mod graph;
pub mod group;
pub mod planarity;
pub mod report;
pub mod separation;
pub mod treedec;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("completion overflow: more than {0} rules generated")]
    CompletionOverflow(usize),
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("ball exceeds the vertex cap of {0}")]
    BallTooLarge(usize),
    #[error("ball too small: radius {radius} < 2 * margin {margin}")]
    BallTooSmall { radius: usize, margin: usize },
    #[error("unknown export format {0:?}")]
    UnknownFormat(String),
    #[error("u and v must be distinct")]
    SameVertex,
    #[error("malformed separator: {0}")]
    MalformedSeparator(String),
    #[error("separation is not of type III")]
    NotTypeIII,
    #[error("no nested orbit found: {0}")]
    NoNestedOrbit(String),
    #[error("separations are not nested: {0}")]
    NotNested(String),
    #[error("part {0} touches the ball boundary")]
    PartialPart(usize),
    #[error("bad template parameter: {0}")]
    BadParameter(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
