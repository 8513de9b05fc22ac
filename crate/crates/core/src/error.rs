use thiserror::Error;

use crate::gamma::{Family, MorphismKey, VertexId};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("({r},{n},{m}) is not in Omega: need 1 <= r <= n and m >= 0")]
    OmegaViolation { r: i64, n: i64, m: i64 },

    #[error("{0} is not a vertex of the model")]
    InvalidVertex(VertexId),

    #[error("cannot compose {g} after {f}: endpoints do not match")]
    NotComposable { f: MorphismKey, g: MorphismKey },

    #[error("no arrow {src} -> {dst} of degree {degree}")]
    NoSuchArrow { src: VertexId, dst: VertexId, degree: u8 },

    #[error("window is not a finite box")]
    InfiniteWindow,

    #[error("parameter out of range: {0}")]
    ParameterRange(String),

    #[error("{vertex} belongs to family {family}, expected X or Y")]
    WrongFamily { vertex: VertexId, family: Family },

    #[error("operation needs the {expected} model")]
    ModeMismatch { expected: &'static str },

    #[error("functors live over different tops: {0} vs {1}")]
    IncompatibleTops(VertexId, VertexId),

    #[error("not a subfunctor: generator {0} is missing from the ambient subfunctor")]
    NotASubfunctor(MorphismKey),

    #[error("generator {generator} does not start at the top {top}")]
    ForeignGenerator { generator: MorphismKey, top: VertexId },

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
