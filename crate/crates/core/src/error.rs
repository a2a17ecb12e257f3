use thiserror::Error;

use crate::tautmono::Point;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("fiber half-dimension d = {0} must be odd and positive")]
    EvenOrZeroD(u32),
    #[error("genus g = {0} must be at least 2")]
    GenusTooSmall(u32),
    #[error("invalid characteristic-class generator p{index} for d = {d}")]
    InvalidGenerator { index: u32, d: u32 },
    #[error("monomial has {found} exponent slots, expected {expected}")]
    MonomialShape { found: usize, expected: usize },
    #[error("point {0} is not in the point set")]
    UnknownPoint(Point),
    #[error("intersection class needs at least two distinct points, got ({})", join_points(.0))]
    InvalidSubset(Vec<Point>),
    #[error("point sets differ: {left} vs {right}")]
    PointSetMismatch { left: String, right: String },
    #[error("ring parameters differ")]
    ParamsMismatch,
    #[error("relabeling is not a bijection of the point set")]
    NotABijection,
    #[error("{from} is not a subset of {to}")]
    NotASubset { from: String, to: String },
    #[error("pushforward to {target} is nonzero: {push}")]
    NonzeroPushforward { target: String, push: String },
    #[error("class has a component of odd degree {0}")]
    OddDegree(u32),
    #[error("class is not homogeneous of degree {expected}: found degrees {found:?}")]
    NotHomogeneous { expected: u32, found: Vec<u32> },
    #[error("pushforward of the degree-2d class is not a scalar: {0}")]
    NonScalarPushforward(String),
    #[error("kappa({monomial}) has degree {degree}, not above the fiber dimension")]
    LowDegree { monomial: String, degree: u32 },
    #[error("vector A must be nonempty")]
    EmptyVector,
    #[error("division by a non-constant or zero class")]
    BadDivisor,
    #[error("malformed record: {0}")]
    Record(String),
}

fn join_points(points: &[Point]) -> String {
    points.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(", ")
}

pub type Result<T> = std::result::Result<T, Error>;
