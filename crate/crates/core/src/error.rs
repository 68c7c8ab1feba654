use thiserror::Error;

use crate::geometry::Point;

/// Errors produced by the geometric kernel and the matching machinery.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("non-finite coordinate ({x}, {y})")]
    NonFinite { x: f64, y: f64 },

    #[error("degenerate segment: endpoints ({}, {}) coincide", .0.x, .0.y)]
    DegenerateSegment(Point),

    #[error("negative or non-finite radius {0}")]
    InvalidRadius(f64),

    #[error("identical circles have infinitely many common boundary points")]
    IdenticalCircles,

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("argument {name} = {value} outside its domain {domain}")]
    Domain {
        name: &'static str,
        value: f64,
        domain: &'static str,
    },

    #[error("points {0} and {1} coincide")]
    DuplicatePoints(usize, usize),

    #[error("point set has odd cardinality {0}")]
    OddCardinality(usize),

    #[error("instance of {points} points exceeds the cap of {cap} points")]
    CapExceeded { points: usize, cap: usize },

    #[error("index {index} out of range for {len} points")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("invalid matching: {0}")]
    InvalidMatching(String),

    #[error("k = {k} outside 1..={max}")]
    KOutOfRange { k: usize, max: usize },

    #[error("points {0}, {1}, {2} are collinear")]
    Collinear(usize, usize, usize),

    #[error("matching is not pairwise crossing: edges {0:?} and {1:?} do not cross")]
    NotPairwiseCrossing((usize, usize), (usize, usize)),

    #[error("matching is not {k}-local: edges {subset:?} can be improved by {gain:e}")]
    NotLocal {
        k: usize,
        subset: Vec<(usize, usize)>,
        gain: f64,
    },

    #[error("no witness found: slack {slack:e} exceeds tolerance {tolerance:e}")]
    WitnessSlack { slack: f64, tolerance: f64 },

    #[error("infeasible construction: {0}")]
    Infeasible(String),

    #[error("instance file: {0}")]
    Format(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
