//! Error type shared by every module of the crate.

use serde::Serialize;
use thiserror::Error;

/// Everything that can go wrong while validating spaces, building covers,
/// or certifying embeddings. Serializes with a `kind` tag for
/// machine-readable diagnostics.
#[derive(Error, Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind")]
pub enum Error {
    #[error("distance matrix is not square: row {row} has {len} entries, expected {expected}")]
    NotSquare {
        row: usize,
        len: usize,
        expected: usize,
    },
    #[error("distance matrix entry ({i},{j}) is not a finite number")]
    NonFiniteDistance { i: usize, j: usize },
    #[error("diagonal entry ({i},{i}) is {value}, must be 0")]
    NonzeroDiagonal { i: usize, value: f64 },
    #[error("asymmetric matrix: d({i},{j}) = {forward} but d({j},{i}) = {backward}")]
    AsymmetricMatrix {
        i: usize,
        j: usize,
        forward: f64,
        backward: f64,
    },
    #[error("nonpositive off-diagonal distance d({i},{j}) = {value}")]
    NegativeDistance { i: usize, j: usize, value: f64 },
    #[error(
        "triangle inequality violated at ({i},{k}) via {j}: {direct} > {through} = d({i},{j}) + d({j},{k})"
    )]
    TriangleViolation {
        i: usize,
        j: usize,
        k: usize,
        direct: f64,
        through: f64,
    },
    #[error("bad parameters: {message}")]
    BadParams { message: String },
    #[error("family does not cover the space; first uncovered point index {missing}")]
    NotACover { missing: usize },
    #[error("space does not carry vector-point coordinates")]
    NotVectorSpace,
    #[error("maximal clique enumeration exceeded the cap of {cap} cliques")]
    CliqueCapExceeded { cap: usize },
    #[error("enumeration would exceed the cap of {cap} entries")]
    EnumerationCapExceeded { cap: usize },
    #[error("space has {n} points; exhaustive cover search is limited to {max}")]
    TooLarge { n: usize, max: usize },
    #[error("invalid tree: {message}")]
    BadTree { message: String },
    #[error("scale {n} cannot be certified: {reason}")]
    UncertifiableScale { n: i32, reason: String },
    #[error("computed curve is not monotone at argument {argument}")]
    MonotonicityViolation { argument: f64 },
}

impl Error {
    pub(crate) fn bad_params(message: String) -> Self {
        Error::BadParams { message }
    }

    pub(crate) fn bad_tree(message: String) -> Self {
        Error::BadTree { message }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
