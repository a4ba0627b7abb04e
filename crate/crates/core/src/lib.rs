//! Covering moduli of finite metric spaces and coarse Lipschitz embeddings
//! into the nonnegative cone of a sup-norm sequence space.
//!
//! The crate computes exact cover invariants (diameter, Lebesgue number,
//! point multiplicity) on finite metric spaces, the coarse and uniform
//! covering moduli they induce, a family of explicit cover constructions
//! (threshold cliques, greedy separable covers, integer grid covers,
//! rooted-tree covers), and a certified coarse Lipschitz embedding built
//! from a family of covers at geometric scales.
//!
//! All heavy inner loops (clique threshold scans, cover-candidate search,
//! pairwise certification) run on rayon when the default `parallel`
//! feature is enabled and fall back to sequential iteration without it.
//! Results are identical either way.

// `!(x > 0.0)` is the NaN-rejecting form of every parameter check here.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
// index loops mirror the symmetric matrix fills they implement
#![allow(clippy::needless_range_loop)]

pub mod catalog;
pub mod cliques;
pub mod cover;
pub mod embedding;
pub mod error;
pub mod ext;
pub mod moduli;
pub(crate) mod par;
pub mod space;
pub mod sparse;
pub mod tree;

pub use cover::{Cover, CoverMetrics};
pub use embedding::{DistortionReport, EmbeddingConfig, PointMap, ScaleFamily};
pub use error::Error;
pub use ext::Extended;
pub use space::{FiniteMetricSpace, LpExponent, MapModuli, SpaceSpec};
pub use sparse::{Coord, SignedSparseSequence, SparseNonnegativeSequence};
pub use tree::RootedTree;
