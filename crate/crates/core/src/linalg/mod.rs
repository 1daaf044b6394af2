//! Exact integer linear algebra: matrices, Smith normal form, K₀ presentations
//! of graphs with the unit class, and pointed-isomorphism decisions.

use num_bigint::BigInt;
use thiserror::Error;

mod k0;
mod matrix;
mod pointed;
mod smith;

pub use k0::{
    graph_determinant, has_trivial_k_theory, k0_element_equal, k0_presentation, presentation_shape, K0Element,
    K0Presentation, PointedAbelianGroup,
};
pub use matrix::{identity_minus_transpose, IntMatrix};
pub use pointed::{
    pointed_iso_exists, pointed_iso_exists_with_cap, size_cap, PointedIsoVerdict, PointedIsoWitness, DEFAULT_SIZE_CAP,
};
pub use smith::{smith_normal_form, SmithDecomposition};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("a {rows}x{cols} matrix needs {} entries, got {entries}", rows * cols)]
    EntryCount { rows: usize, cols: usize, entries: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix is {rows}x{cols}, not square")]
    NotSquare { rows: usize, cols: usize },
    #[error("graph has a sink `{0}`; its K0 presentation is not square")]
    SinkPresent(String),
    #[error("finite group of order {order} exceeds the search cap {cap} (set LPA_SIZE_CAP to raise it)")]
    SizeCap { order: BigInt, cap: u64 },
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
}
