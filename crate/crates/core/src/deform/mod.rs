//! Deformations that move every pairwise overlap in one direction while the
//! entropy moves in the same direction.

mod multiplier;
mod probe;
mod report;
mod search;
mod spin_flip;
mod theorem2;

pub use multiplier::{extract_multiplier, hadamard, MultiplierMatrix};
pub use probe::{planar_boundary_probe, ProbeRow};
pub use report::{verify_phenomenon, DeformKind, DeformMethod, DeformationReport, PhenomenonReport};
pub use search::{search_deformation, SearchConfig};
pub use spin_flip::spin_flip_pair;
pub use theorem2::{deform_theorem2, Theorem2Config};

use crate::ensemble::EnsembleError;
use crate::numerics::NumericsError;
use crate::triples::TripleError;

/// Slack used for every overlap and entropy comparison.
pub const COMPARE_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum DeformError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("diagonals differ at index {index} by {deviation:e}")]
    DiagonalMismatch { index: usize, deviation: f64 },
    #[error("overlap ({row}, {col}) grows from zero to {value:e}")]
    OverlapIncreaseFromZero { row: usize, col: usize, value: f64 },
    #[error("multiplier entry ({row}, {col}) has modulus {modulus} > 1")]
    R2Violation { row: usize, col: usize, modulus: f64 },
    #[error("multiplier diagonal entry {index} is {value}, not 1")]
    NonUnitDiagonal { index: usize, value: f64 },
    #[error("ensembles differ in shape or probabilities")]
    ShapeMismatch,
    #[error("expected 3 states, got {0}")]
    NotATriple(usize),
    #[error("ensemble is rank deficient (minimum Gram eigenvalue {min_eigenvalue:e})")]
    RankDeficient { min_eigenvalue: f64 },
    #[error("overlap {value} must lie strictly between 0 and 1")]
    OverlapOutOfRange { value: f64 },
    #[error("method inapplicable: {0}")]
    MethodInapplicable(&'static str),
    #[error("no deformation found after {evaluations} evaluations")]
    NotFound { evaluations: usize },
    #[error("report fails its own check: {0}")]
    InvalidReport(&'static str),
    #[error("vector {index} has length {norm}, expected 1")]
    NonUnitVector { index: usize, norm: f64 },
    #[error("spec is not on the feasibility boundary (z² = {z_squared:e})")]
    NotPlanar { z_squared: f64 },
    #[error(transparent)]
    Triple(#[from] TripleError),
    #[error(transparent)]
    Ensemble(#[from] EnsembleError),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}
