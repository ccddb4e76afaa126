//! Pure-state ensembles analyzed through their Gram matrices.
//!
//! The crate is `no_std` (it needs `alloc`). Randomized routines take an
//! explicit seed or RNG so results are reproducible.

#![no_std]
#![allow(unused_imports)]

extern crate alloc;

pub mod classical;
pub mod deform;
pub mod ensemble;
pub mod entropy;
pub mod numerics;
pub mod sample;
pub mod triples;

pub use classical::{ClassicalError, DiscreteChannel};
pub use deform::{DeformError, DeformKind, DeformMethod, DeformationReport, MultiplierMatrix};
pub use ensemble::{Ensemble, EnsembleError, GramMatrix, PurifiedState};
pub use entropy::{Base, EntropyError, EntropyValue};
pub use numerics::{HermitianMatrix, Matrix, NumericsError, RealMatrix, C64};
pub use triples::{TripleError, TripleSpec};
