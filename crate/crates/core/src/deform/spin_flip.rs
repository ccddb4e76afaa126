use alloc::vec::Vec;

use num_traits::Float;

use super::DeformError;
use crate::ensemble::Ensemble;
use crate::numerics::C64;
use crate::sample::bloch_state;

const UNIT_TOL: f64 = 1e-10;

fn kron(a: [C64; 2], b: [C64; 2]) -> Vec<C64> {
    alloc::vec![a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1]]
}

/// Two-qubit ensembles `{|n_i⟩|n_i⟩}` and `{|n_i⟩|-n_i⟩}` with shared priors.
/// Both have the same pairwise overlaps `(1 + n_i·n_j)/2`.
pub fn spin_flip_pair(vectors: &[[f64; 3]], probs: &[f64]) -> Result<(Ensemble, Ensemble), DeformError> {
    for (index, v) in vectors.iter().enumerate() {
        let norm = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if (norm - 1.0).abs() > UNIT_TOL {
            return Err(DeformError::NonUnitVector { index, norm });
        }
    }
    let parallel = vectors
        .iter()
        .map(|&n| kron(bloch_state(n), bloch_state(n)))
        .collect();
    let anti = vectors
        .iter()
        .map(|&n| kron(bloch_state(n), bloch_state(n.map(|x| -x))))
        .collect();
    Ok((
        Ensemble::new(4, parallel, probs.to_vec())?,
        Ensemble::new(4, anti, probs.to_vec())?,
    ))
}
