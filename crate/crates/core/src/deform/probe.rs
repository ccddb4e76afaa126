use alloc::vec::Vec;

use num_traits::Float;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{hadamard, DeformError, MultiplierMatrix};
use crate::ensemble::Ensemble;
use crate::entropy::spectrum_entropy;
use crate::numerics::{eigvalsh, HermitianMatrix, C64};
use crate::sample::random_state;
use crate::triples::{construct_triple, TripleSpec};

const PLANAR_TOL: f64 = 1e-12;

/// One probe evaluation: perturbation size, direction index, entropy change
/// and the change of `(a12, a23, a31)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbeRow {
    pub epsilon: f64,
    pub direction: usize,
    pub entropy_delta: f64,
    pub overlap_deltas: [f64; 3],
}

fn entropy_of(h: &HermitianMatrix) -> f64 {
    let l: Vec<f64> = eigvalsh(h).into_iter().map(|x| x.max(0.0)).collect();
    spectrum_entropy(&l)
}

fn overlaps_of(h: &HermitianMatrix, probs: &[f64; 3]) -> [f64; 3] {
    let a = |i: usize, j: usize| h[(i, j)].norm() / (probs[i] * probs[j]).sqrt();
    [a(0, 1), a(1, 2), a(2, 0)]
}

/// Pushes a planar triple out of its plane along `directions` random
/// directions for each `ε`: every state gains a component `ε w_i |2⟩`
/// (`w` a random unit vector of `C³`), is renormalized, and the overlaps are
/// then shrunk uniformly until each is below `(1 - ε²)` times its original
/// value. Reports the entropy change against the unperturbed triple.
pub fn planar_boundary_probe(
    spec: &TripleSpec,
    eps_grid: &[f64],
    directions: usize,
    seed: u64,
) -> Result<Vec<ProbeRow>, DeformError> {
    let base = construct_triple(spec)?;
    let z_squared = base.state(2)[2].norm_sqr();
    if z_squared >= PLANAR_TOL {
        return Err(DeformError::NotPlanar { z_squared });
    }
    let g0 = base.gram_matrix();
    let s0 = entropy_of(g0.as_hermitian());
    let a0 = overlaps_of(g0.as_hermitian(), &spec.probs);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ws: Vec<Vec<C64>> = (0..directions).map(|_| random_state(3, &mut rng)).collect();
    let mut rows = Vec::with_capacity(eps_grid.len() * directions);
    for &epsilon in eps_grid {
        for (direction, w) in ws.iter().enumerate() {
            let states: Vec<Vec<C64>> = (0..3)
                .map(|i| {
                    let mut v = base.state(i).to_vec();
                    v[2] += w[i] * epsilon;
                    let n = crate::numerics::norm(&v);
                    v.into_iter().map(|x| x / n).collect()
                })
                .collect();
            let moved = Ensemble::with_tolerance(3, states, spec.probs.to_vec(), 1e-8)?;
            let g1 = moved.gram_matrix();
            let a1 = overlaps_of(g1.as_hermitian(), &spec.probs);
            let t = (0..3)
                .filter(|&k| a1[k] > 0.0)
                .map(|k| a0[k] * (1.0 - epsilon * epsilon) / a1[k])
                .fold(1.0, f64::min);
            let g2 = hadamard(&g1, &MultiplierMatrix::uniform_shrink(3, t))?;
            let a2 = overlaps_of(&g2, &spec.probs);
            rows.push(ProbeRow {
                epsilon,
                direction,
                entropy_delta: entropy_of(&g2) - s0,
                overlap_deltas: core::array::from_fn(|k| a2[k] - a0[k]),
            });
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn boundary() -> TripleSpec {
        TripleSpec::new(
            [0.5f64.sqrt(), 2.0 / 6f64.sqrt(), 1.0 / 3f64.sqrt()],
            0.75f64.acos(),
            [1.0 / 3.0; 3],
        )
    }

    #[test]
    fn small_out_of_plane_moves_raise_entropy() {
        let rows = planar_boundary_probe(&boundary(), &[1e-3], 100, 3).unwrap();
        assert_eq!(rows.len(), 100);
        for r in rows {
            assert!(r.entropy_delta > 0.0, "{r:?}");
            assert!(r.overlap_deltas.iter().all(|&d| d <= 0.0));
        }
    }

    #[test]
    fn zero_epsilon_changes_nothing() {
        let rows = planar_boundary_probe(&boundary(), &[0.0], 5, 3).unwrap();
        for r in rows {
            assert_eq!(r.entropy_delta, 0.0);
        }
    }

    #[test]
    fn interior_spec_is_rejected() {
        assert!(matches!(
            planar_boundary_probe(&boundary().with_xi(0.2), &[1e-3], 1, 0),
            Err(DeformError::NotPlanar { .. })
        ));
    }
}
