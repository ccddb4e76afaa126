use alloc::vec::Vec;

use num_traits::One;

use super::DeformError;
use crate::ensemble::GramMatrix;
use crate::numerics::{HermitianMatrix, Matrix, C64};

const DIAGONAL_TOL: f64 = 1e-9;
const MODULUS_TOL: f64 = 1e-9;
const ZERO_ENTRY: f64 = 1e-12;
const ZERO_GROWTH: f64 = 1e-10;

/// Hermitian matrix with unit diagonal and entries of modulus at most one,
/// relating two Gram matrices entrywise: `G̃ = r ∘ G`.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiplierMatrix(HermitianMatrix);

impl MultiplierMatrix {
    pub fn new(h: HermitianMatrix) -> Result<Self, DeformError> {
        let n = h.dim();
        for i in 0..n {
            let d = h[(i, i)].re;
            if (d - 1.0).abs() > DIAGONAL_TOL {
                return Err(DeformError::NonUnitDiagonal { index: i, value: d });
            }
            for j in 0..n {
                let modulus = h[(i, j)].norm();
                if modulus > 1.0 + MODULUS_TOL {
                    return Err(DeformError::R2Violation {
                        row: i,
                        col: j,
                        modulus,
                    });
                }
            }
        }
        Ok(MultiplierMatrix(h))
    }

    /// The all-ones matrix.
    pub fn ones(n: usize) -> Self {
        MultiplierMatrix(HermitianMatrix::new(Matrix::from_fn(n, n, |_, _| C64::one())).unwrap())
    }

    /// `t J + (1 - t) I`, positive for `t ∈ [0, 1]`.
    pub fn uniform_shrink(n: usize, t: f64) -> Self {
        let m = Matrix::from_fn(n, n, |i, j| C64::new(if i == j { 1.0 } else { t }, 0.0));
        MultiplierMatrix(HermitianMatrix::new(m).unwrap())
    }

    /// The three-state phase multiplier: ones everywhere except
    /// `r23 = e^{iφ}`, `r32 = e^{-iφ}`. Taking the Hadamard product with a
    /// canonical Gram matrix shifts its triple phase by `φ`.
    pub fn phase(phi: f64) -> Self {
        let mut m = Matrix::from_fn(3, 3, |_, _| C64::one());
        m[(1, 2)] = C64::from_polar(1.0, phi);
        m[(2, 1)] = C64::from_polar(1.0, -phi);
        MultiplierMatrix(HermitianMatrix::new(m).unwrap())
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn as_hermitian(&self) -> &HermitianMatrix {
        &self.0
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        self.0.eigenvalues()
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.0.min_eigenvalue()
    }

    pub fn is_positive(&self, tol: f64) -> bool {
        self.min_eigenvalue() >= -tol
    }
}

/// Entrywise product `r ∘ G`.
pub fn hadamard(g: &GramMatrix, r: &MultiplierMatrix) -> Result<HermitianMatrix, DeformError> {
    let n = g.dim();
    if r.dim() != n {
        return Err(DeformError::DimensionMismatch {
            expected: n,
            found: r.dim(),
        });
    }
    let (gh, rh) = (g.as_hermitian(), r.as_hermitian());
    let m = Matrix::from_fn(n, n, |i, j| gh[(i, j)] * rh[(i, j)]);
    Ok(HermitianMatrix::new(m)?)
}

/// The multiplier `r` with `G̃ = r ∘ G`. Entries where `G` vanishes are set
/// to one and require `G̃` to vanish there as well.
pub fn extract_multiplier(g: &GramMatrix, g_tilde: &GramMatrix) -> Result<MultiplierMatrix, DeformError> {
    let n = g.dim();
    if g_tilde.dim() != n {
        return Err(DeformError::DimensionMismatch {
            expected: n,
            found: g_tilde.dim(),
        });
    }
    for i in 0..n {
        let deviation = (g[(i, i)].re - g_tilde[(i, i)].re).abs();
        if deviation > DIAGONAL_TOL {
            return Err(DeformError::DiagonalMismatch { index: i, deviation });
        }
    }
    let mut m = Matrix::identity(n);
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let (a, b) = (g[(i, j)], g_tilde[(i, j)]);
            m[(i, j)] = if a.norm() > ZERO_ENTRY {
                b / a
            } else if b.norm() <= ZERO_GROWTH {
                C64::one()
            } else {
                return Err(DeformError::OverlapIncreaseFromZero {
                    row: i,
                    col: j,
                    value: b.norm(),
                });
            };
        }
    }
    MultiplierMatrix::new(HermitianMatrix::new(m)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sample;
    use crate::triples::{canonical_gram, TripleSpec};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn spec(xi: f64) -> TripleSpec {
        TripleSpec::new(
            [0.5f64.sqrt(), 2.0 / 6f64.sqrt(), 1.0 / 3f64.sqrt()],
            xi,
            [1.0 / 3.0; 3],
        )
    }

    #[test]
    fn ones_is_identity_for_hadamard() {
        let g = canonical_gram(&spec(0.3)).unwrap();
        let h = hadamard(&g, &MultiplierMatrix::ones(3)).unwrap();
        assert_eq!(h.max_abs_diff(g.as_hermitian()), 0.0);
        assert!(matches!(
            hadamard(&g, &MultiplierMatrix::ones(2)),
            Err(DeformError::DimensionMismatch { expected: 3, found: 2 })
        ));
    }

    #[test]
    fn phase_multiplier_shifts_xi() {
        for (xi, phi) in [(0.0, 0.3), (0.2, -0.5), (-0.1, 0.7)] {
            let g = canonical_gram(&spec(xi)).unwrap();
            let shifted = hadamard(&g, &MultiplierMatrix::phase(phi)).unwrap();
            let expected = canonical_gram(&spec(xi + phi)).unwrap();
            assert!(shifted.max_abs_diff(expected.as_hermitian()) < 1e-15);
            let r = extract_multiplier(&g, &expected).unwrap();
            assert!(r.as_hermitian().max_abs_diff(MultiplierMatrix::phase(phi).as_hermitian()) < 1e-12);
        }
    }

    #[test]
    fn phase_multiplier_spectrum() {
        // det r(φ) = 2 cos φ - 2
        let r = MultiplierMatrix::phase(0.5);
        let l = r.eigenvalues();
        let product: f64 = l.iter().product();
        assert!((product - (2.0 * 0.5f64.cos() - 2.0)).abs() < 1e-12);
        assert!(r.min_eigenvalue() < 0.0);
    }

    #[test]
    fn extract_identity_gives_ones() {
        let g = canonical_gram(&spec(0.1)).unwrap();
        let r = extract_multiplier(&g, &g).unwrap();
        let l = r.eigenvalues();
        assert!((l[0] - 3.0).abs() < 1e-12);
        assert!(l[1].abs() < 1e-12 && l[2].abs() < 1e-12);
    }

    #[test]
    fn extract_rejects_bad_pairs() {
        let g = canonical_gram(&spec(0.0)).unwrap();
        let other = canonical_gram(&TripleSpec::new([0.5; 3], 0.0, [0.5, 0.25, 0.25])).unwrap();
        assert!(matches!(
            extract_multiplier(&g, &other),
            Err(DeformError::DiagonalMismatch { index: 0, .. })
        ));
        let ortho = canonical_gram(&TripleSpec::new([0.0, 0.5, 0.5], 0.0, [1.0 / 3.0; 3])).unwrap();
        assert!(matches!(
            extract_multiplier(&ortho, &g),
            Err(DeformError::OverlapIncreaseFromZero { row: 0, col: 1, .. })
        ));
        let small = canonical_gram(&TripleSpec::new([0.1, 0.1, 0.1], 0.0, [1.0 / 3.0; 3])).unwrap();
        assert!(matches!(
            extract_multiplier(&small, &g),
            Err(DeformError::R2Violation { .. })
        ));
    }

    #[test]
    fn uniform_shrink_is_positive() {
        for t in [0.0, 0.3, 1.0] {
            let r = MultiplierMatrix::uniform_shrink(4, t);
            assert!(r.min_eigenvalue() >= -1e-15);
        }
    }

    #[test]
    fn schur_product_stays_positive() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for n in 2..=5 {
            for _ in 0..50 {
                let g = sample::random_ensemble(n, n, &mut rng).gram_matrix();
                let r = random_correlation(n, &mut rng);
                let h = hadamard(&g, &r).unwrap();
                assert!(h.min_eigenvalue() >= -1e-12);
                assert!((h.trace() - 1.0).abs() < 1e-12);
            }
        }
    }

    fn random_correlation(n: usize, rng: &mut ChaCha8Rng) -> MultiplierMatrix {
        let vecs: Vec<Vec<C64>> = (0..n).map(|_| sample::random_state(n, rng)).collect();
        let m = Matrix::from_fn(n, n, |i, j| crate::numerics::inner(&vecs[i], &vecs[j]));
        MultiplierMatrix::new(HermitianMatrix::new(m).unwrap()).unwrap()
    }
}
