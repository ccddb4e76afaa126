//! Entropy functionals and the polar chart on the three-outcome simplex.

use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_3, LN_2, PI};

use num_traits::Float;

use crate::ensemble::Ensemble;
use crate::numerics::{clamp_nonnegative, eigvalsh, trace_power, HermitianMatrix, NumericsError};

/// Accepted deviation of `Tr ρ` (or `Σ p_i`) from one.
pub const TRACE_TOL: f64 = 1e-9;

/// Negative components tolerated on the simplex.
pub const SIMPLEX_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum EntropyError {
    #[error("matrix is not positive semidefinite (minimum eigenvalue {min_eigenvalue:e})")]
    NotPositive { min_eigenvalue: f64 },
    #[error("trace is {trace}, not 1")]
    TraceNotOne { trace: f64 },
    #[error("invalid distribution: {reason}")]
    InvalidDistribution { reason: DistributionFault },
    #[error("point lies outside the probability simplex (component {component} = {value:e})")]
    OutsideSimplex { component: usize, value: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DistributionFault {
    Empty,
    Negative { index: usize, value: f64 },
    Sum { sum: f64 },
}

impl core::fmt::Display for DistributionFault {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            DistributionFault::Empty => write!(f, "no outcomes"),
            DistributionFault::Negative { index, value } => {
                write!(f, "entry {index} is {value}")
            }
            DistributionFault::Sum { sum } => write!(f, "entries sum to {sum}"),
        }
    }
}

impl From<NumericsError> for EntropyError {
    fn from(e: NumericsError) -> Self {
        match e {
            NumericsError::NotPositive { min_eigenvalue } => {
                EntropyError::NotPositive { min_eigenvalue }
            }
            // Hermitian matrices only fail positivity checks here.
            other => unreachable!("unexpected numerics error: {other}"),
        }
    }
}

/// Logarithm base an entropy is reported in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Base {
    #[default]
    Nats,
    Bits,
}

impl Base {
    pub fn as_str(self) -> &'static str {
        match self {
            Base::Nats => "nats",
            Base::Bits => "bits",
        }
    }
}

/// An entropy with its unit. Stored internally in nats.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntropyValue {
    nats: f64,
    base: Base,
}

impl EntropyValue {
    pub fn from_nats(nats: f64, base: Base) -> Self {
        EntropyValue { nats, base }
    }

    pub fn base(&self) -> Base {
        self.base
    }

    pub fn nats(&self) -> f64 {
        self.nats
    }

    pub fn bits(&self) -> f64 {
        self.nats / LN_2
    }

    /// Value in the base this entropy was requested in.
    pub fn value(&self) -> f64 {
        match self.base {
            Base::Nats => self.nats(),
            Base::Bits => self.bits(),
        }
    }

    pub fn in_base(self, base: Base) -> Self {
        EntropyValue { base, ..self }
    }
}

/// `-Σ λ log λ` in nats over an already-clamped spectrum, `0 log 0 = 0`.
pub fn spectrum_entropy(lambdas: &[f64]) -> f64 {
    let s: f64 = lambdas
        .iter()
        .filter(|&&l| l > 0.0)
        .map(|&l| -l * l.ln())
        .sum();
    s.max(0.0)
}

/// `S(ρ) = -Tr ρ log ρ`.
pub fn von_neumann_entropy(h: &HermitianMatrix, base: Base) -> Result<EntropyValue, EntropyError> {
    let lambdas = eigvalsh(h);
    let trace: f64 = trace_power(h, 1);
    if (trace - 1.0).abs() > TRACE_TOL {
        return Err(EntropyError::TraceNotOne { trace });
    }
    let clamped = clamp_nonnegative(&lambdas)?;
    Ok(EntropyValue::from_nats(spectrum_entropy(&clamped), base))
}

/// Entropy of an ensemble, computed from whichever of `ρ` and `G` is smaller.
pub fn ensemble_entropy(e: &Ensemble, base: Base) -> EntropyValue {
    let lambdas = if e.len() <= e.dim() {
        e.gram_matrix().as_hermitian().eigenvalues()
    } else {
        eigvalsh(&e.density_matrix())
    };
    let clamped: Vec<f64> = lambdas.into_iter().map(|l| l.max(0.0)).collect();
    EntropyValue::from_nats(spectrum_entropy(&clamped), base)
}

/// Shannon entropy `H(p) = -Σ p log p`.
pub fn shannon_entropy(probs: &[f64], base: Base) -> Result<EntropyValue, EntropyError> {
    validate_distribution(probs, TRACE_TOL)?;
    Ok(EntropyValue::from_nats(spectrum_entropy(probs), base))
}

pub(crate) fn validate_distribution(probs: &[f64], tol: f64) -> Result<(), EntropyError> {
    if probs.is_empty() {
        return Err(EntropyError::InvalidDistribution {
            reason: DistributionFault::Empty,
        });
    }
    for (index, &value) in probs.iter().enumerate() {
        if !(value >= 0.0) || !value.is_finite() {
            return Err(EntropyError::InvalidDistribution {
                reason: DistributionFault::Negative { index, value },
            });
        }
    }
    let sum: f64 = probs.iter().sum();
    if (sum - 1.0).abs() > tol {
        return Err(EntropyError::InvalidDistribution {
            reason: DistributionFault::Sum { sum },
        });
    }
    Ok(())
}

/// `S_lin = (1 - Σ p_i²) - 2 Σ_{i<j} p_i p_j |⟨ψ_i|ψ_j⟩|²`.
///
/// Debug builds cross-check against [`linearized_entropy_from_density`].
pub fn linearized_entropy(e: &Ensemble) -> f64 {
    let p = e.probs();
    let o = e.pairwise_overlaps();
    let diag: f64 = p.iter().map(|x| x * x).sum();
    let cross: f64 = o.upper_pairs().map(|(i, j, a)| p[i] * p[j] * a * a).sum();
    let s = (1.0 - diag) - 2.0 * cross;
    debug_assert!((s - linearized_entropy_from_density(e)).abs() < 1e-10);
    s
}

/// `Tr ρ - Tr ρ²` straight from the density matrix.
pub fn linearized_entropy_from_density(e: &Ensemble) -> f64 {
    let rho = e.density_matrix();
    trace_power(&rho, 1) - trace_power(&rho, 2)
}

/// A point of the three-outcome simplex with its polar coordinates about the
/// centre `(1/3, 1/3, 1/3)`.
///
/// `lambdas` follow the chart's labelling,
/// `λ_k = 1/3 + √(2/3) r cos(θ + 2πk/3)`, and `theta` is canonical in
/// `[0, π/3]`, which puts the components in the order `λ1 ≥ λ3 ≥ λ2`.
/// `permutation[k]` is the index in the caller's original triple that landed
/// in slot `k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimplexPoint {
    pub lambdas: [f64; 3],
    pub r: f64,
    pub theta: f64,
    pub permutation: [usize; 3],
}

impl SimplexPoint {
    /// Components in the caller's original order.
    pub fn original(&self) -> [f64; 3] {
        let mut out = [0.0; 3];
        for (slot, &src) in self.permutation.iter().enumerate() {
            out[src] = self.lambdas[slot];
        }
        out
    }

    pub fn sum_of_squares(&self) -> f64 {
        self.lambdas.iter().map(|l| l * l).sum()
    }
}

fn chart(r: f64, theta: f64) -> [f64; 3] {
    let k = (2.0f64 / 3.0).sqrt() * r;
    [
        1.0 / 3.0 + k * theta.cos(),
        1.0 / 3.0 + k * (theta + 2.0 * PI / 3.0).cos(),
        1.0 / 3.0 + k * (theta + 4.0 * PI / 3.0).cos(),
    ]
}

fn check_simplex(l: &[f64; 3]) -> Result<(), EntropyError> {
    for (component, &value) in l.iter().enumerate() {
        if value < -SIMPLEX_TOL || !value.is_finite() {
            return Err(EntropyError::OutsideSimplex { component, value });
        }
    }
    let sum: f64 = l.iter().sum();
    if (sum - 1.0).abs() > SIMPLEX_TOL {
        return Err(EntropyError::InvalidDistribution {
            reason: DistributionFault::Sum { sum },
        });
    }
    Ok(())
}

/// Polar coordinates of a simplex point, canonicalized into `θ ∈ [0, π/3]`.
pub fn simplex_to_polar(lambdas: [f64; 3]) -> Result<SimplexPoint, EntropyError> {
    check_simplex(&lambdas)?;
    let mut idx = [0usize, 1, 2];
    idx.sort_by(|&a, &b| {
        lambdas[b]
            .partial_cmp(&lambdas[a])
            .unwrap_or(core::cmp::Ordering::Equal)
            .then(a.cmp(&b))
    });
    // largest → slot 0, smallest → slot 1, middle → slot 2
    let permutation = [idx[0], idx[2], idx[1]];
    let l = [
        lambdas[permutation[0]],
        lambdas[permutation[1]],
        lambdas[permutation[2]],
    ];
    let x = [l[0] - 1.0 / 3.0, l[1] - 1.0 / 3.0, l[2] - 1.0 / 3.0];
    let r = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt();
    let (s1, s2) = ((2.0 * PI / 3.0).sin(), (4.0 * PI / 3.0).sin());
    let (c1, c2) = ((2.0 * PI / 3.0).cos(), (4.0 * PI / 3.0).cos());
    let cos_part = x[0] + x[1] * c1 + x[2] * c2;
    let sin_part = -(x[1] * s1 + x[2] * s2);
    let theta = if r == 0.0 {
        0.0
    } else {
        sin_part.atan2(cos_part).clamp(0.0, FRAC_PI_3)
    };
    Ok(SimplexPoint {
        lambdas: l,
        r,
        theta,
        permutation,
    })
}

/// Simplex point at polar coordinates `(r, θ)`; the result is canonicalized,
/// with `permutation` relative to the chart's labelling at the given `θ`.
pub fn polar_to_simplex(r: f64, theta: f64) -> Result<SimplexPoint, EntropyError> {
    if !(r >= 0.0) {
        return Err(EntropyError::OutsideSimplex {
            component: 0,
            value: r,
        });
    }
    let l = chart(r, theta);
    for (component, &value) in l.iter().enumerate() {
        if value < -SIMPLEX_TOL {
            return Err(EntropyError::OutsideSimplex { component, value });
        }
    }
    let clamped = l.map(|v| v.max(0.0));
    let total: f64 = clamped.iter().sum();
    let mut point = simplex_to_polar(clamped.map(|v| v / total))?;
    if (0.0..=FRAC_PI_3).contains(&theta) {
        point.theta = theta;
        point.r = r;
    }
    Ok(point)
}

/// `Tr ρ³ = Σ λ_i³ = 1/9 + r² + r³ cos 3θ / √6`.
pub fn trace_cubed_polar(r: f64, theta: f64) -> Result<f64, EntropyError> {
    polar_to_simplex(r, theta)?;
    Ok(1.0 / 9.0 + r * r + r * r * r * (3.0 * theta).cos() / 6f64.sqrt())
}

/// Largest canonical angle reachable at radius `r` (where `λ2` hits zero), or
/// `π/3` when the whole arc stays inside the simplex. `None` beyond the
/// vertices.
pub fn theta_max(r: f64) -> Option<f64> {
    let vertex = (2.0f64 / 3.0).sqrt();
    if r > vertex + 1e-15 {
        return None;
    }
    let c = -1.0 / (6f64.sqrt() * r);
    if c <= -1.0 {
        return Some(FRAC_PI_3);
    }
    Some((c.clamp(-1.0, 1.0).acos() - 2.0 * PI / 3.0).clamp(0.0, FRAC_PI_3))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{HermitianMatrix, Matrix, C64};
    use crate::sample;
    use core::f64::consts::FRAC_1_SQRT_2;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn intro_pair() -> Ensemble {
        Ensemble::from_real(2, &[&[1.0, 0.0], &[FRAC_1_SQRT_2, FRAC_1_SQRT_2]], &[0.5, 0.5])
            .unwrap()
    }

    #[test]
    fn pure_state_has_zero_entropy() {
        let h = HermitianMatrix::from_real_diagonal(&[1.0, 0.0, 0.0]);
        assert_eq!(von_neumann_entropy(&h, Base::Nats).unwrap().value(), 0.0);
    }

    #[test]
    fn intro_pair_entropy_in_bits() {
        let s = von_neumann_entropy(&intro_pair().density_matrix(), Base::Bits).unwrap();
        assert!((s.value() - 0.601).abs() < 1e-3, "{}", s.value());
    }

    #[test]
    fn entropy_rejects_invalid_matrices() {
        let neg = HermitianMatrix::from_real_diagonal(&[1.1, -0.1]);
        assert!(matches!(
            von_neumann_entropy(&neg, Base::Nats),
            Err(EntropyError::NotPositive { .. })
        ));
        let tr = HermitianMatrix::from_real_diagonal(&[0.5, 0.4]);
        assert!(matches!(
            von_neumann_entropy(&tr, Base::Nats),
            Err(EntropyError::TraceNotOne { .. })
        ));
    }

    #[test]
    fn tiny_negative_eigenvalues_are_clamped() {
        let h = HermitianMatrix::from_real_diagonal(&[1.0 + 5e-11, -5e-11]);
        assert_eq!(von_neumann_entropy(&h, Base::Nats).unwrap().value(), 0.0);
    }

    #[test]
    fn shannon_values() {
        assert_eq!(shannon_entropy(&[1.0, 0.0], Base::Bits).unwrap().value(), 0.0);
        assert!((shannon_entropy(&[0.5, 0.5], Base::Bits).unwrap().value() - 1.0).abs() < 1e-15);
        let third = 1.0 / 3.0;
        let h = shannon_entropy(&[third; 3], Base::Bits).unwrap().value();
        assert!((h - 3f64.log2()).abs() < 1e-14);
        assert!(matches!(
            shannon_entropy(&[0.7, 0.7], Base::Nats),
            Err(EntropyError::InvalidDistribution { .. })
        ));
        assert!(matches!(
            shannon_entropy(&[1.2, -0.2], Base::Nats),
            Err(EntropyError::InvalidDistribution { .. })
        ));
    }

    #[test]
    fn bits_are_nats_over_ln2() {
        let v = EntropyValue::from_nats(0.613, Base::Nats);
        assert_eq!(v.in_base(Base::Bits).value(), 0.613 / LN_2);
    }

    #[test]
    fn linearized_entropy_values() {
        let single = Ensemble::from_real(2, &[&[0.6, 0.8]], &[1.0]).unwrap();
        assert!(linearized_entropy(&single).abs() < 1e-15);
        let ortho = Ensemble::from_real(
            4,
            &[&[1.0, 0.0, 0.0, 0.0], &[0.0, 1.0, 0.0, 0.0], &[0.0, 0.0, 1.0, 0.0], &[0.0, 0.0, 0.0, 1.0]],
            &[0.25; 4],
        )
        .unwrap();
        assert!((linearized_entropy(&ortho) - 0.75).abs() < 1e-15);
        assert!((linearized_entropy(&intro_pair()) - 0.25).abs() < 1e-15);
    }

    #[test]
    fn linearized_entropy_two_routes_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..200 {
            let e = sample::random_ensemble(4, 3, &mut rng);
            assert!((linearized_entropy(&e) - linearized_entropy_from_density(&e)).abs() < 1e-10);
        }
    }

    #[test]
    fn ensemble_entropy_uses_either_side() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for (n, d) in [(2, 5), (5, 2), (3, 3)] {
            let e = sample::random_ensemble(n, d, &mut rng);
            let via_rho = von_neumann_entropy(&e.density_matrix(), Base::Nats).unwrap();
            assert!((ensemble_entropy(&e, Base::Nats).value() - via_rho.value()).abs() < 1e-12);
        }
    }

    #[test]
    fn polar_centre_and_vertex() {
        let c = simplex_to_polar([1.0 / 3.0; 3]).unwrap();
        assert!(c.r < 1e-15);
        let v = simplex_to_polar([1.0, 0.0, 0.0]).unwrap();
        assert!((v.r - (2.0f64 / 3.0).sqrt()).abs() < 1e-15);
        assert!(v.theta.abs() < 1e-15);
        assert!(matches!(
            simplex_to_polar([1.1, -0.1, 0.0]),
            Err(EntropyError::OutsideSimplex { component: 1, .. })
        ));
    }

    #[test]
    fn polar_canonical_order() {
        let p = polar_to_simplex(0.2, 0.5).unwrap();
        assert!(p.lambdas[0] >= p.lambdas[2] && p.lambdas[2] >= p.lambdas[1]);
        assert_eq!(p.permutation, [0, 1, 2]);
        assert!((p.sum_of_squares() - (1.0 / 3.0 + 0.04)).abs() < 1e-12);
    }

    #[test]
    fn polar_roundtrip_random_points() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let mut worst: f64 = 0.0;
        for _ in 0..1000 {
            let p = sample::random_probs(3, &mut rng);
            let pt = simplex_to_polar([p[0], p[1], p[2]]).unwrap();
            let back = polar_to_simplex(pt.r, pt.theta).unwrap();
            let mut restored = [0.0; 3];
            for (slot, &src) in pt.permutation.iter().enumerate() {
                restored[src] = back.lambdas[slot];
            }
            for k in 0..3 {
                worst = worst.max((restored[k] - p[k]).abs());
            }
            assert!((0.0..=FRAC_PI_3).contains(&pt.theta));
        }
        assert!(worst < 1e-10, "{worst}");
    }

    #[test]
    fn trace_cubed_closed_form() {
        assert!((trace_cubed_polar(0.0, 0.3).unwrap() - 1.0 / 9.0).abs() < 1e-16);
        let vertex = (2.0f64 / 3.0).sqrt();
        assert!((trace_cubed_polar(vertex, 0.0).unwrap() - 1.0).abs() < 1e-14);
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..200 {
            let p = sample::random_probs(3, &mut rng);
            let pt = simplex_to_polar([p[0], p[1], p[2]]).unwrap();
            let direct: f64 = p.iter().map(|x| x * x * x).sum();
            assert!((trace_cubed_polar(pt.r, pt.theta).unwrap() - direct).abs() < 1e-10);
        }
    }

    #[test]
    fn trace_cubed_decreases_along_arc() {
        let mut prev = f64::INFINITY;
        for k in 0..=100 {
            let theta = FRAC_PI_3 * k as f64 / 100.0;
            let t = trace_cubed_polar(0.2, theta).unwrap();
            assert!(t < prev);
            prev = t;
        }
    }

    #[test]
    fn theta_max_marks_the_edge() {
        assert_eq!(theta_max(0.1), Some(FRAC_PI_3));
        let r = 0.6;
        let t = theta_max(r).unwrap();
        let l = chart(r, t);
        assert!(l[1].abs() < 1e-12);
        assert_eq!(theta_max(0.9), None);
    }

    #[test]
    fn entropy_never_exceeds_shannon_on_complex_ensembles() {
        let mut rng = ChaCha8Rng::seed_from_u64(15);
        for _ in 0..300 {
            let e = sample::random_ensemble(4, 3, &mut rng);
            let s = ensemble_entropy(&e, Base::Nats).value();
            let h = shannon_entropy(e.probs(), Base::Nats).unwrap().value();
            assert!(s <= h + 1e-9);
        }
        // a Hermitian with complex off-diagonals: spectrum (0.9, 0.1)
        let m = Matrix::from_rows(&[
            alloc::vec![C64::new(0.5, 0.0), C64::new(0.0, 0.4)],
            alloc::vec![C64::new(0.0, -0.4), C64::new(0.5, 0.0)],
        ])
        .unwrap();
        let s = von_neumann_entropy(&HermitianMatrix::new(m).unwrap(), Base::Nats).unwrap();
        let expected = -(0.9f64 * 0.9f64.ln() + 0.1 * 0.1f64.ln());
        assert!((s.value() - expected).abs() < 1e-14);
    }
}
