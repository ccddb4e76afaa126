//! Random matrices, states and ensembles for property checks and for the
//! randomized search/probe routines. All generators take the RNG by
//! reference so callers control seeding.

use alloc::vec::Vec;

use num_traits::Float;
use rand::Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};

use crate::ensemble::Ensemble;
use crate::numerics::{inner, norm, HermitianMatrix, Matrix, C64};

pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    C64::new(re, im)
}

/// Haar-random unit vector in `C^d`.
pub fn random_state<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Vec<C64> {
    loop {
        let v: Vec<C64> = (0..d).map(|_| complex_gaussian(rng)).collect();
        let n = norm(&v);
        if n > 1e-6 {
            return v.into_iter().map(|z| z / n).collect();
        }
    }
}

/// Uniform point on the probability simplex (flat Dirichlet).
pub fn random_probs<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<f64> {
    let w: Vec<f64> = (0..n).map(|_| Exp1.sample(rng)).collect();
    let total: f64 = w.iter().sum();
    w.into_iter().map(|x| x / total).collect()
}

/// Probabilities bounded below by `floor` (requires `n * floor < 1`).
pub fn random_probs_floored<R: Rng + ?Sized>(n: usize, floor: f64, rng: &mut R) -> Vec<f64> {
    let free = 1.0 - n as f64 * floor;
    random_probs(n, rng)
        .into_iter()
        .map(|p| floor + free * p)
        .collect()
}

pub fn random_ensemble<R: Rng + ?Sized>(n: usize, d: usize, rng: &mut R) -> Ensemble {
    let states = (0..n).map(|_| random_state(d, rng)).collect();
    let probs = random_probs(n, rng);
    Ensemble::new(d, states, probs).expect("sampled ensemble is valid")
}

/// Haar-random unitary via Gram–Schmidt on a complex Ginibre matrix.
pub fn random_unitary<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Matrix {
    let mut columns: Vec<Vec<C64>> = Vec::with_capacity(d);
    while columns.len() < d {
        let mut v: Vec<C64> = (0..d).map(|_| complex_gaussian(rng)).collect();
        for _ in 0..2 {
            for c in &columns {
                let proj = inner(c, &v);
                for (x, y) in v.iter_mut().zip(c) {
                    *x -= proj * y;
                }
            }
        }
        let n = norm(&v);
        if n > 1e-6 {
            columns.push(v.into_iter().map(|z| z / n).collect());
        }
    }
    Matrix::from_columns(&columns).expect("square")
}

/// Hermitian matrix with independent Gaussian entries.
pub fn random_hermitian<R: Rng + ?Sized>(n: usize, rng: &mut R) -> HermitianMatrix {
    let m = Matrix::from_fn(n, n, |_, _| complex_gaussian(rng));
    HermitianMatrix::symmetrized(Matrix::from_fn(n, n, |i, j| {
        (m[(i, j)] + m[(j, i)].conj()) * 0.5
    }))
}

/// `M†M` for Gaussian `M`.
pub fn random_psd<R: Rng + ?Sized>(n: usize, rng: &mut R) -> HermitianMatrix {
    let m = Matrix::from_fn(n, n, |_, _| complex_gaussian(rng));
    HermitianMatrix::symmetrized(m.adjoint().matmul(&m))
}

/// Random positive semidefinite matrix with unit trace.
pub fn random_density<R: Rng + ?Sized>(n: usize, rng: &mut R) -> HermitianMatrix {
    let a = random_psd(n, rng);
    let t = a.trace();
    a.scale(1.0 / t)
}

/// Uniform point on the unit sphere in R³.
pub fn random_unit_vector<R: Rng + ?Sized>(rng: &mut R) -> [f64; 3] {
    loop {
        let v: [f64; 3] = [
            StandardNormal.sample(rng),
            StandardNormal.sample(rng),
            StandardNormal.sample(rng),
        ];
        let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if n > 1e-6 {
            return [v[0] / n, v[1] / n, v[2] / n];
        }
    }
}

/// Qubit state with Bloch vector `n` (unit length assumed):
/// `cos(θ/2)|0⟩ + e^{iφ} sin(θ/2)|1⟩`.
pub fn bloch_state(n: [f64; 3]) -> [C64; 2] {
    let [x, y, z] = n;
    let c = ((1.0 + z) * 0.5).max(0.0).sqrt();
    let s = ((1.0 - z) * 0.5).max(0.0).sqrt();
    let rho = (x * x + y * y).sqrt();
    let phase = if rho > 0.0 {
        C64::new(x / rho, y / rho)
    } else {
        C64::new(1.0, 0.0)
    };
    [C64::new(c, 0.0), phase * s]
}

/// Uniform draw from `[lo, hi)`.
pub(crate) fn uniform<R: Rng + ?Sized>(lo: f64, hi: f64, rng: &mut R) -> f64 {
    lo + (hi - lo) * rng.random::<f64>()
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

/// Qubit ensembles `(E, Ẽ)` with the same random priors. The Bloch vectors of
/// `E` lie in a random cap; those of `Ẽ` are the same points with their polar
/// angle about the cap axis stretched by a random factor in `[1, 1.5)` plus a
/// little jitter. `Ẽ` is usually, but not always, pairwise more
/// distinguishable; callers filter on the overlaps they need.
pub fn qubit_spread_pair<R: Rng + ?Sized>(n: usize, rng: &mut R) -> (Ensemble, Ensemble) {
    let c = random_unit_vector(rng);
    let helper = if c[0].abs() < 0.9 { [1.0, 0.0, 0.0] } else { [0.0, 1.0, 0.0] };
    let u = {
        let v = cross(c, helper);
        let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        [v[0] / n, v[1] / n, v[2] / n]
    };
    let w = cross(c, u);
    let at = |theta: f64, phi: f64| -> [f64; 3] {
        let (s, k) = (theta.sin(), theta.cos());
        core::array::from_fn(|i| k * c[i] + s * (phi.cos() * u[i] + phi.sin() * w[i]))
    };
    let cap = uniform(0.05, 1.2, rng);
    let stretch = uniform(1.0, 1.5, rng);
    let mut states = Vec::with_capacity(n);
    let mut spread = Vec::with_capacity(n);
    for _ in 0..n {
        let theta = uniform(0.0, cap, rng);
        let phi = uniform(0.0, 2.0 * core::f64::consts::PI, rng);
        let jitter: f64 = StandardNormal.sample(rng);
        let twist: f64 = StandardNormal.sample(rng);
        let theta2 = (theta * stretch + 0.01 * jitter).clamp(0.0, core::f64::consts::PI);
        states.push(bloch_state(at(theta, phi)).to_vec());
        spread.push(bloch_state(at(theta2, phi + 0.01 * twist)).to_vec());
    }
    let probs = random_probs(n, rng);
    (
        Ensemble::with_tolerance(2, states, probs.clone(), 1e-9).expect("valid qubit ensemble"),
        Ensemble::with_tolerance(2, spread, probs, 1e-9).expect("valid qubit ensemble"),
    )
}
