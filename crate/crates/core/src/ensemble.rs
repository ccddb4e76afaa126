//! Pure-state ensembles and their Gram matrices.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::{Float, Zero};

use crate::numerics::{
    inner, norm, psd_sqrt, HermitianMatrix, Matrix, NumericsError, RealMatrix, C64, CLAMP_TOL,
};

/// Default tolerance on state norms and on the probability sum.
pub const ENSEMBLE_TOL: f64 = 1e-10;

/// Trace tolerance accepted by [`gram_to_ensemble`].
pub const GRAM_TRACE_TOL: f64 = 1e-9;

/// Gram entries whose comparison exceeds this are reported as a mismatch by
/// [`recover_unitary`].
pub const GRAM_MATCH_TOL: f64 = 1e-8;

// Residual norm below which a state is taken to lie in the span of the
// previous ones.
const RANK_TOL: f64 = 1e-8;

// Squared column length of √A below which a state carries no weight.
const ZERO_WEIGHT: f64 = 1e-14;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum EnsembleError {
    #[error("ensemble has no states")]
    Empty,
    #[error("{states} states but {probs} probabilities")]
    CountMismatch { states: usize, probs: usize },
    #[error("state {index} has {found} components, expected {expected}")]
    WrongLength {
        index: usize,
        expected: usize,
        found: usize,
    },
    #[error("state {index} has a non-finite component")]
    NonFinite { index: usize },
    #[error("state {index} is not normalized (norm {norm})")]
    NotNormalized { index: usize, norm: f64 },
    #[error("probability {index} is invalid ({value})")]
    InvalidProbability { index: usize, value: f64 },
    #[error("probabilities sum to {sum}, not 1")]
    ProbabilitySum { sum: f64 },
    #[error("matrix is not positive semidefinite (minimum eigenvalue {min_eigenvalue:e})")]
    NotPositive { min_eigenvalue: f64 },
    #[error("trace is {trace}, not 1")]
    TraceNotOne { trace: f64 },
    #[error("Gram matrices differ (max deviation {max_deviation:e} at ({row}, {col}))")]
    GramMismatch {
        max_deviation: f64,
        row: usize,
        col: usize,
    },
    #[error(transparent)]
    Numerics(NumericsError),
}

impl From<NumericsError> for EnsembleError {
    fn from(e: NumericsError) -> Self {
        match e {
            NumericsError::NotPositive { min_eigenvalue } => {
                EnsembleError::NotPositive { min_eigenvalue }
            }
            other => EnsembleError::Numerics(other),
        }
    }
}

/// States `|ψ_i⟩ ∈ C^d` with prior probabilities `p_i`.
///
/// States are stored normalized to machine precision; probabilities are
/// stored as given (after validation). Zero probabilities are allowed: such
/// states ride along but contribute nothing to `ρ` or `G`.
#[derive(Debug, Clone, PartialEq)]
pub struct Ensemble {
    dim: usize,
    states: Vec<Vec<C64>>,
    probs: Vec<f64>,
}

impl Ensemble {
    pub fn new(dim: usize, states: Vec<Vec<C64>>, probs: Vec<f64>) -> Result<Self, EnsembleError> {
        Self::with_tolerance(dim, states, probs, ENSEMBLE_TOL)
    }

    /// Validates norms and the probability sum to `tol`, then renormalizes
    /// each state exactly.
    pub fn with_tolerance(
        dim: usize,
        states: Vec<Vec<C64>>,
        probs: Vec<f64>,
        tol: f64,
    ) -> Result<Self, EnsembleError> {
        if states.is_empty() {
            return Err(EnsembleError::Empty);
        }
        if states.len() != probs.len() {
            return Err(EnsembleError::CountMismatch {
                states: states.len(),
                probs: probs.len(),
            });
        }
        let mut normalized = Vec::with_capacity(states.len());
        for (index, s) in states.into_iter().enumerate() {
            if s.len() != dim {
                return Err(EnsembleError::WrongLength {
                    index,
                    expected: dim,
                    found: s.len(),
                });
            }
            if s.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
                return Err(EnsembleError::NonFinite { index });
            }
            let n = norm(&s);
            if (n - 1.0).abs() > tol {
                return Err(EnsembleError::NotNormalized { index, norm: n });
            }
            normalized.push(s.into_iter().map(|z| z / n).collect());
        }
        for (index, &p) in probs.iter().enumerate() {
            if !p.is_finite() || p < 0.0 {
                return Err(EnsembleError::InvalidProbability { index, value: p });
            }
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > tol {
            return Err(EnsembleError::ProbabilitySum { sum });
        }
        Ok(Ensemble {
            dim,
            states: normalized,
            probs,
        })
    }

    /// Convenience constructor for states with real amplitudes.
    pub fn from_real(dim: usize, states: &[&[f64]], probs: &[f64]) -> Result<Self, EnsembleError> {
        let states = states
            .iter()
            .map(|s| s.iter().map(|&x| C64::new(x, 0.0)).collect())
            .collect();
        Self::new(dim, states, probs.to_vec())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn states(&self) -> &[Vec<C64>] {
        &self.states
    }

    pub fn state(&self, i: usize) -> &[C64] {
        &self.states[i]
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// `ρ = Σ p_i |ψ_i⟩⟨ψ_i|`.
    pub fn density_matrix(&self) -> HermitianMatrix {
        let d = self.dim;
        let mut rho = Matrix::zeros(d, d);
        for (s, &p) in self.states.iter().zip(&self.probs) {
            for a in 0..d {
                for b in 0..d {
                    rho[(a, b)] += s[a] * s[b].conj() * p;
                }
            }
        }
        HermitianMatrix::symmetrized(rho)
    }

    /// `G_ij = √(p_i p_j) ⟨ψ_i|ψ_j⟩`, with the diagonal set to `p_i` exactly.
    pub fn gram_matrix(&self) -> GramMatrix {
        let n = self.len();
        let mut g = Matrix::zeros(n, n);
        for i in 0..n {
            g[(i, i)] = C64::new(self.probs[i], 0.0);
            for j in i + 1..n {
                let w = (self.probs[i] * self.probs[j]).sqrt();
                let z = inner(&self.states[i], &self.states[j]) * w;
                g[(i, j)] = z;
                g[(j, i)] = z.conj();
            }
        }
        GramMatrix(HermitianMatrix::symmetrized(g))
    }

    /// `|φ⟩ = Σ √p_i |ψ_i⟩|e_i⟩`.
    pub fn purify(&self) -> PurifiedState {
        let n = self.len();
        let mut amplitudes = vec![C64::zero(); self.dim * n];
        for (i, (s, &p)) in self.states.iter().zip(&self.probs).enumerate() {
            let w = p.sqrt();
            for (a, z) in s.iter().enumerate() {
                amplitudes[a * n + i] = z * w;
            }
        }
        PurifiedState {
            system_dim: self.dim,
            aux_dim: n,
            amplitudes,
        }
    }

    /// `O_ij = |⟨ψ_i|ψ_j⟩|`, with unit diagonal.
    pub fn pairwise_overlaps(&self) -> RealMatrix {
        RealMatrix::from_fn(self.len(), |i, j| {
            if i == j {
                1.0
            } else {
                inner(&self.states[i], &self.states[j]).norm().min(1.0)
            }
        })
    }

    /// Applies `u` to every state; `u` must be `dim × dim`.
    pub fn map_states(&self, u: &Matrix) -> Ensemble {
        assert_eq!((u.rows(), u.cols()), (self.dim, self.dim));
        let states = self.states.iter().map(|s| u.apply(s)).collect();
        Ensemble::with_tolerance(self.dim, states, self.probs.clone(), 1e-8)
            .expect("unitary image of a valid ensemble")
    }

    /// Multiplies state `i` by `e^{i phases[i]}`.
    pub fn rephase(&self, phases: &[f64]) -> Ensemble {
        assert_eq!(phases.len(), self.len());
        let states = self
            .states
            .iter()
            .zip(phases)
            .map(|(s, &t)| {
                let w = C64::from_polar(1.0, t);
                s.iter().map(|z| z * w).collect()
            })
            .collect();
        Ensemble {
            dim: self.dim,
            states,
            probs: self.probs.clone(),
        }
    }

    /// Zero-pads every state into `C^dim`; `dim` must not shrink.
    pub fn embed(&self, dim: usize) -> Ensemble {
        assert!(dim >= self.dim, "cannot embed into a smaller space");
        let states = self
            .states
            .iter()
            .map(|s| {
                let mut v = s.clone();
                v.resize(dim, C64::zero());
                v
            })
            .collect();
        Ensemble {
            dim,
            states,
            probs: self.probs.clone(),
        }
    }

    /// Drops trailing components, which must all be below `tol` in modulus.
    pub fn truncate(&self, dim: usize, tol: f64) -> Option<Ensemble> {
        if dim > self.dim {
            return None;
        }
        let ok = self
            .states
            .iter()
            .all(|s| s[dim..].iter().all(|z| z.norm() <= tol));
        if !ok {
            return None;
        }
        let states = self.states.iter().map(|s| s[..dim].to_vec()).collect();
        Ensemble::with_tolerance(dim, states, self.probs.clone(), tol.max(ENSEMBLE_TOL)).ok()
    }
}

/// Gram matrix of an ensemble: PSD, unit trace, diagonal = priors.
#[derive(Debug, Clone, PartialEq)]
pub struct GramMatrix(HermitianMatrix);

impl GramMatrix {
    /// Accepts a Hermitian matrix that is PSD (to [`CLAMP_TOL`]) with unit
    /// trace (to [`ENSEMBLE_TOL`]).
    pub fn new(h: HermitianMatrix) -> Result<Self, EnsembleError> {
        let trace = h.trace();
        if (trace - 1.0).abs() > ENSEMBLE_TOL {
            return Err(EnsembleError::TraceNotOne { trace });
        }
        let min = h.min_eigenvalue();
        if min < -CLAMP_TOL {
            return Err(EnsembleError::NotPositive {
                min_eigenvalue: min,
            });
        }
        Ok(GramMatrix(h))
    }

    pub(crate) fn from_hermitian_unchecked(h: HermitianMatrix) -> Self {
        GramMatrix(h)
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn as_hermitian(&self) -> &HermitianMatrix {
        &self.0
    }

    pub fn into_hermitian(self) -> HermitianMatrix {
        self.0
    }

    pub fn probs(&self) -> Vec<f64> {
        self.0.diagonal()
    }
}

impl core::ops::Index<(usize, usize)> for GramMatrix {
    type Output = C64;

    fn index(&self, idx: (usize, usize)) -> &C64 {
        &self.0[idx]
    }
}

/// Purification `Σ √p_i |ψ_i⟩ ⊗ |e_i⟩` of an ensemble, amplitude of
/// `|a⟩|e_i⟩` at index `a * aux_dim + i`.
#[derive(Debug, Clone, PartialEq)]
pub struct PurifiedState {
    pub system_dim: usize,
    pub aux_dim: usize,
    pub amplitudes: Vec<C64>,
}

impl PurifiedState {
    pub fn norm(&self) -> f64 {
        norm(&self.amplitudes)
    }

    fn amp(&self, a: usize, i: usize) -> C64 {
        self.amplitudes[a * self.aux_dim + i]
    }

    /// Partial trace over the auxiliary factor; equals `ρ`.
    pub fn reduce_to_system(&self) -> HermitianMatrix {
        let d = self.system_dim;
        let m = Matrix::from_fn(d, d, |a, b| {
            (0..self.aux_dim).fold(C64::zero(), |acc, i| acc + self.amp(a, i) * self.amp(b, i).conj())
        });
        HermitianMatrix::symmetrized(m)
    }

    /// Partial trace over the system factor, in the `|e_i⟩` basis.
    ///
    /// The entries are `√(p_i p_j) ⟨ψ_j|ψ_i⟩`, i.e. the transpose (entrywise
    /// conjugate) of the Gram matrix. Same spectrum as `G`.
    pub fn reduce_to_auxiliary(&self) -> HermitianMatrix {
        let n = self.aux_dim;
        let m = Matrix::from_fn(n, n, |i, j| {
            (0..self.system_dim).fold(C64::zero(), |acc, a| acc + self.amp(a, i) * self.amp(a, j).conj())
        });
        HermitianMatrix::symmetrized(m)
    }
}

/// Ensemble whose Gram matrix is `a`: priors are the diagonal of `a` and the
/// states are the normalized columns of `√a`.
///
/// Columns carrying no weight are replaced by basis state `e_i` with
/// probability zero.
pub fn gram_to_ensemble(a: &HermitianMatrix) -> Result<Ensemble, EnsembleError> {
    let trace = a.trace();
    if (trace - 1.0).abs() > GRAM_TRACE_TOL {
        return Err(EnsembleError::TraceNotOne { trace });
    }
    let b = psd_sqrt(a)?;
    let m = a.dim();
    let mut states = Vec::with_capacity(m);
    let mut probs = Vec::with_capacity(m);
    for i in 0..m {
        let col = b.as_matrix().column(i);
        let t: f64 = col.iter().map(|z| z.norm_sqr()).sum();
        if t <= ZERO_WEIGHT {
            let mut e = vec![C64::zero(); m];
            e[i] = C64::new(1.0, 0.0);
            states.push(e);
            probs.push(0.0);
        } else {
            let len = t.sqrt();
            states.push(col.into_iter().map(|z| z / len).collect());
            probs.push(a[(i, i)].re.max(0.0));
        }
    }
    Ensemble::with_tolerance(m, states, probs, GRAM_TRACE_TOL)
}

/// Largest entrywise deviation between two Gram matrices, with its location.
pub fn gram_deviation(g1: &GramMatrix, g2: &GramMatrix) -> (f64, usize, usize) {
    let n = g1.dim();
    let mut worst = (0.0, 0, 0);
    for i in 0..n {
        for j in 0..n {
            let d = (g1[(i, j)] - g2[(i, j)]).norm();
            if d > worst.0 {
                worst = (d, i, j);
            }
        }
    }
    worst
}

/// Unitary `U` with `U|α_i⟩ = |β_i⟩` for every state of positive weight.
///
/// Both ensembles are zero-padded to the larger dimension. The spans are
/// orthonormalized in the same order with identical coefficients (rank
/// decisions are taken on the `α` side), basis is mapped to basis and both
/// bases are completed with standard basis vectors.
pub fn recover_unitary(e1: &Ensemble, e2: &Ensemble) -> Result<Matrix, EnsembleError> {
    if e1.len() != e2.len() {
        return Err(EnsembleError::CountMismatch {
            states: e1.len(),
            probs: e2.len(),
        });
    }
    let (dev, row, col) = gram_deviation(&e1.gram_matrix(), &e2.gram_matrix());
    if dev > GRAM_MATCH_TOL {
        return Err(EnsembleError::GramMismatch {
            max_deviation: dev,
            row,
            col,
        });
    }
    let d = e1.dim().max(e2.dim());
    let (a, b) = (e1.embed(d), e2.embed(d));
    let weighted: Vec<usize> = (0..a.len()).filter(|&i| a.probs()[i] > 0.0).collect();

    // coeffs[k][i]: e_k = Σ_i coeffs[k][i] α_i
    let mut basis_a: Vec<Vec<C64>> = Vec::new();
    let mut coeffs: Vec<Vec<C64>> = Vec::new();
    for &i in &weighted {
        let mut r = a.state(i).to_vec();
        let mut c = vec![C64::zero(); a.len()];
        c[i] = C64::new(1.0, 0.0);
        for _ in 0..2 {
            for (e, ce) in basis_a.iter().zip(&coeffs) {
                let proj = inner(e, &r);
                for (x, y) in r.iter_mut().zip(e) {
                    *x -= proj * y;
                }
                for (x, y) in c.iter_mut().zip(ce) {
                    *x -= proj * y;
                }
            }
        }
        let len = norm(&r);
        if len > RANK_TOL {
            basis_a.push(r.into_iter().map(|z| z / len).collect());
            coeffs.push(c.into_iter().map(|z| z / len).collect());
        }
    }

    let mut basis_b: Vec<Vec<C64>> = Vec::with_capacity(basis_a.len());
    for c in &coeffs {
        let mut v = vec![C64::zero(); d];
        for (i, w) in c.iter().enumerate() {
            if !w.is_zero() {
                for (x, y) in v.iter_mut().zip(b.state(i)) {
                    *x += w * y;
                }
            }
        }
        basis_b.push(v);
    }
    orthonormalize_in_place(&mut basis_b);
    complete_basis(&mut basis_a, d);
    complete_basis(&mut basis_b, d);

    let ea = Matrix::from_columns(&basis_a)?;
    let eb = Matrix::from_columns(&basis_b)?;
    Ok(eb.matmul(&ea.adjoint()))
}

fn orthonormalize_in_place(vs: &mut [Vec<C64>]) {
    for k in 0..vs.len() {
        let (done, rest) = vs.split_at_mut(k);
        let v = &mut rest[0];
        for _ in 0..2 {
            for e in done.iter() {
                let proj = inner(e, v);
                for (x, y) in v.iter_mut().zip(e) {
                    *x -= proj * y;
                }
            }
        }
        let len = norm(v);
        for z in v.iter_mut() {
            *z /= len;
        }
    }
}

fn complete_basis(basis: &mut Vec<Vec<C64>>, d: usize) {
    for j in 0..d {
        if basis.len() == d {
            break;
        }
        let mut v = vec![C64::zero(); d];
        v[j] = C64::new(1.0, 0.0);
        for _ in 0..2 {
            for e in basis.iter() {
                let proj = inner(e, &v);
                for (x, y) in v.iter_mut().zip(e) {
                    *x -= proj * y;
                }
            }
        }
        let len = norm(&v);
        if len > 1e-6 {
            basis.push(v.into_iter().map(|z| z / len).collect());
        }
    }
}
