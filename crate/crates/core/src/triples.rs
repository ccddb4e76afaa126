//! Three-state ensembles parameterized by their pairwise overlaps and the
//! phase `ξ` of the triple product `⟨ψ1|ψ2⟩⟨ψ2|ψ3⟩⟨ψ3|ψ1⟩`.
//!
//! For fixed overlaps `(a12, a23, a31)` the admissible phases are exactly the
//! `ξ` with `1 + 2 a12 a23 a31 cos ξ ≥ a12² + a23² + a31²`, i.e. an interval
//! `[-ξmax, ξmax]`, and every such `ξ` is realized by a unique triple of
//! physical states up to a global unitary.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_traits::{Float, One};

use crate::ensemble::{Ensemble, EnsembleError, GramMatrix};
use crate::entropy::{spectrum_entropy, Base, EntropyValue};
use crate::numerics::{eigvalsh, inner, trace_power, HermitianMatrix, Matrix, C64};

/// Slack on the feasibility inequality.
pub const FEASIBILITY_TOL: f64 = 1e-12;

/// Overlaps below this make the triple phase undefined.
pub const PHASE_OVERLAP_TOL: f64 = 1e-12;

// `1 - a12²` below this switches to the coincident-states branch.
const DEGENERATE_TOL: f64 = 1e-14;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum TripleError {
    #[error("overlaps are infeasible: 1 + 2·a12·a23·a31·cos ξ = {lhs} < a12² + a23² + a31² = {rhs}")]
    Infeasible { lhs: f64, rhs: f64 },
    #[error("overlap {name} = {value} is outside [0, 1]")]
    InvalidOverlap { name: &'static str, value: f64 },
    #[error("a12 = 1 requires a23 = a31 (got {a23} and {a31})")]
    DegenerateBasis { a23: f64, a31: f64 },
    #[error("index {index} out of range for {len} states")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("chain must contain at least one index")]
    EmptyChain,
    #[error("triple phase undefined: overlap of states {i} and {j} is {overlap:e}")]
    UndefinedPhase { i: usize, j: usize, overlap: f64 },
    #[error("sweep needs at least 2 grid points, got {0}")]
    InvalidSteps(usize),
    #[error("expected an ensemble of 3 states, got {0}")]
    NotATriple(usize),
    #[error(transparent)]
    Ensemble(#[from] EnsembleError),
}

/// Overlaps, triple phase and priors of a three-state family member.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TripleSpec {
    pub a12: f64,
    pub a23: f64,
    pub a31: f64,
    pub xi: f64,
    pub probs: [f64; 3],
}

impl TripleSpec {
    pub fn new(overlaps: [f64; 3], xi: f64, probs: [f64; 3]) -> Self {
        TripleSpec {
            a12: overlaps[0],
            a23: overlaps[1],
            a31: overlaps[2],
            xi,
            probs,
        }
    }

    /// `(a12, a23, a31)`.
    pub fn overlaps(&self) -> [f64; 3] {
        [self.a12, self.a23, self.a31]
    }

    pub fn with_xi(self, xi: f64) -> Self {
        TripleSpec { xi, ..self }
    }

    pub fn with_overlaps(self, overlaps: [f64; 3]) -> Self {
        TripleSpec::new(overlaps, self.xi, self.probs)
    }

    /// `1 + 2 a12 a23 a31 cos ξ - (a12² + a23² + a31²)`, which is `det 3G` for
    /// equal priors.
    pub fn feasibility_margin(&self) -> f64 {
        let (lhs, rhs) = self.feasibility_sides();
        lhs - rhs
    }

    fn feasibility_sides(&self) -> (f64, f64) {
        let lhs = 1.0 + 2.0 * self.a12 * self.a23 * self.a31 * self.xi.cos();
        let rhs = self.a12 * self.a12 + self.a23 * self.a23 + self.a31 * self.a31;
        (lhs, rhs)
    }

    pub fn is_feasible(&self) -> bool {
        self.validate().is_ok()
    }

    fn validate(&self) -> Result<(), TripleError> {
        for (name, value) in [("a12", self.a12), ("a23", self.a23), ("a31", self.a31)] {
            if !(0.0..=1.0).contains(&value) {
                return Err(TripleError::InvalidOverlap { name, value });
            }
        }
        let (lhs, rhs) = self.feasibility_sides();
        if lhs - rhs < -FEASIBILITY_TOL {
            return Err(TripleError::Infeasible { lhs, rhs });
        }
        Ok(())
    }
}

/// Largest `ξ ∈ [0, π]` satisfying the feasibility inequality, or `None` when
/// no phase makes the overlaps realizable.
pub fn xi_max(a12: f64, a23: f64, a31: f64) -> Option<f64> {
    let product = a12 * a23 * a31;
    let squares = a12 * a12 + a23 * a23 + a31 * a31;
    if product == 0.0 {
        return (1.0 - squares >= -FEASIBILITY_TOL).then_some(PI);
    }
    let c = (squares - 1.0) / (2.0 * product);
    if c > 1.0 {
        // still feasible at ξ = 0 within slack
        return (1.0 + 2.0 * product - squares >= -FEASIBILITY_TOL).then_some(0.0);
    }
    if c <= -1.0 {
        return Some(PI);
    }
    Some(c.acos())
}

/// [`xi_max`] with the violated sides reported on failure.
pub fn require_xi_max(overlaps: [f64; 3]) -> Result<f64, TripleError> {
    for (name, value) in ["a12", "a23", "a31"].into_iter().zip(overlaps) {
        if !(0.0..=1.0).contains(&value) {
            return Err(TripleError::InvalidOverlap { name, value });
        }
    }
    let [a12, a23, a31] = overlaps;
    xi_max(a12, a23, a31).ok_or(TripleError::Infeasible {
        lhs: 1.0 + 2.0 * a12 * a23 * a31,
        rhs: a12 * a12 + a23 * a23 + a31 * a31,
    })
}

/// Canonical representatives in `C³`:
///
/// ```text
/// |ψ1⟩ = |0⟩
/// |ψ2⟩ = a12|0⟩ + √(1-a12²)|1⟩
/// |ψ3⟩ = a31|0⟩ + η|1⟩ + z|2⟩,   η = (a23 e^{iξ} - a31 a12) / √(1-a12²)
/// ```
///
/// with `z ≥ 0` fixed by normalization. When `a12 = 1` the first two states
/// coincide and `a23 = a31` is required.
pub fn construct_triple(spec: &TripleSpec) -> Result<Ensemble, TripleError> {
    spec.validate()?;
    let TripleSpec {
        a12, a23, a31, xi, ..
    } = *spec;
    let zero = C64::new(0.0, 0.0);
    let re = |x: f64| C64::new(x, 0.0);
    let psi1 = vec![C64::one(), zero, zero];
    let s2 = 1.0 - a12 * a12;
    let (psi2, psi3) = if s2 <= DEGENERATE_TOL {
        if (a23 - a31).abs() > 1e-10 {
            return Err(TripleError::DegenerateBasis { a23, a31 });
        }
        let a = 0.5 * (a23 + a31);
        (
            vec![C64::one(), zero, zero],
            vec![re(a), re((1.0 - a * a).max(0.0).sqrt()), zero],
        )
    } else {
        let s = s2.sqrt();
        let eta = (C64::from_polar(a23, xi) - a31 * a12) / s;
        let z2 = spec.feasibility_margin() / s2;
        let z = z2.max(0.0).sqrt();
        (vec![re(a12), re(s), zero], vec![re(a31), eta, re(z)])
    };
    Ok(Ensemble::with_tolerance(
        3,
        vec![psi1, psi2, psi3],
        spec.probs.to_vec(),
        1e-8,
    )?)
}

/// The gauge-fixed Gram matrix
///
/// ```text
/// ⎡ p1            √(p1p2) a12         √(p1p3) a31        ⎤
/// ⎢ √(p1p2) a12   p2                  √(p2p3) a23 e^{iξ} ⎥
/// ⎣ √(p1p3) a31   √(p2p3) a23 e^{-iξ} p3                 ⎦
/// ```
pub fn canonical_gram(spec: &TripleSpec) -> Result<GramMatrix, TripleError> {
    spec.validate()?;
    let [p1, p2, p3] = spec.probs;
    let g12 = C64::new((p1 * p2).sqrt() * spec.a12, 0.0);
    let g13 = C64::new((p1 * p3).sqrt() * spec.a31, 0.0);
    let g23 = C64::from_polar((p2 * p3).sqrt() * spec.a23, spec.xi);
    let m = Matrix::from_rows(&[
        vec![C64::new(p1, 0.0), g12, g13],
        vec![g12, C64::new(p2, 0.0), g23],
        vec![g13, g23.conj(), C64::new(p3, 0.0)],
    ])
    .expect("3x3");
    let h = HermitianMatrix::new(m).expect("Hermitian by construction");
    Ok(GramMatrix::from_hermitian_unchecked(h))
}

/// Entropy of the family member `spec` in nats, from its canonical Gram
/// spectrum.
pub fn triple_entropy(spec: &TripleSpec) -> Result<f64, TripleError> {
    let g = canonical_gram(spec)?;
    let clamped: Vec<f64> = eigvalsh(g.as_hermitian())
        .into_iter()
        .map(|x| x.max(0.0))
        .collect();
    Ok(spectrum_entropy(&clamped))
}

/// A cyclic product `⟨ψ_{i1}|ψ_{i2}⟩⟨ψ_{i2}|ψ_{i3}⟩ … ⟨ψ_{ik}|ψ_{i1}⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainValue {
    pub indices: Vec<usize>,
    pub value: C64,
}

/// Cyclic chain product over `indices`. Length-one chains give the squared
/// norm and length-two chains the squared overlap, both real.
pub fn chain_invariant(e: &Ensemble, indices: &[usize]) -> Result<ChainValue, TripleError> {
    if indices.is_empty() {
        return Err(TripleError::EmptyChain);
    }
    if let Some(&index) = indices.iter().find(|&&i| i >= e.len()) {
        return Err(TripleError::IndexOutOfRange {
            index,
            len: e.len(),
        });
    }
    let k = indices.len();
    let mut value = C64::one();
    for t in 0..k {
        let (i, j) = (indices[t], indices[(t + 1) % k]);
        value *= inner(e.state(i), e.state(j));
    }
    if k <= 2 {
        value = C64::new(value.re, 0.0);
    }
    Ok(ChainValue {
        indices: indices.to_vec(),
        value,
    })
}

/// Phase of the triple chain `(i, j, k)`, in `(-π, π]`.
pub fn triple_phase(e: &Ensemble, i: usize, j: usize, k: usize) -> Result<f64, TripleError> {
    let chain = chain_invariant(e, &[i, j, k])?;
    for (a, b) in [(i, j), (j, k), (k, i)] {
        let overlap = inner(e.state(a), e.state(b)).norm();
        if overlap < PHASE_OVERLAP_TOL {
            return Err(TripleError::UndefinedPhase { i: a, j: b, overlap });
        }
    }
    let xi = chain.value.im.atan2(chain.value.re);
    Ok(if xi <= -PI { PI } else { xi })
}

/// Overlaps, phase and priors of a three-state ensemble. The phase is set to
/// zero when some overlap vanishes (it is then irrelevant).
pub fn spec_of(e: &Ensemble) -> Result<TripleSpec, TripleError> {
    if e.len() != 3 {
        return Err(TripleError::NotATriple(e.len()));
    }
    let o = e.pairwise_overlaps();
    let xi = match triple_phase(e, 0, 1, 2) {
        Ok(xi) => xi,
        Err(TripleError::UndefinedPhase { .. }) => 0.0,
        Err(other) => return Err(other),
    };
    let p = e.probs();
    Ok(TripleSpec::new(
        [o.get(0, 1), o.get(1, 2), o.get(2, 0)],
        xi,
        [p[0], p[1], p[2]],
    ))
}

/// One grid point of a constant-overlap sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint {
    pub xi: f64,
    /// Gram eigenvalues, descending.
    pub eigenvalues: [f64; 3],
    pub entropy: EntropyValue,
    pub trace_g3: f64,
}

/// Spectrum, entropy and `Tr G³` on a closed uniform grid `ξ ∈ [0, ξmax]`.
pub fn xi_sweep(
    overlaps: [f64; 3],
    probs: [f64; 3],
    steps: usize,
) -> Result<Vec<SweepPoint>, TripleError> {
    if steps < 2 {
        return Err(TripleError::InvalidSteps(steps));
    }
    let xmax = require_xi_max(overlaps)?;
    let base = TripleSpec::new(overlaps, 0.0, probs);
    (0..steps)
        .map(|k| {
            let xi = if k == steps - 1 {
                xmax
            } else {
                xmax * k as f64 / (steps - 1) as f64
            };
            let g = canonical_gram(&base.with_xi(xi))?;
            let h = g.as_hermitian();
            let l = eigvalsh(h);
            let clamped: Vec<f64> = l.iter().map(|x| x.max(0.0)).collect();
            Ok(SweepPoint {
                xi,
                eigenvalues: [l[0], l[1], l[2]],
                entropy: EntropyValue::from_nats(spectrum_entropy(&clamped), Base::Nats),
                trace_g3: trace_power(h, 3),
            })
        })
        .collect()
}
