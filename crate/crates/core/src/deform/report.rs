use core::cmp::Ordering;

use super::{DeformError, COMPARE_TOL};
use crate::ensemble::Ensemble;
use crate::entropy::{ensemble_entropy, Base};
use crate::numerics::RealMatrix;

/// Direction of a deformation: `D1` raises every overlap and the entropy,
/// `D2` lowers both.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DeformKind {
    D1,
    D2,
}

impl DeformKind {
    pub fn as_str(self) -> &'static str {
        match self {
            DeformKind::D1 => "D1",
            DeformKind::D2 => "D2",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DeformMethod {
    XiShift,
    Search,
}

impl DeformMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            DeformMethod::XiShift => "xi-shift",
            DeformMethod::Search => "search",
        }
    }
}

/// Comparison of an ensemble `E` against a candidate `Ẽ` with the same priors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhenomenonReport {
    /// Every overlap of `Ẽ` is at most the matching overlap of `E`.
    pub dominance: bool,
    /// Sign of `S(E) - S(Ẽ)`, zero inside the comparison slack.
    pub entropy_order: Ordering,
    pub entropy: f64,
    pub entropy_tilde: f64,
}

impl PhenomenonReport {
    /// `Ẽ` is at least as distinguishable pairwise, yet has strictly lower
    /// entropy.
    pub fn holds(&self) -> bool {
        self.dominance && self.entropy_order == Ordering::Greater
    }
}

pub fn verify_phenomenon(e: &Ensemble, e_tilde: &Ensemble) -> Result<PhenomenonReport, DeformError> {
    if e.len() != e_tilde.len()
        || e.probs()
            .iter()
            .zip(e_tilde.probs())
            .any(|(p, q)| (p - q).abs() > COMPARE_TOL)
    {
        return Err(DeformError::ShapeMismatch);
    }
    let (o, ot) = (e.pairwise_overlaps(), e_tilde.pairwise_overlaps());
    let dominance = o
        .upper_pairs()
        .all(|(i, j, a)| ot.get(i, j) <= a + COMPARE_TOL);
    let entropy = ensemble_entropy(e, Base::Nats).nats();
    let entropy_tilde = ensemble_entropy(e_tilde, Base::Nats).nats();
    let diff = entropy - entropy_tilde;
    let entropy_order = if diff > COMPARE_TOL {
        Ordering::Greater
    } else if diff < -COMPARE_TOL {
        Ordering::Less
    } else {
        Ordering::Equal
    };
    Ok(PhenomenonReport {
        dominance,
        entropy_order,
        entropy,
        entropy_tilde,
    })
}

/// A checked deformation `source → result`. Entropies are in nats.
#[derive(Debug, Clone, PartialEq)]
pub struct DeformationReport {
    pub kind: DeformKind,
    pub method: DeformMethod,
    pub source: Ensemble,
    pub result: Ensemble,
    pub entropy_before: f64,
    pub entropy_after: f64,
}

impl DeformationReport {
    /// Builds the report, failing unless the pair really is a deformation of
    /// the stated kind.
    pub fn new(
        kind: DeformKind,
        method: DeformMethod,
        source: Ensemble,
        result: Ensemble,
    ) -> Result<Self, DeformError> {
        let (big, small) = match kind {
            DeformKind::D1 => (&result, &source),
            DeformKind::D2 => (&source, &result),
        };
        let check = verify_phenomenon(big, small)?;
        if !check.holds() {
            return Err(DeformError::InvalidReport("overlaps and entropy do not move together"));
        }
        let deltas = result.pairwise_overlaps().sub(&source.pairwise_overlaps());
        let moved = deltas.upper_pairs().any(|(_, _, d)| d.abs() > COMPARE_TOL);
        if !moved {
            return Err(DeformError::InvalidReport("no overlap changed"));
        }
        let (entropy_before, entropy_after) = match kind {
            DeformKind::D1 => (check.entropy_tilde, check.entropy),
            DeformKind::D2 => (check.entropy, check.entropy_tilde),
        };
        Ok(DeformationReport {
            kind,
            method,
            source,
            result,
            entropy_before,
            entropy_after,
        })
    }

    pub fn entropy_delta(&self) -> f64 {
        self.entropy_after - self.entropy_before
    }

    /// `|⟨ψ'_i|ψ'_j⟩| - |⟨ψ_i|ψ_j⟩|`.
    pub fn overlap_deltas(&self) -> RealMatrix {
        self.result
            .pairwise_overlaps()
            .sub(&self.source.pairwise_overlaps())
    }
}
