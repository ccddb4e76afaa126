use super::{DeformError, DeformKind, DeformMethod, DeformationReport, COMPARE_TOL};
use crate::ensemble::Ensemble;
use crate::triples::{construct_triple, spec_of, triple_entropy, xi_max, TripleSpec};

const RANK_TOL: f64 = 1e-8;
const PHASE_EDGE: f64 = 1e-12;

/// Step sizes for [`deform_theorem2`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Theorem2Config {
    /// Phase step; `None` means `0.05 · ξmax`.
    pub eta: Option<f64>,
    /// Initial relative overlap step.
    pub delta: f64,
    pub max_halvings: u32,
}

impl Default for Theorem2Config {
    fn default() -> Self {
        Theorem2Config {
            eta: None,
            delta: 1e-3,
            max_halvings: 40,
        }
    }
}

/// Deforms a rank-3 triple by first moving `|ξ|` (toward 0 for D1, toward
/// `ξmax` for D2) and then scaling all overlaps by `1 ± δ`, halving `δ` until
/// the entropy change of the overlap step is smaller than that of the phase
/// step.
pub fn deform_theorem2(
    e: &Ensemble,
    kind: DeformKind,
    config: &Theorem2Config,
) -> Result<DeformationReport, DeformError> {
    if e.len() != 3 {
        return Err(DeformError::NotATriple(e.len()));
    }
    let min_eigenvalue = e.gram_matrix().as_hermitian().min_eigenvalue();
    if min_eigenvalue <= RANK_TOL {
        return Err(DeformError::RankDeficient { min_eigenvalue });
    }
    let spec = spec_of(e)?;
    for value in spec.overlaps() {
        if value <= 0.0 || value >= 1.0 {
            return Err(DeformError::OverlapOutOfRange { value });
        }
    }
    let [a12, a23, a31] = spec.overlaps();
    let xm = xi_max(a12, a23, a31).ok_or(DeformError::RankDeficient { min_eigenvalue })?;
    let eta = config.eta.unwrap_or(0.05 * xm);
    let xi0 = spec.xi;
    let sign = if xi0 < 0.0 { -1.0 } else { 1.0 };
    let xi1 = match kind {
        DeformKind::D1 => {
            if xi0.abs() < PHASE_EDGE {
                return Err(DeformError::MethodInapplicable(
                    "triple phase is already 0, so it cannot move toward 0",
                ));
            }
            sign * (xi0.abs() - eta).max(0.0)
        }
        DeformKind::D2 => {
            if core::f64::consts::PI - xi0.abs() < PHASE_EDGE {
                return Err(DeformError::MethodInapplicable(
                    "triple phase is already ±π, so it cannot move away from 0",
                ));
            }
            sign * (xi0.abs() + eta).min(xm)
        }
    };
    let s0 = triple_entropy(&spec)?;
    let shifted = spec.with_xi(xi1);
    let s1 = triple_entropy(&shifted)?;
    let phase_change = s1 - s0;
    let factor_sign = match kind {
        DeformKind::D1 => 1.0,
        DeformKind::D2 => -1.0,
    };
    if phase_change * factor_sign <= COMPARE_TOL {
        return Err(DeformError::MethodInapplicable("phase step does not change the entropy"));
    }
    let mut delta = config.delta;
    for _ in 0..=config.max_halvings {
        let scaled = spec.overlaps().map(|a| a * (1.0 + factor_sign * delta));
        delta *= 0.5;
        let candidate = TripleSpec::new(scaled, xi1, spec.probs);
        if scaled.iter().any(|&a| a >= 1.0) || !candidate.is_feasible() {
            continue;
        }
        if scaled
            .iter()
            .zip(spec.overlaps())
            .any(|(b, a)| (b - a).abs() <= COMPARE_TOL)
        {
            break;
        }
        let s2 = triple_entropy(&candidate)?;
        if (s2 - s1).abs() >= phase_change.abs() {
            continue;
        }
        let mut result = construct_triple(&candidate)?;
        if e.dim() > result.dim() {
            result = result.embed(e.dim());
        }
        match DeformationReport::new(kind, DeformMethod::XiShift, e.clone(), result) {
            Ok(report) => return Ok(report),
            Err(DeformError::InvalidReport(_)) => continue,
            Err(other) => return Err(other),
        }
    }
    Err(DeformError::MethodInapplicable("overlap step could not be made small enough"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::triples::construct_triple;

    fn example(xi: f64) -> Ensemble {
        construct_triple(&TripleSpec::new(
            [0.5f64.sqrt(), 2.0 / 6f64.sqrt(), 1.0 / 3f64.sqrt()],
            xi,
            [1.0 / 3.0; 3],
        ))
        .unwrap()
    }

    #[test]
    fn both_kinds_succeed_inside() {
        let e = example(0.3);
        for kind in [DeformKind::D1, DeformKind::D2] {
            let r = deform_theorem2(&e, kind, &Theorem2Config::default()).unwrap();
            assert_eq!(r.kind, kind);
            assert_eq!(r.result.probs(), e.probs());
            let d = r.overlap_deltas();
            for (_, _, x) in d.upper_pairs() {
                match kind {
                    DeformKind::D1 => assert!(x > 1e-10),
                    DeformKind::D2 => assert!(x < -1e-10),
                }
            }
            match kind {
                DeformKind::D1 => assert!(r.entropy_delta() > 1e-6),
                DeformKind::D2 => assert!(r.entropy_delta() < -1e-6),
            }
        }
    }

    #[test]
    fn zero_phase_only_allows_d2() {
        let e = example(0.0);
        assert!(matches!(
            deform_theorem2(&e, DeformKind::D1, &Theorem2Config::default()),
            Err(DeformError::MethodInapplicable(_))
        ));
        assert!(deform_theorem2(&e, DeformKind::D2, &Theorem2Config::default()).is_ok());
    }

    #[test]
    fn negative_phase_keeps_sign() {
        let e = example(-0.3);
        let r = deform_theorem2(&e, DeformKind::D1, &Theorem2Config::default()).unwrap();
        let xi = crate::triples::triple_phase(&r.result, 0, 1, 2).unwrap();
        assert!(xi < 0.0 && xi > -0.3);
    }

    #[test]
    fn rejects_rank_deficient_and_wrong_size() {
        let planar = example(0.75f64.acos());
        assert!(matches!(
            deform_theorem2(&planar, DeformKind::D2, &Theorem2Config::default()),
            Err(DeformError::RankDeficient { .. })
        ));
        let pair = Ensemble::from_real(2, &[&[1.0, 0.0], &[0.0, 1.0]], &[0.5, 0.5]).unwrap();
        assert!(matches!(
            deform_theorem2(&pair, DeformKind::D1, &Theorem2Config::default()),
            Err(DeformError::NotATriple(2))
        ));
    }

    #[test]
    fn phase_pi_blocks_d2() {
        let e = construct_triple(&TripleSpec::new([0.3, 0.3, 0.3], core::f64::consts::PI, [1.0 / 3.0; 3])).unwrap();
        assert!(matches!(
            deform_theorem2(&e, DeformKind::D2, &Theorem2Config::default()),
            Err(DeformError::MethodInapplicable(_))
        ));
        assert!(deform_theorem2(&e, DeformKind::D1, &Theorem2Config::default()).is_ok());
    }
}
