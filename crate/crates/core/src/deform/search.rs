use alloc::vec::Vec;
use core::f64::consts::PI;

use num_traits::Float;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::{DeformError, DeformKind, DeformMethod, DeformationReport, COMPARE_TOL};
use crate::ensemble::Ensemble;
use crate::triples::{construct_triple, spec_of, triple_entropy, xi_max, TripleSpec};

// Minimum change of every overlap for a proposal to count.
const OVERLAP_MARGIN: f64 = 1e-9;
const PLANAR_TRUNCATE_TOL: f64 = 1e-6;

/// Annealing schedule for [`search_deformation`]. Step size and temperature
/// both decay geometrically once per `epoch` evaluations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchConfig {
    /// Total entropy evaluations across all chains.
    pub budget: usize,
    pub seed: u64,
    pub initial_step: f64,
    pub decay: f64,
    pub epoch: usize,
    pub initial_temperature: f64,
    /// Independent chains; chain `c` is seeded with `seed + c`.
    pub chains: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            budget: 4000,
            seed: 0,
            initial_step: 0.1,
            decay: 0.95,
            epoch: 20,
            initial_temperature: 1e-3,
            chains: 4,
        }
    }
}

#[derive(Clone, Copy)]
struct Point {
    spec: TripleSpec,
    objective: f64,
}

struct Problem {
    base: TripleSpec,
    lo: [f64; 3],
    hi: [f64; 3],
    sign: f64,
    planar: bool,
}

impl Problem {
    fn evaluate(&self, overlaps: [f64; 3], xi: f64) -> Option<Point> {
        let [a12, a23, a31] = overlaps;
        let xm = xi_max(a12, a23, a31)?;
        let xi = if self.planar {
            if xi < 0.0 {
                -xm
            } else {
                xm
            }
        } else {
            xi.clamp(-xm, xm)
        };
        let spec = TripleSpec::new(overlaps, xi, self.base.probs);
        let s = triple_entropy(&spec).ok()?;
        Some(Point {
            spec,
            objective: self.sign * s,
        })
    }

    fn run_chain(&self, budget: usize, config: &SearchConfig, seed: u64) -> Option<Point> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let start = core::array::from_fn(|i| self.base.overlaps()[i].clamp(self.lo[i], self.hi[i]));
        let mut current = self.evaluate(start, self.base.xi);
        let mut best = current;
        let epoch = config.epoch.max(1);
        for k in 0..budget.saturating_sub(1) {
            let cooling = config.decay.powi((k / epoch) as i32);
            let step = config.initial_step * cooling;
            let temperature = config.initial_temperature * cooling;
            let (from_a, from_xi) = match current {
                Some(p) => (p.spec.overlaps(), p.spec.xi),
                None => (start, self.base.xi),
            };
            let proposal: [f64; 3] = core::array::from_fn(|i| {
                let z: f64 = StandardNormal.sample(&mut rng);
                (from_a[i] + step * z).clamp(self.lo[i], self.hi[i])
            });
            let z: f64 = StandardNormal.sample(&mut rng);
            let xi = from_xi + step * PI * z;
            let u: f64 = rng.random();
            let Some(candidate) = self.evaluate(proposal, xi) else {
                continue;
            };
            let accept = match current {
                None => true,
                Some(c) => {
                    let gain = candidate.objective - c.objective;
                    gain >= 0.0 || (temperature > 0.0 && u < (gain / temperature).exp())
                }
            };
            if accept {
                current = Some(candidate);
            }
            if best.is_none_or(|b| candidate.objective > b.objective) {
                best = Some(candidate);
            }
        }
        best
    }
}

/// Randomized search in overlap/phase coordinates for a deformation of the
/// given kind. Overlaps are constrained to move strictly in the required
/// direction; the phase is free within feasibility, or pinned to the boundary
/// when the input lives in two dimensions. `NotFound` is not a proof that no
/// deformation exists.
pub fn search_deformation(
    e: &Ensemble,
    kind: DeformKind,
    config: &SearchConfig,
) -> Result<DeformationReport, DeformError> {
    let not_found = DeformError::NotFound {
        evaluations: config.budget,
    };
    if e.len() != 3 {
        return Err(DeformError::NotATriple(e.len()));
    }
    if config.budget == 0 {
        return Err(not_found);
    }
    let base = spec_of(e)?;
    let a = base.overlaps();
    let (lo, hi, sign) = match kind {
        DeformKind::D1 => (a.map(|x| x + OVERLAP_MARGIN), [1.0; 3], 1.0),
        DeformKind::D2 => ([0.0; 3], a.map(|x| x - OVERLAP_MARGIN), -1.0),
    };
    if (0..3).any(|i| lo[i] > hi[i]) {
        return Err(not_found);
    }
    let problem = Problem {
        base,
        lo,
        hi,
        sign,
        planar: e.dim() == 2,
    };
    let s0 = sign * triple_entropy(&base)?;
    let chains = config.chains.max(1);
    let mut found: Vec<(usize, Point)> = (0..chains)
        .filter_map(|c| {
            let budget = config.budget / chains + usize::from(c < config.budget % chains);
            problem
                .run_chain(budget, config, config.seed.wrapping_add(c as u64))
                .map(|p| (c, p))
        })
        .filter(|(_, p)| p.objective - s0 > COMPARE_TOL)
        .collect();
    found.sort_by(|x, y| y.1.objective.total_cmp(&x.1.objective).then(x.0.cmp(&y.0)));
    for (_, point) in found {
        let built = construct_triple(&point.spec)?;
        let result = if problem.planar {
            match built.truncate(2, PLANAR_TRUNCATE_TOL) {
                Some(r) => r,
                None => continue,
            }
        } else if e.dim() > 3 {
            built.embed(e.dim())
        } else {
            built
        };
        match DeformationReport::new(kind, DeformMethod::Search, e.clone(), result) {
            Ok(report) => return Ok(report),
            Err(DeformError::InvalidReport(_)) => continue,
            Err(other) => return Err(other),
        }
    }
    Err(not_found)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensemble::Ensemble;

    fn ensemble_f(dim: usize) -> Ensemble {
        let s6 = 6f64.sqrt();
        let r2 = 0.5f64.sqrt();
        let mut states: Vec<Vec<f64>> = alloc::vec![
            alloc::vec![1.0, 0.0],
            alloc::vec![r2, r2],
            alloc::vec![(2f64.sqrt() - 1.0) / s6, (2f64.sqrt() + 1.0) / s6],
        ];
        for s in &mut states {
            s.resize(dim, 0.0);
        }
        let refs: Vec<&[f64]> = states.iter().map(|s| s.as_slice()).collect();
        Ensemble::from_real(dim, &refs, &[1.0 / 3.0; 3]).unwrap()
    }

    #[test]
    fn finds_d1_for_f_in_three_dimensions() {
        let f = ensemble_f(3);
        let r = search_deformation(&f, DeformKind::D1, &SearchConfig::default()).unwrap();
        assert!(r.entropy_delta() > 1e-10);
        for (_, _, d) in r.overlap_deltas().upper_pairs() {
            assert!(d > 0.0);
        }
    }

    #[test]
    fn planar_input_finds_nothing() {
        let f = ensemble_f(2);
        for kind in [DeformKind::D1, DeformKind::D2] {
            assert!(matches!(
                search_deformation(&f, kind, &SearchConfig::default()),
                Err(DeformError::NotFound { .. })
            ));
        }
    }

    #[test]
    fn zero_budget_is_not_found() {
        let config = SearchConfig {
            budget: 0,
            ..SearchConfig::default()
        };
        assert!(matches!(
            search_deformation(&ensemble_f(3), DeformKind::D1, &config),
            Err(DeformError::NotFound { evaluations: 0 })
        ));
    }

    #[test]
    fn deterministic_for_fixed_seed() {
        let f = ensemble_f(3);
        let config = SearchConfig {
            seed: 7,
            ..SearchConfig::default()
        };
        let a = search_deformation(&f, DeformKind::D1, &config).unwrap();
        let b = search_deformation(&f, DeformKind::D1, &config).unwrap();
        assert_eq!(a, b);
    }
}
