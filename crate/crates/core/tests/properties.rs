use ensdist::deform::{extract_multiplier, hadamard, verify_phenomenon, MultiplierMatrix};
use ensdist::ensemble::{gram_deviation, gram_to_ensemble, recover_unitary};
use ensdist::entropy::{
    ensemble_entropy, linearized_entropy, polar_to_simplex, shannon_entropy, simplex_to_polar,
    spectrum_entropy, theta_max, trace_cubed_polar,
};
use ensdist::numerics::{eigvalsh, inner, psd_sqrt, trace_power, Matrix};
use ensdist::sample;
use ensdist::triples::{chain_invariant, construct_triple, spec_of, triple_phase, xi_max, TripleSpec};
use ensdist::{Base, EnsembleError, GramMatrix, HermitianMatrix, C64};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn entropy_of(h: &HermitianMatrix) -> f64 {
    let l: Vec<f64> = eigvalsh(h).into_iter().map(|x| x.max(0.0)).collect();
    spectrum_entropy(&l)
}

fn random_gram_multiplier(n: usize, rng: &mut ChaCha8Rng) -> MultiplierMatrix {
    let vs: Vec<Vec<C64>> = (0..n).map(|_| sample::random_state(1 + n / 2, rng)).collect();
    let m = Matrix::from_fn(n, n, |i, j| inner(&vs[i], &vs[j]));
    MultiplierMatrix::new(HermitianMatrix::new(m).unwrap()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn gram_and_density_share_spectrum(seed in any::<u64>(), n in 1usize..=6, d in 1usize..=6) {
        let e = sample::random_ensemble(n, d, &mut rng(seed));
        let mut a = e.gram_matrix().as_hermitian().eigenvalues();
        let mut b = eigvalsh(&e.density_matrix());
        let m = a.len().max(b.len());
        a.resize(m, 0.0);
        b.resize(m, 0.0);
        for (x, y) in a.iter().zip(&b) {
            prop_assert!((x - y).abs() < 1e-9);
        }
    }

    #[test]
    fn gram_roundtrip(seed in any::<u64>(), n in 1usize..=6, d in 1usize..=6) {
        let g = sample::random_ensemble(n, d, &mut rng(seed)).gram_matrix();
        let back = gram_to_ensemble(g.as_hermitian()).unwrap().gram_matrix();
        prop_assert!(gram_deviation(&g, &back).0 < 1e-9);
    }

    #[test]
    fn unitary_recovery(seed in any::<u64>(), n in 1usize..=5, d in 1usize..=5) {
        let mut r = rng(seed);
        let e = sample::random_ensemble(n, d, &mut r);
        let u0 = sample::random_unitary(d, &mut r);
        let moved = e.map_states(&u0);
        let u = recover_unitary(&e, &moved).unwrap();
        for i in 0..n {
            let a = u.apply(e.state(i));
            let b = u0.apply(e.state(i));
            let dev = a.iter().zip(&b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
            prop_assert!(dev < 1e-8);
        }
    }

    #[test]
    fn overlaps_ignore_phases_and_unitaries(seed in any::<u64>(), n in 2usize..=5, d in 1usize..=5) {
        let mut r = rng(seed);
        let e = sample::random_ensemble(n, d, &mut r);
        let phases: Vec<f64> = (0..n).map(|_| sample::random_probs(1, &mut r)[0] * 7.0).collect();
        let u = sample::random_unitary(d, &mut r);
        let o = e.pairwise_overlaps();
        for other in [e.rephase(&phases), e.map_states(&u)] {
            let p = other.pairwise_overlaps();
            for (i, j, x) in o.upper_pairs() {
                prop_assert!((x - p.get(i, j)).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn chains_ignore_phases_and_unitaries(seed in any::<u64>(), d in 1usize..=4) {
        let mut r = rng(seed);
        let e = sample::random_ensemble(4, d, &mut r);
        let phases = [0.3, -2.0, 1.1, 2.9];
        let u = sample::random_unitary(d, &mut r);
        let chain = [0, 1, 3, 2];
        let base = chain_invariant(&e, &chain).unwrap().value;
        for other in [e.rephase(&phases), e.map_states(&u)] {
            let v = chain_invariant(&other, &chain).unwrap().value;
            prop_assert!((base - v).norm() < 1e-12);
        }
    }

    #[test]
    fn entropy_bounded_by_shannon(seed in any::<u64>(), n in 1usize..=6, d in 1usize..=6) {
        let e = sample::random_ensemble(n, d, &mut rng(seed));
        let s = ensemble_entropy(&e, Base::Nats).value();
        let h = shannon_entropy(e.probs(), Base::Nats).unwrap().value();
        prop_assert!(s <= h + 1e-9);
        prop_assert!(s <= (d.min(n) as f64).ln() + 1e-9);
    }

    #[test]
    fn bits_are_nats_over_ln2(seed in any::<u64>()) {
        let e = sample::random_ensemble(3, 2, &mut rng(seed));
        let v = ensemble_entropy(&e, Base::Nats);
        prop_assert_eq!(v.bits(), v.nats() / core::f64::consts::LN_2);
    }

    #[test]
    fn construction_reproduces_spec(
        a12 in 0.01f64..0.99, a23 in 0.01f64..0.99, a31 in 0.01f64..0.99,
        t in -1.0f64..1.0, seed in any::<u64>(),
    ) {
        prop_assume!(xi_max(a12, a23, a31).is_some());
        let xi = t * xi_max(a12, a23, a31).unwrap();
        let p = sample::random_probs_floored(3, 0.01, &mut rng(seed));
        let spec = TripleSpec::new([a12, a23, a31], xi, [p[0], p[1], p[2]]);
        let e = construct_triple(&spec).unwrap();
        let got = spec_of(&e).unwrap();
        for (x, y) in got.overlaps().iter().zip(spec.overlaps()) {
            prop_assert!((x - y).abs() < 1e-9);
        }
        prop_assert!((triple_phase(&e, 0, 1, 2).unwrap() - xi).abs() < 1e-8);
    }

    #[test]
    fn psd_sqrt_is_positive(seed in any::<u64>(), n in 1usize..=6) {
        let a = sample::random_psd(n, &mut rng(seed));
        let b = psd_sqrt(&a).unwrap();
        prop_assert!(b.min_eigenvalue() >= -1e-10);
    }

    #[test]
    fn eigenvalues_survive_conjugation(seed in any::<u64>(), n in 1usize..=6) {
        let mut r = rng(seed);
        let h = sample::random_hermitian(n, &mut r);
        let u = sample::random_unitary(n, &mut r);
        let conj = HermitianMatrix::new(u.matmul(h.as_matrix()).matmul(&u.adjoint())).unwrap();
        for (x, y) in h.eigenvalues().iter().zip(conj.eigenvalues()) {
            prop_assert!((x - y).abs() < 1e-9);
        }
        let sum: f64 = h.eigenvalues().iter().sum();
        prop_assert!((sum - trace_power(&h, 1)).abs() < 1e-10);
    }

    #[test]
    fn polar_chart_roundtrip(r in 0.0f64..0.8, t in 0.0f64..1.0) {
        prop_assume!(theta_max(r).is_some());
        let theta = t * theta_max(r).unwrap();
        let p = polar_to_simplex(r, theta).unwrap();
        let back = simplex_to_polar(p.original()).unwrap();
        prop_assert!((back.r - r).abs() < 1e-9);
        prop_assert!((back.theta - theta).abs() < 1e-6 || r < 1e-6);
        let cubes: f64 = p.lambdas.iter().map(|l| l * l * l).sum();
        prop_assert!((cubes - trace_cubed_polar(r, theta).unwrap()).abs() < 1e-12);
    }
}

#[test]
fn schur_products_of_positive_matrices_are_positive() {
    let mut r = rng(101);
    for k in 0..5000 {
        let n = 2 + k % 5;
        let g = sample::random_ensemble(n, 1 + k % n, &mut r).gram_matrix();
        let m = random_gram_multiplier(n, &mut r);
        let h = hadamard(&g, &m).unwrap();
        assert!(h.min_eigenvalue() >= -1e-9);
    }
}

#[test]
fn positive_multipliers_never_lower_entropy() {
    let mut r = rng(102);
    for k in 0..2000 {
        let n = 2 + k % 4;
        let g = sample::random_ensemble(n, n, &mut r).gram_matrix();
        let m = random_gram_multiplier(n, &mut r);
        let h = hadamard(&g, &m).unwrap();
        assert!(entropy_of(&h) >= entropy_of(g.as_hermitian()) - 1e-9);
    }
}

#[test]
fn negative_multiplier_does_not_guarantee_lower_entropy() {
    let spec = TripleSpec::new(
        [0.5f64.sqrt(), 2.0 / 6f64.sqrt(), 1.0 / 3f64.sqrt()],
        0.5,
        [1.0 / 3.0; 3],
    );
    let g = ensdist::triples::canonical_gram(&spec).unwrap();
    let g_tilde = ensdist::triples::canonical_gram(&spec.with_xi(0.0)).unwrap();
    let r = extract_multiplier(&g, &g_tilde).unwrap();
    assert!(r.min_eigenvalue() < -1e-3);
    assert!(g_tilde.as_hermitian().min_eigenvalue() > 0.0);
    assert!(entropy_of(g_tilde.as_hermitian()) > entropy_of(g.as_hermitian()));
}

#[test]
fn unit_trace_triple_forms_never_have_two_negative_eigenvalues() {
    let mut r = rng(103);
    for _ in 0..20000 {
        let a: [f64; 3] = [r.random(), r.random(), r.random()];
        let xi = r.random::<f64>() * 2.0 * core::f64::consts::PI;
        let m = Matrix::from_rows(&[
            vec![C64::new(1.0, 0.0), C64::new(a[0], 0.0), C64::new(a[2], 0.0)],
            vec![C64::new(a[0], 0.0), C64::new(1.0, 0.0), C64::from_polar(a[1], xi)],
            vec![C64::new(a[2], 0.0), C64::from_polar(a[1], -xi), C64::new(1.0, 0.0)],
        ])
        .unwrap();
        let negatives = HermitianMatrix::new(m)
            .unwrap()
            .eigenvalues()
            .into_iter()
            .filter(|&x| x < 0.0)
            .count();
        assert_ne!(negatives, 2);
    }
}

#[test]
fn different_phases_are_not_unitarily_equivalent() {
    let spec = TripleSpec::new([0.6, 0.5, 0.4], 0.3, [0.2, 0.3, 0.5]);
    let a = construct_triple(&spec).unwrap();
    let b = construct_triple(&spec.with_xi(0.5)).unwrap();
    assert!(matches!(
        recover_unitary(&a, &b),
        Err(EnsembleError::GramMismatch { .. })
    ));
    let c = construct_triple(&spec.with_xi(-0.3)).unwrap();
    assert!(recover_unitary(&a, &c).is_err());
}

#[test]
fn qubit_entropy_increases_with_linearized_entropy() {
    let grid: Vec<(f64, f64)> = (1..=10_000)
        .map(|k| {
            let l = 0.5 * k as f64 / 10_000.0;
            (spectrum_entropy(&[l, 1.0 - l]), 1.0 - l * l - (1.0 - l) * (1.0 - l))
        })
        .collect();
    for w in grid.windows(2) {
        assert!(w[1].1 > w[0].1);
        assert!(w[1].0 > w[0].0);
    }
}

#[test]
fn linearized_entropy_tracks_qubit_entropy() {
    let mut r = rng(104);
    for _ in 0..500 {
        let (e, f) = sample::qubit_spread_pair(3, &mut r);
        let (se, sf) = (
            ensemble_entropy(&e, Base::Nats).value(),
            ensemble_entropy(&f, Base::Nats).value(),
        );
        let (le, lf) = (linearized_entropy(&e), linearized_entropy(&f));
        if (le - lf).abs() > 1e-9 {
            assert_eq!(se < sf, le < lf);
        }
    }
}

#[test]
fn dominated_qubit_ensembles_never_lose_entropy() {
    let mut r = rng(105);
    let mut checked = 0;
    while checked < 5000 {
        let n = 2 + checked % 3;
        let (e, spread) = sample::qubit_spread_pair(n, &mut r);
        let check = verify_phenomenon(&e, &spread).unwrap();
        if !check.dominance {
            continue;
        }
        checked += 1;
        assert!(check.entropy_tilde >= check.entropy - 1e-9);
    }
}

#[test]
fn polar_arcs_are_monotone() {
    for k in 1..=50 {
        let r = (2.0f64 / 3.0).sqrt() * k as f64 / 50.0;
        let tmax = theta_max(r).unwrap();
        let pts: Vec<(f64, f64)> = (0..=200)
            .map(|j| {
                let theta = tmax * j as f64 / 200.0;
                let p = polar_to_simplex(r, theta).unwrap();
                (spectrum_entropy(&p.lambdas.map(|x| x.max(0.0))), trace_cubed_polar(r, theta).unwrap())
            })
            .collect();
        for w in pts.windows(2) {
            assert!(w[1].0 <= w[0].0 + 1e-12, "r={r}");
            assert!(w[1].1 <= w[0].1 + 1e-12, "r={r}");
        }
    }
}

#[test]
fn gram_matrix_rejects_non_unit_trace() {
    let h = HermitianMatrix::from_real_diagonal(&[0.5, 0.6]);
    assert!(matches!(GramMatrix::new(h), Err(EnsembleError::TraceNotOne { .. })));
}
