use std::collections::HashSet;

use illposed_core::operators::{
    compose, diagonal, diagonal_on, embedding, harmonic_weights, mazur, Decay,
};
use illposed_core::sphere_enum::{coverage, enumerate_directions, Directions};
use illposed_core::tikhonov::{check_closed_form, soft_threshold, TikhonovProblem};
use illposed_core::{DirectionSet, EnumerationParams, TruncatedOperator};
use nalgebra::DVector;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn mazur_b(depth: usize) -> (DirectionSet, TruncatedOperator) {
    let set = DirectionSet::prefix(EnumerationParams::default(), depth).unwrap();
    let op = mazur(set.as_slice(), depth, set.max_support_len(depth)).unwrap();
    (set, op)
}

fn random_vector(rng: &mut ChaCha8Rng, n: usize) -> DVector<f64> {
    DVector::from_fn(n, |_, _| rng.gen_range(-1.0..1.0))
}

fn operator_zoo(depth: usize) -> Vec<TruncatedOperator> {
    let (_, b) = mazur_b(depth);
    let rows = b.n_rows();
    let c = diagonal_on(2.0, &harmonic_weights(rows), Decay::Vanishing).unwrap();
    let e = embedding(2.0, 4.0, rows).unwrap();
    vec![
        compose(&c, &b).unwrap(),
        compose(&e, &b).unwrap(),
        diagonal(&harmonic_weights(depth), Decay::Vanishing).unwrap(),
        b,
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn adjoint_duality(depth in 4usize..300, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for op in operator_zoo(depth) {
            let x = random_vector(&mut rng, op.n_cols());
            let eta = random_vector(&mut rng, op.n_rows());
            let lhs = op.apply(&x).unwrap().dot(&eta);
            let rhs = x.dot(&op.adjoint_apply(&eta).unwrap());
            let scale = 1.0_f64.max(x.lp_norm(1) * eta.amax());
            prop_assert!((lhs - rhs).abs() <= 1e-12 * scale, "{}: {lhs} vs {rhs}", op.label());
        }
    }

    #[test]
    fn spectral_estimate_dominates_probe_ratios(depth in 2usize..200, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for op in operator_zoo(depth) {
            let sigma = op.spectral_norm_estimate(500, 1e-12);
            for _ in 0..5 {
                let x = random_vector(&mut rng, op.n_cols());
                let ratio = op.apply(&x).unwrap().norm() / x.norm();
                prop_assert!(sigma >= ratio - 1e-6, "{}: {sigma} < {ratio}", op.label());
            }
        }
    }

    #[test]
    fn enumeration_invariants(s in 1usize..4, m in 1i64..6) {
        let params = EnumerationParams::new(2.0, s, m).unwrap();
        let dirs = enumerate_directions(params);
        let canons: HashSet<Vec<i64>> = dirs.iter().map(|d| d.canon().to_vec()).collect();
        prop_assert_eq!(canons.len(), dirs.len());
        for d in &dirs {
            let negated: Vec<i64> = d.canon().iter().map(|v| -v).collect();
            prop_assert!(canons.contains(&negated));
            let norm: f64 = d.realized().iter().map(|v| v * v).sum::<f64>().sqrt();
            prop_assert!((norm - 1.0).abs() <= 1e-12);
        }
        prop_assert_eq!(dirs, enumerate_directions(params));
    }

    #[test]
    fn spike_objective_identity(depth in 10usize..200, seed in any::<u64>(), alpha in 0.01f64..0.5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (set, op) = mazur_b(depth);
        let y = random_vector(&mut rng, op.n_rows());
        let problem = TikhonovProblem::new(&op, y.clone(), alpha).unwrap();
        for dir in set.iter() {
            let beta = soft_threshold(dir.dot(y.as_slice()), alpha);
            let mut x = DVector::zeros(depth);
            x[dir.index() - 1] = beta;
            let expected = -0.5 * beta * beta + 0.5 * y.norm_squared();
            let value = problem.objective(&x).unwrap();
            prop_assert!((value - expected).abs() <= 1e-12 * expected.abs().max(1.0));
        }
    }
}

#[test]
fn certified_minimizers_beat_random_points() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let (_, op) = mazur_b(120);
    let d = diagonal(&harmonic_weights(40), Decay::Vanishing).unwrap();
    for op in [&op, &d] {
        for _ in 0..3 {
            let y = random_vector(&mut rng, op.n_rows());
            let problem = TikhonovProblem::new(op, y, 0.1).unwrap();
            let cert = problem.solve(1e-10, 100_000).unwrap();
            assert!(cert.converged);
            for _ in 0..1000 {
                let scale = rng.gen_range(0.001..2.0);
                let z = &cert.x + random_vector(&mut rng, op.n_cols()) * scale;
                assert!(cert.objective <= problem.objective(&z).unwrap() + 1e-8);
            }
        }
    }
}

#[test]
fn solver_matches_closed_form_across_lambda_grid() {
    let (set, op) = mazur_b(300);
    for alpha in [0.1, 0.3] {
        for factor in [-10.0, -2.0, -0.5, 0.5, 2.0, 10.0] {
            for k in [1, 2, 9, 58, 150, 299] {
                let check = check_closed_form(&op, &set, k, factor * alpha, alpha, 1e-10, 10_000).unwrap();
                assert!(check.converged, "{check:?}");
                assert!(check.deviation <= 1e-8, "{check:?}");
                assert!(check.residual <= 1e-10, "{check:?}");
            }
        }
    }
}

#[test]
fn dense_enumeration_covers_low_dimensional_data() {
    let params = EnumerationParams::new(2.0, 6, 8).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..3 {
        let y: Vec<f64> = (0..4).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let cover = coverage(Directions::new(params), &y, 2.0).unwrap();
        assert!(cover.correlation >= 0.99, "{cover:?}");
    }
}
