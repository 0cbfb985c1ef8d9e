//! Property tests for the cross-module invariants.

use nonlocal_lab::corpus;
use nonlocal_lab::game::{Game, Side};
use nonlocal_lab::linalg::{
    cyclic_subspace, haar_unitary, meet_of_projections, CMatrix, Projection, StateVector,
};
use nonlocal_lab::strategy::{
    conjugated_partition_pvm, correlation_from_commuting, correlation_from_tensor, embed_tensor,
    random_tensor_strategy,
};
use nonlocal_lab::witness::trace_check;
use nonlocal_lab::{DEFAULT_TOL, MEET_EIG_TOL};

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_game(seed: u64) -> Game {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let x = rng.gen_range(1..=3usize);
    let y = rng.gen_range(1..=3usize);
    let a = rng.gen_range(1..=3usize);
    let b = rng.gen_range(1..=3usize);
    Game::from_predicate(x, y, a, b, |_, _, _, _| rng.gen_bool(0.5)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn tensor_correlations_are_nonsignalling(seed in 0u64..500, dim_a in 1usize..4, dim_b in 1usize..4) {
        let g = random_game(seed);
        let s = random_tensor_strategy(&g, dim_a, dim_b, seed).unwrap();
        let c = correlation_from_tensor(&s, &g).unwrap();
        let ns = c.nonsignalling_report(1e-9);
        prop_assert!(ns.pass, "discrepancy {}", ns.max_discrepancy);
        // slice normalization
        for x in 0..g.x_count() {
            for y in 0..g.y_count() {
                let sum: f64 = (0..g.a_count())
                    .flat_map(|a| (0..g.b_count()).map(move |b| (a, b)))
                    .map(|(a, b)| c.get(x, y, a, b))
                    .sum();
                prop_assert!((sum - 1.0).abs() <= 1e-9);
            }
        }
    }

    #[test]
    fn embedding_preserves_the_correlation(seed in 0u64..500) {
        let g = random_game(seed);
        let s = random_tensor_strategy(&g, 2, 2, seed).unwrap();
        let c1 = correlation_from_tensor(&s, &g).unwrap();
        let c2 = correlation_from_commuting(&embed_tensor(&s).unwrap(), &g).unwrap();
        prop_assert!(c1.distance(&c2).unwrap() <= 1e-10);
    }

    #[test]
    fn local_unitaries_leave_the_correlation_unchanged(seed in 0u64..500) {
        let g = random_game(seed);
        let s = random_tensor_strategy(&g, 2, 3, seed).unwrap();
        let c1 = correlation_from_tensor(&s, &g).unwrap();

        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xABCD);
        let u = haar_unitary(2, &mut rng);
        let v = haar_unitary(3, &mut rng);
        let conj = |m: &CMatrix, w: &CMatrix| &(w * m) * &w.adjoint();
        let alice = s
            .alice()
            .iter()
            .map(|pvm| {
                nonlocal_lab::linalg::Pvm::new(
                    pvm.iter().map(|p| conj(p.matrix(), &u)).collect(),
                    DEFAULT_TOL,
                )
                .unwrap()
            })
            .collect::<Vec<_>>();
        let bob = s
            .bob()
            .iter()
            .map(|pvm| {
                nonlocal_lab::linalg::Pvm::new(
                    pvm.iter().map(|p| conj(p.matrix(), &v)).collect(),
                    DEFAULT_TOL,
                )
                .unwrap()
            })
            .collect::<Vec<_>>();
        let rotated_psi = u.kron(&v).apply(s.psi().amplitudes());
        let s2 = nonlocal_lab::strategy::TensorStrategy::new(
            2,
            3,
            StateVector::new(rotated_psi, 1e-8).unwrap(),
            alice,
            bob,
            DEFAULT_TOL,
        )
        .unwrap();
        let c2 = correlation_from_tensor(&s2, &g).unwrap();
        prop_assert!(c1.distance(&c2).unwrap() <= 1e-9);
    }

    #[test]
    fn distance_is_a_metric(seed in 0u64..500) {
        let g = random_game(seed);
        let c1 = correlation_from_tensor(&random_tensor_strategy(&g, 2, 2, seed).unwrap(), &g).unwrap();
        let c2 = correlation_from_tensor(&random_tensor_strategy(&g, 2, 2, seed + 1).unwrap(), &g).unwrap();
        let c3 = correlation_from_tensor(&random_tensor_strategy(&g, 2, 2, seed + 2).unwrap(), &g).unwrap();
        let d12 = c1.distance(&c2).unwrap();
        let d21 = c2.distance(&c1).unwrap();
        prop_assert_eq!(d12, d21);
        let d13 = c1.distance(&c3).unwrap();
        let d23 = c2.distance(&c3).unwrap();
        prop_assert!(d13 <= d12 + d23 + 1e-15);
        prop_assert_eq!(c1.distance(&c1).unwrap(), 0.0);
    }

    #[test]
    fn leak_vanishes_iff_perfect_at_zero_tolerance(seed in 0u64..500) {
        let g = random_game(seed);
        let s = random_tensor_strategy(&g, 2, 2, seed).unwrap();
        let c = correlation_from_tensor(&s, &g).unwrap();
        let eps = c.epsilon_violation(&g).unwrap();
        let perfect = c.perfect_report(&g, 0.0).unwrap().pass;
        prop_assert_eq!(eps == 0.0, perfect);
    }

    #[test]
    fn meet_is_idempotent_and_monotone(seed in 0u64..500, dim in 2usize..5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mk = |rng: &mut ChaCha8Rng| {
            let u = haar_unitary(dim, rng);
            let pvm = conjugated_partition_pvm(&u, 2, DEFAULT_TOL).unwrap();
            pvm.element(0).clone()
        };
        let p = mk(&mut rng);
        let q = mk(&mut rng);

        let meet_pp = meet_of_projections(&[p.clone(), p.clone()], MEET_EIG_TOL).unwrap();
        prop_assert!((meet_pp.matrix() - p.matrix()).fro_norm() <= 1e-9 * dim as f64);

        // adding a projection can only shrink the meet: the smaller meet is
        // absorbed by the larger one
        let fewer = meet_of_projections(std::slice::from_ref(&p), MEET_EIG_TOL).unwrap();
        let more = meet_of_projections(&[p, q], MEET_EIG_TOL).unwrap();
        let absorbed = &(more.matrix() * fewer.matrix()) * more.matrix();
        prop_assert!((&absorbed - more.matrix()).fro_norm() <= 1e-8 * dim as f64);
    }

    #[test]
    fn cyclic_subspace_is_generator_invariant(seed in 0u64..500) {
        let g = random_game(seed);
        let s = random_tensor_strategy(&g, 2, 2, seed).unwrap();
        let ib = CMatrix::identity(2);
        let gens: Vec<CMatrix> = s
            .alice()
            .iter()
            .flat_map(|pvm| pvm.iter().map(|p| p.matrix().kron(&ib)))
            .collect();
        let k = cyclic_subspace(&gens, s.psi(), DEFAULT_TOL).unwrap();
        let pk = k.projector();
        let complement = &CMatrix::identity(4) - &pk;
        for gen in &gens {
            let leak = &(&complement * gen) * &pk;
            prop_assert!(leak.fro_norm() <= 10.0 * DEFAULT_TOL * 4.0);
        }
    }

    #[test]
    fn imitation_is_relabeling_invariant(seed in 0u64..500) {
        let g = random_game(seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x55AA);
        let mut perm = |n: usize| {
            let mut p: Vec<usize> = (0..n).collect();
            for i in (1..n).rev() {
                let j = rng.gen_range(0..=i);
                p.swap(i, j);
            }
            p
        };
        let relabeled = g
            .permuted(
                &perm(g.x_count()),
                &perm(g.y_count()),
                &perm(g.a_count()),
                &perm(g.b_count()),
            )
            .unwrap();
        prop_assert_eq!(g.is_imitation(), relabeled.is_imitation());
        prop_assert_eq!(g.zero_support().len(), relabeled.zero_support().len());
    }

    #[test]
    fn zero_support_counts_zero_entries(seed in 0u64..500) {
        let g = random_game(seed);
        let zeros = g.zero_support().len();
        let mut direct = 0usize;
        for x in 0..g.x_count() {
            for y in 0..g.y_count() {
                for a in 0..g.a_count() {
                    for b in 0..g.b_count() {
                        if !g.win(x, y, a, b) {
                            direct += 1;
                        }
                    }
                }
            }
        }
        prop_assert_eq!(zeros, direct);
    }

    #[test]
    fn single_letter_trace_pairs_are_exact(seed in 0u64..500) {
        let g = random_game(seed);
        let s = random_tensor_strategy(&g, 2, 2, seed).unwrap();
        for side in [Side::Alice, Side::Bob] {
            let r = trace_check(&s, side, 1, DEFAULT_TOL).unwrap();
            prop_assert_eq!(r.max_defect, 0.0);
        }
    }

    #[test]
    fn projection_validation_rejects_scaled_matrices(scale in 1.01f64..2.0) {
        let m = CMatrix::from_diag(&[scale, 0.0]);
        prop_assert!(Projection::new(m, DEFAULT_TOL).is_err());
    }
}

#[test]
fn strategy_outputs_pass_pvm_validation() {
    for seed in 0..10 {
        let g = corpus::chsh_game();
        let s = random_tensor_strategy(&g, 3, 2, seed).unwrap();
        for pvm in s.alice().iter().chain(s.bob().iter()) {
            let mats: Vec<CMatrix> = pvm.iter().map(|p| p.matrix().clone()).collect();
            assert!(nonlocal_lab::linalg::Pvm::new(mats, 1e-8).is_ok());
        }
    }
}
