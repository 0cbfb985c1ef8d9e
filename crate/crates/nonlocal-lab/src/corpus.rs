//! Canonical games, named strategies, and seeded instance generators used by
//! the examples, the CLI `corpus` subcommand, and the test suites.

use num_complex::Complex64 as C64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::construct::{HomSpec, TraceSpec};
use crate::game::Game;
use crate::linalg::{haar_unitary, CMatrix, Pvm, StateVector};
use crate::strategy::{conjugated_partition_pvm, rank_partition, TensorStrategy};
use crate::DEFAULT_TOL;

// ---------------------------------------------------------------------------
// canonical games

/// Copy game: one question each, win iff the answers agree.
pub fn copy_game() -> Game {
    Game::from_predicate(1, 1, 2, 2, |_, _, a, b| a == b).unwrap()
}

/// The all-ones scoring tensor on 2x2x2x2 (never an imitation game).
pub fn all_game() -> Game {
    Game::from_predicate(2, 2, 2, 2, |_, _, _, _| true).unwrap()
}

/// The all-zeros scoring tensor on a single tuple (no perfect correlation).
pub fn none_game() -> Game {
    Game::from_predicate(1, 1, 1, 1, |_, _, _, _| false).unwrap()
}

/// CHSH: win iff a xor b = x and y.
pub fn chsh_game() -> Game {
    Game::from_predicate(2, 2, 2, 2, |x, y, a, b| (a ^ b) == (x & y)).unwrap()
}

/// Parity game: win iff a xor b = x xor y (classically winnable).
pub fn parity_game() -> Game {
    Game::from_predicate(2, 2, 2, 2, |x, y, a, b| (a ^ b) == (x ^ y)).unwrap()
}

/// Copy-on-equal-questions game: anything wins when x != y, matching answers
/// are required when x == y. Imitation, and it admits perfect strategies
/// whose Bob measurements do not commute across questions.
pub fn match_game() -> Game {
    Game::from_predicate(2, 2, 2, 2, |x, y, a, b| x != y || a == b).unwrap()
}

// ---------------------------------------------------------------------------
// small building blocks

fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

fn computational_pvm(dim: usize, answers: usize) -> Pvm {
    let blocks = rank_partition(dim, answers);
    let mats = blocks
        .into_iter()
        .map(|range| {
            let mut d = CMatrix::zeros(dim, dim);
            for k in range {
                d[(k, k)] = c(1.0);
            }
            d
        })
        .collect();
    Pvm::new(mats, DEFAULT_TOL).unwrap()
}

/// Rank-one projector onto `cos(t)|0> + sin(t)|1>` and its complement.
fn rotated_pvm(t: f64) -> Pvm {
    let (ct, st) = (t.cos(), t.sin());
    let p0 = CMatrix::from_fn(2, 2, |i, j| {
        let v = [ct, st];
        c(v[i] * v[j])
    });
    let p1 = &CMatrix::identity(2) - &p0;
    Pvm::new(vec![p0, p1], DEFAULT_TOL).unwrap()
}

fn bell_state() -> StateVector {
    let s = 0.5_f64.sqrt();
    StateVector::new(vec![c(s), c(0.0), c(0.0), c(s)], 1e-12).unwrap()
}

// ---------------------------------------------------------------------------
// named strategies

/// Perfect copy-game strategy: maximally entangled state, computational PVMs.
pub fn copy_max_entangled_strategy() -> TensorStrategy {
    TensorStrategy::new(
        2,
        2,
        bell_state(),
        vec![computational_pvm(2, 2)],
        vec![computational_pvm(2, 2)],
        DEFAULT_TOL,
    )
    .unwrap()
}

/// Product-state perfect copy strategy answering `(k, k)` deterministically.
pub fn copy_product_strategy(k: usize) -> TensorStrategy {
    let mut amp = vec![c(0.0); 4];
    amp[k * 2 + k] = c(1.0);
    TensorStrategy::new(
        2,
        2,
        StateVector::new(amp, 1e-12).unwrap(),
        vec![computational_pvm(2, 2)],
        vec![computational_pvm(2, 2)],
        DEFAULT_TOL,
    )
    .unwrap()
}

/// Copy-game strategy with Bob's PVM rotated by `theta`; its zero-support
/// leak is `sin^2(theta)/2`.
pub fn copy_theta_strategy(theta: f64) -> TensorStrategy {
    TensorStrategy::new(
        2,
        2,
        bell_state(),
        vec![computational_pvm(2, 2)],
        vec![rotated_pvm(theta)],
        DEFAULT_TOL,
    )
    .unwrap()
}

pub fn copy_theta_family(thetas: &[f64]) -> Vec<TensorStrategy> {
    thetas.iter().map(|&t| copy_theta_strategy(t)).collect()
}

/// Optimal CHSH strategy: Alice at angles {0, pi/4}, Bob at {pi/8, -pi/8},
/// maximally entangled state. Winning probability cos^2(pi/8).
pub fn chsh_optimal_strategy() -> TensorStrategy {
    let pi = std::f64::consts::PI;
    TensorStrategy::new(
        2,
        2,
        bell_state(),
        vec![rotated_pvm(0.0), rotated_pvm(pi / 4.0)],
        vec![rotated_pvm(pi / 8.0), rotated_pvm(-pi / 8.0)],
        DEFAULT_TOL,
    )
    .unwrap()
}

/// Bob's measurement angle in [`match_perfect_strategy`] for question 1.
pub const MATCH_GAME_ANGLE: f64 = std::f64::consts::PI / 5.0;

/// Perfect strategy for [`match_game`] whose Bob (and Alice) measurements for
/// the two questions do not commute: question 0 is computational, question 1
/// is rotated by [`MATCH_GAME_ANGLE`]. Both players use the same real PVMs,
/// which makes every x == y round agree exactly on the maximally entangled
/// state.
pub fn match_perfect_strategy() -> TensorStrategy {
    let pvms = vec![rotated_pvm(0.0), rotated_pvm(MATCH_GAME_ANGLE)];
    TensorStrategy::new(2, 2, bell_state(), pvms.clone(), pvms, DEFAULT_TOL).unwrap()
}

/// [`match_perfect_strategy`] with the state displaced by `i*theta |01>` and
/// renormalized. The zero-support leak grows as `theta^2 / (1 + theta^2)`
/// while the cross-question commutator expectations grow linearly in `theta`,
/// so the family exposes the square-root relation between the two.
pub fn match_theta_strategy(theta: f64) -> TensorStrategy {
    let base = match_perfect_strategy();
    let s = 0.5_f64.sqrt();
    let amp = vec![c(s), C64::new(0.0, theta), c(0.0), c(s)];
    let psi = StateVector::normalized(amp).unwrap();
    base.with_state(psi).unwrap()
}

pub fn match_theta_family(thetas: &[f64]) -> Vec<TensorStrategy> {
    thetas.iter().map(|&t| match_theta_strategy(t)).collect()
}

// ---------------------------------------------------------------------------
// seeded random perfect instances

/// A random imitation game together with an exact perfect tensor strategy.
pub struct PlantedPerfect {
    pub game: Game,
    pub strategy: TensorStrategy,
}

fn random_permutation(n: usize, rng: &mut impl Rng) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    // Fisher-Yates
    for i in (1..n).rev() {
        let j = rng.gen_range(0..=i);
        p.swap(i, j);
    }
    p
}

/// Seeded random perfect instance.
///
/// The game is a block-match game `win(x,y,a,b) = [alpha_x(a) == beta_y(b)]`
/// for random permutations `alpha_x`, `beta_y` of `n` answer classes; such
/// games are always imitation games. The strategy partitions the computational
/// basis of dimension `d >= n` into `n` classes, takes a random full-Schmidt
/// diagonal state, assigns each player the permuted class projectors, and
/// conjugates everything by an independent Haar unitary per side. Perfection
/// is exact by construction.
pub fn planted_perfect(seed: u64) -> PlantedPerfect {
    let mut rng =
        ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9e37_79b9_7f4a_7c15).wrapping_add(seed));
    let n = rng.gen_range(2..=3usize); // answer classes
    let x_count = rng.gen_range(1..=3usize);
    let y_count = rng.gen_range(1..=3usize);
    let d = n + rng.gen_range(0..=2usize); // local dimension

    let alphas: Vec<Vec<usize>> = (0..x_count)
        .map(|_| random_permutation(n, &mut rng))
        .collect();
    let betas: Vec<Vec<usize>> = (0..y_count)
        .map(|_| random_permutation(n, &mut rng))
        .collect();
    let game = Game::from_predicate(x_count, y_count, n, n, |x, y, a, b| {
        alphas[x][a] == betas[y][b]
    })
    .unwrap();

    // full-Schmidt diagonal state with random positive weights
    let weights: Vec<f64> = (0..d).map(|_| rng.gen_range(0.2..1.0)).collect();
    let wsum: f64 = weights.iter().sum();
    let mut amp = vec![c(0.0); d * d];
    for k in 0..d {
        amp[k * d + k] = c((weights[k] / wsum).sqrt());
    }

    let blocks = rank_partition(d, n);
    let class_projector = |class: usize| {
        let mut m = CMatrix::zeros(d, d);
        for k in blocks[class].clone() {
            m[(k, k)] = c(1.0);
        }
        m
    };

    let ua = haar_unitary(d, &mut rng);
    let ub = haar_unitary(d, &mut rng);

    let alice = alphas
        .iter()
        .map(|alpha| {
            let mats = (0..n)
                .map(|a| &(&ua * &class_projector(alpha[a])) * &ua.adjoint())
                .collect();
            Pvm::new(mats, DEFAULT_TOL).unwrap()
        })
        .collect();
    let bob = betas
        .iter()
        .map(|beta| {
            let mats = (0..n)
                .map(|b| &(&ub * &class_projector(beta[b])) * &ub.adjoint())
                .collect();
            Pvm::new(mats, DEFAULT_TOL).unwrap()
        })
        .collect();

    // rotate the state by ua ⊗ ub: reshape, multiply on both sides
    let mut m = CMatrix::zeros(d, d);
    for i in 0..d {
        for j in 0..d {
            m[(i, j)] = amp[i * d + j];
        }
    }
    let rotated = &(&ua * &m) * &ub.transpose();
    let mut amp2 = vec![c(0.0); d * d];
    for i in 0..d {
        for j in 0..d {
            amp2[i * d + j] = rotated[(i, j)];
        }
    }
    let psi = StateVector::normalized(amp2).unwrap();

    let strategy = TensorStrategy::new(d, d, psi, alice, bob, DEFAULT_TOL).unwrap();
    PlantedPerfect { game, strategy }
}

// ---------------------------------------------------------------------------
// seeded trace / homomorphism instances

/// Seeded block-diagonal trace instance: the normalized trace on dimension
/// `sum p_j * q_j`, Alice generators acting on the left block factors and Bob
/// generators on the right ones, so the two sides commute exactly. Returns
/// the specs together with an all-ones game of the matching shape.
pub fn planted_trace_instance(seed: u64) -> (TraceSpec, HomSpec, Game) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(0x5851_f42d_4c95_7f2d));
    let x_count = rng.gen_range(1..=2usize);
    let y_count = rng.gen_range(1..=2usize);
    let a_count = rng.gen_range(2..=3usize);
    let b_count = rng.gen_range(2..=3usize);
    let blocks: Vec<(usize, usize)> = match rng.gen_range(0..3u8) {
        0 => vec![(2, 2)],
        1 => vec![(2, 3)],
        _ => vec![(2, 2), (2, 2)],
    };
    let d: usize = blocks.iter().map(|&(p, q)| p * q).sum();

    // one random PVM per (question, block) on the block's local factor
    let alice_block_pvms: Vec<Vec<Pvm>> = (0..x_count)
        .map(|_| {
            blocks
                .iter()
                .map(|&(p, _)| {
                    let u = haar_unitary(p, &mut rng);
                    conjugated_partition_pvm(&u, a_count, DEFAULT_TOL).unwrap()
                })
                .collect()
        })
        .collect();
    let bob_block_pvms: Vec<Vec<Pvm>> = (0..y_count)
        .map(|_| {
            blocks
                .iter()
                .map(|&(_, q)| {
                    let u = haar_unitary(q, &mut rng);
                    conjugated_partition_pvm(&u, b_count, DEFAULT_TOL).unwrap()
                })
                .collect()
        })
        .collect();

    let embed = |per_block: Vec<CMatrix>| {
        let mut m = CMatrix::zeros(d, d);
        let mut offset = 0;
        for mat in per_block {
            let size = mat.rows();
            for i in 0..size {
                for j in 0..size {
                    m[(offset + i, offset + j)] = mat[(i, j)];
                }
            }
            offset += size;
        }
        m
    };

    let alice = (0..x_count)
        .map(|x| {
            let mats: Vec<CMatrix> = (0..a_count)
                .map(|a| {
                    embed(
                        blocks
                            .iter()
                            .enumerate()
                            .map(|(bi, &(_, q))| {
                                alice_block_pvms[x][bi]
                                    .matrix(a)
                                    .kron(&CMatrix::identity(q))
                            })
                            .collect(),
                    )
                })
                .collect();
            Pvm::new(mats, DEFAULT_TOL).unwrap()
        })
        .collect::<Vec<_>>();

    let bob = (0..y_count)
        .map(|y| {
            let mats: Vec<CMatrix> = (0..b_count)
                .map(|b| {
                    embed(
                        blocks
                            .iter()
                            .enumerate()
                            .map(|(bi, &(p, _))| {
                                CMatrix::identity(p).kron(bob_block_pvms[y][bi].matrix(b))
                            })
                            .collect(),
                    )
                })
                .collect();
            Pvm::new(mats, DEFAULT_TOL).unwrap()
        })
        .collect::<Vec<_>>();

    let density = CMatrix::identity(d).scale(c(1.0 / d as f64));
    let trace = TraceSpec::new(density, DEFAULT_TOL).unwrap();
    let hom = HomSpec::new(d, alice, bob, DEFAULT_TOL).unwrap();
    let game = Game::from_predicate(x_count, y_count, a_count, b_count, |_, _, _, _| true).unwrap();
    (trace, hom, game)
}
