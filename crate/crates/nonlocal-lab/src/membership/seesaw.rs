//! Seesaw lower bounds on the quantum value under uniform question weights.
//!
//! Alternating ascent: with Bob and the state fixed, improve Alice's PVMs by
//! pairwise spectral exchanges (for each answer pair, re-split their joint
//! range along the positive part of the compressed gain difference, which is
//! the exact binary optimum); then Bob; then replace the state with the top
//! eigenvector of the full game operator. Every step is deterministic (ties
//! assign to the lower answer index) and never decreases the value.

use num_complex::Complex64 as C64;

use crate::error::Result;
use crate::game::Game;
use crate::linalg::{eigh, CMatrix, Pvm, StateVector};
use crate::strategy::{correlation_from_tensor, random_tensor_strategy, TensorStrategy};

pub struct SeesawOutcome {
    /// Value after every full iteration, in order.
    pub values: Vec<f64>,
    pub final_value: f64,
    pub strategy: TensorStrategy,
}

/// `sum_{x,y,a,b} win * p(a,b|x,y) / (|X||Y|)` after `iters` rounds from the
/// seeded random start.
pub fn seesaw_value(g: &Game, dim: usize, iters: usize, seed: u64) -> Result<f64> {
    Ok(seesaw(g, dim, iters, seed)?.final_value)
}

pub fn seesaw(g: &Game, dim: usize, iters: usize, seed: u64) -> Result<SeesawOutcome> {
    let start = random_tensor_strategy(g, dim, dim, seed)?;
    let mut psi: Vec<C64> = start.psi().amplitudes().to_vec();
    let mut alice: Vec<Vec<CMatrix>> = start
        .alice()
        .iter()
        .map(|pvm| pvm.iter().map(|p| p.matrix().clone()).collect())
        .collect();
    let mut bob: Vec<Vec<CMatrix>> = start
        .bob()
        .iter()
        .map(|pvm| pvm.iter().map(|p| p.matrix().clone()).collect())
        .collect();

    let mut values = Vec::with_capacity(iters);
    for _ in 0..iters {
        // psi reshaped as a dim x dim matrix
        let m = reshape(&psi, dim);

        // Alice gain operators: W_a^x = sum_{y,b} win * (M Q^T M*)
        for x in 0..g.x_count() {
            let gains: Vec<CMatrix> = (0..g.a_count())
                .map(|a| {
                    let mut w = CMatrix::zeros(dim, dim);
                    for y in 0..g.y_count() {
                        for b in 0..g.b_count() {
                            if g.win(x, y, a, b) {
                                let t = &(&m * &bob[y][b].transpose()) * &m.adjoint();
                                w = &w + &t;
                            }
                        }
                    }
                    w
                })
                .collect();
            pairwise_exchange(&mut alice[x], &gains)?;
        }

        // Bob gain operators: V_b^y = sum_{x,a} win * (M* P M)^T
        let m = reshape(&psi, dim);
        for y in 0..g.y_count() {
            let gains: Vec<CMatrix> = (0..g.b_count())
                .map(|b| {
                    let mut w = CMatrix::zeros(dim, dim);
                    for x in 0..g.x_count() {
                        for a in 0..g.a_count() {
                            if g.win(x, y, a, b) {
                                let t = (&(&m.adjoint() * &alice[x][a]) * &m).transpose();
                                w = &w + &t;
                            }
                        }
                    }
                    w
                })
                .collect();
            pairwise_exchange(&mut bob[y], &gains)?;
        }

        // state update: top eigenvector of the game operator
        let weight = 1.0 / (g.x_count() * g.y_count()) as f64;
        let mut game_op = CMatrix::zeros(dim * dim, dim * dim);
        for x in 0..g.x_count() {
            for y in 0..g.y_count() {
                for a in 0..g.a_count() {
                    for b in 0..g.b_count() {
                        if g.win(x, y, a, b) {
                            let term = alice[x][a].kron(&bob[y][b]);
                            game_op = &game_op + &term;
                        }
                    }
                }
            }
        }
        game_op = game_op.scale(C64::new(weight, 0.0));
        let e = eigh(&game_op)?;
        let top = e.values.len() - 1;
        psi = e.vector(top);
        values.push(e.values[top]);
    }

    let tol = crate::DEFAULT_TOL;
    let strategy = TensorStrategy::new(
        dim,
        dim,
        StateVector::normalized(psi)?,
        alice
            .into_iter()
            .map(|mats| Pvm::new(mats, tol))
            .collect::<Result<Vec<_>>>()?,
        bob.into_iter()
            .map(|mats| Pvm::new(mats, tol))
            .collect::<Result<Vec<_>>>()?,
        tol,
    )?;
    let c = correlation_from_tensor(&strategy, g)?;
    let final_value = c.winning_probability(g)?;
    Ok(SeesawOutcome {
        values,
        final_value,
        strategy,
    })
}

fn reshape(psi: &[C64], dim: usize) -> CMatrix {
    CMatrix::from_fn(dim, dim, |i, j| psi[i * dim + j])
}

/// Sweep all answer pairs once; for each pair, re-split the joint range along
/// the sign of the compressed gain difference. Exact optimum within the pair,
/// so the full objective never decreases.
fn pairwise_exchange(pvm: &mut [CMatrix], gains: &[CMatrix]) -> Result<()> {
    let dim = pvm[0].rows();
    for a1 in 0..pvm.len() {
        for a2 in (a1 + 1)..pvm.len() {
            let joint = &pvm[a1] + &pvm[a2];
            let e = eigh(&joint)?;
            let kept: Vec<usize> = (0..dim).filter(|&k| e.values[k] >= 0.5).collect();
            if kept.is_empty() {
                continue;
            }
            // compress the gain difference onto the joint range
            let diff = &gains[a1] - &gains[a2];
            let r = kept.len();
            let mut compressed = CMatrix::zeros(r, r);
            let basis: Vec<Vec<C64>> = kept.iter().map(|&k| e.vector(k)).collect();
            for (i, u) in basis.iter().enumerate() {
                let du = diff.apply(u);
                for (j, v) in basis.iter().enumerate() {
                    compressed[(j, i)] = crate::linalg::inner(v, &du);
                }
            }
            let ce = eigh(&compressed)?;
            // eigenvalue >= 0 goes to the lower answer index
            let mut p1 = CMatrix::zeros(dim, dim);
            let mut p2 = CMatrix::zeros(dim, dim);
            for k in 0..r {
                let coords = ce.vector(k);
                // lift back to the ambient space
                let mut v = vec![C64::new(0.0, 0.0); dim];
                for (i, u) in basis.iter().enumerate() {
                    for (vi, ui) in v.iter_mut().zip(u.iter()) {
                        *vi += coords[i] * ui;
                    }
                }
                let target = if ce.values[k] >= 0.0 {
                    &mut p1
                } else {
                    &mut p2
                };
                for i in 0..dim {
                    for j in 0..dim {
                        target[(i, j)] += v[i] * v[j].conj();
                    }
                }
            }
            pvm[a1] = p1;
            pvm[a2] = p2;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    #[test]
    fn all_ones_game_reaches_value_one_immediately() {
        let v = seesaw_value(&corpus::all_game(), 2, 1, 0).unwrap();
        assert!((v - 1.0).abs() < 1e-9, "value {v}");
    }

    #[test]
    fn copy_game_reaches_perfect_value() {
        let v = seesaw_value(&corpus::copy_game(), 2, 10, 0).unwrap();
        assert!(v > 1.0 - 1e-9, "value {v}");
    }

    #[test]
    fn value_sequence_is_monotone() {
        let out = seesaw(&corpus::chsh_game(), 2, 30, 1).unwrap();
        for w in out.values.windows(2) {
            assert!(w[1] >= w[0] - 1e-12, "dip {} -> {}", w[0], w[1]);
        }
    }

    #[test]
    fn chsh_best_of_five_seeds_beats_bound() {
        let best = (0..5)
            .map(|seed| seesaw_value(&corpus::chsh_game(), 2, 50, seed).unwrap())
            .fold(f64::MIN, f64::max);
        let oracle = (std::f64::consts::FRAC_PI_8).cos().powi(2);
        assert!(best >= oracle - 1e-4, "best {best} vs oracle {oracle}");
    }
}
