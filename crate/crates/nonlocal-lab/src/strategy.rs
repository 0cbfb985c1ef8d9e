//! Strategy classes and their correlation maps.
//!
//! Three models: finite-dimensional tensor-product strategies (PVMs on two
//! factors plus a shared unit vector), commuting-operator strategies on one
//! space, and classical deterministic strategies. Each maps to the
//! conditional-probability tensor it induces.

use num_complex::Complex64 as C64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::correlation::Correlation;
use crate::error::{Error, Result};
use crate::game::Game;
use crate::linalg::matrix::{vec_to_wire, VectorWire};
use crate::linalg::{
    apply_left, apply_right, haar_unitary, inner, random_state, CMatrix, Pvm, StateVector,
};

/// Largest imaginary part tolerated when reading off probabilities.
const IMAG_TOL: f64 = 1e-10;

/// PVMs on two tensor factors with a shared state.
#[derive(Clone, Debug)]
pub struct TensorStrategy {
    dim_a: usize,
    dim_b: usize,
    psi: StateVector,
    alice: Vec<Pvm>,
    bob: Vec<Pvm>,
    tol: f64,
}

impl TensorStrategy {
    pub fn new(
        dim_a: usize,
        dim_b: usize,
        psi: StateVector,
        alice: Vec<Pvm>,
        bob: Vec<Pvm>,
        tol: f64,
    ) -> Result<Self> {
        if psi.dim() != dim_a * dim_b {
            return Err(Error::dim(format!(
                "state lives in dimension {}, expected {}x{}",
                psi.dim(),
                dim_a,
                dim_b
            )));
        }
        if alice.is_empty() || bob.is_empty() {
            return Err(Error::EmptySet {
                what: "strategy question family",
            });
        }
        if alice.iter().any(|p| p.dim() != dim_a) {
            return Err(Error::dim("Alice PVM dimension differs from dim_a"));
        }
        if bob.iter().any(|p| p.dim() != dim_b) {
            return Err(Error::dim("Bob PVM dimension differs from dim_b"));
        }
        Ok(TensorStrategy {
            dim_a,
            dim_b,
            psi,
            alice,
            bob,
            tol,
        })
    }

    pub fn dim_a(&self) -> usize {
        self.dim_a
    }

    pub fn dim_b(&self) -> usize {
        self.dim_b
    }

    pub fn psi(&self) -> &StateVector {
        &self.psi
    }

    pub fn alice(&self) -> &[Pvm] {
        &self.alice
    }

    pub fn bob(&self) -> &[Pvm] {
        &self.bob
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn alice_matrix(&self, x: usize, a: usize) -> &CMatrix {
        self.alice[x].matrix(a)
    }

    pub fn bob_matrix(&self, y: usize, b: usize) -> &CMatrix {
        self.bob[y].matrix(b)
    }

    /// Replace the state, keeping the measurements.
    pub fn with_state(&self, psi: StateVector) -> Result<Self> {
        TensorStrategy::new(
            self.dim_a,
            self.dim_b,
            psi,
            self.alice.clone(),
            self.bob.clone(),
            self.tol,
        )
    }

    /// Check that the question/answer index ranges match a game.
    pub fn ensure_shape(&self, g: &Game) -> Result<()> {
        if self.alice.len() != g.x_count() || self.bob.len() != g.y_count() {
            return Err(Error::dim("strategy question count differs from the game"));
        }
        if self.alice.iter().any(|p| p.len() != g.a_count())
            || self.bob.iter().any(|p| p.len() != g.b_count())
        {
            return Err(Error::dim("strategy answer count differs from the game"));
        }
        Ok(())
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "dim_a": self.dim_a,
            "dim_b": self.dim_b,
            "psi": vec_to_wire(self.psi.amplitudes()),
            "alice": self.alice.iter().map(|pvm| {
                pvm.iter().map(|p| p.matrix().clone()).collect::<Vec<_>>()
            }).collect::<Vec<_>>(),
            "bob": self.bob.iter().map(|pvm| {
                pvm.iter().map(|p| p.matrix().clone()).collect::<Vec<_>>()
            }).collect::<Vec<_>>(),
        })
    }
}

#[derive(Serialize, Deserialize)]
struct TensorStrategyWire {
    dim_a: usize,
    dim_b: usize,
    psi: VectorWire,
    alice: Vec<Vec<CMatrix>>,
    bob: Vec<Vec<CMatrix>>,
}

pub fn parse_tensor_strategy(text: &str, tol: f64) -> Result<TensorStrategy> {
    let wire: TensorStrategyWire =
        serde_json::from_str(text).map_err(|e| Error::InvalidStrategy {
            context: format!("strategy JSON: {e}"),
        })?;
    let psi = StateVector::new(crate::linalg::matrix::wire_to_vec(&wire.psi)?, tol)?;
    let alice = wire
        .alice
        .into_iter()
        .map(|mats| Pvm::new(mats, tol))
        .collect::<Result<Vec<_>>>()?;
    let bob = wire
        .bob
        .into_iter()
        .map(|mats| Pvm::new(mats, tol))
        .collect::<Result<Vec<_>>>()?;
    TensorStrategy::new(wire.dim_a, wire.dim_b, psi, alice, bob, tol)
}

/// PVMs for both players on one Hilbert space; cross-commutation is a
/// validated invariant.
#[derive(Clone, Debug)]
pub struct CommutingStrategy {
    dim: usize,
    psi: StateVector,
    alice: Vec<Pvm>,
    bob: Vec<Pvm>,
    tol: f64,
}

impl CommutingStrategy {
    pub fn new(
        dim: usize,
        psi: StateVector,
        alice: Vec<Pvm>,
        bob: Vec<Pvm>,
        tol: f64,
    ) -> Result<Self> {
        if psi.dim() != dim {
            return Err(Error::dim("state dimension differs from dim"));
        }
        if alice.iter().chain(bob.iter()).any(|p| p.dim() != dim) {
            return Err(Error::dim("PVM dimension differs from dim"));
        }
        let s = CommutingStrategy {
            dim,
            psi,
            alice,
            bob,
            tol,
        };
        s.ensure_commuting()?;
        Ok(s)
    }

    /// Worst cross-commutator over all (x, a, y, b), as an error on failure.
    pub fn ensure_commuting(&self) -> Result<()> {
        let bound = self.tol * self.dim as f64;
        let mut worst = (0.0f64, (0usize, 0usize, 0usize, 0usize));
        for (x, pa) in self.alice.iter().enumerate() {
            for a in 0..pa.len() {
                for (y, qb) in self.bob.iter().enumerate() {
                    for b in 0..qb.len() {
                        let pq = pa.matrix(a) * qb.matrix(b);
                        let qp = qb.matrix(b) * pa.matrix(a);
                        let defect = (&pq - &qp).fro_norm();
                        if defect > worst.0 {
                            worst = (defect, (x, a, y, b));
                        }
                    }
                }
            }
        }
        if worst.0 > bound {
            let (defect, (x, a, y, b)) = worst;
            return Err(Error::NotCommuting { x, a, y, b, defect });
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn psi(&self) -> &StateVector {
        &self.psi
    }

    pub fn alice(&self) -> &[Pvm] {
        &self.alice
    }

    pub fn bob(&self) -> &[Pvm] {
        &self.bob
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "dim": self.dim,
            "psi": vec_to_wire(self.psi.amplitudes()),
            "alice": self.alice.iter().map(|pvm| {
                pvm.iter().map(|p| p.matrix().clone()).collect::<Vec<_>>()
            }).collect::<Vec<_>>(),
            "bob": self.bob.iter().map(|pvm| {
                pvm.iter().map(|p| p.matrix().clone()).collect::<Vec<_>>()
            }).collect::<Vec<_>>(),
        })
    }
}

#[derive(Serialize, Deserialize)]
struct CommutingStrategyWire {
    dim: usize,
    psi: VectorWire,
    alice: Vec<Vec<CMatrix>>,
    bob: Vec<Vec<CMatrix>>,
}

pub fn parse_commuting_strategy(text: &str, tol: f64) -> Result<CommutingStrategy> {
    let wire: CommutingStrategyWire =
        serde_json::from_str(text).map_err(|e| Error::InvalidStrategy {
            context: format!("strategy JSON: {e}"),
        })?;
    let psi = StateVector::new(crate::linalg::matrix::wire_to_vec(&wire.psi)?, tol)?;
    let alice = wire
        .alice
        .into_iter()
        .map(|mats| Pvm::new(mats, tol))
        .collect::<Result<Vec<_>>>()?;
    let bob = wire
        .bob
        .into_iter()
        .map(|mats| Pvm::new(mats, tol))
        .collect::<Result<Vec<_>>>()?;
    CommutingStrategy::new(wire.dim, psi, alice, bob, tol)
}

/// Classical strategy: one answer function per player.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeterministicStrategy {
    pub f: Vec<usize>,
    pub g: Vec<usize>,
}

impl DeterministicStrategy {
    pub fn new(f: Vec<usize>, g: Vec<usize>) -> Self {
        DeterministicStrategy { f, g }
    }
}

// ---------------------------------------------------------------------------
// correlation maps

fn read_probability(z: C64, context: &str) -> Result<f64> {
    if z.im.abs() > IMAG_TOL {
        return Err(Error::InvalidStrategy {
            context: format!(
                "{context}: imaginary part {:.3e} exceeds {IMAG_TOL:.0e}",
                z.im
            ),
        });
    }
    Ok(z.re)
}

fn clamp_boundary(p: f64, tol: f64) -> f64 {
    if p < 0.0 && p >= -tol {
        0.0
    } else if p > 1.0 && p <= 1.0 + tol {
        1.0
    } else {
        p
    }
}

/// `p(a,b|x,y) = <psi| P_a^x ⊗ Q_b^y |psi>`.
pub fn correlation_from_tensor(s: &TensorStrategy, g: &Game) -> Result<Correlation> {
    s.ensure_shape(g)?;
    let (da, db) = (s.dim_a, s.dim_b);
    let psi = s.psi.amplitudes();
    let mut p = Vec::with_capacity(g.x_count() * g.y_count() * g.a_count() * g.b_count());
    for x in 0..g.x_count() {
        for y in 0..g.y_count() {
            for a in 0..g.a_count() {
                let left = apply_left(s.alice_matrix(x, a), psi, da, db);
                for b in 0..g.b_count() {
                    let v = apply_right(s.bob_matrix(y, b), &left, da, db);
                    let z = inner(psi, &v);
                    let val = read_probability(z, "tensor correlation entry")?;
                    p.push(clamp_boundary(val, s.tol));
                }
            }
        }
    }
    Correlation::new(g.x_count(), g.y_count(), g.a_count(), g.b_count(), p, s.tol)
}

/// `p(a,b|x,y) = <psi| P_a^x Q_b^y |psi>` on one space.
pub fn correlation_from_commuting(s: &CommutingStrategy, g: &Game) -> Result<Correlation> {
    if s.alice.len() != g.x_count() || s.bob.len() != g.y_count() {
        return Err(Error::dim("strategy question count differs from the game"));
    }
    if s.alice.iter().any(|p| p.len() != g.a_count())
        || s.bob.iter().any(|p| p.len() != g.b_count())
    {
        return Err(Error::dim("strategy answer count differs from the game"));
    }
    s.ensure_commuting()?;
    let psi = s.psi.amplitudes();
    let mut p = Vec::new();
    for x in 0..g.x_count() {
        for y in 0..g.y_count() {
            for a in 0..g.a_count() {
                let pa_psi = s.alice[x].matrix(a).apply(psi);
                for b in 0..g.b_count() {
                    let qb_psi = s.bob[y].matrix(b).apply(psi);
                    // <psi|P Q psi> = <P psi | Q psi> for a Hermitian P
                    let z = inner(&pa_psi, &qb_psi);
                    let val = read_probability(z, "commuting correlation entry")?;
                    p.push(clamp_boundary(val, s.tol));
                }
            }
        }
    }
    Correlation::new(g.x_count(), g.y_count(), g.a_count(), g.b_count(), p, s.tol)
}

/// Exact 0/1 correlation of a deterministic strategy.
pub fn correlation_from_deterministic(d: &DeterministicStrategy, g: &Game) -> Result<Correlation> {
    if d.f.len() != g.x_count() || d.g.len() != g.y_count() {
        return Err(Error::dim("answer function length differs from the game"));
    }
    if d.f.iter().any(|&a| a >= g.a_count()) || d.g.iter().any(|&b| b >= g.b_count()) {
        return Err(Error::RangeError {
            context: "deterministic answer out of range".into(),
        });
    }
    let mut p = Vec::new();
    for x in 0..g.x_count() {
        for y in 0..g.y_count() {
            for a in 0..g.a_count() {
                for b in 0..g.b_count() {
                    p.push(if d.f[x] == a && d.g[y] == b { 1.0 } else { 0.0 });
                }
            }
        }
    }
    Correlation::new(g.x_count(), g.y_count(), g.a_count(), g.b_count(), p, 0.0)
}

/// Embed a tensor strategy as a commuting strategy via `P ⊗ 1`, `1 ⊗ Q`.
pub fn embed_tensor(s: &TensorStrategy) -> Result<CommutingStrategy> {
    let dim = s.dim_a * s.dim_b;
    let ib = CMatrix::identity(s.dim_b);
    let ia = CMatrix::identity(s.dim_a);
    let alice = s
        .alice
        .iter()
        .map(|pvm| Pvm::new(pvm.iter().map(|p| p.matrix().kron(&ib)).collect(), s.tol))
        .collect::<Result<Vec<_>>>()?;
    let bob = s
        .bob
        .iter()
        .map(|pvm| Pvm::new(pvm.iter().map(|p| ia.kron(p.matrix())).collect(), s.tol))
        .collect::<Result<Vec<_>>>()?;
    CommutingStrategy::new(dim, s.psi.clone(), alice, bob, s.tol)
}

// ---------------------------------------------------------------------------
// seeded random strategies

/// Consecutive index blocks of sizes `floor(dim/parts) (+1 for the first
/// `dim % parts` blocks)`; empty blocks when `parts > dim`.
pub fn rank_partition(dim: usize, parts: usize) -> Vec<std::ops::Range<usize>> {
    let base = dim / parts;
    let extra = dim % parts;
    let mut out = Vec::with_capacity(parts);
    let mut start = 0;
    for i in 0..parts {
        let len = base + usize::from(i < extra);
        out.push(start..start + len);
        start += len;
    }
    out
}

/// PVM obtained by conjugating the rank-partition of the computational basis
/// by a unitary.
pub fn conjugated_partition_pvm(u: &CMatrix, answers: usize, tol: f64) -> Result<Pvm> {
    let dim = u.rows();
    let blocks = rank_partition(dim, answers);
    let mats = blocks
        .into_iter()
        .map(|range| {
            let mut d = CMatrix::zeros(dim, dim);
            for k in range {
                d[(k, k)] = crate::linalg::matrix::ONE;
            }
            &(u * &d) * &u.adjoint()
        })
        .collect();
    Pvm::new(mats, tol)
}

/// Seeded random tensor strategy.
///
/// Versioned draw order: one Haar unitary per Alice question (x ascending),
/// then one per Bob question, then the Gaussian state. PVMs conjugate the
/// fixed rank-partition of the computational basis.
pub fn random_tensor_strategy(
    g: &Game,
    dim_a: usize,
    dim_b: usize,
    seed: u64,
) -> Result<TensorStrategy> {
    let tol = crate::DEFAULT_TOL;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let alice = (0..g.x_count())
        .map(|_| {
            let u = haar_unitary(dim_a, &mut rng);
            conjugated_partition_pvm(&u, g.a_count(), tol)
        })
        .collect::<Result<Vec<_>>>()?;
    let bob = (0..g.y_count())
        .map(|_| {
            let u = haar_unitary(dim_b, &mut rng);
            conjugated_partition_pvm(&u, g.b_count(), tol)
        })
        .collect::<Result<Vec<_>>>()?;
    let psi = random_state(dim_a * dim_b, &mut rng);
    TensorStrategy::new(dim_a, dim_b, psi, alice, bob, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::DEFAULT_TOL;
    use approx::assert_abs_diff_eq;

    #[test]
    fn copy_strategy_gives_diagonal_correlation() {
        let s = corpus::copy_max_entangled_strategy();
        let c = correlation_from_tensor(&s, &corpus::copy_game()).unwrap();
        assert_abs_diff_eq!(c.get(0, 0, 0, 0), 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(c.get(0, 0, 1, 1), 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(c.get(0, 0, 0, 1), 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(c.get(0, 0, 1, 0), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn product_state_rank_one_entries() {
        // psi = |00>, computational PVMs: p(a,b) = [a=0][b=0]
        let s = corpus::copy_product_strategy(0);
        let c = correlation_from_tensor(&s, &corpus::copy_game()).unwrap();
        assert_eq!(c.get(0, 0, 0, 0), 1.0);
        assert_eq!(c.get(0, 0, 1, 1), 0.0);
    }

    #[test]
    fn chsh_optimal_value_matches_closed_form() {
        let s = corpus::chsh_optimal_strategy();
        let c = correlation_from_tensor(&s, &corpus::chsh_game()).unwrap();
        let win = c.winning_probability(&corpus::chsh_game()).unwrap();
        let expected = (std::f64::consts::FRAC_PI_8).cos().powi(2);
        assert_abs_diff_eq!(win, expected, epsilon = 1e-6);
    }

    #[test]
    fn embedding_reproduces_tensor_correlation() {
        let g = corpus::chsh_game();
        let s = random_tensor_strategy(&g, 2, 2, 11).unwrap();
        let embedded = embed_tensor(&s).unwrap();
        let c1 = correlation_from_tensor(&s, &g).unwrap();
        let c2 = correlation_from_commuting(&embedded, &g).unwrap();
        assert!(c1.distance(&c2).unwrap() < 1e-10);
    }

    #[test]
    fn commuting_equal_pvms_on_basis_state() {
        let comp = Pvm::new(
            vec![
                CMatrix::from_diag(&[1.0, 0.0]),
                CMatrix::from_diag(&[0.0, 1.0]),
            ],
            DEFAULT_TOL,
        )
        .unwrap();
        let psi = StateVector::new(vec![C64::new(1.0, 0.0), C64::new(0.0, 0.0)], 1e-12).unwrap();
        let s =
            CommutingStrategy::new(2, psi, vec![comp.clone()], vec![comp], DEFAULT_TOL).unwrap();
        let g = Game::from_predicate(1, 1, 2, 2, |_, _, _, _| true).unwrap();
        let c = correlation_from_commuting(&s, &g).unwrap();
        assert_eq!(c.get(0, 0, 0, 0), 1.0);
    }

    #[test]
    fn non_commuting_pair_is_rejected_with_defect() {
        let comp = Pvm::new(
            vec![
                CMatrix::from_diag(&[1.0, 0.0]),
                CMatrix::from_diag(&[0.0, 1.0]),
            ],
            DEFAULT_TOL,
        )
        .unwrap();
        let plus = CMatrix::from_fn(2, 2, |_, _| C64::new(0.5, 0.0));
        let minus = CMatrix::from_fn(2, 2, |i, j| C64::new(if i == j { 0.5 } else { -0.5 }, 0.0));
        let hadamard_pvm = Pvm::new(vec![plus, minus], DEFAULT_TOL).unwrap();
        let psi = StateVector::new(vec![C64::new(1.0, 0.0), C64::new(0.0, 0.0)], 1e-12).unwrap();
        let err = CommutingStrategy::new(2, psi, vec![comp], vec![hadamard_pvm], DEFAULT_TOL)
            .unwrap_err();
        match err {
            Error::NotCommuting { defect, .. } => {
                // ||[ |0><0|, |+><+| ]||_F = sqrt(2)/2
                assert_abs_diff_eq!(defect, 0.5 * 2.0_f64.sqrt(), epsilon = 1e-12);
            }
            other => panic!("expected NotCommuting, got {other:?}"),
        }
    }

    #[test]
    fn deterministic_correlations() {
        let g = corpus::copy_game();
        let d = DeterministicStrategy::new(vec![1], vec![1]);
        let c = correlation_from_deterministic(&d, &g).unwrap();
        assert_eq!(c.get(0, 0, 1, 1), 1.0);
        assert!(c.perfect_report(&g, 0.0).unwrap().pass);

        // exhaustive scan of the 16 CHSH deterministic strategies: max 3/4
        let chsh = corpus::chsh_game();
        let mut best: f64 = 0.0;
        for f0 in 0..2 {
            for f1 in 0..2 {
                for g0 in 0..2 {
                    for g1 in 0..2 {
                        let d = DeterministicStrategy::new(vec![f0, f1], vec![g0, g1]);
                        let c = correlation_from_deterministic(&d, &chsh).unwrap();
                        best = best.max(c.winning_probability(&chsh).unwrap());
                    }
                }
            }
        }
        assert_abs_diff_eq!(best, 0.75, epsilon = 1e-15);
    }

    #[test]
    fn random_strategy_is_seed_deterministic_and_valid() {
        let g = corpus::chsh_game();
        let s1 = random_tensor_strategy(&g, 3, 2, 5).unwrap();
        let s2 = random_tensor_strategy(&g, 3, 2, 5).unwrap();
        assert_eq!(s1.psi.amplitudes(), s2.psi.amplitudes());
        for x in 0..2 {
            for a in 0..2 {
                assert_eq!(s1.alice_matrix(x, a), s2.alice_matrix(x, a));
            }
        }
    }

    #[test]
    fn alice_dimension_one_forces_indicator_pvm() {
        let g = corpus::copy_game();
        let s = random_tensor_strategy(&g, 1, 2, 3).unwrap();
        // exactly one element of each Alice PVM is the 1x1 identity
        let ones = (0..2)
            .filter(|&a| (s.alice_matrix(0, a)[(0, 0)].re - 1.0).abs() < 1e-12)
            .count();
        assert_eq!(ones, 1);
    }

    #[test]
    fn strategy_json_round_trip() {
        let g = corpus::chsh_game();
        let s = random_tensor_strategy(&g, 2, 2, 9).unwrap();
        let text = serde_json::to_string(&s.to_json()).unwrap();
        let back = parse_tensor_strategy(&text, DEFAULT_TOL).unwrap();
        let c1 = correlation_from_tensor(&s, &g).unwrap();
        let c2 = correlation_from_tensor(&back, &g).unwrap();
        assert_eq!(c1.entries(), c2.entries());
    }
}
