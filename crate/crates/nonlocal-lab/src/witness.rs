//! Trace witnesses for imitation-game strategies.
//!
//! For an imitation game, each Bob answer projector is shadowed on Alice's
//! side by an induced projection: the sum of Alice's winning projectors per
//! question, intersected (projection meet) over Alice's questions. For an
//! exact perfect strategy these shadows reproduce Bob's action on the shared
//! state, the state functional restricted to either player's operators is
//! tracial, and Alice words applied to the state equal reversed words of the
//! mirror projections. For near-perfect strategies the module measures how
//! all of those identities degrade: every residual is reported together with
//! its worst witness, and the empirical ratios against the square root of the
//! zero-support leak.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::correlation::Correlation;
use crate::error::{Error, Result};
use crate::game::{Game, Side};
use crate::linalg::{
    apply_left, apply_right, cyclic_subspace, inner, meet_of_projections, norm2, vec_sub, CMatrix,
    CyclicSubspace, Projection,
};
use crate::strategy::{correlation_from_tensor, TensorStrategy};
use crate::MEET_EIG_TOL;

/// A word over one player's (question, answer) alphabet.
pub type Word = Vec<(usize, usize)>;

fn word_to_json(w: &[(usize, usize)]) -> Vec<[usize; 2]> {
    w.iter().map(|&(q, ans)| [q, ans]).collect()
}

/// All words of length `<= max_len`, ordered by length then lexicographically.
pub fn enumerate_words(q_count: usize, ans_count: usize, max_len: usize) -> Vec<Word> {
    let letters: Vec<(usize, usize)> = (0..q_count)
        .flat_map(|q| (0..ans_count).map(move |ans| (q, ans)))
        .collect();
    let mut out: Vec<Word> = vec![Vec::new()];
    let mut level: Vec<Word> = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::with_capacity(level.len() * letters.len());
        for w in &level {
            for &l in &letters {
                let mut w2 = w.clone();
                w2.push(l);
                next.push(w2);
            }
        }
        out.extend(next.iter().cloned());
        level = next;
    }
    out
}

// ---------------------------------------------------------------------------
// induced projections

/// The per-question induced projections and their meets, for both players.
///
/// `pre_pi(x, y, b)` is the sum of Alice's winning projectors for answer `b`,
/// a projection on Alice's factor; `pi(y, b)` is its meet over `x`. The `xi`
/// family mirrors the construction on Bob's factor.
#[derive(Debug)]
pub struct InducedProjections {
    x_count: usize,
    y_count: usize,
    a_count: usize,
    b_count: usize,
    pre_pi: Vec<Projection>,
    pi: Vec<Projection>,
    pre_xi: Vec<Projection>,
    xi: Vec<Projection>,
}

impl InducedProjections {
    pub fn pre_pi(&self, x: usize, y: usize, b: usize) -> &Projection {
        &self.pre_pi[(x * self.y_count + y) * self.b_count + b]
    }

    pub fn pi(&self, y: usize, b: usize) -> &Projection {
        &self.pi[y * self.b_count + b]
    }

    pub fn pre_xi(&self, y: usize, x: usize, a: usize) -> &Projection {
        &self.pre_xi[(y * self.x_count + x) * self.a_count + a]
    }

    pub fn xi(&self, x: usize, a: usize) -> &Projection {
        &self.xi[x * self.a_count + a]
    }
}

/// Build the four induced-projection families for an imitation game.
pub fn induce_projections(s: &TensorStrategy, g: &Game, tol: f64) -> Result<InducedProjections> {
    g.imitation_report().ensure_imitation()?;
    s.ensure_shape(g)?;

    let mut pre_pi = Vec::new();
    for x in 0..g.x_count() {
        for y in 0..g.y_count() {
            for b in 0..g.b_count() {
                let sum = s.alice()[x].partial_sum(|a| g.win(x, y, a, b));
                pre_pi.push(Projection::new(sum, tol).map_err(|e| promote_projection(e, x, y, b))?);
            }
        }
    }
    let mut pi = Vec::new();
    for y in 0..g.y_count() {
        for b in 0..g.b_count() {
            let family: Vec<Projection> = (0..g.x_count())
                .map(|x| pre_pi[(x * g.y_count() + y) * g.b_count() + b].clone())
                .collect();
            pi.push(meet_of_projections(&family, MEET_EIG_TOL)?);
        }
    }
    let mut pre_xi = Vec::new();
    for y in 0..g.y_count() {
        for x in 0..g.x_count() {
            for a in 0..g.a_count() {
                let sum = s.bob()[y].partial_sum(|b| g.win(x, y, a, b));
                pre_xi.push(Projection::new(sum, tol).map_err(|e| promote_projection(e, y, x, a))?);
            }
        }
    }
    let mut xi = Vec::new();
    for x in 0..g.x_count() {
        for a in 0..g.a_count() {
            let family: Vec<Projection> = (0..g.y_count())
                .map(|y| pre_xi[(y * g.x_count() + x) * g.a_count() + a].clone())
                .collect();
            xi.push(meet_of_projections(&family, MEET_EIG_TOL)?);
        }
    }
    Ok(InducedProjections {
        x_count: g.x_count(),
        y_count: g.y_count(),
        a_count: g.a_count(),
        b_count: g.b_count(),
        pre_pi,
        pi,
        pre_xi,
        xi,
    })
}

fn promote_projection(e: Error, i: usize, j: usize, k: usize) -> Error {
    match e {
        Error::NotAProjection { context, defect } => Error::NotAProjection {
            context: format!("induced projection ({i},{j},{k}): {context}"),
            defect,
        },
        other => other,
    }
}

// ---------------------------------------------------------------------------
// witness report

/// Empirical ratios `residual / sqrt(eps_input)`, reported when the input
/// leak is positive. The bound constants themselves are never hardcoded.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SqrtEpsRatios {
    pub r1: Option<f64>,
    pub r2: Option<f64>,
    pub r3: Option<f64>,
    pub r4: Option<f64>,
    pub r5: Option<f64>,
    pub commutator: Option<f64>,
}

#[derive(Clone, Debug, Serialize, Deserialize, Default)]
pub struct WitnessIndices {
    pub r1: Option<[usize; 3]>,
    pub r2: Option<[usize; 4]>,
    pub r3: Option<[usize; 2]>,
    pub r4: Option<[usize; 3]>,
    pub r5: Option<[usize; 2]>,
    pub commutator: Option<[usize; 4]>,
}

/// Residuals of the perfect-strategy identities on the shared state.
///
/// * `r1`: `||(1 - pre_pi(x,y,b)) ⊗ Q_b^y psi||` over all (x, y, b)
/// * `r2`: `||pre_pi(x,y,b) ⊗ Q_{b'}^y psi||` over separating (x, y, b != b')
/// * `r3`: `||(1 - pi(y,b)) ⊗ Q_b^y psi||` over (y, b)
/// * `r4`: `||pi(y,b) ⊗ Q_{b'}^y psi||` over (y, b != b')
/// * `r5`: `||(1 ⊗ Q_b^y - pi(y,b) ⊗ 1) psi||` over (y, b)
/// * `commutator_defect`: worst `|<psi|(1⊗Q_{b1}^{y1})(1⊗Q_{b2}^{y2})psi> -
///   <psi|(1⊗Q_{b2}^{y2})(1⊗Q_{b1}^{y1})psi>|`
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WitnessReport {
    pub tol: f64,
    pub dim_a: usize,
    pub dim_b: usize,
    /// Whether Alice has exactly two questions and two answers.
    pub alice_two_by_two: bool,
    pub eps_input: f64,
    pub r1: f64,
    pub r2: f64,
    pub r3: f64,
    pub r4: f64,
    pub r5: f64,
    pub commutator_defect: f64,
    pub witnesses: WitnessIndices,
    pub measured_constants: SqrtEpsRatios,
}

pub fn witness_report(s: &TensorStrategy, g: &Game, tol: f64) -> Result<WitnessReport> {
    let induced = induce_projections(s, g, tol)?;
    let correlation = correlation_from_tensor(s, g)?;
    let eps_input = correlation.epsilon_violation(g)?;
    let (da, db) = (s.dim_a(), s.dim_b());
    let psi = s.psi().amplitudes();

    let mut wit = WitnessIndices::default();

    let mut r1 = 0.0f64;
    for x in 0..g.x_count() {
        for y in 0..g.y_count() {
            for b in 0..g.b_count() {
                let complement = induced.pre_pi(x, y, b).complement();
                let v = apply_left(
                    complement.matrix(),
                    &apply_right(s.bob_matrix(y, b), psi, da, db),
                    da,
                    db,
                );
                let norm = norm2(&v);
                if norm > r1 {
                    r1 = norm;
                    wit.r1 = Some([x, y, b]);
                }
            }
        }
    }

    let mut r2 = 0.0f64;
    for y in 0..g.y_count() {
        for b in 0..g.b_count() {
            for b2 in 0..g.b_count() {
                if b == b2 {
                    continue;
                }
                for x in g.separating_x(y, b, b2) {
                    let v = apply_left(
                        induced.pre_pi(x, y, b).matrix(),
                        &apply_right(s.bob_matrix(y, b2), psi, da, db),
                        da,
                        db,
                    );
                    let norm = norm2(&v);
                    if norm > r2 {
                        r2 = norm;
                        wit.r2 = Some([x, y, b, b2]);
                    }
                }
            }
        }
    }

    let mut r3 = 0.0f64;
    let mut r4 = 0.0f64;
    let mut r5 = 0.0f64;
    for y in 0..g.y_count() {
        for b in 0..g.b_count() {
            let q_psi = apply_right(s.bob_matrix(y, b), psi, da, db);
            let v = apply_left(induced.pi(y, b).complement().matrix(), &q_psi, da, db);
            let norm = norm2(&v);
            if norm > r3 {
                r3 = norm;
                wit.r3 = Some([y, b]);
            }

            let pi_psi = apply_left(induced.pi(y, b).matrix(), psi, da, db);
            let norm = norm2(&vec_sub(&q_psi, &pi_psi));
            if norm > r5 {
                r5 = norm;
                wit.r5 = Some([y, b]);
            }

            for b2 in 0..g.b_count() {
                if b == b2 {
                    continue;
                }
                let v = apply_left(
                    induced.pi(y, b).matrix(),
                    &apply_right(s.bob_matrix(y, b2), psi, da, db),
                    da,
                    db,
                );
                let norm = norm2(&v);
                if norm > r4 {
                    r4 = norm;
                    wit.r4 = Some([y, b, b2]);
                }
            }
        }
    }

    let mut commutator_defect = 0.0f64;
    for y1 in 0..g.y_count() {
        for b1 in 0..g.b_count() {
            for y2 in 0..g.y_count() {
                for b2 in 0..g.b_count() {
                    let forward = inner(
                        psi,
                        &apply_right(
                            s.bob_matrix(y1, b1),
                            &apply_right(s.bob_matrix(y2, b2), psi, da, db),
                            da,
                            db,
                        ),
                    );
                    let backward = inner(
                        psi,
                        &apply_right(
                            s.bob_matrix(y2, b2),
                            &apply_right(s.bob_matrix(y1, b1), psi, da, db),
                            da,
                            db,
                        ),
                    );
                    let defect = (forward - backward).norm();
                    if defect > commutator_defect {
                        commutator_defect = defect;
                        wit.commutator = Some([y1, b1, y2, b2]);
                    }
                }
            }
        }
    }

    let ratio = |r: f64| {
        if eps_input > 0.0 {
            Some(r / eps_input.sqrt())
        } else {
            None
        }
    };
    let measured_constants = SqrtEpsRatios {
        r1: ratio(r1),
        r2: ratio(r2),
        r3: ratio(r3),
        r4: ratio(r4),
        r5: ratio(r5),
        commutator: ratio(commutator_defect),
    };

    Ok(WitnessReport {
        tol,
        dim_a: da,
        dim_b: db,
        alice_two_by_two: g.x_count() == 2 && g.a_count() == 2,
        eps_input,
        r1,
        r2,
        r3,
        r4,
        r5,
        commutator_defect,
        witnesses: wit,
        measured_constants,
    })
}

// ---------------------------------------------------------------------------
// identities on the cyclic subspace

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RestrictedIdentities {
    pub tol: f64,
    pub ambient_dim: usize,
    pub cyclic_dim: usize,
    pub alice_two_by_two: bool,
    /// max over (y,b) of `||(pi(y,b) ⊗ 1 - 1 ⊗ Q_b^y) psi||`
    pub pi_state_defect: f64,
    /// max over (x,a) of `||(1 ⊗ xi(x,a) - P_a^x ⊗ 1) psi||`
    pub xi_state_defect: f64,
    /// max over (y, b != b') of the product of compressions on the subspace
    pub orthogonality_defect_on_k: f64,
    /// max over y of `||sum_b pi(y,b)|_K - 1_K||_F`
    pub resolution_defect_on_k: f64,
    /// same quantities on the full Alice factor; reported, not asserted
    pub orthogonality_defect_full: f64,
    pub resolution_defect_full: f64,
    pub pass: bool,
}

fn ensure_perfect(s: &TensorStrategy, g: &Game, tol: f64) -> Result<(Correlation, f64)> {
    let c = correlation_from_tensor(s, g)?;
    let eps = c.epsilon_violation(g)?;
    if eps > tol {
        return Err(Error::NotPerfect { eps, tol });
    }
    Ok((c, eps))
}

/// Compression of a left-factor operator to a subspace basis.
fn compress_left(op: &CMatrix, k: &CyclicSubspace, da: usize, db: usize) -> CMatrix {
    let dim = k.dim();
    let mut out = CMatrix::zeros(dim.max(1), dim.max(1));
    for (col, v) in k.basis().iter().enumerate() {
        let image = apply_left(op, v, da, db);
        for (row, u) in k.basis().iter().enumerate() {
            out[(row, col)] = inner(u, &image);
        }
    }
    out
}

/// The cyclic subspace generated from the state by Alice's projectors on the
/// left factor.
pub fn alice_cyclic_subspace(s: &TensorStrategy, tol: f64) -> Result<CyclicSubspace> {
    let ib = CMatrix::identity(s.dim_b());
    let gens: Vec<CMatrix> = s
        .alice()
        .iter()
        .flat_map(|pvm| pvm.iter().map(|p| p.matrix().kron(&ib)))
        .collect();
    cyclic_subspace(&gens, s.psi(), tol)
}

/// Verify, for an exact perfect strategy, the state identities and the
/// partition behaviour of the meet family restricted to the cyclic subspace.
pub fn restricted_identities(
    s: &TensorStrategy,
    g: &Game,
    tol: f64,
) -> Result<RestrictedIdentities> {
    ensure_perfect(s, g, tol)?;
    let induced = induce_projections(s, g, tol)?;
    let (da, db) = (s.dim_a(), s.dim_b());
    let psi = s.psi().amplitudes();
    let subspace = alice_cyclic_subspace(s, tol)?;

    let mut pi_state_defect = 0.0f64;
    for y in 0..g.y_count() {
        for b in 0..g.b_count() {
            let lhs = apply_left(induced.pi(y, b).matrix(), psi, da, db);
            let rhs = apply_right(s.bob_matrix(y, b), psi, da, db);
            pi_state_defect = pi_state_defect.max(norm2(&vec_sub(&lhs, &rhs)));
        }
    }
    let mut xi_state_defect = 0.0f64;
    for x in 0..g.x_count() {
        for a in 0..g.a_count() {
            let lhs = apply_right(induced.xi(x, a).matrix(), psi, da, db);
            let rhs = apply_left(s.alice_matrix(x, a), psi, da, db);
            xi_state_defect = xi_state_defect.max(norm2(&vec_sub(&lhs, &rhs)));
        }
    }

    let kdim = subspace.dim();
    let mut orthogonality_on_k = 0.0f64;
    let mut resolution_on_k = 0.0f64;
    let mut orthogonality_full = 0.0f64;
    let mut resolution_full = 0.0f64;
    for y in 0..g.y_count() {
        let compressed: Vec<CMatrix> = (0..g.b_count())
            .map(|b| compress_left(induced.pi(y, b).matrix(), &subspace, da, db))
            .collect();
        for b in 0..g.b_count() {
            for b2 in 0..g.b_count() {
                if b == b2 {
                    continue;
                }
                orthogonality_on_k =
                    orthogonality_on_k.max((&compressed[b] * &compressed[b2]).fro_norm());
                orthogonality_full = orthogonality_full
                    .max((induced.pi(y, b).matrix() * induced.pi(y, b2).matrix()).fro_norm());
            }
        }
        let mut sum_k = CMatrix::zeros(kdim, kdim);
        let mut sum_full = CMatrix::zeros(da, da);
        for b in 0..g.b_count() {
            sum_k = &sum_k + &compressed[b];
            sum_full = &sum_full + induced.pi(y, b).matrix();
        }
        resolution_on_k = resolution_on_k.max((&sum_k - &CMatrix::identity(kdim)).fro_norm());
        resolution_full = resolution_full.max((&sum_full - &CMatrix::identity(da)).fro_norm());
    }

    let bound = 10.0 * tol * (da * db) as f64;
    let pass = pi_state_defect <= bound
        && xi_state_defect <= bound
        && orthogonality_on_k <= bound
        && resolution_on_k <= bound;

    Ok(RestrictedIdentities {
        tol,
        ambient_dim: da * db,
        cyclic_dim: kdim,
        alice_two_by_two: g.x_count() == 2 && g.a_count() == 2,
        pi_state_defect,
        xi_state_defect,
        orthogonality_defect_on_k: orthogonality_on_k,
        resolution_defect_on_k: resolution_on_k,
        orthogonality_defect_full: orthogonality_full,
        resolution_defect_full: resolution_full,
        pass,
    })
}

// ---------------------------------------------------------------------------
// word reversal

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WordDiscrepancy {
    pub word: Vec<[usize; 2]>,
    pub discrepancy: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WordReversalReport {
    pub tol: f64,
    pub max_discrepancy: f64,
    pub worst_word: Option<Vec<[usize; 2]>>,
    pub per_word: Vec<WordDiscrepancy>,
    pub pass: bool,
}

/// For each word of Alice letters, compare the word applied on Alice's factor
/// with the reversed word of mirror projections applied on Bob's factor.
pub fn word_reversal_check(
    s: &TensorStrategy,
    g: &Game,
    words: &[Word],
    max_len: usize,
    tol: f64,
) -> Result<WordReversalReport> {
    ensure_perfect(s, g, tol)?;
    let induced = induce_projections(s, g, tol)?;
    let (da, db) = (s.dim_a(), s.dim_b());
    let psi = s.psi().amplitudes();

    for w in words {
        if w.len() > max_len {
            return Err(Error::WordTooLong {
                len: w.len(),
                cap: max_len,
            });
        }
        for &(x, a) in w {
            if x >= g.x_count() || a >= g.a_count() {
                return Err(Error::RangeError {
                    context: format!("word letter ({x},{a}) out of range"),
                });
            }
        }
    }

    let mut per_word = Vec::with_capacity(words.len());
    let mut max_discrepancy = 0.0f64;
    let mut worst_word = None;
    for w in words {
        // Alice word applied in the given order on the left factor
        let mut left = psi.to_vec();
        for &(x, a) in w.iter().rev() {
            left = apply_left(s.alice_matrix(x, a), &left, da, db);
        }
        // mirror word applied in reversed order on the right factor
        let mut right = psi.to_vec();
        for &(x, a) in w.iter() {
            right = apply_right(induced.xi(x, a).matrix(), &right, da, db);
        }
        let discrepancy = norm2(&vec_sub(&left, &right));
        if discrepancy > max_discrepancy {
            max_discrepancy = discrepancy;
            worst_word = Some(word_to_json(w));
        }
        per_word.push(WordDiscrepancy {
            word: word_to_json(w),
            discrepancy,
        });
    }
    let bound = 10.0 * tol * (da * db) as f64;
    Ok(WordReversalReport {
        tol,
        max_discrepancy,
        worst_word,
        per_word,
        pass: max_discrepancy <= bound,
    })
}

// ---------------------------------------------------------------------------
// trace check

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TraceCheckReport {
    pub side: Side,
    pub tol: f64,
    pub max_word_len: usize,
    pub pairs_checked: usize,
    pub max_defect: f64,
    pub worst_u: Option<Vec<[usize; 2]>>,
    pub worst_v: Option<Vec<[usize; 2]>>,
    pub pass: bool,
}

/// Enumerate all word pairs `(u, v)` over one side's projector alphabet with
/// `|u| + |v| <= max_len` and report the worst `|<psi|uv psi> - <psi|vu psi>|`.
pub fn trace_check(
    s: &TensorStrategy,
    side: Side,
    max_len: usize,
    tol: f64,
) -> Result<TraceCheckReport> {
    let (da, db) = (s.dim_a(), s.dim_b());
    let psi = s.psi().amplitudes();
    let (q_count, ans_count) = match side {
        Side::Alice => (s.alice().len(), s.alice()[0].len()),
        Side::Bob => (s.bob().len(), s.bob()[0].len()),
    };
    let words = enumerate_words(q_count, ans_count, max_len);

    let apply_letter = |(q, ans): (usize, usize), v: &[C64]| match side {
        Side::Alice => apply_left(s.alice_matrix(q, ans), v, da, db),
        Side::Bob => apply_right(s.bob_matrix(q, ans), v, da, db),
    };
    // cache w |psi> for every word; the word operator is the left-to-right
    // product of its letters, so letters apply right-to-left
    let mut cache: Vec<Vec<C64>> = Vec::with_capacity(words.len());
    let mut index: std::collections::BTreeMap<Word, usize> = std::collections::BTreeMap::new();
    for (i, w) in words.iter().enumerate() {
        let vec = if w.is_empty() {
            psi.to_vec()
        } else {
            let rest = &w[1..];
            let base = cache[index[rest]].clone();
            apply_letter(w[0], &base)
        };
        cache.push(vec);
        index.insert(w.clone(), i);
    }

    // words are ordered by length: first_of_len[k] = index of the first
    // word of length k, so partners of u stop at first_of_len[budget + 1]
    let letters_count = q_count * ans_count;
    let mut first_of_len = vec![0usize; max_len + 2];
    for k in 0..=max_len {
        first_of_len[k + 1] = first_of_len[k] + letters_count.pow(k as u32);
    }

    // <psi| u (v psi)> with u applied letterwise to the cached v psi; an
    // empty u or v then reproduces the mirrored expression bit for bit
    let functional = |u: &Word, iv: usize| {
        let mut vec = cache[iv].clone();
        for &letter in u.iter().rev() {
            vec = apply_letter(letter, &vec);
        }
        inner(psi, &vec)
    };

    let mut max_defect = 0.0f64;
    let mut worst: Option<(usize, usize)> = None;
    let mut pairs_checked = 0usize;
    for (iu, u) in words.iter().enumerate() {
        let budget = max_len - u.len();
        let v_end = first_of_len[budget + 1].min(words.len());
        for iv in 0..v_end {
            pairs_checked += 1;
            let uv = functional(u, iv);
            let vu = functional(&words[iv], iu);
            let defect = (uv - vu).norm();
            if defect > max_defect {
                max_defect = defect;
                worst = Some((iu, iv));
            }
        }
    }
    let bound = 10.0 * tol * (da * db) as f64;
    Ok(TraceCheckReport {
        side,
        tol,
        max_word_len: max_len,
        pairs_checked,
        max_defect,
        worst_u: worst.map(|(iu, _)| word_to_json(&words[iu])),
        worst_v: worst.map(|(_, iv)| word_to_json(&words[iv])),
        pass: max_defect <= bound,
    })
}

// ---------------------------------------------------------------------------
// family scan

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ScanMember {
    pub eps_input: f64,
    pub r1: f64,
    pub r2: f64,
    pub r3: f64,
    pub r4: f64,
    pub r5: f64,
    pub commutator_defect: f64,
}

/// Log-log least-squares slopes of each residual against `eps_input`.
/// `None` when fewer than two members have strictly positive residual and
/// leak, or when the leaks do not vary.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SlopeEstimates {
    pub r1: Option<f64>,
    pub r2: Option<f64>,
    pub r3: Option<f64>,
    pub r4: Option<f64>,
    pub r5: Option<f64>,
    pub commutator: Option<f64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WordEvaluation {
    pub alice_word: Vec<[usize; 2]>,
    pub bob_word: Vec<[usize; 2]>,
    /// `[re, im]` of `<psi| (u ⊗ v) |psi>`.
    pub value: [f64; 2],
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ScanReport {
    pub tol: f64,
    pub max_word_len: usize,
    pub members: Vec<ScanMember>,
    /// Max word-functional gap between consecutive members.
    pub cauchy_defects: Vec<f64>,
    pub slopes: SlopeEstimates,
    /// The word-functional table, included for single-member families.
    pub evaluations: Option<Vec<WordEvaluation>>,
}

fn loglog_slope(points: &[(f64, f64)]) -> Option<f64> {
    let usable: Vec<(f64, f64)> = points
        .iter()
        .filter(|&&(x, y)| x > 0.0 && y > 0.0)
        .map(|&(x, y)| (x.ln(), y.ln()))
        .collect();
    if usable.len() < 2 {
        return None;
    }
    let n = usable.len() as f64;
    let mx = usable.iter().map(|p| p.0).sum::<f64>() / n;
    let my = usable.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = usable.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    let sxy: f64 = usable.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx < 1e-12 {
        return None;
    }
    Some(sxy / sxx)
}

/// Evaluate each family member's word functionals and residuals, report
/// consecutive Cauchy gaps and the scaling of every residual against the
/// square root of the zero-support leak. The family is expected in order of
/// decreasing leak.
pub fn state_convergence_scan(
    family: &[TensorStrategy],
    g: &Game,
    max_len: usize,
    tol: f64,
) -> Result<ScanReport> {
    if family.is_empty() {
        return Err(Error::EmptyFamily);
    }
    let alice_words = enumerate_words(g.x_count(), g.a_count(), max_len);
    let bob_words = enumerate_words(g.y_count(), g.b_count(), max_len);

    let mut members = Vec::new();
    let mut tables: Vec<Vec<C64>> = Vec::new();
    let mut evaluations = None;
    for s in family {
        let report = witness_report(s, g, tol)?;
        members.push(ScanMember {
            eps_input: report.eps_input,
            r1: report.r1,
            r2: report.r2,
            r3: report.r3,
            r4: report.r4,
            r5: report.r5,
            commutator_defect: report.commutator_defect,
        });

        let (da, db) = (s.dim_a(), s.dim_b());
        let psi = s.psi().amplitudes();
        let mut table = Vec::new();
        let mut eval_rows = Vec::new();
        for u in &alice_words {
            // u applied on the left factor, letters right-to-left
            let mut left = psi.to_vec();
            for &(x, a) in u.iter().rev() {
                left = apply_left(s.alice_matrix(x, a), &left, da, db);
            }
            for v in &bob_words {
                if u.len() + v.len() > max_len {
                    continue;
                }
                let mut both = left.clone();
                for &(y, b) in v.iter().rev() {
                    both = apply_right(s.bob_matrix(y, b), &both, da, db);
                }
                let value = inner(psi, &both);
                table.push(value);
                if family.len() == 1 {
                    eval_rows.push(WordEvaluation {
                        alice_word: word_to_json(u),
                        bob_word: word_to_json(v),
                        value: [value.re, value.im],
                    });
                }
            }
        }
        tables.push(table);
        if family.len() == 1 {
            evaluations = Some(eval_rows);
        }
    }

    let cauchy_defects = tables
        .windows(2)
        .map(|pair| {
            pair[0]
                .iter()
                .zip(pair[1].iter())
                .map(|(a, b)| (a - b).norm())
                .fold(0.0, f64::max)
        })
        .collect();

    let series = |pick: fn(&ScanMember) -> f64| {
        loglog_slope(
            &members
                .iter()
                .map(|m| (m.eps_input, pick(m)))
                .collect::<Vec<_>>(),
        )
    };
    let slopes = SlopeEstimates {
        r1: series(|m| m.r1),
        r2: series(|m| m.r2),
        r3: series(|m| m.r3),
        r4: series(|m| m.r4),
        r5: series(|m| m.r5),
        commutator: series(|m| m.commutator_defect),
    };

    Ok(ScanReport {
        tol,
        max_word_len: max_len,
        members,
        cauchy_defects,
        slopes,
        evaluations,
    })
}
