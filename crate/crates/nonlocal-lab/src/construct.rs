//! From a finite-dimensional algebra with a state to correlations and
//! strategies.
//!
//! A `TraceSpec` is a density matrix representing the functional
//! `tau(a) = trace(density * a)`; a `HomSpec` assigns projector images to the
//! two players' generators on a common dimension. From those this module
//! computes the induced correlation `tau(E_a^x F_b^y)`, a GNS representation
//! realized by purification (the space of matrices with the state-twisted
//! inner product, left multiplication as the action), and, when the density
//! commutes with Bob's images, an explicit two-factor strategy reproducing
//! the correlation.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::correlation::Correlation;
use crate::error::{Error, Result};
use crate::game::{Game, Side};
use crate::linalg::matrix::vec_to_wire;
use crate::linalg::{eigh, operator_norm, sqrt_psd, CMatrix, Pvm, StateVector};
use crate::strategy::{correlation_from_tensor, TensorStrategy};

/// Tolerance for the realized-vs-trace correlation round trip.
pub const REALIZATION_TOL: f64 = 1e-9;

/// A state on d-by-d matrices, given by its density matrix.
#[derive(Clone, Debug)]
pub struct TraceSpec {
    dim: usize,
    density: CMatrix,
    tol: f64,
}

impl TraceSpec {
    /// Validates Hermiticity, positivity (eigenvalues >= -tol), and unit trace.
    pub fn new(density: CMatrix, tol: f64) -> Result<Self> {
        if !density.is_square() {
            return Err(Error::dim("density matrix must be square"));
        }
        let dim = density.rows();
        let herm = density.hermitian_defect();
        if herm > tol * dim as f64 {
            return Err(Error::NumericalInstability {
                context: format!("density is not Hermitian: defect {herm:.3e}"),
            });
        }
        let e = eigh(&density)?;
        if let Some(&lambda) = e.values.first() {
            if lambda < -tol {
                return Err(Error::NumericalInstability {
                    context: format!("density has negative eigenvalue {lambda:.3e}"),
                });
            }
        }
        let trace = density.trace();
        if (trace.re - 1.0).abs() > tol || trace.im.abs() > tol {
            return Err(Error::NumericalInstability {
                context: format!("density trace is {trace}, expected 1"),
            });
        }
        Ok(TraceSpec { dim, density, tol })
    }

    /// The normalized trace on dimension `d`.
    pub fn normalized_trace(d: usize) -> Self {
        let density = CMatrix::identity(d).scale(C64::new(1.0 / d as f64, 0.0));
        TraceSpec {
            dim: d,
            density,
            tol: crate::DEFAULT_TOL,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn density(&self) -> &CMatrix {
        &self.density
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    /// `tau(m) = trace(density * m)`.
    pub fn eval(&self, m: &CMatrix) -> C64 {
        trace_prod(&self.density, m)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({ "dim": self.dim, "density": self.density })
    }
}

/// `trace(a * b)` without forming the product.
fn trace_prod(a: &CMatrix, b: &CMatrix) -> C64 {
    debug_assert_eq!(a.cols(), b.rows());
    let mut acc = C64::new(0.0, 0.0);
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            acc += a[(i, j)] * b[(j, i)];
        }
    }
    acc
}

/// Generator images: one PVM per question for each player, all on one
/// dimension. Cross-commutation is checked by the operations that rely on
/// it, not at construction, so that diagnostic checks can run on
/// non-commuting assignments.
#[derive(Clone, Debug)]
pub struct HomSpec {
    dim: usize,
    alice: Vec<Pvm>,
    bob: Vec<Pvm>,
    tol: f64,
}

impl HomSpec {
    pub fn new(dim: usize, alice: Vec<Pvm>, bob: Vec<Pvm>, tol: f64) -> Result<Self> {
        if alice.is_empty() || bob.is_empty() {
            return Err(Error::EmptySet {
                what: "generator family",
            });
        }
        if alice.iter().chain(bob.iter()).any(|p| p.dim() != dim) {
            return Err(Error::dim("generator dimension differs from dim"));
        }
        Ok(HomSpec {
            dim,
            alice,
            bob,
            tol,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn alice(&self) -> &[Pvm] {
        &self.alice
    }

    pub fn bob(&self) -> &[Pvm] {
        &self.bob
    }

    pub fn alice_matrix(&self, x: usize, a: usize) -> &CMatrix {
        self.alice[x].matrix(a)
    }

    pub fn bob_matrix(&self, y: usize, b: usize) -> &CMatrix {
        self.bob[y].matrix(b)
    }

    /// Worst `||[E_a^x, F_b^y]||_F` with its indices.
    pub fn cross_commutation_defect(&self) -> (f64, [usize; 4]) {
        let mut worst = (0.0f64, [0usize; 4]);
        for (x, pa) in self.alice.iter().enumerate() {
            for a in 0..pa.len() {
                for (y, qb) in self.bob.iter().enumerate() {
                    for b in 0..qb.len() {
                        let ef = pa.matrix(a) * qb.matrix(b);
                        let fe = qb.matrix(b) * pa.matrix(a);
                        let defect = (&ef - &fe).fro_norm();
                        if defect > worst.0 {
                            worst = (defect, [x, a, y, b]);
                        }
                    }
                }
            }
        }
        worst
    }

    pub fn ensure_cross_commuting(&self) -> Result<()> {
        let (defect, [x, a, y, b]) = self.cross_commutation_defect();
        if defect > self.tol * self.dim as f64 {
            return Err(Error::NotCommuting { x, a, y, b, defect });
        }
        Ok(())
    }

    fn ensure_shape(&self, g: &Game) -> Result<()> {
        if self.alice.len() != g.x_count() || self.bob.len() != g.y_count() {
            return Err(Error::dim("generator question count differs from the game"));
        }
        if self.alice.iter().any(|p| p.len() != g.a_count())
            || self.bob.iter().any(|p| p.len() != g.b_count())
        {
            return Err(Error::dim("generator answer count differs from the game"));
        }
        Ok(())
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "dim": self.dim,
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
struct TraceSpecWire {
    dim: usize,
    density: CMatrix,
}

pub fn parse_trace_spec(text: &str, tol: f64) -> Result<TraceSpec> {
    let wire: TraceSpecWire = serde_json::from_str(text).map_err(|e| Error::Input {
        path: "trace spec".into(),
        message: e.to_string(),
    })?;
    if wire.density.rows() != wire.dim {
        return Err(Error::dim("declared dim differs from the density matrix"));
    }
    TraceSpec::new(wire.density, tol)
}

#[derive(Serialize, Deserialize)]
struct HomSpecWire {
    dim: usize,
    alice: Vec<Vec<CMatrix>>,
    bob: Vec<Vec<CMatrix>>,
}

pub fn parse_hom_spec(text: &str, tol: f64) -> Result<HomSpec> {
    let wire: HomSpecWire = serde_json::from_str(text).map_err(|e| Error::Input {
        path: "hom spec".into(),
        message: e.to_string(),
    })?;
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
    HomSpec::new(wire.dim, alice, bob, tol)
}

// ---------------------------------------------------------------------------
// generator words

/// One generator image, addressed by player, question, and answer.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenLetter {
    pub side: Side,
    pub question: usize,
    pub answer: usize,
}

pub type GenWord = Vec<GenLetter>;

fn letter_matrix<'a>(h: &'a HomSpec, l: &GenLetter) -> &'a CMatrix {
    match l.side {
        Side::Alice => h.alice_matrix(l.question, l.answer),
        Side::Bob => h.bob_matrix(l.question, l.answer),
    }
}

fn word_matrix(h: &HomSpec, w: &[GenLetter]) -> CMatrix {
    let mut m = CMatrix::identity(h.dim());
    for l in w {
        m = &m * letter_matrix(h, l);
    }
    m
}

/// All generator letters in a fixed order: Alice (x, a) ascending, then Bob.
pub fn generator_alphabet(h: &HomSpec) -> Vec<GenLetter> {
    let mut out = Vec::new();
    for (x, pvm) in h.alice().iter().enumerate() {
        for a in 0..pvm.len() {
            out.push(GenLetter {
                side: Side::Alice,
                question: x,
                answer: a,
            });
        }
    }
    for (y, pvm) in h.bob().iter().enumerate() {
        for b in 0..pvm.len() {
            out.push(GenLetter {
                side: Side::Bob,
                question: y,
                answer: b,
            });
        }
    }
    out
}

/// All generator words of length `<= max_len`, by length then lexicographic.
pub fn enumerate_gen_words(h: &HomSpec, max_len: usize) -> Vec<GenWord> {
    let letters = generator_alphabet(h);
    let mut out: Vec<GenWord> = vec![Vec::new()];
    let mut level: Vec<GenWord> = vec![Vec::new()];
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
// trace property

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TracePropertyReport {
    pub tol: f64,
    pub max_word_len: usize,
    pub pairs_checked: usize,
    pub max_defect: f64,
    pub worst_u: Option<GenWord>,
    pub worst_v: Option<GenWord>,
    pub pass: bool,
}

/// Worst `|tau(uv) - tau(vu)|` over generator words with `|u|+|v| <= max_len`.
pub fn trace_property_check(
    t: &TraceSpec,
    h: &HomSpec,
    max_len: usize,
    tol: f64,
) -> Result<TracePropertyReport> {
    if t.dim() != h.dim() {
        return Err(Error::dim("trace and generator dimensions differ"));
    }
    let words = enumerate_gen_words(h, max_len);
    let mats: Vec<CMatrix> = words.iter().map(|w| word_matrix(h, w)).collect();
    let rho_mats: Vec<CMatrix> = mats.iter().map(|m| t.density() * m).collect();

    // words are ordered by length: partners of u stop where the combined
    // length would exceed the cap
    let letters_count = generator_alphabet(h).len();
    let mut first_of_len = vec![0usize; max_len + 2];
    for k in 0..=max_len {
        first_of_len[k + 1] = first_of_len[k] + letters_count.pow(k as u32);
    }

    let mut max_defect = 0.0f64;
    let mut worst = None;
    let mut pairs_checked = 0usize;
    for (iu, u) in words.iter().enumerate() {
        let budget = max_len - u.len();
        let v_end = first_of_len[budget + 1].min(words.len());
        for iv in 0..v_end {
            pairs_checked += 1;
            let uv = trace_prod(&rho_mats[iu], &mats[iv]);
            let vu = trace_prod(&rho_mats[iv], &mats[iu]);
            let defect = (uv - vu).norm();
            if defect > max_defect {
                max_defect = defect;
                worst = Some((iu, iv));
            }
        }
    }
    Ok(TracePropertyReport {
        tol,
        max_word_len: max_len,
        pairs_checked,
        max_defect,
        worst_u: worst.map(|(iu, _)| words[iu].clone()),
        worst_v: worst.map(|(_, iv)| words[iv].clone()),
        pass: max_defect <= tol,
    })
}

// ---------------------------------------------------------------------------
// correlation from a trace

/// `p(a,b|x,y) = tau(E_a^x F_b^y)`, requiring cross-commuting images.
pub fn correlation_from_trace(t: &TraceSpec, h: &HomSpec, g: &Game) -> Result<Correlation> {
    if t.dim() != h.dim() {
        return Err(Error::dim("trace and generator dimensions differ"));
    }
    h.ensure_shape(g)?;
    h.ensure_cross_commuting()?;
    let mut p = Vec::new();
    for x in 0..g.x_count() {
        for y in 0..g.y_count() {
            for a in 0..g.a_count() {
                let rho_e = t.density() * h.alice_matrix(x, a);
                for b in 0..g.b_count() {
                    let z = trace_prod(&rho_e, h.bob_matrix(y, b));
                    if z.im.abs() > h.tol() {
                        return Err(Error::NotCommuting {
                            x,
                            a,
                            y,
                            b,
                            defect: z.im.abs(),
                        });
                    }
                    let val = z.re;
                    let clamped = if val < 0.0 && val >= -h.tol() {
                        0.0
                    } else if val > 1.0 && val <= 1.0 + h.tol() {
                        1.0
                    } else {
                        val
                    };
                    p.push(clamped);
                }
            }
        }
    }
    Correlation::new(
        g.x_count(),
        g.y_count(),
        g.a_count(),
        g.b_count(),
        p,
        h.tol().max(t.tol()),
    )
}

// ---------------------------------------------------------------------------
// GNS by purification

/// GNS data: the representation space dimension, the cyclic vector, and the
/// generator images as matrices on that space.
pub struct GnsResult {
    pub hilbert_dim: usize,
    /// Rank of the density after eigen-truncation.
    pub rank: usize,
    pub psi: StateVector,
    pub rep_alice: Vec<Vec<CMatrix>>,
    pub rep_bob: Vec<Vec<CMatrix>>,
    /// Worst `|<psi|rep(w)|psi> - tau(w)|` over words of length <= 3.
    pub fidelity_defect: f64,
}

impl GnsResult {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "hilbert_dim": self.hilbert_dim,
            "rank": self.rank,
            "psi": vec_to_wire(self.psi.amplitudes()),
            "rep_alice": self.rep_alice,
            "rep_bob": self.rep_bob,
            "fidelity_defect": self.fidelity_defect,
        })
    }
}

/// Purification GNS: the representation space is the span of matrices
/// `m * sqrt(density)` under the Frobenius inner product, with basis
/// `e_i u_k*` over the kept eigenvectors `u_k` (eigenvalue > tol) of the
/// density. Generators act by left multiplication, which in that basis is
/// `g ⊗ 1_rank`; the cyclic vector is the class of the identity, with
/// coordinates `sqrt(lambda_k) * u_k[i]`.
pub fn gns(t: &TraceSpec, h: &HomSpec, tol: f64) -> Result<GnsResult> {
    if t.dim() != h.dim() {
        return Err(Error::dim("trace and generator dimensions differ"));
    }
    let d = t.dim();
    let e = eigh(t.density())?;
    let kept: Vec<usize> = (0..d).filter(|&k| e.values[k] > tol).collect();
    let rank = kept.len();
    if rank == 0 {
        return Err(Error::NumericalInstability {
            context: "density has no eigenvalue above the truncation tolerance".into(),
        });
    }
    let hilbert_dim = d * rank;

    let mut amp = vec![C64::new(0.0, 0.0); hilbert_dim];
    for (slot, &k) in kept.iter().enumerate() {
        let root = e.values[k].sqrt();
        let u = e.vector(k);
        for i in 0..d {
            amp[i * rank + slot] = u[i] * root;
        }
    }
    let psi = StateVector::normalized(amp)?;

    let lift = |m: &CMatrix| m.kron(&CMatrix::identity(rank));
    let rep_alice: Vec<Vec<CMatrix>> = h
        .alice()
        .iter()
        .map(|pvm| pvm.iter().map(|p| lift(p.matrix())).collect())
        .collect();
    let rep_bob: Vec<Vec<CMatrix>> = h
        .bob()
        .iter()
        .map(|pvm| pvm.iter().map(|p| lift(p.matrix())).collect())
        .collect();

    // fidelity of the state against the functional on words of length <= 3
    let words = enumerate_gen_words(h, 3);
    let mut fidelity_defect = 0.0f64;
    for w in &words {
        let m = word_matrix(h, w);
        let lifted = crate::linalg::apply_left(&m, psi.amplitudes(), d, rank);
        let got = crate::linalg::inner(psi.amplitudes(), &lifted);
        let want = t.eval(&m);
        fidelity_defect = fidelity_defect.max((got - want).norm());
    }

    Ok(GnsResult {
        hilbert_dim,
        rank,
        psi,
        rep_alice,
        rep_bob,
        fidelity_defect,
    })
}

// ---------------------------------------------------------------------------
// tensor realization

/// Explicit two-factor strategy reproducing the trace correlation: both
/// factors have the trace's dimension, the state is the vectorized square
/// root of the density, Alice keeps her images, and Bob acts by transposes
/// on the right factor. Requires the density to commute with Bob's images.
pub fn tensor_realization(t: &TraceSpec, h: &HomSpec, g: &Game) -> Result<TensorStrategy> {
    if t.dim() != h.dim() {
        return Err(Error::dim("trace and generator dimensions differ"));
    }
    h.ensure_shape(g)?;
    h.ensure_cross_commuting()?;
    let d = t.dim();
    for (y, pvm) in h.bob().iter().enumerate() {
        for b in 0..pvm.len() {
            let f = pvm.matrix(b);
            let defect = (&(t.density() * f) - &(f * t.density())).fro_norm();
            if defect > h.tol() * d as f64 {
                return Err(Error::DensityNotCommuting { y, b, defect });
            }
        }
    }

    let root = sqrt_psd(t.density(), t.tol())?;
    let mut amp = vec![C64::new(0.0, 0.0); d * d];
    for i in 0..d {
        for j in 0..d {
            amp[i * d + j] = root[(i, j)];
        }
    }
    let psi = StateVector::normalized(amp)?;

    let alice: Vec<Pvm> = h.alice().to_vec();
    let bob = h
        .bob()
        .iter()
        .map(|pvm| {
            Pvm::new(
                pvm.iter().map(|p| p.matrix().transpose()).collect(),
                h.tol(),
            )
        })
        .collect::<Result<Vec<_>>>()?;
    let strategy = TensorStrategy::new(d, d, psi, alice, bob, h.tol())?;

    let realized = correlation_from_tensor(&strategy, g)?;
    let from_trace = correlation_from_trace(t, h, g)?;
    let distance = realized.distance(&from_trace)?;
    if distance > REALIZATION_TOL {
        return Err(Error::RealizationMismatch {
            distance,
            tol: REALIZATION_TOL,
        });
    }
    Ok(strategy)
}

// ---------------------------------------------------------------------------
// boundedness of the product functional

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AmenabilityEntry {
    pub u: GenWord,
    pub v: GenWord,
    /// `[re, im]` of `tau(uv)`.
    pub sigma: [f64; 2],
    pub bound: f64,
    pub margin: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AmenabilityReport {
    pub tol: f64,
    pub pairs_checked: usize,
    pub min_margin: f64,
    pub worst_u: Option<GenWord>,
    pub worst_v: Option<GenWord>,
    pub pass: bool,
    /// Per-pair table, included when small.
    pub entries: Option<Vec<AmenabilityEntry>>,
}

/// Evaluate the product functional `sigma(u ⊗ v) = tau(uv)` on all pairs
/// from the supplied word list and verify `|sigma| <= ||u|| * ||v||`
/// (operator norms). In finite dimension this always holds; the report
/// documents the margins.
pub fn amenability_functional(
    t: &TraceSpec,
    h: &HomSpec,
    words: &[GenWord],
    tol: f64,
) -> Result<AmenabilityReport> {
    if t.dim() != h.dim() {
        return Err(Error::dim("trace and generator dimensions differ"));
    }
    let mats: Vec<CMatrix> = words.iter().map(|w| word_matrix(h, w)).collect();
    let norms: Vec<f64> = mats.iter().map(operator_norm).collect::<Result<Vec<_>>>()?;

    let mut min_margin = f64::INFINITY;
    let mut worst = None;
    let mut entries = Vec::new();
    let mut pairs_checked = 0usize;
    for (iu, u) in words.iter().enumerate() {
        let rho_u = t.density() * &mats[iu];
        for (iv, v) in words.iter().enumerate() {
            pairs_checked += 1;
            let sigma = trace_prod(&rho_u, &mats[iv]);
            let bound = norms[iu] * norms[iv];
            let margin = bound - sigma.norm();
            if margin < min_margin {
                min_margin = margin;
                worst = Some((iu, iv));
            }
            entries.push(AmenabilityEntry {
                u: u.clone(),
                v: v.clone(),
                sigma: [sigma.re, sigma.im],
                bound,
                margin,
            });
        }
    }
    let table = if pairs_checked <= 400 {
        Some(entries)
    } else {
        None
    };
    Ok(AmenabilityReport {
        tol,
        pairs_checked,
        min_margin,
        worst_u: worst.map(|(iu, _)| words[iu].clone()),
        worst_v: worst.map(|(_, iv)| words[iv].clone()),
        pass: min_margin >= -tol,
        entries: table,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::game::Game;
    use crate::strategy::rank_partition;
    use crate::DEFAULT_TOL;
    use approx::assert_abs_diff_eq;

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

    fn single_question_hom(dim: usize) -> HomSpec {
        HomSpec::new(
            dim,
            vec![computational_pvm(dim, 2)],
            vec![computational_pvm(dim, 2)],
            DEFAULT_TOL,
        )
        .unwrap()
    }

    #[test]
    fn normalized_trace_is_tracial_at_any_length() {
        let t = TraceSpec::normalized_trace(2);
        let h = single_question_hom(2);
        let r = trace_property_check(&t, &h, 4, 1e-12).unwrap();
        assert!(r.pass, "defect {}", r.max_defect);
        assert!(r.max_defect <= 1e-12);
    }

    #[test]
    fn vector_state_defect_appears_at_length_three() {
        // density |0><0|, generators {|0><0|, |1><1|} and {|+><+|, |-><-|}:
        // letter pairs all commute under this functional, but
        // tau(Q+ P0 Q+) = 1/4 differs from tau(P0 Q+ Q+) = 1/2
        let density = CMatrix::from_diag(&[1.0, 0.0]);
        let t = TraceSpec::new(density, DEFAULT_TOL).unwrap();
        let plus = CMatrix::from_fn(2, 2, |_, _| c(0.5));
        let minus = &CMatrix::identity(2) - &plus;
        let h = HomSpec::new(
            2,
            vec![computational_pvm(2, 2)],
            vec![Pvm::new(vec![plus, minus], DEFAULT_TOL).unwrap()],
            DEFAULT_TOL,
        )
        .unwrap();

        let r2 = trace_property_check(&t, &h, 2, 1e-12).unwrap();
        assert!(r2.max_defect <= 1e-14, "length-2 defect {}", r2.max_defect);

        let r3 = trace_property_check(&t, &h, 3, 1e-12).unwrap();
        assert_abs_diff_eq!(r3.max_defect, 0.25, epsilon = 1e-12);
        assert!(!r3.pass);

        // independent oracle: brute-force the worst pair over raw 2x2 floats
        let p0 = [[1.0, 0.0], [0.0, 0.0]];
        let qp = [[0.5, 0.5], [0.5, 0.5]];
        let mul = |a: [[f64; 2]; 2], b: [[f64; 2]; 2]| {
            let mut out = [[0.0; 2]; 2];
            for i in 0..2 {
                for j in 0..2 {
                    for k in 0..2 {
                        out[i][j] += a[i][k] * b[k][j];
                    }
                }
            }
            out
        };
        let uv = mul(qp, mul(p0, qp));
        let vu = mul(mul(p0, qp), qp);
        assert_abs_diff_eq!((uv[0][0] - vu[0][0]).abs(), 0.25, epsilon = 1e-15);
    }

    #[test]
    fn length_one_pairs_never_show_a_defect() {
        let density = CMatrix::from_diag(&[0.7, 0.3]);
        let t = TraceSpec::new(density, DEFAULT_TOL).unwrap();
        let h = single_question_hom(2);
        let r = trace_property_check(&t, &h, 1, 1e-12).unwrap();
        assert_eq!(r.max_defect, 0.0);
    }

    #[test]
    fn trace_correlation_of_normalized_trace_is_diagonal() {
        let t = TraceSpec::normalized_trace(2);
        let h = single_question_hom(2);
        let g = corpus::copy_game();
        let c = correlation_from_trace(&t, &h, &g).unwrap();
        assert_abs_diff_eq!(c.get(0, 0, 0, 0), 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(c.get(0, 0, 0, 1), 0.0, epsilon = 1e-12);
        assert!(c.nonsignalling_report(1e-9).pass);
        assert!(c.perfect_report(&g, 1e-12).unwrap().pass);
    }

    #[test]
    fn marginal_with_trivial_bob() {
        // F = {1}: p(a,0|x,0) = tau(E_a^x)
        let t = TraceSpec::normalized_trace(3);
        let alice = vec![computational_pvm(3, 3)];
        let bob = vec![Pvm::new(vec![CMatrix::identity(3)], DEFAULT_TOL).unwrap()];
        let h = HomSpec::new(3, alice, bob, DEFAULT_TOL).unwrap();
        let g = Game::from_predicate(1, 1, 3, 1, |_, _, _, _| true).unwrap();
        let c = correlation_from_trace(&t, &h, &g).unwrap();
        for a in 0..3 {
            assert_abs_diff_eq!(c.get(0, 0, a, 0), 1.0 / 3.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn vector_state_trace_correlation() {
        // density |0><0| with computational generators: p = [a=0][b=0]
        let t = TraceSpec::new(CMatrix::from_diag(&[1.0, 0.0]), DEFAULT_TOL).unwrap();
        let h = single_question_hom(2);
        let g = corpus::copy_game();
        let c = correlation_from_trace(&t, &h, &g).unwrap();
        assert_eq!(c.get(0, 0, 0, 0), 1.0);
        assert_eq!(c.get(0, 0, 1, 1), 0.0);
    }

    #[test]
    fn gns_of_normalized_trace_is_maximally_entangled() {
        let t = TraceSpec::normalized_trace(2);
        let h = single_question_hom(2);
        let r = gns(&t, &h, 1e-12).unwrap();
        assert_eq!(r.hilbert_dim, 4);
        assert_eq!(r.rank, 2);
        assert!(r.fidelity_defect <= 1e-12);
        // cyclic vector = maximally entangled up to global phase
        let s = 0.5_f64.sqrt();
        let bell = vec![c(s), c(0.0), c(0.0), c(s)];
        let overlap = crate::linalg::inner(r.psi.amplitudes(), &bell).norm();
        assert_abs_diff_eq!(overlap, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn gns_quotients_singular_densities() {
        let t = TraceSpec::new(CMatrix::from_diag(&[1.0, 0.0]), DEFAULT_TOL).unwrap();
        let h = single_question_hom(2);
        let r = gns(&t, &h, 1e-10).unwrap();
        assert_eq!(r.rank, 1);
        assert_eq!(r.hilbert_dim, 2);
        assert!(r.fidelity_defect <= 1e-12);
    }

    #[test]
    fn gns_rep_is_multiplicative_bit_exactly() {
        let t = TraceSpec::normalized_trace(2);
        let h = single_question_hom(2);
        let r = gns(&t, &h, 1e-12).unwrap();
        // left multiplications: rep(u) rep(v) == rep(uv) entry for entry
        let e0 = &r.rep_alice[0][0];
        let f1 = &r.rep_bob[0][1];
        let product_then_lift =
            (h.alice_matrix(0, 0) * h.bob_matrix(0, 1)).kron(&CMatrix::identity(r.rank));
        assert_eq!(&(e0 * f1), &product_then_lift);
    }

    #[test]
    fn realization_round_trip_diagonal_case() {
        // d=3 normalized trace with diagonal PVMs:
        // p(a,b|x,y) = sum_k E_a[k,k] F_b[k,k] / 3
        let t = TraceSpec::normalized_trace(3);
        let h = HomSpec::new(
            3,
            vec![computational_pvm(3, 2)],
            vec![computational_pvm(3, 3)],
            DEFAULT_TOL,
        )
        .unwrap();
        let g = Game::from_predicate(1, 1, 2, 3, |_, _, _, _| true).unwrap();
        let s = tensor_realization(&t, &h, &g).unwrap();
        let realized = correlation_from_tensor(&s, &g).unwrap();
        let direct = correlation_from_trace(&t, &h, &g).unwrap();
        assert!(realized.distance(&direct).unwrap() <= 1e-12);
        let mut oracle = 0.0;
        for k in 0..3 {
            oracle += h.alice_matrix(0, 0)[(k, k)].re * h.bob_matrix(0, 1)[(k, k)].re / 3.0;
        }
        assert_abs_diff_eq!(realized.get(0, 0, 0, 1), oracle, epsilon = 1e-12);
    }

    #[test]
    fn realization_state_is_maximally_entangled_for_uniform_density() {
        let t = TraceSpec::normalized_trace(2);
        let h = single_question_hom(2);
        let g = corpus::copy_game();
        let s = tensor_realization(&t, &h, &g).unwrap();
        let sq = 0.5_f64.sqrt();
        let bell = vec![c(sq), c(0.0), c(0.0), c(sq)];
        let overlap = crate::linalg::inner(s.psi().amplitudes(), &bell).norm();
        assert_abs_diff_eq!(overlap, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn noncommuting_density_is_refused() {
        let density = CMatrix::from_diag(&[0.8, 0.2]);
        let t = TraceSpec::new(density, DEFAULT_TOL).unwrap();
        let plus = CMatrix::from_fn(2, 2, |_, _| c(0.5));
        let minus = &CMatrix::identity(2) - &plus;
        let h = HomSpec::new(
            2,
            vec![Pvm::new(vec![CMatrix::identity(2)], DEFAULT_TOL).unwrap()],
            vec![Pvm::new(vec![plus, minus], DEFAULT_TOL).unwrap()],
            DEFAULT_TOL,
        )
        .unwrap();
        let g = Game::from_predicate(1, 1, 1, 2, |_, _, _, _| true).unwrap();
        let err = tensor_realization(&t, &h, &g).unwrap_err();
        assert!(matches!(err, Error::DensityNotCommuting { .. }));
    }

    #[test]
    fn amenability_margins_are_nonnegative() {
        let t = TraceSpec::normalized_trace(4);
        let h = HomSpec::new(
            4,
            vec![computational_pvm(4, 2)],
            vec![computational_pvm(4, 2)],
            DEFAULT_TOL,
        )
        .unwrap();
        let words = enumerate_gen_words(&h, 2);
        let r = amenability_functional(&t, &h, &words, 1e-10).unwrap();
        assert!(r.pass, "min margin {}", r.min_margin);

        // empty pair: sigma = tau(1) = 1 with bound 1
        let r = amenability_functional(&t, &h, &words[..1], 1e-10).unwrap();
        let entry = &r.entries.as_ref().unwrap()[0];
        assert_abs_diff_eq!(entry.sigma[0], 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(entry.bound, 1.0, epsilon = 1e-12);
        assert!(entry.margin.abs() <= 1e-12);
    }
}
