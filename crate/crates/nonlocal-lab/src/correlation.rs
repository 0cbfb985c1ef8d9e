//! Conditional-probability tensors p(a,b|x,y) and their membership predicates.
//!
//! Predicates return reports carrying the worst witness rather than bare
//! booleans, so failures are debuggable and tests can assert on magnitudes.
//!
//! Wire format: shape fields plus a flat row-major `p` array, index order
//! (x, y, a, b), and the validation tolerance.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::{Game, Side};

#[derive(Clone, Debug)]
pub struct Correlation {
    x_count: usize,
    y_count: usize,
    a_count: usize,
    b_count: usize,
    p: Vec<f64>,
    tol: f64,
}

impl Serialize for Correlation {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut s = serializer.serialize_struct("Correlation", 6)?;
        s.serialize_field("x", &self.x_count)?;
        s.serialize_field("y", &self.y_count)?;
        s.serialize_field("a", &self.a_count)?;
        s.serialize_field("b", &self.b_count)?;
        s.serialize_field("p", &self.p)?;
        s.serialize_field("tol", &self.tol)?;
        s.end()
    }
}

impl Correlation {
    /// Validates entry bounds (within `[-tol, 1+tol]`) and per-(x,y)
    /// normalization. Entries are stored as given, never clamped.
    pub fn new(
        x_count: usize,
        y_count: usize,
        a_count: usize,
        b_count: usize,
        p: Vec<f64>,
        tol: f64,
    ) -> Result<Self> {
        if x_count == 0 || y_count == 0 || a_count == 0 || b_count == 0 {
            return Err(Error::EmptySet {
                what: "correlation index set",
            });
        }
        let expected = x_count * y_count * a_count * b_count;
        if p.len() != expected {
            return Err(Error::dim(format!(
                "correlation has {} entries, expected {}",
                p.len(),
                expected
            )));
        }
        let c = Correlation {
            x_count,
            y_count,
            a_count,
            b_count,
            p,
            tol,
        };
        for (i, &v) in c.p.iter().enumerate() {
            if !(-tol..=1.0 + tol).contains(&v) {
                return Err(Error::RangeError {
                    context: format!("probability entry {i} = {v} outside [-tol, 1+tol]"),
                });
            }
        }
        for x in 0..x_count {
            for y in 0..y_count {
                let sum: f64 = c.slice_sum(x, y);
                if (sum - 1.0).abs() > tol {
                    return Err(Error::RangeError {
                        context: format!("slice (x={x}, y={y}) sums to {sum}, expected 1"),
                    });
                }
            }
        }
        Ok(c)
    }

    fn index(&self, x: usize, y: usize, a: usize, b: usize) -> usize {
        ((x * self.y_count + y) * self.a_count + a) * self.b_count + b
    }

    pub fn get(&self, x: usize, y: usize, a: usize, b: usize) -> f64 {
        self.p[self.index(x, y, a, b)]
    }

    fn slice_sum(&self, x: usize, y: usize) -> f64 {
        let mut s = 0.0;
        for a in 0..self.a_count {
            for b in 0..self.b_count {
                s += self.get(x, y, a, b);
            }
        }
        s
    }

    pub fn x_count(&self) -> usize {
        self.x_count
    }

    pub fn y_count(&self) -> usize {
        self.y_count
    }

    pub fn a_count(&self) -> usize {
        self.a_count
    }

    pub fn b_count(&self) -> usize {
        self.b_count
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn entries(&self) -> &[f64] {
        &self.p
    }

    pub fn shape_matches(&self, g: &Game) -> bool {
        self.x_count == g.x_count()
            && self.y_count == g.y_count()
            && self.a_count == g.a_count()
            && self.b_count == g.b_count()
    }

    fn ensure_shape(&self, g: &Game) -> Result<()> {
        if self.shape_matches(g) {
            Ok(())
        } else {
            Err(Error::dim("correlation shape does not match the game"))
        }
    }

    /// Alice marginal sum over b for fixed (x, a, y).
    pub fn alice_marginal(&self, x: usize, a: usize, y: usize) -> f64 {
        (0..self.b_count).map(|b| self.get(x, y, a, b)).sum()
    }

    /// Bob marginal sum over a for fixed (y, b, x).
    pub fn bob_marginal(&self, y: usize, b: usize, x: usize) -> f64 {
        (0..self.a_count).map(|a| self.get(x, y, a, b)).sum()
    }

    /// Marginal-independence check: Alice's marginals must not depend on y,
    /// Bob's must not depend on x, each within `tol`.
    pub fn nonsignalling_report(&self, tol: f64) -> NonSignallingReport {
        let mut worst: Option<MarginalWitness> = None;
        let mut max_disc = 0.0f64;
        for x in 0..self.x_count {
            for a in 0..self.a_count {
                let base = self.alice_marginal(x, a, 0);
                for y in 1..self.y_count {
                    let disc = (self.alice_marginal(x, a, y) - base).abs();
                    if disc > max_disc {
                        max_disc = disc;
                        worst = Some(MarginalWitness {
                            side: Side::Alice,
                            question: x,
                            answer: a,
                            other_question_first: 0,
                            other_question_second: y,
                            discrepancy: disc,
                        });
                    }
                }
            }
        }
        for y in 0..self.y_count {
            for b in 0..self.b_count {
                let base = self.bob_marginal(y, b, 0);
                for x in 1..self.x_count {
                    let disc = (self.bob_marginal(y, b, x) - base).abs();
                    if disc > max_disc {
                        max_disc = disc;
                        worst = Some(MarginalWitness {
                            side: Side::Bob,
                            question: y,
                            answer: b,
                            other_question_first: 0,
                            other_question_second: x,
                            discrepancy: disc,
                        });
                    }
                }
            }
        }
        NonSignallingReport {
            pass: max_disc <= tol,
            tol,
            max_discrepancy: max_disc,
            worst,
        }
    }

    /// Perfection check: p must vanish wherever the game scores 0.
    pub fn perfect_report(&self, g: &Game, tol: f64) -> Result<PerfectReport> {
        self.ensure_shape(g)?;
        let mut max_violation = 0.0f64;
        let mut worst = None;
        for (x, y, a, b) in g.zero_support() {
            let v = self.get(x, y, a, b);
            if v > max_violation {
                max_violation = v;
                worst = Some([x, y, a, b]);
            }
        }
        Ok(PerfectReport {
            pass: max_violation <= tol,
            tol,
            max_violation,
            worst,
        })
    }

    /// The exact maximum of p over the zero support (0 on empty support).
    pub fn epsilon_violation(&self, g: &Game) -> Result<f64> {
        self.ensure_shape(g)?;
        Ok(g.zero_support()
            .into_iter()
            .map(|(x, y, a, b)| self.get(x, y, a, b))
            .fold(0.0, f64::max))
    }

    /// Sup-norm distance between two correlations of the same shape.
    pub fn distance(&self, other: &Correlation) -> Result<f64> {
        if (self.x_count, self.y_count, self.a_count, self.b_count)
            != (other.x_count, other.y_count, other.a_count, other.b_count)
        {
            return Err(Error::dim("correlation shapes differ"));
        }
        Ok(self
            .p
            .iter()
            .zip(other.p.iter())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max))
    }

    /// Winning probability under uniform question weights.
    pub fn winning_probability(&self, g: &Game) -> Result<f64> {
        self.ensure_shape(g)?;
        let mut total = 0.0;
        for x in 0..self.x_count {
            for y in 0..self.y_count {
                for a in 0..self.a_count {
                    for b in 0..self.b_count {
                        if g.win(x, y, a, b) {
                            total += self.get(x, y, a, b);
                        }
                    }
                }
            }
        }
        Ok(total / (self.x_count * self.y_count) as f64)
    }
}

impl<'de> Deserialize<'de> for Correlation {
    fn deserialize<D: serde::Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Wire {
            x: usize,
            y: usize,
            a: usize,
            b: usize,
            p: Vec<f64>,
            tol: f64,
        }
        let w = Wire::deserialize(deserializer)?;
        Correlation::new(w.x, w.y, w.a, w.b, w.p, w.tol).map_err(serde::de::Error::custom)
    }
}

impl Correlation {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("correlation serialization")
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MarginalWitness {
    pub side: Side,
    pub question: usize,
    pub answer: usize,
    /// The two other-player questions whose marginals disagree.
    pub other_question_first: usize,
    pub other_question_second: usize,
    pub discrepancy: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct NonSignallingReport {
    pub pass: bool,
    pub tol: f64,
    pub max_discrepancy: f64,
    pub worst: Option<MarginalWitness>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PerfectReport {
    pub pass: bool,
    pub tol: f64,
    pub max_violation: f64,
    /// Zero-support index (x, y, a, b) attaining the maximum.
    pub worst: Option<[usize; 4]>,
}
