//! Finite nonlocal games and their classification.
//!
//! A game is a 0/1 scoring tensor over (question pair, answer pair). All
//! classification here is exact integer logic; no floating point enters.
//!
//! Wire format: `{"x":.., "y":.., "a":.., "b":.., "win":[[x,y,a,b], ...]}`
//! where `win` lists the tuples with score 1 in lexicographic order.

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Which player a report entry refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    Alice,
    Bob,
}

/// A nonlocal game: question/answer set sizes and the dense scoring tensor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Game {
    x_count: usize,
    y_count: usize,
    a_count: usize,
    b_count: usize,
    lambda: Vec<bool>,
}

impl Game {
    pub fn new(
        x_count: usize,
        y_count: usize,
        a_count: usize,
        b_count: usize,
        lambda: Vec<bool>,
    ) -> Result<Self> {
        let g = Game {
            x_count,
            y_count,
            a_count,
            b_count,
            lambda,
        };
        g.validate()?;
        Ok(g)
    }

    pub fn from_predicate(
        x_count: usize,
        y_count: usize,
        a_count: usize,
        b_count: usize,
        mut win: impl FnMut(usize, usize, usize, usize) -> bool,
    ) -> Result<Self> {
        let mut lambda = Vec::with_capacity(x_count * y_count * a_count * b_count);
        for x in 0..x_count {
            for y in 0..y_count {
                for a in 0..a_count {
                    for b in 0..b_count {
                        lambda.push(win(x, y, a, b));
                    }
                }
            }
        }
        Game::new(x_count, y_count, a_count, b_count, lambda)
    }

    /// Densify a sparse list of winning tuples.
    pub fn from_win_tuples(
        x_count: usize,
        y_count: usize,
        a_count: usize,
        b_count: usize,
        win: &[(usize, usize, usize, usize)],
    ) -> Result<Self> {
        let mut g = Game::new(
            x_count,
            y_count,
            a_count,
            b_count,
            vec![false; x_count * y_count * a_count * b_count],
        )?;
        for &(x, y, a, b) in win {
            if x >= x_count || y >= y_count || a >= a_count || b >= b_count {
                return Err(Error::RangeError {
                    context: format!("winning tuple ({x},{y},{a},{b}) out of range"),
                });
            }
            let idx = g.index(x, y, a, b);
            g.lambda[idx] = true;
        }
        Ok(g)
    }

    /// Re-checks the structural invariants.
    pub fn validate(&self) -> Result<()> {
        for (name, count) in [
            ("X", self.x_count),
            ("Y", self.y_count),
            ("A", self.a_count),
            ("B", self.b_count),
        ] {
            if count == 0 {
                return Err(Error::EmptySet {
                    what: match name {
                        "X" => "question set X",
                        "Y" => "question set Y",
                        "A" => "answer set A",
                        _ => "answer set B",
                    },
                });
            }
        }
        let expected = self.x_count * self.y_count * self.a_count * self.b_count;
        if self.lambda.len() != expected {
            return Err(Error::dim(format!(
                "scoring tensor has {} entries, expected {}",
                self.lambda.len(),
                expected
            )));
        }
        Ok(())
    }

    fn index(&self, x: usize, y: usize, a: usize, b: usize) -> usize {
        ((x * self.y_count + y) * self.a_count + a) * self.b_count + b
    }

    pub fn win(&self, x: usize, y: usize, a: usize, b: usize) -> bool {
        self.lambda[self.index(x, y, a, b)]
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

    /// All indices with score 0, in lexicographic order.
    pub fn zero_support(&self) -> Vec<(usize, usize, usize, usize)> {
        let mut out = Vec::new();
        for x in 0..self.x_count {
            for y in 0..self.y_count {
                for a in 0..self.a_count {
                    for b in 0..self.b_count {
                        if !self.win(x, y, a, b) {
                            out.push((x, y, a, b));
                        }
                    }
                }
            }
        }
        out
    }

    /// Whether question `y` separates Alice answers `a != a'` at `x`:
    /// no Bob answer wins with both.
    fn y_separates(&self, x: usize, a: usize, a2: usize, y: usize) -> bool {
        (0..self.b_count).all(|b| !(self.win(x, y, a, b) && self.win(x, y, a2, b)))
    }

    fn x_separates(&self, y: usize, b: usize, b2: usize, x: usize) -> bool {
        (0..self.a_count).all(|a| !(self.win(x, y, a, b) && self.win(x, y, a, b2)))
    }

    /// Imitation classification: every pair of distinct answers of one player
    /// must be separated by some question to the other player.
    pub fn imitation_report(&self) -> ImitationReport {
        let mut a_violations = Vec::new();
        for x in 0..self.x_count {
            for a in 0..self.a_count {
                for a2 in (a + 1)..self.a_count {
                    if !(0..self.y_count).any(|y| self.y_separates(x, a, a2, y)) {
                        a_violations.push((x, a, a2));
                    }
                }
            }
        }
        let mut b_violations = Vec::new();
        for y in 0..self.y_count {
            for b in 0..self.b_count {
                for b2 in (b + 1)..self.b_count {
                    if !(0..self.x_count).any(|x| self.x_separates(y, b, b2, x)) {
                        b_violations.push((y, b, b2));
                    }
                }
            }
        }
        ImitationReport {
            is_imitation: a_violations.is_empty() && b_violations.is_empty(),
            a_violations,
            b_violations,
        }
    }

    pub fn is_imitation(&self) -> bool {
        self.imitation_report().is_imitation
    }

    /// For a Bob answer pair `b != b'` at `y`, the questions `x` that
    /// separate them. Used by the induced-projection constructions.
    pub fn separating_x(&self, y: usize, b: usize, b2: usize) -> Vec<usize> {
        (0..self.x_count)
            .filter(|&x| self.x_separates(y, b, b2, x))
            .collect()
    }

    pub fn separating_y(&self, x: usize, a: usize, a2: usize) -> Vec<usize> {
        (0..self.y_count)
            .filter(|&y| self.y_separates(x, a, a2, y))
            .collect()
    }

    /// The role-swapped game: X<->Y, A<->B, scoring transposed.
    pub fn transposed(&self) -> Game {
        Game::from_predicate(
            self.y_count,
            self.x_count,
            self.b_count,
            self.a_count,
            |y, x, b, a| self.win(x, y, a, b),
        )
        .expect("transposition preserves validity")
    }

    /// Relabel questions and answers by permutations.
    pub fn permuted(
        &self,
        perm_x: &[usize],
        perm_y: &[usize],
        perm_a: &[usize],
        perm_b: &[usize],
    ) -> Result<Game> {
        if perm_x.len() != self.x_count
            || perm_y.len() != self.y_count
            || perm_a.len() != self.a_count
            || perm_b.len() != self.b_count
        {
            return Err(Error::dim("permutation lengths must match set sizes"));
        }
        Game::from_predicate(
            self.x_count,
            self.y_count,
            self.a_count,
            self.b_count,
            |x, y, a, b| self.win(perm_x[x], perm_y[y], perm_a[a], perm_b[b]),
        )
    }
}

/// Result of the imitation classification, with explicit violation witnesses.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct ImitationReport {
    pub is_imitation: bool,
    /// Triples (x, a, a') with a < a' that no y separates.
    pub a_violations: Vec<(usize, usize, usize)>,
    /// Triples (y, b, b') with b < b' that no x separates.
    pub b_violations: Vec<(usize, usize, usize)>,
}

impl ImitationReport {
    /// Error naming the first violation, if any.
    pub fn ensure_imitation(&self) -> Result<()> {
        if let Some(&(x, a, a2)) = self.a_violations.first() {
            return Err(Error::NotImitation {
                side: Side::Alice,
                question: x,
                first: a,
                second: a2,
            });
        }
        if let Some(&(y, b, b2)) = self.b_violations.first() {
            return Err(Error::NotImitation {
                side: Side::Bob,
                question: y,
                first: b,
                second: b2,
            });
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct GameWire {
    x: usize,
    y: usize,
    a: usize,
    b: usize,
    win: Vec<[usize; 4]>,
}

impl Serialize for Game {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut win = Vec::new();
        for x in 0..self.x_count {
            for y in 0..self.y_count {
                for a in 0..self.a_count {
                    for b in 0..self.b_count {
                        if self.win(x, y, a, b) {
                            win.push([x, y, a, b]);
                        }
                    }
                }
            }
        }
        GameWire {
            x: self.x_count,
            y: self.y_count,
            a: self.a_count,
            b: self.b_count,
            win,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Game {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let wire = GameWire::deserialize(deserializer)?;
        let tuples: Vec<(usize, usize, usize, usize)> =
            wire.win.iter().map(|t| (t[0], t[1], t[2], t[3])).collect();
        Game::from_win_tuples(wire.x, wire.y, wire.a, wire.b, &tuples).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    #[test]
    fn copy_game_is_valid_and_imitation() {
        let g = corpus::copy_game();
        assert!(g.validate().is_ok());
        // for a != a' the winning b-sets {a} and {a'} are disjoint
        assert!(g.is_imitation());
    }

    #[test]
    fn wrong_tensor_size_is_rejected() {
        let err = Game::new(1, 1, 2, 2, vec![false; 3]).unwrap_err();
        assert!(matches!(err, Error::DimensionMismatch { .. }));
    }

    #[test]
    fn empty_answer_set_is_rejected() {
        let err = Game::new(1, 1, 0, 2, vec![]).unwrap_err();
        assert!(matches!(err, Error::EmptySet { .. }));
    }

    #[test]
    fn all_ones_game_violates_everywhere() {
        let g = corpus::all_game();
        let report = g.imitation_report();
        assert!(!report.is_imitation);
        // every (x, a<a') pair fails: each sum is |B| = 2 > 0
        assert_eq!(report.a_violations, vec![(0, 0, 1), (1, 0, 1)]);
        assert_eq!(report.b_violations, vec![(0, 0, 1), (1, 0, 1)]);
    }

    #[test]
    fn chsh_is_imitation() {
        // the winning b for (x, y, a) is a xor x*y, distinct for a != a'
        assert!(corpus::chsh_game().is_imitation());
    }

    #[test]
    fn zero_support_examples() {
        assert_eq!(
            corpus::copy_game().zero_support(),
            vec![(0, 0, 0, 1), (0, 0, 1, 0)]
        );
        assert!(corpus::all_game().zero_support().is_empty());
        assert_eq!(corpus::none_game().zero_support(), vec![(0, 0, 0, 0)]);
    }

    #[test]
    fn zero_support_counts_zeros_exactly() {
        let g = corpus::chsh_game();
        let zeros = g.zero_support().len();
        let total = 2 * 2 * 2 * 2;
        let wins = (0..2)
            .flat_map(|x| (0..2).map(move |y| (x, y)))
            .map(|(x, y)| {
                (0..2)
                    .flat_map(|a| (0..2).map(move |b| (a, b)))
                    .filter(|&(a, b)| g.win(x, y, a, b))
                    .count()
            })
            .sum::<usize>();
        assert_eq!(zeros + wins, total);
    }

    #[test]
    fn transposition_swaps_violation_lists() {
        let g = corpus::all_game();
        let r = g.imitation_report();
        let rt = g.transposed().imitation_report();
        assert_eq!(r.a_violations, rt.b_violations);
        assert_eq!(r.b_violations, rt.a_violations);
    }

    #[test]
    fn game_json_round_trips_bit_exactly() {
        let g = corpus::chsh_game();
        let text = serde_json::to_string(&g).unwrap();
        let back: Game = serde_json::from_str(&text).unwrap();
        assert_eq!(g, back);
        assert_eq!(serde_json::to_string(&back).unwrap(), text);
    }

    #[test]
    fn out_of_range_win_tuple_rejected() {
        let bad = r#"{"x":1,"y":1,"a":2,"b":2,"win":[[0,0,2,0]]}"#;
        assert!(serde_json::from_str::<Game>(bad).is_err());
    }
}
