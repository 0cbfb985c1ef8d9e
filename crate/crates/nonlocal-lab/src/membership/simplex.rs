//! Dense phase-1 simplex with Bland's rule.
//!
//! Solves feasibility of `A x = b, x >= 0` by minimizing the sum of
//! artificial variables. Bland's rule (lowest eligible index enters, ties in
//! the ratio test broken by the lowest basic variable index) prevents
//! cycling and keeps every pivot deterministic.

use crate::error::{Error, Result};

/// Equality-constrained feasibility problem over nonnegative variables.
#[derive(Clone, Debug)]
pub struct LpProblem {
    pub num_vars: usize,
    /// Coefficient rows, each of length `num_vars`.
    pub rows: Vec<Vec<f64>>,
    pub rhs: Vec<f64>,
}

impl LpProblem {
    pub fn new(num_vars: usize) -> Self {
        LpProblem {
            num_vars,
            rows: Vec::new(),
            rhs: Vec::new(),
        }
    }

    pub fn push_row(&mut self, row: Vec<f64>, rhs: f64) {
        debug_assert_eq!(row.len(), self.num_vars);
        self.rows.push(row);
        self.rhs.push(rhs);
    }
}

pub enum Phase1 {
    Feasible(Vec<f64>),
    Infeasible { residual: f64 },
}

/// Feasibility tolerance on the phase-1 objective.
pub const FEASIBILITY_TOL: f64 = 1e-9;
/// Pivot magnitudes below this raise `NumericalInstability`.
pub const PIVOT_TOL: f64 = 1e-12;

pub fn phase_one(lp: &LpProblem) -> Result<Phase1> {
    let m = lp.rows.len();
    let n = lp.num_vars;
    if m == 0 {
        return Ok(Phase1::Feasible(vec![0.0; n]));
    }
    // tableau: n structural + m artificial columns + rhs
    let cols = n + m + 1;
    let mut tab = vec![vec![0.0f64; cols]; m];
    for (i, row) in lp.rows.iter().enumerate() {
        let flip = if lp.rhs[i] < 0.0 { -1.0 } else { 1.0 };
        for (j, &v) in row.iter().enumerate() {
            tab[i][j] = flip * v;
        }
        tab[i][n + i] = 1.0;
        tab[i][cols - 1] = flip * lp.rhs[i];
    }
    let mut basis: Vec<usize> = (n..n + m).collect();

    // objective row for minimizing the artificial sum, expressed in reduced
    // costs: z_j = -sum_i tab[i][j] for structural columns
    let mut obj = vec![0.0f64; cols];
    for row in tab.iter() {
        for (j, cell) in obj.iter_mut().enumerate() {
            *cell -= row[j];
        }
    }
    for j in n..n + m {
        obj[j] = 0.0;
    }

    loop {
        // Bland: first column with a negative reduced cost
        let entering = (0..n + m).find(|&j| obj[j] < -FEASIBILITY_TOL);
        let entering = match entering {
            Some(j) => j,
            None => break,
        };
        // ratio test with lowest-basic-index tie break
        let mut leaving: Option<(usize, f64)> = None;
        for i in 0..m {
            let a = tab[i][entering];
            if a > PIVOT_TOL {
                let ratio = tab[i][cols - 1] / a;
                match leaving {
                    None => leaving = Some((i, ratio)),
                    Some((best_i, best_r)) => {
                        if ratio < best_r - 1e-12
                            || ((ratio - best_r).abs() <= 1e-12 && basis[i] < basis[best_i])
                        {
                            leaving = Some((i, ratio));
                        }
                    }
                }
            }
        }
        let (pivot_row, _) = leaving.ok_or_else(|| Error::NumericalInstability {
            context: "phase-1 objective unbounded below".into(),
        })?;
        let pivot = tab[pivot_row][entering];
        if pivot.abs() < PIVOT_TOL {
            return Err(Error::NumericalInstability {
                context: format!("pivot magnitude {pivot:.3e} below 1e-12"),
            });
        }
        // eliminate
        let inv = 1.0 / pivot;
        for v in tab[pivot_row].iter_mut() {
            *v *= inv;
        }
        for i in 0..m {
            if i == pivot_row {
                continue;
            }
            let factor = tab[i][entering];
            if factor != 0.0 {
                let (pr, ri) = if i < pivot_row {
                    let (a, b) = tab.split_at_mut(pivot_row);
                    (&b[0], &mut a[i])
                } else {
                    let (a, b) = tab.split_at_mut(i);
                    (&a[pivot_row], &mut b[0])
                };
                for (cell, pv) in ri.iter_mut().zip(pr.iter()) {
                    *cell -= factor * pv;
                }
            }
        }
        let factor = obj[entering];
        if factor != 0.0 {
            for (cell, pv) in obj.iter_mut().zip(tab[pivot_row].iter()) {
                *cell -= factor * pv;
            }
        }
        basis[pivot_row] = entering;
    }

    // phase-1 objective value = sum of artificial basics
    let mut residual = 0.0;
    for i in 0..m {
        if basis[i] >= n {
            residual += tab[i][cols - 1];
        }
    }
    if residual.abs() > FEASIBILITY_TOL {
        return Ok(Phase1::Infeasible { residual });
    }
    let mut x = vec![0.0f64; n];
    for i in 0..m {
        if basis[i] < n {
            x[basis[i]] = tab[i][cols - 1];
        }
    }
    Ok(Phase1::Feasible(x))
}
