//! Hermitian eigendecomposition by cyclic complex Jacobi rotations.
//!
//! The sweep order over index pairs is fixed and there is no pivot search,
//! so the decomposition is deterministic for a fixed input. Eigenvalues come
//! out ascending (ties broken by original index) and each eigenvector is
//! phase-fixed so that its largest-magnitude entry is real and positive.

use num_complex::Complex64 as C64;

use super::matrix::{CMatrix, ZERO};
use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 100;

pub struct Eigh {
    /// Eigenvalues, ascending.
    pub values: Vec<f64>,
    /// Eigenvectors as columns, matching `values`.
    pub vectors: CMatrix,
}

impl Eigh {
    /// Column `k` as a vector.
    pub fn vector(&self, k: usize) -> Vec<C64> {
        (0..self.vectors.rows())
            .map(|i| self.vectors[(i, k)])
            .collect()
    }

    /// Sum of `|v><v|` over the selected eigenpairs.
    pub fn spectral_projector(&self, select: impl Fn(f64) -> bool) -> CMatrix {
        let n = self.vectors.rows();
        let mut p = CMatrix::zeros(n, n);
        for (k, &lambda) in self.values.iter().enumerate() {
            if !select(lambda) {
                continue;
            }
            let v = self.vector(k);
            for i in 0..n {
                for j in 0..n {
                    p[(i, j)] += v[i] * v[j].conj();
                }
            }
        }
        p
    }
}

/// Eigendecomposition of the Hermitian part `(m + m*)/2`.
pub fn eigh(m: &CMatrix) -> Result<Eigh> {
    if !m.is_square() {
        return Err(Error::dim("eigendecomposition requires a square matrix"));
    }
    let n = m.rows();
    let mut a: Vec<C64> = (0..n * n)
        .map(|idx| {
            let (i, j) = (idx / n, idx % n);
            (m[(i, j)] + m[(j, i)].conj()) * 0.5
        })
        .collect();
    let mut v: Vec<C64> = vec![ZERO; n * n];
    for i in 0..n {
        v[i * n + i] = C64::new(1.0, 0.0);
    }

    let scale: f64 = a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if scale > 0.0 {
        let stop = 1e-14 * scale;
        let skip = 1e-18 * scale;
        let mut converged = false;
        for _ in 0..MAX_SWEEPS {
            let off: f64 = off_diagonal_norm(&a, n);
            if off <= stop {
                converged = true;
                break;
            }
            for p in 0..n {
                for q in (p + 1)..n {
                    rotate(&mut a, &mut v, n, p, q, skip);
                }
            }
        }
        if !converged && off_diagonal_norm(&a, n) > stop {
            return Err(Error::NumericalInstability {
                context: "Jacobi eigendecomposition did not converge".into(),
            });
        }
    }

    // sort ascending, stable in the original index
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        a[i * n + i]
            .re
            .partial_cmp(&a[j * n + j].re)
            .unwrap()
            .then(i.cmp(&j))
    });
    let values: Vec<f64> = order.iter().map(|&k| a[k * n + k].re).collect();
    let mut vectors = CMatrix::zeros(n, n);
    for (col, &k) in order.iter().enumerate() {
        // phase convention: largest-magnitude entry real positive
        let mut best = 0usize;
        let mut best_mag = 0.0f64;
        for i in 0..n {
            let mag = v[i * n + k].norm();
            if mag > best_mag {
                best_mag = mag;
                best = i;
            }
        }
        let phase = if best_mag > 0.0 {
            let z = v[best * n + k];
            z.conj() / z.norm()
        } else {
            C64::new(1.0, 0.0)
        };
        for i in 0..n {
            vectors[(i, col)] = v[i * n + k] * phase;
        }
    }

    Ok(Eigh { values, vectors })
}

fn off_diagonal_norm(a: &[C64], n: usize) -> f64 {
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[i * n + j].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// One complex Jacobi rotation zeroing `a[p][q]`, accumulated into `v`.
fn rotate(a: &mut [C64], v: &mut [C64], n: usize, p: usize, q: usize, skip: f64) {
    let apq = a[p * n + q];
    let r = apq.norm();
    if r <= skip {
        return;
    }
    let u = apq / r; // phase of the off-diagonal entry
    let app = a[p * n + p].re;
    let aqq = a[q * n + q].re;
    let tau = (aqq - app) / (2.0 * r);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        1.0 / (tau - (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;

    // J = [[c, s*u], [-s*conj(u), c]] acting on columns (p, q)
    let su = u * s;
    let suc = u.conj() * s;

    // A <- A J
    for k in 0..n {
        let akp = a[k * n + p];
        let akq = a[k * n + q];
        a[k * n + p] = akp * c - akq * suc;
        a[k * n + q] = akp * su + akq * c;
    }
    // A <- J^H A
    for k in 0..n {
        let apk = a[p * n + k];
        let aqk = a[q * n + k];
        a[p * n + k] = apk * c - aqk * su;
        a[q * n + k] = apk * suc + aqk * c;
    }
    // clean the pivot pair
    a[p * n + q] = ZERO;
    a[q * n + p] = ZERO;
    a[p * n + p] = C64::new(a[p * n + p].re, 0.0);
    a[q * n + q] = C64::new(a[q * n + q].re, 0.0);

    // V <- V J
    for k in 0..n {
        let vkp = v[k * n + p];
        let vkq = v[k * n + q];
        v[k * n + p] = vkp * c - vkq * suc;
        v[k * n + q] = vkp * su + vkq * c;
    }
}

/// Largest singular value, computed from the top eigenvalue of `m* m`.
pub fn operator_norm(m: &CMatrix) -> Result<f64> {
    let gram = &m.adjoint() * m;
    let e = eigh(&gram)?;
    Ok(e.values.last().copied().unwrap_or(0.0).max(0.0).sqrt())
}

/// Square root of a positive semidefinite matrix; eigenvalues below
/// `-tol` are rejected, small negatives are clamped to zero.
pub fn sqrt_psd(m: &CMatrix, tol: f64) -> Result<CMatrix> {
    let e = eigh(m)?;
    if let Some(&lambda) = e.values.first() {
        if lambda < -tol {
            return Err(Error::NumericalInstability {
                context: format!("matrix is not positive semidefinite: eigenvalue {lambda:.3e}"),
            });
        }
    }
    let n = m.rows();
    let mut out = CMatrix::zeros(n, n);
    for (k, &lambda) in e.values.iter().enumerate() {
        let root = lambda.max(0.0).sqrt();
        if root == 0.0 {
            continue;
        }
        let v = e.vector(k);
        for i in 0..n {
            for j in 0..n {
                out[(i, j)] += v[i] * v[j].conj() * root;
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::matrix::{inner, ONE};
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn diagonal_matrix_sorted() {
        let m = CMatrix::from_diag(&[3.0, -1.0, 2.0]);
        let e = eigh(&m).unwrap();
        assert_eq!(e.values, vec![-1.0, 2.0, 3.0]);
    }

    #[test]
    fn two_projector_sum_matches_closed_form() {
        // eigenvalues of |0><0| + |+><+| are 1 ± 1/sqrt(2)
        let p0 = CMatrix::from_diag(&[1.0, 0.0]);
        let plus = CMatrix::from_fn(2, 2, |_, _| c(0.5, 0.0));
        let e = eigh(&(&p0 + &plus)).unwrap();
        let lo = 1.0 - 0.5_f64.sqrt();
        let hi = 1.0 + 0.5_f64.sqrt();
        assert_abs_diff_eq!(e.values[0], lo, epsilon = 1e-14);
        assert_abs_diff_eq!(e.values[1], hi, epsilon = 1e-14);
    }

    #[test]
    fn reconstruction_and_orthonormality() {
        // fixed complex Hermitian test matrix
        let h = CMatrix::from_rows(vec![
            vec![c(2.0, 0.0), c(0.3, -0.7), c(-1.1, 0.2)],
            vec![c(0.3, 0.7), c(-0.5, 0.0), c(0.0, 0.9)],
            vec![c(-1.1, -0.2), c(0.0, -0.9), c(1.25, 0.0)],
        ])
        .unwrap();
        let e = eigh(&h).unwrap();
        let n = 3;
        // V diag(w) V* == H
        let mut rec = CMatrix::zeros(n, n);
        for k in 0..n {
            let v = e.vector(k);
            for i in 0..n {
                for j in 0..n {
                    rec[(i, j)] += v[i] * v[j].conj() * e.values[k];
                }
            }
        }
        assert!((&rec - &h).fro_norm() < 1e-12);
        for k in 0..n {
            for l in 0..n {
                let ip = inner(&e.vector(k), &e.vector(l));
                let expect = if k == l { 1.0 } else { 0.0 };
                assert_abs_diff_eq!(ip.re, expect, epsilon = 1e-12);
                assert_abs_diff_eq!(ip.im, 0.0, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn converges_on_larger_seeded_matrices() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(31);
        for n in [8usize, 16] {
            let z = CMatrix::from_fn(n, n, |_, _| {
                crate::linalg::random::complex_gaussian(&mut rng)
            });
            let h = &z + &z.adjoint();
            let e = eigh(&h).unwrap();
            let mut rec = CMatrix::zeros(n, n);
            for k in 0..n {
                let v = e.vector(k);
                for i in 0..n {
                    for j in 0..n {
                        rec[(i, j)] += v[i] * v[j].conj() * e.values[k];
                    }
                }
            }
            let rel = (&rec - &h).fro_norm() / h.fro_norm();
            assert!(rel < 1e-13, "n={n}: relative residual {rel:.3e}");
        }
    }

    #[test]
    fn deterministic_for_fixed_input() {
        let h = CMatrix::from_rows(vec![
            vec![c(0.0, 0.0), c(0.25, -0.5)],
            vec![c(0.25, 0.5), c(1.0, 0.0)],
        ])
        .unwrap();
        let e1 = eigh(&h).unwrap();
        let e2 = eigh(&h).unwrap();
        assert_eq!(e1.values, e2.values);
        assert_eq!(e1.vectors, e2.vectors);
    }

    #[test]
    fn operator_norm_of_projector_is_one() {
        let plus = CMatrix::from_fn(2, 2, |_, _| c(0.5, 0.0));
        assert_abs_diff_eq!(operator_norm(&plus).unwrap(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn sqrt_psd_squares_back() {
        let m = CMatrix::from_rows(vec![
            vec![c(1.0, 0.0), c(0.5, 0.0)],
            vec![c(0.5, 0.0), c(1.0, 0.0)],
        ])
        .unwrap();
        let r = sqrt_psd(&m, 1e-12).unwrap();
        assert!((&(&r * &r) - &m).fro_norm() < 1e-13);
        let _ = ONE;
    }
}
