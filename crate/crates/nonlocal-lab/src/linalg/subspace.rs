//! Cyclic subspaces: the closure of an orbit of a vector under a generator set.

use num_complex::Complex64 as C64;

use super::matrix::{inner, norm2, CMatrix};
use super::projection::StateVector;
use crate::error::{Error, Result};

/// An orthonormal basis for the smallest generator-invariant subspace
/// containing the seed vector.
#[derive(Clone, Debug)]
pub struct CyclicSubspace {
    ambient_dim: usize,
    basis: Vec<Vec<C64>>,
}

impl CyclicSubspace {
    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<C64>] {
        &self.basis
    }

    /// The orthogonal projector onto the subspace.
    pub fn projector(&self) -> CMatrix {
        let mut p = CMatrix::zeros(self.ambient_dim, self.ambient_dim);
        for v in &self.basis {
            for i in 0..self.ambient_dim {
                for j in 0..self.ambient_dim {
                    p[(i, j)] += v[i] * v[j].conj();
                }
            }
        }
        p
    }

    /// Compression `V* M V` of an ambient operator to the basis.
    pub fn compress(&self, m: &CMatrix) -> CMatrix {
        let k = self.dim();
        let mut out = CMatrix::zeros(k.max(1), k.max(1));
        for (a, va) in self.basis.iter().enumerate() {
            for (b, vb) in self.basis.iter().enumerate() {
                out[(a, b)] = inner(va, &m.apply(vb));
            }
        }
        out
    }

    /// Coordinates of an ambient vector in the basis.
    pub fn coordinates(&self, v: &[C64]) -> Vec<C64> {
        self.basis.iter().map(|b| inner(b, v)).collect()
    }
}

/// Iterative closure: start from the seed, apply every generator to every
/// basis vector, orthonormalize with two-pass modified Gram-Schmidt, and drop
/// candidates whose residual norm falls below `tol`. Terminates because the
/// dimension is bounded by the ambient dimension and strictly increases in
/// every productive round.
pub fn cyclic_subspace(gens: &[CMatrix], psi: &StateVector, tol: f64) -> Result<CyclicSubspace> {
    let dim = psi.dim();
    for g in gens {
        if !g.is_square() || g.rows() != dim {
            return Err(Error::dim(format!(
                "generator is {}x{}, ambient dimension is {}",
                g.rows(),
                g.cols(),
                dim
            )));
        }
    }
    let seed = norm_exact(psi.amplitudes());
    let mut basis: Vec<Vec<C64>> = vec![seed];
    loop {
        let start_len = basis.len();
        for g in gens {
            for idx in 0..start_len {
                let candidate = g.apply(&basis[idx]);
                if let Some(v) = orthonormalize_against(&basis, candidate, tol) {
                    basis.push(v);
                }
            }
        }
        if basis.len() == start_len || basis.len() >= dim {
            break;
        }
    }
    Ok(CyclicSubspace {
        ambient_dim: dim,
        basis,
    })
}

fn norm_exact(v: &[C64]) -> Vec<C64> {
    let n = norm2(v);
    v.iter().map(|z| z / n).collect()
}

fn orthonormalize_against(basis: &[Vec<C64>], mut w: Vec<C64>, tol: f64) -> Option<Vec<C64>> {
    for _ in 0..2 {
        for b in basis {
            let c = inner(b, &w);
            for (wi, bi) in w.iter_mut().zip(b.iter()) {
                *wi -= c * bi;
            }
        }
    }
    let n = norm2(&w);
    if n < tol {
        return None;
    }
    Some(w.into_iter().map(|z| z / n).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::DEFAULT_TOL;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn identity_generates_nothing() {
        let psi = StateVector::new(vec![c(1.0), c(0.0)], 1e-12).unwrap();
        let k = cyclic_subspace(&[CMatrix::identity(2)], &psi, DEFAULT_TOL).unwrap();
        assert_eq!(k.dim(), 1);
    }

    #[test]
    fn basis_projections_split_plus_state() {
        let s = 0.5_f64.sqrt();
        let psi = StateVector::new(vec![c(s), c(s)], 1e-12).unwrap();
        let gens = vec![
            CMatrix::from_diag(&[1.0, 0.0]),
            CMatrix::from_diag(&[0.0, 1.0]),
        ];
        let k = cyclic_subspace(&gens, &psi, DEFAULT_TOL).unwrap();
        assert_eq!(k.dim(), 2);
    }

    #[test]
    fn rank_one_generator_in_dim_three() {
        // span{psi, P psi} with P = diag(1,0,0) excludes e2
        let s = 0.5_f64.sqrt();
        let psi = StateVector::new(vec![c(s), c(s), c(0.0)], 1e-12).unwrap();
        let gens = vec![CMatrix::from_diag(&[1.0, 0.0, 0.0])];
        let k = cyclic_subspace(&gens, &psi, DEFAULT_TOL).unwrap();
        assert_eq!(k.dim(), 2);
        // e2 is orthogonal to the subspace
        let e2 = vec![c(0.0), c(0.0), c(1.0)];
        for b in k.basis() {
            assert!(inner(b, &e2).norm() < 1e-12);
        }
    }

    #[test]
    fn generator_invariance_defect() {
        let s = 0.5_f64.sqrt();
        let psi = StateVector::new(vec![c(s), c(0.0), c(0.0), c(s)], 1e-12).unwrap();
        let g = CMatrix::from_diag(&[1.0, 0.0, 0.0, 0.0]);
        let k = cyclic_subspace(std::slice::from_ref(&g), &psi, DEFAULT_TOL).unwrap();
        let pk = k.projector();
        let leak = &(&(&CMatrix::identity(4) - &pk) * &g) * &pk;
        assert!(leak.fro_norm() <= 10.0 * DEFAULT_TOL * 4.0);
    }
}
