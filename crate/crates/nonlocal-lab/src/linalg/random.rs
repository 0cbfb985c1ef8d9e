//! Seeded random vectors and Haar-distributed unitaries.
//!
//! The draw procedure is part of the external contract: complex standard
//! normals come from Box-Muller over `rng.gen::<f64>()` pairs (real part
//! first), matrices are filled row-major, and unitaries are the Q factor of
//! modified Gram-Schmidt on a Gaussian matrix (positive-diagonal R, which
//! makes Q Haar-distributed).

use num_complex::Complex64 as C64;
use rand::Rng;

use super::matrix::{inner, norm2, CMatrix};
use super::projection::StateVector;

/// One complex standard normal via Box-Muller.
pub fn complex_gaussian(rng: &mut impl Rng) -> C64 {
    let u1: f64 = 1.0 - rng.gen::<f64>(); // (0, 1]
    let u2: f64 = rng.gen();
    let r = (-2.0 * u1.ln()).sqrt();
    let angle = 2.0 * std::f64::consts::PI * u2;
    C64::new(r * angle.cos(), r * angle.sin())
}

pub fn complex_gaussian_vec(n: usize, rng: &mut impl Rng) -> Vec<C64> {
    (0..n).map(|_| complex_gaussian(rng)).collect()
}

/// Normalized Gaussian state vector.
pub fn random_state(n: usize, rng: &mut impl Rng) -> StateVector {
    loop {
        let v = complex_gaussian_vec(n, rng);
        if norm2(&v) > 1e-6 {
            return StateVector::normalized(v).expect("nonzero by the norm guard");
        }
    }
}

/// Haar-distributed unitary of size `n`.
pub fn haar_unitary(n: usize, rng: &mut impl Rng) -> CMatrix {
    let mut cols: Vec<Vec<C64>> = Vec::with_capacity(n);
    while cols.len() < n {
        let mut w = complex_gaussian_vec(n, rng);
        for _ in 0..2 {
            for b in &cols {
                let c = inner(b, &w);
                for (wi, bi) in w.iter_mut().zip(b.iter()) {
                    *wi -= c * bi;
                }
            }
        }
        let norm = norm2(&w);
        if norm < 1e-8 {
            continue; // essentially never: redraw the column
        }
        cols.push(w.into_iter().map(|z| z / norm).collect());
    }
    CMatrix::from_fn(n, n, |i, j| cols[j][i])
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn haar_unitary_is_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let u = haar_unitary(4, &mut rng);
        let gram = &u.adjoint() * &u;
        assert!((&gram - &CMatrix::identity(4)).fro_norm() < 1e-12);
    }

    #[test]
    fn draws_are_seed_deterministic() {
        let mut a = ChaCha8Rng::seed_from_u64(42);
        let mut b = ChaCha8Rng::seed_from_u64(42);
        assert_eq!(haar_unitary(3, &mut a), haar_unitary(3, &mut b));
        assert_eq!(
            random_state(5, &mut a).amplitudes(),
            random_state(5, &mut b).amplitudes()
        );
    }
}
