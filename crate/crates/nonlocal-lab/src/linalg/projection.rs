//! Validated projections, projection-valued measures, and state vectors.
//!
//! All tolerance checks scale with the matrix dimension: a defect passes at
//! tolerance `tol` when its Frobenius norm is at most `tol * dim`.

use num_complex::Complex64 as C64;
use serde::Serialize;

use super::eigen::eigh;
use super::matrix::{norm2, CMatrix};
use crate::error::{Error, Result};

/// An orthogonal projection together with the tolerance it was validated at.
#[derive(Clone, Debug, Serialize)]
pub struct Projection {
    matrix: CMatrix,
    tol: f64,
}

impl Projection {
    /// Validates `||M - M*||_F <= tol*dim` and `||M^2 - M||_F <= tol*dim`.
    pub fn new(matrix: CMatrix, tol: f64) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::dim("projection matrix must be square"));
        }
        let bound = tol * matrix.rows() as f64;
        let herm = matrix.hermitian_defect();
        if herm > bound {
            return Err(Error::NotAProjection {
                context: "hermitian defect".into(),
                defect: herm,
            });
        }
        let idem = matrix.idempotency_defect();
        if idem > bound {
            return Err(Error::NotAProjection {
                context: "idempotency defect".into(),
                defect: idem,
            });
        }
        Ok(Projection { matrix, tol })
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    /// The complementary projection `1 - P`.
    pub fn complement(&self) -> Projection {
        let m = &CMatrix::identity(self.dim()) - &self.matrix;
        Projection {
            matrix: m,
            tol: self.tol,
        }
    }
}

/// A projection-valued measure: pairwise orthogonal projections summing to 1.
#[derive(Clone, Debug, Serialize)]
pub struct Pvm {
    elements: Vec<Projection>,
    tol: f64,
}

impl Pvm {
    pub fn new(matrices: Vec<CMatrix>, tol: f64) -> Result<Self> {
        if matrices.is_empty() {
            return Err(Error::EmptySet { what: "PVM" });
        }
        let dim = matrices[0].rows();
        let mut elements = Vec::with_capacity(matrices.len());
        for m in matrices {
            if m.rows() != dim || m.cols() != dim {
                return Err(Error::dim("PVM elements must share one dimension"));
            }
            elements.push(Projection::new(m, tol)?);
        }
        let bound = tol * dim as f64;
        for i in 0..elements.len() {
            for j in (i + 1)..elements.len() {
                let defect = (elements[i].matrix() * elements[j].matrix()).fro_norm();
                if defect > bound {
                    return Err(Error::InvalidPvm {
                        context: format!("elements {i} and {j} are not orthogonal"),
                        defect,
                    });
                }
            }
        }
        let mut sum = CMatrix::zeros(dim, dim);
        for p in &elements {
            sum = &sum + p.matrix();
        }
        let defect = (&sum - &CMatrix::identity(dim)).fro_norm();
        if defect > bound {
            return Err(Error::InvalidPvm {
                context: "elements do not sum to the identity".into(),
                defect,
            });
        }
        Ok(Pvm { elements, tol })
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.elements[0].dim()
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn element(&self, i: usize) -> &Projection {
        &self.elements[i]
    }

    pub fn matrix(&self, i: usize) -> &CMatrix {
        self.elements[i].matrix()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Projection> {
        self.elements.iter()
    }

    /// Sum of the elements selected by answer indices, as a raw matrix.
    pub fn partial_sum(&self, select: impl Fn(usize) -> bool) -> CMatrix {
        let mut sum = CMatrix::zeros(self.dim(), self.dim());
        for (i, p) in self.elements.iter().enumerate() {
            if select(i) {
                sum = &sum + p.matrix();
            }
        }
        sum
    }
}

/// A unit vector with validated Euclidean norm.
#[derive(Clone, Debug)]
pub struct StateVector {
    amplitudes: Vec<C64>,
}

impl StateVector {
    pub fn new(amplitudes: Vec<C64>, tol: f64) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::EmptySet {
                what: "state vector",
            });
        }
        let norm = norm2(&amplitudes);
        if (norm - 1.0).abs() > tol {
            return Err(Error::InvalidState { norm });
        }
        Ok(StateVector { amplitudes })
    }

    /// Normalize and wrap; fails only on the zero vector.
    pub fn normalized(amplitudes: Vec<C64>) -> Result<Self> {
        let norm = norm2(&amplitudes);
        if norm == 0.0 {
            return Err(Error::InvalidState { norm });
        }
        Ok(StateVector {
            amplitudes: amplitudes.into_iter().map(|z| z / norm).collect(),
        })
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }
}

/// Orthogonal projection onto the intersection of the ranges.
///
/// Computed from the eigendecomposition of the sum: with `n` inputs, the
/// intersection is the eigenspace of eigenvalue `n`, extracted with threshold
/// `lambda >= n - tol*n`. Pass [`crate::MEET_EIG_TOL`] for the default.
pub fn meet_of_projections(ps: &[Projection], tol: f64) -> Result<Projection> {
    if ps.is_empty() {
        return Err(Error::EmptySet {
            what: "projection meet",
        });
    }
    let dim = ps[0].dim();
    for p in ps {
        if p.dim() != dim {
            return Err(Error::dim("projection meet requires equal dimensions"));
        }
    }
    let mut sum = CMatrix::zeros(dim, dim);
    for p in ps {
        sum = &sum + p.matrix();
    }
    let n = ps.len() as f64;
    let threshold = n - tol * n;
    let e = eigh(&sum)?;
    let meet = e.spectral_projector(|lambda| lambda >= threshold);
    // validation tolerance of the result follows the inputs
    let out_tol = ps.iter().map(|p| p.tol()).fold(f64::MIN, f64::max);
    Projection::new(meet, out_tol.max(crate::DEFAULT_TOL))
}
