//! Dense complex matrices and vectors.
//!
//! Storage is row-major. The Kronecker product uses the row-major pairing
//! `(i_a, i_b) -> i_a * rows_b + i_b`, so applying `kron(a, b)` to a bipartite
//! vector agrees with [`apply_left`] followed by [`apply_right`].
//!
//! Wire format: `{"rows": r, "cols": c, "data": [[re, im], ...]}` row-major,
//! and `{"dim": n, "data": [[re, im], ...]}` for vectors.

use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub type C64 = Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);

#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMatrix {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = CMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut m = CMatrix::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    /// Diagonal matrix from real entries.
    pub fn from_diag(diag: &[f64]) -> Self {
        let mut m = CMatrix::zeros(diag.len(), diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = C64::new(d, 0.0);
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<C64>>) -> Result<Self> {
        let r = rows.len();
        if r == 0 {
            return Err(Error::dim("matrix must have at least one row"));
        }
        let c = rows[0].len();
        if c == 0 || rows.iter().any(|row| row.len() != c) {
            return Err(Error::dim("matrix rows must be nonempty and equal length"));
        }
        Ok(CMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::dim("matrix dimensions must be positive"));
        }
        if data.len() != rows * cols {
            return Err(Error::dim(format!(
                "matrix data has {} entries, expected {}x{}",
                data.len(),
                rows,
                cols
            )));
        }
        Ok(CMatrix { rows, cols, data })
    }

    /// Rank-one projector |v><v| / <v|v>.
    pub fn outer_normalized(v: &[C64]) -> Self {
        let n2 = norm2(v);
        let mut m = CMatrix::zeros(v.len(), v.len());
        for i in 0..v.len() {
            for j in 0..v.len() {
                m[(i, j)] = v[i] * v[j].conj() / (n2 * n2);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[C64] {
        &self.data
    }

    pub fn adjoint(&self) -> CMatrix {
        CMatrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> CMatrix {
        CMatrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn conj(&self) -> CMatrix {
        CMatrix::from_fn(self.rows, self.cols, |i, j| self[(i, j)].conj())
    }

    pub fn scale(&self, s: C64) -> CMatrix {
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn trace(&self) -> C64 {
        debug_assert!(self.is_square());
        (0..self.rows).map(|i| self[(i, i)]).sum()
    }

    pub fn fro_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Frobenius distance to the adjoint, `||M - M*||_F`.
    pub fn hermitian_defect(&self) -> f64 {
        (self - &self.adjoint()).fro_norm()
    }

    /// Frobenius distance `||M^2 - M||_F`.
    pub fn idempotency_defect(&self) -> f64 {
        (&(self * self) - self).fro_norm()
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(self.cols, v.len(), "matrix-vector dimension mismatch");
        let mut out = vec![ZERO; self.rows];
        for i in 0..self.rows {
            let mut acc = ZERO;
            let row = &self.data[i * self.cols..(i + 1) * self.cols];
            for (a, b) in row.iter().zip(v.iter()) {
                acc += a * b;
            }
            out[i] = acc;
        }
        out
    }

    /// Kronecker product with row-major pairing `(i_a, i_b) -> i_a*rows_b + i_b`.
    pub fn kron(&self, other: &CMatrix) -> CMatrix {
        let mut out = CMatrix::zeros(self.rows * other.rows, self.cols * other.cols);
        for ia in 0..self.rows {
            for ja in 0..self.cols {
                let za = self[(ia, ja)];
                for ib in 0..other.rows {
                    for jb in 0..other.cols {
                        out[(ia * other.rows + ib, ja * other.cols + jb)] = za * other[(ib, jb)];
                    }
                }
            }
        }
        out
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = C64;

    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.cols + j]
    }
}

impl Add for &CMatrix {
    type Output = CMatrix;

    fn add(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(rhs.data.iter())
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &CMatrix {
    type Output = CMatrix;

    fn sub(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(rhs.data.iter())
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Mul for &CMatrix {
    type Output = CMatrix;

    fn mul(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.cols, rhs.rows, "matrix product dimension mismatch");
        let mut out = CMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == ZERO {
                    continue;
                }
                for j in 0..rhs.cols {
                    out[(i, j)] += a * rhs[(k, j)];
                }
            }
        }
        out
    }
}

// ---------------------------------------------------------------------------
// vector helpers

/// Inner product, antilinear in the first argument.
pub fn inner(a: &[C64], b: &[C64]) -> C64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum()
}

pub fn norm2(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn normalized(v: &[C64]) -> Vec<C64> {
    let n = norm2(v);
    v.iter().map(|z| z / n).collect()
}

pub fn vec_sub(a: &[C64], b: &[C64]) -> Vec<C64> {
    a.iter().zip(b.iter()).map(|(x, y)| x - y).collect()
}

// ---------------------------------------------------------------------------
// bipartite actions, with psi indexed as i*db + j

/// Apply `op ⊗ 1` to a bipartite vector.
pub fn apply_left(op: &CMatrix, psi: &[C64], da: usize, db: usize) -> Vec<C64> {
    assert_eq!(op.rows(), da);
    assert_eq!(op.cols(), da);
    assert_eq!(psi.len(), da * db);
    let mut out = vec![ZERO; da * db];
    for i in 0..da {
        for k in 0..da {
            let z = op[(i, k)];
            if z == ZERO {
                continue;
            }
            for j in 0..db {
                out[i * db + j] += z * psi[k * db + j];
            }
        }
    }
    out
}

/// Apply `1 ⊗ op` to a bipartite vector.
pub fn apply_right(op: &CMatrix, psi: &[C64], da: usize, db: usize) -> Vec<C64> {
    assert_eq!(op.rows(), db);
    assert_eq!(op.cols(), db);
    assert_eq!(psi.len(), da * db);
    let mut out = vec![ZERO; da * db];
    for j in 0..db {
        for l in 0..db {
            let z = op[(j, l)];
            if z == ZERO {
                continue;
            }
            for i in 0..da {
                out[i * db + j] += z * psi[i * db + l];
            }
        }
    }
    out
}

/// `<psi| (a ⊗ b) |psi>`.
pub fn expect_kron(a: &CMatrix, b: &CMatrix, psi: &[C64]) -> C64 {
    let v = apply_left(
        a,
        &apply_right(b, psi, a.rows(), b.rows()),
        a.rows(),
        b.rows(),
    );
    inner(psi, &v)
}

// ---------------------------------------------------------------------------
// serde wire format

#[derive(Serialize, Deserialize)]
struct MatrixWire {
    rows: usize,
    cols: usize,
    data: Vec<[f64; 2]>,
}

impl Serialize for CMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixWire {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| [z.re, z.im]).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for CMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let wire = MatrixWire::deserialize(deserializer)?;
        let data = wire.data.iter().map(|p| C64::new(p[0], p[1])).collect();
        CMatrix::from_vec(wire.rows, wire.cols, data).map_err(D::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
pub(crate) struct VectorWire {
    pub dim: usize,
    pub data: Vec<[f64; 2]>,
}

pub(crate) fn vec_to_wire(v: &[C64]) -> VectorWire {
    VectorWire {
        dim: v.len(),
        data: v.iter().map(|z| [z.re, z.im]).collect(),
    }
}

pub(crate) fn wire_to_vec(w: &VectorWire) -> Result<Vec<C64>> {
    if w.dim == 0 || w.data.len() != w.dim {
        return Err(Error::dim(format!(
            "vector declares dim {} but has {} entries",
            w.dim,
            w.data.len()
        )));
    }
    Ok(w.data.iter().map(|p| C64::new(p[0], p[1])).collect())
}
