//! Dense complex linear algebra: matrices, Hermitian eigendecomposition,
//! projections and PVMs, projection meets, and cyclic subspaces.

pub mod eigen;
pub mod matrix;
pub mod projection;
pub mod random;
pub mod subspace;

pub use eigen::{eigh, operator_norm, sqrt_psd, Eigh};
pub use matrix::{
    apply_left, apply_right, expect_kron, inner, norm2, normalized, vec_sub, CMatrix, C64,
};
pub use projection::{meet_of_projections, Projection, Pvm, StateVector};
pub use random::{complex_gaussian, complex_gaussian_vec, haar_unitary, random_state};
pub use subspace::{cyclic_subspace, CyclicSubspace};
