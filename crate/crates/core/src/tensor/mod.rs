//! Dense complex linear algebra on tensor-product Hilbert spaces.
//!
//! Storage is row-major and tensor factor 0 is the leftmost (most
//! significant) slot of a basis index.

mod basis;
mod eig;
mod matrix;
mod ops;

pub use basis::{hermitian_basis, HermitianBasis};
pub use eig::{cholesky, hermitian_eig, hermitian_eigenvalues, lower_inverse, HermitianEigen};
pub use matrix::ComplexMatrix;
pub use ops::{
    kron, kron_all, partial_trace, partial_transpose, permutation_index_map, permutation_op,
    sym_average, sym_group_maps, HilbertShape,
};
pub(crate) use ops::group_permutations;

/// Hermiticity tolerance applied when a matrix is constructed.
pub const HERMITIAN_CONSTRUCTION_TOL: f64 = 1e-12;
/// Hermiticity tolerance applied at operation boundaries.
pub const HERMITIAN_BOUNDARY_TOL: f64 = 1e-10;
