//! Primal-dual interior-point solver for semidefinite programs in the
//! standard form
//!
//! ```text
//! minimize    cᵀx
//! subject to  F(x) = F₀ + Σᵢ xᵢFᵢ ⪰ 0
//! ```
//!
//! with dual
//!
//! ```text
//! maximize    −Tr F₀Z
//! subject to  Z ⪰ 0,  Tr FᵢZ = cᵢ.
//! ```
//!
//! Matrices are block diagonal. Each block is either a dense Hermitian block
//! or a diagonal block; a problem made only of diagonal blocks is a linear
//! program.

mod block;
mod duality;
mod problem;
mod schur;
mod solver;

pub use block::{BlockDiag, BlockValue};
pub use duality::{check_duality, DualityReport};
pub use problem::{Block, BlockKind, BlockMatrix, SdpStandardForm, SparseBlock};
pub use solver::{solve, solve_with, IterationRecord, SdpResult, SdpStatus, SolverSettings};
