//! Certifies symmetric extensions and decomposable quasi-extensions of
//! bipartite quantum states with a dense semidefinite programming solver,
//! and turns the resulting certificates into explicit local hidden
//! variable models.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, the
//! command-line front end and everything touching the filesystem live in
//! the `lhvcert` companion crate.
//!
//! Module overview:
//!
//! - [`tensor`]: dense complex matrices on tensor-product spaces (Kronecker
//!   products, partial traces and transposes, permutation operators,
//!   symmetrization, trace-orthonormal Hermitian bases, Hermitian
//!   eigendecomposition).
//! - [`states`]: the benchmark state families.
//! - [`sdp`]: a primal-dual interior-point solver for block-diagonal
//!   semidefinite programs in standard form.
//! - [`extension`]: extension and quasi-extension programs, verdicts,
//!   certificate verification and the analytic constructions.
//! - [`lhv`]: deterministic strategies, quantum probabilities, LHV weights
//!   from certificates, and local polytope membership.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod error;
pub mod extension;
pub mod lhv;
pub mod rng;
pub mod sdp;
pub mod states;
pub mod tensor;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;
pub use tensor::{ComplexMatrix, HilbertShape};
