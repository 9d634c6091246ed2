//! Symmetric extensions and decomposable quasi-extensions.
//!
//! A state ρ on `A⊗B` has an `(s_a, s_b)` extension if some operator `H` on
//! `A^{⊗s_a} ⊗ B^{⊗s_b}`, invariant under permutations of the A copies and
//! of the B copies, reduces to ρ on `A₁B₁`. Positive extensions require
//! `H ⪰ 0`; decomposable quasi-extensions only require
//! `H = P + Σ_p Q_p^{T_p}` with positive blocks.

mod analytic;
mod decide;
mod partitions;
mod program;
mod shape;
mod sweep;
mod verify;

pub use analytic::{separable_extension, upb_analytic_extension, werner_swap_spectrum, werner_threshold, WernerThreshold};
pub use decide::{decide, decide_from_solution, decide_with, Decision, DecideOptions, ExtensionVerdict};
pub use partitions::{partition_classes, Partition};
pub use program::{
    build_extension_sdp, build_extension_sdp_capped, build_program, build_quasi_extension_sdp,
    build_quasi_extension_sdp_capped, ExtensionKind, ExtensionProgram,
};
pub use shape::{ExtensionShape, DEFAULT_MAX_DIM};
pub use sweep::{sweep_threshold, SweepProbe, SweepReport};
pub use verify::{
    sample_witness_positivity, verify_certificate, VerificationReport, WitnessDecomposition,
    VERIFY_TOL,
};
