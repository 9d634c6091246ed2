//! Local hidden variable models.
//!
//! A scenario fixes how many settings each party has and how many outcomes
//! each setting produces. Deterministic strategies `(m, n)` assign one
//! outcome per setting; outcome labels are zero based. Weights over
//! strategies are obtained from a symmetric (quasi-)extension, either one
//! copy per setting on both sides or, with the product formula, one copy
//! per setting on a single side only.

mod model;
mod polytope;
mod povm;
mod scenario;

pub use model::{lhv_from_extension, lhv_from_one_sided, lhv_from_one_sided_bob, reconstruct, LhvModel, DENOMINATOR_FLOOR};
pub use polytope::{polytope_membership, BellFunctional, Membership, MAX_VERTICES};
pub use povm::{quantum_probabilities, PovmSet};
pub use scenario::{b_vector, MeasurementScenario, ProbabilityVector, Strategies};
