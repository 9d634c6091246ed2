use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::partitions::Partition;
use super::program::ExtensionKind;
use super::shape::{partial_transpose_mask, ExtensionShape};
use crate::error::Result;
use crate::rng::SplitRng;
use crate::states::BipartiteState;
use crate::tensor::{hermitian_eigenvalues, kron_all, partial_trace, ComplexMatrix};

/// Pass threshold for every certificate residual.
pub const VERIFY_TOL: f64 = 1e-7;

/// `H = P + Σ_p Q_p^{T_p}` with each block positive semidefinite.
#[derive(Clone, Debug, PartialEq)]
pub struct WitnessDecomposition {
    pub p_block: ComplexMatrix,
    pub q_blocks: Vec<(Partition, ComplexMatrix)>,
}

impl WitnessDecomposition {
    pub fn reassemble(&self, shape: &ExtensionShape) -> ComplexMatrix {
        let hs = shape.hilbert_shape();
        let mut h = self.p_block.clone();
        for (p, q) in &self.q_blocks {
            h += &partial_transpose_mask(q, p.mask(), &hs);
        }
        h
    }

    pub fn min_block_eigenvalue(&self) -> Result<f64> {
        let mut min = hermitian_eigenvalues(&self.p_block.hermitian_part())?[0];
        for (_, q) in &self.q_blocks {
            min = min.min(hermitian_eigenvalues(&q.hermitian_part())?[0]);
        }
        Ok(min)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerificationReport {
    /// Largest entry of `Tr_{rest} H − ρ`.
    pub partial_trace_residual: f64,
    /// Largest entry of `H − Sym'(H)`.
    pub symmetry_residual: f64,
    pub hermiticity_residual: f64,
    /// `λ_min(H)`, checked for positive certificates.
    pub min_eigenvalue: Option<f64>,
    /// Smallest eigenvalue over the decomposition blocks.
    pub block_min_eigenvalue: Option<f64>,
    /// Largest entry of `H − (P + Σ Q_p^{T_p})`.
    pub reassembly_residual: Option<f64>,
    /// Smallest sampled product-vector expectation, used when no
    /// decomposition accompanies a quasi-extension.
    pub witness_sample_min: Option<f64>,
    pub failures: Vec<String>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn failed(reason: String) -> Self {
        Self {
            partial_trace_residual: f64::NAN,
            symmetry_residual: f64::NAN,
            hermiticity_residual: f64::NAN,
            min_eigenvalue: None,
            block_min_eigenvalue: None,
            reassembly_residual: None,
            witness_sample_min: None,
            failures: alloc::vec![reason],
        }
    }
}

/// Number of product vectors drawn when a quasi-extension comes without a decomposition.
pub const WITNESS_SAMPLES: usize = 10_000;
const WITNESS_SEED: u64 = 0x5eed;

pub fn verify_certificate(
    h: &ComplexMatrix,
    rho: &BipartiteState,
    shape: &ExtensionShape,
    kind: ExtensionKind,
    decomposition: Option<&WitnessDecomposition>,
) -> VerificationReport {
    let n = shape.dim();
    if shape.check_state_dims(rho.dims()).is_err() || h.rows() != n || h.cols() != n {
        return VerificationReport::failed(format!(
            "certificate is {}x{}, expected {n}x{n} for a {}x{} state",
            h.rows(),
            h.cols(),
            shape.d_a,
            shape.d_b
        ));
    }
    let mut failures = Vec::new();
    let hermiticity_residual = h.hermitian_deviation();
    let hh = h.hermitian_part();
    let reduced = partial_trace(&hh, &shape.hilbert_shape(), &shape.first_pair()).expect("shape checked");
    let partial_trace_residual = reduced.max_abs_diff(rho.rho());
    let symmetry_residual = shape.symmetrize(&hh).max_abs_diff(&hh);

    if !(hermiticity_residual <= VERIFY_TOL) {
        failures.push(format!("hermiticity residual {hermiticity_residual:e}"));
    }
    if !(partial_trace_residual <= VERIFY_TOL) {
        failures.push(format!("partial trace residual {partial_trace_residual:e}"));
    }
    if !(symmetry_residual <= VERIFY_TOL) {
        failures.push(format!("symmetry residual {symmetry_residual:e}"));
    }

    let mut report = VerificationReport {
        partial_trace_residual,
        symmetry_residual,
        hermiticity_residual,
        min_eigenvalue: None,
        block_min_eigenvalue: None,
        reassembly_residual: None,
        witness_sample_min: None,
        failures: Vec::new(),
    };
    match (kind, decomposition) {
        (ExtensionKind::Positive, _) => {
            let min = hermitian_eigenvalues(&hh).map(|v| v[0]).unwrap_or(f64::NAN);
            if !(min >= -VERIFY_TOL) {
                failures.push(format!("minimum eigenvalue {min:e}"));
            }
            report.min_eigenvalue = Some(min);
        }
        (ExtensionKind::Decomposable, Some(dec)) => {
            let min = dec.min_block_eigenvalue().unwrap_or(f64::NAN);
            let reassembly = if dec.p_block.rows() == n && dec.q_blocks.iter().all(|(_, q)| q.rows() == n) {
                dec.reassemble(shape).max_abs_diff(&hh)
            } else {
                f64::INFINITY
            };
            if !(min >= -VERIFY_TOL) {
                failures.push(format!("decomposition block eigenvalue {min:e}"));
            }
            if !(reassembly <= VERIFY_TOL) {
                failures.push(format!("reassembly residual {reassembly:e}"));
            }
            report.block_min_eigenvalue = Some(min);
            report.reassembly_residual = Some(reassembly);
        }
        (ExtensionKind::Decomposable, None) => {
            let min = sample_witness_positivity(&hh, shape, WITNESS_SAMPLES, WITNESS_SEED, false);
            if !(min >= -VERIFY_TOL) {
                failures.push(format!("product-vector expectation {min:e}"));
            }
            report.witness_sample_min = Some(min);
        }
    }
    report.failures = failures;
    report
}

/// Smallest `⟨v|H|v⟩` over `samples` random product unit vectors, one factor
/// per copy. With `real`, the factors are real.
pub fn sample_witness_positivity(h: &ComplexMatrix, shape: &ExtensionShape, samples: usize, seed: u64, real: bool) -> f64 {
    let mut rng = SplitRng::new(seed);
    let dims = shape.hilbert_shape().dims().to_vec();
    let mut min = f64::INFINITY;
    for _ in 0..samples {
        let factors: Vec<ComplexMatrix> = dims
            .iter()
            .map(|&d| {
                let v = if real { rng.real_unit_vector(d) } else { rng.unit_vector(d) };
                ComplexMatrix::from_vec(d, 1, v).expect("column vector")
            })
            .collect();
        let v = kron_all(&factors).into_vec();
        min = min.min(h.sandwich(&v, &v).re);
    }
    min
}
