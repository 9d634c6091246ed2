use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::partitions::Partition;
use super::program::{build_program, ExtensionKind, ExtensionProgram};
use super::shape::{c64, partial_transpose_mask, permute_mask, symmetrize_with, ExtensionShape, DEFAULT_MAX_DIM};
use super::verify::{verify_certificate, VerificationReport, WitnessDecomposition};
use crate::error::Result;
use crate::sdp::{solve, BlockValue, SdpResult, SdpStatus};
use crate::states::BipartiteState;
use crate::tensor::{hermitian_eigenvalues, ComplexMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Decision {
    Exists,
    NotExists,
    Indeterminate,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DecideOptions {
    /// Solver tolerance.
    pub tol: f64,
    /// Half-width of the band around optimum 1 where the optimum alone does not decide.
    pub band: f64,
    pub max_dim: usize,
}

impl Default for DecideOptions {
    fn default() -> Self {
        Self {
            tol: 1e-9,
            band: 1e-6,
            max_dim: DEFAULT_MAX_DIM,
        }
    }
}

/// Lower bound on `Sym'(X⊗I)` (and its partial transposes) for a dual certificate.
const DUAL_PSD_TOL: f64 = 1e-9;
/// Largest admissible `Tr Xρ` for a dual certificate.
const DUAL_VALUE_TOL: f64 = -1e-7;

#[derive(Clone, Debug)]
pub struct ExtensionVerdict {
    pub kind: ExtensionKind,
    pub shape: ExtensionShape,
    /// Optimal `Tr K`.
    pub optimum: f64,
    pub decision: Decision,
    /// `H` with `Tr_{rest} H = ρ`.
    pub certificate: Option<ComplexMatrix>,
    pub decomposition: Option<WitnessDecomposition>,
    /// `X` on `A⊗B` with `Sym'(X⊗I) ⪰ 0` and `Tr Xρ < 0`.
    pub dual_certificate: Option<ComplexMatrix>,
    /// `Tr Xρ` of the dual certificate.
    pub dual_value: Option<f64>,
    /// Smallest eigenvalue of `Sym'(X⊗I)` and, for quasi-extensions, of its partial transposes.
    pub dual_min_eigenvalue: Option<f64>,
    pub residuals: Option<VerificationReport>,
    pub solver_status: SdpStatus,
    pub iterations: usize,
    pub diagnostics: Vec<String>,
}

pub fn decide(rho: &BipartiteState, shape: &ExtensionShape, kind: ExtensionKind) -> Result<ExtensionVerdict> {
    decide_with(rho, shape, kind, &DecideOptions::default())
}

pub fn decide_with(
    rho: &BipartiteState,
    shape: &ExtensionShape,
    kind: ExtensionKind,
    options: &DecideOptions,
) -> Result<ExtensionVerdict> {
    let program = build_program(rho, shape, kind, options.max_dim)?;
    let result = solve(&program.problem, options.tol)?;
    Ok(decide_from_solution(rho, &program, &result, options))
}

/// Draws the decision from an already solved extension program.
pub fn decide_from_solution(
    rho: &BipartiteState,
    program: &ExtensionProgram,
    result: &SdpResult,
    options: &DecideOptions,
) -> ExtensionVerdict {
    let (shape, kind) = (&program.shape, program.kind);
    let optimum = -result.dual_obj;
    let mut verdict = ExtensionVerdict {
        kind,
        shape: *shape,
        optimum,
        decision: Decision::Indeterminate,
        certificate: None,
        decomposition: None,
        dual_certificate: None,
        dual_value: None,
        dual_min_eigenvalue: None,
        residuals: None,
        solver_status: result.status,
        iterations: result.iterations,
        diagnostics: Vec::new(),
    };
    if result.status != SdpStatus::Optimal {
        verdict
            .diagnostics
            .push(format!("solver stopped with {:?} after {} iterations", result.status, result.iterations));
    }
    if !optimum.is_finite() {
        verdict.diagnostics.push("non-finite optimum".into());
        return verdict;
    }

    if optimum < 1.0 + options.band {
        let (h, decomposition) = assemble_certificate(program, result);
        let report = verify_certificate(&h, rho, shape, kind, decomposition.as_ref());
        let verified = report.passed();
        if !verified {
            verdict
                .diagnostics
                .push(format!("certificate failed verification: {}", report.failures.join("; ")));
        }
        verdict.residuals = Some(report);
        if verified {
            verdict.certificate = Some(h);
            verdict.decomposition = decomposition;
            verdict.decision = Decision::Exists;
            return verdict;
        }
    }

    if optimum > 1.0 - options.band {
        let (x, value, min_eig) = dual_certificate(program, result, rho);
        verdict.dual_value = Some(value);
        verdict.dual_min_eigenvalue = Some(min_eig);
        if value < DUAL_VALUE_TOL && min_eig >= -DUAL_PSD_TOL {
            verdict.dual_certificate = Some(x);
            verdict.decision = Decision::NotExists;
        } else {
            verdict.diagnostics.push(format!(
                "dual certificate not conclusive: Tr Xρ = {value:e}, min eigenvalue {min_eig:e}"
            ));
        }
    }
    verdict
}

fn dense_block(result: &SdpResult, k: usize) -> ComplexMatrix {
    match &result.z.blocks[k] {
        BlockValue::Dense(m) => m.hermitian_part(),
        BlockValue::Diagonal(d) => ComplexMatrix::from_diagonal(d),
    }
}

/// Symmetrized primal solution, completed to unit trace with the identity
/// when `Tr K ≤ 1` and rescaled otherwise.
fn assemble_certificate(program: &ExtensionProgram, result: &SdpResult) -> (ComplexMatrix, Option<WitnessDecomposition>) {
    let shape = &program.shape;
    let n = shape.dim();
    let maps = shape.group_maps();
    let blocks: Vec<ComplexMatrix> = (0..result.z.blocks.len()).map(|k| dense_block(result, k)).collect();
    let total: f64 = blocks.iter().map(|b| b.trace().re).sum();
    let (scale, shift) = if total <= 1.0 { (1.0, (1.0 - total) / n as f64) } else { (1.0 / total, 0.0) };

    let mut p = symmetrize_with(&blocks[0], &maps).scale(scale);
    p.add_identity(shift);
    p.make_hermitian();
    if program.kind == ExtensionKind::Positive {
        return (p, None);
    }

    let perms = shape.group_perms();
    let weight = scale / maps.len() as f64;
    let hs = shape.hilbert_shape();
    let mut q_blocks: Vec<(Partition, ComplexMatrix)> = Vec::new();
    for (partition, q) in program.partitions.iter().zip(&blocks[1..]) {
        for (perm, map) in perms.iter().zip(&maps) {
            let image = Partition(permute_mask(partition.mask(), perm));
            let slot = match q_blocks.iter().position(|(p, _)| *p == image) {
                Some(i) => i,
                None => {
                    q_blocks.push((image, ComplexMatrix::zeros(n, n)));
                    q_blocks.len() - 1
                }
            };
            let target = &mut q_blocks[slot].1;
            for r in 0..n {
                for (c, &v) in q.row(r).iter().enumerate() {
                    target[(map[r], map[c])] += v * weight;
                }
            }
        }
    }
    q_blocks.sort_by_key(|(p, _)| *p);
    let mut h = p.clone();
    for (partition, q) in q_blocks.iter_mut() {
        q.make_hermitian();
        h += &partial_transpose_mask(q, partition.mask(), &hs);
    }
    h.make_hermitian();
    (
        h,
        Some(WitnessDecomposition {
            p_block: p,
            q_blocks,
        }),
    )
}

/// `X = I + Σ xᵢσᵢ`, shifted towards the identity if needed so that
/// `Sym'(X⊗I)` is positive semidefinite. Returns `(X, Tr Xρ, λ_min)`.
fn dual_certificate(program: &ExtensionProgram, result: &SdpResult, rho: &BipartiteState) -> (ComplexMatrix, f64, f64) {
    let d = program.shape.local_dim();
    let mut x = ComplexMatrix::identity(d);
    for (sigma, &xi) in program.basis.iter().zip(&result.x) {
        x.axpy(xi, sigma);
    }
    x.make_hermitian();
    let mut min = lifted_min_eigenvalue(program, &x);
    if min < 0.0 && min.is_finite() {
        let eps = -min;
        x.add_identity(eps);
        x = x.scale(1.0 / (1.0 + eps));
        min = lifted_min_eigenvalue(program, &x);
    }
    let value = x.trace_product(rho.rho()).re;
    (x, value, min)
}

/// Smallest eigenvalue of `Sym'(X⊗I)` and of its partial transposes on the program's partitions.
fn lifted_min_eigenvalue(program: &ExtensionProgram, x: &ComplexMatrix) -> f64 {
    let shape = &program.shape;
    let n = shape.dim();
    let mut lifted = ComplexMatrix::zeros(n, n);
    let d = shape.local_dim();
    for r in 0..d {
        for c in 0..d {
            let v = x[(r, c)];
            if v == c64(0.0) {
                continue;
            }
            for rest in 0..shape.rest_dim() {
                lifted[(shape.embed(r, rest), shape.embed(c, rest))] = v;
            }
        }
    }
    let mut sym = shape.symmetrize(&lifted);
    sym.make_hermitian();
    let eig = |m: &ComplexMatrix| hermitian_eigenvalues(m).map(|v| v[0]).unwrap_or(f64::NAN);
    let mut min = eig(&sym);
    let hs = shape.hilbert_shape();
    for p in &program.partitions {
        min = min.min(eig(&partial_transpose_mask(&sym, p.mask(), &hs)));
    }
    min
}
