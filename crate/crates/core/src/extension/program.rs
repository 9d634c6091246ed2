use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64 as C64;

use super::partitions::{partition_classes, Partition};
use super::shape::{transpose_indices, ExtensionShape};
use crate::error::Result;
use crate::sdp::{Block, BlockMatrix, SdpStandardForm, SparseBlock};
use crate::states::BipartiteState;
use crate::tensor::{hermitian_basis, ComplexMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ExtensionKind {
    /// `H ⪰ 0`.
    Positive,
    /// `H = P + Σ_p Q_p^{T_p}` with `P, Q_p ⪰ 0`.
    Decomposable,
}

/// An extension program together with the data needed to interpret its
/// solution.
#[derive(Clone, Debug)]
pub struct ExtensionProgram {
    pub shape: ExtensionShape,
    pub kind: ExtensionKind,
    pub problem: SdpStandardForm,
    /// Traceless part of the trace-orthonormal basis on `A⊗B`; constraint `i` pairs with `basis[i]`.
    pub basis: Vec<ComplexMatrix>,
    /// Partition of each `Q` block, in block order after `P`.
    pub partitions: Vec<Partition>,
}

/// `minimize Tr K` subject to `Tr Sym'(σᵢ⊗I) K = Tr σᵢρ` for the traceless
/// basis elements `σᵢ` and `K ⪰ 0`, as the dual of a standard-form program
/// with `F₀ = I` and `Fᵢ = Sym'(σᵢ⊗I)`.
pub fn build_extension_sdp(rho: &BipartiteState, shape: &ExtensionShape) -> Result<ExtensionProgram> {
    build_extension_sdp_capped(rho, shape, super::DEFAULT_MAX_DIM)
}

pub fn build_extension_sdp_capped(
    rho: &BipartiteState,
    shape: &ExtensionShape,
    max_dim: usize,
) -> Result<ExtensionProgram> {
    build(rho, shape, ExtensionKind::Positive, max_dim)
}

/// Decomposable variant: block-diagonal variable `(P, Q₁..Q_t)` with the
/// constraint operators partially transposed on each `Q` block.
pub fn build_quasi_extension_sdp(rho: &BipartiteState, shape: &ExtensionShape) -> Result<ExtensionProgram> {
    build_quasi_extension_sdp_capped(rho, shape, super::DEFAULT_MAX_DIM)
}

pub fn build_quasi_extension_sdp_capped(
    rho: &BipartiteState,
    shape: &ExtensionShape,
    max_dim: usize,
) -> Result<ExtensionProgram> {
    build(rho, shape, ExtensionKind::Decomposable, max_dim)
}

pub fn build_program(
    rho: &BipartiteState,
    shape: &ExtensionShape,
    kind: ExtensionKind,
    max_dim: usize,
) -> Result<ExtensionProgram> {
    build(rho, shape, kind, max_dim)
}

fn build(rho: &BipartiteState, shape: &ExtensionShape, kind: ExtensionKind, max_dim: usize) -> Result<ExtensionProgram> {
    shape.check_state_dims(rho.dims())?;
    shape.require_cap(max_dim)?;
    let n = shape.dim();
    let basis: Vec<ComplexMatrix> = hermitian_basis(shape.local_dim()).elements.into_iter().skip(1).collect();
    let partitions = match kind {
        ExtensionKind::Positive => Vec::new(),
        ExtensionKind::Decomposable => partition_classes(shape),
    };
    let maps = shape.group_maps();
    let hs = shape.hilbert_shape();
    let blocks = vec![Block::dense(n); 1 + partitions.len()];

    let identity = SparseBlock::from_diagonal(&vec![1.0; n]);
    let f0 = BlockMatrix::new(vec![identity; blocks.len()]);
    let mut fs = Vec::with_capacity(basis.len());
    let mut c = Vec::with_capacity(basis.len());
    for sigma in &basis {
        let triplets = sym_lift(sigma, shape, &maps);
        let mut per_block = Vec::with_capacity(blocks.len());
        per_block.push(SparseBlock::from_triplets(triplets.clone()));
        for p in &partitions {
            per_block.push(SparseBlock::from_triplets(
                triplets
                    .iter()
                    .map(|&(r, col, v)| {
                        let (r2, c2) = transpose_indices(r, col, p.mask(), &hs);
                        (r2, c2, v)
                    })
                    .collect(),
            ));
        }
        fs.push(BlockMatrix::new(per_block));
        c.push(sigma.trace_product(rho.rho()).re);
    }
    Ok(ExtensionProgram {
        shape: *shape,
        kind,
        problem: SdpStandardForm::new(blocks, f0, fs, c)?,
        basis,
        partitions,
    })
}

/// Triplets of `Sym'(σ ⊗ I)` with `σ` acting on `A₁B₁`.
fn sym_lift(sigma: &ComplexMatrix, shape: &ExtensionShape, maps: &[Vec<usize>]) -> Vec<(usize, usize, C64)> {
    let d = shape.local_dim();
    let weight = 1.0 / maps.len() as f64;
    let mut out = Vec::new();
    for r in 0..d {
        for col in 0..d {
            let v = sigma[(r, col)];
            if v.norm() <= 1e-15 {
                continue;
            }
            for rest in 0..shape.rest_dim() {
                let (fr, fc) = (shape.embed(r, rest), shape.embed(col, rest));
                for map in maps {
                    out.push((map[fr], map[fc], v * weight));
                }
            }
        }
    }
    out
}
