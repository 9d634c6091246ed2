use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64 as C64;
#[allow(unused_imports)]
use num_traits::Float;

use super::block::{BlockDiag, BlockValue};
use crate::error::{Error, Result};
use crate::tensor::{ComplexMatrix, HERMITIAN_BOUNDARY_TOL};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BlockKind {
    Dense,
    Diagonal,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Block {
    pub size: usize,
    pub kind: BlockKind,
}

impl Block {
    pub fn dense(size: usize) -> Self {
        Self {
            size,
            kind: BlockKind::Dense,
        }
    }

    pub fn diagonal(size: usize) -> Self {
        Self {
            size,
            kind: BlockKind::Diagonal,
        }
    }
}

/// Sparse Hermitian block stored as `(row, col, value)` triplets with both
/// triangles present, sorted by `(row, col)` and free of duplicates.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SparseBlock {
    entries: Vec<(u32, u32, C64)>,
}

impl SparseBlock {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Sums duplicate coordinates and drops entries below `1e-15`.
    pub fn from_triplets(mut triplets: Vec<(usize, usize, C64)>) -> Self {
        triplets.sort_by_key(|&(r, c, _)| (r, c));
        let mut entries: Vec<(u32, u32, C64)> = Vec::with_capacity(triplets.len());
        for (r, c, v) in triplets {
            match entries.last_mut() {
                Some(last) if last.0 as usize == r && last.1 as usize == c => last.2 += v,
                _ => entries.push((r as u32, c as u32, v)),
            }
        }
        entries.retain(|e| e.2.norm() > 1e-15);
        Self { entries }
    }

    pub fn from_dense(m: &ComplexMatrix) -> Self {
        let mut triplets = Vec::new();
        for r in 0..m.rows() {
            for c in 0..m.cols() {
                let v = m[(r, c)];
                if v.norm() > 1e-15 {
                    triplets.push((r, c, v));
                }
            }
        }
        Self::from_triplets(triplets)
    }

    pub fn from_diagonal(values: &[f64]) -> Self {
        Self::from_triplets(
            values
                .iter()
                .enumerate()
                .map(|(i, &v)| (i, i, C64::new(v, 0.0)))
                .collect(),
        )
    }

    pub fn entries(&self) -> &[(u32, u32, C64)] {
        &self.entries
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn to_dense(&self, size: usize) -> ComplexMatrix {
        let mut m = ComplexMatrix::zeros(size, size);
        for &(r, c, v) in &self.entries {
            m[(r as usize, c as usize)] = v;
        }
        m
    }

    /// Real diagonal of the block.
    pub fn diagonal(&self, size: usize) -> Vec<f64> {
        let mut d = vec![0.0; size];
        for &(r, c, v) in &self.entries {
            if r == c {
                d[r as usize] = v.re;
            }
        }
        d
    }

    /// `Tr(self · value)` for a Hermitian `value`; real by construction.
    pub fn trace_with(&self, value: &BlockValue) -> f64 {
        match value {
            BlockValue::Dense(m) => self
                .entries
                .iter()
                .map(|&(r, c, v)| (v * m[(c as usize, r as usize)]).re)
                .sum(),
            BlockValue::Diagonal(d) => self
                .entries
                .iter()
                .filter(|e| e.0 == e.1)
                .map(|&(r, _, v)| v.re * d[r as usize])
                .sum(),
        }
    }

    /// `value += s · self`.
    pub fn add_to(&self, s: f64, value: &mut BlockValue) {
        match value {
            BlockValue::Dense(m) => {
                for &(r, c, v) in &self.entries {
                    m[(r as usize, c as usize)] += v * s;
                }
            }
            BlockValue::Diagonal(d) => {
                for &(r, c, v) in &self.entries {
                    if r == c {
                        d[r as usize] += v.re * s;
                    }
                }
            }
        }
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries.iter().map(|e| e.2.norm_sqr()).sum::<f64>().sqrt()
    }

    fn validate(&self, block: &Block) -> Result<()> {
        let n = block.size;
        if let Some(&(r, c, _)) = self.entries.iter().find(|e| e.0 as usize >= n || e.1 as usize >= n) {
            return Err(Error::DimensionMismatch(format!(
                "entry ({r}, {c}) outside a block of size {n}"
            )));
        }
        match block.kind {
            BlockKind::Diagonal => {
                if let Some(e) = self.entries.iter().find(|e| e.0 != e.1 || e.2.im.abs() > HERMITIAN_BOUNDARY_TOL) {
                    return Err(Error::Invalid(format!(
                        "diagonal block has off-diagonal or complex entry at ({}, {})",
                        e.0, e.1
                    )));
                }
            }
            BlockKind::Dense => {
                for &(r, c, v) in &self.entries {
                    let mirror = self
                        .entries
                        .binary_search_by_key(&(c, r), |e| (e.0, e.1))
                        .map(|k| self.entries[k].2)
                        .unwrap_or(C64::new(0.0, 0.0));
                    let deviation = (v - mirror.conj()).norm();
                    if deviation > HERMITIAN_BOUNDARY_TOL {
                        return Err(Error::NotHermitian { deviation });
                    }
                }
            }
        }
        Ok(())
    }
}

/// One sparse Hermitian matrix per block.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct BlockMatrix {
    pub blocks: Vec<SparseBlock>,
}

impl BlockMatrix {
    pub fn new(blocks: Vec<SparseBlock>) -> Self {
        Self { blocks }
    }

    pub fn zero(count: usize) -> Self {
        Self {
            blocks: vec![SparseBlock::empty(); count],
        }
    }

    pub fn nnz(&self) -> usize {
        self.blocks.iter().map(SparseBlock::nnz).sum()
    }

    pub fn trace_with(&self, value: &BlockDiag) -> f64 {
        self.blocks
            .iter()
            .zip(&value.blocks)
            .map(|(a, v)| a.trace_with(v))
            .sum()
    }

    pub fn add_to(&self, s: f64, value: &mut BlockDiag) {
        for (a, v) in self.blocks.iter().zip(value.blocks.iter_mut()) {
            a.add_to(s, v);
        }
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.blocks
            .iter()
            .map(|b| b.frobenius_norm().powi(2))
            .sum::<f64>()
            .sqrt()
    }
}

/// The primal-dual pair `(F₀, Fᵢ, c)` over a fixed block structure.
#[derive(Clone, Debug, PartialEq)]
pub struct SdpStandardForm {
    blocks: Vec<Block>,
    f0: BlockMatrix,
    fs: Vec<BlockMatrix>,
    c: Vec<f64>,
}

impl SdpStandardForm {
    pub fn new(blocks: Vec<Block>, f0: BlockMatrix, fs: Vec<BlockMatrix>, c: Vec<f64>) -> Result<Self> {
        if blocks.is_empty() || blocks.iter().any(|b| b.size == 0) {
            return Err(Error::Invalid("block sizes must be positive".into()));
        }
        if fs.len() != c.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} constraint matrices but {} cost entries",
                fs.len(),
                c.len()
            )));
        }
        if c.iter().any(|x| !x.is_finite()) {
            return Err(Error::Invalid("non-finite cost vector".into()));
        }
        for (k, m) in core::iter::once(&f0).chain(&fs).enumerate() {
            if m.blocks.len() != blocks.len() {
                return Err(Error::DimensionMismatch(format!(
                    "matrix {k} has {} blocks, expected {}",
                    m.blocks.len(),
                    blocks.len()
                )));
            }
            for (b, block) in m.blocks.iter().zip(&blocks) {
                b.validate(block)?;
            }
        }
        Ok(Self { blocks, f0, fs, c })
    }

    /// Single dense block from dense Hermitian matrices.
    pub fn from_dense(f0: &ComplexMatrix, fs: &[ComplexMatrix], c: Vec<f64>) -> Result<Self> {
        let n = f0.rows();
        for m in core::iter::once(f0).chain(fs) {
            if m.rows() != n || m.cols() != n {
                return Err(Error::DimensionMismatch(format!(
                    "expected {n}x{n} matrices, got {}x{}",
                    m.rows(),
                    m.cols()
                )));
            }
            m.require_hermitian(HERMITIAN_BOUNDARY_TOL)?;
        }
        let wrap = |m: &ComplexMatrix| BlockMatrix::new(vec![SparseBlock::from_dense(m)]);
        Self::new(
            vec![Block::dense(n)],
            wrap(f0),
            fs.iter().map(wrap).collect(),
            c,
        )
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn f0(&self) -> &BlockMatrix {
        &self.f0
    }

    pub fn fs(&self) -> &[BlockMatrix] {
        &self.fs
    }

    pub fn c(&self) -> &[f64] {
        &self.c
    }

    /// Number of scalar variables `m`.
    pub fn num_vars(&self) -> usize {
        self.fs.len()
    }

    /// Total matrix side `n` (sum of block sizes).
    pub fn dim(&self) -> usize {
        self.blocks.iter().map(|b| b.size).sum()
    }

    /// `F(x) = F₀ + Σ xᵢFᵢ` as a block-diagonal value.
    pub fn evaluate(&self, x: &[f64]) -> BlockDiag {
        let mut out = BlockDiag::zeros(&self.blocks);
        self.f0.add_to(1.0, &mut out);
        for (f, &xi) in self.fs.iter().zip(x) {
            f.add_to(xi, &mut out);
        }
        out
    }

    /// Block-diagonal embedding of a block matrix as one dense matrix.
    pub fn to_dense(&self, m: &BlockMatrix) -> ComplexMatrix {
        let mut value = BlockDiag::zeros(&self.blocks);
        m.add_to(1.0, &mut value);
        value.to_dense()
    }
}
