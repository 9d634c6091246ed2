use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64 as C64;
#[allow(unused_imports)]
use num_traits::Float;

use super::problem::{Block, BlockKind};
use crate::error::Result;
use crate::tensor::{hermitian_eigenvalues, ComplexMatrix};

/// Value of one block of a block-diagonal Hermitian matrix.
#[derive(Clone, Debug, PartialEq)]
pub enum BlockValue {
    Dense(ComplexMatrix),
    Diagonal(Vec<f64>),
}

impl BlockValue {
    pub fn size(&self) -> usize {
        match self {
            Self::Dense(m) => m.rows(),
            Self::Diagonal(d) => d.len(),
        }
    }

    pub fn to_dense(&self) -> ComplexMatrix {
        match self {
            Self::Dense(m) => m.clone(),
            Self::Diagonal(d) => ComplexMatrix::from_diagonal(d),
        }
    }

    pub fn min_eigenvalue(&self) -> Result<f64> {
        Ok(match self {
            Self::Dense(m) => hermitian_eigenvalues(m)?[0],
            Self::Diagonal(d) => d.iter().copied().fold(f64::INFINITY, f64::min),
        })
    }
}

/// Block-diagonal Hermitian matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct BlockDiag {
    pub blocks: Vec<BlockValue>,
}

impl BlockDiag {
    pub fn zeros(structure: &[Block]) -> Self {
        Self::scaled_identity(structure, 0.0)
    }

    pub fn scaled_identity(structure: &[Block], s: f64) -> Self {
        let blocks = structure
            .iter()
            .map(|b| match b.kind {
                BlockKind::Dense => {
                    let mut m = ComplexMatrix::zeros(b.size, b.size);
                    m.add_identity(s);
                    BlockValue::Dense(m)
                }
                BlockKind::Diagonal => BlockValue::Diagonal(vec![s; b.size]),
            })
            .collect();
        Self { blocks }
    }

    pub fn dim(&self) -> usize {
        self.blocks.iter().map(BlockValue::size).sum()
    }

    /// Real part of `Tr(self · other)`.
    pub fn inner(&self, other: &Self) -> f64 {
        self.blocks
            .iter()
            .zip(&other.blocks)
            .map(|(a, b)| match (a, b) {
                (BlockValue::Dense(x), BlockValue::Dense(y)) => {
                    // Tr(XY) = Σ X[r,c] Y[c,r] = Σ X[r,c] conj(Y[r,c]) for Hermitian Y
                    x.as_slice()
                        .iter()
                        .zip(y.as_slice())
                        .map(|(p, q)| (p * q.conj()).re)
                        .sum::<f64>()
                }
                (BlockValue::Diagonal(x), BlockValue::Diagonal(y)) => {
                    x.iter().zip(y).map(|(p, q)| p * q).sum()
                }
                _ => panic!("block kinds differ"),
            })
            .sum()
    }

    pub fn trace(&self) -> f64 {
        self.blocks
            .iter()
            .map(|b| match b {
                BlockValue::Dense(m) => m.trace().re,
                BlockValue::Diagonal(d) => d.iter().sum(),
            })
            .sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.inner(self).max(0.0).sqrt()
    }

    /// `self += s · other`.
    pub fn axpy(&mut self, s: f64, other: &Self) {
        for (a, b) in self.blocks.iter_mut().zip(&other.blocks) {
            match (a, b) {
                (BlockValue::Dense(x), BlockValue::Dense(y)) => x.axpy(s, y),
                (BlockValue::Diagonal(x), BlockValue::Diagonal(y)) => {
                    x.iter_mut().zip(y).for_each(|(p, q)| *p += s * q)
                }
                _ => panic!("block kinds differ"),
            }
        }
    }

    pub fn scale(&self, s: f64) -> Self {
        let mut out = self.clone();
        for b in out.blocks.iter_mut() {
            match b {
                BlockValue::Dense(m) => *m = m.scale(s),
                BlockValue::Diagonal(d) => d.iter_mut().for_each(|x| *x *= s),
            }
        }
        out
    }

    pub fn add_identity(&mut self, s: f64) {
        for b in self.blocks.iter_mut() {
            match b {
                BlockValue::Dense(m) => m.add_identity(s),
                BlockValue::Diagonal(d) => d.iter_mut().for_each(|x| *x += s),
            }
        }
    }

    pub fn make_hermitian(&mut self) {
        for b in self.blocks.iter_mut() {
            if let BlockValue::Dense(m) = b {
                m.make_hermitian();
            }
        }
    }

    pub fn min_eigenvalue(&self) -> Result<f64> {
        let mut min = f64::INFINITY;
        for b in &self.blocks {
            min = min.min(b.min_eigenvalue()?);
        }
        Ok(min)
    }

    /// Embeds the blocks along the diagonal of one dense matrix.
    pub fn to_dense(&self) -> ComplexMatrix {
        let n = self.dim();
        let mut out = ComplexMatrix::zeros(n, n);
        let mut offset = 0;
        for b in &self.blocks {
            match b {
                BlockValue::Dense(m) => {
                    for r in 0..m.rows() {
                        for c in 0..m.cols() {
                            out[(offset + r, offset + c)] = m[(r, c)];
                        }
                    }
                }
                BlockValue::Diagonal(d) => {
                    for (i, &x) in d.iter().enumerate() {
                        out[(offset + i, offset + i)] = C64::new(x, 0.0);
                    }
                }
            }
            offset += b.size();
        }
        out
    }
}
