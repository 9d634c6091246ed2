use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64 as C64;

use super::problem::{BlockKind, SdpStandardForm};
use crate::tensor::ComplexMatrix;

pub(crate) enum BlockWeight<'a> {
    Dense(&'a ComplexMatrix),
    Diagonal(&'a [f64]),
}

/// Sparsity-aware assembly of `Mᵢⱼ = Σ_blocks Tr(Aᵢ W Aⱼ W)`.
pub(crate) struct SchurPlan {
    m: usize,
    blocks: Vec<BlockPlan>,
}

enum BlockPlan {
    Dense(DensePlan),
    Diagonal(DiagonalPlan),
}

struct DensePlan {
    size: usize,
    /// Constraints touching this block.
    active: Vec<usize>,
    /// Per constraint: the nonzero rows of `Aⱼ` with their `(col, value)` entries.
    rows: Vec<Vec<(u32, Vec<(u32, C64)>)>>,
    /// Positions `(b, a)` where `W Aⱼ W` is needed, grouped by `b`.
    needed_ptr: Vec<usize>,
    needed_col: Vec<u32>,
    /// Per constraint entry `(r, c, v)`: value `v` and index of position `(c, r)`.
    pairs: Vec<Vec<(C64, u32)>>,
}

struct DiagonalPlan {
    /// Per diagonal position: constraints with a nonzero there.
    columns: Vec<Vec<(usize, f64)>>,
}

impl SchurPlan {
    pub(crate) fn new(p: &SdpStandardForm) -> Self {
        let m = p.num_vars();
        let blocks = p
            .blocks()
            .iter()
            .enumerate()
            .map(|(k, block)| match block.kind {
                BlockKind::Dense => BlockPlan::Dense(DensePlan::new(p, k, block.size)),
                BlockKind::Diagonal => {
                    let mut columns = vec![Vec::new(); block.size];
                    for (i, f) in p.fs().iter().enumerate() {
                        for &(r, _, v) in f.blocks[k].entries() {
                            columns[r as usize].push((i, v.re));
                        }
                    }
                    BlockPlan::Diagonal(DiagonalPlan { columns })
                }
            })
            .collect();
        Self { m, blocks }
    }

    /// Row-major `m×m` Schur complement for the given per-block scaling `W`.
    pub(crate) fn assemble(&self, weights: &[BlockWeight<'_>]) -> Vec<f64> {
        let m = self.m;
        let mut out = vec![0.0; m * m];
        for (plan, weight) in self.blocks.iter().zip(weights) {
            match (plan, weight) {
                (BlockPlan::Dense(plan), BlockWeight::Dense(w)) => plan.accumulate(w, m, &mut out),
                (BlockPlan::Diagonal(plan), BlockWeight::Diagonal(w)) => {
                    for (col, &wv) in plan.columns.iter().zip(w.iter()) {
                        for &(i, vi) in col {
                            let s = vi * wv;
                            for &(j, vj) in col {
                                out[i * m + j] += s * vj;
                            }
                        }
                    }
                }
                _ => unreachable!(),
            }
        }
        for i in 0..m {
            for j in (i + 1)..m {
                let avg = 0.5 * (out[i * m + j] + out[j * m + i]);
                out[i * m + j] = avg;
                out[j * m + i] = avg;
            }
        }
        out
    }
}

impl DensePlan {
    fn new(p: &SdpStandardForm, k: usize, size: usize) -> Self {
        let m = p.num_vars();
        let mut active = Vec::new();
        let mut rows = vec![Vec::new(); m];
        let mut needed: Vec<u64> = Vec::new();
        for (i, f) in p.fs().iter().enumerate() {
            let entries = f.blocks[k].entries();
            if entries.is_empty() {
                continue;
            }
            active.push(i);
            let mut grouped: Vec<(u32, Vec<(u32, C64)>)> = Vec::new();
            for &(r, c, v) in entries {
                match grouped.last_mut() {
                    Some(last) if last.0 == r => last.1.push((c, v)),
                    _ => grouped.push((r, vec![(c, v)])),
                }
                needed.push(c as u64 * size as u64 + r as u64);
            }
            rows[i] = grouped;
        }
        needed.sort_unstable();
        needed.dedup();
        let mut needed_ptr = vec![0usize; size + 1];
        let mut needed_col = Vec::with_capacity(needed.len());
        for &lin in &needed {
            needed_ptr[(lin / size as u64) as usize + 1] += 1;
            needed_col.push((lin % size as u64) as u32);
        }
        for b in 0..size {
            needed_ptr[b + 1] += needed_ptr[b];
        }
        let pairs = p
            .fs()
            .iter()
            .map(|f| {
                f.blocks[k]
                    .entries()
                    .iter()
                    .map(|&(r, c, v)| {
                        let lin = c as u64 * size as u64 + r as u64;
                        (v, needed.binary_search(&lin).unwrap() as u32)
                    })
                    .collect()
            })
            .collect();
        Self {
            size,
            active,
            rows,
            needed_ptr,
            needed_col,
            pairs,
        }
    }

    fn accumulate(&self, w: &ComplexMatrix, m: usize, out: &mut [f64]) {
        let n = self.size;
        let zero = C64::new(0.0, 0.0);
        let mut yt: Vec<C64> = Vec::new();
        let mut t = vec![zero; self.needed_col.len()];
        let mut wb: Vec<C64> = Vec::new();
        for &j in &self.active {
            let rows = &self.rows[j];
            let k = rows.len();
            // yt[a][kk] = (Aⱼ W)[c_kk, a] = Σ_d Aⱼ[c_kk, d] conj(W[a, d])
            yt.clear();
            yt.resize(n * k, zero);
            for a in 0..n {
                let wa = w.row(a);
                let dst = &mut yt[a * k..(a + 1) * k];
                for (slot, (_, entries)) in dst.iter_mut().zip(rows) {
                    let mut acc = zero;
                    for &(d, v) in entries {
                        acc += v * wa[d as usize].conj();
                    }
                    *slot = acc;
                }
            }
            // t[(b, a)] = Σ_kk W[b, c_kk] yt[a][kk]
            for b in 0..n {
                let (lo, hi) = (self.needed_ptr[b], self.needed_ptr[b + 1]);
                if lo == hi {
                    continue;
                }
                let wrow = w.row(b);
                wb.clear();
                wb.extend(rows.iter().map(|(c, _)| wrow[*c as usize]));
                for idx in lo..hi {
                    let a = self.needed_col[idx] as usize;
                    let ya = &yt[a * k..(a + 1) * k];
                    let mut acc = zero;
                    for (p, q) in wb.iter().zip(ya) {
                        acc += p * q;
                    }
                    t[idx] = acc;
                }
            }
            for &i in &self.active {
                let s: f64 = self.pairs[i].iter().map(|&(v, idx)| (v * t[idx as usize]).re).sum();
                out[i * m + j] += s;
            }
        }
    }
}
