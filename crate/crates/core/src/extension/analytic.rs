use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::states::{SeparableEnsemble, UpbSpec};
use crate::tensor::{hermitian_eigenvalues, kron_all, permutation_index_map, ComplexMatrix, HilbertShape};

/// `Σᵢ pᵢ (|ψᵢ⟩⟨ψᵢ|)^{⊗s_a} ⊗ (|φᵢ⟩⟨φᵢ|)^{⊗s_b}` in the layout `[A₁..A_{s_a}, B₁..B_{s_b}]`.
pub fn separable_extension(ensemble: &SeparableEnsemble, s_a: usize, s_b: usize) -> Result<ComplexMatrix> {
    let shape = super::ExtensionShape::new(ensemble.dims.0, ensemble.dims.1, s_a, s_b)?;
    let n = shape.dim();
    let mut h = ComplexMatrix::zeros(n, n);
    for ((p, a), b) in ensemble.weights.iter().zip(&ensemble.a_vectors).zip(&ensemble.b_vectors) {
        let col = |v: &Vec<C64>| ComplexMatrix::from_vec(v.len(), 1, v.clone()).expect("column");
        let (ca, cb) = (col(a), col(b));
        let factors: Vec<&ComplexMatrix> = core::iter::repeat(&ca).take(s_a).chain(core::iter::repeat(&cb).take(s_b)).collect();
        let v = kron_all(factors).into_vec();
        h.axpy(*p, &ComplexMatrix::projector(&v));
    }
    Ok(h)
}

/// Rank-one `(2,2)` extension of the normalized state on the complement of
/// a real UPB, in the layout `[A₁, A₂, B₁, B₂]`.
///
/// With `|Φ⟩ = Σ_x |x⟩_{A₁B₁}|x⟩_{A₂B₂}` and `P` the projector onto the UPB
/// complement, the vector `|χ⟩ = (P ⊗ I)|Φ⟩` equals
/// `|Ψ⟩_{A₁A₂}|Ψ⟩_{B₁B₂} − Σᵢ |aᵢaᵢ⟩|bᵢbᵢ⟩` for real UPB members, and
/// `Tr_{A₂B₂} |χ⟩⟨χ| = P`. The result is `|χ⟩⟨χ| / Tr P`.
pub fn upb_analytic_extension(upb: &UpbSpec) -> ComplexMatrix {
    let (da, db) = (upb.d_a, upb.d_b);
    let n = da * da * db * db;
    let mut chi = vec![C64::new(0.0, 0.0); n];
    for (idx, slot) in chi.iter_mut().enumerate() {
        let b2 = idx % db;
        let b1 = (idx / db) % db;
        let a2 = (idx / (db * db)) % da;
        let a1 = idx / (db * db * da);
        let mut v = if a1 == a2 && b1 == b2 { 1.0 } else { 0.0 };
        for (a, b) in &upb.vectors {
            v -= a[a1] * a[a2] * b[b1] * b[b2];
        }
        *slot = C64::new(v, 0.0);
    }
    let rank = (da * db - upb.len()) as f64;
    ComplexMatrix::projector(&chi).scale(1.0 / rank)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WernerThreshold {
    /// `|λ_min(Sym'(V⊗I))|`.
    pub lambda_m: f64,
    /// Smallest flip expectation with an extension, `−λ_m`.
    pub phi_min: f64,
}

const WERNER_MAX_DIM: usize = 4096;

/// Ascending spectrum of `(1/(s_a s_b)) Σ_{i,j} π_{(Aᵢ,Bⱼ)}` with the copies
/// ordered `A₁,B₁,A₂,B₂,…`.
pub fn werner_swap_spectrum(d: usize, s_a: usize, s_b: usize) -> Result<Vec<f64>> {
    if d == 0 || s_a == 0 || s_b == 0 {
        return Err(Error::ParameterOutOfRange(format!(
            "werner spectrum needs positive d, s_a, s_b; got ({d}, {s_a}, {s_b})"
        )));
    }
    let k = s_a + s_b;
    let dim = u32::try_from(k).ok().and_then(|k| d.checked_pow(k)).unwrap_or(usize::MAX);
    if dim > WERNER_MAX_DIM {
        return Err(Error::DimensionCap {
            dim,
            cap: WERNER_MAX_DIM,
        });
    }
    let (pos_a, pos_b) = interleaved_positions(s_a, s_b);
    let shape = HilbertShape::uniform(d, k)?;
    let weight = 1.0 / (s_a * s_b) as f64;
    let mut m = ComplexMatrix::zeros(dim, dim);
    for &i in &pos_a {
        for &j in &pos_b {
            let mut perm: Vec<usize> = (0..k).collect();
            perm.swap(i, j);
            let map = permutation_index_map(&perm, &shape)?;
            for (col, &row) in map.iter().enumerate() {
                m[(row, col)] += C64::new(weight, 0.0);
            }
        }
    }
    hermitian_eigenvalues(&m)
}

fn interleaved_positions(s_a: usize, s_b: usize) -> (Vec<usize>, Vec<usize>) {
    let (mut pos_a, mut pos_b) = (Vec::new(), Vec::new());
    let mut slot = 0;
    for i in 0..s_a.max(s_b) {
        if i < s_a {
            pos_a.push(slot);
            slot += 1;
        }
        if i < s_b {
            pos_b.push(slot);
            slot += 1;
        }
    }
    (pos_a, pos_b)
}

pub fn werner_threshold(d: usize, s_a: usize, s_b: usize) -> Result<WernerThreshold> {
    let spectrum = werner_swap_spectrum(d, s_a, s_b)?;
    let lambda_m = (-spectrum[0]).max(0.0);
    Ok(WernerThreshold {
        lambda_m,
        phi_min: -lambda_m,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interleaving() {
        assert_eq!(interleaved_positions(2, 2), (vec![0, 2], vec![1, 3]));
        assert_eq!(interleaved_positions(1, 3), (vec![0], vec![1, 2, 3]));
        assert_eq!(interleaved_positions(3, 1), (vec![0, 2, 3], vec![1]));
    }

    #[test]
    fn flip_spectrum() {
        let s = werner_swap_spectrum(2, 1, 1).unwrap();
        assert!((s[0] + 1.0).abs() < 1e-12 && (s[3] - 1.0).abs() < 1e-12);
        assert!((werner_threshold(2, 1, 1).unwrap().phi_min + 1.0).abs() < 1e-12);
    }

    #[test]
    fn size_cap() {
        assert!(werner_swap_spectrum(5, 3, 3).is_err());
    }
}
