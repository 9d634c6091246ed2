use alloc::vec::Vec;

use num_complex::Complex64 as C64;
#[allow(unused_imports)]
use num_traits::Float;

use super::matrix::ComplexMatrix;

/// Trace-orthonormal Hermitian operator basis with `elements[0] = I/√dim`.
///
/// The remaining elements are generalized Gell-Mann matrices: for each pair
/// `j < k` a symmetric and an antisymmetric off-diagonal element, then the
/// `dim − 1` traceless diagonal elements.
#[derive(Clone, Debug)]
pub struct HermitianBasis {
    pub dim: usize,
    pub elements: Vec<ComplexMatrix>,
}

impl HermitianBasis {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Expansion coefficients `Tr(σ_i M)`; real when `M` is Hermitian.
    pub fn coefficients(&self, m: &ComplexMatrix) -> Vec<f64> {
        self.elements.iter().map(|s| s.trace_product(m).re).collect()
    }

    pub fn reconstruct(&self, coefficients: &[f64]) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(self.dim, self.dim);
        for (s, &x) in self.elements.iter().zip(coefficients) {
            out.axpy(x, s);
        }
        out
    }
}

pub fn hermitian_basis(dim: usize) -> HermitianBasis {
    assert!(dim >= 1, "basis dimension must be positive");
    let mut elements = Vec::with_capacity(dim * dim);
    elements.push(ComplexMatrix::identity(dim).scale(1.0 / (dim as f64).sqrt()));
    let h = 0.5f64.sqrt();
    for j in 0..dim {
        for k in (j + 1)..dim {
            let mut sym = ComplexMatrix::zeros(dim, dim);
            sym[(j, k)] = C64::new(h, 0.0);
            sym[(k, j)] = C64::new(h, 0.0);
            elements.push(sym);
            let mut anti = ComplexMatrix::zeros(dim, dim);
            anti[(j, k)] = C64::new(0.0, -h);
            anti[(k, j)] = C64::new(0.0, h);
            elements.push(anti);
        }
    }
    for l in 1..dim {
        let norm = 1.0 / ((l * (l + 1)) as f64).sqrt();
        let mut diag = ComplexMatrix::zeros(dim, dim);
        for t in 0..l {
            diag[(t, t)] = C64::new(norm, 0.0);
        }
        diag[(l, l)] = C64::new(-(l as f64) * norm, 0.0);
        elements.push(diag);
    }
    HermitianBasis { dim, elements }
}
