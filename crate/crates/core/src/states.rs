//! Constructors for the benchmark bipartite states.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64 as C64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::rng::SplitRng;
use crate::tensor::{
    hermitian_eigenvalues, kron, partial_trace, partial_transpose, permutation_op, ComplexMatrix,
    HilbertShape, HERMITIAN_CONSTRUCTION_TOL,
};

/// Density matrix on `H_A ⊗ H_B`.
#[derive(Clone, Debug, PartialEq)]
pub struct BipartiteState {
    rho: ComplexMatrix,
    dims: (usize, usize),
    label: String,
}

impl BipartiteState {
    /// Validates Hermiticity (1e-12), unit trace (1e-12) and positivity
    /// (eigenvalues ≥ −1e-10).
    pub fn new(rho: ComplexMatrix, dims: (usize, usize), label: impl Into<String>) -> Result<Self> {
        let shape = HilbertShape::new(vec![dims.0, dims.1])?;
        shape.check_matrix(&rho)?;
        rho.require_hermitian(HERMITIAN_CONSTRUCTION_TOL)?;
        let trace = rho.trace();
        if (trace - C64::new(1.0, 0.0)).norm() > 1e-12 {
            return Err(Error::Invalid(format!("state trace {} is not 1", trace.re)));
        }
        let mut rho = rho;
        rho.make_hermitian();
        let min = hermitian_eigenvalues(&rho)?[0];
        if min < -1e-10 {
            return Err(Error::Invalid(format!(
                "state has negative eigenvalue {min:.3e}"
            )));
        }
        Ok(Self {
            rho,
            dims,
            label: label.into(),
        })
    }

    pub fn rho(&self) -> &ComplexMatrix {
        &self.rho
    }

    pub fn dims(&self) -> (usize, usize) {
        self.dims
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn shape(&self) -> HilbertShape {
        HilbertShape::new(vec![self.dims.0, self.dims.1]).unwrap()
    }

    pub fn reduced_a(&self) -> ComplexMatrix {
        partial_trace(&self.rho, &self.shape(), &[0]).unwrap()
    }

    pub fn reduced_b(&self) -> ComplexMatrix {
        partial_trace(&self.rho, &self.shape(), &[1]).unwrap()
    }

    /// Partial transpose on B.
    pub fn partial_transpose(&self) -> ComplexMatrix {
        partial_transpose(&self.rho, &self.shape(), &[1]).unwrap()
    }

    /// Smallest eigenvalue of the partial transpose.
    pub fn min_partial_transpose_eigenvalue(&self) -> f64 {
        hermitian_eigenvalues(&self.partial_transpose()).unwrap()[0]
    }

    pub fn is_ppt(&self, tol: f64) -> bool {
        self.min_partial_transpose_eigenvalue() >= -tol
    }

    /// The same state with the roles of A and B exchanged.
    pub fn swapped(&self) -> Self {
        let shape = self.shape();
        let swap = permutation_op(&[1, 0], &shape);
        let rho = match swap {
            Ok(p) => p.matmul(&self.rho).matmul(&p.adjoint()),
            // Unequal local dimensions: permute indices directly.
            Err(_) => {
                let (da, db) = self.dims;
                ComplexMatrix::from_fn(da * db, da * db, |r, c| {
                    let (rb, ra) = (r / da, r % da);
                    let (cb, ca) = (c / da, c % da);
                    self.rho[(ra * db + rb, ca * db + cb)]
                })
            }
        };
        Self {
            rho,
            dims: (self.dims.1, self.dims.0),
            label: format!("{} (swapped)", self.label),
        }
    }
}

/// `ρ_W = (I(d − Φ) + (dΦ − 1)V) / (d³ − d)` with `Φ = Tr(ρ_W V)`.
pub fn werner(d: usize, phi: f64) -> Result<BipartiteState> {
    if d < 2 {
        return Err(Error::ParameterOutOfRange(format!("Werner dimension {d} < 2")));
    }
    if !(-1.0..=1.0).contains(&phi) {
        return Err(Error::ParameterOutOfRange(format!(
            "Werner parameter {phi} outside [-1, 1]"
        )));
    }
    let df = d as f64;
    let shape = HilbertShape::uniform(d, 2)?;
    let flip = permutation_op(&[1, 0], &shape)?;
    let mut rho = flip.scale((df * phi - 1.0) / (df * df * df - df));
    rho.add_identity((df - phi) / (df * df * df - df));
    BipartiteState::new(rho, (d, d), format!("werner(d={d},phi={phi})"))
}

/// Choi-Horodecki family on 3×3:
/// `ρ_α = (2/7)P₊ + (α/7)σ₊ + ((5 − α)/7)σ₋`.
pub fn choi_horodecki(alpha: f64) -> Result<BipartiteState> {
    if !(2.0..=5.0).contains(&alpha) {
        return Err(Error::ParameterOutOfRange(format!(
            "Choi-Horodecki alpha {alpha} outside [2, 5]"
        )));
    }
    let d = 3;
    let mut rho = ComplexMatrix::zeros(9, 9);
    let third = 1.0 / 3.0;
    // P₊ = |Ψ⟩⟨Ψ| with |Ψ⟩ = Σ|ii⟩/√3
    for i in 0..d {
        for j in 0..d {
            rho[(i * d + i, j * d + j)] = C64::new(2.0 / 7.0 * third, 0.0);
        }
    }
    for (i, j) in [(0, 1), (1, 2), (2, 0)] {
        rho[(i * d + j, i * d + j)] += C64::new(alpha / 7.0 * third, 0.0);
        rho[(j * d + i, j * d + i)] += C64::new((5.0 - alpha) / 7.0 * third, 0.0);
    }
    BipartiteState::new(rho, (3, 3), format!("choi_horodecki(alpha={alpha})"))
}

/// Normalized `Σ_i |ii⟩ / √d`.
pub fn max_entangled(d: usize) -> Result<BipartiteState> {
    if d == 0 {
        return Err(Error::ParameterOutOfRange("dimension must be positive".to_string()));
    }
    let mut v = vec![C64::new(0.0, 0.0); d * d];
    let amp = 1.0 / (d as f64).sqrt();
    for i in 0..d {
        v[i * d + i] = C64::new(amp, 0.0);
    }
    BipartiteState::new(ComplexMatrix::projector(&v), (d, d), format!("max_entangled(d={d})"))
}

/// Real unextendible product basis: product vectors `|a_i⟩⊗|b_i⟩`.
#[derive(Clone, Debug, PartialEq)]
pub struct UpbSpec {
    pub d_a: usize,
    pub d_b: usize,
    pub vectors: Vec<(Vec<f64>, Vec<f64>)>,
}

impl UpbSpec {
    /// Checks unit norms (1e-12) and pairwise orthogonality of the product
    /// vectors (1e-10).
    pub fn new(d_a: usize, d_b: usize, vectors: Vec<(Vec<f64>, Vec<f64>)>) -> Result<Self> {
        for (i, (a, b)) in vectors.iter().enumerate() {
            if a.len() != d_a || b.len() != d_b {
                return Err(Error::DimensionMismatch(format!("UPB member {i} has wrong length")));
            }
            for v in [a, b] {
                let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
                if (norm - 1.0).abs() > 1e-12 {
                    return Err(Error::Invalid(format!("UPB member {i} is not unit norm")));
                }
            }
        }
        let spec = Self { d_a, d_b, vectors };
        let gram = spec.gram();
        for i in 0..gram.len() {
            for j in 0..gram.len() {
                let expected = if i == j { 1.0 } else { 0.0 };
                if (gram[i][j] - expected).abs() > 1e-10 {
                    return Err(Error::Invalid(format!(
                        "UPB members {i} and {j} have overlap {}",
                        gram[i][j]
                    )));
                }
            }
        }
        Ok(spec)
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    /// Product vector `|a_i⟩⊗|b_i⟩` as complex amplitudes.
    pub fn product_vector(&self, i: usize) -> Vec<C64> {
        let (a, b) = &self.vectors[i];
        a.iter()
            .flat_map(|&x| b.iter().map(move |&y| C64::new(x * y, 0.0)))
            .collect()
    }

    /// Overlaps `⟨a_i b_i | a_j b_j⟩`.
    pub fn gram(&self) -> Vec<Vec<f64>> {
        let dot = |u: &[f64], v: &[f64]| u.iter().zip(v).map(|(x, y)| x * y).sum::<f64>();
        self.vectors
            .iter()
            .map(|(ai, bi)| {
                self.vectors
                    .iter()
                    .map(|(aj, bj)| dot(ai, aj) * dot(bi, bj))
                    .collect()
            })
            .collect()
    }

    /// `P_BE = I − Σ_i |a_i b_i⟩⟨a_i b_i|` (unnormalized).
    pub fn complement_projector(&self) -> ComplexMatrix {
        let n = self.d_a * self.d_b;
        let mut p = ComplexMatrix::identity(n);
        for i in 0..self.len() {
            p -= &ComplexMatrix::projector(&self.product_vector(i));
        }
        p
    }
}

fn normalized(v: &[f64]) -> Vec<f64> {
    let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.iter().map(|x| x / n).collect()
}

/// The 3×3 "Tiles" UPB.
pub fn tiles_upb() -> UpbSpec {
    let h = 0.5f64.sqrt();
    let t = 1.0 / 3.0f64.sqrt();
    let vectors = vec![
        (vec![1.0, 0.0, 0.0], vec![h, -h, 0.0]),
        (vec![0.0, 0.0, 1.0], vec![0.0, h, -h]),
        (vec![h, -h, 0.0], vec![0.0, 0.0, 1.0]),
        (vec![0.0, h, -h], vec![1.0, 0.0, 0.0]),
        (vec![t, t, t], vec![t, t, t]),
    ];
    UpbSpec::new(3, 3, vectors).expect("Tiles UPB is orthonormal")
}

/// The 3×3 "Pyramid" UPB: `|v_j⟩⊗|v_{2j mod 5}⟩` with
/// `|v_j⟩ ∝ (cos(2πj/5), sin(2πj/5), h)` and `h = ½√(1+√5)`.
pub fn pyramid_upb() -> UpbSpec {
    let h = 0.5 * (1.0 + 5.0f64.sqrt()).sqrt();
    let v = |j: usize| {
        let angle = 2.0 * PI * j as f64 / 5.0;
        normalized(&[angle.cos(), angle.sin(), h])
    };
    let vectors = (0..5).map(|j| (v(j), v((2 * j) % 5))).collect();
    UpbSpec::new(3, 3, vectors).expect("Pyramid UPB is orthonormal")
}

/// `P_BE / Tr P_BE`.
pub fn upb_state(upb: &UpbSpec) -> Result<BipartiteState> {
    let p = upb.complement_projector();
    let rank = (upb.d_a * upb.d_b - upb.len()) as f64;
    BipartiteState::new(p.scale(1.0 / rank), (upb.d_a, upb.d_b), "upb_state")
}

/// Explicit ensemble `Σ_i p_i |ψ_i⟩⟨ψ_i| ⊗ |φ_i⟩⟨φ_i|`.
#[derive(Clone, Debug)]
pub struct SeparableEnsemble {
    pub dims: (usize, usize),
    pub weights: Vec<f64>,
    pub a_vectors: Vec<Vec<C64>>,
    pub b_vectors: Vec<Vec<C64>>,
}

impl SeparableEnsemble {
    pub fn density_matrix(&self) -> ComplexMatrix {
        let n = self.dims.0 * self.dims.1;
        let mut rho = ComplexMatrix::zeros(n, n);
        for ((p, a), b) in self.weights.iter().zip(&self.a_vectors).zip(&self.b_vectors) {
            let term = kron(&ComplexMatrix::projector(a), &ComplexMatrix::projector(b));
            rho.axpy(*p, &term);
        }
        rho
    }

    pub fn state(&self) -> Result<BipartiteState> {
        let mut rho = self.density_matrix();
        rho.make_hermitian();
        BipartiteState::new(rho, self.dims, format!("random_separable(k={})", self.weights.len()))
    }
}

/// Random `k`-term separable ensemble with Dirichlet(1) weights and Haar
/// random local pure states. Deterministic per seed.
pub fn random_separable_ensemble(d_a: usize, d_b: usize, k: usize, seed: u64) -> Result<SeparableEnsemble> {
    if d_a == 0 || d_b == 0 || k == 0 {
        return Err(Error::ParameterOutOfRange(
            "dimensions and term count must be positive".to_string(),
        ));
    }
    let mut rng = SplitRng::new(seed);
    let raw: Vec<f64> = (0..k).map(|_| -(1.0 - rng.uniform()).ln() + 1e-12).collect();
    let total: f64 = raw.iter().sum();
    let weights = raw.iter().map(|w| w / total).collect();
    let a_vectors = (0..k).map(|_| rng.unit_vector(d_a)).collect();
    let b_vectors = (0..k).map(|_| rng.unit_vector(d_b)).collect();
    Ok(SeparableEnsemble {
        dims: (d_a, d_b),
        weights,
        a_vectors,
        b_vectors,
    })
}

pub fn random_separable(d_a: usize, d_b: usize, k: usize, seed: u64) -> Result<BipartiteState> {
    random_separable_ensemble(d_a, d_b, k, seed)?.state()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn flip(d: usize) -> ComplexMatrix {
        permutation_op(&[1, 0], &HilbertShape::uniform(d, 2).unwrap()).unwrap()
    }

    #[test]
    fn werner_extremes() {
        // Φ = 1: symmetric projector / 3.
        let sym = werner(2, 1.0).unwrap();
        let mut expected = ComplexMatrix::identity(4);
        expected += &flip(2);
        assert!(sym.rho().max_abs_diff(&expected.scale(1.0 / 6.0)) < 1e-15);
        // Φ = −1: singlet.
        let s = 0.5f64.sqrt();
        let singlet = [C64::new(0.0, 0.0), C64::new(s, 0.0), C64::new(-s, 0.0), C64::new(0.0, 0.0)];
        let w = werner(2, -1.0).unwrap();
        assert!(w.rho().max_abs_diff(&ComplexMatrix::projector(&singlet)) < 1e-15);
    }

    #[test]
    fn werner_flip_expectation() {
        let w = werner(3, -0.7).unwrap();
        assert!((w.rho().trace_product(&flip(3)).re + 0.7).abs() < 1e-12);
        assert!((w.rho().trace().re - 1.0).abs() < 1e-12);
        assert!(hermitian_eigenvalues(w.rho()).unwrap()[0] >= -1e-12);
        assert!(werner(3, 1.2).is_err());
        assert!(werner(1, 0.0).is_err());
    }

    #[test]
    fn choi_horodecki_ppt_ranges() {
        assert!(choi_horodecki(4.5).unwrap().min_partial_transpose_eigenvalue() < -1e-3);
        assert!(choi_horodecki(3.5).unwrap().is_ppt(1e-10));
        assert!(choi_horodecki(1.9).is_err());
        // Affine in alpha.
        let mid = choi_horodecki(3.25).unwrap();
        let mut avg = choi_horodecki(2.5).unwrap().rho().clone();
        avg += choi_horodecki(4.0).unwrap().rho();
        assert!(mid.rho().max_abs_diff(&avg.scale(0.5)) < 1e-15);
    }

    #[test]
    fn upbs_are_real_and_orthonormal() {
        for upb in [tiles_upb(), pyramid_upb()] {
            assert_eq!(upb.len(), 5);
            let gram = upb.gram();
            for i in 0..5 {
                for j in 0..5 {
                    let expected = if i == j { 1.0 } else { 0.0 };
                    assert!((gram[i][j] - expected).abs() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn upb_state_is_ppt_rank_four() {
        for upb in [tiles_upb(), pyramid_upb()] {
            let state = upb_state(&upb).unwrap();
            let eig = hermitian_eigenvalues(state.rho()).unwrap();
            let rank = eig.iter().filter(|&&x| x > 1e-10).count();
            assert_eq!(rank, 4);
            assert!(state.is_ppt(1e-10));
            let p = upb.complement_projector();
            for i in 0..upb.len() {
                let v = p.apply(&upb.product_vector(i));
                assert!(v.iter().all(|z| z.norm() < 1e-12));
            }
        }
    }

    #[test]
    fn max_entangled_reductions() {
        let s = max_entangled(2).unwrap();
        let half = ComplexMatrix::identity(2).scale(0.5);
        assert!(s.reduced_a().max_abs_diff(&half) < 1e-15);
        assert!(s.reduced_b().max_abs_diff(&half) < 1e-15);
    }

    #[test]
    fn random_separable_is_ppt_and_deterministic() {
        let a = random_separable(3, 3, 6, 1).unwrap();
        let b = random_separable(3, 3, 6, 1).unwrap();
        assert_eq!(a, b);
        assert!(a.is_ppt(1e-10));
        assert_ne!(a, random_separable(3, 3, 6, 2).unwrap());
    }

    #[test]
    fn swapping_parties_twice_is_identity() {
        let s = random_separable(2, 3, 4, 5).unwrap();
        let back = s.swapped().swapped();
        assert!(back.rho().max_abs_diff(s.rho()) < 1e-15);
        assert_eq!(s.swapped().dims(), (3, 2));
    }
}
