use alloc::format;
use alloc::string::ToString;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use num_complex::Complex64 as C64;

use super::scenario::{MeasurementScenario, ProbabilityVector};
use crate::error::{Error, Result};
use crate::rng::SplitRng;
use crate::states::BipartiteState;
use crate::tensor::{hermitian_eig, hermitian_eigenvalues, ComplexMatrix, HERMITIAN_BOUNDARY_TOL};

const POVM_TOL: f64 = 1e-10;

/// One party's measurements: for each setting, the POVM elements in
/// outcome order.
#[derive(Clone, Debug, PartialEq)]
pub struct PovmSet {
    dim: usize,
    settings: Vec<Vec<ComplexMatrix>>,
}

impl PovmSet {
    /// Checks that every element is Hermitian and `⪰ -1e-10·I`, and that
    /// each setting sums to the identity within 1e-10.
    pub fn new(settings: Vec<Vec<ComplexMatrix>>) -> Result<Self> {
        let dim = settings
            .first()
            .and_then(|s| s.first())
            .map(ComplexMatrix::rows)
            .ok_or_else(|| Error::Invalid("a POVM set needs at least one setting with one element".to_string()))?;
        for (i, setting) in settings.iter().enumerate() {
            if setting.is_empty() {
                return Err(Error::Invalid(format!("setting {i} has no elements")));
            }
            let mut sum = ComplexMatrix::zeros(dim, dim);
            for e in setting {
                if !e.is_square() || e.rows() != dim {
                    return Err(Error::DimensionMismatch(format!(
                        "POVM element of shape {}x{} in a set of dimension {dim}",
                        e.rows(),
                        e.cols()
                    )));
                }
                e.require_hermitian(HERMITIAN_BOUNDARY_TOL)?;
                let min = hermitian_eigenvalues(&e.hermitian_part())?[0];
                if min < -POVM_TOL {
                    return Err(Error::Invalid(format!(
                        "POVM element of setting {i} has eigenvalue {min:.3e}"
                    )));
                }
                sum += e;
            }
            let dev = sum.max_abs_diff(&ComplexMatrix::identity(dim));
            if dev > POVM_TOL {
                return Err(Error::Invalid(format!(
                    "elements of setting {i} sum to the identity only within {dev:.3e}"
                )));
            }
        }
        Ok(Self { dim, settings })
    }

    /// Projective measurements in the bases given by the columns of each
    /// unitary.
    pub fn projective(bases: &[ComplexMatrix]) -> Result<Self> {
        let settings = bases
            .iter()
            .map(|u| (0..u.cols()).map(|c| ComplexMatrix::projector(&u.column(c))).collect())
            .collect();
        Self::new(settings)
    }

    /// Random full-rank POVMs `E_j = S^{-1/2} G_j S^{-1/2}` with `G_j`
    /// complex Wishart and `S = Σ_j G_j`.
    pub fn random(dim: usize, outcomes: &[usize], seed: u64) -> Result<Self> {
        if dim == 0 || outcomes.is_empty() || outcomes.contains(&0) {
            return Err(Error::ParameterOutOfRange(
                "POVMs need a positive dimension and outcome counts".to_string(),
            ));
        }
        let mut rng = SplitRng::new(seed);
        let mut settings = Vec::with_capacity(outcomes.len());
        for &o in outcomes {
            let gs: Vec<ComplexMatrix> = (0..o)
                .map(|_| {
                    let a = ComplexMatrix::from_fn(dim, dim, |_, _| rng.complex_normal());
                    a.matmul(&a.adjoint())
                })
                .collect();
            let mut s = ComplexMatrix::zeros(dim, dim);
            for g in &gs {
                s += g;
            }
            s.make_hermitian();
            let inv_sqrt = hermitian_eig(&s)?.map(|x| 1.0 / x.sqrt());
            let mut elements: Vec<ComplexMatrix> = gs
                .iter()
                .map(|g| {
                    let mut e = inv_sqrt.matmul(g).matmul(&inv_sqrt);
                    e.make_hermitian();
                    e
                })
                .collect();
            // Absorb rounding into the last element so the sum is exact.
            let mut rest = ComplexMatrix::identity(dim);
            for e in &elements[..o - 1] {
                rest -= e;
            }
            rest.make_hermitian();
            elements[o - 1] = rest;
            settings.push(elements);
        }
        Self::new(settings)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn settings(&self) -> &[Vec<ComplexMatrix>] {
        &self.settings
    }

    pub fn len(&self) -> usize {
        self.settings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.settings.is_empty()
    }

    pub fn outcome_counts(&self) -> Vec<usize> {
        self.settings.iter().map(Vec::len).collect()
    }

    pub fn element(&self, setting: usize, outcome: usize) -> &ComplexMatrix {
        &self.settings[setting][outcome]
    }
}

/// `Tr_k[(I ⊗ E ⊗ I) M]` for factor `k` of a matrix on `dims`.
pub(crate) fn contract_factor(m: &ComplexMatrix, dims: &[usize], k: usize, e: &ComplexMatrix) -> ComplexMatrix {
    let left: usize = dims[..k].iter().product();
    let d = dims[k];
    let right: usize = dims[k + 1..].iter().product();
    let n = left * right;
    let mut out = ComplexMatrix::zeros(n, n);
    let nz: Vec<(usize, usize, C64)> = (0..d)
        .flat_map(|a| (0..d).map(move |b| (a, b)))
        .map(|(a, b)| (a, b, e[(a, b)]))
        .filter(|t| t.2 != C64::new(0.0, 0.0))
        .collect();
    let idx = |x: usize, a: usize, y: usize| (x * d + a) * right + y;
    for x in 0..left {
        for y in 0..right {
            let r = x * right + y;
            for xp in 0..left {
                for yp in 0..right {
                    let mut acc = C64::new(0.0, 0.0);
                    for &(a, b, w) in &nz {
                        acc += w * m[(idx(x, b, y), idx(xp, a, yp))];
                    }
                    out[(r, xp * right + yp)] = acc;
                }
            }
        }
    }
    out
}

/// `P_{ij,kl} = Tr (E^A_{ij} ⊗ E^B_{kl}) ρ`.
pub fn quantum_probabilities(rho: &BipartiteState, a: &PovmSet, b: &PovmSet) -> Result<ProbabilityVector> {
    let (d_a, d_b) = rho.dims();
    if a.dim() != d_a || b.dim() != d_b {
        return Err(Error::DimensionMismatch(format!(
            "POVMs act on {}x{}, state is {d_a}x{d_b}",
            a.dim(),
            b.dim()
        )));
    }
    let scenario = MeasurementScenario::new(a.outcome_counts(), b.outcome_counts())?;
    let mut entries = alloc::vec![0.0; scenario.len()];
    for (i, sa) in a.settings().iter().enumerate() {
        for (j, ea) in sa.iter().enumerate() {
            let g = contract_factor(rho.rho(), &[d_a, d_b], 0, ea);
            for (k, sb) in b.settings().iter().enumerate() {
                for (l, eb) in sb.iter().enumerate() {
                    entries[scenario.index(i, j, k, l)] = eb.trace_product(&g).re;
                }
            }
        }
    }
    Ok(ProbabilityVector::from_raw(scenario, entries))
}
