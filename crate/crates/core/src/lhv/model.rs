use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use super::povm::{contract_factor, PovmSet};
use super::scenario::{MeasurementScenario, ProbabilityVector};
use crate::error::{Error, Result};
use crate::tensor::ComplexMatrix;

const WEIGHT_TOL: f64 = 1e-10;
const SUM_TOL: f64 = 1e-8;
/// Below this the one-sided denominator is treated as zero.
pub const DENOMINATOR_FLOOR: f64 = 1e-12;

/// Weights over deterministic strategies, stored in the lexicographic
/// order of [`MeasurementScenario::vertex_index`].
#[derive(Clone, Debug, PartialEq)]
pub struct LhvModel {
    scenario: MeasurementScenario,
    weights: Vec<f64>,
}

impl LhvModel {
    /// Checks that weights are `≥ -1e-10` and sum to one within 1e-8.
    pub fn new(scenario: MeasurementScenario, weights: Vec<f64>) -> Result<Self> {
        let model = Self::from_raw(scenario, weights)?;
        if model.min_weight() < -WEIGHT_TOL {
            return Err(Error::Invalid(format!("negative weight {:.3e}", model.min_weight())));
        }
        if (model.total() - 1.0).abs() > SUM_TOL {
            return Err(Error::Invalid(format!("weights sum to {}", model.total())));
        }
        Ok(model)
    }

    /// No sign or normalization checks.
    pub fn from_raw(scenario: MeasurementScenario, weights: Vec<f64>) -> Result<Self> {
        if weights.len() != scenario.vertex_count()? {
            return Err(Error::DimensionMismatch(format!(
                "{} weights for {} strategies",
                weights.len(),
                scenario.vertex_count()?
            )));
        }
        Ok(Self { scenario, weights })
    }

    pub fn scenario(&self) -> &MeasurementScenario {
        &self.scenario
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn weight(&self, m: &[usize], n: &[usize]) -> Result<f64> {
        Ok(self.weights[self.scenario.vertex_index(m, n)?])
    }

    /// `(m, n, p_{m,n})` in storage order.
    pub fn iter(&self) -> impl Iterator<Item = (Vec<usize>, Vec<usize>, f64)> + '_ {
        self.weights.iter().enumerate().map(|(v, &p)| {
            let (m, n) = self.scenario.strategy(v);
            (m, n, p)
        })
    }

    pub fn total(&self) -> f64 {
        self.weights.iter().sum()
    }

    pub fn min_weight(&self) -> f64 {
        self.weights.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

/// `Σ_{m,n} p_{m,n} B^{m,n}`.
pub fn reconstruct(model: &LhvModel) -> ProbabilityVector {
    let sc = model.scenario();
    let mut entries = vec![0.0; sc.len()];
    for (digits, &p) in sc.strategies().zip(model.weights()) {
        if p == 0.0 {
            continue;
        }
        let (m, n) = digits.split_at(sc.s_a());
        for (i, &mi) in m.iter().enumerate() {
            for (k, &nk) in n.iter().enumerate() {
                entries[sc.index(i, mi, k, nk)] += p;
            }
        }
    }
    ProbabilityVector::from_raw(sc.clone(), entries)
}

fn check_dim(h: &ComplexMatrix, dims: &[usize]) -> Result<()> {
    let n = dims
        .iter()
        .try_fold(1usize, |acc, &d| acc.checked_mul(d))
        .ok_or_else(|| Error::DimensionMismatch("certificate dimension overflows".into()))?;
    if !h.is_square() || h.rows() != n {
        return Err(Error::DimensionMismatch(format!(
            "certificate is {}x{}, expected {n} for local dimensions {dims:?}",
            h.rows(),
            h.cols()
        )));
    }
    Ok(())
}

/// Weights `p_{m,n} = Tr (E^A_m ⊗ E^B_n) H` from a certificate on
/// `A^{⊗s_a} ⊗ B^{⊗s_b}`, Alice's setting `i` measured on copy `i`.
pub fn lhv_from_extension(h: &ComplexMatrix, a: &PovmSet, b: &PovmSet) -> Result<LhvModel> {
    let scenario = MeasurementScenario::new(a.outcome_counts(), b.outcome_counts())?;
    let factors: Vec<(&PovmSet, usize)> = (0..a.len()).map(|i| (a, i)).chain((0..b.len()).map(|k| (b, k))).collect();
    let dims: Vec<usize> = factors.iter().map(|(p, _)| p.dim()).collect();
    check_dim(h, &dims)?;
    let mut weights = Vec::with_capacity(scenario.vertex_count()?);
    descend(h, &dims, &factors, &mut weights);
    LhvModel::from_raw(scenario, weights)
}

fn descend(m: &ComplexMatrix, dims: &[usize], factors: &[(&PovmSet, usize)], out: &mut Vec<f64>) {
    match factors.split_first() {
        None => out.push(m[(0, 0)].re),
        Some(((povm, setting), rest)) => {
            for e in &povm.settings()[*setting] {
                let reduced = contract_factor(m, dims, 0, e);
                descend(&reduced, &dims[1..], rest, out);
            }
        }
    }
}

/// Product-form weights for a certificate on `A ⊗ B^{⊗s_b}` and any
/// number of Alice settings:
/// `p_{m,n} = Π_i Tr (E^A_{i m_i} ⊗ E^B_n) H / (Tr (I ⊗ E^B_n) H)^{s_a-1}`.
///
/// When the denominator is at most [`DENOMINATOR_FLOOR`] the weight is 0.
pub fn lhv_from_one_sided(h: &ComplexMatrix, a: &PovmSet, b: &PovmSet) -> Result<LhvModel> {
    one_sided(h, a, b, Side::Alice)
}

/// Mirror image of [`lhv_from_one_sided`]: certificate on
/// `A^{⊗s_a} ⊗ B` and any number of Bob settings.
pub fn lhv_from_one_sided_bob(h: &ComplexMatrix, a: &PovmSet, b: &PovmSet) -> Result<LhvModel> {
    one_sided(h, a, b, Side::Bob)
}

#[derive(Clone, Copy, PartialEq)]
enum Side {
    Alice,
    Bob,
}

fn one_sided(h: &ComplexMatrix, a: &PovmSet, b: &PovmSet, free: Side) -> Result<LhvModel> {
    let scenario = MeasurementScenario::new(a.outcome_counts(), b.outcome_counts())?;
    let (single, copied) = match free {
        Side::Alice => (a, b),
        Side::Bob => (b, a),
    };
    let dims: Vec<usize> = match free {
        Side::Alice => core::iter::once(a.dim()).chain(core::iter::repeat(b.dim()).take(b.len())).collect(),
        Side::Bob => core::iter::repeat(a.dim()).take(a.len()).chain(core::iter::once(b.dim())).collect(),
    };
    check_dim(h, &dims)?;
    let copied_pos = match free {
        Side::Alice => 1,
        Side::Bob => 0,
    };

    let copied_scenario = MeasurementScenario::new(copied.outcome_counts(), alloc::vec![1])?;
    let exponent = single.len() as i32 - 1;
    let mut weights = vec![0.0; scenario.vertex_count()?];
    for digits in copied_scenario.strategies() {
        let strategy = &digits[..copied.len()];
        let mut g = h.clone();
        let mut gd = dims.clone();
        for (setting, &outcome) in strategy.iter().enumerate() {
            g = contract_factor(&g, &gd, copied_pos, copied.element(setting, outcome));
            gd.remove(copied_pos);
        }
        let denom = g.trace().re;
        let t: Vec<Vec<f64>> = single
            .settings()
            .iter()
            .map(|s| s.iter().map(|e| e.trace_product(&g).re).collect())
            .collect();
        let single_scenario = MeasurementScenario::new(single.outcome_counts(), alloc::vec![1])?;
        for sd in single_scenario.strategies() {
            let own = &sd[..single.len()];
            let p = if denom <= DENOMINATOR_FLOOR {
                0.0
            } else {
                own.iter().enumerate().map(|(i, &j)| t[i][j]).product::<f64>() / denom.powi(exponent)
            };
            let v = match free {
                Side::Alice => scenario.vertex_index(own, strategy)?,
                Side::Bob => scenario.vertex_index(strategy, own)?,
            };
            weights[v] = p;
        }
    }
    LhvModel::from_raw(scenario, weights)
}
