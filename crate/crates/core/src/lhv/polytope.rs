//! Membership in the local polytope.
//!
//! The feasibility problem is posed as a white-noise visibility LP: the
//! largest `w ≤ 1` for which `w·p + (1-w)·u` is a convex combination of
//! strategies, `u` being the uniform vector. Constraints are imposed on
//! Collins-Gisin coordinates (joint probabilities with no last outcome,
//! plus marginals and normalization), which are linearly independent on
//! the strategies. Signalling vectors are rejected up front with a
//! signalling functional.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use num_complex::Complex64 as C64;

use super::model::{reconstruct, LhvModel};
use super::scenario::{MeasurementScenario, ProbabilityVector};
use crate::error::{Error, Result};
use crate::sdp::{solve, Block, BlockMatrix, BlockValue, SdpStandardForm, SparseBlock};

/// Largest vertex count accepted.
pub const MAX_VERTICES: usize = 1_000_000;
const LP_TOL: f64 = 1e-9;
const INSIDE_TOL: f64 = 1e-8;
const SIGNALLING_TOL: f64 = 1e-9;

/// Linear functional `f·P ≤ local_bound` valid for every local model.
#[derive(Clone, Debug, PartialEq)]
pub struct BellFunctional {
    pub coefficients: Vec<f64>,
    pub local_bound: f64,
    /// `f·p` for the tested vector.
    pub value: f64,
}

impl BellFunctional {
    pub fn margin(&self) -> f64 {
        self.value - self.local_bound
    }

    /// Same hyperplane with coefficients scaled so the local bound equals
    /// `bound`. Only meaningful for a positive local bound.
    pub fn rescaled(&self, bound: f64) -> Self {
        let s = bound / self.local_bound;
        Self {
            coefficients: self.coefficients.iter().map(|c| c * s).collect(),
            local_bound: bound,
            value: self.value * s,
        }
    }
}

#[derive(Clone, Debug)]
pub enum Membership {
    Inside {
        model: LhvModel,
        /// `max |reconstruct(model) - p|`.
        residual: f64,
    },
    Outside {
        functional: BellFunctional,
        /// Largest white-noise visibility still inside the polytope.
        visibility: f64,
    },
}

impl Membership {
    pub fn is_inside(&self) -> bool {
        matches!(self, Membership::Inside { .. })
    }
}

/// Entries of each Collins-Gisin row with their coefficients.
fn collins_gisin_rows(sc: &MeasurementScenario) -> Vec<Vec<(usize, f64)>> {
    let mut rows = Vec::new();
    rows.push((0..sc.o_a()[0]).flat_map(|j| (0..sc.o_b()[0]).map(move |l| (j, l))).map(|(j, l)| (sc.index(0, j, 0, l), 1.0)).collect());
    for (i, &oa) in sc.o_a().iter().enumerate() {
        for j in 0..oa - 1 {
            rows.push((0..sc.o_b()[0]).map(|l| (sc.index(i, j, 0, l), 1.0)).collect());
        }
    }
    for (k, &ob) in sc.o_b().iter().enumerate() {
        for l in 0..ob - 1 {
            rows.push((0..sc.o_a()[0]).map(|j| (sc.index(0, j, k, l), 1.0)).collect());
        }
    }
    for (i, &oa) in sc.o_a().iter().enumerate() {
        for (k, &ob) in sc.o_b().iter().enumerate() {
            for j in 0..oa - 1 {
                for l in 0..ob - 1 {
                    rows.push(vec![(sc.index(i, j, k, l), 1.0)]);
                }
            }
        }
    }
    rows
}

fn hit_entries(sc: &MeasurementScenario, digits: &[usize], out: &mut Vec<usize>) {
    out.clear();
    let (m, n) = digits.split_at(sc.s_a());
    for (i, &mi) in m.iter().enumerate() {
        for (k, &nk) in n.iter().enumerate() {
            out.push(sc.index(i, mi, k, nk));
        }
    }
}

/// Decides whether `p` lies in the local polytope of its scenario.
pub fn polytope_membership(p: &ProbabilityVector) -> Result<Membership> {
    let sc = p.scenario();
    let nv = sc.vertex_count()?;
    if nv > MAX_VERTICES {
        return Err(Error::DimensionCap { dim: nv, cap: MAX_VERTICES });
    }

    let (signal, f) = p.signalling();
    if signal > SIGNALLING_TOL {
        return Ok(Membership::Outside {
            functional: BellFunctional {
                coefficients: f,
                local_bound: 0.0,
                value: signal,
            },
            visibility: 0.0,
        });
    }

    let rows = collins_gisin_rows(sc);
    let mut by_entry: Vec<Vec<(usize, f64)>> = vec![Vec::new(); sc.len()];
    for (r, row) in rows.iter().enumerate() {
        for &(e, c) in row {
            by_entry[e].push((r, c));
        }
    }
    let u = sc.uniform_vector();
    let eval = |row: &[(usize, f64)], x: &[f64]| row.iter().map(|&(e, c)| c * x[e]).sum::<f64>();

    // Variables: q_0..q_{N-1}, w, t.
    let (w_pos, t_pos) = (nv, nv + 1);
    let mut triplets: Vec<Vec<(usize, usize, C64)>> = vec![Vec::new(); rows.len() + 1];
    let mut hits = Vec::new();
    for (v, digits) in sc.strategies().enumerate() {
        hit_entries(sc, &digits, &mut hits);
        for &e in &hits {
            for &(r, c) in &by_entry[e] {
                triplets[r].push((v, v, C64::new(c, 0.0)));
            }
        }
    }
    let mut c = Vec::with_capacity(rows.len() + 1);
    for (r, row) in rows.iter().enumerate() {
        let (ap, au) = (eval(row, p.entries()), eval(row, u.entries()));
        triplets[r].push((w_pos, w_pos, C64::new(au - ap, 0.0)));
        c.push(au);
    }
    let cap = rows.len();
    triplets[cap].push((w_pos, w_pos, C64::new(1.0, 0.0)));
    triplets[cap].push((t_pos, t_pos, C64::new(1.0, 0.0)));
    c.push(1.0);

    let fs: Vec<BlockMatrix> = triplets
        .into_iter()
        .map(|t| BlockMatrix::new(vec![SparseBlock::from_triplets(t)]))
        .collect();
    let f0 = BlockMatrix::new(vec![SparseBlock::from_triplets(vec![(w_pos, w_pos, C64::new(-1.0, 0.0))])]);
    let problem = SdpStandardForm::new(vec![Block::diagonal(nv + 2)], f0, fs, c)?;
    let result = solve(&problem, LP_TOL)?;
    if !result.is_optimal() {
        return Err(Error::Invalid(format!("membership LP ended with status {:?}", result.status)));
    }
    let z = match &result.z.blocks[0] {
        BlockValue::Diagonal(d) => d.clone(),
        BlockValue::Dense(_) => unreachable!("diagonal block"),
    };
    let visibility = z[w_pos];

    if visibility >= 1.0 - INSIDE_TOL {
        let mut q: Vec<f64> = z[..nv].iter().map(|&x| x.max(0.0)).collect();
        let total: f64 = q.iter().sum();
        q.iter_mut().for_each(|x| *x /= total);
        let model = LhvModel::from_raw(sc.clone(), q)?;
        let residual = reconstruct(&model).max_abs_diff(p);
        return Ok(Membership::Inside { model, residual });
    }

    let mut g = vec![0.0; sc.len()];
    for (row, &x) in rows.iter().zip(&result.x) {
        for &(e, coef) in row {
            g[e] -= x * coef;
        }
    }
    let shift = u.dot(&g) / (sc.s_a() * sc.s_b()) as f64;
    g.iter_mut().for_each(|x| *x -= shift);
    let mut bound = f64::NEG_INFINITY;
    for digits in sc.strategies() {
        hit_entries(sc, &digits, &mut hits);
        bound = bound.max(hits.iter().map(|&e| g[e]).sum());
    }
    let scale = 1.0 / bound;
    let functional = BellFunctional {
        value: p.dot(&g) * scale,
        coefficients: g.into_iter().map(|x| x * scale).collect(),
        local_bound: 1.0,
    };
    Ok(Membership::Outside { functional, visibility })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lhv::{b_vector, quantum_probabilities, PovmSet};
    use crate::states::werner;
    use crate::tensor::ComplexMatrix;

    fn qubit_basis(theta: f64) -> ComplexMatrix {
        let (c, s) = ((theta / 2.0).cos(), (theta / 2.0).sin());
        ComplexMatrix::from_real(2, 2, &[c, -s, s, c]).unwrap()
    }

    fn chsh_povms() -> (PovmSet, PovmSet) {
        use core::f64::consts::FRAC_PI_4;
        let a = PovmSet::projective(&[qubit_basis(0.0), qubit_basis(2.0 * FRAC_PI_4)]).unwrap();
        let b = PovmSet::projective(&[qubit_basis(FRAC_PI_4), qubit_basis(-FRAC_PI_4)]).unwrap();
        (a, b)
    }

    #[test]
    fn collins_gisin_rows_are_independent_on_vertices() {
        for sc in [
            MeasurementScenario::uniform(2, 2, 2).unwrap(),
            MeasurementScenario::new(vec![3, 2], vec![2, 2, 3]).unwrap(),
        ] {
            let rows = collins_gisin_rows(&sc);
            let expected_dim = 1
                + sc.o_a().iter().map(|o| o - 1).sum::<usize>()
                + sc.o_b().iter().map(|o| o - 1).sum::<usize>()
                + sc.o_a().iter().map(|o| o - 1).sum::<usize>() * sc.o_b().iter().map(|o| o - 1).sum::<usize>();
            assert_eq!(rows.len(), expected_dim);
            // Rank of the row-by-vertex matrix by Gaussian elimination.
            let mut mat: Vec<Vec<f64>> = rows
                .iter()
                .map(|row| {
                    sc.strategies()
                        .map(|d| {
                            let b = b_vector(&d[..sc.s_a()], &d[sc.s_a()..], &sc).unwrap();
                            row.iter().map(|&(e, c)| c * b.entries()[e]).sum()
                        })
                        .collect()
                })
                .collect();
            let mut rank = 0;
            let cols = mat[0].len();
            for col in 0..cols {
                if let Some(piv) = (rank..mat.len()).find(|&r| mat[r][col].abs() > 1e-9) {
                    mat.swap(rank, piv);
                    for r in 0..mat.len() {
                        if r != rank {
                            let f = mat[r][col] / mat[rank][col];
                            let pivot_row = mat[rank].clone();
                            for (x, y) in mat[r].iter_mut().zip(&pivot_row) {
                                *x -= f * y;
                            }
                        }
                    }
                    rank += 1;
                }
            }
            assert_eq!(rank, rows.len());
        }
    }

    #[test]
    fn strategy_is_inside_with_unit_weight() {
        let sc = MeasurementScenario::new(vec![2, 3], vec![2, 2]).unwrap();
        let b = b_vector(&[1, 2], &[0, 1], &sc).unwrap();
        match polytope_membership(&b).unwrap() {
            Membership::Inside { model, residual } => {
                assert!(residual < 1e-8);
                assert!((model.weight(&[1, 2], &[0, 1]).unwrap() - 1.0).abs() < 1e-7);
            }
            other => panic!("expected inside, got {other:?}"),
        }
    }

    #[test]
    fn chsh_violation_detected() {
        let (a, b) = chsh_povms();
        let p = quantum_probabilities(&werner(2, -1.0).unwrap(), &a, &b).unwrap();
        match polytope_membership(&p).unwrap() {
            Membership::Outside { functional, visibility } => {
                let f = functional.rescaled(2.0);
                assert!((f.value - 2.0 * 2f64.sqrt()).abs() < 1e-6, "{}", f.value);
                assert!((visibility - 1.0 / 2f64.sqrt()).abs() < 1e-6);
            }
            other => panic!("expected outside, got {other:?}"),
        }
    }

    #[test]
    fn noisy_singlet_inside() {
        let (a, b) = chsh_povms();
        let p = quantum_probabilities(&werner(2, -0.4).unwrap(), &a, &b).unwrap();
        match polytope_membership(&p).unwrap() {
            Membership::Inside { model, residual } => {
                assert!(residual < 1e-8);
                assert!(model.min_weight() >= 0.0);
            }
            other => panic!("expected inside, got {other:?}"),
        }
    }

    #[test]
    fn signalling_vector_rejected() {
        let sc = MeasurementScenario::uniform(2, 2, 2).unwrap();
        let mut e = vec![0.0; 16];
        e[sc.index(0, 0, 0, 0)] = 1.0;
        e[sc.index(0, 1, 1, 0)] = 1.0;
        e[sc.index(1, 0, 0, 0)] = 1.0;
        e[sc.index(1, 0, 1, 0)] = 1.0;
        let p = ProbabilityVector::new(sc, e).unwrap();
        match polytope_membership(&p).unwrap() {
            Membership::Outside { functional, .. } => assert!(functional.margin() > 0.5),
            other => panic!("expected outside, got {other:?}"),
        }
    }
}
