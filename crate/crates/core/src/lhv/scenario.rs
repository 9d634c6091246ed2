use alloc::format;
use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};

const NONNEGATIVE_TOL: f64 = 1e-10;
const BLOCK_SUM_TOL: f64 = 1e-9;

/// Setting and outcome counts for a two-party Bell experiment.
///
/// Alice has `o_a.len()` settings, setting `i` having `o_a[i]` outcomes;
/// likewise for Bob.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MeasurementScenario {
    o_a: Vec<usize>,
    o_b: Vec<usize>,
}

impl MeasurementScenario {
    pub fn new(o_a: Vec<usize>, o_b: Vec<usize>) -> Result<Self> {
        if o_a.is_empty() || o_b.is_empty() {
            return Err(Error::Invalid("each party needs at least one setting".to_string()));
        }
        if o_a.iter().chain(&o_b).any(|&o| o == 0) {
            return Err(Error::Invalid("every setting needs at least one outcome".to_string()));
        }
        let s = Self { o_a, o_b };
        s.vertex_count()?;
        s.o_a
            .iter()
            .sum::<usize>()
            .checked_mul(s.o_b.iter().sum())
            .ok_or_else(|| Error::Invalid("probability vector length overflows".to_string()))?;
        Ok(s)
    }

    /// Same outcome count for every setting.
    pub fn uniform(s_a: usize, s_b: usize, outcomes: usize) -> Result<Self> {
        Self::new(vec![outcomes; s_a], vec![outcomes; s_b])
    }

    pub fn s_a(&self) -> usize {
        self.o_a.len()
    }

    pub fn s_b(&self) -> usize {
        self.o_b.len()
    }

    pub fn o_a(&self) -> &[usize] {
        &self.o_a
    }

    pub fn o_b(&self) -> &[usize] {
        &self.o_b
    }

    /// Number of deterministic strategies `Π o_a(i) · Π o_b(k)`.
    pub fn vertex_count(&self) -> Result<usize> {
        self.o_a
            .iter()
            .chain(&self.o_b)
            .try_fold(1usize, |acc, &o| acc.checked_mul(o))
            .ok_or_else(|| Error::Invalid("vertex count overflows".to_string()))
    }

    pub(crate) fn rows(&self) -> usize {
        self.o_a.iter().sum()
    }

    pub(crate) fn cols(&self) -> usize {
        self.o_b.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.rows() * self.cols()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Flat position of `P_{ij,kl}`. Rows run over Alice's (setting,
    /// outcome) pairs and columns over Bob's, both setting-major.
    pub fn index(&self, i: usize, j: usize, k: usize, l: usize) -> usize {
        let r: usize = self.o_a[..i].iter().sum::<usize>() + j;
        let c: usize = self.o_b[..k].iter().sum::<usize>() + l;
        r * self.cols() + c
    }

    fn offsets(&self) -> (Vec<usize>, Vec<usize>) {
        let scan = |o: &[usize]| {
            let mut acc = 0;
            o.iter()
                .map(|&x| {
                    let start = acc;
                    acc += x;
                    start
                })
                .collect()
        };
        (scan(&self.o_a), scan(&self.o_b))
    }

    fn check_strategy(&self, m: &[usize], n: &[usize]) -> Result<()> {
        if m.len() != self.s_a() || n.len() != self.s_b() {
            return Err(Error::Invalid(format!(
                "strategy has {}+{} entries, scenario has {}+{} settings",
                m.len(),
                n.len(),
                self.s_a(),
                self.s_b()
            )));
        }
        let bad = m.iter().zip(&self.o_a).chain(n.iter().zip(&self.o_b)).any(|(&x, &o)| x >= o);
        if bad {
            return Err(Error::Invalid("strategy outcome out of range".to_string()));
        }
        Ok(())
    }

    /// Position of strategy `(m, n)` in the lexicographic order with `m_1`
    /// most significant and `n_{s_b}` least.
    pub fn vertex_index(&self, m: &[usize], n: &[usize]) -> Result<usize> {
        self.check_strategy(m, n)?;
        Ok(m.iter()
            .zip(&self.o_a)
            .chain(n.iter().zip(&self.o_b))
            .fold(0, |acc, (&x, &o)| acc * o + x))
    }

    /// Inverse of [`vertex_index`](Self::vertex_index).
    pub fn strategy(&self, mut v: usize) -> (Vec<usize>, Vec<usize>) {
        let mut digits = vec![0; self.s_a() + self.s_b()];
        let radices: Vec<usize> = self.o_a.iter().chain(&self.o_b).copied().collect();
        for (d, &o) in digits.iter_mut().zip(&radices).rev() {
            *d = v % o;
            v /= o;
        }
        let n = digits.split_off(self.s_a());
        (digits, n)
    }

    /// All strategies in lexicographic order, generated lazily.
    pub fn strategies(&self) -> Strategies<'_> {
        Strategies {
            scenario: self,
            next: Some(vec![0; self.s_a() + self.s_b()]),
        }
    }

    /// The vector with `1/(o_a(i) o_b(k))` in every entry of block `(i,k)`.
    pub fn uniform_vector(&self) -> ProbabilityVector {
        let mut entries = vec![0.0; self.len()];
        for (i, &oa) in self.o_a.iter().enumerate() {
            for (k, &ob) in self.o_b.iter().enumerate() {
                let w = 1.0 / (oa * ob) as f64;
                for j in 0..oa {
                    for l in 0..ob {
                        entries[self.index(i, j, k, l)] = w;
                    }
                }
            }
        }
        ProbabilityVector {
            scenario: self.clone(),
            entries,
        }
    }
}

/// Odometer over the digits `(m_1..m_{s_a}, n_1..n_{s_b})`.
pub struct Strategies<'a> {
    scenario: &'a MeasurementScenario,
    next: Option<Vec<usize>>,
}

impl Iterator for Strategies<'_> {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let current = self.next.take()?;
        let mut digits = current.clone();
        let radices: Vec<usize> = self.scenario.o_a.iter().chain(&self.scenario.o_b).copied().collect();
        for pos in (0..digits.len()).rev() {
            digits[pos] += 1;
            if digits[pos] < radices[pos] {
                self.next = Some(digits);
                break;
            }
            digits[pos] = 0;
        }
        Some(current)
    }
}

/// Joint outcome probabilities `P_{ij,kl}` laid out as in
/// [`MeasurementScenario::index`].
#[derive(Clone, Debug, PartialEq)]
pub struct ProbabilityVector {
    scenario: MeasurementScenario,
    entries: Vec<f64>,
}

impl ProbabilityVector {
    /// Checks nonnegativity (to 1e-10) and that every `(i,k)` block sums
    /// to one (to 1e-9).
    pub fn new(scenario: MeasurementScenario, entries: Vec<f64>) -> Result<Self> {
        if entries.len() != scenario.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a scenario with {}",
                entries.len(),
                scenario.len()
            )));
        }
        let p = Self { scenario, entries };
        if let Some(x) = p.entries.iter().find(|x| !x.is_finite() || **x < -NONNEGATIVE_TOL) {
            return Err(Error::Invalid(format!("probability entry {x} is negative or not finite")));
        }
        let worst = p.block_sums().into_iter().map(|s| (s - 1.0).abs()).fold(0.0, f64::max);
        if worst > BLOCK_SUM_TOL {
            return Err(Error::Invalid(format!("block sums deviate from one by {worst:.3e}")));
        }
        Ok(p)
    }

    pub(crate) fn from_raw(scenario: MeasurementScenario, entries: Vec<f64>) -> Self {
        Self { scenario, entries }
    }

    pub fn scenario(&self) -> &MeasurementScenario {
        &self.scenario
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize, k: usize, l: usize) -> f64 {
        self.entries[self.scenario.index(i, j, k, l)]
    }

    /// Sums of each `(i,k)` block, Alice's setting major.
    pub fn block_sums(&self) -> Vec<f64> {
        let sc = &self.scenario;
        let mut sums = Vec::with_capacity(sc.s_a() * sc.s_b());
        for (i, &oa) in sc.o_a.iter().enumerate() {
            for (k, &ob) in sc.o_b.iter().enumerate() {
                let mut s = 0.0;
                for j in 0..oa {
                    for l in 0..ob {
                        s += self.get(i, j, k, l);
                    }
                }
                sums.push(s);
            }
        }
        sums
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    pub fn dot(&self, coefficients: &[f64]) -> f64 {
        self.entries.iter().zip(coefficients).map(|(a, b)| a * b).sum()
    }

    /// Largest violation of no-signalling, with the functional that
    /// exhibits it: coefficients `+1` on Alice outcome `j` of setting `i`
    /// paired with Bob setting `k`, `-1` on the same outcome paired with
    /// `k'` (or the mirror image for Bob). Vanishes on every strategy.
    pub fn signalling(&self) -> (f64, Vec<f64>) {
        let sc = &self.scenario;
        let mut best = (0.0, Vec::new());
        let mut consider = |value: f64, terms: &[(usize, f64)]| {
            if value.abs() > best.0 {
                let mut f = vec![0.0; sc.len()];
                for &(idx, c) in terms {
                    f[idx] += c * value.signum();
                }
                best = (value.abs(), f);
            }
        };
        for (i, &oa) in sc.o_a.iter().enumerate() {
            for j in 0..oa {
                let marg = |k: usize| -> Vec<(usize, f64)> { (0..sc.o_b[k]).map(|l| (sc.index(i, j, k, l), 1.0)).collect() };
                for k in 1..sc.s_b() {
                    let mut terms = marg(k);
                    terms.extend(marg(0).into_iter().map(|(idx, c)| (idx, -c)));
                    let value: f64 = terms.iter().map(|&(idx, c)| c * self.entries[idx]).sum();
                    consider(value, &terms);
                }
            }
        }
        for (k, &ob) in sc.o_b.iter().enumerate() {
            for l in 0..ob {
                let marg = |i: usize| -> Vec<(usize, f64)> { (0..sc.o_a[i]).map(|j| (sc.index(i, j, k, l), 1.0)).collect() };
                for i in 1..sc.s_a() {
                    let mut terms = marg(i);
                    terms.extend(marg(0).into_iter().map(|(idx, c)| (idx, -c)));
                    let value: f64 = terms.iter().map(|&(idx, c)| c * self.entries[idx]).sum();
                    consider(value, &terms);
                }
            }
        }
        best
    }
}

/// Deterministic strategy `B^{m,n}_{ij,kl} = δ_{j m_i} δ_{l n_k}`, with
/// zero-based outcome labels.
pub fn b_vector(m: &[usize], n: &[usize], scenario: &MeasurementScenario) -> Result<ProbabilityVector> {
    scenario.check_strategy(m, n)?;
    let mut entries = vec![0.0; scenario.len()];
    let (ra, rb) = scenario.offsets();
    let cols = scenario.cols();
    for (i, &mi) in m.iter().enumerate() {
        for (k, &nk) in n.iter().enumerate() {
            entries[(ra[i] + mi) * cols + rb[k] + nk] = 1.0;
        }
    }
    Ok(ProbabilityVector::from_raw(scenario.clone(), entries))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    #[test]
    fn table_pattern() {
        let sc = MeasurementScenario::uniform(2, 2, 3).unwrap();
        let b = b_vector(&[0, 2], &[0, 1], &sc).unwrap();
        #[rustfmt::skip]
        let expected = [
            1., 0., 0., 0., 1., 0.,
            0., 0., 0., 0., 0., 0.,
            0., 0., 0., 0., 0., 0.,
            0., 0., 0., 0., 0., 0.,
            0., 0., 0., 0., 0., 0.,
            1., 0., 0., 0., 1., 0.,
        ];
        assert_eq!(b.entries(), &expected);
    }

    #[test]
    fn trivial_scenario_has_single_entry() {
        let sc = MeasurementScenario::uniform(1, 1, 1).unwrap();
        assert_eq!(b_vector(&[0], &[0], &sc).unwrap().entries(), &[1.0]);
    }

    #[test]
    fn all_strategies_distinct_and_indexed() {
        let sc = MeasurementScenario::uniform(2, 2, 3).unwrap();
        let mut seen = BTreeSet::new();
        for (v, digits) in sc.strategies().enumerate() {
            let (m, n) = digits.split_at(2);
            assert_eq!(sc.vertex_index(m, n).unwrap(), v);
            assert_eq!(sc.strategy(v), (m.to_vec(), n.to_vec()));
            let b = b_vector(m, n, &sc).unwrap();
            assert!(b.block_sums().iter().all(|&s| s == 1.0));
            let key: Vec<u8> = b.entries().iter().map(|&x| x as u8).collect();
            seen.insert(key);
        }
        assert_eq!(seen.len(), 81);
        assert_eq!(sc.vertex_count().unwrap(), 81);
    }

    #[test]
    fn rejects_out_of_range() {
        let sc = MeasurementScenario::new(vec![2, 3], vec![2]).unwrap();
        assert!(b_vector(&[2, 0], &[0], &sc).is_err());
        assert!(b_vector(&[0], &[0], &sc).is_err());
        assert!(MeasurementScenario::new(vec![], vec![2]).is_err());
        assert!(MeasurementScenario::new(vec![0], vec![2]).is_err());
    }

    #[test]
    fn validation_and_signalling() {
        let sc = MeasurementScenario::uniform(2, 2, 2).unwrap();
        let u = sc.uniform_vector();
        assert!(ProbabilityVector::new(sc.clone(), u.entries().to_vec()).is_ok());
        assert!(u.signalling().0 < 1e-15);
        let mut bad = u.entries().to_vec();
        bad[0] += 0.1;
        assert!(ProbabilityVector::new(sc.clone(), bad).is_err());

        // Alice's marginal depends on Bob's setting.
        let mut e = vec![0.0; 16];
        e[sc.index(0, 0, 0, 0)] = 1.0;
        e[sc.index(0, 1, 1, 0)] = 1.0;
        e[sc.index(1, 0, 0, 0)] = 1.0;
        e[sc.index(1, 0, 1, 0)] = 1.0;
        let p = ProbabilityVector::new(sc.clone(), e).unwrap();
        let (value, f) = p.signalling();
        assert!((value - 1.0).abs() < 1e-15);
        assert!((p.dot(&f) - 1.0).abs() < 1e-15);
        for d in sc.strategies() {
            let b = b_vector(&d[..2], &d[2..], &sc).unwrap();
            assert!(b.dot(&f).abs() < 1e-15);
        }
    }
}
