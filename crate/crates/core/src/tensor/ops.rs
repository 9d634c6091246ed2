use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64 as C64;

use super::matrix::ComplexMatrix;
use crate::error::{Error, Result};

/// Local dimensions of the tensor factors, leftmost factor first.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HilbertShape {
    dims: Vec<usize>,
}

impl HilbertShape {
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() || dims.iter().any(|&d| d == 0) {
            return Err(Error::DimensionMismatch(format!(
                "factor dimensions must be positive, got {dims:?}"
            )));
        }
        dims.iter()
            .try_fold(1usize, |acc, &d| acc.checked_mul(d))
            .ok_or_else(|| Error::DimensionMismatch(format!("dimension of {dims:?} overflows")))?;
        Ok(Self { dims })
    }

    /// `count` copies of a `dim`-dimensional factor.
    pub fn uniform(dim: usize, count: usize) -> Result<Self> {
        Self::new(vec![dim; count])
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn factors(&self) -> usize {
        self.dims.len()
    }

    pub fn total(&self) -> usize {
        self.dims.iter().product()
    }

    /// Place value of each factor in a flat basis index.
    pub fn strides(&self) -> Vec<usize> {
        let mut strides = vec![1; self.dims.len()];
        for k in (0..self.dims.len().saturating_sub(1)).rev() {
            strides[k] = strides[k + 1] * self.dims[k + 1];
        }
        strides
    }

    pub fn digits(&self, mut index: usize) -> Vec<usize> {
        let mut out = vec![0; self.dims.len()];
        for k in (0..self.dims.len()).rev() {
            out[k] = index % self.dims[k];
            index /= self.dims[k];
        }
        out
    }

    pub fn index(&self, digits: &[usize]) -> usize {
        digits
            .iter()
            .zip(&self.dims)
            .fold(0, |acc, (&x, &d)| acc * d + x)
    }

    /// Errors unless `m` is square with side equal to [`Self::total`].
    pub fn check_matrix(&self, m: &ComplexMatrix) -> Result<()> {
        if !m.is_square() || m.rows() != self.total() {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix on a space of dimension {} ({:?})",
                m.rows(),
                m.cols(),
                self.total(),
                self.dims
            )));
        }
        Ok(())
    }

    fn check_factor(&self, index: usize) -> Result<()> {
        if index >= self.dims.len() {
            return Err(Error::FactorOutOfRange {
                index,
                factors: self.dims.len(),
            });
        }
        Ok(())
    }

    /// Validates a set of distinct factor indices and returns a membership mask.
    fn mask(&self, set: &[usize]) -> Result<Vec<bool>> {
        let mut mask = vec![false; self.dims.len()];
        for &k in set {
            self.check_factor(k)?;
            if mask[k] {
                return Err(Error::Invalid(format!("factor {k} listed twice")));
            }
            mask[k] = true;
        }
        Ok(mask)
    }
}

pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (ar, ac, br, bc) = (a.rows(), a.cols(), b.rows(), b.cols());
    let mut out = ComplexMatrix::zeros(ar * br, ac * bc);
    let cols = ac * bc;
    let data = out.as_mut_slice();
    for i in 0..ar {
        for j in 0..ac {
            let x = a[(i, j)];
            if x == C64::new(0.0, 0.0) {
                continue;
            }
            for k in 0..br {
                let row = (i * br + k) * cols + j * bc;
                for (o, y) in data[row..row + bc].iter_mut().zip(b.row(k)) {
                    *o = x * y;
                }
            }
        }
    }
    out
}

/// Kronecker product of a non-empty list, leftmost factor first.
pub fn kron_all<'a>(factors: impl IntoIterator<Item = &'a ComplexMatrix>) -> ComplexMatrix {
    let mut iter = factors.into_iter();
    let first = iter.next().expect("kron_all needs at least one factor").clone();
    iter.fold(first, |acc, m| kron(&acc, m))
}

/// Traces out every factor not listed in `keep`. Kept factors stay in their
/// original relative order.
pub fn partial_trace(m: &ComplexMatrix, shape: &HilbertShape, keep: &[usize]) -> Result<ComplexMatrix> {
    shape.check_matrix(m)?;
    let mask = shape.mask(keep)?;
    let dims = shape.dims();
    let kept_dims: Vec<usize> = (0..dims.len()).filter(|&k| mask[k]).map(|k| dims[k]).collect();
    let traced_dims: Vec<usize> = (0..dims.len()).filter(|&k| !mask[k]).map(|k| dims[k]).collect();
    let nk: usize = kept_dims.iter().product();
    let nt: usize = traced_dims.iter().product();

    // groups[t][a] = full index with traced part t and kept part a
    let mut groups = vec![0usize; nt * nk];
    let n = shape.total();
    for full in 0..n {
        let digits = shape.digits(full);
        let (mut a, mut t) = (0usize, 0usize);
        for (k, &x) in digits.iter().enumerate() {
            if mask[k] {
                a = a * dims[k] + x;
            } else {
                t = t * dims[k] + x;
            }
        }
        groups[t * nk + a] = full;
    }

    let mut out = ComplexMatrix::zeros(nk, nk);
    for t in 0..nt {
        let idx = &groups[t * nk..(t + 1) * nk];
        for (a, &r) in idx.iter().enumerate() {
            let row = m.row(r);
            for (b, &c) in idx.iter().enumerate() {
                out[(a, b)] += row[c];
            }
        }
    }
    Ok(out)
}

/// Transposes the factors listed in `subset`.
pub fn partial_transpose(
    m: &ComplexMatrix,
    shape: &HilbertShape,
    subset: &[usize],
) -> Result<ComplexMatrix> {
    shape.check_matrix(m)?;
    let mask = shape.mask(subset)?;
    let n = shape.total();
    let strides = shape.strides();
    let dims = shape.dims();
    // Split each index into its transposed part and the rest.
    let part: Vec<usize> = (0..n)
        .map(|i| {
            (0..dims.len())
                .filter(|&k| mask[k])
                .map(|k| (i / strides[k]) % dims[k] * strides[k])
                .sum()
        })
        .collect();
    let mut out = ComplexMatrix::zeros(n, n);
    for r in 0..n {
        for c in 0..n {
            let r2 = r - part[r] + part[c];
            let c2 = c - part[c] + part[r];
            out[(r2, c2)] = m[(r, c)];
        }
    }
    Ok(out)
}

/// Index map of the permutation operator that moves factor `k` to slot
/// `perm[k]`: `P|i⟩ = |map[i]⟩`.
pub fn permutation_index_map(perm: &[usize], shape: &HilbertShape) -> Result<Vec<usize>> {
    let dims = shape.dims();
    if perm.len() != dims.len() {
        return Err(Error::DimensionMismatch(format!(
            "permutation of length {} for {} factors",
            perm.len(),
            dims.len()
        )));
    }
    let mut seen = vec![false; perm.len()];
    for (k, &p) in perm.iter().enumerate() {
        shape.check_factor(p)?;
        if seen[p] {
            return Err(Error::Invalid(format!("{perm:?} is not a permutation")));
        }
        seen[p] = true;
        if dims[k] != dims[p] {
            return Err(Error::DimensionMismatch(format!(
                "factor {k} (dim {}) cannot move to slot {p} (dim {})",
                dims[k], dims[p]
            )));
        }
    }
    let strides = shape.strides();
    Ok((0..shape.total())
        .map(|i| {
            perm.iter()
                .enumerate()
                .map(|(k, &p)| (i / strides[k]) % dims[k] * strides[p])
                .sum()
        })
        .collect())
}

/// Unitary 0/1 matrix permuting tensor factors (factor `k` → slot `perm[k]`).
pub fn permutation_op(perm: &[usize], shape: &HilbertShape) -> Result<ComplexMatrix> {
    let map = permutation_index_map(perm, shape)?;
    let n = map.len();
    let mut out = ComplexMatrix::zeros(n, n);
    for (i, &j) in map.iter().enumerate() {
        out[(j, i)] = C64::new(1.0, 0.0);
    }
    Ok(out)
}

/// All permutations of `0..k` in lexicographic order.
pub(crate) fn permutations(k: usize) -> Vec<Vec<usize>> {
    let mut current: Vec<usize> = (0..k).collect();
    let mut out = vec![current.clone()];
    loop {
        let Some(i) = (1..k).rev().find(|&i| current[i - 1] < current[i]) else {
            return out;
        };
        let j = (i..k).rev().find(|&j| current[j] > current[i - 1]).unwrap();
        current.swap(i - 1, j);
        current[i..].reverse();
        out.push(current.clone());
    }
}

/// Factor permutations of `group_a × group_b`, each as a full permutation
/// of all factors.
pub(crate) fn group_permutations(
    shape: &HilbertShape,
    group_a: &[usize],
    group_b: &[usize],
) -> Result<Vec<Vec<usize>>> {
    let mut all: Vec<usize> = group_a.to_vec();
    all.extend_from_slice(group_b);
    shape.mask(&all)?;
    for group in [group_a, group_b] {
        if let Some(&first) = group.first() {
            if group.iter().any(|&k| shape.dims()[k] != shape.dims()[first]) {
                return Err(Error::DimensionMismatch(format!(
                    "factors {group:?} do not share one dimension"
                )));
            }
        }
    }
    let pa = permutations(group_a.len());
    let pb = permutations(group_b.len());
    let mut out = Vec::with_capacity(pa.len() * pb.len());
    for sa in &pa {
        for sb in &pb {
            let mut perm: Vec<usize> = (0..shape.factors()).collect();
            for (i, &s) in sa.iter().enumerate() {
                perm[group_a[i]] = group_a[s];
            }
            for (i, &s) in sb.iter().enumerate() {
                perm[group_b[i]] = group_b[s];
            }
            out.push(perm);
        }
    }
    Ok(out)
}

/// Index maps for every element of `S(group_a) × S(group_b)`.
pub fn sym_group_maps(
    shape: &HilbertShape,
    group_a: &[usize],
    group_b: &[usize],
) -> Result<Vec<Vec<usize>>> {
    group_permutations(shape, group_a, group_b)?
        .iter()
        .map(|p| permutation_index_map(p, shape))
        .collect()
}

/// Average of `π M π†` over all permutations within `group_a` and within
/// `group_b` (the product of the two group symmetrizers).
pub fn sym_average(
    m: &ComplexMatrix,
    shape: &HilbertShape,
    group_a: &[usize],
    group_b: &[usize],
) -> Result<ComplexMatrix> {
    shape.check_matrix(m)?;
    let maps = sym_group_maps(shape, group_a, group_b)?;
    let n = shape.total();
    let weight = 1.0 / maps.len() as f64;
    let mut out = ComplexMatrix::zeros(n, n);
    for map in &maps {
        for r in 0..n {
            let row = m.row(r);
            let rr = map[r];
            for c in 0..n {
                out[(rr, map[c])] += row[c] * weight;
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn basis_projector(dim: usize, i: usize) -> ComplexMatrix {
        let mut m = ComplexMatrix::zeros(dim, dim);
        m[(i, i)] = C64::new(1.0, 0.0);
        m
    }

    fn bell_state() -> ComplexMatrix {
        let s = 0.5f64.sqrt();
        let v = [C64::new(s, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(s, 0.0)];
        ComplexMatrix::projector(&v)
    }

    #[test]
    fn kron_of_identities_and_basis_projectors() {
        let i2 = ComplexMatrix::identity(2);
        assert_eq!(kron(&i2, &i2), ComplexMatrix::identity(4));
        let k = kron(&basis_projector(2, 0), &basis_projector(2, 1));
        let mut expected = ComplexMatrix::zeros(4, 4);
        expected[(1, 1)] = C64::new(1.0, 0.0);
        assert_eq!(k, expected);
    }

    #[test]
    fn partial_trace_of_bell_state_is_maximally_mixed() {
        let shape = HilbertShape::uniform(2, 2).unwrap();
        let reduced = partial_trace(&bell_state(), &shape, &[0]).unwrap();
        assert!(reduced.max_abs_diff(&ComplexMatrix::identity(2).scale(0.5)) < 1e-15);
    }

    #[test]
    fn partial_trace_rejects_bad_factor() {
        let shape = HilbertShape::uniform(2, 2).unwrap();
        assert_eq!(
            partial_trace(&bell_state(), &shape, &[2]),
            Err(Error::FactorOutOfRange { index: 2, factors: 2 })
        );
    }

    #[test]
    fn partial_transpose_of_bell_state_has_negative_eigenvalue() {
        let shape = HilbertShape::uniform(2, 2).unwrap();
        let pt = partial_transpose(&bell_state(), &shape, &[1]).unwrap();
        let eig = crate::tensor::hermitian_eigenvalues(&pt).unwrap();
        assert!((eig[0] + 0.5).abs() < 1e-12);
        let back = partial_transpose(&pt, &shape, &[1]).unwrap();
        assert_eq!(back, bell_state());
    }

    #[test]
    fn swap_is_flip_operator() {
        let d = 3;
        let shape = HilbertShape::uniform(d, 2).unwrap();
        let v = permutation_op(&[1, 0], &shape).unwrap();
        for i in 0..d {
            for j in 0..d {
                // V|ij⟩ = |ji⟩
                assert_eq!(v[(j * d + i, i * d + j)], C64::new(1.0, 0.0));
            }
        }
        assert_eq!(v.matmul(&v), ComplexMatrix::identity(d * d));
        assert_eq!(
            permutation_op(&[0, 1], &shape).unwrap(),
            ComplexMatrix::identity(d * d)
        );
    }

    #[test]
    fn permutation_rejects_mismatched_dims() {
        let shape = HilbertShape::new(vec![2, 3]).unwrap();
        assert!(matches!(
            permutation_op(&[1, 0], &shape),
            Err(Error::DimensionMismatch(_))
        ));
        assert!(permutation_op(&[0, 0], &HilbertShape::uniform(2, 2).unwrap()).is_err());
    }

    #[test]
    fn lexicographic_permutations() {
        assert_eq!(permutations(0), vec![Vec::<usize>::new()]);
        assert_eq!(permutations(3).len(), 6);
        assert_eq!(permutations(3)[1], vec![0, 2, 1]);
    }

    #[test]
    fn sym_average_matches_explicit_enumeration() {
        // S2 x S2 on factors (A1, B1, A2, B2) with groups {0, 2} and {1, 3}.
        let shape = HilbertShape::uniform(2, 4).unwrap();
        let m = ComplexMatrix::from_fn(16, 16, |r, c| {
            C64::new(((r * 7 + c * 3) % 5) as f64, ((r + 2 * c) % 3) as f64 - 1.0)
        });
        let sym = sym_average(&m, &shape, &[0, 2], &[1, 3]).unwrap();
        let mut expected = ComplexMatrix::zeros(16, 16);
        for perm in [[0, 1, 2, 3], [2, 1, 0, 3], [0, 3, 2, 1], [2, 3, 0, 1]] {
            let p = permutation_op(&perm, &shape).unwrap();
            expected += &p.matmul(&m).matmul(&p.adjoint()).scale(0.25);
        }
        assert!(sym.max_abs_diff(&expected) < 1e-13);
    }
}
