use alloc::format;
use alloc::vec::Vec;

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::tensor::{sym_group_maps, ComplexMatrix, HilbertShape};

/// Default cap on the extension dimension `n`.
pub const DEFAULT_MAX_DIM: usize = 1024;

/// Local dimensions and copy counts of an extension. Factors are laid out
/// as `[A₁..A_{s_a}, B₁..B_{s_b}]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ExtensionShape {
    pub d_a: usize,
    pub d_b: usize,
    pub s_a: usize,
    pub s_b: usize,
}

impl ExtensionShape {
    pub fn new(d_a: usize, d_b: usize, s_a: usize, s_b: usize) -> Result<Self> {
        if d_a == 0 || d_b == 0 || s_a == 0 || s_b == 0 {
            return Err(Error::ParameterOutOfRange(format!(
                "extension shape needs positive entries, got d=({d_a},{d_b}) s=({s_a},{s_b})"
            )));
        }
        let shape = Self { d_a, d_b, s_a, s_b };
        shape.checked_dim().ok_or_else(|| {
            Error::ParameterOutOfRange(format!("extension dimension of {shape:?} overflows"))
        })?;
        Ok(shape)
    }

    fn checked_dim(&self) -> Option<usize> {
        let a = self.d_a.checked_pow(u32::try_from(self.s_a).ok()?)?;
        let b = self.d_b.checked_pow(u32::try_from(self.s_b).ok()?)?;
        a.checked_mul(b)
    }

    /// `n = d_A^{s_a} d_B^{s_b}`.
    pub fn dim(&self) -> usize {
        self.checked_dim().expect("validated at construction")
    }

    pub fn local_dim(&self) -> usize {
        self.d_a * self.d_b
    }

    pub fn factors(&self) -> usize {
        self.s_a + self.s_b
    }

    pub fn hilbert_shape(&self) -> HilbertShape {
        let mut dims = alloc::vec![self.d_a; self.s_a];
        dims.extend(core::iter::repeat(self.d_b).take(self.s_b));
        HilbertShape::new(dims).expect("positive dimensions")
    }

    pub fn group_a(&self) -> Vec<usize> {
        (0..self.s_a).collect()
    }

    pub fn group_b(&self) -> Vec<usize> {
        (self.s_a..self.s_a + self.s_b).collect()
    }

    /// Factor indices of `A₁` and `B₁`.
    pub fn first_pair(&self) -> [usize; 2] {
        [0, self.s_a]
    }

    pub fn require_cap(&self, max_dim: usize) -> Result<()> {
        let dim = self.dim();
        if dim > max_dim {
            return Err(Error::DimensionCap { dim, cap: max_dim });
        }
        Ok(())
    }

    pub fn check_state_dims(&self, dims: (usize, usize)) -> Result<()> {
        if dims != (self.d_a, self.d_b) {
            return Err(Error::DimensionMismatch(format!(
                "state is {}x{} but the shape expects {}x{}",
                dims.0, dims.1, self.d_a, self.d_b
            )));
        }
        Ok(())
    }

    /// Factor permutations of the copy groups, in the same order as [`Self::group_maps`].
    pub fn group_perms(&self) -> Vec<Vec<usize>> {
        crate::tensor::group_permutations(&self.hilbert_shape(), &self.group_a(), &self.group_b())
            .expect("valid groups")
    }

    /// Index maps of all permutations within the A copies and within the B copies.
    pub fn group_maps(&self) -> Vec<Vec<usize>> {
        sym_group_maps(&self.hilbert_shape(), &self.group_a(), &self.group_b()).expect("valid groups")
    }

    /// Full index of `A₁B₁` index `ab` (row-major `a·d_B + b`) combined with
    /// an index `rest` of the remaining factors in layout order.
    pub(crate) fn embed(&self, ab: usize, rest: usize) -> usize {
        let (a, b) = (ab / self.d_b, ab % self.d_b);
        let rest_a = self.d_a.pow(self.s_a as u32 - 1);
        let rest_b = self.d_b.pow(self.s_b as u32 - 1);
        let (ra, rb) = (rest / rest_b, rest % rest_b);
        ((a * rest_a + ra) * self.d_b + b) * rest_b + rb
    }

    /// Number of basis states of the factors other than `A₁B₁`.
    pub(crate) fn rest_dim(&self) -> usize {
        self.dim() / self.local_dim()
    }

    /// `Sym'(M)` of a dense operator.
    pub fn symmetrize(&self, m: &ComplexMatrix) -> ComplexMatrix {
        symmetrize_with(m, &self.group_maps())
    }
}

pub(crate) fn symmetrize_with(m: &ComplexMatrix, maps: &[Vec<usize>]) -> ComplexMatrix {
    let n = m.rows();
    let weight = 1.0 / maps.len() as f64;
    let mut out = ComplexMatrix::zeros(n, n);
    for map in maps {
        for r in 0..n {
            let row = m.row(r);
            let rr = map[r];
            for (c, &v) in row.iter().enumerate() {
                out[(rr, map[c])] += v * weight;
            }
        }
    }
    out
}

/// Swaps the digits of the factors in `mask` between row and column index.
pub(crate) fn transpose_indices(r: usize, c: usize, mask: u32, shape: &HilbertShape) -> (usize, usize) {
    let strides = shape.strides();
    let dims = shape.dims();
    let (mut r2, mut c2) = (r, c);
    for k in 0..dims.len() {
        if mask & (1 << k) != 0 {
            let dr = (r / strides[k]) % dims[k];
            let dc = (c / strides[k]) % dims[k];
            r2 = r2 - dr * strides[k] + dc * strides[k];
            c2 = c2 - dc * strides[k] + dr * strides[k];
        }
    }
    (r2, c2)
}

/// Dense partial transpose over the factors in `mask`.
pub(crate) fn partial_transpose_mask(m: &ComplexMatrix, mask: u32, shape: &HilbertShape) -> ComplexMatrix {
    let n = m.rows();
    let mut out = ComplexMatrix::zeros(n, n);
    for r in 0..n {
        for c in 0..n {
            let (r2, c2) = transpose_indices(r, c, mask, shape);
            out[(r2, c2)] = m[(r, c)];
        }
    }
    out
}

/// Image of a factor subset under an index map's underlying factor permutation.
pub(crate) fn permute_mask(mask: u32, perm: &[usize]) -> u32 {
    perm.iter()
        .enumerate()
        .filter(|(k, _)| mask & (1 << k) != 0)
        .fold(0, |acc, (_, &p)| acc | (1 << p))
}

pub(crate) fn c64(re: f64) -> C64 {
    C64::new(re, 0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::{kron, partial_transpose};

    #[test]
    fn dimensions() {
        let s = ExtensionShape::new(2, 2, 1, 2).unwrap();
        assert_eq!(s.dim(), 8);
        assert!(ExtensionShape::new(2, 0, 1, 1).is_err());
        assert!(ExtensionShape::new(1 << 20, 2, 4, 1).is_err());
        assert!(s.require_cap(4).is_err());
    }

    #[test]
    fn embed_matches_kron_layout() {
        // σ on A₁B₁ tensored with identity on the rest, then moved into layout order
        let s = ExtensionShape::new(2, 3, 2, 2).unwrap();
        let shape = s.hilbert_shape();
        for ab in 0..6 {
            for rest in 0..6 {
                let digits = shape.digits(s.embed(ab, rest));
                assert_eq!(digits[0], ab / 3);
                assert_eq!(digits[2], ab % 3);
                assert_eq!(digits[1], rest / 3);
                assert_eq!(digits[3], rest % 3);
            }
        }
    }

    #[test]
    fn mask_transpose_agrees_with_tensor_op() {
        let s = ExtensionShape::new(2, 2, 2, 1).unwrap();
        let shape = s.hilbert_shape();
        let mut rng = crate::rng::SplitRng::new(3);
        let m = ComplexMatrix::from_fn(8, 8, |_, _| rng.complex_normal());
        let expected = partial_transpose(&m, &shape, &[0, 2]).unwrap();
        assert!(partial_transpose_mask(&m, 0b101, &shape).max_abs_diff(&expected) < 1e-15);
        let _ = kron(&m, &m);
    }
}
