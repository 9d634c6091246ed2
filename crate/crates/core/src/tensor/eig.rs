use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64 as C64;
#[allow(unused_imports)]
use num_traits::Float;

use super::matrix::ComplexMatrix;
use super::HERMITIAN_BOUNDARY_TOL;
use crate::error::{Error, Result};

/// Eigenvalues in ascending order with the matching unit eigenvectors
/// stored as columns of `vectors`.
#[derive(Clone, Debug)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

impl HermitianEigen {
    pub fn min(&self) -> f64 {
        self.values[0]
    }

    pub fn max(&self) -> f64 {
        *self.values.last().unwrap()
    }

    /// `U f(Λ) U†`.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let n = self.values.len();
        let fv: Vec<f64> = self.values.iter().map(|&x| f(x)).collect();
        let u = &self.vectors;
        let mut out = ComplexMatrix::zeros(n, n);
        for r in 0..n {
            for c in r..n {
                let mut acc = C64::new(0.0, 0.0);
                for k in 0..n {
                    acc += u[(r, k)] * fv[k] * u[(c, k)].conj();
                }
                out[(r, c)] = acc;
                out[(c, r)] = acc.conj();
            }
        }
        out
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.map(|x| x)
    }
}

/// Eigendecomposition of a Hermitian matrix.
pub fn hermitian_eig(m: &ComplexMatrix) -> Result<HermitianEigen> {
    m.require_hermitian(HERMITIAN_BOUNDARY_TOL * (1.0 + m.max_abs()))?;
    let n = m.rows();
    let (mut diag, mut off, q) = tridiagonalize(m, true);
    let q = q.unwrap();
    // Rows of `z` are eigenvectors of the real tridiagonal matrix.
    let mut z = vec![0.0f64; n * n];
    for i in 0..n {
        z[i * n + i] = 1.0;
    }
    tql(&mut diag, &mut off, Some(&mut z))?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| diag[a].total_cmp(&diag[b]));

    // vectors = Q · Z, with Z's rows holding the tridiagonal eigenvectors.
    let mut vectors = ComplexMatrix::zeros(n, n);
    for (col, &k) in order.iter().enumerate() {
        let zk = &z[k * n..(k + 1) * n];
        for r in 0..n {
            let qr = q.row(r);
            let mut acc = C64::new(0.0, 0.0);
            for (a, &b) in qr.iter().zip(zk) {
                acc += a * b;
            }
            vectors[(r, col)] = acc;
        }
    }
    let values = order.iter().map(|&k| diag[k]).collect();
    Ok(HermitianEigen { values, vectors })
}

/// Ascending eigenvalues only.
pub fn hermitian_eigenvalues(m: &ComplexMatrix) -> Result<Vec<f64>> {
    m.require_hermitian(HERMITIAN_BOUNDARY_TOL * (1.0 + m.max_abs()))?;
    let (mut diag, mut off, _) = tridiagonalize(m, false);
    tql(&mut diag, &mut off, None)?;
    diag.sort_by(f64::total_cmp);
    Ok(diag)
}

/// Householder reduction to a real symmetric tridiagonal matrix.
///
/// Returns the diagonal, the subdiagonal (padded with a trailing zero) and,
/// when requested, the unitary `Q` with `M = Q T Q†`.
fn tridiagonalize(m: &ComplexMatrix, want_q: bool) -> (Vec<f64>, Vec<f64>, Option<ComplexMatrix>) {
    let n = m.rows();
    let mut a = m.clone();
    a.make_hermitian();
    let mut q = want_q.then(|| ComplexMatrix::identity(n));
    let zero = C64::new(0.0, 0.0);

    let mut v = vec![zero; n];
    let mut p = vec![zero; n];
    for k in 0..n.saturating_sub(2) {
        let start = k + 1;
        let norm_x = (start..n).map(|i| a[(i, k)].norm_sqr()).sum::<f64>().sqrt();
        let x0 = a[(start, k)];
        let tail = (start + 1..n).map(|i| a[(i, k)].norm_sqr()).sum::<f64>();
        if norm_x == 0.0 || tail == 0.0 {
            continue;
        }
        let phase = if x0.norm() > 0.0 { x0 / x0.norm() } else { C64::new(1.0, 0.0) };
        let alpha = -phase * norm_x;
        for i in start..n {
            v[i] = a[(i, k)];
        }
        v[start] -= alpha;
        let vnorm2: f64 = (start..n).map(|i| v[i].norm_sqr()).sum();
        let tau = 2.0 / vnorm2;

        // p = tau · A v over the trailing block.
        for i in start..n {
            let row = a.row(i);
            let mut acc = zero;
            for j in start..n {
                acc += row[j] * v[j];
            }
            p[i] = acc * tau;
        }
        let vhp: f64 = (start..n).map(|i| (v[i].conj() * p[i]).re).sum();
        let kcoef = 0.5 * tau * vhp;
        for i in start..n {
            p[i] -= v[i] * kcoef;
        }
        // A -= v q† + q v†
        for i in start..n {
            let (vi, pi) = (v[i], p[i]);
            for j in start..n {
                let upd = vi * p[j].conj() + pi * v[j].conj();
                a[(i, j)] -= upd;
            }
        }
        a[(start, k)] = alpha;
        a[(k, start)] = alpha.conj();
        for i in (start + 1)..n {
            a[(i, k)] = zero;
            a[(k, i)] = zero;
        }
        if let Some(q) = q.as_mut() {
            // Q ← Q (I − τ v v†)
            for r in 0..n {
                let row = q.row(r);
                let mut acc = zero;
                for j in start..n {
                    acc += row[j] * v[j];
                }
                acc *= tau;
                for j in start..n {
                    q[(r, j)] -= acc * v[j].conj();
                }
            }
        }
    }

    // Rotate the complex subdiagonal onto the nonnegative reals.
    let diag: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
    let mut off = vec![0.0; n];
    let mut phase = C64::new(1.0, 0.0);
    let mut phases = vec![phase; n];
    for k in 0..n.saturating_sub(1) {
        let e = a[(k + 1, k)];
        let mag = e.norm();
        off[k] = mag;
        if mag > 0.0 {
            phase *= e / mag;
        }
        phases[k + 1] = phase;
    }
    if let Some(q) = q.as_mut() {
        for r in 0..n {
            for c in 0..n {
                q[(r, c)] *= phases[c];
            }
        }
    }
    (diag, off, q)
}

/// Implicit QL iterations with Wilkinson-style shifts on a symmetric
/// tridiagonal matrix. `off[i]` couples `i` and `i + 1`. `z` holds the
/// eigenvector rows (row `i` belongs to `diag[i]`).
fn tql(diag: &mut [f64], off: &mut [f64], mut z: Option<&mut [f64]>) -> Result<()> {
    let n = diag.len();
    if n == 0 {
        return Ok(());
    }
    if diag.iter().chain(off.iter()).any(|x| !x.is_finite()) {
        return Err(Error::NoConvergence);
    }
    let norm = diag
        .iter()
        .zip(off.iter().chain(core::iter::once(&0.0)))
        .fold(0.0f64, |a, (d, e)| a.max(d.abs() + e.abs()));
    let floor = f64::EPSILON * f64::EPSILON * norm;
    let mut iter = 0;
    for l in 0..n {
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = diag[m].abs() + diag[m + 1].abs();
                if off[m].abs() <= f64::EPSILON * dd || off[m].abs() <= floor {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 30 * n.max(2) {
                return Err(Error::NoConvergence);
            }
            let mut g = (diag[l + 1] - diag[l]) / (2.0 * off[l]);
            let mut r = g.hypot(1.0);
            g = diag[m] - diag[l] + off[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut underflow = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * off[i];
                let b = c * off[i];
                r = f.hypot(g);
                off[i + 1] = r;
                if r == 0.0 {
                    diag[i + 1] -= p;
                    off[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = diag[i + 1] - p;
                r = (diag[i] - g) * s + 2.0 * c * b;
                p = s * r;
                diag[i + 1] = g + p;
                g = c * r - b;
                if let Some(z) = z.as_deref_mut() {
                    let (lo, hi) = z.split_at_mut((i + 1) * n);
                    let zi = &mut lo[i * n..(i + 1) * n];
                    let zi1 = &mut hi[..n];
                    for (a, b) in zi.iter_mut().zip(zi1.iter_mut()) {
                        let f = *b;
                        *b = s * *a + c * f;
                        *a = c * *a - s * f;
                    }
                }
            }
            if underflow {
                continue;
            }
            diag[l] -= p;
            off[l] = g;
            off[m] = 0.0;
        }
    }
    Ok(())
}

/// Lower Cholesky factor `L` with `M = L L†`.
pub fn cholesky(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let n = m.rows();
    if !m.is_square() {
        return Err(Error::NotPositiveDefinite);
    }
    let mut l = ComplexMatrix::zeros(n, n);
    for j in 0..n {
        let mut d = m[(j, j)].re;
        for k in 0..j {
            d -= l[(j, k)].norm_sqr();
        }
        if !(d > 0.0) || !d.is_finite() {
            return Err(Error::NotPositiveDefinite);
        }
        let djj = d.sqrt();
        l[(j, j)] = C64::new(djj, 0.0);
        let inv = 1.0 / djj;
        for i in (j + 1)..n {
            let mut acc = m[(i, j)];
            let (li, lj) = (l.row(i), l.row(j));
            for k in 0..j {
                acc -= li[k] * lj[k].conj();
            }
            l[(i, j)] = acc * inv;
        }
    }
    Ok(l)
}

/// Inverse of a lower-triangular matrix with nonzero diagonal.
pub fn lower_inverse(l: &ComplexMatrix) -> ComplexMatrix {
    let n = l.rows();
    let mut inv = ComplexMatrix::zeros(n, n);
    for c in 0..n {
        inv[(c, c)] = C64::new(1.0, 0.0) / l[(c, c)];
        for r in (c + 1)..n {
            let mut acc = C64::new(0.0, 0.0);
            let lr = l.row(r);
            for k in c..r {
                acc += lr[k] * inv[(k, c)];
            }
            inv[(r, c)] = -acc / l[(r, r)];
        }
    }
    inv
}
