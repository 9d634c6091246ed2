//! Shared random instance generator for the solver tests.
#![allow(dead_code)]

use lhvcert_core::rng::SplitRng;
use lhvcert_core::sdp::SdpStandardForm;
use lhvcert_core::tensor::hermitian_eig;
use lhvcert_core::ComplexMatrix;

pub struct Instance {
    pub problem: SdpStandardForm,
    pub x_hat: Vec<f64>,
    pub z_hat: ComplexMatrix,
    pub optimum: f64,
}

pub fn random_hermitian(n: usize, rng: &mut SplitRng) -> ComplexMatrix {
    let mut m = ComplexMatrix::from_fn(n, n, |_, _| rng.complex_normal());
    m.make_hermitian();
    m
}

/// Strictly complementary pair `Ŝ = F(x̂)`, `Ẑ` sharing an eigenbasis, so that
/// `x̂` and `Ẑ` are optimal with value `cᵀx̂`.
pub fn instance(seed: u64) -> Instance {
    let mut rng = SplitRng::new(seed);
    // (n − k)² > m keeps the optimal x unique
    let n = 3 + rng.index(18);
    let m = 1 + rng.index(15.min((n - 1) * (n - 1) - 1));
    let mut k = 1 + rng.index(n - 1);
    while (n - k) * (n - k) <= m {
        k -= 1;
    }
    let u = hermitian_eig(&random_hermitian(n, &mut rng)).unwrap().vectors;
    let mut s = vec![0.0; n];
    let mut z = vec![0.0; n];
    for i in 0..n {
        let v = 0.5 + 1.5 * rng.uniform();
        if i < k {
            s[i] = v;
        } else {
            z[i] = v;
        }
    }
    let conj = |d: &[f64]| u.matmul(&ComplexMatrix::from_diagonal(d)).matmul(&u.adjoint());
    let s_hat = conj(&s);
    let z_hat = conj(&z);

    let mut fs = Vec::with_capacity(m);
    let mut f1 = random_hermitian(n, &mut rng).scale(0.05);
    f1.add_identity(1.0);
    fs.push(f1);
    for _ in 1..m {
        fs.push(random_hermitian(n, &mut rng));
    }
    let x_hat: Vec<f64> = (0..m).map(|_| rng.normal()).collect();
    let mut f0 = s_hat.clone();
    for (f, &xi) in fs.iter().zip(&x_hat) {
        f0.axpy(-xi, f);
    }
    f0.make_hermitian();
    let c: Vec<f64> = fs.iter().map(|f| f.trace_product(&z_hat).re).collect();
    let optimum = c.iter().zip(&x_hat).map(|(a, b)| a * b).sum();
    Instance {
        problem: SdpStandardForm::from_dense(&f0, &fs, c).unwrap(),
        x_hat,
        z_hat,
        optimum,
    }
}
