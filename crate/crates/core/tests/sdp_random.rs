mod common;

use common::{instance, random_hermitian};
use lhvcert_core::rng::SplitRng;
use lhvcert_core::sdp::{check_duality, solve, SdpStandardForm, SdpStatus};
use lhvcert_core::ComplexMatrix;

#[test]
fn random_instances_reach_constructed_optimum() {
    for seed in 0..50 {
        let inst = instance(seed);
        let r = solve(&inst.problem, 1e-10).unwrap();
        assert_eq!(r.status, SdpStatus::Optimal, "seed {seed}: {:?}", r.log.last());
        assert!(r.gap <= 1e-7, "seed {seed}: gap {}", r.gap);
        assert!(
            (r.primal_obj - inst.optimum).abs() <= 1e-6,
            "seed {seed}: {} vs {}",
            r.primal_obj,
            inst.optimum
        );
        let report = check_duality(&inst.problem, &r);
        assert!(report.is_certified(), "seed {seed}: {:?}", report.violations);
    }
}

#[test]
fn weak_duality_on_cross_pairs() {
    for seed in 100..120 {
        let inst = instance(seed);
        let p = &inst.problem;
        let r = solve(p, 1e-10).unwrap();
        assert_eq!(r.status, SdpStatus::Optimal);
        let cx = |x: &[f64]| -> f64 { p.c().iter().zip(x).map(|(a, b)| a * b).sum() };
        let z_hat = lhvcert_core::sdp::BlockDiag {
            blocks: vec![lhvcert_core::sdp::BlockValue::Dense(inst.z_hat.clone())],
        };
        for (x, z) in [(&r.x, &r.z), (&inst.x_hat, &r.z), (&r.x, &z_hat), (&inst.x_hat, &z_hat)] {
            let value = cx(x) + p.f0().trace_with(z);
            assert!(value >= -1e-9, "seed {seed}: {value}");
        }
    }
}

#[test]
fn argmin_is_invariant_under_cost_scaling() {
    for seed in 200..210 {
        let inst = instance(seed);
        let p = &inst.problem;
        let base = solve(p, 1e-10).unwrap();
        for beta in [0.1, 7.5] {
            let c: Vec<f64> = p.c().iter().map(|v| v * beta).collect();
            let f0 = p.to_dense(p.f0());
            let fs: Vec<ComplexMatrix> = p.fs().iter().map(|f| p.to_dense(f)).collect();
            let scaled = SdpStandardForm::from_dense(&f0, &fs, c).unwrap();
            let r = solve(&scaled, 1e-10).unwrap();
            assert_eq!(r.status, SdpStatus::Optimal);
            let dev = base.x.iter().zip(&r.x).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            assert!(dev <= 1e-6, "seed {seed} beta {beta}: {dev}");
        }
    }
}

#[test]
fn feasible_point_bounds_optimum() {
    // F₀ = I makes x = 0 feasible, so the optimum is at most 0 = cᵀ0.
    let mut rng = SplitRng::new(7);
    for _ in 0..10 {
        let n = 3 + rng.index(6);
        let m = 1 + rng.index(4);
        let mut fs = vec![ComplexMatrix::identity(n)];
        for _ in 1..m {
            fs.push(random_hermitian(n, &mut rng));
        }
        let c: Vec<f64> = fs.iter().map(|f| 0.3 * f.trace().re).collect();
        let p = SdpStandardForm::from_dense(&ComplexMatrix::identity(n), &fs, c).unwrap();
        let r = solve(&p, 1e-9).unwrap();
        assert_eq!(r.status, SdpStatus::Optimal);
        assert!(r.primal_obj <= 1e-9);
    }
}
