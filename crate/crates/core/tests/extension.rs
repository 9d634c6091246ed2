use lhvcert_core::extension::*;
use lhvcert_core::states::*;
use lhvcert_core::tensor::{hermitian_eigenvalues, partial_trace, ComplexMatrix, HilbertShape};
use lhvcert_core::C64;

/// `(1/(s_a s_b)) Σ_{i,j} X_{A_i B_j} ⊗ I`, assembled entry by entry.
fn pair_average(x: &ComplexMatrix, shape: &ExtensionShape) -> ComplexMatrix {
    let hs = shape.hilbert_shape();
    let (s_a, s_b) = (shape.s_a, shape.s_b);
    let d_b = shape.d_b;
    let n = hs.total();
    let mut out = ComplexMatrix::zeros(n, n);
    for r in 0..n {
        let dr = hs.digits(r);
        for c in 0..n {
            let dc = hs.digits(c);
            let mut acc = C64::new(0.0, 0.0);
            for i in 0..s_a {
                for j in s_a..s_a + s_b {
                    let others_equal = (0..s_a + s_b).filter(|&k| k != i && k != j).all(|k| dr[k] == dc[k]);
                    if others_equal {
                        acc += x[(dr[i] * d_b + dr[j], dc[i] * d_b + dc[j])];
                    }
                }
            }
            out[(r, c)] = acc / (s_a * s_b) as f64;
        }
    }
    out
}

fn shape_for(rho: &BipartiteState, s_a: usize, s_b: usize) -> ExtensionShape {
    let (da, db) = rho.dims();
    ExtensionShape::new(da, db, s_a, s_b).unwrap()
}

#[test]
fn maximally_entangled_pair_is_monogamous() {
    let rho = max_entangled(2).unwrap();
    let shape = shape_for(&rho, 2, 1);
    let v = decide(&rho, &shape, ExtensionKind::Positive).unwrap();
    assert_eq!(v.decision, Decision::NotExists);
    assert!(v.optimum > 1.0 + 1e-3);
    let x = v.dual_certificate.expect("dual certificate");
    let lifted = pair_average(&x, &shape);
    let min = hermitian_eigenvalues(&lifted).unwrap()[0];
    assert!(min >= -1e-9, "Sym'(X⊗I) min eigenvalue {min}");
    let value = x.trace_product(rho.rho()).re;
    assert!(value <= -1e-3, "Tr Xρ = {value}");
}

#[test]
fn upb_states_have_both_single_copy_extensions() {
    for upb in [tiles_upb(), pyramid_upb()] {
        let rho = upb_state(&upb).unwrap();
        for (s_a, s_b) in [(2, 1), (1, 2)] {
            let shape = shape_for(&rho, s_a, s_b);
            let v = decide(&rho, &shape, ExtensionKind::Positive).unwrap();
            assert_eq!(v.decision, Decision::Exists, "({s_a},{s_b}) optimum {}", v.optimum);
            let h = v.certificate.unwrap();
            let report = verify_certificate(&h, &rho, &shape, ExtensionKind::Positive, None);
            assert!(report.passed(), "{:?}", report.failures);
        }
    }
}

#[test]
fn upb_analytic_extension_traces_to_the_state() {
    for upb in [tiles_upb(), pyramid_upb()] {
        let rho = upb_state(&upb).unwrap();
        let h = upb_analytic_extension(&upb);
        let hs = HilbertShape::new(vec![3, 3, 3, 3]).unwrap();
        // Layout [A1, A2, B1, B2]: explicit index summation over A2 and B2.
        let mut reduced = ComplexMatrix::zeros(9, 9);
        for a in 0..3 {
            for b in 0..3 {
                for ap in 0..3 {
                    for bp in 0..3 {
                        let mut acc = C64::new(0.0, 0.0);
                        for x in 0..3 {
                            for y in 0..3 {
                                acc += h[(hs.index(&[a, x, b, y]), hs.index(&[ap, x, bp, y]))];
                            }
                        }
                        reduced[(a * 3 + b, ap * 3 + bp)] = acc;
                    }
                }
            }
        }
        assert!(reduced.max_abs_diff(rho.rho()) <= 1e-9);
        let via_lib = partial_trace(&h, &hs, &[0, 2]).unwrap();
        assert!(via_lib.max_abs_diff(rho.rho()) <= 1e-12);

        let shape = ExtensionShape::new(3, 3, 2, 2).unwrap();
        let report = verify_certificate(&h, &rho, &shape, ExtensionKind::Decomposable, None);
        assert!(report.symmetry_residual <= 1e-10);
        assert!(report.passed(), "{:?}", report.failures);
        assert!(sample_witness_positivity(&h, &shape, 10_000, 3, true) >= -1e-8);
    }
}

#[test]
fn werner_spectra() {
    let s = werner_swap_spectrum(2, 1, 1).unwrap();
    assert!((s[0] + 1.0).abs() < 1e-12 && (s[s.len() - 1] - 1.0).abs() < 1e-12);
    let t = werner_threshold(2, 2, 2).unwrap();
    assert!((t.lambda_m - 0.5).abs() < 1e-9);
    assert!((t.phi_min + 0.5).abs() < 1e-9);
    for d in 2..=4 {
        for s_a in 1..=3 {
            for s_b in 1..=3 {
                if s_a + s_b <= d {
                    let t = werner_threshold(d, s_a, s_b).unwrap();
                    assert!((t.phi_min + 1.0).abs() < 1e-9, "d={d} ({s_a},{s_b})");
                }
            }
        }
    }
    // More copies than the local dimension supports: λ_m < 1.
    let t = werner_threshold(2, 1, 2).unwrap();
    assert!((t.phi_min + 0.5).abs() < 1e-9);
    let t = werner_threshold(2, 1, 3).unwrap();
    assert!((t.phi_min + 1.0 / 3.0).abs() < 1e-9);
}

#[test]
fn werner_threshold_matches_sdp() {
    let t = werner_threshold(2, 2, 2).unwrap();
    let shape = ExtensionShape::new(2, 2, 2, 2).unwrap();
    let inside = decide(&werner(2, t.phi_min + 0.02).unwrap(), &shape, ExtensionKind::Positive).unwrap();
    let outside = decide(&werner(2, t.phi_min - 0.05).unwrap(), &shape, ExtensionKind::Positive).unwrap();
    assert_eq!(inside.decision, Decision::Exists);
    assert_eq!(outside.decision, Decision::NotExists);
}

#[test]
fn certificates_trace_down_to_smaller_shapes() {
    let rho = werner(2, -0.45).unwrap();
    let shape = shape_for(&rho, 2, 2);
    let v = decide(&rho, &shape, ExtensionKind::Positive).unwrap();
    assert_eq!(v.decision, Decision::Exists);
    let h = v.certificate.unwrap();
    let hs = shape.hilbert_shape();
    for (keep, s_a, s_b) in [(vec![0, 2, 3], 1, 2), (vec![0, 1, 2], 2, 1), (vec![0, 2], 1, 1)] {
        let reduced = partial_trace(&h, &hs, &keep).unwrap();
        let small = shape_for(&rho, s_a, s_b);
        let report = verify_certificate(&reduced, &rho, &small, ExtensionKind::Positive, None);
        assert!(report.passed(), "({s_a},{s_b}): {:?}", report.failures);
    }
}

#[test]
fn positive_never_beats_decomposable() {
    let states = [
        choi_horodecki(3.5).unwrap(),
        choi_horodecki(4.5).unwrap(),
        choi_horodecki(4.95).unwrap(),
        max_entangled(3).unwrap(),
        random_separable(3, 3, 4, 8).unwrap(),
    ];
    for rho in &states {
        let shape = shape_for(rho, 2, 1);
        let pos = decide(rho, &shape, ExtensionKind::Positive).unwrap();
        let dec = decide(rho, &shape, ExtensionKind::Decomposable).unwrap();
        assert!(dec.optimum <= pos.optimum + 1e-7, "{}: {} > {}", rho.label(), dec.optimum, pos.optimum);
        assert!(
            !(pos.decision == Decision::Exists && dec.decision == Decision::NotExists),
            "{}",
            rho.label()
        );
    }
}

#[test]
fn decomposable_certificate_reassembles() {
    let rho = choi_horodecki(4.5).unwrap();
    let shape = shape_for(&rho, 2, 1);
    let v = decide(&rho, &shape, ExtensionKind::Decomposable).unwrap();
    assert_eq!(v.decision, Decision::Exists);
    let h = v.certificate.unwrap();
    let dec = v.decomposition.unwrap();
    assert!(dec.reassemble(&shape).max_abs_diff(&h) <= 1e-9);
    assert!(dec.min_block_eigenvalue().unwrap() >= -1e-9);
    let report = verify_certificate(&h, &rho, &shape, ExtensionKind::Decomposable, Some(&dec));
    assert!(report.passed(), "{:?}", report.failures);
    // A decomposable certificate beyond the positive threshold is not PSD.
    assert!(hermitian_eigenvalues(&h).unwrap()[0] < -1e-6);
}

#[test]
fn fault_injection_is_caught() {
    let ens = random_separable_ensemble(2, 2, 3, 17).unwrap();
    let rho = ens.state().unwrap();
    let shape = ExtensionShape::new(2, 2, 2, 1).unwrap();
    let h = separable_extension(&ens, 2, 1).unwrap();
    let clean = verify_certificate(&h, &rho, &shape, ExtensionKind::Positive, None);
    assert!(clean.passed());
    assert!(clean.partial_trace_residual <= 1e-10);
    assert!(clean.symmetry_residual <= 1e-10);

    let eig = lhvcert_core::tensor::hermitian_eig(&h).unwrap();
    let lowest = eig.values[0];
    let bad = eig.map(|x| if x == lowest { -1e-3 } else { x });
    let report = verify_certificate(&bad, &rho, &shape, ExtensionKind::Positive, None);
    assert!(!report.passed());
    assert!((report.min_eigenvalue.unwrap() + 1e-3).abs() < 1e-9);

    // Breaking the marginal.
    let mut off = h.clone();
    off[(0, 0)] += C64::new(1e-4, 0.0);
    off[(7, 7)] -= C64::new(1e-4, 0.0);
    let report = verify_certificate(&off, &rho, &shape, ExtensionKind::Positive, None);
    assert!(!report.passed());
}

#[test]
fn werner_d2_sweep_three_copies() {
    let shape = ExtensionShape::new(2, 2, 1, 3).unwrap();
    let r = sweep_threshold(|phi| werner(2, phi), &shape, ExtensionKind::Positive, -1.0, 1.0, 0.005, &DecideOptions::default()).unwrap();
    let t = r.threshold.expect("threshold");
    assert!((t + 1.0 / 3.0).abs() <= 0.01, "{t}");
    let (lo, hi) = r.bracket.unwrap();
    assert!(hi - lo <= 0.005 + 1e-12);
}

#[test]
fn sweep_reports_non_monotone_endpoints() {
    let shape = ExtensionShape::new(2, 2, 1, 2).unwrap();
    let r = sweep_threshold(|phi| werner(2, phi), &shape, ExtensionKind::Positive, 0.0, 1.0, 0.01, &DecideOptions::default()).unwrap();
    assert!(r.non_monotone.is_some());
    assert!(r.threshold.is_none());
}

#[test]
fn quasi_optimum_bounded_by_positive_optimum() {
    let rho = upb_state(&tiles_upb()).unwrap();
    let shape = shape_for(&rho, 2, 1);
    let pos = build_extension_sdp(&rho, &shape).unwrap();
    let quasi = build_quasi_extension_sdp(&rho, &shape).unwrap();
    let a = lhvcert_core::sdp::solve(&pos.problem, 1e-9).unwrap();
    let b = lhvcert_core::sdp::solve(&quasi.problem, 1e-9).unwrap();
    assert!(-b.dual_obj <= -a.dual_obj + 1e-7);
}

#[test]
fn dimension_cap_enforced() {
    let rho = werner(4, 0.0).unwrap();
    let shape = shape_for(&rho, 3, 3);
    assert!(build_extension_sdp(&rho, &shape).is_err());
    assert!(decide(&rho, &shape, ExtensionKind::Positive).is_err());
}
