use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use lhvcert::formats::{read_certificate, MatrixJson, PovmsJson, StateJson};
use lhvcert_core::extension::verify_certificate;
use lhvcert_core::lhv::PovmSet;
use lhvcert_core::states::werner;
use lhvcert_core::ComplexMatrix;
use serde_json::Value;

fn lhvcert(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lhvcert"))
        .args(args)
        .env_remove("LHVCERT_MAX_DIM")
        .output()
        .expect("spawn lhvcert")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("{e}: stdout {:?} stderr {:?}", String::from_utf8_lossy(&out.stdout), String::from_utf8_lossy(&out.stderr))
    })
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn extend_werner_writes_a_certificate_that_reverifies() {
    let dir = tempfile::tempdir().unwrap();
    let cert = dir.path().join("cert.json");
    let out = lhvcert(&[
        "extend",
        "--state",
        "werner:d=2,phi=-0.4",
        "--shape",
        "1,2",
        "--kind",
        "positive",
        "--certificate-out",
        path_str(&cert),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    assert_eq!(report["decision"], "exists");

    let c = read_certificate(&cert).unwrap();
    let rho = werner(2, -0.4).unwrap();
    let check = verify_certificate(&c.h, &rho, &c.shape, c.kind, c.decomposition.as_ref());
    assert!(check.passed(), "{:?}", check.failures);
}

#[test]
fn decomposable_certificate_round_trips_with_its_decomposition() {
    let dir = tempfile::tempdir().unwrap();
    let cert = dir.path().join("cert.json");
    let out = lhvcert(&[
        "extend",
        "--state",
        "ch:alpha=4.5",
        "--shape",
        "2,1",
        "--kind",
        "decomposable",
        "--certificate-out",
        path_str(&cert),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["decision"], "exists");
    let c = read_certificate(&cert).unwrap();
    assert!(c.decomposition.is_some());
    let rho = lhvcert_core::states::choi_horodecki(4.5).unwrap();
    let check = verify_certificate(&c.h, &rho, &c.shape, c.kind, c.decomposition.as_ref());
    assert!(check.passed(), "{:?}", check.failures);
}

#[test]
fn no_certificate_file_without_an_extension() {
    let dir = tempfile::tempdir().unwrap();
    let cert = dir.path().join("cert.json");
    let out = lhvcert(&[
        "extend",
        "--state",
        "maxent:d=2",
        "--shape",
        "2,1",
        "--certificate-out",
        path_str(&cert),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    assert_eq!(report["decision"], "not-exists");
    assert!(report["dual_value"].as_f64().unwrap() < 0.0);
    assert!(!cert.exists());
}

#[test]
fn werner_threshold_reaches_minus_one() {
    let out = lhvcert(&["werner-threshold", "--d", "3", "--shape", "1,2"]);
    assert_eq!(out.status.code(), Some(0));
    let phi = json(&out)["phi_min"].as_f64().unwrap();
    assert!((phi + 1.0).abs() <= 1e-9, "{phi}");
}

#[test]
fn ch_sweep_csv_brackets_the_threshold_and_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.csv"), dir.path().join("b.csv"));
    let args = |p: &Path| {
        lhvcert(&[
            "sweep", "--family", "ch", "--shape", "2,1", "--kind", "positive", "--lo", "2", "--hi", "5", "--res",
            "0.005", "--out", path_str(p),
        ])
    };
    let first = args(&a);
    let second = args(&b);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(first.stdout, second.stdout);
    let text = fs::read_to_string(&a).unwrap();
    assert_eq!(text, fs::read_to_string(&b).unwrap());

    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("parameter,optimum,decision"));
    let rows: Vec<(f64, String)> = lines
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            assert_eq!(f.len(), 3);
            (f[0].parse().unwrap(), f[2].to_string())
        })
        .collect();
    let flip = rows.windows(2).position(|w| w[0].1 == "exists" && w[1].1 == "not-exists").expect("sign change");
    let (lo, hi) = (rows[flip].0, rows[flip + 1].0);
    assert!(hi - lo <= 0.005 + 1e-12);
    assert!((0.5 * (lo + hi) - 4.33).abs() <= 0.01, "[{lo}, {hi}]");
    assert!(rows[..=flip].iter().all(|r| r.1 == "exists"));
    assert!(rows[flip + 1..].iter().all(|r| r.1 == "not-exists"));
}

#[test]
fn state_output_feeds_back_as_a_state_file() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("rho.json");
    let out = lhvcert(&["state", "--state", "tiles", "--report", path_str(&file)]);
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    assert_eq!(report["dims"], serde_json::json!([3, 3]));
    assert_eq!(report["rows"], 9);
    assert_eq!(report["entries"].as_array().unwrap().len(), 81);
    let reloaded: StateJson = serde_json::from_slice(&fs::read(&file).unwrap()).unwrap();
    let rho = reloaded.to_state().unwrap();
    let direct = lhvcert_core::states::upb_state(&lhvcert_core::states::tiles_upb()).unwrap();
    assert_eq!(rho.rho(), direct.rho());

    let out = lhvcert(&["extend", "--state", path_str(&file), "--shape", "2,1"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["decision"], "exists");
}

#[test]
fn lhv_from_separable_state_reconstructs_probabilities() {
    let out = lhvcert(&[
        "--seed",
        "3",
        "lhv",
        "--state",
        "separable:da=2,db=2,k=3",
        "--shape",
        "2,2",
        "--povms",
        "random:a=2+3,b=2+2",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let report = json(&out);
    assert_eq!(report["source"], "extension");
    let weights = report["weights"].as_array().unwrap();
    assert_eq!(weights.len(), 2 * 3 * 2 * 2);
    let total: f64 = weights.iter().map(|w| w["p"].as_f64().unwrap()).sum();
    assert!((total - 1.0).abs() <= 1e-8);
    assert!(report["residuals"]["min_weight"].as_f64().unwrap() >= -1e-10);
    assert!(report["residuals"]["reconstruction"].as_f64().unwrap() <= 1e-8);
}

#[test]
fn lhv_one_sided_accepts_any_number_of_alice_settings() {
    let out = lhvcert(&[
        "lhv",
        "--state",
        "werner:d=3,phi=-1",
        "--shape",
        "1,2",
        "--povms",
        "random:a=2+3+2+3+2,b=2+3",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let report = json(&out);
    assert_eq!(report["source"], "one-sided-a");
    assert!(report["residuals"]["reconstruction"].as_f64().unwrap() <= 1e-8);
    assert!(report["residuals"]["min_weight"].as_f64().unwrap() >= -1e-10);
}

#[test]
fn lhv_reads_povm_files_and_saved_certificates() {
    let dir = tempfile::tempdir().unwrap();
    let cert = dir.path().join("cert.json");
    let povms = dir.path().join("povms.json");
    let out = lhvcert(&[
        "extend",
        "--state",
        "werner:d=2,phi=-0.45",
        "--shape",
        "2,2",
        "--certificate-out",
        path_str(&cert),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let a = PovmSet::random(2, &[2, 2], 11).unwrap();
    let b = PovmSet::random(2, &[3, 2], 12).unwrap();
    fs::write(&povms, serde_json::to_string(&PovmsJson::from_sets(&a, &b)).unwrap()).unwrap();
    let out = lhvcert(&[
        "lhv",
        "--state",
        "werner:d=2,phi=-0.45",
        "--shape",
        "2,2",
        "--povms",
        path_str(&povms),
        "--certificate",
        path_str(&cert),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let report = json(&out);
    assert!(report["residuals"]["reconstruction"].as_f64().unwrap() <= 1e-8);
    assert!(report["residuals"]["certificate"]["failures"].as_array().unwrap().is_empty());

    // The certificate does not belong to a different state.
    let out = lhvcert(&[
        "lhv",
        "--state",
        "werner:d=2,phi=0.3",
        "--shape",
        "2,2",
        "--povms",
        path_str(&povms),
        "--certificate",
        path_str(&cert),
    ]);
    assert_eq!(out.status.code(), Some(1));
}

fn singlet_chsh_probabilities() -> Vec<f64> {
    use std::f64::consts::FRAC_PI_4;
    let basis = |theta: f64| {
        let (c, s) = ((theta / 2.0).cos(), (theta / 2.0).sin());
        ComplexMatrix::from_real(2, 2, &[c, -s, s, c]).unwrap()
    };
    let a = PovmSet::projective(&[basis(0.0), basis(2.0 * FRAC_PI_4)]).unwrap();
    let b = PovmSet::projective(&[basis(FRAC_PI_4), basis(-FRAC_PI_4)]).unwrap();
    let p = lhvcert_core::lhv::quantum_probabilities(&werner(2, -1.0).unwrap(), &a, &b).unwrap();
    p.entries().to_vec()
}

#[test]
fn polytope_separates_the_singlet_and_accepts_noise() {
    let dir = tempfile::tempdir().unwrap();
    let sc = dir.path().join("scenario.json");
    let p = dir.path().join("p.json");
    fs::write(&sc, r#"{"o_a":[2,2],"o_b":[2,2]}"#).unwrap();

    fs::write(&p, serde_json::to_string(&singlet_chsh_probabilities()).unwrap()).unwrap();
    let out = lhvcert(&["polytope", "--p", path_str(&p), "--scenario", path_str(&sc)]);
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    assert_eq!(report["result"], "outside");
    let f = &report["functional"];
    let ratio = f["value"].as_f64().unwrap() / f["local_bound"].as_f64().unwrap();
    assert!((ratio - std::f64::consts::SQRT_2).abs() <= 1e-6, "{ratio}");
    assert!(f["margin"].as_f64().unwrap() > 0.0);

    fs::write(&p, r#"{"entries":[0.25,0.25,0.25,0.25,0.25,0.25,0.25,0.25,0.25,0.25,0.25,0.25,0.25,0.25,0.25,0.25]}"#)
        .unwrap();
    let out = lhvcert(&["polytope", "--p", path_str(&p), "--scenario", path_str(&sc)]);
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    assert_eq!(report["result"], "inside");
    assert!(report["residual"].as_f64().unwrap() <= 1e-8);
}

#[test]
fn dump_sdp_writes_the_program() {
    let dir = tempfile::tempdir().unwrap();
    let dump = dir.path().join("sdp.json");
    let out = lhvcert(&["extend", "--state", "werner:d=2,phi=0", "--shape", "2,1", "--dump-sdp", path_str(&dump)]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&fs::read(&dump).unwrap()).unwrap();
    let m = v["c"].as_array().unwrap().len();
    assert_eq!(m, 15);
    assert_eq!(v["fs"].as_array().unwrap().len(), m);
    assert_eq!(v["block_sizes"], serde_json::json!([8]));
    assert_eq!(v["result"]["status"], "optimal");
    let f0: MatrixJson = serde_json::from_value(v["f0"][0].clone()).unwrap();
    assert_eq!(f0.to_matrix().unwrap(), ComplexMatrix::identity(8));
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(lhvcert(&[]).status.code(), Some(2));
    assert_eq!(lhvcert(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(lhvcert(&["extend", "--state", "werner:d=2,phi=0", "--shape", "12"]).status.code(), Some(2));
    assert_eq!(lhvcert(&["extend", "--state", "nonsense", "--shape", "1,2"]).status.code(), Some(2));
    assert_eq!(lhvcert(&["extend", "--state", "werner:d=2", "--shape", "1,2"]).status.code(), Some(2));
    assert_eq!(lhvcert(&["--tol", "1", "extend", "--state", "werner:d=2,phi=0", "--shape", "1,2"]).status.code(), Some(2));
    let out = lhvcert(&["lhv", "--state", "werner:d=2,phi=0", "--shape", "2,2", "--povms", "random:a=2,b=2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("Usage"));
    assert_eq!(lhvcert(&["--help"]).status.code(), Some(0));
}

#[test]
fn unwritable_outputs_are_rejected_before_computing() {
    let out = lhvcert(&["sweep", "--family", "ch", "--shape", "3,1", "--out", "/nonexistent-dir/out.csv"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
}

#[test]
fn dimension_cap_comes_from_the_environment() {
    let args = ["extend", "--state", "werner:d=2,phi=0", "--shape", "2,1"];
    let capped = Command::new(env!("CARGO_BIN_EXE_lhvcert")).args(args).env("LHVCERT_MAX_DIM", "4").output().unwrap();
    assert_eq!(capped.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&capped.stderr).contains("exceeds the cap"));
    let bad = Command::new(env!("CARGO_BIN_EXE_lhvcert")).args(args).env("LHVCERT_MAX_DIM", "lots").output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
    let tiny = Command::new(env!("CARGO_BIN_EXE_lhvcert"))
        .args(["extend", "--state", "werner:d=4,phi=0", "--shape", "3,3"])
        .env("LHVCERT_MAX_DIM", "1")
        .output()
        .unwrap();
    assert_eq!(tiny.status.code(), Some(2));
}

#[test]
fn indeterminate_decisions_exit_with_one() {
    let out = lhvcert(&["--band", "0", "extend", "--state", "werner:d=2,phi=-0.5", "--shape", "1,2"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["decision"], "indeterminate");
}
