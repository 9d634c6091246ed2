use std::ffi::OsString;
use std::fs::{self, OpenOptions};
use std::path::{Path, PathBuf};

use anyhow::{anyhow, Context};
use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};
use lhvcert_core::extension::{
    build_program, decide_from_solution, decide_with, sweep_threshold, verify_certificate, werner_threshold, Decision,
    DecideOptions, ExtensionKind, ExtensionShape, ExtensionVerdict, VerificationReport, DEFAULT_MAX_DIM,
};
use lhvcert_core::lhv::{
    lhv_from_extension, lhv_from_one_sided, lhv_from_one_sided_bob, polytope_membership, quantum_probabilities,
    reconstruct, LhvModel, Membership,
};
use lhvcert_core::sdp::solve;
use lhvcert_core::states::{self, BipartiteState};
use serde::Serialize;
use serde_json::{json, Value};

use crate::formats::{
    read_certificate, read_json, sdp_dump, status_name, weights_json, write_csv, write_json, CertificateJson, CsvRow,
    Kind, ProbabilitiesJson, ScenarioJson, ShapeJson, StateJson,
};
use crate::zoo::{load_povms, load_state};

pub const MAX_DIM_ENV: &str = "LHVCERT_MAX_DIM";

#[derive(Parser, Debug)]
#[command(
    name = "lhvcert",
    version,
    about = "Symmetric extensions of bipartite states and the LHV models they give",
    after_help = "States: werner:d=,phi= | ch:alpha= | maxent:d= | tiles | pyramid | separable:da=,db=,k=[,seed=] | path to a JSON state"
)]
pub struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// Seed for random states and POVMs.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Solver tolerance, between 1e-10 and 1e-4.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Half-width of the band around optimum 1 where the optimum alone does not decide.
    #[arg(long, global = true)]
    band: Option<f64>,
    /// Also write the JSON report to this file.
    #[arg(long, global = true, value_name = "PATH")]
    report: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print a state as JSON.
    State {
        /// Zoo state (`name:key=val,...`) or JSON file.
        #[arg(long, value_name = "SPEC")]
        state: String,
    },
    /// Decide whether a state has an (s_a, s_b) extension.
    Extend {
        #[arg(long, value_name = "SPEC")]
        state: String,
        /// Copies of A and B, as `s_a,s_b`.
        #[arg(long, value_parser = parse_shape)]
        shape: (usize, usize),
        #[arg(long, value_enum, default_value_t = Kind::Positive)]
        kind: Kind,
        /// Write the certificate here when one exists.
        #[arg(long, value_name = "PATH")]
        certificate_out: Option<PathBuf>,
        /// Write the semidefinite program and the solver output here.
        #[arg(long, value_name = "PATH")]
        dump_sdp: Option<PathBuf>,
    },
    /// Bisect a state family for its extendibility threshold.
    Sweep {
        #[arg(long, value_enum)]
        family: Family,
        #[arg(long, value_parser = parse_shape)]
        shape: (usize, usize),
        #[arg(long, value_enum, default_value_t = Kind::Positive)]
        kind: Kind,
        /// Local dimension for the Werner family.
        #[arg(long, default_value_t = 2)]
        d: usize,
        #[arg(long, allow_hyphen_values = true)]
        lo: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        hi: Option<f64>,
        #[arg(long, default_value_t = 0.005)]
        res: f64,
        /// CSV of every probe: parameter, optimum, decision.
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Werner threshold from the symmetrized swap spectrum.
    WernerThreshold {
        #[arg(long)]
        d: usize,
        #[arg(long, value_parser = parse_shape)]
        shape: (usize, usize),
    },
    /// LHV model for given measurements from an extension certificate.
    Lhv {
        #[arg(long, value_name = "SPEC")]
        state: String,
        #[arg(long, value_parser = parse_shape)]
        shape: (usize, usize),
        #[arg(long, value_enum, default_value_t = Kind::Positive)]
        kind: Kind,
        /// POVM JSON file, or `random:a=2+2,b=2+3` (outcome counts per setting).
        #[arg(long, value_name = "SPEC")]
        povms: String,
        /// Use a saved certificate instead of solving.
        #[arg(long, value_name = "PATH")]
        certificate: Option<PathBuf>,
    },
    /// Test a probability vector for membership in the local polytope.
    Polytope {
        #[arg(long, value_name = "PATH")]
        p: PathBuf,
        #[arg(long, value_name = "PATH")]
        scenario: PathBuf,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Family {
    Ch,
    Werner,
}

fn parse_shape(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s.split_once(',').ok_or("expected s_a,s_b")?;
    let parse = |t: &str| t.trim().parse::<usize>().map_err(|e| format!("{t:?}: {e}"));
    Ok((parse(a)?, parse(b)?))
}

/// Errors in what was asked exit with 2, failures while computing with 1.
enum Failure {
    Usage(anyhow::Error),
    Compute(anyhow::Error),
}

trait Classify<T> {
    fn usage(self) -> Result<T, Failure>;
    fn compute(self) -> Result<T, Failure>;
}

impl<T, E: Into<anyhow::Error>> Classify<T> for Result<T, E> {
    fn usage(self) -> Result<T, Failure> {
        self.map_err(|e| Failure::Usage(e.into()))
    }

    fn compute(self) -> Result<T, Failure> {
        self.map_err(|e| Failure::Compute(e.into()))
    }
}

struct Outcome {
    report: Value,
    decided: bool,
}

pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(&cli) {
        Ok(outcome) => {
            let text = serde_json::to_string_pretty(&outcome.report).expect("serializable");
            println!("{text}");
            if let Some(path) = &cli.global.report {
                if let Err(e) = write_json(path, &outcome.report) {
                    eprintln!("error: {e:#}");
                    return 1;
                }
            }
            if outcome.decided {
                0
            } else {
                1
            }
        }
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e:#}\n");
            eprintln!("{}", Cli::command().render_usage());
            2
        }
        Err(Failure::Compute(e)) => {
            eprintln!("error: {e:#}");
            1
        }
    }
}

/// Fails unless `path` can be written, leaving existing files untouched.
fn check_writable(path: &Path) -> anyhow::Result<()> {
    let existed = path.exists();
    OpenOptions::new()
        .append(true)
        .create(true)
        .open(path)
        .with_context(|| format!("{} is not writable", path.display()))?;
    if !existed {
        fs::remove_file(path)?;
    }
    Ok(())
}

fn options(global: &Global) -> anyhow::Result<DecideOptions> {
    let mut o = DecideOptions::default();
    if let Some(tol) = global.tol {
        if !(1e-10..=1e-4).contains(&tol) {
            return Err(anyhow!("--tol must lie in [1e-10, 1e-4], got {tol}"));
        }
        o.tol = tol;
    }
    if let Some(band) = global.band {
        if !(0.0..1.0).contains(&band) {
            return Err(anyhow!("--band must lie in [0, 1), got {band}"));
        }
        o.band = band;
    }
    o.max_dim = match std::env::var(MAX_DIM_ENV) {
        Ok(v) => v.trim().parse().with_context(|| format!("{MAX_DIM_ENV}={v:?} is not a dimension"))?,
        Err(_) => DEFAULT_MAX_DIM,
    };
    Ok(o)
}

fn output_paths(cli: &Cli) -> Vec<&Path> {
    let mut paths: Vec<&Path> = cli.global.report.iter().map(PathBuf::as_path).collect();
    match &cli.command {
        Command::Extend {
            certificate_out,
            dump_sdp,
            ..
        } => paths.extend(certificate_out.iter().chain(dump_sdp.iter()).map(PathBuf::as_path)),
        Command::Sweep { out, .. } => paths.extend(out.iter().map(PathBuf::as_path)),
        _ => {}
    }
    paths
}

fn execute(cli: &Cli) -> Result<Outcome, Failure> {
    for path in output_paths(cli) {
        check_writable(path).usage()?;
    }
    let opts = options(&cli.global).usage()?;
    let seed = cli.global.seed;
    match &cli.command {
        Command::State { state } => {
            let rho = load_state(state, seed).usage()?;
            Ok(Outcome {
                report: serde_json::to_value(StateJson::from_state(&rho)).compute()?,
                decided: true,
            })
        }
        Command::Extend {
            state,
            shape,
            kind,
            certificate_out,
            dump_sdp,
        } => {
            let rho = load_state(state, seed).usage()?;
            let shape = extension_shape(&rho, *shape).usage()?;
            let verdict = run_decide(&rho, &shape, *kind, &opts, dump_sdp.as_deref())?;
            let mut written = None;
            if let (Some(path), Some(h)) = (certificate_out, &verdict.certificate) {
                let cert = CertificateJson::new(*kind, &shape, h, verdict.decomposition.as_ref());
                write_json(path, &cert).compute()?;
                written = Some(path.display().to_string());
            }
            let mut report = verdict_json(&rho, &verdict);
            report["certificate"] = json!(written);
            Ok(Outcome {
                report,
                decided: verdict.decision != Decision::Indeterminate,
            })
        }
        Command::Sweep {
            family,
            shape,
            kind,
            d,
            lo,
            hi,
            res,
            out,
        } => sweep(*family, *shape, *kind, *d, *lo, *hi, *res, out.as_deref(), &opts),
        Command::WernerThreshold { d, shape } => {
            let t = werner_threshold(*d, shape.0, shape.1).usage()?;
            Ok(Outcome {
                report: json!({
                    "d": d,
                    "shape": [shape.0, shape.1],
                    "lambda_m": t.lambda_m,
                    "phi_min": t.phi_min,
                }),
                decided: true,
            })
        }
        Command::Lhv {
            state,
            shape,
            kind,
            povms,
            certificate,
        } => lhv(state, *shape, *kind, povms, certificate.as_deref(), seed, &opts),
        Command::Polytope { p, scenario } => {
            let sc = read_json::<ScenarioJson>(scenario).usage()?.to_scenario().usage()?;
            let p = read_json::<ProbabilitiesJson>(p).usage()?.to_vector(sc.clone()).usage()?;
            let report = match polytope_membership(&p).compute()? {
                Membership::Inside { model, residual } => {
                    let weights: Vec<_> = weights_json(&model).into_iter().filter(|w| w.p > 1e-12).collect();
                    json!({
                        "scenario": ScenarioJson::from_scenario(&sc),
                        "result": "inside",
                        "residual": residual,
                        "weights": weights,
                    })
                }
                Membership::Outside { functional, visibility } => json!({
                    "scenario": ScenarioJson::from_scenario(&sc),
                    "result": "outside",
                    "visibility": visibility,
                    "functional": {
                        "coefficients": functional.coefficients,
                        "local_bound": functional.local_bound,
                        "value": functional.value,
                        "margin": functional.margin(),
                    },
                }),
            };
            Ok(Outcome { report, decided: true })
        }
    }
}

fn extension_shape(rho: &BipartiteState, (s_a, s_b): (usize, usize)) -> anyhow::Result<ExtensionShape> {
    let (d_a, d_b) = rho.dims();
    Ok(ExtensionShape::new(d_a, d_b, s_a, s_b)?)
}

fn run_decide(
    rho: &BipartiteState,
    shape: &ExtensionShape,
    kind: Kind,
    opts: &DecideOptions,
    dump: Option<&Path>,
) -> Result<ExtensionVerdict, Failure> {
    let Some(path) = dump else {
        return decide_with(rho, shape, kind.into(), opts).map_err(classify_core);
    };
    let program = build_program(rho, shape, kind.into(), opts.max_dim).map_err(classify_core)?;
    let result = solve(&program.problem, opts.tol).compute()?;
    write_json(path, &sdp_dump(&program.problem, &result)).compute()?;
    Ok(decide_from_solution(rho, &program, &result, opts))
}

/// Oversized or mismatched requests are usage errors; the rest are failures.
fn classify_core(e: lhvcert_core::Error) -> Failure {
    use lhvcert_core::Error as E;
    match e {
        E::DimensionCap { .. } | E::DimensionMismatch(_) | E::ParameterOutOfRange(_) | E::Invalid(_) => {
            Failure::Usage(e.into())
        }
        _ => Failure::Compute(e.into()),
    }
}

fn decision_name(d: Decision) -> &'static str {
    match d {
        Decision::Exists => "exists",
        Decision::NotExists => "not-exists",
        Decision::Indeterminate => "indeterminate",
    }
}

fn kind_name(k: ExtensionKind) -> &'static str {
    match k {
        ExtensionKind::Positive => "positive",
        ExtensionKind::Decomposable => "decomposable",
    }
}

#[derive(Serialize)]
struct ResidualsJson {
    partial_trace: f64,
    symmetry: f64,
    hermiticity: f64,
    min_eigenvalue: Option<f64>,
    block_min_eigenvalue: Option<f64>,
    reassembly: Option<f64>,
    witness_sample_min: Option<f64>,
    failures: Vec<String>,
}

fn residuals_json(r: &VerificationReport) -> ResidualsJson {
    ResidualsJson {
        partial_trace: r.partial_trace_residual,
        symmetry: r.symmetry_residual,
        hermiticity: r.hermiticity_residual,
        min_eigenvalue: r.min_eigenvalue,
        block_min_eigenvalue: r.block_min_eigenvalue,
        reassembly: r.reassembly_residual,
        witness_sample_min: r.witness_sample_min,
        failures: r.failures.clone(),
    }
}

fn verdict_json(rho: &BipartiteState, v: &ExtensionVerdict) -> Value {
    json!({
        "state": rho.label(),
        "shape": ShapeJson::from(&v.shape),
        "kind": kind_name(v.kind),
        "decision": decision_name(v.decision),
        "optimum": v.optimum,
        "solver_status": status_name(v.solver_status),
        "iterations": v.iterations,
        "residuals": v.residuals.as_ref().map(residuals_json),
        "dual_value": v.dual_value,
        "dual_min_eigenvalue": v.dual_min_eigenvalue,
        "diagnostics": v.diagnostics,
    })
}

#[allow(clippy::too_many_arguments)]
fn sweep(
    family: Family,
    (s_a, s_b): (usize, usize),
    kind: Kind,
    d: usize,
    lo: Option<f64>,
    hi: Option<f64>,
    res: f64,
    out: Option<&Path>,
    opts: &DecideOptions,
) -> Result<Outcome, Failure> {
    let (name, dim, default_lo, default_hi) = match family {
        Family::Ch => ("ch", 3, 2.0, 5.0),
        Family::Werner => ("werner", d, -1.0, 1.0),
    };
    let shape = ExtensionShape::new(dim, dim, s_a, s_b).usage()?;
    let (lo, hi) = (lo.unwrap_or(default_lo), hi.unwrap_or(default_hi));
    let report = match family {
        Family::Ch => sweep_threshold(states::choi_horodecki, &shape, kind.into(), lo, hi, res, opts),
        Family::Werner => sweep_threshold(|phi| states::werner(d, phi), &shape, kind.into(), lo, hi, res, opts),
    }
    .map_err(classify_core)?;

    let mut probes = report.probes.clone();
    probes.sort_by(|a, b| a.parameter.total_cmp(&b.parameter));
    if let Some(path) = out {
        let rows: Vec<CsvRow> = probes
            .iter()
            .map(|p| CsvRow {
                parameter: p.parameter,
                optimum: p.optimum,
                decision: decision_name(p.decision),
            })
            .collect();
        write_csv(path, &rows).compute()?;
    }
    let json = json!({
        "family": name,
        "shape": ShapeJson::from(&shape),
        "kind": kind_name(kind.into()),
        "range": [lo, hi],
        "resolution": res,
        "bracket": report.bracket.map(|(a, b)| [a, b]),
        "threshold": report.threshold,
        "non_monotone": report.non_monotone,
        "probes": probes.iter().map(|p| json!({
            "parameter": p.parameter,
            "optimum": p.optimum,
            "decision": decision_name(p.decision),
            "extendible": p.extendible,
        })).collect::<Vec<_>>(),
    });
    Ok(Outcome {
        decided: report.threshold.is_some(),
        report: json,
    })
}

fn lhv(
    state: &str,
    (s_a, s_b): (usize, usize),
    kind: Kind,
    povms: &str,
    certificate: Option<&Path>,
    seed: u64,
    opts: &DecideOptions,
) -> Result<Outcome, Failure> {
    let rho = load_state(state, seed).usage()?;
    let shape = extension_shape(&rho, (s_a, s_b)).usage()?;
    let (d_a, d_b) = rho.dims();
    let (a, b) = load_povms(povms, d_a, d_b, seed).usage()?;
    let (na, nb) = (a.len(), b.len());
    let source = if na == s_a && nb == s_b {
        "extension"
    } else if s_a == 1 && nb == s_b {
        "one-sided-a"
    } else if s_b == 1 && na == s_a {
        "one-sided-b"
    } else {
        return Err(Failure::Usage(anyhow!(
            "{na} Alice and {nb} Bob settings do not fit shape {s_a},{s_b}; \
             settings must match the shape, or one side of the shape must be 1"
        )));
    };

    let (h, verification) = match certificate {
        Some(path) => {
            let cert = read_certificate(path).usage()?;
            if cert.shape != shape {
                return Err(Failure::Usage(anyhow!("certificate shape does not match --shape {s_a},{s_b}")));
            }
            let report = verify_certificate(&cert.h, &rho, &shape, cert.kind, cert.decomposition.as_ref());
            if !report.passed() {
                return Err(Failure::Compute(anyhow!(
                    "certificate failed verification: {}",
                    report.failures.join("; ")
                )));
            }
            (cert.h, Some(report))
        }
        None => {
            let verdict = decide_with(&rho, &shape, kind.into(), opts).map_err(classify_core)?;
            match verdict.certificate {
                Some(h) => (h, verdict.residuals),
                None => {
                    let mut report = verdict_json(&rho, &verdict);
                    report["weights"] = Value::Null;
                    return Ok(Outcome { report, decided: false });
                }
            }
        }
    };

    let model: LhvModel = match source {
        "extension" => lhv_from_extension(&h, &a, &b),
        "one-sided-a" => lhv_from_one_sided(&h, &a, &b),
        _ => lhv_from_one_sided_bob(&h, &a, &b),
    }
    .compute()?;
    let p = quantum_probabilities(&rho, &a, &b).compute()?;
    let report = json!({
        "state": rho.label(),
        "shape": ShapeJson::from(&shape),
        "source": source,
        "scenario": ScenarioJson::from_scenario(model.scenario()),
        "weights": weights_json(&model),
        "residuals": {
            "min_weight": model.min_weight(),
            "weight_sum_error": (model.total() - 1.0).abs(),
            "reconstruction": reconstruct(&model).max_abs_diff(&p),
            "certificate": verification.as_ref().map(residuals_json),
        },
    });
    Ok(Outcome { report, decided: true })
}

