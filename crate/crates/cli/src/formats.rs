//! JSON and CSV file formats.
//!
//! Matrices are `{"rows", "cols", "entries": [[re, im], ...]}` in row-major
//! order. States add `"dims": [d_a, d_b]`; certificates add the extension
//! shape, the kind and, for quasi-extensions, the witness decomposition.

use std::fs;
use std::io::Write;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use lhvcert_core::extension::{ExtensionKind, ExtensionShape, Partition, WitnessDecomposition};
use lhvcert_core::lhv::{LhvModel, MeasurementScenario, PovmSet, ProbabilityVector};
use lhvcert_core::sdp::{SdpResult, SdpStandardForm, SdpStatus};
use lhvcert_core::states::BipartiteState;
use lhvcert_core::{ComplexMatrix, C64};
use serde::{Deserialize, Serialize};

/// A matrix entry: `[re, im]` or a bare real number.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Entry {
    Complex([f64; 2]),
    Real(f64),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<Entry>,
}

impl MatrixJson {
    pub fn from_matrix(m: &ComplexMatrix) -> Self {
        Self {
            rows: m.rows(),
            cols: m.cols(),
            entries: m.as_slice().iter().map(|z| Entry::Complex([z.re, z.im])).collect(),
        }
    }

    pub fn to_matrix(&self) -> Result<ComplexMatrix> {
        let data = self
            .entries
            .iter()
            .map(|e| match *e {
                Entry::Complex([re, im]) => C64::new(re, im),
                Entry::Real(re) => C64::new(re, 0.0),
            })
            .collect();
        Ok(ComplexMatrix::from_vec(self.rows, self.cols, data)?)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StateJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dims: Option<[usize; 2]>,
    #[serde(flatten)]
    pub matrix: MatrixJson,
}

impl StateJson {
    pub fn from_state(rho: &BipartiteState) -> Self {
        let (d_a, d_b) = rho.dims();
        Self {
            label: Some(rho.label().to_string()),
            dims: Some([d_a, d_b]),
            matrix: MatrixJson::from_matrix(rho.rho()),
        }
    }

    /// Without `"dims"`, a square matrix of size `d²` is read as `d ⊗ d`.
    pub fn to_state(&self) -> Result<BipartiteState> {
        let m = self.matrix.to_matrix()?;
        let dims = match self.dims {
            Some([a, b]) => (a, b),
            None => {
                let d = (m.rows() as f64).sqrt().round() as usize;
                if d * d != m.rows() {
                    bail!("state of size {} needs an explicit \"dims\" field", m.rows());
                }
                (d, d)
            }
        };
        let label = self.label.clone().unwrap_or_else(|| "file".into());
        Ok(BipartiteState::new(m, dims, label)?)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Positive,
    Decomposable,
}

impl From<Kind> for ExtensionKind {
    fn from(k: Kind) -> Self {
        match k {
            Kind::Positive => ExtensionKind::Positive,
            Kind::Decomposable => ExtensionKind::Decomposable,
        }
    }
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct ShapeJson {
    pub d_a: usize,
    pub d_b: usize,
    pub s_a: usize,
    pub s_b: usize,
}

impl From<&ExtensionShape> for ShapeJson {
    fn from(s: &ExtensionShape) -> Self {
        Self {
            d_a: s.d_a,
            d_b: s.d_b,
            s_a: s.s_a,
            s_b: s.s_b,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct QBlockJson {
    /// Bit mask of the transposed tensor factors.
    pub partition: u32,
    pub matrix: MatrixJson,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DecompositionJson {
    pub p_block: MatrixJson,
    pub q_blocks: Vec<QBlockJson>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CertificateJson {
    pub kind: Kind,
    pub shape: ShapeJson,
    /// Local dimension of each tensor factor, A copies first.
    pub dims: Vec<usize>,
    #[serde(flatten)]
    pub matrix: MatrixJson,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub decomposition: Option<DecompositionJson>,
}

pub struct Certificate {
    pub kind: ExtensionKind,
    pub shape: ExtensionShape,
    pub h: ComplexMatrix,
    pub decomposition: Option<WitnessDecomposition>,
}

impl CertificateJson {
    pub fn new(kind: Kind, shape: &ExtensionShape, h: &ComplexMatrix, decomposition: Option<&WitnessDecomposition>) -> Self {
        Self {
            kind,
            shape: shape.into(),
            dims: shape.hilbert_shape().dims().to_vec(),
            matrix: MatrixJson::from_matrix(h),
            decomposition: decomposition.map(|d| DecompositionJson {
                p_block: MatrixJson::from_matrix(&d.p_block),
                q_blocks: d
                    .q_blocks
                    .iter()
                    .map(|(p, m)| QBlockJson {
                        partition: p.mask(),
                        matrix: MatrixJson::from_matrix(m),
                    })
                    .collect(),
            }),
        }
    }

    pub fn to_certificate(&self) -> Result<Certificate> {
        let s = self.shape;
        let decomposition = match &self.decomposition {
            None => None,
            Some(d) => Some(WitnessDecomposition {
                p_block: d.p_block.to_matrix()?,
                q_blocks: d
                    .q_blocks
                    .iter()
                    .map(|q| Ok((Partition(q.partition), q.matrix.to_matrix()?)))
                    .collect::<Result<_>>()?,
            }),
        };
        Ok(Certificate {
            kind: self.kind.into(),
            shape: ExtensionShape::new(s.d_a, s.d_b, s.s_a, s.s_b)?,
            h: self.matrix.to_matrix()?,
            decomposition,
        })
    }
}

/// POVMs for both parties: per setting, the list of its elements.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PovmsJson {
    #[serde(alias = "alice")]
    pub a: Vec<Vec<MatrixJson>>,
    #[serde(alias = "bob")]
    pub b: Vec<Vec<MatrixJson>>,
}

impl PovmsJson {
    pub fn from_sets(a: &PovmSet, b: &PovmSet) -> Self {
        let conv = |p: &PovmSet| {
            p.settings()
                .iter()
                .map(|s| s.iter().map(MatrixJson::from_matrix).collect())
                .collect()
        };
        Self { a: conv(a), b: conv(b) }
    }

    pub fn to_sets(&self) -> Result<(PovmSet, PovmSet)> {
        let conv = |party: &[Vec<MatrixJson>], name: &str| -> Result<PovmSet> {
            let settings = party
                .iter()
                .map(|s| s.iter().map(MatrixJson::to_matrix).collect::<Result<Vec<_>>>())
                .collect::<Result<Vec<_>>>()?;
            PovmSet::new(settings).with_context(|| format!("{name} POVMs"))
        };
        Ok((conv(&self.a, "Alice")?, conv(&self.b, "Bob")?))
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ScenarioJson {
    pub o_a: Vec<usize>,
    pub o_b: Vec<usize>,
}

impl ScenarioJson {
    pub fn from_scenario(sc: &MeasurementScenario) -> Self {
        Self {
            o_a: sc.o_a().to_vec(),
            o_b: sc.o_b().to_vec(),
        }
    }

    pub fn to_scenario(&self) -> Result<MeasurementScenario> {
        Ok(MeasurementScenario::new(self.o_a.clone(), self.o_b.clone())?)
    }
}

/// A probability vector: a flat list, or `{"entries": [...]}`. Entry
/// `(i, j, k, l)` sits at row `(i, j)` (Alice setting-major) and column
/// `(k, l)` of a row-major table.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ProbabilitiesJson {
    Flat(Vec<f64>),
    Object { entries: Vec<f64> },
}

impl ProbabilitiesJson {
    pub fn to_vector(&self, sc: MeasurementScenario) -> Result<ProbabilityVector> {
        let entries = match self {
            ProbabilitiesJson::Flat(v) | ProbabilitiesJson::Object { entries: v } => v.clone(),
        };
        Ok(ProbabilityVector::new(sc, entries)?)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct WeightJson {
    pub m: Vec<usize>,
    pub n: Vec<usize>,
    pub p: f64,
}

pub fn weights_json(model: &LhvModel) -> Vec<WeightJson> {
    model.iter().map(|(m, n, p)| WeightJson { m, n, p }).collect()
}

pub fn status_name(s: SdpStatus) -> &'static str {
    match s {
        SdpStatus::Optimal => "optimal",
        SdpStatus::PrimalInfeasibleCertified => "primal-infeasible-certified",
        SdpStatus::NumericalFailure => "numerical-failure",
        SdpStatus::IterationLimit => "iteration-limit",
    }
}

#[derive(Serialize)]
struct SdpDump {
    block_sizes: Vec<usize>,
    block_kinds: Vec<&'static str>,
    /// One matrix per block.
    f0: Vec<MatrixJson>,
    fs: Vec<Vec<MatrixJson>>,
    c: Vec<f64>,
    result: SdpResultDump,
}

#[derive(Serialize)]
struct SdpResultDump {
    status: &'static str,
    iterations: usize,
    primal_obj: f64,
    dual_obj: f64,
    gap: f64,
    primal_residual: f64,
    dual_residual: f64,
    message: Option<String>,
    x: Vec<f64>,
    z: Vec<MatrixJson>,
}

/// `(F₀, Fᵢ, c)` together with the solver output.
pub fn sdp_dump(p: &SdpStandardForm, r: &SdpResult) -> serde_json::Value {
    let blocks = p.blocks();
    let dense = |m: &lhvcert_core::sdp::BlockMatrix| -> Vec<MatrixJson> {
        m.blocks
            .iter()
            .zip(blocks)
            .map(|(b, spec)| MatrixJson::from_matrix(&b.to_dense(spec.size)))
            .collect()
    };
    let dump = SdpDump {
        block_sizes: blocks.iter().map(|b| b.size).collect(),
        block_kinds: blocks
            .iter()
            .map(|b| match b.kind {
                lhvcert_core::sdp::BlockKind::Dense => "dense",
                lhvcert_core::sdp::BlockKind::Diagonal => "diagonal",
            })
            .collect(),
        f0: dense(p.f0()),
        fs: p.fs().iter().map(dense).collect(),
        c: p.c().to_vec(),
        result: SdpResultDump {
            status: status_name(r.status),
            iterations: r.iterations,
            primal_obj: r.primal_obj,
            dual_obj: r.dual_obj,
            gap: r.gap,
            primal_residual: r.primal_residual,
            dual_residual: r.dual_residual,
            message: r.message.clone(),
            x: r.x.clone(),
            z: r.z.blocks.iter().map(|b| MatrixJson::from_matrix(&b.to_dense())).collect(),
        },
    };
    serde_json::to_value(dump).expect("serializable")
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

pub fn read_certificate(path: &Path) -> Result<Certificate> {
    read_json::<CertificateJson>(path)?.to_certificate()
}

/// Formats `x` with 12 significant digits, in plain notation where that
/// stays readable.
pub fn sig12(x: f64) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{x:.11e}");
    let (_, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-5..12).contains(&exp) {
        return sci;
    }
    let plain = format!("{:.*}", (11 - exp).max(0) as usize, x);
    if plain.contains('.') {
        plain.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        plain
    }
}

pub struct CsvRow {
    pub parameter: f64,
    pub optimum: f64,
    pub decision: &'static str,
}

pub fn write_csv(path: &Path, rows: &[CsvRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["parameter", "optimum", "decision"])?;
    for r in rows {
        w.write_record([sig12(r.parameter), sig12(r.optimum), r.decision.to_string()])?;
    }
    let bytes = w.into_inner().map_err(|e| anyhow!("{e}"))?;
    let mut f = fs::File::create(path).with_context(|| format!("writing {}", path.display()))?;
    f.write_all(&bytes)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sig12_formats() {
        assert_eq!(sig12(4.3364257812), "4.3364257812");
        assert_eq!(sig12(-0.5), "-0.5");
        assert_eq!(sig12(1.0 / 3.0), "0.333333333333");
        assert_eq!(sig12(1.000000000031), "1.00000000003");
        assert_eq!(sig12(2.5e-9), "2.50000000000e-9");
        assert_eq!(sig12(0.0), "0");
        assert_eq!(sig12(123456.0), "123456");
    }

    #[test]
    fn matrix_round_trip_accepts_bare_reals() {
        let m: MatrixJson = serde_json::from_str(r#"{"rows":1,"cols":2,"entries":[[1.5,-2],3]}"#).unwrap();
        let back = m.to_matrix().unwrap();
        assert_eq!(back[(0, 0)], C64::new(1.5, -2.0));
        assert_eq!(back[(0, 1)], C64::new(3.0, 0.0));
        let again = MatrixJson::from_matrix(&back).to_matrix().unwrap();
        assert_eq!(again, back);
    }

    #[test]
    fn probabilities_accept_both_layouts() {
        let sc = MeasurementScenario::uniform(1, 1, 2).unwrap();
        let flat: ProbabilitiesJson = serde_json::from_str("[0.25,0.25,0.25,0.25]").unwrap();
        let obj: ProbabilitiesJson = serde_json::from_str(r#"{"entries":[0.5,0,0,0.5]}"#).unwrap();
        assert!(flat.to_vector(sc.clone()).is_ok());
        assert_eq!(obj.to_vector(sc).unwrap().get(0, 1, 0, 1), 0.5);
    }
}
