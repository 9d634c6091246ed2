use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64 as C64;
#[allow(unused_imports)]
use num_traits::Float;

use super::block::{BlockDiag, BlockValue};
use super::problem::SdpStandardForm;
use super::schur::SchurPlan;
use crate::error::{Error, Result};
use crate::tensor::{cholesky, hermitian_eig, hermitian_eigenvalues, ComplexMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SdpStatus {
    Optimal,
    /// A dual ray `Z ⪰ 0`, `Tr FᵢZ ≈ 0`, `Tr F₀Z < 0` was found.
    PrimalInfeasibleCertified,
    NumericalFailure,
    IterationLimit,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolverSettings {
    pub tol: f64,
    pub max_iterations: usize,
    pub step_fraction: f64,
    pub regularization: f64,
    pub max_regularization: f64,
    pub ray_tol: f64,
}

impl Default for SolverSettings {
    fn default() -> Self {
        Self {
            tol: 1e-8,
            max_iterations: 200,
            step_fraction: 0.98,
            regularization: 1e-10,
            max_regularization: 1e-6,
            ray_tol: 1e-7,
        }
    }
}

/// Per-iteration diagnostics in the `minimize cᵀx` convention.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IterationRecord {
    pub iteration: usize,
    pub primal_obj: f64,
    pub dual_obj: f64,
    pub primal_residual: f64,
    pub dual_residual: f64,
    pub mu: f64,
    pub step_primal: f64,
    pub step_dual: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SdpResult {
    pub x: Vec<f64>,
    pub z: BlockDiag,
    /// `cᵀx`.
    pub primal_obj: f64,
    /// `−Tr F₀Z`.
    pub dual_obj: f64,
    /// `|cᵀx + Tr F₀Z|`.
    pub gap: f64,
    pub status: SdpStatus,
    pub iterations: usize,
    /// `max |Tr FᵢZ − cᵢ| / (1 + |cᵢ|)`.
    pub dual_residual: f64,
    /// `max(0, −λ_min(F(x)))`.
    pub primal_residual: f64,
    pub log: Vec<IterationRecord>,
    /// Why the iteration stopped early, if it did.
    pub message: Option<alloc::string::String>,
}

impl SdpResult {
    pub fn z_dense(&self) -> ComplexMatrix {
        self.z.to_dense()
    }

    pub fn is_optimal(&self) -> bool {
        self.status == SdpStatus::Optimal
    }
}

/// Solves `p` to relative accuracy `tol ∈ [1e-10, 1e-4]`.
pub fn solve(p: &SdpStandardForm, tol: f64) -> Result<SdpResult> {
    solve_with(
        p,
        &SolverSettings {
            tol,
            ..SolverSettings::default()
        },
    )
}

// Internally the pair is handled in conic form
//
//   min ⟨C,X⟩  s.t. ⟨Aᵢ,X⟩ = bᵢ, X ⪰ 0       max bᵀy  s.t. Σ yᵢAᵢ + S = C, S ⪰ 0
//
// with C = F₀, Aᵢ = Fᵢ, b = c. The original variables are x = −y and Z = X.
pub fn solve_with(p: &SdpStandardForm, settings: &SolverSettings) -> Result<SdpResult> {
    if !(1e-10..=1e-4).contains(&settings.tol) {
        return Err(Error::ParameterOutOfRange(alloc::format!(
            "tolerance {} outside [1e-10, 1e-4]",
            settings.tol
        )));
    }
    Solver::new(p, settings).run()
}

struct Scaling {
    blocks: Vec<BlockScaling>,
}

enum BlockScaling {
    Dense {
        g: ComplexMatrix,
        gh: ComplexMatrix,
        w: ComplexMatrix,
        d: Vec<f64>,
    },
    Diagonal {
        /// `√(x/s)`, so that `W S W = X`.
        w: Vec<f64>,
        /// `x/s`.
        w2: Vec<f64>,
        d: Vec<f64>,
    },
}

impl BlockScaling {
    fn d(&self) -> &[f64] {
        match self {
            Self::Dense { d, .. } | Self::Diagonal { d, .. } => d,
        }
    }

    /// `Gᴴ V G`.
    fn to_scaled(&self, v: &BlockValue) -> BlockValue {
        match (self, v) {
            (Self::Dense { g, gh, .. }, BlockValue::Dense(m)) => {
                let mut out = gh.matmul(&m.matmul(g));
                out.make_hermitian();
                BlockValue::Dense(out)
            }
            (Self::Diagonal { w, .. }, BlockValue::Diagonal(x)) => {
                BlockValue::Diagonal(x.iter().zip(w).map(|(a, b)| a * b).collect())
            }
            _ => unreachable!(),
        }
    }

    /// `G V Gᴴ`.
    fn from_scaled(&self, v: &BlockValue) -> BlockValue {
        match (self, v) {
            (Self::Dense { g, gh, .. }, BlockValue::Dense(m)) => {
                let mut out = g.matmul(&m.matmul(gh));
                out.make_hermitian();
                BlockValue::Dense(out)
            }
            (Self::Diagonal { w, .. }, BlockValue::Diagonal(x)) => {
                BlockValue::Diagonal(x.iter().zip(w).map(|(a, b)| a * b).collect())
            }
            _ => unreachable!(),
        }
    }
}

impl Scaling {
    fn to_scaled(&self, v: &BlockDiag) -> BlockDiag {
        BlockDiag {
            blocks: self.blocks.iter().zip(&v.blocks).map(|(s, b)| s.to_scaled(b)).collect(),
        }
    }

    fn from_scaled(&self, v: &BlockDiag) -> BlockDiag {
        BlockDiag {
            blocks: self.blocks.iter().zip(&v.blocks).map(|(s, b)| s.from_scaled(b)).collect(),
        }
    }

    /// Scaled `−D`.
    fn minus_d(&self) -> BlockDiag {
        BlockDiag {
            blocks: self
                .blocks
                .iter()
                .map(|s| match s {
                    BlockScaling::Dense { d, .. } => {
                        BlockValue::Dense(ComplexMatrix::from_diagonal(&d.iter().map(|x| -x).collect::<Vec<_>>()))
                    }
                    BlockScaling::Diagonal { d, .. } => BlockValue::Diagonal(d.iter().map(|x| -x).collect()),
                })
                .collect(),
        }
    }

    /// Solves the scaled complementarity equation `D∘U = σμI − D² − (ΔX̃ΔS̃ + ΔS̃ΔX̃)/2`.
    fn corrector_rhs(&self, sigma_mu: f64, dx: &BlockDiag, ds: &BlockDiag) -> BlockDiag {
        let blocks = self
            .blocks
            .iter()
            .zip(dx.blocks.iter().zip(&ds.blocks))
            .map(|(s, (x, z))| match (s, x, z) {
                (BlockScaling::Dense { d, .. }, BlockValue::Dense(x), BlockValue::Dense(z)) => {
                    let xz = x.matmul(z);
                    let n = d.len();
                    let mut u = ComplexMatrix::zeros(n, n);
                    for a in 0..n {
                        for b in 0..n {
                            let sym = (xz[(a, b)] + xz[(b, a)].conj()) * 0.5;
                            let mut t = -sym;
                            if a == b {
                                t += C64::new(sigma_mu - d[a] * d[a], 0.0);
                            }
                            u[(a, b)] = t * (2.0 / (d[a] + d[b]));
                        }
                    }
                    u.make_hermitian();
                    BlockValue::Dense(u)
                }
                (BlockScaling::Diagonal { d, .. }, BlockValue::Diagonal(x), BlockValue::Diagonal(z)) => {
                    BlockValue::Diagonal(
                        d.iter()
                            .zip(x.iter().zip(z))
                            .map(|(&di, (&xi, &zi))| (sigma_mu - di * di - xi * zi) / di)
                            .collect(),
                    )
                }
                _ => unreachable!(),
            })
            .collect();
        BlockDiag { blocks }
    }

    /// Largest `α` with `D + αV ⪰ 0`, capped at `cap`.
    fn max_step(&self, v: &BlockDiag, cap: f64) -> Result<f64> {
        let mut lambda_min = f64::INFINITY;
        for (s, b) in self.blocks.iter().zip(&v.blocks) {
            let d = s.d();
            let l = match b {
                BlockValue::Dense(m) => {
                    let n = d.len();
                    let inv: Vec<f64> = d.iter().map(|x| 1.0 / x.sqrt()).collect();
                    let mut t = ComplexMatrix::from_fn(n, n, |r, c| m[(r, c)] * (inv[r] * inv[c]));
                    t.make_hermitian();
                    hermitian_eigenvalues(&t)?[0]
                }
                BlockValue::Diagonal(x) => x
                    .iter()
                    .zip(d)
                    .map(|(a, b)| a / b)
                    .fold(f64::INFINITY, f64::min),
            };
            lambda_min = lambda_min.min(l);
        }
        Ok(if lambda_min >= 0.0 { cap } else { (-1.0 / lambda_min).min(cap) })
    }
}

/// `X = L Lᴴ` with a Cholesky factor, or an eigenvector factor when Cholesky breaks down.
fn factor(x: &ComplexMatrix) -> Result<ComplexMatrix> {
    if let Ok(l) = cholesky(x) {
        return Ok(l);
    }
    let eig = hermitian_eig(x)?;
    let floor = 1e-300_f64.max(eig.max().abs() * 1e-18);
    let n = x.rows();
    let roots: Vec<f64> = eig.values.iter().map(|&v| v.max(floor).sqrt()).collect();
    Ok(ComplexMatrix::from_fn(n, n, |r, c| eig.vectors[(r, c)] * roots[c]))
}

fn nt_scaling(x: &BlockDiag, s: &BlockDiag) -> Result<Scaling> {
    let mut blocks = Vec::with_capacity(x.blocks.len());
    for (xb, sb) in x.blocks.iter().zip(&s.blocks) {
        blocks.push(match (xb, sb) {
            (BlockValue::Dense(xm), BlockValue::Dense(sm)) => {
                let l = factor(xm)?;
                let lh = l.adjoint();
                let mut b = lh.matmul(&sm.matmul(&l));
                b.make_hermitian();
                let eig = hermitian_eig(&b)?;
                let floor = eig.max().abs() * 1e-30 + 1e-300;
                let d: Vec<f64> = eig.values.iter().map(|&v| v.max(floor).sqrt()).collect();
                let n = d.len();
                let lv = l.matmul(&eig.vectors);
                let g = ComplexMatrix::from_fn(n, n, |r, c| lv[(r, c)] / d[c].sqrt());
                let gh = g.adjoint();
                let mut w = g.matmul(&gh);
                w.make_hermitian();
                BlockScaling::Dense { g, gh, w, d }
            }
            (BlockValue::Diagonal(xv), BlockValue::Diagonal(sv)) => BlockScaling::Diagonal {
                w: xv.iter().zip(sv).map(|(a, b)| (a / b).sqrt()).collect(),
                w2: xv.iter().zip(sv).map(|(a, b)| a / b).collect(),
                d: xv.iter().zip(sv).map(|(a, b)| (a * b).sqrt()).collect(),
            },
            _ => unreachable!(),
        });
    }
    Ok(Scaling { blocks })
}

struct Direction {
    dx: BlockDiag,
    ds: BlockDiag,
    dy: Vec<f64>,
    dx_scaled: BlockDiag,
    ds_scaled: BlockDiag,
}

struct Solver<'a> {
    p: &'a SdpStandardForm,
    settings: &'a SolverSettings,
    plan: SchurPlan,
    b: Vec<f64>,
    norm_b: f64,
    norm_c: f64,
}

impl<'a> Solver<'a> {
    fn new(p: &'a SdpStandardForm, settings: &'a SolverSettings) -> Self {
        let b = p.c().to_vec();
        let norm_b = b.iter().map(|v| v * v).sum::<f64>().sqrt();
        let norm_c = p.f0().frobenius_norm();
        Self {
            plan: SchurPlan::new(p),
            p,
            settings,
            b,
            norm_b,
            norm_c,
        }
    }

    fn a_op(&self, x: &BlockDiag) -> Vec<f64> {
        self.p.fs().iter().map(|f| f.trace_with(x)).collect()
    }

    fn a_adjoint(&self, y: &[f64]) -> BlockDiag {
        let mut out = BlockDiag::zeros(self.p.blocks());
        for (f, &yi) in self.p.fs().iter().zip(y) {
            if yi != 0.0 {
                f.add_to(yi, &mut out);
            }
        }
        out
    }

    fn c_value(&self) -> BlockDiag {
        let mut out = BlockDiag::zeros(self.p.blocks());
        self.p.f0().add_to(1.0, &mut out);
        out
    }

    fn initial_point(&self) -> (BlockDiag, Vec<f64>, BlockDiag) {
        let n = self.p.dim() as f64;
        let sqrt_n = n.sqrt();
        let mut xi = 10.0_f64.max(sqrt_n);
        let mut eta = 10.0_f64.max(sqrt_n);
        eta = eta.max(self.norm_c);
        for (f, &bi) in self.p.fs().iter().zip(&self.b) {
            let norm_f = f.frobenius_norm();
            xi = xi.max(sqrt_n * (1.0 + bi.abs()) / (1.0 + norm_f));
            eta = eta.max((1.0 + norm_f) / sqrt_n);
        }
        (
            BlockDiag::scaled_identity(self.p.blocks(), xi),
            vec![0.0; self.p.num_vars()],
            BlockDiag::scaled_identity(self.p.blocks(), eta),
        )
    }

    fn solve_schur(&self, m: &[f64], rhs: &[f64]) -> Result<Vec<f64>> {
        let k = rhs.len();
        if k == 0 {
            return Ok(Vec::new());
        }
        let scale = (0..k).map(|i| m[i * k + i].abs()).fold(0.0, f64::max).max(1e-300);
        let mut reg = self.settings.regularization;
        loop {
            let mut a = m.to_vec();
            for i in 0..k {
                a[i * k + i] += reg * scale;
            }
            if real_cholesky(&mut a, k).is_some() {
                let mut x = cholesky_solve(&a, k, rhs);
                // refinement against the unregularized system
                for _ in 0..3 {
                    let r: Vec<f64> = (0..k)
                        .map(|i| rhs[i] - m[i * k..(i + 1) * k].iter().zip(&x).map(|(p, q)| p * q).sum::<f64>())
                        .collect();
                    let dx = cholesky_solve(&a, k, &r);
                    x.iter_mut().zip(&dx).for_each(|(p, q)| *p += q);
                }
                if x.iter().any(|v| !v.is_finite()) {
                    return Err(Error::NoConvergence);
                }
                return Ok(x);
            }
            if reg >= self.settings.max_regularization {
                return Err(Error::NoConvergence);
            }
            reg = (reg * 10.0).min(self.settings.max_regularization);
        }
    }

    fn direction(
        &self,
        scaling: &Scaling,
        schur: &[f64],
        rp: &[f64],
        rd: &BlockDiag,
        rd_scaled: &BlockDiag,
        r_scaled: BlockDiag,
    ) -> Result<Direction> {
        let mut diff = r_scaled.clone();
        diff.axpy(-1.0, rd_scaled);
        let v = scaling.from_scaled(&diff);
        let av = self.a_op(&v);
        let rhs: Vec<f64> = rp.iter().zip(&av).map(|(a, b)| a - b).collect();
        let mut dy = self.solve_schur(schur, &rhs)?;
        let target = 1e-2 * self.settings.tol * (1.0 + self.norm_b);
        let mut refinements = 0;
        let mut last_err = f64::INFINITY;
        loop {
            let mut ds = rd.clone();
            ds.axpy(-1.0, &self.a_adjoint(&dy));
            let ds_scaled = scaling.to_scaled(&ds);
            let mut dx_scaled = r_scaled.clone();
            dx_scaled.axpy(-1.0, &ds_scaled);
            let dx = scaling.from_scaled(&dx_scaled);
            // A(ΔX) = r_p up to rounding in M; correct Δy against the operator actually applied
            let err: Vec<f64> = rp.iter().zip(self.a_op(&dx)).map(|(a, b)| a - b).collect();
            let err_norm = norm(&err);
            if refinements == 20 || err_norm <= target || err_norm > 0.5 * last_err {
                return Ok(Direction {
                    dx,
                    ds,
                    dy,
                    dx_scaled,
                    ds_scaled,
                });
            }
            last_err = err_norm;
            let delta = self.solve_schur(schur, &err)?;
            dy.iter_mut().zip(&delta).for_each(|(a, b)| *a += b);
            refinements += 1;
        }
    }

    fn run(&self) -> Result<SdpResult> {
        let n = self.p.dim() as f64;
        let tol = self.settings.tol;
        let c_mat = self.c_value();
        let (mut x, mut y, mut s) = self.initial_point();
        let mut log = Vec::new();
        let mut status = SdpStatus::IterationLimit;
        let mut stalls = 0;
        let mut iterations = 0;
        let mut best: Option<(f64, BlockDiag, Vec<f64>)> = None;
        let mut message = None;

        for iter in 0..=self.settings.max_iterations {
            let ax = self.a_op(&x);
            let rp: Vec<f64> = self.b.iter().zip(&ax).map(|(a, b)| a - b).collect();
            let mut rd = c_mat.clone();
            rd.axpy(-1.0, &s);
            rd.axpy(-1.0, &self.a_adjoint(&y));
            let pobj = c_mat.inner(&x);
            let dobj: f64 = self.b.iter().zip(&y).map(|(a, b)| a * b).sum();
            let mu = x.inner(&s) / n;
            let rel_p = norm(&rp) / (1.0 + self.norm_b);
            let rel_d = rd.frobenius_norm() / (1.0 + self.norm_c);
            let rel_gap = (pobj - dobj).abs().max(mu * n) / (1.0 + pobj.abs() + dobj.abs());
            log.push(IterationRecord {
                iteration: iter,
                primal_obj: -dobj,
                dual_obj: -pobj,
                primal_residual: rel_d,
                dual_residual: rel_p,
                mu,
                step_primal: log.last().map_or(0.0, |r: &IterationRecord| r.step_primal),
                step_dual: log.last().map_or(0.0, |r: &IterationRecord| r.step_dual),
            });
            iterations = iter;

            if rel_p <= tol && rel_d <= tol && rel_gap <= tol {
                status = SdpStatus::Optimal;
                best = None;
                break;
            }
            let score = rel_p.max(rel_d).max(rel_gap);
            match &best {
                Some((b, _, _)) if *b <= score => {
                    if *b < 1e-6 && score > 1e2 * b.max(tol) {
                        message = Some(alloc::format!("iterates diverged from relative accuracy {b:e}"));
                        status = SdpStatus::NumericalFailure;
                        break;
                    }
                }
                _ => best = Some((score, x.clone(), y.clone())),
            }
            if pobj < 0.0 && norm(&ax) <= self.settings.ray_tol * pobj.abs() && rel_d > tol {
                status = SdpStatus::PrimalInfeasibleCertified;
                break;
            }
            if iter == self.settings.max_iterations {
                break;
            }

            let scaling = match nt_scaling(&x, &s) {
                Ok(sc) => sc,
                Err(e) => {
                    message = Some(alloc::format!("scaling failed: {e}"));
                    status = SdpStatus::NumericalFailure;
                    break;
                }
            };
            let schur = self.plan.assemble(&scaling_weights(&scaling));
            let rd_scaled = scaling.to_scaled(&rd);

            let pred = match self.direction(&scaling, &schur, &rp, &rd, &rd_scaled, scaling.minus_d()) {
                Ok(d) => d,
                Err(e) => {
                    message = Some(alloc::format!("predictor failed: {e}"));
                    status = SdpStatus::NumericalFailure;
                    break;
                }
            };
            let ap = scaling.max_step(&pred.dx_scaled, 1.0)?;
            let ad = scaling.max_step(&pred.ds_scaled, 1.0)?;
            let mut xa = x.clone();
            xa.axpy(ap, &pred.dx);
            let mut sa = s.clone();
            sa.axpy(ad, &pred.ds);
            let mu_aff = xa.inner(&sa) / n;
            let sigma = (mu_aff / mu).max(0.0).powi(3).min(1.0);

            let r_corr = scaling.corrector_rhs(sigma * mu, &pred.dx_scaled, &pred.ds_scaled);
            let dir = match self.direction(&scaling, &schur, &rp, &rd, &rd_scaled, r_corr) {
                Ok(d) => d,
                Err(e) => {
                    message = Some(alloc::format!("corrector failed: {e}"));
                    status = SdpStatus::NumericalFailure;
                    break;
                }
            };
            let frac = self.settings.step_fraction;
            let ap = (frac * scaling.max_step(&dir.dx_scaled, f64::INFINITY)?).min(1.0);
            let ad = (frac * scaling.max_step(&dir.ds_scaled, f64::INFINITY)?).min(1.0);
            x.axpy(ap, &dir.dx);
            s.axpy(ad, &dir.ds);
            for (yi, di) in y.iter_mut().zip(&dir.dy) {
                *yi += ad * di;
            }
            x.make_hermitian();
            s.make_hermitian();
            if let Some(rec) = log.last_mut() {
                rec.step_primal = ap;
                rec.step_dual = ad;
            }
            if ap.max(ad) < 1e-10 {
                stalls += 1;
                if stalls >= 5 {
                    message = Some("step lengths collapsed".into());
                    status = SdpStatus::NumericalFailure;
                    break;
                }
            } else {
                stalls = 0;
            }
        }

        if let Some((_, bx, by)) = best {
            x = bx;
            y = by;
        }
        let mut result = self.finish(x, y, status, iterations, log);
        result.message = message;
        Ok(result)
    }

    fn finish(&self, z: BlockDiag, y: Vec<f64>, status: SdpStatus, iterations: usize, log: Vec<IterationRecord>) -> SdpResult {
        let x: Vec<f64> = y.iter().map(|v| -v).collect();
        let primal_obj: f64 = self.p.c().iter().zip(&x).map(|(a, b)| a * b).sum();
        let dual_obj = -self.p.f0().trace_with(&z);
        let dual_residual = self
            .a_op(&z)
            .iter()
            .zip(self.p.c())
            .map(|(a, b)| (a - b).abs() / (1.0 + b.abs()))
            .fold(0.0, f64::max);
        let primal_residual = self
            .p
            .evaluate(&x)
            .min_eigenvalue()
            .map(|v| (-v).max(0.0))
            .unwrap_or(f64::INFINITY);
        let gap = (primal_obj - dual_obj).abs();
        let mut status = status;
        if matches!(status, SdpStatus::NumericalFailure | SdpStatus::IterationLimit)
            && dual_residual <= 1e-8
            && primal_residual <= 1e-8
            && gap <= 1e-7 * (1.0 + primal_obj.abs())
            && z.min_eigenvalue().map_or(false, |v| v >= -1e-8)
        {
            // progress stalled short of `tol` but the optimality certificate holds
            status = SdpStatus::Optimal;
        }
        SdpResult {
            x,
            z,
            primal_obj,
            dual_obj,
            gap,
            status,
            iterations,
            dual_residual,
            primal_residual,
            log,
            message: None,
        }
    }
}

fn scaling_weights(s: &Scaling) -> Vec<super::schur::BlockWeight<'_>> {
    s.blocks
        .iter()
        .map(|b| match b {
            BlockScaling::Dense { w, .. } => super::schur::BlockWeight::Dense(w),
            BlockScaling::Diagonal { w2, .. } => super::schur::BlockWeight::Diagonal(w2),
        })
        .collect()
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// In-place lower Cholesky of a row-major `k×k` matrix.
fn real_cholesky(a: &mut [f64], k: usize) -> Option<()> {
    for j in 0..k {
        let mut d = a[j * k + j];
        for p in 0..j {
            d -= a[j * k + p] * a[j * k + p];
        }
        if !(d > 0.0) || !d.is_finite() {
            return None;
        }
        let djj = d.sqrt();
        a[j * k + j] = djj;
        for i in (j + 1)..k {
            let mut acc = a[i * k + j];
            for p in 0..j {
                acc -= a[i * k + p] * a[j * k + p];
            }
            a[i * k + j] = acc / djj;
        }
    }
    Some(())
}

fn cholesky_solve(l: &[f64], k: usize, rhs: &[f64]) -> Vec<f64> {
    let mut z = rhs.to_vec();
    for i in 0..k {
        let mut acc = z[i];
        for p in 0..i {
            acc -= l[i * k + p] * z[p];
        }
        z[i] = acc / l[i * k + i];
    }
    for i in (0..k).rev() {
        let mut acc = z[i];
        for p in (i + 1)..k {
            acc -= l[p * k + i] * z[p];
        }
        z[i] = acc / l[i * k + i];
    }
    z
}
