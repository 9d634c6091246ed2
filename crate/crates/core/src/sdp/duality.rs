use alloc::string::String;
use alloc::vec::Vec;
use alloc::format;

use super::problem::SdpStandardForm;
use super::solver::SdpResult;

/// Independently recomputed optimality residuals of a solver result.
#[derive(Clone, Debug, PartialEq)]
pub struct DualityReport {
    /// `λ_min(F(x))`.
    pub primal_min_eigenvalue: f64,
    /// `λ_min(Z)`.
    pub dual_min_eigenvalue: f64,
    /// `max |Tr FᵢZ − cᵢ| / (1 + |cᵢ|)`.
    pub dual_equality_residual: f64,
    /// `cᵀx + Tr F₀Z`, equal to `Tr F(x)Z` at feasible points.
    pub gap: f64,
    pub violations: Vec<String>,
}

impl DualityReport {
    pub fn is_certified(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn check_duality(p: &SdpStandardForm, r: &SdpResult) -> DualityReport {
    let mut violations = Vec::new();
    if r.x.len() != p.num_vars() || r.z.dim() != p.dim() {
        violations.push(format!("result shape does not match the problem"));
        return DualityReport {
            primal_min_eigenvalue: f64::NAN,
            dual_min_eigenvalue: f64::NAN,
            dual_equality_residual: f64::NAN,
            gap: f64::NAN,
            violations,
        };
    }
    let primal_min_eigenvalue = p.evaluate(&r.x).min_eigenvalue().unwrap_or(f64::NAN);
    let dual_min_eigenvalue = r.z.min_eigenvalue().unwrap_or(f64::NAN);
    let dual_equality_residual = p
        .fs()
        .iter()
        .zip(p.c())
        .map(|(f, &ci)| (f.trace_with(&r.z) - ci).abs() / (1.0 + ci.abs()))
        .fold(0.0, f64::max);
    let cx: f64 = p.c().iter().zip(&r.x).map(|(a, b)| a * b).sum();
    let gap = cx + p.f0().trace_with(&r.z);

    if !(primal_min_eigenvalue >= -1e-8) {
        violations.push(format!("F(x) has eigenvalue {primal_min_eigenvalue:e}"));
    }
    if !(dual_min_eigenvalue >= -1e-8) {
        violations.push(format!("Z has eigenvalue {dual_min_eigenvalue:e}"));
    }
    if !(dual_equality_residual <= 1e-8) {
        violations.push(format!("dual equality residual {dual_equality_residual:e}"));
    }
    if !(gap.abs() <= 1e-7 * (1.0 + cx.abs())) {
        violations.push(format!("duality gap {gap:e}"));
    }
    DualityReport {
        primal_min_eigenvalue,
        dual_min_eigenvalue,
        dual_equality_residual,
        gap,
        violations,
    }
}
