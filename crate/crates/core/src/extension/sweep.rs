use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::decide::{decide_with, Decision, DecideOptions};
use super::program::ExtensionKind;
use super::shape::ExtensionShape;
use crate::error::{Error, Result};
use crate::states::BipartiteState;

#[derive(Clone, Debug, PartialEq)]
pub struct SweepProbe {
    pub parameter: f64,
    pub optimum: f64,
    pub decision: Decision,
    /// Side of the threshold the probe was assigned to. Indeterminate probes
    /// fall on the extendible side when the optimum is at most 1.
    pub extendible: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepReport {
    /// Probes in evaluation order.
    pub probes: Vec<SweepProbe>,
    /// Final interval whose endpoints were decided differently.
    pub bracket: Option<(f64, f64)>,
    /// Midpoint of the bracket.
    pub threshold: Option<f64>,
    /// Set when both endpoints land on the same side.
    pub non_monotone: Option<String>,
}

/// Bisects `family(t)` on `[lo, hi]` for the parameter where the existence
/// decision flips, down to an interval of width `resolution`.
pub fn sweep_threshold<F>(
    family: F,
    shape: &ExtensionShape,
    kind: ExtensionKind,
    lo: f64,
    hi: f64,
    resolution: f64,
    options: &DecideOptions,
) -> Result<SweepReport>
where
    F: Fn(f64) -> Result<BipartiteState>,
{
    if !(lo < hi) || !(resolution > 0.0) {
        return Err(Error::ParameterOutOfRange(format!(
            "sweep needs lo < hi and a positive resolution, got [{lo}, {hi}] at {resolution}"
        )));
    }
    let mut probes = Vec::new();
    let mut probe = |t: f64| -> Result<bool> {
        let verdict = decide_with(&family(t)?, shape, kind, options)?;
        let extendible = match verdict.decision {
            Decision::Exists => true,
            Decision::NotExists => false,
            Decision::Indeterminate => verdict.optimum <= 1.0,
        };
        probes.push(SweepProbe {
            parameter: t,
            optimum: verdict.optimum,
            decision: verdict.decision,
            extendible,
        });
        Ok(extendible)
    };

    let (mut a, mut b) = (lo, hi);
    let side_a = probe(a)?;
    let side_b = probe(b)?;
    if side_a == side_b {
        let side = if side_a { "extendible" } else { "not extendible" };
        return Ok(SweepReport {
            probes,
            bracket: None,
            threshold: None,
            non_monotone: Some(format!("both endpoints {lo} and {hi} are {side}")),
        });
    }
    while b - a > resolution {
        let mid = 0.5 * (a + b);
        if probe(mid)? == side_a {
            a = mid;
        } else {
            b = mid;
        }
    }
    Ok(SweepReport {
        probes,
        bracket: Some((a, b)),
        threshold: Some(0.5 * (a + b)),
        non_monotone: None,
    })
}
