//! Margins, inner optimization, thresholds and region scans.

use std::fmt;

mod optimize;
mod presets;
mod scenario;
mod threshold;

pub use optimize::{halton, optimize_free_parameters, optimize_with, OptimizeResult, OptimizerOptions};
pub use presets::{default_parties, preset, Preset, PRESET_NAMES};
pub use scenario::{
    violation_margin, Criterion, Param, ParamValue, Params, Relabel, ScenarioSpec, StateModel, XScheme,
    BELL_MARGIN_SLACK, THETA_CLAMP,
};
pub use threshold::{
    critical_efficiency, critical_efficiency_with, format_significant, region_boundary, region_boundary_with,
    CurvePoint, CurveStatus, Threshold, ThresholdCurve, BISECTION_TOL,
};

/// How a bracket failed to contain a sign change.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Bracketing {
    /// Violation at both ends.
    Always,
    /// No violation at either end.
    Never,
}

impl fmt::Display for Bracketing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Always => "always",
            Self::Never => "never",
        })
    }
}
