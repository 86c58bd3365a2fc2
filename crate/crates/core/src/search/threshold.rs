//! Critical efficiencies by bisection and boundary curves built from them.

use std::fmt::Write as _;

use crate::parallel::par_map;
use crate::search::optimize::{optimize_with, OptimizeResult, OptimizerOptions};
use crate::search::scenario::{Param, ParamValue, Params, ScenarioSpec};
use crate::search::Bracketing;
use crate::{Error, Result};

/// Absolute tolerance of the bisection on the target parameter.
pub const BISECTION_TOL: f64 = 1e-4;

#[derive(Debug, Clone, PartialEq)]
pub struct Threshold {
    /// Zero crossing of the optimized margin.
    pub value: f64,
    /// Optimizer output at the violating end of the final bracket.
    pub at_violation: OptimizeResult,
    /// Final bracket `(non-violating end, violating end)`.
    pub bracket: (f64, f64),
}

/// Largest margin over the free parameters at `target = value`, stopping
/// early once a violation is certain.
fn signed_margin(
    spec: &ScenarioSpec,
    target: Param,
    value: f64,
    warm: Option<&Params>,
    opts: &OptimizerOptions,
) -> Result<OptimizeResult> {
    optimize_with(spec, &[(target, value)], warm, Some(0.0), opts)
}

/// Zero crossing of the optimized margin in `target` over `[lo, hi]`.
pub fn critical_efficiency(
    spec: &ScenarioSpec,
    target: Param,
    bracket: (f64, f64),
) -> Result<Threshold> {
    critical_efficiency_with(spec, target, bracket, &OptimizerOptions::default())
}

pub fn critical_efficiency_with(
    spec: &ScenarioSpec,
    target: Param,
    bracket: (f64, f64),
    opts: &OptimizerOptions,
) -> Result<Threshold> {
    let (lo, hi) = bracket;
    if lo >= hi || !lo.is_finite() || !hi.is_finite() {
        return Err(Error::Invalid(format!("bad bracket [{lo}, {hi}]")));
    }
    // the target is pinned by the bisection, not optimized
    let spec = &spec.clone().fix(target, lo);
    spec.validate()?;
    let spec_hi = spec.clone().fix(target, hi);
    spec_hi.validate()?;

    let m_lo = signed_margin(spec, target, lo, None, opts)?;
    let m_hi = signed_margin(spec, target, hi, None, opts)?;
    let (v_lo, v_hi) = (m_lo.margin > 0.0, m_hi.margin > 0.0);
    if v_lo == v_hi {
        return Err(Error::NoSignChange(if v_lo {
            Bracketing::Always
        } else {
            Bracketing::Never
        }));
    }
    // (local end, violating end)
    let (mut a, mut b, mut best) = if v_hi { (lo, hi, m_hi) } else { (hi, lo, m_lo) };
    while (b - a).abs() > BISECTION_TOL {
        let mid = 0.5 * (a + b);
        let m = signed_margin(spec, target, mid, Some(&best.params), opts)?;
        if m.margin > 0.0 {
            b = mid;
            best = m;
        } else {
            a = mid;
        }
    }
    // report the full optimum at the violating end
    let at_violation = optimize_with(spec, &[(target, b)], Some(&best.params), None, opts)?;
    Ok(Threshold {
        value: 0.5 * (a + b),
        at_violation,
        bracket: (a, b),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurveStatus {
    Found,
    /// Violated over the whole bracket.
    Always,
    /// Never violated in the bracket.
    Never,
}

impl CurveStatus {
    pub const fn as_str(self) -> &'static str {
        match self {
            CurveStatus::Found => "found",
            CurveStatus::Always => "always",
            CurveStatus::Never => "never",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvePoint {
    pub x: f64,
    pub y: Option<f64>,
    pub status: CurveStatus,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdCurve {
    pub x_axis: Param,
    pub y_axis: Param,
    pub scenario: ScenarioSpec,
    pub points: Vec<CurvePoint>,
}

/// `v` rounded to `digits` significant digits, printed in shortest form.
pub fn format_significant(v: f64, digits: usize) -> String {
    if !v.is_finite() {
        return "nan".into();
    }
    let rounded: f64 = format!("{:.*e}", digits.saturating_sub(1), v)
        .parse()
        .expect("formatted float parses");
    format!("{rounded}")
}

impl ThresholdCurve {
    /// `x,y,status` with values at 10 significant digits and `nan` where no
    /// crossing exists.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("x,y,status\n");
        for p in &self.points {
            let y = p.y.map_or_else(|| "nan".to_string(), |y| format_significant(y, 10));
            let _ = writeln!(out, "{},{y},{}", format_significant(p.x, 10), p.status.as_str());
        }
        out
    }
}

fn axis_bounds(spec: &ScenarioSpec, p: Param) -> Result<(f64, f64)> {
    match spec.param(p) {
        ParamValue::Free { lo, hi } => Ok((lo, hi)),
        ParamValue::Fixed(_) => Err(Error::Invalid(format!("axis {p} must be declared free"))),
    }
}

/// Critical `y_axis` value at `grid` evenly spaced `x_axis` samples; both
/// axes take their ranges from the free bounds in `spec`.
pub fn region_boundary(spec: &ScenarioSpec, x_axis: Param, y_axis: Param, grid: usize) -> Result<ThresholdCurve> {
    region_boundary_with(spec, x_axis, y_axis, grid, &OptimizerOptions::default())
}

pub fn region_boundary_with(
    spec: &ScenarioSpec,
    x_axis: Param,
    y_axis: Param,
    grid: usize,
    opts: &OptimizerOptions,
) -> Result<ThresholdCurve> {
    if grid < 2 {
        return Err(Error::Invalid("grid needs at least 2 samples".into()));
    }
    if x_axis == y_axis {
        return Err(Error::Invalid("axes must differ".into()));
    }
    let (x_lo, x_hi) = axis_bounds(spec, x_axis)?;
    let y_bracket = axis_bounds(spec, y_axis)?;
    for (p, (lo, hi)) in [(x_axis, (x_lo, x_hi)), (y_axis, y_bracket)] {
        if lo < 0.0 || hi > 1.0 || lo >= hi {
            return Err(Error::Invalid(format!("axis {p} must span a range inside [0, 1]")));
        }
    }
    let xs: Vec<f64> = (0..grid)
        .map(|i| x_lo + (x_hi - x_lo) * i as f64 / (grid - 1) as f64)
        .collect();
    let points = par_map(&xs, |&x| -> Result<CurvePoint> {
        let at_x = spec.clone().fix(x_axis, x);
        match critical_efficiency_with(&at_x, y_axis, y_bracket, opts) {
            Ok(t) => Ok(CurvePoint {
                x,
                y: Some(t.value),
                status: CurveStatus::Found,
            }),
            Err(Error::NoSignChange(b)) => Ok(CurvePoint {
                x,
                y: None,
                status: match b {
                    Bracketing::Always => CurveStatus::Always,
                    Bracketing::Never => CurveStatus::Never,
                },
            }),
            Err(e) => Err(e),
        }
    });
    Ok(ThresholdCurve {
        x_axis,
        y_axis,
        scenario: spec.clone(),
        points: points.into_iter().collect::<Result<_>>()?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::search::scenario::{violation_margin, Criterion, StateModel, XScheme};

    fn ad(n: usize) -> ScenarioSpec {
        ScenarioSpec::new(n, StateModel::W, XScheme::AmplitudeDamping, Criterion::Cabello)
    }

    #[test]
    fn ad_threshold_n3() {
        let t = critical_efficiency(&ad(3), Param::EtaZ, (0.0, 1.0)).unwrap();
        assert!((t.value - 0.75).abs() < 1e-3, "{}", t.value);
        let (a, b) = t.bracket;
        assert!(b > 0.75 - 1e-3 && a < 0.75 + 1e-3);
        let margin = |v: f64| {
            let s = ad(3).fix(Param::EtaZ, v);
            violation_margin(&s, &s.base_params()).unwrap()
        };
        assert!(margin(t.value - 1e-3) < 0.0 && margin(t.value + 1e-3) > 0.0);
    }

    #[test]
    fn no_sign_change_is_reported() {
        let err = critical_efficiency(&ad(3), Param::EtaZ, (0.8, 1.0)).unwrap_err();
        assert_eq!(err, Error::NoSignChange(Bracketing::Always));
        let err = critical_efficiency(&ad(3), Param::EtaZ, (0.1, 0.5)).unwrap_err();
        assert_eq!(err, Error::NoSignChange(Bracketing::Never));
        assert!(critical_efficiency(&ad(3), Param::EtaZ, (0.5, 0.5)).is_err());
    }

    #[test]
    fn significant_digit_formatting() {
        assert_eq!(format_significant(0.123456789012345, 10), "0.123456789");
        assert_eq!(format_significant(1.0, 10), "1");
        assert_eq!(format_significant(f64::NAN, 10), "nan");
        assert_eq!(format_significant(2.0 / 3.0, 10), "0.6666666667");
    }

    #[test]
    fn csv_layout() {
        let spec = ScenarioSpec::new(3, StateModel::W, XScheme::Symmetric, Criterion::Cabello)
            .free(Param::EtaZ, 0.5, 1.0)
            .free(Param::EtaX, 0.5, 1.0);
        let curve = region_boundary(&spec, Param::EtaZ, Param::EtaX, 3).unwrap();
        let csv = curve.to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "x,y,status");
        assert_eq!(lines.len(), 4);
        assert!(lines[1].ends_with(",nan,never"), "{}", lines[1]);
        assert!(lines[3].starts_with("1,") && lines[3].ends_with(",found"));
        assert!(region_boundary(&spec, Param::EtaZ, Param::EtaX, 1).is_err());
        assert!(region_boundary(&spec, Param::EtaZ, Param::EtaZ, 3).is_err());
    }
}
