//! Scenario descriptions and the scalar violation margin.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
use std::fmt::{self, Write as _};
use std::str::FromStr;

use crate::bell::{cabello_value, chsh_value, mermin3_value, wwwzb_value};
use crate::dist::{correlators, joint_distribution, MeasurementAssignment};
use crate::measure::{
    amplitude_damping_presets, displaced_spd_povm, efficiency_povm, homodyne_povm,
    lossy_threeoutcome_povm, spd_povm, BlochAxis, Povm,
};
use crate::polytope::{max_lp_parties, nonlocal_content, DEFAULT_LOCALITY_TOL};
use crate::states::{atom_photon_state, w_state, StateDensity};
use crate::{Error, Result};

/// Slack subtracted from Bell margins so that roundoff at the local bound
/// does not read as a violation.
pub const BELL_MARGIN_SLACK: f64 = 1e-12;

/// The continuous knobs of a scenario.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Param {
    /// Photonic z-detector (SPD) efficiency; also the SPD of the displacement scheme.
    EtaZ,
    /// Symmetric x-measurement efficiency; the 3-outcome x loss.
    EtaX,
    EtaHom,
    EtaC,
    EtaAtom,
    Alpha,
    Phi,
    Theta,
    AtomPolar0,
    AtomAzimuth0,
    AtomPolar1,
    AtomAzimuth1,
}

impl Param {
    pub const ALL: [Param; 12] = [
        Param::EtaZ,
        Param::EtaX,
        Param::EtaHom,
        Param::EtaC,
        Param::EtaAtom,
        Param::Alpha,
        Param::Phi,
        Param::Theta,
        Param::AtomPolar0,
        Param::AtomAzimuth0,
        Param::AtomPolar1,
        Param::AtomAzimuth1,
    ];

    pub const fn name(self) -> &'static str {
        match self {
            Param::EtaZ => "eta_z",
            Param::EtaX => "eta_x",
            Param::EtaHom => "eta_hom",
            Param::EtaC => "eta_c",
            Param::EtaAtom => "eta_atom",
            Param::Alpha => "alpha",
            Param::Phi => "phi",
            Param::Theta => "theta",
            Param::AtomPolar0 => "atom_polar0",
            Param::AtomAzimuth0 => "atom_azimuth0",
            Param::AtomPolar1 => "atom_polar1",
            Param::AtomAzimuth1 => "atom_azimuth1",
        }
    }

    pub const fn index(self) -> usize {
        self as usize
    }

    pub const fn is_efficiency(self) -> bool {
        matches!(
            self,
            Param::EtaZ | Param::EtaX | Param::EtaHom | Param::EtaC | Param::EtaAtom
        )
    }

    /// Value used when a scenario does not mention the parameter.
    pub const fn default_value(self) -> f64 {
        match self {
            Param::EtaZ | Param::EtaX | Param::EtaHom | Param::EtaC | Param::EtaAtom => 1.0,
            Param::Theta => -FRAC_PI_4,
            Param::AtomPolar1 => FRAC_PI_2,
            Param::Alpha | Param::Phi | Param::AtomPolar0 | Param::AtomAzimuth0 | Param::AtomAzimuth1 => 0.0,
        }
    }

    /// Box used by the optimizer when a parameter is declared `free`
    /// without bounds.
    pub fn natural_bounds(self) -> (f64, f64) {
        match self {
            p if p.is_efficiency() => (0.0, 1.0),
            Param::Theta => (-FRAC_PI_2, -THETA_CLAMP),
            Param::Alpha => (-3.0, 3.0),
            Param::AtomPolar0 | Param::AtomPolar1 => (0.0, PI),
            _ => (-PI, PI),
        }
    }
}

/// `|θ|` is kept at least this large so the nearly separable limit stays a
/// well-defined boundary point.
pub const THETA_CLAMP: f64 = 1e-3;

impl fmt::Display for Param {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Param {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Param::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::Invalid(format!("unknown parameter `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ParamValue {
    Fixed(f64),
    Free { lo: f64, hi: f64 },
}

impl ParamValue {
    pub fn is_free(&self) -> bool {
        matches!(self, ParamValue::Free { .. })
    }
}

/// Concrete values for every [`Param`] plus the discrete relabeling choice.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Params {
    pub values: [f64; 12],
    /// Exchange the outcome labels of the photonic x measurement.
    pub x_relabel: bool,
}

impl Params {
    pub fn get(&self, p: Param) -> f64 {
        self.values[p.index()]
    }

    pub fn set(&mut self, p: Param, v: f64) {
        self.values[p.index()] = v;
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StateModel {
    /// `|W_N⟩` over all parties.
    W,
    /// Atom (party 0) entangled with a photon over the other `N - 1` modes.
    AtomPhoton,
}

/// Photonic x-type measurement. The z-type measurement is always an SPD of
/// efficiency `eta_z` (except for the amplitude-damping model).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum XScheme {
    /// Equatorial axis `phi` with symmetric efficiency `eta_x`.
    Symmetric,
    /// Sign-binned homodyne at phase `phi` with efficiency `eta_hom`.
    Homodyne,
    /// Displacement `alpha` followed by the SPD of efficiency `eta_z`.
    Displaced,
    /// z and x measurements equivalent to ideal ones after amplitude damping
    /// with survival probability `eta_z`.
    AmplitudeDamping,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Criterion {
    Cabello,
    Wwwzb,
    Mermin3,
    Chsh,
    /// Local-polytope LP on the two-outcome statistics.
    Lp2,
    /// Local-polytope LP with loss kept as a third outcome.
    Lp3,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relabel {
    Off,
    On,
    /// Optimize over both choices.
    Free,
}

macro_rules! keyword_enum {
    ($ty:ty, $what:literal, { $($variant:path => $text:literal),+ $(,)? }) => {
        impl $ty {
            pub const fn as_str(self) -> &'static str {
                match self {
                    $($variant => $text),+
                }
            }
        }

        impl fmt::Display for $ty {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.as_str())
            }
        }

        impl FromStr for $ty {
            type Err = Error;

            fn from_str(s: &str) -> Result<Self> {
                match s {
                    $($text => Ok($variant),)+
                    _ => Err(Error::Invalid(format!(concat!("unknown ", $what, " `{}`"), s))),
                }
            }
        }
    };
}

keyword_enum!(StateModel, "state", {
    StateModel::W => "w",
    StateModel::AtomPhoton => "atom-photon",
});

keyword_enum!(XScheme, "x scheme", {
    XScheme::Symmetric => "symmetric",
    XScheme::Homodyne => "homodyne",
    XScheme::Displaced => "displaced",
    XScheme::AmplitudeDamping => "amplitude-damping",
});

keyword_enum!(Criterion, "criterion", {
    Criterion::Cabello => "cabello",
    Criterion::Wwwzb => "wwwzb",
    Criterion::Mermin3 => "mermin3",
    Criterion::Chsh => "chsh",
    Criterion::Lp2 => "lp-2outcome",
    Criterion::Lp3 => "lp-3outcome",
});

keyword_enum!(Relabel, "relabel mode", {
    Relabel::Off => "off",
    Relabel::On => "on",
    Relabel::Free => "free",
});

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioSpec {
    pub n_parties: usize,
    pub state: StateModel,
    pub x_scheme: XScheme,
    pub criterion: Criterion,
    pub x_relabel: Relabel,
    pub params: [ParamValue; 12],
}

impl ScenarioSpec {
    /// All parameters at their defaults, fixed.
    pub fn new(n_parties: usize, state: StateModel, x_scheme: XScheme, criterion: Criterion) -> Self {
        Self {
            n_parties,
            state,
            x_scheme,
            criterion,
            x_relabel: Relabel::Off,
            params: Param::ALL.map(|p| ParamValue::Fixed(p.default_value())),
        }
    }

    pub fn param(&self, p: Param) -> ParamValue {
        self.params[p.index()]
    }

    pub fn fix(mut self, p: Param, v: f64) -> Self {
        self.params[p.index()] = ParamValue::Fixed(v);
        self
    }

    pub fn free(mut self, p: Param, lo: f64, hi: f64) -> Self {
        self.params[p.index()] = ParamValue::Free { lo, hi };
        self
    }

    /// Frees `p` over its natural box.
    pub fn free_natural(self, p: Param) -> Self {
        let (lo, hi) = p.natural_bounds();
        self.free(p, lo, hi)
    }

    pub fn with_relabel(mut self, r: Relabel) -> Self {
        self.x_relabel = r;
        self
    }

    pub fn with_parties(mut self, n: usize) -> Self {
        self.n_parties = n;
        self
    }

    pub fn has_atom(&self) -> bool {
        self.state == StateModel::AtomPhoton
    }

    /// Whether `p` influences the margin of this scenario.
    pub fn uses(&self, p: Param) -> bool {
        let lp3 = self.criterion == Criterion::Lp3;
        match p {
            Param::EtaZ => true,
            Param::EtaX => lp3 || self.x_scheme == XScheme::Symmetric,
            Param::EtaHom => !lp3 && self.x_scheme == XScheme::Homodyne,
            Param::Alpha => !lp3 && self.x_scheme == XScheme::Displaced,
            Param::Phi => {
                lp3 || matches!(self.x_scheme, XScheme::Symmetric | XScheme::Homodyne)
            }
            Param::EtaC | Param::Theta | Param::EtaAtom => self.has_atom(),
            Param::AtomPolar0 | Param::AtomAzimuth0 | Param::AtomPolar1 | Param::AtomAzimuth1 => {
                self.has_atom()
            }
        }
    }

    /// Parameters that are free and used, in [`Param::ALL`] order.
    pub fn free_params(&self) -> Vec<Param> {
        Param::ALL
            .into_iter()
            .filter(|&p| self.param(p).is_free() && self.uses(p))
            .collect()
    }

    /// Checks bounds ordering, efficiency ranges and criterion compatibility.
    pub fn validate(&self) -> Result<()> {
        let n = self.n_parties;
        let min_parties = if self.has_atom() { 2 } else { 1 };
        if n < min_parties || n > 12 {
            return Err(Error::Invalid(format!("{n} parties")));
        }
        for p in Param::ALL {
            let check_eff = |v: f64| -> Result<()> {
                if p.is_efficiency() && !(0.0..=1.0).contains(&v) {
                    return Err(Error::OutOfRange {
                        name: p.name(),
                        value: v,
                        lo: 0.0,
                        hi: 1.0,
                    });
                }
                if !v.is_finite() {
                    return Err(Error::Invalid(format!("{p} = {v}")));
                }
                Ok(())
            };
            match self.param(p) {
                ParamValue::Fixed(v) => check_eff(v)?,
                ParamValue::Free { lo, hi } => {
                    check_eff(lo)?;
                    check_eff(hi)?;
                    if lo > hi {
                        return Err(Error::Invalid(format!("{p}: bounds {lo} > {hi}")));
                    }
                }
            }
        }
        let ok = match self.criterion {
            Criterion::Cabello => n >= 3,
            Criterion::Mermin3 => n == 3,
            Criterion::Chsh => n == 2,
            Criterion::Wwwzb => true,
            Criterion::Lp2 => (2..=max_lp_parties(2)).contains(&n),
            Criterion::Lp3 => (2..=max_lp_parties(3)).contains(&n),
        };
        if !ok {
            return Err(Error::Invalid(format!(
                "criterion {} is not defined for {n} parties",
                self.criterion
            )));
        }
        if self.criterion == Criterion::Lp3 && self.x_relabel != Relabel::Off {
            return Err(Error::Invalid("relabeling applies to two-outcome scenarios".into()));
        }
        Ok(())
    }

    /// Parameters at their fixed values, free ones at the box midpoint.
    pub fn base_params(&self) -> Params {
        let mut values = [0.0; 12];
        for p in Param::ALL {
            values[p.index()] = match self.param(p) {
                ParamValue::Fixed(v) => v,
                ParamValue::Free { lo, hi } => 0.5 * (lo + hi),
            };
        }
        Params {
            values,
            x_relabel: self.x_relabel == Relabel::On,
        }
    }

    /// Flat `key = value` text; floats use the shortest round-trip form.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "n = {}", self.n_parties);
        let _ = writeln!(out, "state = {}", self.state);
        let _ = writeln!(out, "x_scheme = {}", self.x_scheme);
        let _ = writeln!(out, "criterion = {}", self.criterion);
        let _ = writeln!(out, "x_relabel = {}", self.x_relabel);
        for p in Param::ALL {
            match self.param(p) {
                ParamValue::Fixed(v) => {
                    let _ = writeln!(out, "{p} = {v:?}");
                }
                ParamValue::Free { lo, hi } => {
                    let _ = writeln!(out, "{p} = free({lo:?}, {hi:?})");
                }
            }
        }
        out
    }

    /// Parses `key = value` lines over a base scenario; unknown keys and
    /// repeated keys are rejected.
    pub fn apply_text(mut self, text: &str) -> Result<Self> {
        let mut seen = std::collections::HashSet::new();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let parse_err = |msg: String| Error::Parse { line: line_no, msg };
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| parse_err(format!("expected `key = value`, found `{line}`")))?;
            let (key, value) = (key.trim(), value.trim());
            if !seen.insert(key.to_string()) {
                return Err(parse_err(format!("duplicate key `{key}`")));
            }
            let wrap = |e: Error| parse_err(e.to_string());
            match key {
                "n" => {
                    self.n_parties = value
                        .parse()
                        .map_err(|_| parse_err(format!("bad party count `{value}`")))?
                }
                "state" => self.state = value.parse().map_err(wrap)?,
                "x_scheme" => self.x_scheme = value.parse().map_err(wrap)?,
                "criterion" => self.criterion = value.parse().map_err(wrap)?,
                "x_relabel" => self.x_relabel = value.parse().map_err(wrap)?,
                _ => {
                    let p: Param = key.parse().map_err(wrap)?;
                    self.params[p.index()] = parse_param_value(p, value).map_err(wrap)?;
                }
            }
        }
        Ok(self)
    }

    /// Parses a complete scenario starting from a W-state Cabello default.
    pub fn from_text(text: &str) -> Result<Self> {
        let spec = Self::new(3, StateModel::W, XScheme::Symmetric, Criterion::Cabello).apply_text(text)?;
        spec.validate()?;
        Ok(spec)
    }

    fn state(&self, p: &Params) -> Result<StateDensity> {
        match self.state {
            StateModel::W => w_state(self.n_parties),
            StateModel::AtomPhoton => {
                atom_photon_state(p.get(Param::Theta), p.get(Param::EtaC), self.n_parties - 1)
            }
        }
    }

    fn photonic_pair(&self, p: &Params) -> Result<[Povm; 2]> {
        let eta_z = p.get(Param::EtaZ);
        let phi = p.get(Param::Phi);
        if self.criterion == Criterion::Lp3 {
            return Ok([
                lossy_threeoutcome_povm(BlochAxis::z(), eta_z)?.into(),
                lossy_threeoutcome_povm(BlochAxis::equatorial(phi), p.get(Param::EtaX))?.into(),
            ]);
        }
        let (z, x) = match self.x_scheme {
            XScheme::Symmetric => {
                let ex = p.get(Param::EtaX);
                (spd_povm(eta_z)?, efficiency_povm(BlochAxis::equatorial(phi), ex, ex)?)
            }
            XScheme::Homodyne => (spd_povm(eta_z)?, homodyne_povm(phi, p.get(Param::EtaHom))?),
            XScheme::Displaced => (spd_povm(eta_z)?, displaced_spd_povm(p.get(Param::Alpha), eta_z)?),
            XScheme::AmplitudeDamping => amplitude_damping_presets(eta_z)?,
        };
        let x = if p.x_relabel { x.relabeled() } else { x };
        Ok([z.into(), x.into()])
    }

    fn assignment(&self, p: &Params) -> Result<MeasurementAssignment> {
        let photonic = self.photonic_pair(p)?;
        let mut parties = Vec::with_capacity(self.n_parties);
        if self.has_atom() {
            let eta = p.get(Param::EtaAtom);
            let axis0 = BlochAxis::new(p.get(Param::AtomPolar0), p.get(Param::AtomAzimuth0));
            let axis1 = BlochAxis::new(p.get(Param::AtomPolar1), p.get(Param::AtomAzimuth1));
            parties.push([
                efficiency_povm(axis0, eta, 1.0)?.into(),
                efficiency_povm(axis1, eta, 1.0)?.into(),
            ]);
        }
        while parties.len() < self.n_parties {
            parties.push(photonic.clone());
        }
        MeasurementAssignment::new(parties)
    }

    /// The state and measurements realized at `params`.
    pub fn realize(&self, params: &Params) -> Result<(StateDensity, MeasurementAssignment)> {
        Ok((self.state(params)?, self.assignment(params)?))
    }
}

fn parse_param_value(p: Param, text: &str) -> Result<ParamValue> {
    let number = |s: &str| -> Result<f64> {
        s.trim()
            .parse::<f64>()
            .map_err(|_| Error::Invalid(format!("{p}: bad number `{}`", s.trim())))
    };
    if text == "free" {
        let (lo, hi) = p.natural_bounds();
        return Ok(ParamValue::Free { lo, hi });
    }
    if let Some(inner) = text.strip_prefix("free(").and_then(|t| t.strip_suffix(')')) {
        let (lo, hi) = inner
            .split_once(',')
            .ok_or_else(|| Error::Invalid(format!("{p}: expected free(lo, hi)")))?;
        return Ok(ParamValue::Free {
            lo: number(lo)?,
            hi: number(hi)?,
        });
    }
    Ok(ParamValue::Fixed(number(text)?))
}

/// Signed distance from locality detection: positive exactly when the
/// criterion certifies nonlocality at `params`.
///
/// Bell criteria give `value - local_bound - BELL_MARGIN_SLACK`; LP criteria
/// give `nonlocal_content - DEFAULT_LOCALITY_TOL`.
pub fn violation_margin(spec: &ScenarioSpec, params: &Params) -> Result<f64> {
    spec.validate()?;
    for p in Param::ALL {
        if let ParamValue::Free { lo, hi } = spec.param(p) {
            let v = params.get(p);
            if !(lo..=hi).contains(&v) {
                return Err(Error::OutOfRange {
                    name: p.name(),
                    value: v,
                    lo,
                    hi,
                });
            }
        }
    }
    margin_unchecked(spec, params)
}

pub(crate) fn margin_unchecked(spec: &ScenarioSpec, params: &Params) -> Result<f64> {
    let (state, assignment) = spec.realize(params)?;
    let bell = |v: f64, local: f64| v - local - BELL_MARGIN_SLACK;
    Ok(match spec.criterion {
        Criterion::Cabello => {
            let r = cabello_value(&joint_distribution(&state, &assignment)?)?;
            bell(r.value, r.local_bound)
        }
        Criterion::Wwwzb => {
            let r = wwwzb_value(&correlators(&state, &assignment)?);
            bell(r.value, r.local_bound)
        }
        Criterion::Mermin3 => {
            let r = mermin3_value(&correlators(&state, &assignment)?)?;
            bell(r.value, r.local_bound)
        }
        Criterion::Chsh => {
            let r = chsh_value(&correlators(&state, &assignment)?)?;
            bell(r.value, r.local_bound)
        }
        Criterion::Lp2 | Criterion::Lp3 => {
            nonlocal_content(&joint_distribution(&state, &assignment)?)?.nonlocal_content
                - DEFAULT_LOCALITY_TOL
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn cabello(n: usize) -> ScenarioSpec {
        ScenarioSpec::new(n, StateModel::W, XScheme::Symmetric, Criterion::Cabello)
    }

    #[test]
    fn margin_examples() {
        let spec = cabello(3);
        assert_abs_diff_eq!(
            violation_margin(&spec, &spec.base_params()).unwrap(),
            0.25,
            epsilon = 1e-10
        );
        // vacuum statistics: no photon ever reaches a detector
        let dark = cabello(3).fix(Param::EtaZ, 0.0);
        let (state, assignment) = dark.realize(&dark.base_params()).unwrap();
        let p = joint_distribution(&state, &assignment).unwrap();
        assert!(p.prob(0, 0) > 0.99);
    }

    #[test]
    fn local_setup_never_violates() {
        // a symmetric x efficiency of 1/2 makes the x outcome a fair coin
        for crit in [Criterion::Cabello, Criterion::Wwwzb, Criterion::Mermin3, Criterion::Lp2] {
            let spec = ScenarioSpec::new(3, StateModel::W, XScheme::Symmetric, crit)
                .fix(Param::EtaX, 0.5);
            let m = violation_margin(&spec, &spec.base_params()).unwrap();
            assert!(m <= 0.0, "{crit}: {m}");
        }
    }

    #[test]
    fn text_round_trip() {
        let spec = ScenarioSpec::new(4, StateModel::AtomPhoton, XScheme::Displaced, Criterion::Wwwzb)
            .free(Param::Alpha, -2.5, 1.0 / 3.0)
            .fix(Param::EtaC, 0.123456789012345678)
            .free_natural(Param::Theta)
            .with_relabel(Relabel::Free);
        let back = ScenarioSpec::from_text(&spec.to_text()).unwrap();
        assert_eq!(back, spec);
    }

    #[test]
    fn text_errors() {
        assert!(ScenarioSpec::from_text("colour = blue").is_err());
        assert!(ScenarioSpec::from_text("eta_z = 1.5").is_err());
        assert!(ScenarioSpec::from_text("n = 2\ncriterion = cabello").is_err());
        assert!(ScenarioSpec::from_text("eta_z = 0.5\neta_z = 0.6").is_err());
        assert!(ScenarioSpec::from_text("alpha = free(2, 1)").is_err());
        let spec = ScenarioSpec::from_text("# comment\nn = 4\ncriterion = wwwzb  # trailing\nalpha = free").unwrap();
        assert_eq!(spec.n_parties, 4);
        assert_eq!(spec.param(Param::Alpha), ParamValue::Free { lo: -3.0, hi: 3.0 });
    }

    #[test]
    fn out_of_bounds_params_rejected() {
        let spec = cabello(3).free(Param::EtaX, 0.2, 0.6);
        let mut p = spec.base_params();
        p.set(Param::EtaX, 0.9);
        assert!(matches!(violation_margin(&spec, &p), Err(Error::OutOfRange { .. })));
    }

    #[test]
    fn free_params_ignore_unused() {
        let spec = cabello(3).free_natural(Param::Alpha).free_natural(Param::EtaX);
        assert_eq!(spec.free_params(), vec![Param::EtaX]);
    }
}
