use std::fs::{self, File};
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;
use thiserror::Error;
use wbell_core::bell::{cabello_value, chsh_value, mermin3_value, wwwzb_value, BellResult};
use wbell_core::dist::{correlators, joint_distribution, JointDistribution};
use wbell_core::parallel::with_jobs;
use wbell_core::polytope::{content_lp_options, nonlocal_content_with, LpOptions};
use wbell_core::qmat::negativity;
use wbell_core::search::{
    critical_efficiency, default_parties, optimize_free_parameters, preset, region_boundary, Criterion, Param,
    Params, Preset, ScenarioSpec, StateModel, XScheme,
};

use crate::args::{
    BellArgs, Cli, Command, ContentArgs, Inequality, NegativityArgs, RegionArgs, ScenarioArgs, StateArg,
    ThresholdArgs,
};
use crate::output::{BellOutput, ContentOutput, NegativityOutput, ThresholdOutput};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] wbell_core::Error),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

type Result<T> = std::result::Result<T, CliError>;

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    }
}

pub fn dispatch(cli: &Cli) -> Result<()> {
    if cli.jobs == Some(0) {
        return Err(CliError::Usage("--jobs must be at least 1".into()));
    }
    with_jobs(cli.jobs, || match &cli.command {
        Command::Bell(a) => bell(a),
        Command::Threshold(a) => threshold(a),
        Command::Region(a) => region(a),
        Command::Content(a) => content(a),
        Command::Negativity(a) => negativity_cmd(a),
    })
}

fn print_json<T: Serialize>(value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value).map_err(|e| CliError::Usage(e.to_string()))?;
    println!("{text}");
    Ok(())
}

/// Resolves the scenario; returns `None` after `--dump-spec` printed it.
fn resolve(
    args: &ScenarioArgs,
    base: impl FnOnce(usize) -> ScenarioSpec,
    adjust: impl FnOnce(ScenarioSpec) -> ScenarioSpec,
) -> Result<Option<(ScenarioSpec, Option<Preset>)>> {
    let (mut spec, found) = match &args.preset {
        Some(name) => {
            let p = preset(name, args.n.unwrap_or_else(|| default_parties(name)))?;
            (p.spec.clone(), Some(p))
        }
        None => (base(args.n.unwrap_or(3)), None),
    };
    if let Some(path) = &args.config {
        let text = fs::read_to_string(path).map_err(io_err(path))?;
        spec = spec.apply_text(&text)?;
    }
    for kv in &args.set {
        let (k, v) = kv
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("--set expects KEY=VALUE, got `{kv}`")))?;
        spec = spec.apply_text(&format!("{} = {}", k.trim(), v.trim()))?;
    }
    if let Some(n) = args.n {
        spec = spec.with_parties(n);
    }
    let spec = adjust(spec);
    spec.validate()?;
    if args.dump_spec {
        print!("{}", spec.to_text());
        return Ok(None);
    }
    Ok(Some((spec, found)))
}

fn state_model(s: StateArg) -> StateModel {
    match s {
        StateArg::W => StateModel::W,
        StateArg::AtomPhoton => StateModel::AtomPhoton,
    }
}

fn bell_result(spec: &ScenarioSpec, params: &Params) -> Result<BellResult> {
    let (state, assignment) = spec.realize(params)?;
    Ok(match spec.criterion {
        Criterion::Cabello => cabello_value(&joint_distribution(&state, &assignment)?)?,
        Criterion::Wwwzb => wwwzb_value(&correlators(&state, &assignment)?),
        Criterion::Mermin3 => mermin3_value(&correlators(&state, &assignment)?)?,
        Criterion::Chsh => chsh_value(&correlators(&state, &assignment)?)?,
        Criterion::Lp2 | Criterion::Lp3 => {
            return Err(CliError::Usage("LP criteria are evaluated by `content`".into()))
        }
    })
}

fn bell(a: &BellArgs) -> Result<()> {
    let criterion = a.inequality.map(|i| match i {
        Inequality::Cabello => Criterion::Cabello,
        Inequality::Wwwzb => Criterion::Wwwzb,
        Inequality::Mermin3 => Criterion::Mermin3,
        Inequality::Chsh => Criterion::Chsh,
    });
    let state = a.state.map(state_model);
    let resolved = resolve(
        &a.scenario,
        |n| {
            ScenarioSpec::new(
                n,
                state.unwrap_or(StateModel::W),
                XScheme::Symmetric,
                criterion.unwrap_or(Criterion::Cabello),
            )
        },
        |mut spec| {
            if let Some(c) = criterion {
                spec.criterion = c;
            }
            if let Some(s) = state {
                spec.state = s;
            }
            if a.ideal {
                for p in Param::ALL.into_iter().filter(|p| p.is_efficiency()) {
                    spec = spec.fix(p, 1.0);
                }
            }
            spec
        },
    )?;
    let Some((spec, _)) = resolved else { return Ok(()) };
    let params = if spec.free_params().is_empty() && spec.x_relabel != wbell_core::search::Relabel::Free {
        spec.base_params()
    } else {
        optimize_free_parameters(&spec, &[])?.params
    };
    let r = bell_result(&spec, &params)?;
    print_json(&BellOutput::new(&spec, &params, &r))
}

fn parse_param(name: &str) -> Result<Param> {
    name.parse::<Param>().map_err(|e| CliError::Usage(e.to_string()))
}

fn default_spec(n: usize) -> ScenarioSpec {
    ScenarioSpec::new(n, StateModel::W, XScheme::Symmetric, Criterion::Cabello)
}

fn threshold(a: &ThresholdArgs) -> Result<()> {
    let Some((spec, found)) = resolve(&a.scenario, default_spec, |s| s)? else {
        return Ok(());
    };
    let target = match &a.target {
        Some(t) => parse_param(t)?,
        None => found.map_or(Param::EtaZ, |p| p.target),
    };
    let t = critical_efficiency(&spec, target, (a.lo, a.hi))?;
    print_json(&ThresholdOutput::new(&spec, target, &t))
}

fn region(a: &RegionArgs) -> Result<()> {
    let Some((spec, found)) = resolve(&a.scenario, default_spec, |s| s)? else {
        return Ok(());
    };
    let preset_axes = found.and_then(|p| p.axes);
    let axis = |given: &Option<String>, pick: fn((Param, Param)) -> Param, what: &str| -> Result<Param> {
        match (given, preset_axes) {
            (Some(name), _) => parse_param(name),
            (None, Some(axes)) => Ok(pick(axes)),
            (None, None) => Err(CliError::Usage(format!("--{what} is required without a region preset"))),
        }
    };
    let x = axis(&a.x, |a| a.0, "x")?;
    let y = axis(&a.y, |a| a.1, "y")?;
    let mut spec = spec;
    for p in [x, y] {
        if !spec.param(p).is_free() {
            spec = spec.free(p, 0.0, 1.0);
        }
    }
    // open the destination before the scan so a bad path fails fast
    let mut sink: Box<dyn Write> = match &a.out {
        Some(path) => Box::new(File::create(path).map_err(io_err(path))?),
        None => Box::new(std::io::stdout()),
    };
    let curve = region_boundary(&spec, x, y, a.grid)?;
    let csv = curve.to_csv();
    let dest = a.out.clone().unwrap_or_else(|| PathBuf::from("-"));
    sink.write_all(csv.as_bytes()).map_err(io_err(&dest))?;
    sink.flush().map_err(io_err(&dest))
}

/// Realizes a scenario without free parameters.
fn fixed_realization(spec: &ScenarioSpec) -> Result<(wbell_core::states::StateDensity, wbell_core::dist::MeasurementAssignment)> {
    let free = spec.free_params();
    if !free.is_empty() {
        let names: Vec<&str> = free.iter().map(|p| p.name()).collect();
        return Err(CliError::Usage(format!(
            "scenario has free parameters ({}); fix them with --set",
            names.join(", ")
        )));
    }
    Ok(spec.realize(&spec.base_params())?)
}

fn content(a: &ContentArgs) -> Result<()> {
    if !(a.locality_tol > 0.0) {
        return Err(CliError::Usage("--locality-tol must be positive".into()));
    }
    let p: JointDistribution = match &a.input {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(io_err(path))?;
            JointDistribution::from_text(&text)?
        }
        None => {
            let base = |n| ScenarioSpec::new(n, StateModel::W, XScheme::Symmetric, Criterion::Lp2);
            let Some((spec, _)) = resolve(&a.scenario, base, |s| s)? else {
                return Ok(());
            };
            let (state, m) = fixed_realization(&spec)?;
            joint_distribution(&state, &m)?
        }
    };
    let options = LpOptions {
        feasibility_tol: a.feasibility_tol.unwrap_or(content_lp_options().feasibility_tol),
        ..content_lp_options()
    };
    let r = nonlocal_content_with(&p, &options)?;
    print_json(&ContentOutput::new(&r, a.locality_tol))
}

fn negativity_cmd(a: &NegativityArgs) -> Result<()> {
    let state = a.state.map(state_model);
    let base = |n| ScenarioSpec::new(n, state.unwrap_or(StateModel::W), XScheme::Symmetric, Criterion::Wwwzb);
    let resolved = resolve(&a.scenario, base, |mut s| {
        if let Some(st) = state {
            s.state = st;
        }
        s
    })?;
    let Some((spec, _)) = resolved else { return Ok(()) };
    let (rho, _) = fixed_realization(&spec)?;
    let value = negativity(rho.rho(), a.cut)?;
    print_json(&NegativityOutput {
        negativity: value,
        cut: a.cut,
        n_parties: spec.n_parties,
    })
}
