//! Named scenarios for the figures and headline numbers.

use crate::search::scenario::{Criterion, Param, Relabel, ScenarioSpec, StateModel, XScheme};
use crate::{Error, Result};

/// A scenario together with the parameters the threshold and region
/// commands act on.
#[derive(Debug, Clone, PartialEq)]
pub struct Preset {
    pub name: &'static str,
    pub spec: ScenarioSpec,
    /// Parameter bisected by `threshold`.
    pub target: Param,
    /// `(x, y)` axes scanned by `region`, when the preset describes a region.
    pub axes: Option<(Param, Param)>,
}

pub const PRESET_NAMES: [&str; 15] = [
    "cabello-ad",
    "cabello-homodyne",
    "cabello-displacement",
    "wwwzb-homodyne",
    "atom-photon-wwwzb",
    "chsh-homodyne",
    "chsh-displacement",
    "fig1",
    "fig2",
    "fig3",
    "fig4-homodyne",
    "fig4-displacement",
    "fig5",
    "garbarino3",
    "mermin3",
];

/// Party count used when none is given.
pub fn default_parties(name: &str) -> usize {
    match name {
        "chsh-homodyne" | "chsh-displacement" | "fig4-homodyne" | "fig4-displacement" => 2,
        "fig3" | "atom-photon-wwwzb" => 2,
        _ => 3,
    }
}

/// Atom with two Bloch-axis settings free in the x-z plane and the state
/// angle free.
fn atom_photon(n: usize, scheme: XScheme, criterion: Criterion) -> ScenarioSpec {
    ScenarioSpec::new(n, StateModel::AtomPhoton, scheme, criterion)
        .free_natural(Param::Theta)
        .free_natural(Param::AtomPolar0)
        .free_natural(Param::AtomPolar1)
}

fn displaced(spec: ScenarioSpec) -> ScenarioSpec {
    spec.free_natural(Param::Alpha).with_relabel(Relabel::Free)
}

/// Looks up a preset for `n` parties.
pub fn preset(name: &str, n: usize) -> Result<Preset> {
    use Criterion::*;
    use XScheme::*;
    let w = |scheme, criterion| ScenarioSpec::new(n, StateModel::W, scheme, criterion);
    let unit = |p: Param| (p, 0.0, 1.0);
    // a symmetric efficiency below 1/2 is a relabeled measurement above it
    let sym = |p: Param| (p, 0.5, 1.0);
    let (spec, target, axes) = match name {
        "cabello-ad" => (w(AmplitudeDamping, Cabello), Param::EtaZ, None),
        "cabello-homodyne" => (w(Homodyne, Cabello), Param::EtaZ, None),
        "cabello-displacement" => (displaced(w(Displaced, Cabello)), Param::EtaZ, None),
        "wwwzb-homodyne" => (w(Homodyne, Wwwzb), Param::EtaZ, None),
        "mermin3" => (w(Symmetric, Mermin3), Param::EtaZ, None),
        "atom-photon-wwwzb" => (atom_photon(n, Homodyne, Wwwzb), Param::EtaZ, None),
        "chsh-homodyne" => (atom_photon(n, Homodyne, Chsh), Param::EtaZ, None),
        "chsh-displacement" => (displaced(atom_photon(n, Displaced, Chsh)), Param::EtaZ, None),
        "fig1" => (w(Symmetric, Cabello), Param::EtaX, Some((unit(Param::EtaZ), sym(Param::EtaX)))),
        "fig2" => (w(Symmetric, Wwwzb), Param::EtaX, Some((unit(Param::EtaZ), sym(Param::EtaX)))),
        "fig3" => (
            atom_photon(n, Homodyne, Wwwzb),
            Param::EtaZ,
            Some((unit(Param::EtaC), unit(Param::EtaZ))),
        ),
        "fig4-homodyne" | "fig4-displacement" => {
            let base = if name == "fig4-homodyne" {
                atom_photon(n, Homodyne, Chsh)
            } else {
                displaced(atom_photon(n, Displaced, Chsh))
            };
            (
                base.fix(Param::EtaAtom, 0.95).fix(Param::EtaHom, 0.98),
                Param::EtaZ,
                Some((unit(Param::EtaC), unit(Param::EtaZ))),
            )
        }
        "fig5" => (w(Symmetric, Lp2), Param::EtaZ, Some((sym(Param::EtaX), unit(Param::EtaZ)))),
        "garbarino3" => (
            w(Symmetric, Lp3),
            Param::EtaX,
            Some(((Param::EtaZ, 0.5, 1.0), unit(Param::EtaX))),
        ),
        _ => {
            return Err(Error::Invalid(format!(
                "unknown preset `{name}` (known: {})",
                PRESET_NAMES.join(", ")
            )))
        }
    };
    let spec = match axes {
        Some(((x, xlo, xhi), (y, ylo, yhi))) => spec.free(x, xlo, xhi).free(y, ylo, yhi),
        None => spec,
    };
    spec.validate()?;
    Ok(Preset {
        name: PRESET_NAMES.iter().find(|&&p| p == name).expect("listed"),
        spec,
        target,
        axes: axes.map(|((x, _, _), (y, _, _))| (x, y)),
    })
}
