use std::collections::BTreeMap;

use serde::Serialize;
use wbell_core::bell::BellResult;
use wbell_core::polytope::ContentResult;
use wbell_core::search::{Param, Params, ScenarioSpec, Threshold};

/// Parameters the scenario actually uses, by name.
pub fn used_params(spec: &ScenarioSpec, params: &Params) -> BTreeMap<&'static str, f64> {
    Param::ALL
        .into_iter()
        .filter(|&p| spec.uses(p))
        .map(|p| (p.name(), params.get(p)))
        .collect()
}

#[derive(Serialize)]
pub struct BellOutput {
    pub inequality: String,
    pub n_parties: usize,
    pub value: f64,
    pub local_bound: f64,
    pub algebraic_max: f64,
    pub violated: bool,
    pub params: BTreeMap<&'static str, f64>,
    pub x_relabel: bool,
}

impl BellOutput {
    pub fn new(spec: &ScenarioSpec, params: &Params, r: &BellResult) -> Self {
        Self {
            inequality: spec.criterion.to_string(),
            n_parties: spec.n_parties,
            value: r.value,
            local_bound: r.local_bound,
            algebraic_max: r.algebraic_max,
            violated: r.violated,
            params: used_params(spec, params),
            x_relabel: params.x_relabel,
        }
    }
}

#[derive(Serialize)]
pub struct ThresholdOutput {
    pub target: &'static str,
    pub threshold: f64,
    /// Non-violating end, then violating end.
    pub bracket: [f64; 2],
    pub margin: f64,
    pub params: BTreeMap<&'static str, f64>,
    pub x_relabel: bool,
}

impl ThresholdOutput {
    pub fn new(spec: &ScenarioSpec, target: Param, t: &Threshold) -> Self {
        Self {
            target: target.name(),
            threshold: t.value,
            bracket: [t.bracket.0, t.bracket.1],
            margin: t.at_violation.margin,
            params: used_params(spec, &t.at_violation.params),
            x_relabel: t.at_violation.params.x_relabel,
        }
    }
}

#[derive(Serialize)]
pub struct ContentOutput {
    pub local_weight: f64,
    pub nonlocal_content: f64,
    pub local_weight_bound: Option<f64>,
    pub local: bool,
    pub iterations: usize,
    /// `(vertex index, weight)` for every vertex with positive weight.
    pub support: Vec<(usize, f64)>,
}

impl ContentOutput {
    pub fn new(r: &ContentResult, locality_tol: f64) -> Self {
        Self {
            local_weight: r.local_weight,
            nonlocal_content: r.nonlocal_content,
            local_weight_bound: r.local_weight_bound,
            local: r.nonlocal_content <= locality_tol,
            iterations: r.iterations,
            support: r
                .certificate
                .iter()
                .enumerate()
                .filter(|(_, &w)| w > 0.0)
                .map(|(i, &w)| (i, w))
                .collect(),
        }
    }
}

#[derive(Serialize)]
pub struct NegativityOutput {
    pub negativity: f64,
    pub cut: usize,
    pub n_parties: usize,
}
