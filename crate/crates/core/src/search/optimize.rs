//! Deterministic multi-start Nelder–Mead over the free parameters.
//!
//! Starts are the first points of a Halton sequence in the unit box,
//! mapped to the parameter bounds. Each start runs a simplex search in
//! normalized coordinates with trial points clamped to the box, stopping
//! when the simplex diameter (max-norm, normalized units) falls below
//! `xtol` or the evaluation budget is spent. Starts are processed in
//! fixed-size batches so that an early stop on a positive margin gives
//! the same answer for any thread count.

use crate::parallel::par_map;
use crate::search::scenario::{margin_unchecked, Param, ParamValue, Params, Relabel, ScenarioSpec};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimizerOptions {
    pub starts: usize,
    pub xtol: f64,
    pub max_evals: usize,
    /// Starts evaluated together between early-stop checks.
    pub batch: usize,
}

impl Default for OptimizerOptions {
    fn default() -> Self {
        Self {
            starts: 32,
            xtol: 1e-6,
            max_evals: 3000,
            batch: 8,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizeResult {
    pub margin: f64,
    pub params: Params,
    pub evaluations: usize,
}

const PRIMES: [u32; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Radical inverse of `index` in base `b`.
fn radical_inverse(mut index: u64, b: u32) -> f64 {
    let b = b as u64;
    let mut inv = 1.0 / b as f64;
    let mut out = 0.0;
    while index > 0 {
        out += (index % b) as f64 * inv;
        index /= b;
        inv /= b as f64;
    }
    out
}

/// `k`-th Halton point in `[0,1)^dim`, skipping the origin.
pub fn halton(k: usize, dim: usize) -> Vec<f64> {
    (0..dim).map(|d| radical_inverse(k as u64 + 1, PRIMES[d])).collect()
}

struct Problem<'a> {
    spec: &'a ScenarioSpec,
    base: Params,
    free: Vec<Param>,
    bounds: Vec<(f64, f64)>,
}

impl Problem<'_> {
    fn point(&self, u: &[f64], relabel: bool) -> Params {
        let mut p = self.base;
        p.x_relabel = relabel;
        for ((&param, &(lo, hi)), &ui) in self.free.iter().zip(&self.bounds).zip(u) {
            p.set(param, lo + ui.clamp(0.0, 1.0) * (hi - lo));
        }
        p
    }

    fn to_unit(&self, p: &Params) -> Vec<f64> {
        self.free
            .iter()
            .zip(&self.bounds)
            .map(|(&param, &(lo, hi))| {
                if hi > lo {
                    ((p.get(param) - lo) / (hi - lo)).clamp(0.0, 1.0)
                } else {
                    0.0
                }
            })
            .collect()
    }

    fn eval(&self, u: &[f64], relabel: bool) -> Result<f64> {
        margin_unchecked(self.spec, &self.point(u, relabel))
    }
}

/// Nelder–Mead maximization from `start` in normalized coordinates.
fn nelder_mead(
    f: &dyn Fn(&[f64]) -> Result<f64>,
    start: &[f64],
    opts: &OptimizerOptions,
) -> Result<(Vec<f64>, f64, usize)> {
    let dim = start.len();
    let clamp = |v: Vec<f64>| v.into_iter().map(|x| x.clamp(0.0, 1.0)).collect::<Vec<_>>();
    let evals = std::cell::Cell::new(0usize);
    let eval = |x: &[f64]| -> Result<f64> {
        evals.set(evals.get() + 1);
        f(x).map(|v| if v.is_nan() { f64::NEG_INFINITY } else { v })
    };
    let step = 0.1;
    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(dim + 1);
    let x0 = clamp(start.to_vec());
    simplex.push((x0.clone(), eval(&x0)?));
    for d in 0..dim {
        let mut x = x0.clone();
        x[d] = if x[d] + step <= 1.0 { x[d] + step } else { x[d] - step };
        let fx = eval(&x)?;
        simplex.push((x, fx));
    }
    loop {
        // best first
        simplex.sort_by(|a, b| b.1.total_cmp(&a.1));
        let diameter = simplex[1..]
            .iter()
            .map(|(x, _)| {
                x.iter()
                    .zip(&simplex[0].0)
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0, f64::max)
            })
            .fold(0.0, f64::max);
        if diameter < opts.xtol || evals.get() >= opts.max_evals {
            let (x, fx) = simplex.swap_remove(0);
            return Ok((x, fx, evals.get()));
        }
        let worst = simplex[dim].clone();
        let centroid: Vec<f64> = (0..dim)
            .map(|d| simplex[..dim].iter().map(|(x, _)| x[d]).sum::<f64>() / dim as f64)
            .collect();
        let along = |t: f64| -> Vec<f64> {
            clamp(
                centroid
                    .iter()
                    .zip(&worst.0)
                    .map(|(c, w)| c + t * (c - w))
                    .collect(),
            )
        };
        let xr = along(1.0);
        let fr = eval(&xr)?;
        if fr > simplex[0].1 {
            let xe = along(2.0);
            let fe = eval(&xe)?;
            simplex[dim] = if fe > fr { (xe, fe) } else { (xr, fr) };
            continue;
        }
        if fr > simplex[dim - 1].1 {
            simplex[dim] = (xr, fr);
            continue;
        }
        let (xc, fc) = if fr > worst.1 {
            let xc = along(0.5);
            let fc = eval(&xc)?;
            (xc, fc)
        } else {
            let xc = along(-0.5);
            let fc = eval(&xc)?;
            (xc, fc)
        };
        if fc > worst.1.max(fr) {
            simplex[dim] = (xc, fc);
            continue;
        }
        // shrink toward the best vertex
        let best = simplex[0].0.clone();
        for vertex in simplex.iter_mut().skip(1) {
            let x: Vec<f64> = vertex
                .0
                .iter()
                .zip(&best)
                .map(|(v, b)| b + 0.5 * (v - b))
                .collect();
            let fx = eval(&x)?;
            *vertex = (x, fx);
        }
    }
}

/// Maximizes the margin over the free parameters of `spec`, with the
/// parameters in `fixed` pinned. `warm` adds one extra start ahead of the
/// quasi-random ones. With `stop_above`, the search ends after the first
/// batch that reaches a margin above it.
pub fn optimize_with(
    spec: &ScenarioSpec,
    fixed: &[(Param, f64)],
    warm: Option<&Params>,
    stop_above: Option<f64>,
    opts: &OptimizerOptions,
) -> Result<OptimizeResult> {
    spec.validate()?;
    let mut base = spec.base_params();
    for &(p, v) in fixed {
        base.set(p, v);
    }
    let free: Vec<Param> = spec
        .free_params()
        .into_iter()
        .filter(|p| !fixed.iter().any(|(q, _)| q == p))
        .collect();
    let bounds: Vec<(f64, f64)> = free
        .iter()
        .map(|&p| match spec.param(p) {
            ParamValue::Free { lo, hi } => (lo, hi),
            ParamValue::Fixed(v) => (v, v),
        })
        .collect();
    let relabels: Vec<bool> = match spec.x_relabel {
        Relabel::Off => vec![false],
        Relabel::On => vec![true],
        Relabel::Free => vec![false, true],
    };
    let problem = Problem {
        spec,
        base,
        free,
        bounds,
    };
    let dim = problem.free.len();

    if dim == 0 {
        let mut best: Option<OptimizeResult> = None;
        for &r in &relabels {
            let m = problem.eval(&[], r)?;
            if best.as_ref().is_none_or(|b| m > b.margin) {
                best = Some(OptimizeResult {
                    margin: m,
                    params: problem.point(&[], r),
                    evaluations: 1,
                });
            }
        }
        return best.ok_or_else(|| Error::Invalid("no relabel choice".into()));
    }

    // (unit start, relabel) in a fixed order
    let mut starts: Vec<(Vec<f64>, bool)> = Vec::new();
    if let Some(w) = warm {
        starts.push((problem.to_unit(w), w.x_relabel && relabels.contains(&true)));
    }
    for k in 0..opts.starts {
        for &r in &relabels {
            starts.push((halton(k, dim), r));
        }
    }

    let mut best: Option<OptimizeResult> = None;
    let mut evaluations = 0;
    for batch in starts.chunks(opts.batch.max(1)) {
        let results = par_map(batch, |(u0, relabel)| {
            let f = |u: &[f64]| problem.eval(u, *relabel);
            nelder_mead(&f, u0, opts).map(|(u, m, e)| (problem.point(&u, *relabel), m, e))
        });
        for r in results {
            let (params, margin, e) = r?;
            evaluations += e;
            if best.as_ref().is_none_or(|b| margin > b.margin) {
                best = Some(OptimizeResult {
                    margin,
                    params,
                    evaluations: 0,
                });
            }
        }
        if let (Some(t), Some(b)) = (stop_above, &best) {
            if b.margin > t {
                break;
            }
        }
    }
    let mut best = best.expect("at least one start");
    best.evaluations = evaluations;
    Ok(best)
}

/// Full multi-start maximization of the margin.
pub fn optimize_free_parameters(spec: &ScenarioSpec, fixed: &[(Param, f64)]) -> Result<OptimizeResult> {
    if spec.free_params().iter().all(|p| fixed.iter().any(|(q, _)| q == p))
        && spec.x_relabel != Relabel::Free
    {
        return Err(Error::Invalid("scenario has no free parameters".into()));
    }
    optimize_with(spec, fixed, None, None, &OptimizerOptions::default())
}
