//! Local polytope membership and nonlocal content.
//!
//! The local weight of `P` is the optimum of
//! `max Σ_λ q_λ  s.t.  Σ_λ q_λ D_λ(o|s) ≤ P(o|s), q ≥ 0` over the
//! deterministic vertices `D_λ`; the nonlocal content is one minus it.

mod lp;
mod vertices;

pub use lp::{solve_lp, solve_lp_with, InequalitySystem, LpError, LpOptions, LpSolution};
pub use vertices::{enumerate_vertices, vertex_count, LocalVertex, VERTEX_CAP};

use crate::dist::JointDistribution;
use crate::parallel::par_map;
use crate::{Error, Result};

/// Largest party count accepted by [`nonlocal_content`], per outcome count.
pub const fn max_lp_parties(n_outcomes: usize) -> usize {
    if n_outcomes == 2 {
        5
    } else {
        4
    }
}

/// Entries at or below this are treated as exact zeros by the presolve.
pub const ZERO_PROBABILITY: f64 = 1e-14;

pub const DEFAULT_LOCALITY_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct ContentResult {
    pub local_weight: f64,
    pub nonlocal_content: f64,
    /// Weight `q_λ` of every vertex, indexed as [`LocalVertex::from_index`].
    pub certificate: Vec<f64>,
    /// Dual upper bound on the local weight, when available.
    pub local_weight_bound: Option<f64>,
    pub iterations: usize,
}

/// Solver settings for the local-weight program. Entries of `P` can be as
/// small as `1e-13` near a boundary, so primal feasibility is held far
/// tighter than the solver default.
pub fn content_lp_options() -> LpOptions {
    LpOptions {
        feasibility_tol: 1e-13,
        ..LpOptions::default()
    }
}

pub fn nonlocal_content(p: &JointDistribution) -> Result<ContentResult> {
    nonlocal_content_with(p, &content_lp_options())
}

pub fn nonlocal_content_with(p: &JointDistribution, options: &LpOptions) -> Result<ContentResult> {
    let n = p.n_parties();
    let k = p.n_outcomes();
    if n > max_lp_parties(k) {
        return Err(Error::Dimension(format!(
            "local-polytope LP supports at most {} parties with {k} outcomes",
            max_lp_parties(k)
        )));
    }
    let count = vertices::check_scenario(n, k)?;
    if let Some(bad) = p.table().iter().find(|&&v| !(-1e-12..=1.0 + 1e-12).contains(&v)) {
        return Err(Error::Invalid(format!("probability {bad} out of range")));
    }
    let norm = p.normalization_error();
    if norm > 1e-8 {
        return Err(Error::Invalid(format!("distribution normalization off by {norm:e}")));
    }

    let per = p.n_outcome_strings();
    let index: Vec<usize> = (0..count).collect();
    let rows_of: Vec<Vec<usize>> = par_map(&index, |&lambda| {
        let v = LocalVertex::from_index(n, k, lambda);
        (0..p.n_settings()).map(|s| s * per + v.response(s)).collect()
    });

    // A vertex touching a zero-probability entry carries no weight.
    let table = p.table();
    let live: Vec<usize> = (0..count)
        .filter(|&l| rows_of[l].iter().all(|&r| table[r] > ZERO_PROBABILITY))
        .collect();
    let mut row_map = vec![usize::MAX; table.len()];
    let mut rhs = Vec::new();
    for &l in &live {
        for &r in &rows_of[l] {
            if row_map[r] == usize::MAX {
                row_map[r] = rhs.len();
                rhs.push(table[r]);
            }
        }
    }
    let columns: Vec<Vec<(usize, f64)>> = live
        .iter()
        .map(|&l| rows_of[l].iter().map(|&r| (row_map[r], 1.0)).collect())
        .collect();

    let mut certificate = vec![0.0; count];
    let (local_weight, bound, iterations) = if live.is_empty() {
        (0.0, Some(0.0), 0)
    } else {
        let system = InequalitySystem::from_columns(rhs, &columns)?;
        let sol = solve_lp_with(&vec![1.0; live.len()], &system, options)?;
        for (&l, &q) in live.iter().zip(&sol.x) {
            certificate[l] = q;
        }
        (sol.objective, sol.dual_bound, sol.iterations)
    };
    let local_weight = local_weight.clamp(0.0, 1.0);
    Ok(ContentResult {
        local_weight,
        nonlocal_content: 1.0 - local_weight,
        certificate,
        local_weight_bound: bound,
        iterations,
    })
}

/// `local_weight ≥ 1 - tol`.
pub fn is_local(p: &JointDistribution, tol: f64) -> Result<bool> {
    if tol <= 0.0 {
        return Err(Error::Invalid(format!("tolerance {tol} must be positive")));
    }
    Ok(nonlocal_content(p)?.local_weight >= 1.0 - tol)
}
