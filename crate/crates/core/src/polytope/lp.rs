//! Revised simplex for `max c·x  s.t.  A x ≤ b, x ≥ 0`.
//!
//! The basis inverse is kept dense and column-major and updated by
//! elementary row operations; it is rebuilt from scratch every
//! `refactor_interval` pivots and before the solution is accepted. Rows
//! with `b < 0` are negated and start with an artificial variable, which a
//! first phase drives to zero. Pricing uses devex reference weights, switching to
//! Bland's rule after a run of degenerate pivots so the method cannot
//! cycle. The ratio test is the two-pass Harris test.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LpError {
    #[error("linear program is unbounded")]
    Unbounded,
    #[error("linear program is infeasible (phase-one residual {residual:e})")]
    Infeasible { residual: f64 },
    #[error("iteration cap of {0} reached")]
    IterationLimit(usize),
    #[error("basis matrix became singular")]
    Singular,
    #[error("inconsistent problem dimensions: {0}")]
    Dimension(String),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LpOptions {
    /// Allowed constraint violation of the returned point.
    pub feasibility_tol: f64,
    /// Reduced costs below this count as non-improving.
    pub optimality_tol: f64,
    /// Smallest pivot element accepted by the ratio test.
    pub pivot_tol: f64,
    pub max_iterations: usize,
    pub refactor_interval: usize,
    /// Consecutive degenerate pivots before switching to Bland's rule.
    pub stall_limit: usize,
}

impl Default for LpOptions {
    fn default() -> Self {
        Self {
            feasibility_tol: 1e-9,
            optimality_tol: 1e-8,
            pivot_tol: 1e-9,
            max_iterations: 200_000,
            refactor_interval: 1000,
            stall_limit: 64,
        }
    }
}

/// `A x ≤ b` with `A` stored by columns.
#[derive(Debug, Clone, PartialEq)]
pub struct InequalitySystem {
    n_rows: usize,
    rhs: Vec<f64>,
    col_start: Vec<usize>,
    row_index: Vec<usize>,
    value: Vec<f64>,
}

impl InequalitySystem {
    /// `columns[j]` lists the `(row, coefficient)` entries of variable `j`.
    pub fn from_columns(rhs: Vec<f64>, columns: &[Vec<(usize, f64)>]) -> Result<Self, LpError> {
        let n_rows = rhs.len();
        let mut col_start = Vec::with_capacity(columns.len() + 1);
        let mut row_index = Vec::new();
        let mut value = Vec::new();
        col_start.push(0);
        for col in columns {
            for &(r, v) in col {
                if r >= n_rows {
                    return Err(LpError::Dimension(format!("row {r} of {n_rows}")));
                }
                if v != 0.0 {
                    row_index.push(r);
                    value.push(v);
                }
            }
            col_start.push(row_index.len());
        }
        Ok(Self {
            n_rows,
            rhs,
            col_start,
            row_index,
            value,
        })
    }

    /// Dense row-major constructor, convenient for small systems.
    pub fn from_rows(rows: &[Vec<f64>], rhs: Vec<f64>) -> Result<Self, LpError> {
        if rows.len() != rhs.len() {
            return Err(LpError::Dimension("row count differs from rhs length".into()));
        }
        let n_cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != n_cols) {
            return Err(LpError::Dimension("ragged rows".into()));
        }
        let columns: Vec<Vec<(usize, f64)>> = (0..n_cols)
            .map(|j| rows.iter().enumerate().map(|(i, r)| (i, r[j])).collect())
            .collect();
        Self::from_columns(rhs, &columns)
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.col_start.len() - 1
    }

    pub fn rhs(&self) -> &[f64] {
        &self.rhs
    }

    pub fn column(&self, j: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let range = self.col_start[j]..self.col_start[j + 1];
        self.row_index[range.clone()]
            .iter()
            .copied()
            .zip(self.value[range].iter().copied())
    }

    /// `A x`.
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.n_rows];
        for (j, &xj) in x.iter().enumerate() {
            if xj != 0.0 {
                for (r, v) in self.column(j) {
                    out[r] += v * xj;
                }
            }
        }
        out
    }

    /// `Aᵀ y`.
    pub fn apply_transpose(&self, y: &[f64]) -> Vec<f64> {
        (0..self.n_cols())
            .map(|j| self.column(j).map(|(r, v)| v * y[r]).sum())
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub objective: f64,
    pub x: Vec<f64>,
    /// Row duals, nonnegative at an optimum.
    pub duals: Vec<f64>,
    /// `b·y` for a dual-feasible rescaling of the clipped duals, when one
    /// exists; an upper bound on the optimum independent of the primal.
    pub dual_bound: Option<f64>,
    pub iterations: usize,
}

pub fn solve_lp(objective: &[f64], system: &InequalitySystem) -> Result<LpSolution, LpError> {
    solve_lp_with(objective, system, &LpOptions::default())
}

pub fn solve_lp_with(
    objective: &[f64],
    system: &InequalitySystem,
    options: &LpOptions,
) -> Result<LpSolution, LpError> {
    if objective.len() != system.n_cols() {
        return Err(LpError::Dimension(format!(
            "{} objective coefficients for {} variables",
            objective.len(),
            system.n_cols()
        )));
    }
    if system.rhs.iter().chain(objective).any(|v| !v.is_finite()) {
        return Err(LpError::Dimension("non-finite input".into()));
    }
    let mut s = Simplex::new(objective, system, *options);
    s.run()?;
    Ok(s.solution())
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Phase {
    One,
    Two,
}

struct Simplex<'a> {
    sys: &'a InequalitySystem,
    objective: &'a [f64],
    opts: LpOptions,
    m: usize,
    n: usize,
    /// `-1` on negated rows.
    sign: Vec<f64>,
    rhs: Vec<f64>,
    art_row: Vec<usize>,
    basis: Vec<usize>,
    /// Basis position of every variable, `usize::MAX` when nonbasic.
    pos: Vec<usize>,
    /// Column-major `B⁻¹`.
    binv: Vec<f64>,
    xb: Vec<f64>,
    cost: Vec<f64>,
    y: Vec<f64>,
    /// Devex reference weights for pricing.
    weights: Vec<f64>,
    phase: Phase,
    iterations: usize,
    since_refactor: usize,
}

impl<'a> Simplex<'a> {
    fn new(objective: &'a [f64], sys: &'a InequalitySystem, opts: LpOptions) -> Self {
        let m = sys.n_rows;
        let n = sys.n_cols();
        let sign: Vec<f64> = sys.rhs.iter().map(|&b| if b < 0.0 { -1.0 } else { 1.0 }).collect();
        let rhs: Vec<f64> = sys.rhs.iter().map(|b| b.abs()).collect();
        let art_row: Vec<usize> = (0..m).filter(|&i| sign[i] < 0.0).collect();
        let total = n + m + art_row.len();
        let mut basis = Vec::with_capacity(m);
        let mut pos = vec![usize::MAX; total];
        let mut next_art = 0;
        for i in 0..m {
            let var = if sign[i] < 0.0 {
                next_art += 1;
                n + m + next_art - 1
            } else {
                n + i
            };
            pos[var] = i;
            basis.push(var);
        }
        let mut binv = vec![0.0; m * m];
        for i in 0..m {
            binv[i * m + i] = 1.0;
        }
        let xb = rhs.clone();
        Self {
            sys,
            objective,
            opts,
            m,
            n,
            sign,
            rhs,
            art_row,
            basis,
            pos,
            binv,
            xb,
            cost: vec![0.0; total],
            y: vec![0.0; m],
            weights: vec![1.0; n + m],
            phase: Phase::One,
            iterations: 0,
            since_refactor: 0,
        }
    }

    fn n_total(&self) -> usize {
        self.n + self.m + self.art_row.len()
    }

    fn is_artificial(&self, j: usize) -> bool {
        j >= self.n + self.m
    }

    fn for_column(&self, j: usize, mut f: impl FnMut(usize, f64)) {
        if j < self.n {
            for (r, v) in self.sys.column(j) {
                f(r, v * self.sign[r]);
            }
        } else if j < self.n + self.m {
            let r = j - self.n;
            f(r, self.sign[r]);
        } else {
            f(self.art_row[j - self.n - self.m], 1.0);
        }
    }

    fn set_phase(&mut self, phase: Phase) {
        self.phase = phase;
        self.weights.iter_mut().for_each(|w| *w = 1.0);
        self.cost.iter_mut().for_each(|c| *c = 0.0);
        match phase {
            Phase::One => {
                for j in self.n + self.m..self.n_total() {
                    self.cost[j] = -1.0;
                }
            }
            Phase::Two => self.cost[..self.n].copy_from_slice(self.objective),
        }
        self.recompute_duals();
    }

    /// `y = c_Bᵀ B⁻¹`.
    fn recompute_duals(&mut self) {
        let m = self.m;
        for c in 0..m {
            let col = &self.binv[c * m..(c + 1) * m];
            self.y[c] = self
                .basis
                .iter()
                .zip(col)
                .map(|(&var, &b)| self.cost[var] * b)
                .sum();
        }
    }

    fn reduced_cost(&self, j: usize) -> f64 {
        let mut d = self.cost[j];
        self.for_column(j, |r, v| d -= self.y[r] * v);
        d
    }

    fn allowed_to_enter(&self, j: usize) -> bool {
        self.pos[j] == usize::MAX && !self.is_artificial(j)
    }

    fn price(&self, bland: bool) -> Option<(usize, f64)> {
        let tol = self.opts.optimality_tol;
        let mut best: Option<(usize, f64)> = None;
        for j in 0..self.n + self.m {
            if !self.allowed_to_enter(j) {
                continue;
            }
            let d = self.reduced_cost(j);
            if d > tol {
                if bland {
                    return Some((j, d));
                }
                let score = d * d / self.weights[j];
                if best.is_none_or(|(_, bs)| score > bs) {
                    best = Some((j, score));
                }
            }
        }
        best.map(|(j, _)| (j, self.reduced_cost(j)))
    }

    /// `u = B⁻¹ a_j`.
    fn ftran(&self, j: usize) -> Vec<f64> {
        let m = self.m;
        let mut u = vec![0.0; m];
        self.for_column(j, |r, v| {
            let col = &self.binv[r * m..(r + 1) * m];
            for (ui, bi) in u.iter_mut().zip(col) {
                *ui += v * bi;
            }
        });
        u
    }

    /// Leaving basis position, or `None` when the direction is unbounded.
    fn ratio_test(&self, u: &[f64], bland: bool) -> Option<usize> {
        let ptol = self.opts.pivot_tol;
        let ftol = self.opts.feasibility_tol;
        if self.phase == Phase::Two {
            // a basic artificial must stay at zero, so any pivot on it is blocking
            if let Some(r) = (0..self.m)
                .filter(|&i| self.is_artificial(self.basis[i]) && u[i].abs() > ptol)
                .max_by(|&a, &b| u[a].abs().total_cmp(&u[b].abs()))
            {
                return Some(r);
            }
        }
        if bland {
            let mut best: Option<(usize, f64)> = None;
            for i in (0..self.m).filter(|&i| u[i] > ptol) {
                let ratio = self.xb[i].max(0.0) / u[i];
                best = match best {
                    None => Some((i, ratio)),
                    Some((bi, br)) => {
                        if ratio < br - 1e-14
                            || (ratio <= br + 1e-14 && self.basis[i] < self.basis[bi])
                        {
                            Some((i, ratio))
                        } else {
                            Some((bi, br))
                        }
                    }
                };
            }
            return best.map(|b| b.0);
        }
        let bound = (0..self.m)
            .filter(|&i| u[i] > ptol)
            .map(|i| (self.xb[i].max(0.0) + ftol) / u[i])
            .fold(f64::INFINITY, f64::min);
        if bound.is_infinite() {
            return None;
        }
        (0..self.m)
            .filter(|&i| u[i] > ptol && self.xb[i].max(0.0) / u[i] <= bound)
            .max_by(|&a, &b| u[a].total_cmp(&u[b]))
    }

    fn pivot(&mut self, enter: usize, r: usize, u: &[f64], d_enter: f64) {
        let m = self.m;
        let ur = u[r];
        let theta = self.xb[r].max(0.0) / ur;

        // duals and devex weights use the row of the old inverse
        let rho: Vec<f64> = (0..m).map(|c| self.binv[c * m + r]).collect();
        let scale = d_enter / ur;
        for (y, &f) in self.y.iter_mut().zip(&rho) {
            *y += scale * f;
        }
        let w_enter = self.weights[enter];
        for j in 0..self.n + self.m {
            if j == enter || self.pos[j] != usize::MAX {
                continue;
            }
            let mut alpha = 0.0;
            self.for_column(j, |row, v| alpha += rho[row] * v);
            if alpha != 0.0 {
                let ratio = alpha / ur;
                let cand = ratio * ratio * w_enter;
                if cand > self.weights[j] {
                    self.weights[j] = cand;
                }
            }
        }
        let leave_var = self.basis[r];
        if leave_var < self.weights.len() {
            self.weights[leave_var] = (w_enter / (ur * ur)).max(1.0);
        }

        for (xi, ui) in self.xb.iter_mut().zip(u) {
            *xi -= theta * ui;
        }
        self.xb[r] = theta;

        let nz: Vec<usize> = (0..m).filter(|&i| u[i] != 0.0).collect();
        for c in 0..m {
            let col = &mut self.binv[c * m..(c + 1) * m];
            let f = col[r];
            if f == 0.0 {
                continue;
            }
            let g = f / ur;
            for &i in &nz {
                col[i] -= u[i] * g;
            }
            col[r] = g;
        }

        let leave = self.basis[r];
        self.pos[leave] = usize::MAX;
        self.pos[enter] = r;
        self.basis[r] = enter;
        self.iterations += 1;
        self.since_refactor += 1;
    }

    /// Rebuilds `B⁻¹` by Gauss–Jordan elimination with partial pivoting.
    fn refactor(&mut self) -> Result<(), LpError> {
        let m = self.m;
        let mut a = vec![0.0; m * m];
        for (p, &var) in self.basis.iter().enumerate() {
            self.for_column(var, |r, v| a[r * m + p] = v);
        }
        let mut inv = vec![0.0; m * m];
        for i in 0..m {
            inv[i * m + i] = 1.0;
        }
        let mut used = vec![false; m];
        let mut pivot_row = vec![0usize; m];
        for p in 0..m {
            let mut best = usize::MAX;
            let mut best_abs = 0.0;
            for i in 0..m {
                let v = a[i * m + p].abs();
                if !used[i] && v > best_abs {
                    best = i;
                    best_abs = v;
                }
            }
            if best_abs < 1e-9 {
                // dependent column: swap in the slack of an uncovered row,
                // expressed in the partially eliminated coordinates
                let r = (0..m)
                    .find(|&r| !used[r] && self.pos[self.n + r] == usize::MAX)
                    .ok_or(LpError::Singular)?;
                let sgn = self.sign[r];
                for i in 0..m {
                    a[i * m + p] = sgn * inv[i * m + r];
                }
                let old = self.basis[p];
                self.pos[old] = usize::MAX;
                self.basis[p] = self.n + r;
                self.pos[self.n + r] = p;
                best = r;
            }
            used[best] = true;
            pivot_row[p] = best;
            let piv = a[best * m + p];
            let pa: Vec<f64> = a[best * m..(best + 1) * m].iter().map(|v| v / piv).collect();
            let pi: Vec<f64> = inv[best * m..(best + 1) * m].iter().map(|v| v / piv).collect();
            a[best * m..(best + 1) * m].copy_from_slice(&pa);
            inv[best * m..(best + 1) * m].copy_from_slice(&pi);
            let nz_a: Vec<usize> = (p..m).filter(|&k| pa[k] != 0.0).collect();
            let nz_i: Vec<usize> = (0..m).filter(|&k| pi[k] != 0.0).collect();
            for i in 0..m {
                if i == best {
                    continue;
                }
                let f = a[i * m + p];
                if f == 0.0 {
                    continue;
                }
                for &k in &nz_a {
                    a[i * m + k] -= f * pa[k];
                }
                for &k in &nz_i {
                    inv[i * m + k] -= f * pi[k];
                }
            }
        }
        // row p of B⁻¹ is row pivot_row[p] of `inv`
        for (p, &src) in pivot_row.iter().enumerate() {
            for c in 0..m {
                self.binv[c * m + p] = inv[src * m + c];
            }
        }
        for i in 0..m {
            self.xb[i] = (0..m).map(|c| self.binv[c * m + i] * self.rhs[c]).sum();
        }
        self.recompute_duals();
        self.since_refactor = 0;
        Ok(())
    }

    /// Iterates the current phase to optimality.
    fn optimize(&mut self) -> Result<(), LpError> {
        let mut degenerate_run = 0;
        loop {
            if self.iterations >= self.opts.max_iterations {
                return Err(LpError::IterationLimit(self.opts.max_iterations));
            }
            if self.since_refactor >= self.opts.refactor_interval {
                self.refactor()?;
            }
            let bland = degenerate_run >= self.opts.stall_limit;
            let Some((enter, d)) = self.price(bland) else {
                // accept only if optimal with a freshly built inverse
                if self.since_refactor == 0 {
                    return Ok(());
                }
                self.refactor()?;
                if self.price(false).is_none() {
                    return Ok(());
                }
                continue;
            };
            let u = self.ftran(enter);
            let Some(r) = self.ratio_test(&u, bland) else {
                return Err(LpError::Unbounded);
            };
            let step = self.xb[r].max(0.0) / u[r];
            if step * d <= 1e-14 {
                degenerate_run += 1;
            } else {
                degenerate_run = 0;
            }
            self.pivot(enter, r, &u, d);
        }
    }

    fn primal_violation(&self) -> f64 {
        self.xb.iter().map(|&x| (-x).max(0.0)).fold(0.0, f64::max)
    }

    fn run(&mut self) -> Result<(), LpError> {
        let scale = 1.0 + self.rhs.iter().fold(0.0f64, |a, &b| a.max(b));
        if !self.art_row.is_empty() {
            self.set_phase(Phase::One);
            self.optimize()?;
            let residual: f64 = self
                .basis
                .iter()
                .zip(&self.xb)
                .filter(|(&v, _)| self.is_artificial(v))
                .map(|(_, &x)| x.max(0.0))
                .sum();
            if residual > self.opts.feasibility_tol * scale {
                return Err(LpError::Infeasible { residual });
            }
        }
        self.set_phase(Phase::Two);
        for _ in 0..8 {
            self.optimize()?;
            if self.primal_violation() <= self.opts.feasibility_tol * scale {
                return Ok(());
            }
            // drift pushed a basic variable negative; restart from the
            // refactored point with a phase-one style repair
            self.repair()?;
        }
        Err(LpError::Singular)
    }

    /// Clears small negative basic values by pivoting them out.
    fn repair(&mut self) -> Result<(), LpError> {
        let tol = self.opts.feasibility_tol;
        for x in self.xb.iter_mut() {
            if *x < 0.0 && *x > -tol * 1e3 {
                *x = 0.0;
            }
        }
        if self.primal_violation() > 0.0 {
            return Err(LpError::Infeasible {
                residual: self.primal_violation(),
            });
        }
        Ok(())
    }

    fn solution(&self) -> LpSolution {
        let mut x = vec![0.0; self.n];
        for (i, &var) in self.basis.iter().enumerate() {
            if var < self.n {
                x[var] = self.xb[i].max(0.0);
            }
        }
        let objective = x.iter().zip(self.objective).map(|(a, b)| a * b).sum();
        let duals: Vec<f64> = self.y.iter().zip(&self.sign).map(|(y, s)| y * s).collect();
        LpSolution {
            objective,
            dual_bound: dual_bound(self.objective, self.sys, &duals),
            duals,
            x,
            iterations: self.iterations,
        }
    }
}

/// Weak-duality bound from `y⁺ = max(y, 0)` scaled until `Aᵀ(t·y⁺) ≥ c`.
fn dual_bound(objective: &[f64], sys: &InequalitySystem, duals: &[f64]) -> Option<f64> {
    let yp: Vec<f64> = duals.iter().map(|y| y.max(0.0)).collect();
    let aty = sys.apply_transpose(&yp);
    let mut t = 1.0f64;
    for (&cj, &aj) in objective.iter().zip(&aty) {
        if cj > 0.0 {
            if aj <= 0.0 {
                return None;
            }
            t = t.max(cj / aj);
        }
    }
    if objective.iter().zip(&aty).any(|(&cj, &aj)| t * aj < cj) {
        return None;
    }
    Some(t * sys.rhs.iter().zip(&yp).map(|(b, y)| b * y).sum::<f64>())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn solve(c: &[f64], rows: &[Vec<f64>], b: &[f64]) -> Result<LpSolution, LpError> {
        solve_lp(c, &InequalitySystem::from_rows(rows, b.to_vec()).unwrap())
    }

    #[test]
    fn single_variable() {
        let s = solve(&[1.0], &[vec![1.0]], &[3.0]).unwrap();
        assert_abs_diff_eq!(s.objective, 3.0, epsilon = 1e-12);
    }

    #[test]
    fn simplex_face() {
        let s = solve(&[1.0, 1.0], &[vec![1.0, 1.0]], &[1.0]).unwrap();
        assert_abs_diff_eq!(s.objective, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(s.dual_bound.unwrap(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn textbook_problem() {
        // max 3x + 5y, x ≤ 4, 2y ≤ 12, 3x + 2y ≤ 18 → 36 at (2, 6)
        let s = solve(
            &[3.0, 5.0],
            &[vec![1.0, 0.0], vec![0.0, 2.0], vec![3.0, 2.0]],
            &[4.0, 12.0, 18.0],
        )
        .unwrap();
        assert_abs_diff_eq!(s.objective, 36.0, epsilon = 1e-10);
        assert_abs_diff_eq!(s.x[0], 2.0, epsilon = 1e-10);
        assert_abs_diff_eq!(s.x[1], 6.0, epsilon = 1e-10);
    }

    #[test]
    fn negative_rhs_needs_phase_one() {
        // max -x - y with x + y ≥ 2 (written -x - y ≤ -2), x ≤ 3
        let s = solve(&[-1.0, -1.0], &[vec![-1.0, -1.0], vec![1.0, 0.0]], &[-2.0, 3.0]).unwrap();
        assert_abs_diff_eq!(s.objective, -2.0, epsilon = 1e-10);
    }

    #[test]
    fn infeasible_and_unbounded() {
        assert!(matches!(
            solve(&[1.0], &[vec![1.0], vec![-1.0]], &[1.0, -2.0]),
            Err(LpError::Infeasible { .. })
        ));
        assert_eq!(solve(&[1.0, 0.0], &[vec![-1.0, 1.0]], &[1.0]), Err(LpError::Unbounded));
        assert!(matches!(
            solve_lp(&[1.0, 2.0], &InequalitySystem::from_rows(&[vec![1.0]], vec![1.0]).unwrap()),
            Err(LpError::Dimension(_))
        ));
    }

    #[test]
    fn degenerate_problem_terminates() {
        // classic cycling example under naive Dantzig pricing
        let rows = vec![
            vec![0.5, -5.5, -2.5, 9.0],
            vec![0.5, -1.5, -0.5, 1.0],
            vec![1.0, 0.0, 0.0, 0.0],
        ];
        let s = solve(&[10.0, -57.0, -9.0, -24.0], &rows, &[0.0, 0.0, 1.0]).unwrap();
        assert_abs_diff_eq!(s.objective, 1.0, epsilon = 1e-9);
    }

    /// Enumerates all basic solutions of a tiny system as an oracle.
    fn brute_force(c: &[f64], rows: &[Vec<f64>], b: &[f64]) -> Option<f64> {
        let n = c.len();
        let m = rows.len();
        let mut best: Option<f64> = None;
        // box the problem so vertices are finite: add x_j ≤ 10
        let mut all_rows = rows.to_vec();
        let mut all_b = b.to_vec();
        for j in 0..n {
            let mut r = vec![0.0; n];
            r[j] = 1.0;
            all_rows.push(r);
            all_b.push(10.0);
        }
        for j in 0..n {
            let mut r = vec![0.0; n];
            r[j] = -1.0;
            all_rows.push(r);
            all_b.push(0.0);
        }
        let total = m + 2 * n;
        let mut idx: Vec<usize> = (0..n).collect();
        loop {
            // solve the n tight constraints
            let mut a: Vec<Vec<f64>> = idx.iter().map(|&i| {
                let mut r = all_rows[i].clone();
                r.push(all_b[i]);
                r
            }).collect();
            let mut ok = true;
            for col in 0..n {
                let p = (col..n).max_by(|&x, &y| a[x][col].abs().total_cmp(&a[y][col].abs())).unwrap();
                if a[p][col].abs() < 1e-12 {
                    ok = false;
                    break;
                }
                a.swap(col, p);
                for r in 0..n {
                    if r != col {
                        let f = a[r][col] / a[col][col];
                        for k in col..=n {
                            a[r][k] -= f * a[col][k];
                        }
                    }
                }
            }
            if ok {
                let x: Vec<f64> = (0..n).map(|i| a[i][n] / a[i][i]).collect();
                let feasible = all_rows.iter().zip(&all_b).all(|(r, &bi)| {
                    r.iter().zip(&x).map(|(p, q)| p * q).sum::<f64>() <= bi + 1e-9
                });
                if feasible {
                    let v: f64 = c.iter().zip(&x).map(|(p, q)| p * q).sum();
                    best = Some(best.map_or(v, |bv: f64| bv.max(v)));
                }
            }
            // next combination
            let mut k = n;
            loop {
                if k == 0 {
                    return best;
                }
                k -= 1;
                if idx[k] < total - n + k {
                    idx[k] += 1;
                    for t in k + 1..n {
                        idx[t] = idx[t - 1] + 1;
                    }
                    break;
                }
            }
        }
    }

    #[test]
    fn random_programs_match_vertex_enumeration() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..200 {
            let n = rng.gen_range(1..=3);
            let m = rng.gen_range(1..=4);
            let c: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..2.0)).collect();
            let rows: Vec<Vec<f64>> = (0..m)
                .map(|_| (0..n).map(|_| rng.gen_range(-1.0..2.0)).collect())
                .collect();
            let b: Vec<f64> = (0..m).map(|_| rng.gen_range(-0.5..3.0)).collect();
            // the box keeps the oracle finite; give the solver the same box
            let mut rows_boxed = rows.clone();
            let mut b_boxed = b.clone();
            for j in 0..n {
                let mut r = vec![0.0; n];
                r[j] = 1.0;
                rows_boxed.push(r);
                b_boxed.push(10.0);
            }
            let oracle = brute_force(&c, &rows, &b);
            let got = solve(&c, &rows_boxed, &b_boxed);
            match (oracle, got) {
                (Some(v), Ok(s)) => {
                    assert_abs_diff_eq!(s.objective, v, epsilon = 1e-8);
                    let ax = InequalitySystem::from_rows(&rows_boxed, b_boxed.clone()).unwrap().apply(&s.x);
                    for (lhs, rhs) in ax.iter().zip(&b_boxed) {
                        assert!(lhs <= &(rhs + 1e-9));
                    }
                    if let Some(bound) = s.dual_bound {
                        assert!(bound >= v - 1e-8);
                    }
                }
                (None, Err(LpError::Infeasible { .. })) => {}
                (o, g) => panic!("oracle {o:?} vs solver {g:?}"),
            }
        }
    }
}
