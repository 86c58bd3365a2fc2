//! Bell functionals on outcome tables and correlator tables.
//!
//! Setting 0 is the z-type measurement and setting 1 the x-type one.
//! Outcome 0 carries the value `+1`.

use crate::dist::{CorrelatorTable, JointDistribution};
use crate::{Error, Result};

/// Slack on `value > local_bound` before a violation is reported.
pub const VIOLATION_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BellResult {
    pub value: f64,
    pub local_bound: f64,
    pub algebraic_max: f64,
    pub violated: bool,
}

impl BellResult {
    pub fn new(value: f64, local_bound: f64, algebraic_max: f64) -> Self {
        Self {
            value,
            local_bound,
            algebraic_max,
            violated: value > local_bound + VIOLATION_TOL,
        }
    }

    /// `value - local_bound`.
    pub fn margin(&self) -> f64 {
        self.value - self.local_bound
    }
}

/// Cabello-type inequality for W-like correlations; local bound 0.
///
/// Positive terms: `P(0…0|z…z)` and the single-excitation events
/// `P(e_i|z…z)`. Negative terms: for each ordered pair `i ≠ j`, the event
/// `e_i` with parties `i, j` measuring x; then `P(0…0|x…x)` and
/// `P(1…1|x…x)`.
pub fn cabello_value(p: &JointDistribution) -> Result<BellResult> {
    let n = p.n_parties();
    if n < 3 {
        return Err(Error::Invalid(format!("cabello needs at least 3 parties, got {n}")));
    }
    if p.n_outcomes() != 2 {
        return Err(Error::Invalid("cabello needs two outcomes".into()));
    }
    let all_x = (1usize << n) - 1;
    let all_ones = all_x;
    let bit = |k: usize| 1usize << (n - 1 - k);

    let mut value = p.prob(0, 0);
    for i in 0..n {
        value += p.prob(0, bit(i));
    }
    for i in 0..n {
        for j in (0..n).filter(|&j| j != i) {
            value -= p.prob(bit(i) | bit(j), bit(i));
        }
    }
    value -= p.prob(all_x, 0) + p.prob(all_x, all_ones);
    Ok(BellResult::new(value, 0.0, 1.0))
}

/// Walsh–Hadamard transform `ξ̂(r) = 2^{-N} Σ_s (-1)^{r·s} ξ(s)`.
pub fn correlator_transform(c: &CorrelatorTable) -> Vec<f64> {
    let mut v = c.values().to_vec();
    let len = v.len();
    let mut h = 1;
    while h < len {
        for block in (0..len).step_by(2 * h) {
            for k in block..block + h {
                let (a, b) = (v[k], v[k + h]);
                v[k] = a + b;
                v[k + h] = a - b;
            }
        }
        h *= 2;
    }
    let norm = 1.0 / len as f64;
    v.iter_mut().for_each(|x| *x *= norm);
    v
}

/// Correlator criterion `Σ_r |ξ̂(r)| ≤ 1`, tight for full correlators in
/// the two-setting, two-outcome scenario.
pub fn wwwzb_value(c: &CorrelatorTable) -> BellResult {
    let value = correlator_transform(c).iter().map(|x| x.abs()).sum();
    let n = c.n_parties() as f64;
    BellResult::new(value, 1.0, 2f64.powf((n - 1.0) / 2.0))
}

/// `ξ'(s) = Π_k σ_k(s_k) · ξ(s ⊕ flips)`: the correlators after relabeling
/// settings (`flips`) and outcomes (`signs`, bit `2k + s_k` set flips the
/// sign of party `k` at setting `s_k`).
fn relabeled(c: &CorrelatorTable, flips: usize, signs: usize, s: usize) -> f64 {
    let n = c.n_parties();
    let mut sign = 1.0;
    for k in 0..n {
        let sk = (s >> (n - 1 - k)) & 1;
        if (signs >> (2 * k + sk)) & 1 == 1 {
            sign = -sign;
        }
    }
    sign * c.get(s ^ flips)
}

/// Tripartite Mermin functional `ξ(000) - ξ(011) - ξ(101) - ξ(110)`,
/// maximized in absolute value over setting and outcome relabelings.
/// Local bound 2, algebraic maximum 4.
pub fn mermin3_value(c: &CorrelatorTable) -> Result<BellResult> {
    if c.n_parties() != 3 {
        return Err(Error::Invalid(format!("mermin needs 3 parties, got {}", c.n_parties())));
    }
    let mut best = 0.0f64;
    for flips in 0..8 {
        for signs in 0..64 {
            let m = relabeled(c, flips, signs, 0b000)
                - relabeled(c, flips, signs, 0b011)
                - relabeled(c, flips, signs, 0b101)
                - relabeled(c, flips, signs, 0b110);
            best = best.max(m.abs());
        }
    }
    Ok(BellResult::new(best, 2.0, 4.0))
}

/// CHSH, maximized over which of the four correlators carries the minus
/// sign and over the overall sign.
pub fn chsh_value(c: &CorrelatorTable) -> Result<BellResult> {
    if c.n_parties() != 2 {
        return Err(Error::Invalid(format!("chsh needs 2 parties, got {}", c.n_parties())));
    }
    let xi = c.values();
    let total: f64 = xi.iter().sum();
    let value = xi.iter().map(|x| (total - 2.0 * x).abs()).fold(0.0, f64::max);
    Ok(BellResult::new(value, 2.0, 4.0))
}

/// Lower bound on the nonlocal content implied by a single functional:
/// `max(0, (value - local) / (max - local))`.
pub fn nonlocal_content_lower_bound(r: &BellResult) -> Result<f64> {
    let span = r.algebraic_max - r.local_bound;
    if span <= 0.0 {
        return Err(Error::Invalid("degenerate functional".into()));
    }
    Ok(((r.value - r.local_bound) / span).max(0.0))
}
