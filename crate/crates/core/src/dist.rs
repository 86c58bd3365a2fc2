//! Outcome statistics `P(o|s) = Tr[ρ ⊗_k M^{(k)}_{o_k|s_k}]`.
//!
//! Settings strings `s ∈ {0,1}^N` and outcome strings `o ∈ {0..K-1}^N` are
//! encoded as mixed-radix integers with party 0 as the most significant
//! digit. Tables are computed by contracting the density matrix one party
//! at a time: applying a 2x2 operator to the leading qubit and tracing it
//! out halves the matrix dimension, so the whole table costs `O(N·d²)`
//! for two outcomes instead of a tensor product per entry.

use std::fmt::Write as _;

use crate::measure::{Povm, TwoOutcomePOVM};
use crate::qmat::{CMatrix, C64};
use crate::states::StateDensity;
use crate::{Error, Result};

/// Per-party pair of measurements, index 0 and 1 being the two settings.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementAssignment {
    parties: Vec<[Povm; 2]>,
    n_outcomes: usize,
}

impl MeasurementAssignment {
    pub fn new(parties: Vec<[Povm; 2]>) -> Result<Self> {
        let n_outcomes = parties
            .first()
            .map(|p| p[0].n_outcomes())
            .ok_or_else(|| Error::Invalid("assignment has no parties".into()))?;
        if parties
            .iter()
            .flat_map(|p| p.iter())
            .any(|m| m.n_outcomes() != n_outcomes)
        {
            return Err(Error::Invalid("mixed outcome cardinalities".into()));
        }
        Ok(Self { parties, n_outcomes })
    }

    /// Every party performs the same pair of measurements.
    pub fn uniform(n: usize, setting0: impl Into<Povm>, setting1: impl Into<Povm>) -> Result<Self> {
        let pair = [setting0.into(), setting1.into()];
        Self::new(vec![pair; n])
    }

    pub fn from_two_outcome(parties: Vec<[TwoOutcomePOVM; 2]>) -> Result<Self> {
        Self::new(
            parties
                .into_iter()
                .map(|[a, b]| [Povm::Two(a), Povm::Two(b)])
                .collect(),
        )
    }

    pub fn n_parties(&self) -> usize {
        self.parties.len()
    }

    pub fn n_outcomes(&self) -> usize {
        self.n_outcomes
    }

    pub fn party(&self, k: usize) -> &[Povm; 2] {
        &self.parties[k]
    }
}

/// Dense table of `P(o|s)`.
#[derive(Debug, Clone, PartialEq)]
pub struct JointDistribution {
    n_parties: usize,
    n_outcomes: usize,
    table: Vec<f64>,
}

impl JointDistribution {
    pub fn from_table(n_parties: usize, n_outcomes: usize, table: Vec<f64>) -> Result<Self> {
        if !(2..=3).contains(&n_outcomes) || n_parties == 0 {
            return Err(Error::Invalid(format!(
                "{n_parties} parties with {n_outcomes} outcomes"
            )));
        }
        let expected = (1usize << n_parties) * n_outcomes.pow(n_parties as u32);
        if table.len() != expected {
            return Err(Error::Dimension(format!(
                "table has {} entries, expected {expected}",
                table.len()
            )));
        }
        Ok(Self {
            n_parties,
            n_outcomes,
            table,
        })
    }

    pub fn n_parties(&self) -> usize {
        self.n_parties
    }

    pub fn n_outcomes(&self) -> usize {
        self.n_outcomes
    }

    pub fn n_settings(&self) -> usize {
        1 << self.n_parties
    }

    /// Number of outcome strings per settings string.
    pub fn n_outcome_strings(&self) -> usize {
        self.n_outcomes.pow(self.n_parties as u32)
    }

    pub fn table(&self) -> &[f64] {
        &self.table
    }

    pub fn index(&self, s: usize, o: usize) -> usize {
        s * self.n_outcome_strings() + o
    }

    pub fn prob(&self, s: usize, o: usize) -> f64 {
        self.table[self.index(s, o)]
    }

    /// `P(o|s)` from per-party digit slices.
    pub fn get(&self, settings: &[u8], outcomes: &[u8]) -> f64 {
        self.prob(encode(settings, 2), encode(outcomes, self.n_outcomes))
    }

    pub fn settings_row(&self, s: usize) -> &[f64] {
        let k = self.n_outcome_strings();
        &self.table[s * k..(s + 1) * k]
    }

    /// `λ·self + (1-λ)·other`.
    pub fn mix(&self, other: &Self, lambda: f64) -> Result<Self> {
        if (self.n_parties, self.n_outcomes) != (other.n_parties, other.n_outcomes) {
            return Err(Error::Dimension("mixing distributions of different shape".into()));
        }
        let table = self
            .table
            .iter()
            .zip(&other.table)
            .map(|(a, b)| lambda * a + (1.0 - lambda) * b)
            .collect();
        Ok(Self { table, ..*self })
    }

    /// Largest `|Σ_o P(o|s) - 1|` over settings strings.
    pub fn normalization_error(&self) -> f64 {
        (0..self.n_settings())
            .map(|s| (self.settings_row(s).iter().sum::<f64>() - 1.0).abs())
            .fold(0.0, f64::max)
    }

    /// Largest dependence of any single-party-removed marginal on the removed
    /// party's setting. Checking every "drop one party" marginal covers all
    /// subsets by induction.
    pub fn signalling_error(&self) -> f64 {
        let n = self.n_parties;
        let k = self.n_outcomes;
        let mut worst = 0.0f64;
        for party in 0..n {
            let s_bit = 1usize << (n - 1 - party);
            let o_stride = k.pow((n - 1 - party) as u32);
            for s in 0..self.n_settings() {
                if s & s_bit != 0 {
                    continue;
                }
                let s_other = s | s_bit;
                for o in 0..self.n_outcome_strings() {
                    if (o / o_stride) % k != 0 {
                        continue;
                    }
                    let marg = |ss: usize| -> f64 {
                        (0..k).map(|d| self.prob(ss, o + d * o_stride)).sum()
                    };
                    worst = worst.max((marg(s) - marg(s_other)).abs());
                }
            }
        }
        worst
    }

    /// Entries in range, normalized and non-signalling within `tol`.
    pub fn check_invariants(&self, tol: f64) -> Result<()> {
        if let Some(bad) = self
            .table
            .iter()
            .find(|&&p| !(-1e-12..=1.0 + 1e-12).contains(&p))
        {
            return Err(Error::Invalid(format!("probability {bad} out of range")));
        }
        let norm = self.normalization_error();
        if norm > tol {
            return Err(Error::Invalid(format!("normalization off by {norm:e}")));
        }
        let sig = self.signalling_error();
        if sig > tol {
            return Err(Error::Invalid(format!("signalling by {sig:e}")));
        }
        Ok(())
    }

    /// One line per `(s, o)`: settings string, outcome string and the
    /// probability to 17 significant digits.
    pub fn to_text(&self) -> String {
        let mut out = format!(
            "# n_parties={} n_outcomes={}\n",
            self.n_parties, self.n_outcomes
        );
        for s in 0..self.n_settings() {
            let sd = digits(s, 2, self.n_parties);
            for o in 0..self.n_outcome_strings() {
                let od = digits(o, self.n_outcomes, self.n_parties);
                let _ = writeln!(out, "{sd} {od} {:.16e}", self.prob(s, o));
            }
        }
        out
    }

    /// Parses [`to_text`](Self::to_text) output. Lines may come in any
    /// order; `#` starts a comment. The outcome count is taken from a
    /// `n_outcomes=` header when present, otherwise inferred from the
    /// number of outcome strings per setting.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut header_outcomes = None;
        let mut rows: Vec<(String, String, f64, usize)> = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let (content, comment) = match raw.find('#') {
                Some(p) => (&raw[..p], Some(&raw[p + 1..])),
                None => (raw, None),
            };
            if let Some(comment) = comment {
                for tok in comment.split_whitespace() {
                    if let Some(v) = tok.strip_prefix("n_outcomes=") {
                        header_outcomes = Some(v.parse::<usize>().map_err(|e| Error::Parse {
                            line: line_no,
                            msg: e.to_string(),
                        })?);
                    }
                }
            }
            let fields: Vec<&str> = content.split_whitespace().collect();
            if fields.is_empty() {
                continue;
            }
            if fields.len() != 3 {
                return Err(Error::Parse {
                    line: line_no,
                    msg: format!("expected 3 fields, found {}", fields.len()),
                });
            }
            let p: f64 = fields[2].parse().map_err(|_| Error::Parse {
                line: line_no,
                msg: format!("bad probability `{}`", fields[2]),
            })?;
            rows.push((fields[0].to_string(), fields[1].to_string(), p, line_no));
        }
        let first = rows.first().ok_or(Error::Parse {
            line: 0,
            msg: "no data lines".into(),
        })?;
        let n = first.0.len();
        if n == 0 || n > 16 {
            return Err(Error::Parse {
                line: first.3,
                msg: "bad settings string".into(),
            });
        }
        let n_outcomes = match header_outcomes {
            Some(k) => k,
            None => {
                let per_setting = rows.len() >> n;
                (2..=3)
                    .find(|k: &usize| k.pow(n as u32) == per_setting && per_setting << n == rows.len())
                    .ok_or(Error::Parse {
                        line: 0,
                        msg: format!("{} lines do not form a complete table", rows.len()),
                    })?
            }
        };
        let size = (1usize << n) * n_outcomes.pow(n as u32);
        let mut table = vec![f64::NAN; size];
        let per = n_outcomes.pow(n as u32);
        for (sd, od, p, line) in rows {
            let parse = |txt: &str, radix: usize| -> Result<usize> {
                if txt.len() != n {
                    return Err(Error::Parse {
                        line,
                        msg: format!("`{txt}` has wrong length"),
                    });
                }
                txt.chars().try_fold(0usize, |acc, ch| {
                    let d = ch.to_digit(10).map(|d| d as usize).filter(|&d| d < radix);
                    d.map(|d| acc * radix + d).ok_or(Error::Parse {
                        line,
                        msg: format!("bad digit in `{txt}`"),
                    })
                })
            };
            let idx = parse(&sd, 2)? * per + parse(&od, n_outcomes)?;
            if !table[idx].is_nan() {
                return Err(Error::Parse {
                    line,
                    msg: format!("duplicate entry {sd} {od}"),
                });
            }
            table[idx] = p;
        }
        if table.iter().any(|p| p.is_nan()) {
            return Err(Error::Parse {
                line: 0,
                msg: "table is incomplete".into(),
            });
        }
        Self::from_table(n, n_outcomes, table)
    }
}

/// Full correlators `ξ(s)` indexed by settings string.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelatorTable {
    n_parties: usize,
    xi: Vec<f64>,
}

impl CorrelatorTable {
    pub fn new(n_parties: usize, xi: Vec<f64>) -> Result<Self> {
        if n_parties == 0 || xi.len() != 1usize << n_parties {
            return Err(Error::Dimension(format!(
                "{} correlators for {n_parties} parties",
                xi.len()
            )));
        }
        Ok(Self { n_parties, xi })
    }

    pub fn n_parties(&self) -> usize {
        self.n_parties
    }

    pub fn values(&self) -> &[f64] {
        &self.xi
    }

    pub fn get(&self, s: usize) -> f64 {
        self.xi[s]
    }
}

fn encode(d: &[u8], radix: usize) -> usize {
    d.iter().fold(0, |acc, &x| acc * radix + x as usize)
}

fn digits(mut x: usize, radix: usize, n: usize) -> String {
    let mut v = vec![b'0'; n];
    for slot in v.iter_mut().rev() {
        *slot = b'0' + (x % radix) as u8;
        x /= radix;
    }
    String::from_utf8(v).expect("ascii")
}

type Op2 = [C64; 4];

fn op2(m: &CMatrix) -> Op2 {
    [m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)]]
}

/// `out_{rc} = Σ_{ab} M_{ba} ρ_{(a,r),(b,c)}`: apply `M` to the leading qubit
/// and trace it out.
fn contract_leading(rho: &[C64], dim: usize, m: &Op2, out: &mut [C64]) {
    let h = dim / 2;
    let (m00, m01, m10, m11) = (m[0], m[1], m[2], m[3]);
    for r in 0..h {
        let top = &rho[r * dim..r * dim + dim];
        let bot = &rho[(r + h) * dim..(r + h) * dim + dim];
        let dst = &mut out[r * h..r * h + h];
        for col in 0..h {
            dst[col] = m00 * top[col] + m10 * top[col + h] + m01 * bot[col] + m11 * bot[col + h];
        }
    }
}

/// Contracts `rho` against every combination of per-party operators.
/// `ops[k]` lists the choices for party `k`; the result is indexed by the
/// mixed-radix choice string with party 0 most significant.
fn contract_all(rho: &CMatrix, ops: &[Vec<Op2>]) -> Vec<f64> {
    let n = ops.len();
    let dim = rho.rows();
    let total: usize = ops.iter().map(Vec::len).product();
    let mut out = vec![0.0; total];
    let mut buffers: Vec<Vec<C64>> = (1..=n).map(|k| vec![C64::default(); (dim >> k) * (dim >> k)]).collect();

    fn recurse(
        level: usize,
        src: &[C64],
        dim: usize,
        ops: &[Vec<Op2>],
        buffers: &mut [Vec<C64>],
        prefix: usize,
        out: &mut [f64],
    ) {
        let (head, tail) = buffers.split_first_mut().expect("buffer per level");
        for (choice, m) in ops[level].iter().enumerate() {
            contract_leading(src, dim, m, head);
            let idx = prefix * ops[level].len() + choice;
            if level + 1 == ops.len() {
                out[idx] = head[0].re;
            } else {
                recurse(level + 1, head, dim / 2, ops, tail, idx, out);
            }
        }
    }

    recurse(0, rho.as_slice(), dim, ops, &mut buffers, 0, &mut out);
    out
}

fn check_shapes(state: &StateDensity, assignment: &MeasurementAssignment) -> Result<()> {
    if state.n_parties() != assignment.n_parties() {
        return Err(Error::Dimension(format!(
            "state has {} parties, assignment {}",
            state.n_parties(),
            assignment.n_parties()
        )));
    }
    Ok(())
}

/// `P(o|s)` for all settings and outcome strings.
pub fn joint_distribution(state: &StateDensity, assignment: &MeasurementAssignment) -> Result<JointDistribution> {
    check_shapes(state, assignment)?;
    let n = state.n_parties();
    let k = assignment.n_outcomes();
    // choice index for party j is s_j * k + o_j
    let ops: Vec<Vec<Op2>> = assignment
        .parties
        .iter()
        .map(|pair| {
            pair.iter()
                .flat_map(|m| m.elements().into_iter().map(op2))
                .collect()
        })
        .collect();
    let raw = contract_all(state.rho(), &ops);
    let per = k.pow(n as u32);
    let mut table = vec![0.0; raw.len()];
    for (choice, &p) in raw.iter().enumerate() {
        let mut rest = choice;
        let (mut s, mut o) = (0usize, 0usize);
        let mut s_w = 1usize;
        let mut o_w = 1usize;
        for _ in 0..n {
            let d = rest % (2 * k);
            rest /= 2 * k;
            s += (d / k) * s_w;
            o += (d % k) * o_w;
            s_w *= 2;
            o_w *= k;
        }
        table[s * per + o] = p;
    }
    JointDistribution::from_table(n, k, table)
}

/// `ξ(s) = Σ_o (-1)^{Σ_k o_k} P(o|s)` for two-outcome tables.
pub fn full_correlators(p: &JointDistribution) -> Result<CorrelatorTable> {
    if p.n_outcomes() != 2 {
        return Err(Error::Invalid("full correlators need two outcomes".into()));
    }
    let xi = (0..p.n_settings())
        .map(|s| {
            p.settings_row(s)
                .iter()
                .enumerate()
                .map(|(o, &pr)| if o.count_ones() % 2 == 0 { pr } else { -pr })
                .sum()
        })
        .collect();
    CorrelatorTable::new(p.n_parties(), xi)
}

/// Full correlators computed directly as `Tr[ρ ⊗_k (M_0 - M_1)]`, without
/// assembling the outcome table.
pub fn correlators(state: &StateDensity, assignment: &MeasurementAssignment) -> Result<CorrelatorTable> {
    check_shapes(state, assignment)?;
    if assignment.n_outcomes() != 2 {
        return Err(Error::Invalid("full correlators need two outcomes".into()));
    }
    let ops: Vec<Vec<Op2>> = assignment
        .parties
        .iter()
        .map(|pair| {
            pair.iter()
                .map(|m| {
                    let e = m.elements();
                    op2(&(e[0] - e[1]))
                })
                .collect()
        })
        .collect();
    CorrelatorTable::new(state.n_parties(), contract_all(state.rho(), &ops))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::{amplitude_damping_presets, efficiency_povm, spd_povm, BlochAxis};
    use crate::qmat::tensor_product;
    use crate::states::{damped_w_state, vacuum, w_state};
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn ideal_zx(n: usize) -> MeasurementAssignment {
        MeasurementAssignment::uniform(
            n,
            efficiency_povm(BlochAxis::z(), 1.0, 1.0).unwrap(),
            efficiency_povm(BlochAxis::x(), 1.0, 1.0).unwrap(),
        )
        .unwrap()
    }

    /// Brute-force `Tr[ρ ⊗ M]` with explicit tensor products.
    fn naive_joint(state: &StateDensity, a: &MeasurementAssignment) -> Vec<f64> {
        let n = a.n_parties();
        let k = a.n_outcomes();
        let per = k.pow(n as u32);
        let mut table = vec![0.0; (1 << n) * per];
        for s in 0..1usize << n {
            for o in 0..per {
                let mut factors = Vec::new();
                let mut rem = o;
                let mut digs = vec![0; n];
                for j in (0..n).rev() {
                    digs[j] = rem % k;
                    rem /= k;
                }
                for j in 0..n {
                    let sj = (s >> (n - 1 - j)) & 1;
                    factors.push(a.party(j)[sj].elements()[digs[j]].clone());
                }
                let op = tensor_product(&factors).unwrap();
                table[s * per + o] = (state.rho() * &op).trace().re;
            }
        }
        table
    }

    fn random_two_outcome(rng: &mut ChaCha8Rng) -> TwoOutcomePOVM {
        let axis = BlochAxis::new(rng.gen_range(0.0..3.2), rng.gen_range(-3.2..3.2));
        efficiency_povm(axis, rng.gen(), rng.gen()).unwrap()
    }

    #[test]
    fn w3_ideal_z_statistics() {
        let p = joint_distribution(&w_state(3).unwrap(), &ideal_zx(3)).unwrap();
        // brute force: |⟨o|W⟩|² is 1/3 on single-excitation strings
        for o in 0..8usize {
            let expected = if o.count_ones() == 1 { 1.0 / 3.0 } else { 0.0 };
            assert_abs_diff_eq!(p.prob(0, o), expected, epsilon = 1e-14);
        }
    }

    #[test]
    fn vacuum_statistics() {
        let p = joint_distribution(&vacuum(3).unwrap(), &ideal_zx(3)).unwrap();
        assert_abs_diff_eq!(p.get(&[0, 0, 0], &[0, 0, 0]), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn contraction_matches_naive_tensor_products() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for n in 1..=3 {
            let state = damped_w_state(n, 0.6).unwrap();
            let parties = (0..n)
                .map(|_| [random_two_outcome(&mut rng), random_two_outcome(&mut rng)])
                .collect();
            let a = MeasurementAssignment::from_two_outcome(parties).unwrap();
            let fast = joint_distribution(&state, &a).unwrap();
            let slow = naive_joint(&state, &a);
            for (x, y) in fast.table().iter().zip(&slow) {
                assert_abs_diff_eq!(x, y, epsilon = 1e-13);
            }
        }
        let three = MeasurementAssignment::uniform(
            2,
            crate::measure::lossy_threeoutcome_povm(BlochAxis::z(), 0.7).unwrap(),
            crate::measure::lossy_threeoutcome_povm(BlochAxis::x(), 0.4).unwrap(),
        )
        .unwrap();
        let s = w_state(2).unwrap();
        let fast = joint_distribution(&s, &three).unwrap();
        for (x, y) in fast.table().iter().zip(&naive_joint(&s, &three)) {
            assert_abs_diff_eq!(x, y, epsilon = 1e-13);
        }
    }

    #[test]
    fn normalization_and_non_signalling() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for trial in 0..40 {
            let n = 2 + trial % 3;
            let state = crate::states::atom_photon_state(rng.gen_range(-1.5..1.5), rng.gen(), n - 1).unwrap();
            let parties = (0..n)
                .map(|_| [random_two_outcome(&mut rng), random_two_outcome(&mut rng)])
                .collect();
            let a = MeasurementAssignment::from_two_outcome(parties).unwrap();
            joint_distribution(&state, &a).unwrap().check_invariants(1e-10).unwrap();
        }
    }

    #[test]
    fn correlators_w3_zzz() {
        let p = joint_distribution(&w_state(3).unwrap(), &ideal_zx(3)).unwrap();
        let xi = full_correlators(&p).unwrap();
        assert_abs_diff_eq!(xi.get(0), -1.0, epsilon = 1e-14);
    }

    #[test]
    fn correlator_product_state() {
        let s = vacuum(2).unwrap();
        let xi = full_correlators(&joint_distribution(&s, &ideal_zx(2)).unwrap()).unwrap();
        assert_abs_diff_eq!(xi.get(0), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn correlators_match_operator_form() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for n in 2..=4 {
            let state = crate::states::atom_photon_state(rng.gen_range(-1.5..1.5), rng.gen(), n - 1).unwrap();
            let parties: Vec<[TwoOutcomePOVM; 2]> = (0..n)
                .map(|_| [random_two_outcome(&mut rng), random_two_outcome(&mut rng)])
                .collect();
            let a = MeasurementAssignment::from_two_outcome(parties.clone()).unwrap();
            let from_table = full_correlators(&joint_distribution(&state, &a).unwrap()).unwrap();
            let direct = correlators(&state, &a).unwrap();
            for s in 0..1usize << n {
                let obs: Vec<CMatrix> = (0..n)
                    .map(|j| parties[j][(s >> (n - 1 - j)) & 1].observable())
                    .collect();
                let oracle = (state.rho() * &tensor_product(&obs).unwrap()).trace().re;
                assert_abs_diff_eq!(from_table.get(s), oracle, epsilon = 1e-12);
                assert_abs_diff_eq!(direct.get(s), oracle, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn three_outcome_correlators_rejected() {
        let a = MeasurementAssignment::uniform(
            2,
            crate::measure::lossy_threeoutcome_povm(BlochAxis::z(), 0.7).unwrap(),
            crate::measure::lossy_threeoutcome_povm(BlochAxis::x(), 0.4).unwrap(),
        )
        .unwrap();
        let p = joint_distribution(&w_state(2).unwrap(), &a).unwrap();
        assert!(full_correlators(&p).is_err());
    }

    #[test]
    fn shape_errors() {
        assert!(joint_distribution(&w_state(3).unwrap(), &ideal_zx(2)).is_err());
        let mixed = MeasurementAssignment::new(vec![[
            spd_povm(0.5).unwrap().into(),
            crate::measure::lossy_threeoutcome_povm(BlochAxis::x(), 0.4).unwrap().into(),
        ]]);
        assert!(mixed.is_err());
    }

    #[test]
    fn povm_and_channel_pictures_agree() {
        for n in 1..=5 {
            for &eta in &[0.3, 0.8] {
                let (z, x) = amplitude_damping_presets(eta).unwrap();
                let noisy = MeasurementAssignment::uniform(n, z, x).unwrap();
                let via_povm = joint_distribution(&w_state(n).unwrap(), &noisy).unwrap();
                let via_channel = joint_distribution(&damped_w_state(n, eta).unwrap(), &ideal_zx(n)).unwrap();
                for (a, b) in via_povm.table().iter().zip(via_channel.table()) {
                    assert_abs_diff_eq!(a, b, epsilon = 1e-11);
                }
            }
        }
    }

    #[test]
    fn permutation_covariance() {
        // swap parties 0 and 2 of a 3-party register
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let state = crate::states::atom_photon_state(0.7, 0.8, 2).unwrap();
        let perm = |i: usize| -> usize { ((i & 1) << 2) | (i & 2) | ((i >> 2) & 1) };
        let rho_p = CMatrix::from_fn(8, 8, |r, col| state.rho()[(perm(r), perm(col))]);
        let permuted = StateDensity::from_density(rho_p, 3, false).unwrap();
        let parties: Vec<[TwoOutcomePOVM; 2]> =
            (0..3).map(|_| [random_two_outcome(&mut rng), random_two_outcome(&mut rng)]).collect();
        let mut swapped = parties.clone();
        swapped.swap(0, 2);
        let p = joint_distribution(&state, &MeasurementAssignment::from_two_outcome(parties).unwrap()).unwrap();
        let q = joint_distribution(&permuted, &MeasurementAssignment::from_two_outcome(swapped).unwrap()).unwrap();
        for s in 0..8 {
            for o in 0..8 {
                assert_abs_diff_eq!(p.prob(s, o), q.prob(perm(s), perm(o)), epsilon = 1e-14);
            }
        }
    }

    #[test]
    fn text_round_trip() {
        let p = joint_distribution(&damped_w_state(3, 0.7).unwrap(), &ideal_zx(3)).unwrap();
        let back = JointDistribution::from_text(&p.to_text()).unwrap();
        assert_eq!(back, p);
        let stripped: String = p.to_text().lines().skip(1).map(|l| format!("{l}\n")).collect();
        assert_eq!(JointDistribution::from_text(&stripped).unwrap(), p);
        assert!(JointDistribution::from_text("000 000 0.5\n").is_err());
        assert!(JointDistribution::from_text("00 0x 0.5\n").is_err());
    }
}
