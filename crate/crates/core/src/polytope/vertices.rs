//! Deterministic local strategies.

use crate::dist::JointDistribution;
use crate::{Error, Result};

pub const VERTEX_CAP: u128 = 1_000_000;

/// Party `k` answers `outcomes[k][s_k]` when given setting `s_k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LocalVertex {
    n_outcomes: usize,
    outcomes: Vec<[u8; 2]>,
}

impl LocalVertex {
    pub fn new(n_outcomes: usize, outcomes: Vec<[u8; 2]>) -> Result<Self> {
        if outcomes.iter().flatten().any(|&o| o as usize >= n_outcomes) {
            return Err(Error::Invalid("outcome label out of range".into()));
        }
        Ok(Self {
            n_outcomes,
            outcomes,
        })
    }

    /// Vertex number `index` in mixed radix, party 0 most significant and
    /// each party digit encoding `o₀·K + o₁`.
    pub fn from_index(n_parties: usize, n_outcomes: usize, mut index: usize) -> Self {
        let k = n_outcomes;
        let mut outcomes = vec![[0u8; 2]; n_parties];
        for slot in outcomes.iter_mut().rev() {
            let d = index % (k * k);
            index /= k * k;
            *slot = [(d / k) as u8, (d % k) as u8];
        }
        Self {
            n_outcomes,
            outcomes,
        }
    }

    pub fn n_parties(&self) -> usize {
        self.outcomes.len()
    }

    pub fn outcome(&self, party: usize, setting: usize) -> u8 {
        self.outcomes[party][setting]
    }

    /// Encoded outcome string produced under settings string `s`.
    pub fn response(&self, s: usize) -> usize {
        let n = self.n_parties();
        (0..n).fold(0, |acc, k| {
            acc * self.n_outcomes + self.outcomes[k][(s >> (n - 1 - k)) & 1] as usize
        })
    }

    /// The induced 0/1 table `D_λ(o|s)`.
    pub fn distribution(&self) -> JointDistribution {
        let n = self.n_parties();
        let per = self.n_outcomes.pow(n as u32);
        let mut table = vec![0.0; (1 << n) * per];
        for s in 0..1usize << n {
            table[s * per + self.response(s)] = 1.0;
        }
        JointDistribution::from_table(n, self.n_outcomes, table).expect("consistent shape")
    }
}

/// `(K²)^N`.
pub fn vertex_count(n_parties: usize, n_outcomes: usize) -> u128 {
    ((n_outcomes * n_outcomes) as u128).saturating_pow(n_parties as u32)
}

pub(crate) fn check_scenario(n_parties: usize, n_outcomes: usize) -> Result<usize> {
    if n_parties < 2 || !(2..=3).contains(&n_outcomes) {
        return Err(Error::Invalid(format!(
            "{n_parties} parties with {n_outcomes} outcomes"
        )));
    }
    let count = vertex_count(n_parties, n_outcomes);
    if count > VERTEX_CAP {
        return Err(Error::TooLarge {
            vertices: count,
            cap: VERTEX_CAP,
        });
    }
    Ok(count as usize)
}

pub fn enumerate_vertices(n_parties: usize, n_outcomes: usize) -> Result<Vec<LocalVertex>> {
    let count = check_scenario(n_parties, n_outcomes)?;
    Ok((0..count)
        .map(|i| LocalVertex::from_index(n_parties, n_outcomes, i))
        .collect())
}
