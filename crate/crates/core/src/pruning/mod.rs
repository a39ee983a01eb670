//! Path pruning: choosing `L` survivors out of `2L` candidates.
//!
//! Candidate `2l − 1` extends existing path `l` with bit 0 and candidate `2l`
//! with bit 1 (all indexes 1-based). Every strategy here selects the same
//! survivor set: the `L` smallest metrics, ties going to the smaller
//! candidate index. They differ only in output order, which is what the
//! crossbar cares about.

mod design;
mod network;
mod radix;

use std::cmp::Ordering;

pub use design::{make_design_sorter, DesignSorter, IndexStage, MetricStage, SorterDesign};
pub use network::{
    apply_network, apply_network_by, build_bitonic, build_mvf, verify_zero_one, Comparator,
    CompareExchangeNetwork, Direction, NetworkKind, ZeroOneOutcome,
};
pub use radix::{radix_cost, radix_ranks, radix_select, radix_sort_by, SorterCost};

use crate::crossbar::parent_of;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Candidate {
    /// Existing path `l`, 1-based.
    pub parent: usize,
    pub bit: u8,
    /// `2l − 1` for bit 0, `2l` for bit 1.
    pub index: usize,
    pub metric: f64,
}

impl Candidate {
    pub fn new(parent: usize, bit: u8, metric: f64) -> Self {
        Self {
            parent,
            bit,
            index: 2 * parent - 1 + usize::from(bit & 1),
            metric,
        }
    }

    /// Metric first, then candidate index.
    pub fn cmp_by_metric(&self, other: &Self) -> Ordering {
        self.metric
            .total_cmp(&other.metric)
            .then(self.index.cmp(&other.index))
    }
}

/// The `2L` candidates for metrics listed by candidate index `1..=2L`.
pub fn candidates_from_metrics(metrics: &[f64]) -> Vec<Candidate> {
    metrics
        .iter()
        .enumerate()
        .map(|(j, &m)| Candidate::new(j / 2 + 1, (j % 2) as u8, m))
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct SurvivorAssignment {
    /// Survivor `k` (0-based position here) goes to slot `k + 1`.
    pub ordered: Vec<Candidate>,
    pub sorted_by_index: bool,
}

impl SurvivorAssignment {
    pub fn list_size(&self) -> usize {
        self.ordered.len()
    }

    pub fn indexes(&self) -> Vec<usize> {
        self.ordered.iter().map(|c| c.index).collect()
    }

    /// Survivor indexes in ascending order, regardless of emission order.
    pub fn index_set(&self) -> Vec<usize> {
        let mut v = self.indexes();
        v.sort_unstable();
        v
    }

    /// Strict ascent `i_1 < … < i_L` and `k ≤ i_k ≤ L + k` for every slot.
    pub fn satisfies_index_bounds(&self) -> bool {
        let l = self.ordered.len();
        self.ordered.windows(2).all(|w| w[0].index < w[1].index)
            && self
                .ordered
                .iter()
                .enumerate()
                .all(|(pos, c)| (pos + 1..=l + pos + 1).contains(&c.index))
    }
}

/// A path-pruning strategy.
pub trait Pruner: Send + Sync {
    fn prune(&self, candidates: &[Candidate]) -> Result<SurvivorAssignment>;

    /// Whether survivors come out in ascending candidate-index order, which a
    /// reduced crossbar requires.
    fn sorts_by_index(&self) -> bool;

    fn name(&self) -> String;
}

/// Checks that `candidates` holds indexes `1..=2L` exactly once each, with
/// consistent parent and bit fields. Returns `L`.
pub fn validate_candidates(candidates: &[Candidate]) -> Result<usize> {
    let n = candidates.len();
    if n < 2 || !n.is_multiple_of(2) {
        return Err(Error::MalformedCandidates(format!(
            "expected 2L candidates, got {n}"
        )));
    }
    let mut seen = vec![false; n];
    for c in candidates {
        if c.index == 0 || c.index > n {
            return Err(Error::MalformedCandidates(format!(
                "index {} outside 1..={n}",
                c.index
            )));
        }
        if std::mem::replace(&mut seen[c.index - 1], true) {
            return Err(Error::MalformedCandidates(format!(
                "index {} repeated",
                c.index
            )));
        }
        if parent_of(c.index) != c.parent || usize::from(c.bit) != (c.index - 1) % 2 {
            return Err(Error::MalformedCandidates(format!(
                "index {} inconsistent with parent {} and bit {}",
                c.index, c.parent, c.bit
            )));
        }
    }
    Ok(n / 2)
}

/// Finds the `L` smallest-metric candidates and emits them by ascending
/// metric, as a conventional sorter would.
pub fn prune_conventional(candidates: &[Candidate]) -> Result<SurvivorAssignment> {
    let l = validate_candidates(candidates)?;
    let mut sorted = candidates.to_vec();
    sorted.sort_by(Candidate::cmp_by_metric);
    sorted.truncate(l);
    Ok(SurvivorAssignment {
        ordered: sorted,
        sorted_by_index: false,
    })
}

/// Same survivors as [`prune_conventional`], emitted by ascending index.
pub fn prune_proposed(candidates: &[Candidate]) -> Result<SurvivorAssignment> {
    let mut out = prune_conventional(candidates)?;
    out.ordered.sort_by_key(|c| c.index);
    out.sorted_by_index = true;
    Ok(out)
}

#[derive(Debug, Clone, Copy, Default)]
pub struct ConventionalPruner;

impl Pruner for ConventionalPruner {
    fn prune(&self, candidates: &[Candidate]) -> Result<SurvivorAssignment> {
        prune_conventional(candidates)
    }

    fn sorts_by_index(&self) -> bool {
        false
    }

    fn name(&self) -> String {
        "conventional".into()
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct ProposedPruner;

impl Pruner for ProposedPruner {
    fn prune(&self, candidates: &[Candidate]) -> Result<SurvivorAssignment> {
        prune_proposed(candidates)
    }

    fn sorts_by_index(&self) -> bool {
        true
    }

    fn name(&self) -> String {
        "proposed".into()
    }
}
