//! The memory-copy crossbar that follows path pruning.
//!
//! Survivor `i_k` is assigned to slot `k`, and slot `k` receives the memories
//! of existing path `⌊(i_k − 1)/2⌋ + 1`. If survivors arrive sorted by index
//! then `k ≤ i_k ≤ L + k`, so slot `k` only ever draws from the interval
//! `⌊(k−1)/2⌋+1 ..= ⌊(L+k−1)/2⌋+1`, which has `L/2 + 1` members for even
//! `L`. A reduced crossbar wires only those sources to each multiplexer.
//!
//! Slots, paths and candidate indexes are 1-based throughout this module.

use std::fmt;
use std::ops::RangeInclusive;

use rand::seq::index::sample;

use crate::channel::frame_rng;
use crate::pruning::SurvivorAssignment;
use crate::scl::PathState;
use crate::{Error, Result};

/// Existing path that candidate `i` was split from.
#[inline]
pub fn parent_of(i: usize) -> usize {
    debug_assert!(i >= 1);
    (i - 1) / 2 + 1
}

/// Sources that slot `k` can receive from when survivors are index-sorted.
pub fn allowed_sources(k: usize, list_size: usize) -> Result<RangeInclusive<usize>> {
    if list_size == 0 || !list_size.is_multiple_of(2) {
        return Err(Error::OddListSize(list_size));
    }
    if k == 0 || k > list_size {
        return Err(Error::InvalidParameter(format!(
            "slot {k} outside 1..={list_size}"
        )));
    }
    Ok((k - 1) / 2 + 1..=(list_size + k - 1) / 2 + 1)
}

/// Total multiplexer inputs over all `L` destination slots.
pub fn mux_input_totals(list_size: usize, reduced: bool) -> usize {
    if reduced {
        list_size * (list_size / 2 + 1)
    } else {
        list_size * list_size
    }
}

/// Per-destination wiring of the crossbar.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrossbarSpec {
    list_size: usize,
    reduced: bool,
    allowed: Vec<RangeInclusive<usize>>,
}

impl CrossbarSpec {
    /// Full `L`-to-1 multiplexers. Any `L ≥ 1` is accepted.
    pub fn conventional(list_size: usize) -> Result<Self> {
        if list_size == 0 {
            return Err(Error::InvalidListSize(0));
        }
        Ok(Self {
            list_size,
            reduced: false,
            allowed: vec![1..=list_size; list_size],
        })
    }

    /// `(L/2 + 1)`-to-1 multiplexers. `L` must be even.
    pub fn reduced(list_size: usize) -> Result<Self> {
        let allowed = (1..=list_size.max(1))
            .map(|k| allowed_sources(k, list_size))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            list_size,
            reduced: true,
            allowed,
        })
    }

    pub fn new(list_size: usize, reduced: bool) -> Result<Self> {
        if reduced {
            Self::reduced(list_size)
        } else {
            Self::conventional(list_size)
        }
    }

    pub fn list_size(&self) -> usize {
        self.list_size
    }

    pub fn is_reduced(&self) -> bool {
        self.reduced
    }

    /// Allowed sources of slot `k` (1-based).
    pub fn allowed(&self, k: usize) -> &RangeInclusive<usize> {
        &self.allowed[k - 1]
    }

    pub fn mux_inputs(&self, k: usize) -> usize {
        self.allowed(k).clone().count()
    }

    pub fn mux_input_total(&self) -> usize {
        (1..=self.list_size).map(|k| self.mux_inputs(k)).sum()
    }

    /// Select-line value that connects `source` to slot `k`'s output.
    pub fn mux_select(&self, k: usize, source: usize) -> Result<usize> {
        let allowed = self.allowed(k);
        if allowed.contains(&source) {
            Ok(source - allowed.start())
        } else {
            Err(Error::RoutingViolation {
                slot: k,
                from: source,
            })
        }
    }

    /// Source path for each slot; fails if a slot would need a source its
    /// multiplexer does not have.
    pub fn route(&self, assignment: &SurvivorAssignment) -> Result<Vec<usize>> {
        if assignment.list_size() != self.list_size {
            return Err(Error::LengthMismatch {
                expected: self.list_size,
                actual: assignment.list_size(),
            });
        }
        assignment
            .ordered
            .iter()
            .enumerate()
            .map(|(pos, c)| {
                let source = parent_of(c.index);
                self.mux_select(pos + 1, source).map(|_| source)
            })
            .collect()
    }

    /// Copies whole path memories through the multiplexers. All sources are
    /// read before any destination is written, like registered crossbar
    /// outputs. Metrics are copied too; the caller overwrites them with the
    /// survivors' metrics.
    pub fn copy_memories(&self, paths: &[PathState], sources: &[usize]) -> Result<Vec<PathState>> {
        let mut out = Vec::with_capacity(self.list_size);
        self.copy_memories_into(paths, sources, &mut out)?;
        Ok(out)
    }

    /// [`CrossbarSpec::copy_memories`] into `out`, reusing its buffers.
    pub fn copy_memories_into(
        &self,
        paths: &[PathState],
        sources: &[usize],
        out: &mut Vec<PathState>,
    ) -> Result<()> {
        if paths.len() != self.list_size || sources.len() != self.list_size {
            return Err(Error::LengthMismatch {
                expected: self.list_size,
                actual: sources.len().min(paths.len()),
            });
        }
        out.truncate(self.list_size);
        for (pos, &source) in sources.iter().enumerate() {
            let k = pos + 1;
            let select = self.mux_select(k, source)?;
            let input = &paths[self.allowed(k).start() + select - 1];
            match out.get_mut(pos) {
                Some(slot) => slot.clone_from(input),
                None => out.push(input.clone()),
            }
            out[pos].slot = k;
        }
        Ok(())
    }
}

/// Outcome of checking the restricted crossbar for one list size.
#[derive(Debug, Clone)]
pub struct PropositionReport {
    pub list_size: usize,
    pub exhaustive: bool,
    pub subsets_checked: u64,
    pub allowed: Vec<RangeInclusive<usize>>,
    /// `realizations[k-1][s - start]`: subsets that route source `s` to slot `k`.
    pub realizations: Vec<Vec<u64>>,
    /// Sources never realized by any subset, as `(slot, source)`.
    pub unrealized: Vec<(usize, usize)>,
    /// First few `(survivors, slot, source)` that fell outside the allowed set.
    pub violations: Vec<(Vec<usize>, usize, usize)>,
    pub size_ok: bool,
}

impl PropositionReport {
    pub fn passed(&self) -> bool {
        self.size_ok && self.violations.is_empty() && self.unrealized.is_empty()
    }
}

impl fmt::Display for PropositionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let l = self.list_size;
        writeln!(
            f,
            "L={l}: {} {} survivor subsets, mux inputs {} -> {} per slot",
            if self.exhaustive { "all" } else { "sampled" },
            self.subsets_checked,
            l,
            l / 2 + 1
        )?;
        for (pos, range) in self.allowed.iter().enumerate() {
            let counts: Vec<String> = range
                .clone()
                .zip(&self.realizations[pos])
                .map(|(s, c)| format!("{s}:{c}"))
                .collect();
            writeln!(
                f,
                "  k={:<3} allowed={{{}..{}}} realized {}",
                pos + 1,
                range.start(),
                range.end(),
                counts.join(" ")
            )?;
        }
        for (subset, k, s) in &self.violations {
            writeln!(f, "  VIOLATION survivors={subset:?} slot={k} source={s}")?;
        }
        for (k, s) in &self.unrealized {
            writeln!(f, "  UNREALIZED slot={k} source={s}")?;
        }
        writeln!(
            f,
            "  result: {}",
            if self.passed() { "PASS" } else { "FAIL" }
        )
    }
}

struct Tally {
    allowed: Vec<RangeInclusive<usize>>,
    realizations: Vec<Vec<u64>>,
    violations: Vec<(Vec<usize>, usize, usize)>,
    checked: u64,
}

impl Tally {
    fn new(list_size: usize) -> Result<Self> {
        let allowed = (1..=list_size)
            .map(|k| allowed_sources(k, list_size))
            .collect::<Result<Vec<_>>>()?;
        let realizations = allowed.iter().map(|r| vec![0; r.clone().count()]).collect();
        Ok(Self {
            allowed,
            realizations,
            violations: Vec::new(),
            checked: 0,
        })
    }

    /// `survivors` must be ascending.
    fn check(&mut self, survivors: &[usize]) {
        self.checked += 1;
        for (pos, &i) in survivors.iter().enumerate() {
            let source = parent_of(i);
            let range = &self.allowed[pos];
            if range.contains(&source) {
                self.realizations[pos][source - range.start()] += 1;
            } else if self.violations.len() < 8 {
                self.violations.push((survivors.to_vec(), pos + 1, source));
            }
        }
    }

    fn finish(self, list_size: usize, exhaustive: bool) -> PropositionReport {
        let unrealized = self
            .allowed
            .iter()
            .zip(&self.realizations)
            .enumerate()
            .flat_map(|(pos, (range, counts))| {
                range
                    .clone()
                    .zip(counts)
                    .filter(|(_, &c)| c == 0)
                    .map(move |(s, _)| (pos + 1, s))
            })
            .collect();
        let size_ok = self
            .allowed
            .iter()
            .all(|r| r.clone().count() == list_size / 2 + 1);
        PropositionReport {
            list_size,
            exhaustive,
            subsets_checked: self.checked,
            allowed: self.allowed,
            realizations: self.realizations,
            unrealized,
            violations: self.violations,
            size_ok,
        }
    }
}

/// Survivor sets beyond this many are sampled instead of enumerated.
pub const EXHAUSTIVE_LIMIT: u64 = 100_000_000;

/// Random subsets drawn when the list size is too large to enumerate.
pub const DEFAULT_SAMPLES: u64 = 10_000_000;

pub fn binomial(n: u64, k: u64) -> u64 {
    let k = k.min(n - k);
    let c = (0..k).fold(1u128, |acc, j| acc * u128::from(n - j) / u128::from(j + 1));
    u64::try_from(c).unwrap_or(u64::MAX)
}

/// Checks every ascending survivor set of `L` out of `2L` candidates when
/// there are at most [`EXHAUSTIVE_LIMIT`] of them, otherwise
/// [`DEFAULT_SAMPLES`] random sets plus constructed witnesses for every
/// allowed source.
pub fn verify_proposition(list_size: usize) -> Result<PropositionReport> {
    if list_size <= 31 && binomial(2 * list_size as u64, list_size as u64) <= EXHAUSTIVE_LIMIT {
        verify_proposition_exhaustive(list_size)
    } else {
        verify_proposition_sampled(list_size, DEFAULT_SAMPLES, 0x5EED)
    }
}

pub fn verify_proposition_exhaustive(list_size: usize) -> Result<PropositionReport> {
    let mut tally = Tally::new(list_size)?;
    if list_size > 31 {
        return Err(Error::InvalidParameter(format!(
            "list size {list_size} too large to enumerate"
        )));
    }
    let width = 2 * list_size;
    let mut survivors = vec![0usize; list_size];
    // Gosper's hack over all width-bit words with list_size bits set.
    let mut mask: u64 = (1 << list_size) - 1;
    let limit: u64 = 1 << width;
    while mask < limit {
        let mut bits = mask;
        for s in survivors.iter_mut() {
            *s = bits.trailing_zeros() as usize + 1;
            bits &= bits - 1;
        }
        tally.check(&survivors);
        let c = mask & mask.wrapping_neg();
        let r = mask + c;
        mask = (((r ^ mask) >> 2) / c) | r;
    }
    Ok(tally.finish(list_size, true))
}

/// Survivor set realizing `source` at slot `k`: the `k − 1` smallest indexes,
/// a child of `source` in position `k`, then the `L − k` largest indexes.
fn witness(k: usize, source: usize, list_size: usize) -> Option<Vec<usize>> {
    let child = [2 * source - 1, 2 * source]
        .into_iter()
        .find(|&i| (k..=list_size + k).contains(&i))?;
    let mut v: Vec<usize> = (1..k).collect();
    v.push(child);
    v.extend(list_size + k + 1..=2 * list_size);
    Some(v)
}

pub fn verify_proposition_sampled(
    list_size: usize,
    samples: u64,
    seed: u64,
) -> Result<PropositionReport> {
    let mut tally = Tally::new(list_size)?;
    let mut rng = frame_rng(seed, list_size as u64);
    let mut survivors = Vec::with_capacity(list_size);
    for _ in 0..samples {
        survivors.clear();
        survivors.extend(
            sample(&mut rng, 2 * list_size, list_size)
                .into_iter()
                .map(|i| i + 1),
        );
        survivors.sort_unstable();
        tally.check(&survivors);
    }
    let allowed = tally.allowed.clone();
    for (pos, range) in allowed.iter().enumerate() {
        for s in range.clone() {
            if let Some(w) = witness(pos + 1, s, list_size) {
                tally.check(&w);
            }
        }
    }
    Ok(tally.finish(list_size, false))
}
