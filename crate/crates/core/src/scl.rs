//! Successive cancellation (SC) and SC list decoding with LLR-based path
//! metrics.
//!
//! The decoding tree uses natural bit order: the node at depth `s` for bit
//! `i` is a left child when bit `m − s` of `i` is 0. Stage `s` of a path's
//! LLR memory holds `n >> s` values; stage 0 is the channel.

use std::fmt;
use std::rc::Rc;

use crate::crossbar::CrossbarSpec;
use crate::polar_code::PolarCode;
use crate::pruning::{Candidate, ConventionalPruner, Pruner};
use crate::{Error, Result};

/// Min-sum check-node update; `sign(0)` counts as `+1`.
#[inline]
pub fn f_op(a: f64, b: f64) -> f64 {
    let mag = a.abs().min(b.abs());
    if (a < 0.0) != (b < 0.0) {
        -mag
    } else {
        mag
    }
}

#[inline]
pub fn g_op(a: f64, b: f64, s: u8) -> f64 {
    if s & 1 == 0 {
        b + a
    } else {
        b - a
    }
}

/// Hard decision: 1 when the LLR is negative.
#[inline]
pub fn hard_decision(llr: f64) -> u8 {
    u8::from(llr < 0.0)
}

/// LLR-based metric: no penalty when `u` agrees with the hard decision,
/// `|llr|` otherwise.
#[inline]
pub fn metric_update(pm: f64, llr: f64, u: u8) -> f64 {
    if u == hard_decision(llr) {
        pm
    } else {
        pm + llr.abs()
    }
}

/// Exact LLR-domain metric, `pm + ln(1 + e^{−(1−2u)·llr})`.
#[inline]
pub fn exact_metric_update(pm: f64, llr: f64, u: u8) -> f64 {
    let soft = (-llr.abs()).exp().ln_1p();
    if u == hard_decision(llr) {
        pm + soft
    } else {
        pm + llr.abs() + soft
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MetricKind {
    #[default]
    Approximate,
    Exact,
}

impl MetricKind {
    #[inline]
    pub fn update(self, pm: f64, llr: f64, u: u8) -> f64 {
        match self {
            MetricKind::Approximate => metric_update(pm, llr, u),
            MetricKind::Exact => exact_metric_update(pm, llr, u),
        }
    }
}

/// One decoding path and its memories.
///
/// LLR stages are reference counted and copied on write, so copying a path
/// is cheap until one of the copies recomputes a stage.
#[derive(Debug)]
pub struct PathState {
    /// Hardware slot, 1-based.
    pub slot: usize,
    pub metric: f64,
    pub decoded_bits: Vec<u8>,
    /// Stage `s` (1..=m) occupies `[n − 2(n>>s), n − (n>>s))` and holds the
    /// re-encoded bits of the latest left child at depth `s`.
    partial_sums: Vec<u8>,
    llr_memory: Vec<Rc<Vec<f64>>>,
    pub active: bool,
}

impl Clone for PathState {
    fn clone(&self) -> Self {
        let mut decoded_bits = Vec::with_capacity(self.n());
        decoded_bits.extend_from_slice(&self.decoded_bits);
        Self {
            slot: self.slot,
            metric: self.metric,
            decoded_bits,
            partial_sums: self.partial_sums.clone(),
            llr_memory: self.llr_memory.clone(),
            active: self.active,
        }
    }

    fn clone_from(&mut self, source: &Self) {
        self.slot = source.slot;
        self.metric = source.metric;
        self.decoded_bits.clone_from(&source.decoded_bits);
        self.partial_sums.clone_from(&source.partial_sums);
        self.llr_memory.clone_from(&source.llr_memory);
        self.active = source.active;
    }
}

impl PathState {
    fn new(slot: usize, channel: Rc<Vec<f64>>) -> Self {
        let n = channel.len();
        let m = n.trailing_zeros() as usize;
        let mut llr_memory = Vec::with_capacity(m + 1);
        llr_memory.push(channel);
        llr_memory.extend((1..=m).map(|s| Rc::new(vec![0.0; n >> s])));
        Self {
            slot,
            metric: 0.0,
            decoded_bits: Vec::with_capacity(n),
            partial_sums: vec![0; n.saturating_sub(1)],
            llr_memory,
            active: true,
        }
    }

    fn n(&self) -> usize {
        self.llr_memory[0].len()
    }

    fn stages(&self) -> usize {
        self.llr_memory.len() - 1
    }

    pub fn llr_stage(&self, s: usize) -> &[f64] {
        &self.llr_memory[s]
    }

    pub fn partial_sum_stage(&self, s: usize) -> &[u8] {
        let n = self.n();
        &self.partial_sums[n - 2 * (n >> s)..n - (n >> s)]
    }

    /// Bit-level equality of every memory, metric included.
    pub fn same_memory(&self, other: &PathState) -> bool {
        self.slot == other.slot
            && self.active == other.active
            && self.metric.to_bits() == other.metric.to_bits()
            && self.decoded_bits == other.decoded_bits
            && self.partial_sums == other.partial_sums
            && self.llr_memory.len() == other.llr_memory.len()
            && self.llr_memory.iter().zip(&other.llr_memory).all(|(a, b)| {
                a.iter()
                    .map(|x| x.to_bits())
                    .eq(b.iter().map(|x| x.to_bits()))
            })
    }

    /// Decision LLR for bit `i`, recomputing only the stages whose tree node
    /// changed since bit `i − 1`.
    fn compute_llr(&mut self, i: usize) -> f64 {
        let n = self.n();
        let m = self.stages();
        let first = if i == 0 {
            1
        } else {
            m - i.trailing_zeros() as usize
        };
        for s in first..=m {
            let size = n >> s;
            let right = (i >> (m - s)) & 1 == 1;
            let (lo, hi) = self.llr_memory.split_at_mut(s);
            let prev = &lo[s - 1];
            let cur = Rc::make_mut(&mut hi[0]);
            if right {
                let ps = &self.partial_sums[n - 2 * size..n - size];
                for j in 0..size {
                    cur[j] = g_op(prev[j], prev[j + size], ps[j]);
                }
            } else {
                for j in 0..size {
                    cur[j] = f_op(prev[j], prev[j + size]);
                }
            }
        }
        self.llr_memory[m][0]
    }

    /// Appends decision `v` for bit `i` and folds it into the partial sums.
    fn push_bit(&mut self, i: usize, v: u8, scratch: &mut [u8]) {
        self.decoded_bits.push(v);
        let n = self.n();
        let m = self.stages();
        scratch[0] = v;
        let mut size = 1;
        let mut s = m;
        while s > 0 {
            let off = n - 2 * size;
            if (i >> (m - s)) & 1 == 0 {
                self.partial_sums[off..off + size].copy_from_slice(&scratch[..size]);
                return;
            }
            scratch.copy_within(0..size, size);
            for j in 0..size {
                scratch[j] = self.partial_sums[off + j] ^ scratch[size + j];
            }
            size *= 2;
            s -= 1;
        }
    }
}

/// One pruning step as seen by the crossbar.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PruningEvent {
    pub bit: usize,
    pub survivors: Vec<usize>,
    pub sources: Vec<usize>,
}

impl fmt::Display for PruningEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[usize]| {
            v.iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
                .join(",")
        };
        write!(
            f,
            "bit={} survivors={} sources={}",
            self.bit,
            join(&self.survivors),
            join(&self.sources)
        )
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AuditRecord {
    pub events: Vec<PruningEvent>,
}

impl fmt::Display for AuditRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in &self.events {
            writeln!(f, "{e}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct SclOutput {
    pub info_bits: Vec<u8>,
    /// Full decoded vector `û`, frozen positions included.
    pub decoded: Vec<u8>,
    pub metric: f64,
    pub audit: AuditRecord,
}

/// An SCL decoder bound to a code, pruner and crossbar.
pub struct SclDecoder<'a> {
    code: &'a PolarCode,
    list_size: usize,
    pruner: &'a dyn Pruner,
    crossbar: &'a CrossbarSpec,
    metric: MetricKind,
    record_audit: bool,
}

impl<'a> SclDecoder<'a> {
    pub fn new(
        code: &'a PolarCode,
        list_size: usize,
        pruner: &'a dyn Pruner,
        crossbar: &'a CrossbarSpec,
    ) -> Result<Self> {
        if list_size == 0 || !list_size.is_power_of_two() {
            return Err(Error::InvalidListSize(list_size));
        }
        if crossbar.list_size() != list_size {
            return Err(Error::InvalidParameter(format!(
                "crossbar built for L={} used with L={list_size}",
                crossbar.list_size()
            )));
        }
        if crossbar.is_reduced() && !pruner.sorts_by_index() {
            return Err(Error::InvalidParameter(format!(
                "reduced crossbar needs index-sorted survivors; pruner {} does not sort by index",
                pruner.name()
            )));
        }
        Ok(Self {
            code,
            list_size,
            pruner,
            crossbar,
            metric: MetricKind::Approximate,
            record_audit: true,
        })
    }

    pub fn with_metric(mut self, metric: MetricKind) -> Self {
        self.metric = metric;
        self
    }

    /// Skips building the audit record.
    pub fn without_audit(mut self) -> Self {
        self.record_audit = false;
        self
    }

    pub fn decode(&self, llrs: &[f64]) -> Result<SclOutput> {
        self.decode_observed(llrs, |_, _| {})
    }

    /// Decodes and calls `observer` after every pruning step with the event
    /// and the path memories as they stand after the crossbar copy and the
    /// new bit.
    pub fn decode_observed<F>(&self, llrs: &[f64], mut observer: F) -> Result<SclOutput>
    where
        F: FnMut(&PruningEvent, &[PathState]),
    {
        let code = self.code;
        let n = code.n();
        if llrs.len() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                actual: llrs.len(),
            });
        }
        let l = self.list_size;
        let mut scratch = vec![0u8; n];
        let mut paths = vec![PathState::new(1, Rc::new(llrs.to_vec()))];
        let mut spare = Vec::with_capacity(l);
        let mut decision_llrs = Vec::with_capacity(l);
        let mut candidates = Vec::with_capacity(2 * l);
        let mut audit = AuditRecord::default();
        let mut frozen = code.frozen_values().iter();

        for i in 0..n {
            decision_llrs.clear();
            decision_llrs.extend(paths.iter_mut().map(|p| p.compute_llr(i)));

            if code.is_frozen(i) {
                let v = *frozen.next().expect("one value per frozen index");
                for (p, &llr) in paths.iter_mut().zip(&decision_llrs) {
                    p.metric = self.metric.update(p.metric, llr, v);
                    p.push_bit(i, v, &mut scratch);
                }
            } else if paths.len() < l {
                // Path k continues in slot 2k − 1 with bit 0 and 2k with bit 1.
                let mut next = Vec::with_capacity(2 * paths.len());
                for (p, &llr) in paths.into_iter().zip(&decision_llrs) {
                    let slot = next.len() + 1;
                    let mut one = p.clone();
                    let mut zero = p;
                    zero.slot = slot;
                    zero.metric = self.metric.update(zero.metric, llr, 0);
                    zero.push_bit(i, 0, &mut scratch);
                    one.slot = slot + 1;
                    one.metric = self.metric.update(one.metric, llr, 1);
                    one.push_bit(i, 1, &mut scratch);
                    next.push(zero);
                    next.push(one);
                }
                paths = next;
            } else {
                candidates.clear();
                for (p, &llr) in paths.iter().zip(&decision_llrs) {
                    for u in 0..2 {
                        candidates.push(Candidate::new(
                            p.slot,
                            u,
                            self.metric.update(p.metric, llr, u),
                        ));
                    }
                }
                let survivors = self.pruner.prune(&candidates)?;
                let sources = self.crossbar.route(&survivors)?;
                self.crossbar
                    .copy_memories_into(&paths, &sources, &mut spare)?;
                std::mem::swap(&mut paths, &mut spare);
                for (p, c) in paths.iter_mut().zip(&survivors.ordered) {
                    p.metric = c.metric;
                    p.push_bit(i, c.bit, &mut scratch);
                }
                let event = PruningEvent {
                    bit: i,
                    survivors: survivors.indexes(),
                    sources,
                };
                observer(&event, &paths);
                if self.record_audit {
                    audit.events.push(event);
                }
            }
        }

        let best = paths
            .iter()
            .min_by(|a, b| a.metric.total_cmp(&b.metric).then(a.slot.cmp(&b.slot)))
            .expect("at least one path");
        Ok(SclOutput {
            info_bits: code.extract_info(&best.decoded_bits),
            decoded: best.decoded_bits.clone(),
            metric: best.metric,
            audit,
        })
    }
}

/// SCL decode with the approximate metric.
pub fn decode_scl(
    code: &PolarCode,
    llrs: &[f64],
    list_size: usize,
    pruner: &dyn Pruner,
    crossbar: &CrossbarSpec,
) -> Result<SclOutput> {
    SclDecoder::new(code, list_size, pruner, crossbar)?.decode(llrs)
}

/// Plain SC decoding by recursion over the code tree; returns the
/// information bits.
pub fn decode_sc(code: &PolarCode, llrs: &[f64]) -> Result<Vec<u8>> {
    let n = code.n();
    if llrs.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            actual: llrs.len(),
        });
    }
    let mut frozen_value = vec![0u8; n];
    for (&i, &v) in code.frozen_set().iter().zip(code.frozen_values()) {
        frozen_value[i] = v;
    }
    let mut u = vec![0u8; n];
    sc_node(code, &frozen_value, llrs, 0, &mut u);
    Ok(code.extract_info(&u))
}

/// Decodes the subtree covering bits `first..first + llrs.len()` into `u`
/// and returns its re-encoded bits.
fn sc_node(
    code: &PolarCode,
    frozen_value: &[u8],
    llrs: &[f64],
    first: usize,
    u: &mut [u8],
) -> Vec<u8> {
    let size = llrs.len();
    if size == 1 {
        let bit = if code.is_frozen(first) {
            frozen_value[first]
        } else {
            hard_decision(llrs[0])
        };
        u[first] = bit;
        return vec![bit];
    }
    let half = size / 2;
    let (a, b) = llrs.split_at(half);
    let left_llrs: Vec<f64> = a.iter().zip(b).map(|(&x, &y)| f_op(x, y)).collect();
    let left = sc_node(code, frozen_value, &left_llrs, first, u);
    let right_llrs: Vec<f64> = a
        .iter()
        .zip(b)
        .zip(&left)
        .map(|((&x, &y), &s)| g_op(x, y, s))
        .collect();
    let right = sc_node(code, frozen_value, &right_llrs, first + half, u);
    left.iter()
        .zip(&right)
        .map(|(l, r)| l ^ r)
        .chain(right.iter().copied())
        .collect()
}

/// SCL with `L = 1`, which must agree with [`decode_sc`].
pub fn decode_scl_single(code: &PolarCode, llrs: &[f64]) -> Result<Vec<u8>> {
    let spec = CrossbarSpec::conventional(1)?;
    Ok(decode_scl(code, llrs, 1, &ConventionalPruner, &spec)?.info_bits)
}
