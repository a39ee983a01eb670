//! Compare-exchange networks: Batcher bitonic sorters and the MVF selector.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    /// Smaller key ends on the lower lane.
    Ascending,
    /// Larger key ends on the lower lane.
    Descending,
}

impl Direction {
    pub fn flip(self) -> Self {
        match self {
            Direction::Ascending => Direction::Descending,
            Direction::Descending => Direction::Ascending,
        }
    }
}

/// One compare-exchange element between lanes `low < high`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Comparator {
    pub low: usize,
    pub high: usize,
    pub direction: Direction,
}

impl Comparator {
    pub fn new(low: usize, high: usize, direction: Direction) -> Self {
        debug_assert!(low < high);
        Self {
            low,
            high,
            direction,
        }
    }
}

impl fmt::Display for Comparator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let op = match self.direction {
            Direction::Ascending => '<',
            Direction::Descending => '>',
        };
        write!(f, "{}{}{}", self.low, op, self.high)
    }
}

/// What a network promises about its output.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NetworkKind {
    /// All lanes ascending.
    Sorter,
    /// Lower half holds the `width / 2` smallest keys, in no particular order.
    Selector,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompareExchangeNetwork {
    width: usize,
    kind: NetworkKind,
    stages: Vec<Vec<Comparator>>,
}

impl CompareExchangeNetwork {
    /// Checks that every comparator is in range and that no lane is used
    /// twice within a stage.
    pub fn new(width: usize, kind: NetworkKind, stages: Vec<Vec<Comparator>>) -> Result<Self> {
        for (s, stage) in stages.iter().enumerate() {
            let mut used = vec![false; width];
            for c in stage {
                if c.low >= c.high || c.high >= width {
                    return Err(Error::InvalidParameter(format!(
                        "stage {s}: comparator {c} out of range for width {width}"
                    )));
                }
                if std::mem::replace(&mut used[c.low], true)
                    || std::mem::replace(&mut used[c.high], true)
                {
                    return Err(Error::InvalidParameter(format!(
                        "stage {s}: lane reused by comparator {c}"
                    )));
                }
            }
        }
        Ok(Self {
            width,
            kind,
            stages,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn kind(&self) -> NetworkKind {
        self.kind
    }

    pub fn stages(&self) -> &[Vec<Comparator>] {
        &self.stages
    }

    pub fn comparator_count(&self) -> usize {
        self.stages.iter().map(Vec::len).sum()
    }

    pub fn depth(&self) -> usize {
        self.stages.len()
    }

    /// One stage per line, comparators `a<b` / `a>b` separated by spaces.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for stage in &self.stages {
            let line: Vec<String> = stage.iter().map(ToString::to_string).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }

    /// Inverse of [`dump`](Self::dump). The width is the largest lane plus one
    /// unless given.
    pub fn parse_dump(text: &str, width: Option<usize>, kind: NetworkKind) -> Result<Self> {
        let mut stages = Vec::new();
        for (no, line) in text.lines().enumerate() {
            let stage = line
                .split_whitespace()
                .map(|tok| tok.parse::<Comparator>())
                .collect::<std::result::Result<Vec<_>, String>>()
                .map_err(|msg| Error::Parse { line: no + 1, msg })?;
            stages.push(stage);
        }
        let width = width.unwrap_or_else(|| {
            stages
                .iter()
                .flatten()
                .map(|c| c.high + 1)
                .max()
                .unwrap_or(0)
        });
        Self::new(width, kind, stages)
    }
}

impl FromStr for Comparator {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let (pos, direction) = s
            .find('<')
            .map(|p| (p, Direction::Ascending))
            .or_else(|| s.find('>').map(|p| (p, Direction::Descending)))
            .ok_or_else(|| format!("{s:?}: expected a<b or a>b"))?;
        let lane = |t: &str| t.parse::<usize>().map_err(|e| format!("{s:?}: {e}"));
        let (low, high) = (lane(&s[..pos])?, lane(&s[pos + 1..])?);
        if low >= high {
            return Err(format!("{s:?}: lanes must be increasing"));
        }
        Ok(Comparator {
            low,
            high,
            direction,
        })
    }
}

impl fmt::Display for CompareExchangeNetwork {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.dump())
    }
}

/// Bitonic stages over `width` lanes starting at lane `offset`.
fn bitonic_stages(width: usize, offset: usize, direction: Direction) -> Vec<Vec<Comparator>> {
    let mut stages = Vec::new();
    let mut block = 2;
    while block <= width {
        let mut j = block / 2;
        while j >= 1 {
            let stage = (0..width)
                .filter_map(|i| {
                    let partner = i ^ j;
                    (partner > i).then(|| {
                        let dir = if i & block == 0 {
                            direction
                        } else {
                            direction.flip()
                        };
                        Comparator::new(offset + i, offset + partner, dir)
                    })
                })
                .collect();
            stages.push(stage);
            j /= 2;
        }
        block *= 2;
    }
    stages
}

/// Batcher's bitonic sorting network, ascending.
///
/// `comparator_count = (w/2)·s(s+1)/2` and `depth = s(s+1)/2` with `s = log2 w`.
pub fn build_bitonic(width: usize) -> Result<CompareExchangeNetwork> {
    if width == 0 || !width.is_power_of_two() {
        return Err(Error::InvalidWidth(width));
    }
    CompareExchangeNetwork::new(
        width,
        NetworkKind::Sorter,
        bitonic_stages(width, 0, Direction::Ascending),
    )
}

/// Maximum values filter over `width = 2L` lanes.
///
/// Lanes `0..L` are bitonic-sorted ascending and lanes `L..2L` descending in
/// parallel, which leaves a bitonic sequence; one half-cleaner stage then
/// moves the `L` smallest keys onto lanes `0..L`, unordered.
pub fn build_mvf(width: usize) -> Result<CompareExchangeNetwork> {
    if width < 2 || !width.is_power_of_two() {
        return Err(Error::InvalidWidth(width));
    }
    let half = width / 2;
    let lower = bitonic_stages(half, 0, Direction::Ascending);
    let upper = bitonic_stages(half, half, Direction::Descending);
    let mut stages: Vec<Vec<Comparator>> = lower
        .into_iter()
        .zip(upper)
        .map(|(mut a, b)| {
            a.extend(b);
            a
        })
        .collect();
    stages.push(
        (0..half)
            .map(|j| Comparator::new(j, j + half, Direction::Ascending))
            .collect(),
    );
    CompareExchangeNetwork::new(width, NetworkKind::Selector, stages)
}

/// Runs the network over `lanes`, ordering by `cmp`. Payloads move with
/// their keys.
pub fn apply_network_by<T, F>(net: &CompareExchangeNetwork, lanes: &mut [T], mut cmp: F)
where
    F: FnMut(&T, &T) -> Ordering,
{
    assert_eq!(
        lanes.len(),
        net.width,
        "lane count must equal network width"
    );
    for stage in &net.stages {
        for c in stage {
            let ord = cmp(&lanes[c.low], &lanes[c.high]);
            let swap = match c.direction {
                Direction::Ascending => ord == Ordering::Greater,
                Direction::Descending => ord == Ordering::Less,
            };
            if swap {
                lanes.swap(c.low, c.high);
            }
        }
    }
}

pub fn apply_network<T: Ord>(net: &CompareExchangeNetwork, lanes: &mut [T]) {
    apply_network_by(net, lanes, T::cmp);
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ZeroOneOutcome {
    Pass {
        inputs: u64,
    },
    /// First binary input that came out wrong, one bit per lane.
    Fail {
        input: Vec<u8>,
    },
}

impl ZeroOneOutcome {
    pub fn passed(&self) -> bool {
        matches!(self, ZeroOneOutcome::Pass { .. })
    }
}

fn run_binary(net: &CompareExchangeNetwork, mut word: u64) -> u64 {
    for stage in &net.stages {
        for c in stage {
            let a = (word >> c.low) & 1;
            let b = (word >> c.high) & 1;
            let (lo, hi) = match c.direction {
                Direction::Ascending => (a & b, a | b),
                Direction::Descending => (a | b, a & b),
            };
            word = (word & !(1 << c.low) & !(1 << c.high)) | (lo << c.low) | (hi << c.high);
        }
    }
    word
}

/// Exhaustive 0-1 principle check over all `2^width` binary inputs.
///
/// Sorters must emit every input ascending; selectors must put the
/// `width/2` smallest values (as a multiset) on the low lanes.
pub fn verify_zero_one(net: &CompareExchangeNetwork) -> Result<ZeroOneOutcome> {
    let w = net.width;
    if w > 30 {
        return Err(Error::InvalidWidth(w));
    }
    let half = w / 2;
    let low_mask = (1u64 << half) - 1;
    for input in 0..(1u64 << w) {
        let out = run_binary(net, input);
        let ones = input.count_ones() as usize;
        let zeros = w - ones;
        let ok = match net.kind {
            // Sorted ascending: zeros on lanes 0..zeros, ones above.
            NetworkKind::Sorter => out == ((1u64 << w) - 1) & !((1u64 << zeros) - 1),
            NetworkKind::Selector => {
                let low_zeros = half - (out & low_mask).count_ones() as usize;
                low_zeros == zeros.min(half)
            }
        };
        if !ok {
            return Ok(ZeroOneOutcome::Fail {
                input: (0..w).map(|i| ((input >> i) & 1) as u8).collect(),
            });
        }
    }
    Ok(ZeroOneOutcome::Pass { inputs: 1 << w })
}
