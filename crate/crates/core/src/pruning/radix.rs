//! Behavioral models of radix (rank-by-pairwise-comparison) sorters.
//!
//! A radix-n sorter compares every pair of its `n` inputs once, in a single
//! parallel comparison stage, then sums the win bits per input in an adder
//! tree to obtain each input's rank. No gate-level model is attempted.

use std::cmp::Ordering;

/// Comparator count and stage depth of a sorter model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SorterCost {
    pub comparators: usize,
    pub depth: usize,
}

impl SorterCost {
    pub fn combine(self, next: SorterCost) -> SorterCost {
        SorterCost {
            comparators: self.comparators + next.comparators,
            depth: self.depth + next.depth,
        }
    }
}

fn ceil_log2(n: usize) -> usize {
    if n <= 1 {
        0
    } else {
        (usize::BITS - (n - 1).leading_zeros()) as usize
    }
}

/// `n(n−1)/2` comparisons; one comparison stage plus `⌈log2 n⌉` aggregation
/// levels.
pub fn radix_cost(n: usize) -> SorterCost {
    SorterCost {
        comparators: n * n.saturating_sub(1) / 2,
        depth: 1 + ceil_log2(n),
    }
}

/// Stable rank of every item: the number of items strictly before it, with
/// equal items ordered by position.
pub fn radix_ranks<T, F>(items: &[T], mut cmp: F) -> Vec<usize>
where
    F: FnMut(&T, &T) -> Ordering,
{
    let mut ranks = vec![0usize; items.len()];
    for i in 0..items.len() {
        for j in (i + 1)..items.len() {
            // j after i in input order, so ties count against j.
            if cmp(&items[j], &items[i]) == Ordering::Less {
                ranks[i] += 1;
            } else {
                ranks[j] += 1;
            }
        }
    }
    ranks
}

/// Keeps the `keep` best items, returned in rank order.
pub fn radix_select<T: Clone, F>(items: &[T], keep: usize, cmp: F) -> Vec<T>
where
    F: FnMut(&T, &T) -> Ordering,
{
    let ranks = radix_ranks(items, cmp);
    let mut out: Vec<Option<T>> = vec![None; keep.min(items.len())];
    for (item, &r) in items.iter().zip(&ranks) {
        if r < out.len() {
            out[r] = Some(item.clone());
        }
    }
    out.into_iter()
        .map(|x| x.expect("ranks are a permutation"))
        .collect()
}

/// Full stable sort by rank placement.
pub fn radix_sort_by<T: Clone, F>(items: &[T], cmp: F) -> Vec<T>
where
    F: FnMut(&T, &T) -> Ordering,
{
    radix_select(items, items.len(), cmp)
}
