//! Two-stage sorters: a metric stage that extracts the `L` survivors from
//! `2L` candidates, then an index stage that orders them by candidate index.
//!
//! | design | metric stage | index stage |
//! |--------|--------------|-------------|
//! | 1      | MVF          | bitonic     |
//! | 2      | MVF          | radix-L     |
//! | 3      | radix-2L     | radix-L     |

use std::fmt;
use std::str::FromStr;

use super::network::{apply_network_by, build_bitonic, build_mvf, CompareExchangeNetwork};
use super::radix::{radix_cost, radix_select, radix_sort_by, SorterCost};
use super::{validate_candidates, Candidate, Pruner, SurvivorAssignment};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SorterDesign {
    MvfBitonic = 1,
    MvfRadix = 2,
    RadixRadix = 3,
}

impl SorterDesign {
    pub const ALL: [SorterDesign; 3] = [Self::MvfBitonic, Self::MvfRadix, Self::RadixRadix];

    pub fn from_id(id: u8) -> Result<Self> {
        match id {
            1 => Ok(Self::MvfBitonic),
            2 => Ok(Self::MvfRadix),
            3 => Ok(Self::RadixRadix),
            _ => Err(Error::UnknownDesign(id)),
        }
    }

    pub fn id(self) -> u8 {
        self as u8
    }
}

impl fmt::Display for SorterDesign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "design{}", self.id())
    }
}

impl FromStr for SorterDesign {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let id = s.trim().trim_start_matches("design");
        id.parse::<u8>()
            .map_err(|_| Error::InvalidParameter(format!("unknown sorter design {s:?}")))
            .and_then(Self::from_id)
    }
}

#[derive(Debug, Clone)]
pub enum MetricStage {
    Mvf(CompareExchangeNetwork),
    Radix { inputs: usize },
}

#[derive(Debug, Clone)]
pub enum IndexStage {
    Bitonic(CompareExchangeNetwork),
    Radix { inputs: usize },
}

#[derive(Debug, Clone)]
pub struct DesignSorter {
    design: SorterDesign,
    list_size: usize,
    metric_stage: MetricStage,
    index_stage: IndexStage,
}

/// Builds the two-stage sorter for `design` and list size `list_size`
/// (a power of two).
pub fn make_design_sorter(design: SorterDesign, list_size: usize) -> Result<DesignSorter> {
    if list_size == 0 || !list_size.is_power_of_two() {
        return Err(Error::InvalidListSize(list_size));
    }
    let metric_stage = match design {
        SorterDesign::MvfBitonic | SorterDesign::MvfRadix => {
            MetricStage::Mvf(build_mvf(2 * list_size)?)
        }
        SorterDesign::RadixRadix => MetricStage::Radix {
            inputs: 2 * list_size,
        },
    };
    let index_stage = match design {
        SorterDesign::MvfBitonic => IndexStage::Bitonic(build_bitonic(list_size)?),
        SorterDesign::MvfRadix | SorterDesign::RadixRadix => {
            IndexStage::Radix { inputs: list_size }
        }
    };
    Ok(DesignSorter {
        design,
        list_size,
        metric_stage,
        index_stage,
    })
}

impl DesignSorter {
    pub fn design(&self) -> SorterDesign {
        self.design
    }

    pub fn list_size(&self) -> usize {
        self.list_size
    }

    pub fn metric_stage(&self) -> &MetricStage {
        &self.metric_stage
    }

    pub fn index_stage(&self) -> &IndexStage {
        &self.index_stage
    }

    pub fn metric_stage_cost(&self) -> SorterCost {
        match &self.metric_stage {
            MetricStage::Mvf(net) => SorterCost {
                comparators: net.comparator_count(),
                depth: net.depth(),
            },
            MetricStage::Radix { inputs } => radix_cost(*inputs),
        }
    }

    pub fn index_stage_cost(&self) -> SorterCost {
        match &self.index_stage {
            IndexStage::Bitonic(net) => SorterCost {
                comparators: net.comparator_count(),
                depth: net.depth(),
            },
            IndexStage::Radix { inputs } => radix_cost(*inputs),
        }
    }

    pub fn total_cost(&self) -> SorterCost {
        self.metric_stage_cost().combine(self.index_stage_cost())
    }
}

impl Pruner for DesignSorter {
    fn prune(&self, candidates: &[Candidate]) -> Result<SurvivorAssignment> {
        let l = validate_candidates(candidates)?;
        if l != self.list_size {
            return Err(Error::MalformedCandidates(format!(
                "{} candidates for list size {}",
                candidates.len(),
                self.list_size
            )));
        }
        // Lane j carries candidate j + 1.
        let mut lanes = candidates.to_vec();
        lanes.sort_by_key(|c| c.index);

        let mut survivors = match &self.metric_stage {
            MetricStage::Mvf(net) => {
                apply_network_by(net, &mut lanes, Candidate::cmp_by_metric);
                lanes.truncate(l);
                lanes
            }
            MetricStage::Radix { .. } => radix_select(&lanes, l, Candidate::cmp_by_metric),
        };
        let ordered = match &self.index_stage {
            IndexStage::Bitonic(net) => {
                apply_network_by(net, &mut survivors, |a, b| a.index.cmp(&b.index));
                survivors
            }
            IndexStage::Radix { .. } => radix_sort_by(&survivors, |a, b| a.index.cmp(&b.index)),
        };
        Ok(SurvivorAssignment {
            ordered,
            sorted_by_index: true,
        })
    }

    fn sorts_by_index(&self) -> bool {
        true
    }

    fn name(&self) -> String {
        self.design.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::super::{candidates_from_metrics, prune_proposed};
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn design_costs() {
        let d1 = make_design_sorter(SorterDesign::MvfBitonic, 8).unwrap();
        assert_eq!(d1.metric_stage_cost().comparators, 56);
        assert_eq!(d1.index_stage_cost().comparators, 24);
        assert_eq!(
            d1.total_cost(),
            SorterCost {
                comparators: 80,
                depth: 13
            }
        );

        let d2 = make_design_sorter(SorterDesign::MvfRadix, 8).unwrap();
        assert_eq!(d2.total_cost().comparators, 56 + 28);

        let d3 = make_design_sorter(SorterDesign::RadixRadix, 4).unwrap();
        assert_eq!(d3.metric_stage_cost().comparators, 28);
    }

    #[test]
    fn table_one_ordering() {
        for l in [8, 16, 32, 64] {
            let c: Vec<SorterCost> = SorterDesign::ALL
                .iter()
                .map(|&d| make_design_sorter(d, l).unwrap().total_cost())
                .collect();
            assert!(c[0].comparators <= c[1].comparators, "L={l}");
            assert!(c[1].comparators <= c[2].comparators, "L={l}");
            assert!(c[2].depth < c[0].depth, "L={l}");
            assert!(
                c[2].depth <= c[1].depth && c[1].depth <= c[0].depth,
                "L={l}"
            );
        }
    }

    #[test]
    fn design_ids() {
        assert_eq!(SorterDesign::from_id(2).unwrap(), SorterDesign::MvfRadix);
        assert!(matches!(
            SorterDesign::from_id(4),
            Err(Error::UnknownDesign(4))
        ));
        assert_eq!(
            "design3".parse::<SorterDesign>().unwrap(),
            SorterDesign::RadixRadix
        );
        assert_eq!(
            "1".parse::<SorterDesign>().unwrap(),
            SorterDesign::MvfBitonic
        );
        assert!("design9".parse::<SorterDesign>().is_err());
        assert!(make_design_sorter(SorterDesign::MvfRadix, 6).is_err());
    }

    #[test]
    fn wrong_list_size_rejected() {
        let d = make_design_sorter(SorterDesign::MvfBitonic, 4).unwrap();
        let c = candidates_from_metrics(&[0.0; 4]);
        assert!(d.prune(&c).is_err());
    }

    proptest! {
        #[test]
        fn designs_match_proposed(log_l in 0u32..5, design in 1u8..=3, metrics in proptest::collection::vec(0u8..8, 32)) {
            let l = 1usize << log_l;
            let m: Vec<f64> = metrics[..2 * l].iter().map(|&x| f64::from(x)).collect();
            let c = candidates_from_metrics(&m);
            let sorter = make_design_sorter(SorterDesign::from_id(design).unwrap(), l).unwrap();
            prop_assert_eq!(sorter.prune(&c).unwrap(), prune_proposed(&c).unwrap());
        }
    }
}
