//! Hardware cost and latency arithmetic.
//!
//! Only ratios, counts and cycle relations are modeled. Absolute LUT counts
//! come from synthesis and are read from data files, never recomputed.

use std::fmt::{self, Write as _};

use crate::crossbar::mux_input_totals;
use crate::pruning::{
    build_bitonic, make_design_sorter, CompareExchangeNetwork, SorterCost, SorterDesign,
};
use crate::{Error, Result};

/// Synthesized LUT counts of conventional crossbars (`L,N,luts`), shipped as
/// published constants.
pub const BUNDLED_TABLE2: &str = include_str!("../data/table2_crossbar_luts.csv");

fn log2_exact(x: usize, what: &str) -> Result<u32> {
    if x == 0 || !x.is_power_of_two() {
        return Err(Error::InvalidParameter(format!(
            "{what} = {x} is not a power of two"
        )));
    }
    Ok(x.trailing_zeros())
}

/// Fraction of crossbar inputs removed by the reduced wiring,
/// `1 − (L/2 + 1)/L = (L − 2)/(2L)`, as `(numerator, denominator)`.
pub fn gain_fraction(list_size: usize) -> (u64, u64) {
    let l = list_size as u64;
    (l.saturating_sub(2), 2 * l)
}

/// LUTs saved on a crossbar that costs `conventional_luts` with full
/// multiplexers: `conventional_luts · (L − 2)/(2L)`, rounded half up.
pub fn estimate_lut_gain(conventional_luts: u64, list_size: usize) -> Result<u64> {
    if list_size < 4 || !list_size.is_multiple_of(2) {
        return Err(Error::InvalidParameter(format!(
            "LUT gain needs an even list size of at least 4, got {list_size}"
        )));
    }
    let (num, den) = gain_fraction(list_size);
    let scaled = u128::from(conventional_luts) * u128::from(num);
    let den = u128::from(den);
    Ok(((2 * scaled + den) / (2 * den)) as u64)
}

/// Semi-parallel SC latency `2N + (N/P)·log2(N/(4P))` without the pruning
/// cycles.
pub fn sc_latency_cycles(n: usize, p: usize) -> Result<u64> {
    log2_exact(n, "N")?;
    log2_exact(p, "P")?;
    if 4 * p > n {
        return Err(Error::InvalidParameter(format!(
            "P = {p} exceeds N/4 = {}",
            n / 4
        )));
    }
    let ratio = (n / (4 * p)).trailing_zeros() as u64;
    Ok(2 * n as u64 + (n / p) as u64 * ratio)
}

/// SCL decoder latency: the SC latency plus `N` cycles of path pruning.
pub fn latency_cycles(n: usize, p: usize) -> Result<u64> {
    Ok(sc_latency_cycles(n, p)? + n as u64)
}

/// Register widths copied by the crossbars, in bits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WidthProfile {
    pub decoded_bits_width: u64,
    pub partial_sum_parallel_width: u64,
    pub partial_sum_serial_width: u64,
    pub pointer_width: u64,
    pub metric_width: u32,
    pub index_width: u32,
}

impl WidthProfile {
    pub fn partial_sum_width(&self) -> u64 {
        self.partial_sum_parallel_width + self.partial_sum_serial_width
    }
}

/// Decoded bits `N`; partial sums `P` plus `N/2`; pointers
/// `(log2 N − 1)·log2 L`.
pub fn crossbar_widths(n: usize, p: usize, list_size: usize) -> Result<WidthProfile> {
    let m = log2_exact(n, "N")? as u64;
    log2_exact(p, "P")?;
    let log_l = log2_exact(list_size, "L")? as u64;
    Ok(WidthProfile {
        decoded_bits_width: n as u64,
        partial_sum_parallel_width: p as u64,
        partial_sum_serial_width: n as u64 / 2,
        pointer_width: m.saturating_sub(1) * log_l,
        metric_width: 0,
        index_width: 0,
    })
}

pub fn comparator_stats(net: &CompareExchangeNetwork) -> SorterCost {
    SorterCost {
        comparators: net.comparator_count(),
        depth: net.depth(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Table2Cell {
    pub list_size: usize,
    pub block_length: usize,
    pub luts: u64,
}

/// Parses `L,N,luts` rows after a header line.
pub fn parse_table2(text: &str) -> Result<Vec<Table2Cell>> {
    let mut lines = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty());
    match lines.next() {
        Some((_, h)) if h.trim() == "L,N,luts" => {}
        _ => {
            return Err(Error::Parse {
                line: 1,
                msg: "expected header \"L,N,luts\"".into(),
            })
        }
    }
    lines
        .map(|(no, line)| {
            let err = |msg: String| Error::Parse { line: no + 1, msg };
            let f: Vec<&str> = line.split(',').map(str::trim).collect();
            if f.len() != 3 {
                return Err(err(format!("expected 3 fields, got {}", f.len())));
            }
            let num = |s: &str| s.parse::<u64>().map_err(|e| err(format!("{s:?}: {e}")));
            Ok(Table2Cell {
                list_size: num(f[0])? as usize,
                block_length: num(f[1])? as usize,
                luts: num(f[2])?,
            })
        })
        .collect()
}

pub fn bundled_table2() -> Vec<Table2Cell> {
    parse_table2(BUNDLED_TABLE2).expect("bundled table parses")
}

/// One row of a cost report.
#[derive(Debug, Clone, PartialEq)]
pub struct CostRow {
    pub quantity: String,
    pub conventional: String,
    pub proposed: String,
    pub unit: &'static str,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CostReport {
    pub n: usize,
    pub p: usize,
    pub list_size: usize,
    pub design: SorterDesign,
    pub rows: Vec<CostRow>,
}

/// Crossbar, sorter and latency figures for an `(N, P, L)` decoder with
/// `q`-bit metrics and `p_bits`-bit indexes. The conventional sorter is a
/// full bitonic sort of the `2L` candidates.
pub fn cost_report(
    n: usize,
    p: usize,
    list_size: usize,
    q: u32,
    p_bits: u32,
    design: SorterDesign,
) -> Result<CostReport> {
    if list_size < 2 || !list_size.is_multiple_of(2) {
        return Err(Error::OddListSize(list_size));
    }
    let mut widths = crossbar_widths(n, p, list_size)?;
    widths.metric_width = q;
    widths.index_width = p_bits;
    let latency = latency_cycles(n, p)?;
    let conv_sorter = comparator_stats(&build_bitonic(2 * list_size)?);
    let prop_sorter = make_design_sorter(design, list_size)?.total_cost();

    let per_slot_conv = list_size as u64;
    let per_slot_red = list_size as u64 / 2 + 1;
    let total_conv = mux_input_totals(list_size, false) as u64;
    let total_red = mux_input_totals(list_size, true) as u64;
    let (num, den) = gain_fraction(list_size);

    let mut rows = Vec::new();
    let mut row = |quantity: &str, c: String, r: String, unit: &'static str| {
        rows.push(CostRow {
            quantity: quantity.to_string(),
            conventional: c,
            proposed: r,
            unit,
        })
    };
    row(
        "mux_inputs_per_slot",
        per_slot_conv.to_string(),
        per_slot_red.to_string(),
        "inputs",
    );
    row(
        "mux_inputs_total",
        total_conv.to_string(),
        total_red.to_string(),
        "inputs",
    );
    for (name, width) in [
        ("decoded_bits_crossbar", widths.decoded_bits_width),
        ("partial_sum_crossbar", widths.partial_sum_width()),
        ("pointer_crossbar", widths.pointer_width),
    ] {
        row(
            &format!("{name}_width"),
            width.to_string(),
            width.to_string(),
            "bits",
        );
        row(
            &format!("{name}_input_bits"),
            (width * total_conv).to_string(),
            (width * total_red).to_string(),
            "bits",
        );
    }
    row(
        "crossbar_input_fraction_removed",
        "0".into(),
        format!("{}", num as f64 / den as f64),
        "ratio",
    );
    row(
        "sorter_output_bits",
        (list_size as u64 * u64::from(q + p_bits)).to_string(),
        (list_size as u64 * u64::from(q + p_bits)).to_string(),
        "bits",
    );
    row(
        "sorter_comparators",
        conv_sorter.comparators.to_string(),
        prop_sorter.comparators.to_string(),
        "comparators",
    );
    row(
        "sorter_depth",
        conv_sorter.depth.to_string(),
        prop_sorter.depth.to_string(),
        "stages",
    );
    row(
        "latency",
        latency.to_string(),
        latency.to_string(),
        "cycles",
    );

    Ok(CostReport {
        n,
        p,
        list_size,
        design,
        rows,
    })
}

impl CostReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("quantity,conventional,proposed,unit\n");
        for r in &self.rows {
            writeln!(
                out,
                "{},{},{},{}",
                r.quantity, r.conventional, r.proposed, r.unit
            )
            .unwrap();
        }
        out
    }
}

impl fmt::Display for CostReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "N={} P={} L={} sorter={} (conventional sorter: bitonic {})",
            self.n,
            self.p,
            self.list_size,
            self.design,
            2 * self.list_size
        )?;
        let w = self
            .rows
            .iter()
            .map(|r| r.quantity.len())
            .max()
            .unwrap_or(8);
        writeln!(
            f,
            "{:<w$}  {:>14}  {:>14}  unit",
            "quantity", "conventional", "proposed"
        )?;
        for r in &self.rows {
            writeln!(
                f,
                "{:<w$}  {:>14}  {:>14}  {}",
                r.quantity, r.conventional, r.proposed, r.unit
            )?;
        }
        writeln!(
            f,
            "LUT gain estimates round half up. Radix sorter costs are analytic models."
        )
    }
}
