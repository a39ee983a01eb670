//! Polar-code successive cancellation list (SCL) decoding with
//! index-ordered survivor sorting.
//!
//! When the `L` surviving candidate paths are emitted sorted by candidate
//! index, each destination slot of the memory-copy crossbar can only receive
//! from `L/2 + 1` source paths instead of `L`. This crate provides:
//!
//! * [`polar_code`]: code construction (Bhattacharyya recursion) and encoding,
//! * [`channel`]: BPSK over AWGN with per-frame deterministic noise,
//! * [`scl`]: SC and SCL decoders with LLR-based path metrics,
//! * [`pruning`]: conventional and index-ordered pruners and
//!   compare-exchange network models of the hardware sorters,
//! * [`crossbar`]: the restricted crossbar and an exhaustive checker for it,
//! * [`costmodel`]: width, multiplexer, LUT-gain and latency arithmetic,
//! * [`harness`]: Monte Carlo FER runs, equivalence audits and report output.

pub mod channel;
pub mod costmodel;
pub mod crossbar;
mod error;
pub mod harness;
pub mod polar_code;
pub mod pruning;
pub mod scl;

pub use error::{Error, Result};

pub use channel::{transmit, ChannelConfig};
pub use crossbar::{allowed_sources, parent_of, CrossbarSpec};
pub use polar_code::PolarCode;
pub use pruning::{
    make_design_sorter, Candidate, CompareExchangeNetwork, ConventionalPruner, DesignSorter,
    ProposedPruner, Pruner, SorterDesign, SurvivorAssignment,
};
pub use scl::{decode_sc, decode_scl, MetricKind, PathState, SclDecoder, SclOutput};
