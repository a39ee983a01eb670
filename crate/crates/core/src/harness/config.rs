//! Simulation configuration in `key = value` text form.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use crate::crossbar::CrossbarSpec;
use crate::pruning::{
    make_design_sorter, ConventionalPruner, ProposedPruner, Pruner, SorterDesign,
};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PrunerKind {
    Conventional,
    Proposed,
    Design(SorterDesign),
}

impl PrunerKind {
    pub fn sorts_by_index(self) -> bool {
        !matches!(self, PrunerKind::Conventional)
    }

    pub fn build(self, list_size: usize) -> Result<Box<dyn Pruner>> {
        Ok(match self {
            PrunerKind::Conventional => Box::new(ConventionalPruner),
            PrunerKind::Proposed => Box::new(ProposedPruner),
            PrunerKind::Design(d) => Box::new(make_design_sorter(d, list_size)?),
        })
    }

    /// Reduced crossbar for index-sorting pruners (even `L`), full otherwise.
    pub fn crossbar(self, list_size: usize) -> Result<CrossbarSpec> {
        CrossbarSpec::new(
            list_size,
            self.sorts_by_index() && list_size.is_multiple_of(2),
        )
    }
}

impl fmt::Display for PrunerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PrunerKind::Conventional => f.write_str("conventional"),
            PrunerKind::Proposed => f.write_str("proposed"),
            PrunerKind::Design(d) => write!(f, "{d}"),
        }
    }
}

impl FromStr for PrunerKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "conventional" => Ok(PrunerKind::Conventional),
            "proposed" => Ok(PrunerKind::Proposed),
            other if other.starts_with("design") => other.parse().map(PrunerKind::Design),
            other => Err(Error::InvalidParameter(format!("unknown pruner {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub n: usize,
    pub k: usize,
    pub list_size: usize,
    pub pruner: PrunerKind,
    pub snr_points_db: Vec<f64>,
    pub max_frames: u64,
    pub min_frame_errors: u64,
    pub seed: u64,
    pub z0: f64,
    pub exact_metric: bool,
    pub output_path: Option<PathBuf>,
}

impl Default for SimConfig {
    /// The N=1024, K=512, L=8 preset swept over 1.0–3.0 dB.
    fn default() -> Self {
        Self {
            n: 1024,
            k: 512,
            list_size: 8,
            pruner: PrunerKind::Proposed,
            snr_points_db: vec![1.0, 1.5, 2.0, 2.5, 3.0],
            max_frames: 10_000,
            min_frame_errors: 100,
            seed: 1,
            z0: 0.5,
            exact_metric: false,
            output_path: None,
        }
    }
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidParameter(m));
        if self.n == 0 || !self.n.is_power_of_two() {
            return Err(Error::InvalidBlockLength(self.n));
        }
        if self.k == 0 || self.k > self.n {
            return Err(Error::InfoCountOutOfRange {
                k: self.k,
                n: self.n,
            });
        }
        if self.list_size == 0 || !self.list_size.is_power_of_two() {
            return Err(Error::InvalidListSize(self.list_size));
        }
        if self.max_frames == 0 {
            return bad("max_frames must be at least 1".into());
        }
        if self.min_frame_errors == 0 {
            return bad("min_frame_errors must be at least 1".into());
        }
        if self.snr_points_db.is_empty() {
            return bad("snr_points_db is empty".into());
        }
        if let Some(s) = self.snr_points_db.iter().find(|s| !s.is_finite()) {
            return bad(format!("non-finite SNR point {s}"));
        }
        if !(self.z0 > 0.0 && self.z0 < 1.0) {
            return Err(Error::InvalidZ0(self.z0));
        }
        Ok(())
    }

    /// Parses `key = value` lines over the defaults. `#` starts a comment;
    /// lists are comma separated.
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = Self::default();
        for (no, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: String| Error::Parse { line: no + 1, msg };
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| err(format!("expected key = value, got {line:?}")))?;
            let (key, value) = (key.trim(), value.trim());
            fn num<T: FromStr>(v: &str) -> std::result::Result<T, String>
            where
                T::Err: fmt::Display,
            {
                v.parse::<T>().map_err(|e| format!("{v:?}: {e}"))
            }
            match key {
                "n" => cfg.n = num(value).map_err(err)?,
                "k" => cfg.k = num(value).map_err(err)?,
                "list_size" => cfg.list_size = num(value).map_err(err)?,
                "pruner" => cfg.pruner = value.parse().map_err(|e: Error| err(e.to_string()))?,
                "snr_points_db" => {
                    cfg.snr_points_db = value
                        .split(',')
                        .map(|v| num::<f64>(v.trim()))
                        .collect::<std::result::Result<_, _>>()
                        .map_err(err)?
                }
                "max_frames" => cfg.max_frames = num(value).map_err(err)?,
                "min_frame_errors" => cfg.min_frame_errors = num(value).map_err(err)?,
                "seed" => cfg.seed = num(value).map_err(err)?,
                "z0" => cfg.z0 = num(value).map_err(err)?,
                "exact_metric" => cfg.exact_metric = num(value).map_err(err)?,
                "output_path" => cfg.output_path = Some(PathBuf::from(value)),
                other => return Err(err(format!("unknown key {other:?}"))),
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_text(&self) -> String {
        let snr: Vec<String> = self.snr_points_db.iter().map(|s| s.to_string()).collect();
        let mut out = format!(
            "n = {}\nk = {}\nlist_size = {}\npruner = {}\nsnr_points_db = {}\nmax_frames = {}\n\
             min_frame_errors = {}\nseed = {}\nz0 = {}\nexact_metric = {}\n",
            self.n,
            self.k,
            self.list_size,
            self.pruner,
            snr.join(", "),
            self.max_frames,
            self.min_frame_errors,
            self.seed,
            self.z0,
            self.exact_metric
        );
        if let Some(p) = &self.output_path {
            out.push_str(&format!("output_path = {}\n", p.display()));
        }
        out
    }
}
