//! Polar code construction and encoding.
//!
//! Bit order is natural (no bit reversal) in both the encoder and the
//! decoders: `x = u · F^{⊗m}` with `F = [[1, 0], [1, 1]]`.

use std::fmt::Write as _;

use crate::{Error, Result};

/// A polar code: block length, information set and the per-index
/// Bhattacharyya parameters it was selected from.
#[derive(Debug, Clone, PartialEq)]
pub struct PolarCode {
    n: usize,
    k: usize,
    info_set: Vec<usize>,
    frozen_set: Vec<usize>,
    /// `None` when the code was loaded from a frozen-set file.
    reliabilities: Option<Vec<f64>>,
    frozen_values: Vec<u8>,
    is_frozen: Vec<bool>,
}

/// Bhattacharyya parameters of the `n` synthesized channels of a BEC-like
/// channel with parameter `z0`. Index `i` follows the bits of `i` from the
/// most significant: a 0 bit applies `2z - z²`, a 1 bit applies `z²`.
pub fn bhattacharyya_parameters(n: usize, z0: f64) -> Result<Vec<f64>> {
    if n == 0 || !n.is_power_of_two() {
        return Err(Error::InvalidBlockLength(n));
    }
    if !(z0 > 0.0 && z0 < 1.0) {
        return Err(Error::InvalidZ0(z0));
    }
    let mut z = vec![z0];
    while z.len() < n {
        z = z.iter().flat_map(|&v| [2.0 * v - v * v, v * v]).collect();
    }
    Ok(z)
}

impl PolarCode {
    /// Builds the code whose information set is the `k` indexes of smallest
    /// Bhattacharyya parameter (ties go to the smaller index).
    pub fn construct(n: usize, k: usize, z0: f64) -> Result<Self> {
        let reliabilities = bhattacharyya_parameters(n, z0)?;
        if k == 0 || k > n {
            return Err(Error::InfoCountOutOfRange { k, n });
        }
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| {
            reliabilities[a]
                .total_cmp(&reliabilities[b])
                .then(a.cmp(&b))
        });
        let mut info_set = order[..k].to_vec();
        info_set.sort_unstable();
        let mut code = Self::from_info_set(n, info_set)?;
        code.reliabilities = Some(reliabilities);
        Ok(code)
    }

    /// Builds a code from an explicit information set, without reliabilities.
    pub fn from_info_set(n: usize, mut info_set: Vec<usize>) -> Result<Self> {
        if n == 0 || !n.is_power_of_two() {
            return Err(Error::InvalidBlockLength(n));
        }
        info_set.sort_unstable();
        info_set.dedup();
        let k = info_set.len();
        if k == 0 || k > n {
            return Err(Error::InfoCountOutOfRange { k, n });
        }
        if let Some(&bad) = info_set.iter().find(|&&i| i >= n) {
            return Err(Error::InvalidParameter(format!(
                "information index {bad} outside 0..{n}"
            )));
        }
        let mut is_frozen = vec![true; n];
        for &i in &info_set {
            is_frozen[i] = false;
        }
        let frozen_set: Vec<usize> = (0..n).filter(|&i| is_frozen[i]).collect();
        Ok(Self {
            n,
            k,
            frozen_values: vec![0; frozen_set.len()],
            info_set,
            frozen_set,
            reliabilities: None,
            is_frozen,
        })
    }

    /// Replaces the frozen bit values (one per frozen index, ascending).
    pub fn with_frozen_values(mut self, values: Vec<u8>) -> Result<Self> {
        if values.len() != self.frozen_set.len() {
            return Err(Error::LengthMismatch {
                expected: self.frozen_set.len(),
                actual: values.len(),
            });
        }
        self.frozen_values = values.into_iter().map(|b| b & 1).collect();
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// `log2(n)`.
    pub fn stages(&self) -> usize {
        self.n.trailing_zeros() as usize
    }

    pub fn rate(&self) -> f64 {
        self.k as f64 / self.n as f64
    }

    pub fn info_set(&self) -> &[usize] {
        &self.info_set
    }

    pub fn frozen_set(&self) -> &[usize] {
        &self.frozen_set
    }

    pub fn reliabilities(&self) -> Option<&[f64]> {
        self.reliabilities.as_deref()
    }

    pub fn frozen_values(&self) -> &[u8] {
        &self.frozen_values
    }

    pub fn is_frozen(&self, i: usize) -> bool {
        self.is_frozen[i]
    }

    /// The bit vector `u`: info bits at the information indexes in ascending
    /// order, frozen values elsewhere.
    pub fn assemble(&self, info_bits: &[u8]) -> Result<Vec<u8>> {
        if info_bits.len() != self.k {
            return Err(Error::LengthMismatch {
                expected: self.k,
                actual: info_bits.len(),
            });
        }
        let mut u = vec![0u8; self.n];
        for (&i, &b) in self.info_set.iter().zip(info_bits) {
            u[i] = b & 1;
        }
        for (&i, &b) in self.frozen_set.iter().zip(&self.frozen_values) {
            u[i] = b;
        }
        Ok(u)
    }

    pub fn encode(&self, info_bits: &[u8]) -> Result<Vec<u8>> {
        let mut x = self.assemble(info_bits)?;
        polar_transform(&mut x);
        Ok(x)
    }

    /// Picks the information bits out of a full length-`n` bit vector.
    pub fn extract_info(&self, u: &[u8]) -> Vec<u8> {
        self.info_set.iter().map(|&i| u[i]).collect()
    }

    /// Code file: `"n k"` then one frozen index per line.
    pub fn to_code_file(&self) -> String {
        let mut out = format!("{} {}\n", self.n, self.k);
        for i in &self.frozen_set {
            writeln!(out, "{i}").unwrap();
        }
        out
    }

    pub fn from_code_file(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(no, l)| (no + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty());
        let (no, header) = lines.next().ok_or(Error::Parse {
            line: 1,
            msg: "missing \"n k\" header".into(),
        })?;
        let parse = |line: usize, s: &str| {
            s.parse::<usize>().map_err(|e| Error::Parse {
                line,
                msg: format!("{s:?}: {e}"),
            })
        };
        let fields: Vec<&str> = header.split_whitespace().collect();
        if fields.len() != 2 {
            return Err(Error::Parse {
                line: no,
                msg: "expected \"n k\"".into(),
            });
        }
        let n = parse(no, fields[0])?;
        let k = parse(no, fields[1])?;
        if n == 0 || !n.is_power_of_two() {
            return Err(Error::InvalidBlockLength(n));
        }
        let mut frozen = vec![false; n];
        let mut count = 0;
        let mut last = None;
        for (no, l) in lines {
            let i = parse(no, l)?;
            if i >= n || last.is_some_and(|p| i <= p) {
                return Err(Error::Parse {
                    line: no,
                    msg: format!("frozen index {i} out of range or not ascending"),
                });
            }
            last = Some(i);
            frozen[i] = true;
            count += 1;
        }
        if count + k != n {
            return Err(Error::Parse {
                line: 1,
                msg: format!(
                    "{count} frozen indexes listed, expected {}",
                    n.saturating_sub(k)
                ),
            });
        }
        Self::from_info_set(n, (0..n).filter(|&i| !frozen[i]).collect())
    }
}

/// In-place `x ← x · F^{⊗m}` over GF(2), natural order. The transform is
/// its own inverse.
pub fn polar_transform(x: &mut [u8]) {
    let n = x.len();
    debug_assert!(n.is_power_of_two());
    let mut half = 1;
    while half < n {
        for block in x.chunks_exact_mut(2 * half) {
            let (lo, hi) = block.split_at_mut(half);
            for (a, b) in lo.iter_mut().zip(hi.iter()) {
                *a ^= *b;
            }
        }
        half *= 2;
    }
}
