//! LLR-domain SC, SCL and reduced-complexity SCL decoding.
//!
//! The list decoders keep one pool of LLR banks per stage `m`, each bank
//! holding `2^(n-m)` values. Paths refer to banks by index and share them
//! until one of them writes (lazy copy). An [`LVector`] caps the number of
//! banks per stage by limiting how many candidates survive at each level.

mod banks;
mod list;
mod llr;
pub mod oracle;
mod sc;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use banks::BankPool;
pub use list::{rscl_decode, rscl_decode_with, scl_decode, ListDecoding, ListState, PathSummary};
pub(crate) use list::{run_list_decoder, Accept, LevelCheck};
pub use llr::{boxplus, boxplus_min_sum, combine, g_update, metric_update, BoxplusMode};
pub use sc::{sc_decode, sc_decode_with, ScDecoding, ScState};

/// Per-stage bank limits `[L_1, ..., L_n]`, non-decreasing, with `L_n` the
/// nominal list size.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LVector(Vec<usize>);

impl LVector {
    pub fn new(limits: Vec<usize>) -> Result<Self> {
        if limits.is_empty() {
            return Err(Error::param("L-vector must have at least one stage"));
        }
        if limits.contains(&0) {
            return Err(Error::param("L-vector entries must be positive"));
        }
        if limits.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::param(format!("L-vector {limits:?} is not non-decreasing")));
        }
        Ok(Self(limits))
    }

    pub fn uniform(n: usize, list_size: usize) -> Result<Self> {
        Self::new(vec![list_size; n])
    }

    pub fn stages(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    /// `L_n`.
    pub fn list_size(&self) -> usize {
        *self.0.last().expect("non-empty")
    }

    /// `L_m` for `m` in `1..=n`.
    pub fn limit(&self, stage: usize) -> usize {
        self.0[stage - 1]
    }

    pub fn is_uniform(&self) -> bool {
        self.0.iter().all(|&l| l == self.0[0])
    }

    /// Stage whose sub-graph boundary level `i` sits on: `n - f(i+1)`, or `n`
    /// at the last level.
    pub fn boundary_stage(&self, level: usize) -> usize {
        let n = self.stages();
        assert!(level < 1 << n, "level {level} out of range");
        if level + 1 == 1 << n {
            n
        } else {
            n - (level + 1).trailing_zeros() as usize
        }
    }

    /// Number of candidates kept after extension at `level`.
    pub fn survivor_budget(&self, level: usize) -> usize {
        self.limit(self.boundary_stage(level))
    }

    pub fn survivor_schedule(&self) -> Vec<usize> {
        (0..1usize << self.stages()).map(|i| self.survivor_budget(i)).collect()
    }

    pub fn check_exponent(&self, n: usize) -> Result<()> {
        if self.stages() != n {
            return Err(Error::param(format!(
                "L-vector has {} stages but the code has n = {n}",
                self.stages()
            )));
        }
        Ok(())
    }
}

impl fmt::Display for LVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut groups: Vec<(usize, usize)> = Vec::new();
        for &l in &self.0 {
            match groups.last_mut() {
                Some((v, c)) if *v == l => *c += 1,
                _ => groups.push((l, 1)),
            }
        }
        let parts: Vec<String> = groups
            .into_iter()
            .map(|(v, c)| if c == 1 { v.to_string() } else { format!("{v}x{c}") })
            .collect();
        f.write_str(&parts.join(","))
    }
}

impl FromStr for LVector {
    type Err = Error;

    /// Comma-separated entries, each either `L` or `LxCOUNT`, e.g. `1x3,32x11`.
    fn from_str(s: &str) -> Result<Self> {
        let mut out = Vec::new();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let bad = || Error::param(format!("bad L-vector entry `{part}`"));
            match part.split_once(['x', 'X', '*']) {
                Some((v, c)) => {
                    let v: usize = v.trim().parse().map_err(|_| bad())?;
                    let c: usize = c.trim().parse().map_err(|_| bad())?;
                    out.extend(std::iter::repeat_n(v, c));
                }
                None => out.push(part.parse().map_err(|_| bad())?),
            }
        }
        Self::new(out)
    }
}

impl Serialize for LVector {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

impl<'de> Deserialize<'de> for LVector {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<usize>::deserialize(d)?;
        LVector::new(v).map_err(serde::de::Error::custom)
    }
}

/// Per-decode instrumentation.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct DecodeStats {
    /// Number of intermediate LLRs computed.
    pub llr_updates: u64,
    /// Peak number of live LLR banks at stage `m`, index `m - 1`.
    pub peak_banks: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub survivors_per_level: Option<Vec<usize>>,
}

impl DecodeStats {
    /// `Σ_m peak_banks[m] · 2^(n-m)`.
    pub fn peak_space_units(&self) -> u64 {
        let n = self.peak_banks.len();
        self.peak_banks
            .iter()
            .enumerate()
            .map(|(idx, &b)| (b as u64) << (n - idx - 1))
            .sum()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("stats serialize")
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct DecoderOptions {
    pub boxplus: BoxplusMode,
    pub record_survivors: bool,
    /// Keep `Γ_n^(i)` along every path.
    pub record_llr_trace: bool,
}
