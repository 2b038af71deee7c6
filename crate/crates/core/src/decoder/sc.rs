use crate::error::{Error, Result};
use crate::polar::PolarCode;

use super::llr::{stage_update, BoxplusMode};
use super::DecodeStats;

/// Single-path successive cancellation state.
///
/// Call [`next_llr`](Self::next_llr) to obtain `Γ_n^(i)` for the current level,
/// then [`push_decision`](Self::push_decision) with the bit to commit. Any
/// decision sequence may be fed, which makes this usable as a genie decoder.
#[derive(Debug, Clone)]
pub struct ScState<'a> {
    n: usize,
    channel: &'a [f64],
    // llr[m - 1] holds the 2^(n-m) inputs of the current stage-m sub-code
    llr: Vec<Vec<f64>>,
    // partial[m - 1] holds the codeword of the last completed upper stage-m block
    partial: Vec<Vec<u8>>,
    level: usize,
    pending: bool,
    mode: BoxplusMode,
    llr_updates: u64,
    codeword: Option<Vec<u8>>,
    scratch: Vec<u8>,
}

impl<'a> ScState<'a> {
    pub fn new(n: usize, channel: &'a [f64]) -> Self {
        Self::with_mode(n, channel, BoxplusMode::Exact)
    }

    pub fn with_mode(n: usize, channel: &'a [f64], mode: BoxplusMode) -> Self {
        assert_eq!(channel.len(), 1 << n, "channel LLR length must be 2^n");
        Self {
            n,
            channel,
            llr: (1..=n).map(|m| vec![0.0; 1 << (n - m)]).collect(),
            partial: (1..=n).map(|m| vec![0u8; 1 << (n - m)]).collect(),
            level: 0,
            pending: false,
            mode,
            llr_updates: 0,
            codeword: None,
            scratch: Vec::with_capacity(1 << n),
        }
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn llr_updates(&self) -> u64 {
        self.llr_updates
    }

    /// `Γ_n^(i)` for the current level `i`.
    pub fn next_llr(&mut self) -> f64 {
        let n = self.n;
        let i = self.level;
        assert!(i < 1 << n, "all levels already decided");
        if !self.pending {
            let start = if i == 0 { 1 } else { n - i.trailing_zeros() as usize };
            for m in start..=n {
                let lower = (i >> (n - m)) & 1 == 1;
                let (left, right) = self.llr.split_at_mut(m - 1);
                let parent: &[f64] = if m == 1 { self.channel } else { &left[m - 2] };
                stage_update(parent, &mut right[0], &self.partial[m - 1], lower, self.mode);
                self.llr_updates += right[0].len() as u64;
            }
            self.pending = true;
        }
        self.llr[n - 1][0]
    }

    pub fn push_decision(&mut self, bit: u8) {
        if !self.pending {
            self.next_llr();
        }
        let n = self.n;
        let i = self.level;
        let mut cur = std::mem::take(&mut self.scratch);
        cur.clear();
        cur.push(bit & 1);
        let mut stored = false;
        for m in (1..=n).rev() {
            let ps = &mut self.partial[m - 1];
            if (i >> (n - m)) & 1 == 0 {
                ps.copy_from_slice(&cur);
                stored = true;
                break;
            }
            let half = cur.len();
            cur.extend_from_within(..);
            for k in 0..half {
                cur[k] ^= ps[k];
            }
        }
        if !stored {
            self.codeword = Some(cur.clone());
        }
        self.scratch = cur;
        self.level += 1;
        self.pending = false;
    }

    /// Re-encoded decisions, available once every level is decided.
    pub fn codeword(&self) -> Option<&[u8]> {
        self.codeword.as_deref()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScDecoding {
    pub decisions: Vec<u8>,
    /// Stage-0 partial sums, equal to the re-encoded decisions.
    pub codeword: Vec<u8>,
    pub stats: DecodeStats,
}

/// Successive cancellation: frozen levels decide 0, unfrozen levels decide 0
/// iff `Γ_n^(i) > 0`.
pub fn sc_decode(llrs: &[f64], code: &PolarCode) -> Result<ScDecoding> {
    sc_decode_with(llrs, code, BoxplusMode::Exact)
}

pub fn sc_decode_with(llrs: &[f64], code: &PolarCode, mode: BoxplusMode) -> Result<ScDecoding> {
    if llrs.len() != code.len() {
        return Err(Error::dimension(code.len(), llrs.len()));
    }
    let n = code.exponent();
    let mut state = ScState::with_mode(n, llrs, mode);
    let mut decisions = Vec::with_capacity(code.len());
    for i in 0..code.len() {
        let gamma = state.next_llr();
        let bit = if code.is_frozen(i) || gamma > 0.0 { 0 } else { 1 };
        state.push_decision(bit);
        decisions.push(bit);
    }
    let stats = DecodeStats {
        llr_updates: state.llr_updates(),
        peak_banks: vec![1; n],
        survivors_per_level: None,
    };
    Ok(ScDecoding {
        decisions,
        codeword: state.codeword().expect("all levels decided").to_vec(),
        stats,
    })
}
