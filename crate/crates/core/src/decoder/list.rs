use crate::crc::CrcSpec;
use crate::error::{Error, Result};
use crate::polar::PolarCode;

use super::banks::BankPool;
use super::llr::{metric_update, stage_update, BoxplusMode};
use super::{DecodeStats, DecoderOptions, LVector};

#[derive(Debug, Clone)]
struct Path {
    // index m - 1 -> bank at stage m
    llr: Vec<usize>,
    partial: Vec<usize>,
    decisions: Vec<u8>,
    metric: f64,
    trace: Option<Vec<f64>>,
}

/// Working state of one list decode: the paths and the per-stage bank pools.
#[derive(Debug)]
pub struct ListState<'a> {
    n: usize,
    channel: &'a [f64],
    mode: BoxplusMode,
    paths: Vec<Path>,
    llr_pools: Vec<BankPool<f64>>,
    partial_pools: Vec<BankPool<u8>>,
    level: usize,
    llr_updates: u64,
    survivors: Option<Vec<usize>>,
    scratch: Vec<u8>,
}

impl<'a> ListState<'a> {
    /// A state holding a single empty path. Stage `m` may hold at most
    /// `lvec.limit(m)` banks.
    pub fn new(channel: &'a [f64], lvec: &LVector, opts: &DecoderOptions) -> Self {
        let n = lvec.stages();
        assert_eq!(channel.len(), 1 << n, "channel LLR length must be 2^n");
        let mut llr_pools: Vec<BankPool<f64>> = (1..=n).map(|m| BankPool::new(1 << (n - m), lvec.limit(m))).collect();
        let mut partial_pools: Vec<BankPool<u8>> =
            (1..=n).map(|m| BankPool::new(1 << (n - m), lvec.limit(m))).collect();
        let root = Path {
            llr: llr_pools.iter_mut().map(BankPool::allocate).collect(),
            partial: partial_pools.iter_mut().map(BankPool::allocate).collect(),
            decisions: Vec::with_capacity(1 << n),
            metric: 0.0,
            trace: opts.record_llr_trace.then(Vec::new),
        };
        Self {
            n,
            channel,
            mode: opts.boxplus,
            paths: vec![root],
            llr_pools,
            partial_pools,
            level: 0,
            llr_updates: 0,
            survivors: opts.record_survivors.then(Vec::new),
            scratch: Vec::with_capacity(1 << n),
        }
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn path_count(&self) -> usize {
        self.paths.len()
    }

    pub fn decisions(&self, path: usize) -> &[u8] {
        &self.paths[path].decisions
    }

    pub fn metric(&self, path: usize) -> f64 {
        self.paths[path].metric
    }

    /// Index of the stage-`m` LLR bank of `path`.
    pub fn bank_of(&self, path: usize, stage: usize) -> usize {
        self.paths[path].llr[stage - 1]
    }

    pub fn bank_ref_count(&self, stage: usize, bank: usize) -> u32 {
        self.llr_pools[stage - 1].ref_count(bank)
    }

    pub fn bank_contents(&self, stage: usize, bank: usize) -> &[f64] {
        self.llr_pools[stage - 1].get(bank)
    }

    /// Duplicates `path` without copying any bank; returns the new path index.
    pub fn share_path(&mut self, path: usize) -> usize {
        let copy = self.paths[path].clone();
        self.retain(&copy);
        self.paths.push(copy);
        self.paths.len() - 1
    }

    /// Copy-on-write access to the stage-`m` LLR bank of `path`. A bank shared
    /// with other paths is copied into a fresh bank the path is rebound to.
    pub fn bank_for_write(&mut self, path: usize, stage: usize) -> usize {
        let old = self.paths[path].llr[stage - 1];
        let id = self.llr_pools[stage - 1].make_unique(old);
        self.paths[path].llr[stage - 1] = id;
        id
    }

    pub fn bank_for_write_mut(&mut self, path: usize, stage: usize) -> &mut [f64] {
        let id = self.bank_for_write(path, stage);
        self.llr_pools[stage - 1].get_mut(id)
    }

    pub fn live_banks(&self) -> Vec<usize> {
        self.llr_pools.iter().map(BankPool::live).collect()
    }

    pub fn peak_banks(&self) -> Vec<usize> {
        self.llr_pools.iter().map(BankPool::peak).collect()
    }

    fn retain(&mut self, path: &Path) {
        for (pool, &id) in self.llr_pools.iter_mut().zip(&path.llr) {
            pool.retain(id);
        }
        for (pool, &id) in self.partial_pools.iter_mut().zip(&path.partial) {
            pool.retain(id);
        }
    }

    fn release(&mut self, path: &Path) {
        for (pool, &id) in self.llr_pools.iter_mut().zip(&path.llr) {
            pool.release(id);
        }
        for (pool, &id) in self.partial_pools.iter_mut().zip(&path.partial) {
            pool.release(id);
        }
    }

    /// `Γ_n^(i)` of every path at the current level.
    fn compute_llrs(&mut self) -> Vec<f64> {
        let n = self.n;
        let i = self.level;
        let start = if i == 0 { 1 } else { n - i.trailing_zeros() as usize };
        let mut out = Vec::with_capacity(self.paths.len());
        for path in self.paths.iter_mut() {
            for m in start..=n {
                let lower = (i >> (n - m)) & 1 == 1;
                let id = self.llr_pools[m - 1].make_unique_for_overwrite(path.llr[m - 1]);
                path.llr[m - 1] = id;
                let (left, right) = self.llr_pools.split_at_mut(m - 1);
                let parent: &[f64] = if m == 1 {
                    self.channel
                } else {
                    left[m - 2].get(path.llr[m - 2])
                };
                let dst = right[0].get_mut(id);
                let ps = self.partial_pools[m - 1].get(path.partial[m - 1]);
                stage_update(parent, dst, ps, lower, self.mode);
                self.llr_updates += dst.len() as u64;
            }
            out.push(self.llr_pools[n - 1].get(path.llr[n - 1])[0]);
        }
        out
    }

    /// Replaces the paths by the chosen extensions, given in ascending
    /// (parent, bit) order.
    fn commit(&mut self, chosen: &[Candidate], gammas: &[f64]) {
        let old = std::mem::take(&mut self.paths);
        let mut children = vec![0usize; old.len()];
        for c in chosen {
            children[c.parent] += 1;
        }
        let mut old: Vec<Option<Path>> = old.into_iter().map(Some).collect();
        for (p, &count) in children.iter().enumerate() {
            if count == 0 {
                let dead = old[p].take().expect("parent present");
                self.release(&dead);
            }
        }
        let mut next = Vec::with_capacity(chosen.len());
        for c in chosen {
            children[c.parent] -= 1;
            let mut child = if children[c.parent] == 0 {
                old[c.parent].take().expect("parent present")
            } else {
                let copy = old[c.parent].as_ref().expect("parent present").clone();
                self.retain(&copy);
                copy
            };
            child.decisions.push(c.bit);
            child.metric = c.metric;
            if let Some(trace) = child.trace.as_mut() {
                trace.push(gammas[c.parent]);
            }
            next.push(child);
        }
        self.paths = next;
        if let Some(s) = self.survivors.as_mut() {
            s.push(self.paths.len());
        }
    }

    /// Propagates the newest decision of every path into its partial sums.
    fn update_partial_sums(&mut self) {
        let n = self.n;
        let i = self.level;
        let mut cur = std::mem::take(&mut self.scratch);
        for path in self.paths.iter_mut() {
            cur.clear();
            cur.push(*path.decisions.last().expect("decided"));
            for m in (1..=n).rev() {
                let pool = &mut self.partial_pools[m - 1];
                if (i >> (n - m)) & 1 == 0 {
                    let id = pool.make_unique_for_overwrite(path.partial[m - 1]);
                    path.partial[m - 1] = id;
                    pool.get_mut(id).copy_from_slice(&cur);
                    break;
                }
                let ps = pool.get(path.partial[m - 1]);
                let half = cur.len();
                cur.extend_from_within(..);
                for k in 0..half {
                    cur[k] ^= ps[k];
                }
            }
        }
        self.scratch = cur;
    }

    fn finish(self) -> (Vec<Path>, DecodeStats) {
        let stats = DecodeStats {
            llr_updates: self.llr_updates,
            peak_banks: self.peak_banks(),
            survivors_per_level: self.survivors,
        };
        (self.paths, stats)
    }
}

#[derive(Debug, Clone, Copy)]
struct Candidate {
    parent: usize,
    bit: u8,
    metric: f64,
}

/// A path of the final list.
#[derive(Debug, Clone, PartialEq)]
pub struct PathSummary {
    pub decisions: Vec<u8>,
    pub metric: f64,
    /// `Γ_n^(i)` seen along the path, when recording was requested.
    pub llr_trace: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ListDecoding {
    /// Decisions `û` of the selected path.
    pub decisions: Vec<u8>,
    pub paths: Vec<PathSummary>,
    pub selected: usize,
    /// No path passed the final CRC; the smallest-metric path was returned.
    pub detected_error: bool,
    pub stats: DecodeStats,
}

impl ListDecoding {
    /// `u_A` of the selected path.
    pub fn payload(&self, code: &PolarCode) -> Vec<u8> {
        code.extract_payload(&self.decisions)
    }

    /// Payload with the trailing `crc_bits` removed.
    pub fn message(&self, code: &PolarCode, crc_bits: usize) -> Vec<u8> {
        let mut p = self.payload(code);
        p.truncate(p.len().saturating_sub(crc_bits));
        p
    }
}

/// Predicate over a decision prefix.
pub(crate) type Accept<'c> = &'c dyn Fn(&[u8]) -> bool;

/// A filter applied to candidates at one level.
pub(crate) struct LevelCheck<'c> {
    pub level: usize,
    pub accept: Accept<'c>,
}

pub(crate) struct ListOutcome {
    pub paths: Vec<PathSummary>,
    pub selected: usize,
    pub detected_error: bool,
    /// Some level check rejected every candidate.
    pub check_fallback: bool,
    pub stats: DecodeStats,
}

/// Runs the list decoder under the survivor schedule of `lvec`.
///
/// At a level with a [`LevelCheck`], only candidates it accepts compete for
/// the budget; if none is accepted all of them compete. After the last level
/// the first smallest-metric path accepted by `final_accept` is selected.
pub(crate) fn run_list_decoder(
    llrs: &[f64],
    code: &PolarCode,
    lvec: &LVector,
    opts: &DecoderOptions,
    checks: &[LevelCheck<'_>],
    final_accept: Option<Accept<'_>>,
) -> Result<ListOutcome> {
    if llrs.len() != code.len() {
        return Err(Error::dimension(code.len(), llrs.len()));
    }
    lvec.check_exponent(code.exponent())?;
    let len = code.len();
    let mut state = ListState::new(llrs, lvec, opts);
    let mut candidates: Vec<Candidate> = Vec::with_capacity(2 * lvec.list_size());
    let mut order: Vec<usize> = Vec::with_capacity(2 * lvec.list_size());
    let mut chosen: Vec<Candidate> = Vec::with_capacity(2 * lvec.list_size());
    let mut buf: Vec<u8> = Vec::with_capacity(len);
    let mut check_fallback = false;

    for i in 0..len {
        let gammas = state.compute_llrs();
        candidates.clear();
        let frozen = code.is_frozen(i);
        for (p, (&gamma, path)) in gammas.iter().zip(&state.paths).enumerate() {
            candidates.push(Candidate {
                parent: p,
                bit: 0,
                metric: metric_update(path.metric, gamma, 0),
            });
            if !frozen {
                candidates.push(Candidate {
                    parent: p,
                    bit: 1,
                    metric: metric_update(path.metric, gamma, 1),
                });
            }
        }

        order.clear();
        if let Some(check) = checks.iter().find(|c| c.level == i) {
            for (idx, c) in candidates.iter().enumerate() {
                buf.clear();
                buf.extend_from_slice(&state.paths[c.parent].decisions);
                buf.push(c.bit);
                if (check.accept)(&buf) {
                    order.push(idx);
                }
            }
            if order.is_empty() {
                check_fallback = true;
            }
        }
        if order.is_empty() {
            order.extend(0..candidates.len());
        }

        let budget = lvec.survivor_budget(i);
        if order.len() > budget {
            // stable: ties keep (parent, bit) order
            order.sort_by(|&a, &b| candidates[a].metric.total_cmp(&candidates[b].metric));
            order.truncate(budget);
            order.sort_unstable();
        }
        chosen.clear();
        chosen.extend(order.iter().map(|&idx| candidates[idx]));
        state.commit(&chosen, &gammas);
        if i + 1 < len {
            state.update_partial_sums();
        }
        state.level += 1;
    }

    let (paths, stats) = state.finish();
    let best = |accept: &dyn Fn(&Path) -> bool| {
        let mut best: Option<usize> = None;
        for (idx, p) in paths.iter().enumerate() {
            if accept(p) && best.is_none_or(|b| p.metric < paths[b].metric) {
                best = Some(idx);
            }
        }
        best
    };
    let (selected, detected_error) = match final_accept {
        Some(f) => match best(&|p: &Path| f(&p.decisions)) {
            Some(idx) => (idx, false),
            None => (best(&|_| true).expect("non-empty list"), true),
        },
        None => (best(&|_| true).expect("non-empty list"), false),
    };
    let paths = paths
        .into_iter()
        .map(|p| PathSummary {
            decisions: p.decisions,
            metric: p.metric,
            llr_trace: p.trace,
        })
        .collect();
    Ok(ListOutcome {
        paths,
        selected,
        detected_error,
        check_fallback,
        stats,
    })
}

fn into_decoding(out: ListOutcome) -> ListDecoding {
    ListDecoding {
        decisions: out.paths[out.selected].decisions.clone(),
        paths: out.paths,
        selected: out.selected,
        detected_error: out.detected_error,
        stats: out.stats,
    }
}

/// SCL with list size `list_size`, optionally selecting by a CRC over `u_A`.
pub fn scl_decode(
    llrs: &[f64],
    code: &PolarCode,
    list_size: usize,
    final_crc: Option<&CrcSpec>,
) -> Result<ListDecoding> {
    if list_size == 0 {
        return Err(Error::param("list size must be at least 1"));
    }
    let lvec = LVector::uniform(code.exponent(), list_size)?;
    rscl_decode_with(llrs, code, &lvec, final_crc, &DecoderOptions::default())
}

/// Reduced-complexity SCL: the survivor count at level `i` is `L_m` with
/// `m = n - f(i+1)`, and `L_n` at the last level.
pub fn rscl_decode(
    llrs: &[f64],
    code: &PolarCode,
    lvec: &LVector,
    final_crc: Option<&CrcSpec>,
) -> Result<ListDecoding> {
    rscl_decode_with(llrs, code, lvec, final_crc, &DecoderOptions::default())
}

pub fn rscl_decode_with(
    llrs: &[f64],
    code: &PolarCode,
    lvec: &LVector,
    final_crc: Option<&CrcSpec>,
    opts: &DecoderOptions,
) -> Result<ListDecoding> {
    match final_crc {
        Some(crc) => {
            if code.dimension() <= crc.degree() {
                return Err(Error::param(format!(
                    "{} unfrozen bits cannot carry a degree-{} CRC",
                    code.dimension(),
                    crc.degree()
                )));
            }
            let accept = |u: &[u8]| {
                let payload: Vec<u8> = code.unfrozen().iter().map(|&i| u[i]).collect();
                crc.check_unchecked(&payload)
            };
            run_list_decoder(llrs, code, lvec, opts, &[], Some(&accept)).map(into_decoding)
        }
        None => run_list_decoder(llrs, code, lvec, opts, &[], None).map(into_decoding),
    }
}
