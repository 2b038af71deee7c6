//! Scalar LLR-domain operations shared by the SC and list decoders.

use serde::{Deserialize, Serialize};

/// How check-node LLRs are combined.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoxplusMode {
    #[default]
    Exact,
    /// `sign(a)·sign(b)·min(|a|, |b|)`
    MinSum,
}

/// `ln((e^(a+b) + 1) / (e^a + e^b))`, evaluated without overflow.
#[inline]
pub fn boxplus(a: f64, b: f64) -> f64 {
    boxplus_min_sum(a, b) + (-(a + b).abs()).exp().ln_1p() - (-(a - b).abs()).exp().ln_1p()
}

#[inline]
pub fn boxplus_min_sum(a: f64, b: f64) -> f64 {
    let mag = a.abs().min(b.abs());
    if (a < 0.0) != (b < 0.0) {
        -mag
    } else {
        mag
    }
}

#[inline]
pub fn combine(a: f64, b: f64, mode: BoxplusMode) -> f64 {
    match mode {
        BoxplusMode::Exact => boxplus(a, b),
        BoxplusMode::MinSum => boxplus_min_sum(a, b),
    }
}

/// Lower-branch update: `b + a` when the partial sum is 0, `b - a` otherwise.
#[inline]
pub fn g_update(a: f64, b: f64, partial_sum: u8) -> f64 {
    if partial_sum & 1 == 0 {
        b + a
    } else {
        b - a
    }
}

/// `M + ln(1 + exp(-(-1)^decision · llr))`; smaller metrics are more likely.
#[inline]
pub fn metric_update(metric: f64, llr: f64, decision: u8) -> f64 {
    let x = if decision & 1 == 0 { -llr } else { llr };
    let penalty = if x > 0.0 {
        x + (-x).exp().ln_1p()
    } else {
        x.exp().ln_1p()
    };
    metric + penalty
}

/// Computes the LLRs of one stage from the stage to its left.
///
/// `parent` has twice the length of `out`. `lower` selects the g-update with
/// the partial sums of the already decoded upper half.
#[inline]
pub(crate) fn stage_update(parent: &[f64], out: &mut [f64], partial_sums: &[u8], lower: bool, mode: BoxplusMode) {
    let half = out.len();
    let (upper_in, lower_in) = parent.split_at(half);
    if lower {
        for (((o, &a), &b), &s) in out.iter_mut().zip(upper_in).zip(lower_in).zip(partial_sums) {
            *o = g_update(a, b, s);
        }
    } else {
        match mode {
            BoxplusMode::Exact => {
                for ((o, &a), &b) in out.iter_mut().zip(upper_in).zip(lower_in) {
                    *o = boxplus(a, b);
                }
            }
            BoxplusMode::MinSum => {
                for ((o, &a), &b) in out.iter_mut().zip(upper_in).zip(lower_in) {
                    *o = boxplus_min_sum(a, b);
                }
            }
        }
    }
}
