//! Brute-force bit-channel probabilities, for checking the LLR recursions.

use crate::channel::bpsk_likelihood;
use crate::error::{Error, Result};
use crate::polar::kron_encode_in_place;

/// Largest exponent the oracle accepts.
pub const ORACLE_MAX_EXPONENT: usize = 4;

/// `W_n(y | u) = Π W(y_j | x_j)` with `x = u·G₂^⊗n` on BPSK/AWGN.
pub fn transform_likelihood(y: &[f64], u: &[u8], noise_variance: f64) -> f64 {
    let mut x = u.to_vec();
    kron_encode_in_place(&mut x);
    y.iter()
        .zip(&x)
        .map(|(&yj, &xj)| bpsk_likelihood(yj, xj, noise_variance))
        .product()
}

/// `W_n^(i)(y, u_0^(i-1) | u_i)`: the sum of `W_n(y | u) / 2^(N-1)` over
/// every suffix `u_(i+1)^(N-1)`, with `i = u_prefix.len()`.
pub fn wn_probability_oracle(y: &[f64], u_prefix: &[u8], u_i: u8, noise_variance: f64, n: usize) -> Result<f64> {
    if n > ORACLE_MAX_EXPONENT {
        return Err(Error::param(format!(
            "brute-force oracle limited to n <= {ORACLE_MAX_EXPONENT}, got {n}"
        )));
    }
    let len = 1usize << n;
    if y.len() != len {
        return Err(Error::dimension(len, y.len()));
    }
    if u_prefix.len() >= len {
        return Err(Error::param("prefix must be shorter than the block"));
    }
    let i = u_prefix.len();
    let free = len - i - 1;
    let mut u = vec![0u8; len];
    u[..i].copy_from_slice(u_prefix);
    u[i] = u_i & 1;
    let mut total = 0.0;
    for suffix in 0..1usize << free {
        for j in 0..free {
            u[i + 1 + j] = ((suffix >> j) & 1) as u8;
        }
        total += transform_likelihood(y, &u, noise_variance);
    }
    Ok(total / (1u64 << (len - 1)) as f64)
}

/// `ln(W_n^(i)(.|0) / W_n^(i)(.|1))`.
pub fn bit_channel_llr_oracle(y: &[f64], u_prefix: &[u8], noise_variance: f64, n: usize) -> Result<f64> {
    let p0 = wn_probability_oracle(y, u_prefix, 0, noise_variance, n)?;
    let p1 = wn_probability_oracle(y, u_prefix, 1, noise_variance, n)?;
    Ok(p0.ln() - p1.ln())
}
