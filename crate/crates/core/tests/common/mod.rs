// Reference implementations used as test oracles. Everything here is written
// from the definitions and shares no code with the decoder engine.

#![allow(dead_code)]

use polarlab::crc::CrcSpec;
use polarlab::polar::PolarCode;

/// Rows of the `N x N` generator `G_2^{⊗n}`, built by explicit Kronecker
/// products.
pub fn generator_matrix(n: usize) -> Vec<Vec<u8>> {
    let mut g = vec![vec![1u8]];
    for _ in 0..n {
        let size = g.len();
        let mut next = vec![vec![0u8; 2 * size]; 2 * size];
        for r in 0..size {
            for c in 0..size {
                // [[G, 0], [G, G]]
                next[r][c] = g[r][c];
                next[r + size][c] = g[r][c];
                next[r + size][c + size] = g[r][c];
            }
        }
        g = next;
    }
    g
}

pub fn matrix_encode(u: &[u8], g: &[Vec<u8>]) -> Vec<u8> {
    let len = g.len();
    let mut x = vec![0u8; len];
    for (row, &bit) in g.iter().zip(u) {
        if bit == 1 {
            for c in 0..len {
                x[c] ^= row[c];
            }
        }
    }
    x
}

pub fn awgn_density(y: f64, bit: u8, var: f64) -> f64 {
    let s = 1.0 - 2.0 * bit as f64;
    (-(y - s).powi(2) / (2.0 * var)).exp() / (2.0 * std::f64::consts::PI * var).sqrt()
}

pub fn codeword_likelihood(y: &[f64], x: &[u8], var: f64) -> f64 {
    y.iter().zip(x).map(|(&yy, &xx)| awgn_density(yy, xx, var)).product()
}

/// `W_n^(i)(y, u^{i-1} | u_i) = 2^{-(N-1)} Σ_{u_{i+1}..} W^N(y | u G)`.
pub fn bit_channel_probability(y: &[f64], prefix: &[u8], ui: u8, var: f64, g: &[Vec<u8>]) -> f64 {
    let len = g.len();
    let i = prefix.len();
    let free = len - i - 1;
    let mut total = 0.0;
    let mut u = vec![0u8; len];
    u[..i].copy_from_slice(prefix);
    u[i] = ui;
    for tail in 0..(1usize << free) {
        for j in 0..free {
            u[i + 1 + j] = ((tail >> j) & 1) as u8;
        }
        total += codeword_likelihood(y, &matrix_encode(&u, g), var);
    }
    total / (1u64 << (len - 1)) as f64
}

pub fn bit_channel_llr(y: &[f64], prefix: &[u8], var: f64, g: &[Vec<u8>]) -> f64 {
    (bit_channel_probability(y, prefix, 0, var, g) / bit_channel_probability(y, prefix, 1, var, g)).ln()
}

fn log_sum_exp(a: f64, b: f64) -> f64 {
    let hi = a.max(b);
    hi + (-(a - b).abs()).exp().ln_1p()
}

/// `ln((e^(a+b) + 1) / (e^a + e^b))`
fn boxplus(a: f64, b: f64) -> f64 {
    log_sum_exp(a + b, 0.0) - log_sum_exp(a, b)
}

fn half_encode(u: &[u8]) -> Vec<u8> {
    if u.len() == 1 {
        return u.to_vec();
    }
    let h = u.len() / 2;
    let a = half_encode(&u[..h]);
    let b = half_encode(&u[h..]);
    a.iter().zip(&b).map(|(x, y)| x ^ y).chain(b.iter().copied()).collect()
}

/// `Γ^(i)` computed from scratch by splitting the code into its two halves.
pub fn recursive_llr(channel: &[f64], prefix: &[u8]) -> f64 {
    let len = channel.len();
    if len == 1 {
        return channel[0];
    }
    let h = len / 2;
    let (top, bottom) = channel.split_at(h);
    if prefix.len() < h {
        let merged: Vec<f64> = top.iter().zip(bottom).map(|(&a, &b)| boxplus(a, b)).collect();
        recursive_llr(&merged, prefix)
    } else {
        let w = half_encode(&prefix[..h]);
        let merged: Vec<f64> = top
            .iter()
            .zip(bottom)
            .zip(&w)
            .map(|((&a, &b), &s)| if s == 0 { b + a } else { b - a })
            .collect();
        recursive_llr(&merged, &prefix[h..])
    }
}

fn penalty(llr: f64, bit: u8) -> f64 {
    let x = if bit == 0 { -llr } else { llr };
    if x > 0.0 {
        x + (-x).exp().ln_1p()
    } else {
        x.exp().ln_1p()
    }
}

fn encode_in_place(x: &mut [u8]) {
    let mut half = 1;
    while half < x.len() {
        for block in x.chunks_mut(2 * half) {
            let (a, b) = block.split_at_mut(half);
            for (p, q) in a.iter_mut().zip(b.iter()) {
                *p ^= *q;
            }
        }
        half *= 2;
    }
}

#[derive(Clone)]
struct RefPath {
    // stage m (1..=n) occupies llr[offset(m)..offset(m) + 2^(n-m)]
    llr: Vec<f64>,
    u: Vec<u8>,
    metric: f64,
}

fn stage_offset(n: usize, m: usize) -> usize {
    (1..m).map(|s| 1usize << (n - s)).sum()
}

fn refresh(path: &mut RefPath, channel: &[f64], n: usize, i: usize) {
    let first = if i == 0 { 1 } else { n - i.trailing_zeros() as usize };
    let mut scratch = Vec::new();
    for m in first..=n {
        let width = 1usize << (n - m);
        let parent: Vec<f64> = if m == 1 {
            channel.to_vec()
        } else {
            let o = stage_offset(n, m - 1);
            path.llr[o..o + 2 * width].to_vec()
        };
        let o = stage_offset(n, m);
        if (i >> (n - m)) & 1 == 0 {
            for k in 0..width {
                path.llr[o + k] = boxplus(parent[k], parent[k + width]);
            }
        } else {
            let base = (i >> (n - m + 1)) << (n - m + 1);
            scratch.clear();
            scratch.extend_from_slice(&path.u[base..base + width]);
            encode_in_place(&mut scratch);
            for k in 0..width {
                let a = parent[k];
                let b = parent[k + width];
                path.llr[o + k] = if scratch[k] == 0 { b + a } else { b - a };
            }
        }
    }
}

/// Textbook SCL: every path owns a private copy of its LLR arrays and is
/// cloned on every split. Returns the selected decisions.
pub fn reference_scl(channel: &[f64], code: &PolarCode, list_size: usize, crc: Option<&CrcSpec>) -> Vec<u8> {
    let len = channel.len();
    let n = len.trailing_zeros() as usize;
    let mut paths = vec![RefPath {
        llr: vec![0.0; len.max(2) - 1],
        u: Vec::with_capacity(len),
        metric: 0.0,
    }];
    for i in 0..len {
        let mut next = Vec::with_capacity(2 * paths.len());
        for mut path in paths {
            let llr = if n == 0 {
                channel[0]
            } else {
                refresh(&mut path, channel, n, i);
                path.llr[stage_offset(n, n)]
            };
            if code.is_frozen(i) {
                path.metric += penalty(llr, 0);
                path.u.push(0);
                next.push(path);
            } else {
                let mut one = path.clone();
                path.metric += penalty(llr, 0);
                path.u.push(0);
                one.metric += penalty(llr, 1);
                one.u.push(1);
                next.push(path);
                next.push(one);
            }
        }
        next.sort_by(|a, b| a.metric.total_cmp(&b.metric));
        next.truncate(list_size);
        paths = next;
    }
    let passes = |u: &[u8]| match crc {
        Some(c) => c.check(&code.extract_payload(u)).unwrap(),
        None => true,
    };
    paths.iter().find(|p| passes(&p.u)).unwrap_or(&paths[0]).u.clone()
}

/// Largest codebook likelihood over all payloads, by enumeration.
pub fn ml_likelihood(y: &[f64], code: &PolarCode, var: f64, g: &[Vec<u8>]) -> f64 {
    let k = code.dimension();
    (0..(1usize << k))
        .map(|m| {
            let payload: Vec<u8> = (0..k).map(|j| ((m >> j) & 1) as u8).collect();
            codeword_likelihood(y, &matrix_encode(&code.map_payload(&payload).unwrap(), g), var)
        })
        .fold(0.0, f64::max)
}

/// 95% Wilson score interval.
pub fn wilson(errors: u64, trials: u64) -> (f64, f64) {
    let z = 1.959_963_984_540_054_f64;
    let n = trials as f64;
    let p = errors as f64 / n;
    let d = 1.0 + z * z / n;
    let c = (p + z * z / (2.0 * n)) / d;
    let h = z * (p * (1.0 - p) / n + z * z / (4.0 * n * n)).sqrt() / d;
    (c - h, c + h)
}
