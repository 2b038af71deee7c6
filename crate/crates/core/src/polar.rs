//! Polar code definition, frozen-set construction and the `u·G₂^⊗n` encoder.
//!
//! Codes use the natural (non bit-reversed) transform. Index `i` of `u` is
//! decoded at level `i`, and the most significant bit of `i` selects the
//! half of the block at the stage closest to the channel.

use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::decoder::ScState;
use crate::error::{Error, Result};

/// Largest supported block-length exponent.
pub const MAX_EXPONENT: usize = 24;

/// A polar code of length `2^n` with an ascending set of unfrozen indices.
///
/// Frozen positions always carry bit 0.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolarCode {
    n: usize,
    unfrozen: Vec<usize>,
    #[serde(skip)]
    frozen_mask: Vec<bool>,
}

impl PolarCode {
    pub fn new(n: usize, unfrozen: Vec<usize>) -> Result<Self> {
        if n == 0 || n > MAX_EXPONENT {
            return Err(Error::param(format!(
                "block-length exponent must be in 1..={MAX_EXPONENT}, got {n}"
            )));
        }
        let len = 1usize << n;
        if unfrozen.len() > len {
            return Err(Error::param("more unfrozen indices than bit channels"));
        }
        for w in unfrozen.windows(2) {
            if w[0] >= w[1] {
                return Err(Error::param("unfrozen indices must be strictly increasing"));
            }
        }
        if let Some(&last) = unfrozen.last() {
            if last >= len {
                return Err(Error::param(format!("unfrozen index {last} out of range [0, {len})")));
            }
        }
        let mut frozen_mask = vec![true; len];
        for &i in &unfrozen {
            frozen_mask[i] = false;
        }
        Ok(Self {
            n,
            unfrozen,
            frozen_mask,
        })
    }

    /// Builds a code by running [`construct_frozen_set`].
    pub fn construct(n: usize, k_unfrozen: usize, spec: &Construction) -> Result<Self> {
        let set = construct_frozen_set(n, k_unfrozen, spec)?;
        Self::new(n, set)
    }

    pub fn exponent(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        1 << self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Number of unfrozen positions, `|A|`.
    pub fn dimension(&self) -> usize {
        self.unfrozen.len()
    }

    pub fn unfrozen(&self) -> &[usize] {
        &self.unfrozen
    }

    pub fn frozen(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.frozen_mask[i]).collect()
    }

    pub fn is_frozen(&self, i: usize) -> bool {
        self.frozen_mask[i]
    }

    /// Places `payload` on the unfrozen positions and zeros elsewhere.
    pub fn map_payload(&self, payload: &[u8]) -> Result<Vec<u8>> {
        if payload.len() != self.dimension() {
            return Err(Error::dimension(self.dimension(), payload.len()));
        }
        let mut u = vec![0u8; self.len()];
        for (&idx, &b) in self.unfrozen.iter().zip(payload) {
            u[idx] = b & 1;
        }
        Ok(u)
    }

    /// Reads `u_A` back out of a full-length decision vector.
    pub fn extract_payload(&self, u: &[u8]) -> Vec<u8> {
        self.unfrozen.iter().map(|&i| u[i]).collect()
    }

    /// Maps `payload` and encodes it into a codeword.
    pub fn encode(&self, payload: &[u8]) -> Result<Vec<u8>> {
        let mut u = self.map_payload(payload)?;
        kron_encode_in_place(&mut u);
        Ok(u)
    }
}

/// Computes `x = u·G₂^⊗n` over GF(2).
pub fn kron_encode(u: &[u8], n: usize) -> Result<Vec<u8>> {
    if n > MAX_EXPONENT || u.len() != 1 << n {
        return Err(Error::dimension(1usize << n.min(MAX_EXPONENT), u.len()));
    }
    let mut x = u.to_vec();
    kron_encode_in_place(&mut x);
    Ok(x)
}

/// In-place butterfly; `x.len()` must be a power of two.
pub fn kron_encode_in_place(x: &mut [u8]) {
    debug_assert!(x.len().is_power_of_two());
    let len = x.len();
    let mut half = len / 2;
    while half >= 1 {
        for block in x.chunks_mut(2 * half) {
            let (upper, lower) = block.split_at_mut(half);
            for (a, b) in upper.iter_mut().zip(lower.iter()) {
                *a ^= *b;
            }
        }
        half /= 2;
    }
}

/// `f(i)`: index of the least significant set bit of `i`.
pub fn lowest_set_bit_index(i: usize) -> Result<usize> {
    if i == 0 {
        return Err(Error::param("lowest set bit of 0 is undefined"));
    }
    Ok(i.trailing_zeros() as usize)
}

/// Keeps only the `m` most significant bits of the `n`-bit integer `i`.
pub fn msb_truncate(i: usize, m: usize, n: usize) -> Result<usize> {
    if m > n {
        return Err(Error::param(format!("m = {m} exceeds n = {n}")));
    }
    if n < usize::BITS as usize && i >> n != 0 {
        return Err(Error::param(format!("i = {i} does not fit in {n} bits")));
    }
    let low = n - m;
    if low >= usize::BITS as usize {
        return Ok(0);
    }
    Ok((i >> low) << low)
}

/// Reliability metric used to pick the unfrozen set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "snake_case")]
pub enum Construction {
    /// Bhattacharyya parameters of a binary erasure channel.
    BhattacharyyaBec { erasure: f64 },
    /// Gaussian approximation of density evolution on BPSK/AWGN.
    GaussianApproxAwgn { design_ebno_db: f64 },
    /// Genie-aided SC error counts on BPSK/AWGN.
    MonteCarlo {
        design_ebno_db: f64,
        #[serde(default = "default_mc_trials")]
        trials: usize,
        #[serde(default)]
        seed: u64,
    },
}

fn default_mc_trials() -> usize {
    2000
}

/// Design Eb/N0 used when no construction is configured.
pub const DEFAULT_DESIGN_EBNO_DB: f64 = 2.0;

impl Default for Construction {
    fn default() -> Self {
        Construction::GaussianApproxAwgn {
            design_ebno_db: DEFAULT_DESIGN_EBNO_DB,
        }
    }
}

impl Construction {
    pub fn method_name(&self) -> &'static str {
        match self {
            Construction::BhattacharyyaBec { .. } => "bhattacharyya_bec",
            Construction::GaussianApproxAwgn { .. } => "gaussian_approx_awgn",
            Construction::MonteCarlo { .. } => "monte_carlo",
        }
    }

    pub fn parameter(&self) -> f64 {
        match *self {
            Construction::BhattacharyyaBec { erasure } => erasure,
            Construction::GaussianApproxAwgn { design_ebno_db } => design_ebno_db,
            Construction::MonteCarlo { design_ebno_db, .. } => design_ebno_db,
        }
    }

    /// Rebuilds a spec from its method name and scalar parameter.
    pub fn from_parts(method: &str, param: f64) -> Result<Self> {
        let spec = match method {
            "bhattacharyya_bec" => Construction::BhattacharyyaBec { erasure: param },
            "gaussian_approx_awgn" => Construction::GaussianApproxAwgn { design_ebno_db: param },
            "monte_carlo" => Construction::MonteCarlo {
                design_ebno_db: param,
                trials: default_mc_trials(),
                seed: 0,
            },
            other => return Err(Error::param(format!("unknown construction method `{other}`"))),
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            Construction::BhattacharyyaBec { erasure } => {
                if !(erasure > 0.0 && erasure < 1.0) {
                    return Err(Error::param(format!("erasure probability {erasure} not in (0, 1)")));
                }
            }
            Construction::GaussianApproxAwgn { design_ebno_db } => {
                if !design_ebno_db.is_finite() {
                    return Err(Error::param("design Eb/N0 must be finite"));
                }
            }
            Construction::MonteCarlo {
                design_ebno_db, trials, ..
            } => {
                if !design_ebno_db.is_finite() {
                    return Err(Error::param("design Eb/N0 must be finite"));
                }
                if trials == 0 {
                    return Err(Error::param("monte carlo construction needs at least one trial"));
                }
            }
        }
        Ok(())
    }

    /// Per-index reliability score; larger is more reliable.
    pub fn reliabilities(&self, n: usize) -> Result<Vec<f64>> {
        self.validate()?;
        if n == 0 || n > MAX_EXPONENT {
            return Err(Error::param(format!("block-length exponent {n} out of range")));
        }
        Ok(match *self {
            Construction::BhattacharyyaBec { erasure } => {
                bhattacharyya_bec(n, erasure).into_iter().map(|z| -z).collect()
            }
            Construction::GaussianApproxAwgn { design_ebno_db } => {
                gaussian_approx_means(n, design_noise_variance(design_ebno_db))
            }
            Construction::MonteCarlo {
                design_ebno_db,
                trials,
                seed,
            } => genie_error_counts(n, design_noise_variance(design_ebno_db), trials, seed)
                .into_iter()
                .map(|c| -(c as f64))
                .collect(),
        })
    }
}

impl fmt::Display for Construction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})", self.method_name(), self.parameter())
    }
}

/// Noise variance of the design channel. The design Eb/N0 is taken at rate 1/2
/// so that the ranking does not depend on `k` and the chosen sets nest.
pub fn design_noise_variance(design_ebno_db: f64) -> f64 {
    1.0 / 10f64.powf(design_ebno_db / 10.0)
}

/// Picks the `k_unfrozen` most reliable indices, ascending.
///
/// Ties prefer the larger index.
pub fn construct_frozen_set(n: usize, k_unfrozen: usize, spec: &Construction) -> Result<Vec<usize>> {
    if n == 0 || n > MAX_EXPONENT {
        return Err(Error::param(format!("block-length exponent {n} out of range")));
    }
    let len = 1usize << n;
    if k_unfrozen == 0 || k_unfrozen > len {
        return Err(Error::param(format!(
            "number of unfrozen bits {k_unfrozen} not in 1..={len}"
        )));
    }
    let rel = spec.reliabilities(n)?;
    let mut order: Vec<usize> = (0..len).collect();
    order.sort_by(|&a, &b| rel[b].total_cmp(&rel[a]).then(b.cmp(&a)));
    let mut set = order[..k_unfrozen].to_vec();
    set.sort_unstable();
    Ok(set)
}

/// Bhattacharyya parameters of the bit channels of a BEC(erasure).
pub fn bhattacharyya_bec(n: usize, erasure: f64) -> Vec<f64> {
    evolve(n, erasure, |z| 2.0 * z - z * z, |z| z * z)
}

/// Mean LLR of each bit channel under the Gaussian approximation.
pub fn gaussian_approx_means(n: usize, noise_variance: f64) -> Vec<f64> {
    evolve(n, 2.0 / noise_variance, ga_check_mean, |m| 2.0 * m)
}

/// Applies the per-stage channel transforms, most significant index bit first.
/// A 0 bit takes the check (boxplus) combination and a 1 bit the variable (sum)
/// combination.
fn evolve(n: usize, init: f64, check: impl Fn(f64) -> f64, variable: impl Fn(f64) -> f64) -> Vec<f64> {
    let mut vals = vec![init];
    for _ in 0..n {
        vals = vals.iter().flat_map(|&v| [check(v), variable(v)]).collect();
    }
    vals
}

const GA_SWITCH: f64 = 10.0;

// Chung's approximation of phi(x) = 1 - E[tanh(u/2)], u ~ N(x, 2x), in log form.
fn ga_ln_phi(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else if x < GA_SWITCH {
        (-0.4527 * x.powf(0.86) + 0.0218).min(0.0)
    } else {
        0.5 * (std::f64::consts::PI / x).ln() - x / 4.0 + (1.0 - 10.0 / (7.0 * x)).ln()
    }
}

fn ga_check_mean(mean: f64) -> f64 {
    // phi(out) = 1 - (1 - phi(mean))^2 = p (2 - p)
    let ln_p = ga_ln_phi(mean);
    let p = ln_p.exp();
    let target = ln_p + (2.0 - p).ln();
    if target >= 0.0 {
        return 0.0;
    }
    // ga_ln_phi is decreasing; bisect on [0, mean].
    let (mut lo, mut hi) = (0.0, mean.max(1e-12));
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if ga_ln_phi(mid) > target {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-12 * hi.max(1.0) {
            break;
        }
    }
    0.5 * (lo + hi)
}

/// Counts, per index, how often a genie-aided SC decoder would decide wrongly
/// on the all-zero codeword.
pub fn genie_error_counts(n: usize, noise_variance: f64, trials: usize, seed: u64) -> Vec<u64> {
    let len = 1usize << n;
    let mut counts = vec![0u64; len];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let normal = Normal::new(0.0, noise_variance.sqrt()).expect("finite variance");
    let mut llrs = vec![0.0; len];
    for _ in 0..trials {
        for l in llrs.iter_mut() {
            let y = 1.0 + normal.sample(&mut rng);
            *l = 2.0 * y / noise_variance;
        }
        let mut sc = ScState::new(n, &llrs);
        for c in counts.iter_mut() {
            if sc.next_llr() <= 0.0 {
                *c += 1;
            }
            sc.push_decision(0);
        }
    }
    counts
}

/// Header and indices of the frozen-set text format.
#[derive(Debug, Clone, PartialEq)]
pub struct FrozenSetFile {
    pub n: usize,
    pub k: usize,
    pub method: String,
    pub param: f64,
    pub unfrozen: Vec<usize>,
}

impl FrozenSetFile {
    pub fn from_code(code: &PolarCode, spec: &Construction) -> Self {
        Self {
            n: code.exponent(),
            k: code.dimension(),
            method: spec.method_name().to_string(),
            param: spec.parameter(),
            unfrozen: code.unfrozen().to_vec(),
        }
    }

    pub fn to_code(&self) -> Result<PolarCode> {
        PolarCode::new(self.n, self.unfrozen.clone())
    }
}

impl fmt::Display for FrozenSetFile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "# polar n={} k={} method={} param={}",
            self.n, self.k, self.method, self.param
        )?;
        for i in &self.unfrozen {
            writeln!(f, "{i}")?;
        }
        Ok(())
    }
}

impl FromStr for FrozenSetFile {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut lines = s.lines().map(str::trim).filter(|l| !l.is_empty());
        let header = lines
            .next()
            .ok_or_else(|| Error::Config("empty frozen-set file".into()))?;
        let rest = header
            .strip_prefix("# polar")
            .ok_or_else(|| Error::Config(format!("bad frozen-set header `{header}`")))?;
        let (mut n, mut k, mut method, mut param) = (None, None, None, None);
        for field in rest.split_whitespace() {
            let (key, val) = field
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("bad header field `{field}`")))?;
            let bad = || Error::Config(format!("bad value in header field `{field}`"));
            match key {
                "n" => n = Some(val.parse::<usize>().map_err(|_| bad())?),
                "k" => k = Some(val.parse::<usize>().map_err(|_| bad())?),
                "method" => method = Some(val.to_string()),
                "param" => param = Some(val.parse::<f64>().map_err(|_| bad())?),
                _ => return Err(Error::Config(format!("unknown header field `{key}`"))),
            }
        }
        let missing = |f: &str| Error::Config(format!("frozen-set header lacks `{f}`"));
        let n = n.ok_or_else(|| missing("n"))?;
        let k = k.ok_or_else(|| missing("k"))?;
        let mut unfrozen = Vec::with_capacity(k);
        for line in lines {
            if line.starts_with('#') {
                continue;
            }
            unfrozen.push(
                line.parse::<usize>()
                    .map_err(|_| Error::Config(format!("bad index line `{line}`")))?,
            );
        }
        if unfrozen.len() != k {
            return Err(Error::Config(format!(
                "header declares k={k} but file lists {} indices",
                unfrozen.len()
            )));
        }
        let file = Self {
            n,
            k,
            method: method.ok_or_else(|| missing("method"))?,
            param: param.ok_or_else(|| missing("param"))?,
            unfrozen,
        };
        file.to_code()?;
        Ok(file)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    // Explicit generator matrix G₂^⊗n, row-major.
    fn generator(n: usize) -> Vec<Vec<u8>> {
        let mut g = vec![vec![1u8]];
        for _ in 0..n {
            let s = g.len();
            let mut next = vec![vec![0u8; 2 * s]; 2 * s];
            for r in 0..s {
                for c in 0..s {
                    next[r][c] = g[r][c];
                    next[r + s][c] = g[r][c];
                    next[r + s][c + s] = g[r][c];
                }
            }
            g = next;
        }
        g
    }

    fn matmul(u: &[u8], g: &[Vec<u8>]) -> Vec<u8> {
        let mut x = vec![0u8; u.len()];
        for (r, &ur) in u.iter().enumerate() {
            if ur == 1 {
                for (c, xc) in x.iter_mut().enumerate() {
                    *xc ^= g[r][c];
                }
            }
        }
        x
    }

    #[test]
    fn encode_small_examples() {
        assert_eq!(kron_encode(&[1, 0], 1).unwrap(), vec![1, 0]);
        assert_eq!(kron_encode(&[1, 1], 1).unwrap(), vec![0, 1]);
        let g = generator(2);
        assert_eq!(matmul(&[0, 0, 0, 1], &g), vec![1, 1, 1, 1]);
        assert_eq!(kron_encode(&[0, 0, 0, 1], 2).unwrap(), vec![1, 1, 1, 1]);
    }

    #[test]
    fn encode_rejects_wrong_length() {
        assert!(matches!(kron_encode(&[1, 0, 1], 2), Err(Error::Dimension { .. })));
    }

    #[test]
    fn bec_construction_examples() {
        let z = bhattacharyya_bec(2, 0.5);
        let expect = [0.9375, 0.5625, 0.4375, 0.0625];
        for (a, b) in z.iter().zip(expect) {
            assert!((a - b).abs() < 1e-15);
        }
        let spec = Construction::BhattacharyyaBec { erasure: 0.5 };
        assert_eq!(construct_frozen_set(2, 1, &spec).unwrap(), vec![3]);
        assert_eq!(construct_frozen_set(2, 2, &spec).unwrap(), vec![2, 3]);
        for spec in [spec, Construction::default()] {
            assert_eq!(construct_frozen_set(2, 4, &spec).unwrap(), vec![0, 1, 2, 3]);
        }
    }

    #[test]
    fn construction_rejects_bad_k() {
        let spec = Construction::default();
        assert!(construct_frozen_set(3, 0, &spec).is_err());
        assert!(construct_frozen_set(3, 9, &spec).is_err());
        assert!(construct_frozen_set(3, 2, &Construction::BhattacharyyaBec { erasure: 1.0 }).is_err());
    }

    #[test]
    fn ties_prefer_larger_index() {
        // Identity transforms make every channel equally reliable.
        let vals = evolve(2, 1.0, |x| x, |x| x);
        assert!(vals.iter().all(|&v| v == 1.0));
        let mut order: Vec<usize> = (0..4).collect();
        order.sort_by(|&a, &b| vals[b].total_cmp(&vals[a]).then(b.cmp(&a)));
        assert_eq!(order, vec![3, 2, 1, 0]);
    }

    #[test]
    fn ga_means_are_ordered_like_bec_at_extremes() {
        let means = gaussian_approx_means(3, design_noise_variance(2.0));
        // index 0 is the worst channel and index N-1 the best for any symmetric construction
        let max = means.iter().cloned().fold(f64::MIN, f64::max);
        let min = means.iter().cloned().fold(f64::MAX, f64::min);
        assert_eq!(means[7], max);
        assert_eq!(means[0], min);
        assert!(means.iter().all(|m| m.is_finite() && *m >= 0.0));
    }

    #[test]
    fn ga_handles_long_codes() {
        let means = gaussian_approx_means(14, design_noise_variance(2.0));
        assert!(means.iter().all(|m| m.is_finite()));
        let set = construct_frozen_set(14, 8192, &Construction::default()).unwrap();
        assert_eq!(set.len(), 8192);
    }

    #[test]
    fn monte_carlo_construction_is_deterministic() {
        let spec = Construction::MonteCarlo {
            design_ebno_db: 1.0,
            trials: 200,
            seed: 7,
        };
        let a = construct_frozen_set(5, 16, &spec).unwrap();
        let b = construct_frozen_set(5, 16, &spec).unwrap();
        assert_eq!(a, b);
        assert!(a.contains(&31));
    }

    #[test]
    fn lowest_set_bit_examples() {
        assert_eq!(lowest_set_bit_index(40).unwrap(), 3);
        assert_eq!(lowest_set_bit_index(1).unwrap(), 0);
        assert_eq!(lowest_set_bit_index(12).unwrap(), 2);
        assert!(lowest_set_bit_index(0).is_err());
    }

    #[test]
    fn lowest_set_bit_matches_scan() {
        for i in 1..5000usize {
            let mut j = 0;
            while (i >> j) & 1 == 0 {
                j += 1;
            }
            assert_eq!(lowest_set_bit_index(i).unwrap(), j);
        }
    }

    #[test]
    fn msb_truncate_examples() {
        assert_eq!(msb_truncate(5, 1, 3).unwrap(), 4);
        assert_eq!(msb_truncate(5, 3, 3).unwrap(), 5);
        for i in 0..8 {
            assert_eq!(msb_truncate(i, 0, 3).unwrap(), 0);
        }
        assert!(msb_truncate(5, 4, 3).is_err());
    }

    #[test]
    fn code_validation() {
        assert!(PolarCode::new(3, vec![1, 1]).is_err());
        assert!(PolarCode::new(3, vec![3, 2]).is_err());
        assert!(PolarCode::new(3, vec![8]).is_err());
        let code = PolarCode::new(3, vec![3, 5, 6, 7]).unwrap();
        assert_eq!(code.frozen(), vec![0, 1, 2, 4]);
        assert_eq!(code.map_payload(&[1, 1, 0, 1]).unwrap(), vec![0, 0, 0, 1, 0, 1, 0, 1]);
        assert!(code.map_payload(&[1]).is_err());
    }

    #[test]
    fn frozen_set_file_roundtrip() {
        let spec = Construction::BhattacharyyaBec { erasure: 0.5 };
        let code = PolarCode::construct(4, 6, &spec).unwrap();
        let text = FrozenSetFile::from_code(&code, &spec).to_string();
        assert!(text.starts_with("# polar n=4 k=6 method=bhattacharyya_bec param=0.5\n"));
        let parsed: FrozenSetFile = text.parse().unwrap();
        assert_eq!(parsed.to_code().unwrap(), code);
        assert!("# polar n=4 k=2 method=x param=1\n3\n"
            .parse::<FrozenSetFile>()
            .is_err());
        assert!("3\n4\n".parse::<FrozenSetFile>().is_err());
    }

    proptest! {
        #[test]
        fn encode_is_involution(n in 1usize..=10, seed in any::<u64>()) {
            let len = 1usize << n;
            let u: Vec<u8> = (0..len).map(|i| ((seed.rotate_left(i as u32 % 64) ^ i as u64) & 1) as u8).collect();
            let x = kron_encode(&u, n).unwrap();
            prop_assert_eq!(kron_encode(&x, n).unwrap(), u);
        }

        #[test]
        fn encode_is_linear_and_matches_matrix(n in 1usize..=6, a in any::<u64>(), b in any::<u64>()) {
            let len = 1usize << n;
            let u: Vec<u8> = (0..len).map(|i| ((a >> i) & 1) as u8).collect();
            let v: Vec<u8> = (0..len).map(|i| ((b >> i) & 1) as u8).collect();
            let w: Vec<u8> = u.iter().zip(&v).map(|(x, y)| x ^ y).collect();
            let xu = kron_encode(&u, n).unwrap();
            let xv = kron_encode(&v, n).unwrap();
            let xw = kron_encode(&w, n).unwrap();
            let sum: Vec<u8> = xu.iter().zip(&xv).map(|(x, y)| x ^ y).collect();
            prop_assert_eq!(&xw, &sum);
            prop_assert_eq!(xu, matmul(&u, &generator(n)));
        }

        #[test]
        fn construction_is_monotone(n in 1usize..=8, frac in 0.0f64..1.0, which in 0usize..2) {
            let spec = if which == 0 {
                Construction::BhattacharyyaBec { erasure: 0.3 + 0.4 * frac }
            } else {
                Construction::GaussianApproxAwgn { design_ebno_db: -1.0 + 4.0 * frac }
            };
            let len = 1usize << n;
            let mut prev: Vec<usize> = Vec::new();
            for k in 1..=len {
                let set = construct_frozen_set(n, k, &spec).unwrap();
                prop_assert!(prev.iter().all(|i| set.contains(i)));
                prev = set;
            }
        }

        #[test]
        fn lowest_set_bit_of_scaled_odd(a in 0usize..40, odd in 0usize..1000) {
            let i = (2 * odd + 1) << a;
            prop_assert_eq!(lowest_set_bit_index(i).unwrap(), a);
        }
    }
}
