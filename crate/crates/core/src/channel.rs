//! BPSK over AWGN and channel LLRs.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An AWGN channel at a given Eb/N0 for a code of rate `code_rate`.
///
/// The rate counts message bits only, so CRC bits are charged as overhead.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelConfig {
    pub ebno_db: f64,
    pub code_rate: f64,
    pub seed: u64,
}

impl ChannelConfig {
    pub fn new(ebno_db: f64, code_rate: f64, seed: u64) -> Result<Self> {
        if !(code_rate > 0.0 && code_rate <= 1.0) {
            return Err(Error::param(format!("code rate {code_rate} not in (0, 1]")));
        }
        if !ebno_db.is_finite() {
            return Err(Error::param("Eb/N0 must be finite"));
        }
        Ok(Self {
            ebno_db,
            code_rate,
            seed,
        })
    }

    /// `σ² = 1 / (2 R · 10^(Eb/N0 / 10))` for unit-energy symbols.
    pub fn noise_variance(&self) -> f64 {
        1.0 / (2.0 * self.code_rate * 10f64.powf(self.ebno_db / 10.0))
    }

    /// Independent noise stream for one trial.
    pub fn trial_rng(&self, trial: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(trial);
        rng
    }
}

/// Bit 0 maps to +1, bit 1 to -1.
pub fn modulate(bits: &[u8]) -> Vec<f64> {
    bits.iter().map(|&b| if b & 1 == 0 { 1.0 } else { -1.0 }).collect()
}

/// Adds Gaussian noise of variance `noise_variance` drawn from `rng`.
pub fn add_noise<R: rand::Rng + ?Sized>(symbols: &[f64], noise_variance: f64, rng: &mut R) -> Vec<f64> {
    if noise_variance <= 0.0 {
        return symbols.to_vec();
    }
    let normal = Normal::new(0.0, noise_variance.sqrt()).expect("positive finite variance");
    symbols.iter().map(|&s| s + normal.sample(rng)).collect()
}

/// Passes `symbols` through the channel using the stream for trial 0.
pub fn transmit(symbols: &[f64], cfg: &ChannelConfig) -> Vec<f64> {
    add_noise(symbols, cfg.noise_variance(), &mut cfg.trial_rng(0))
}

/// `Γ₀ = 2y/σ²`.
pub fn llr_from_variance(received: &[f64], noise_variance: f64) -> Vec<f64> {
    let scale = 2.0 / noise_variance;
    received.iter().map(|&y| scale * y).collect()
}

pub fn channel_llr(received: &[f64], cfg: &ChannelConfig) -> Vec<f64> {
    llr_from_variance(received, cfg.noise_variance())
}

/// Gaussian likelihood `W(y | x)` for BPSK.
pub fn bpsk_likelihood(y: f64, bit: u8, noise_variance: f64) -> f64 {
    let s = if bit & 1 == 0 { 1.0 } else { -1.0 };
    let d = y - s;
    (-(d * d) / (2.0 * noise_variance)).exp() / (2.0 * std::f64::consts::PI * noise_variance).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modulation_examples() {
        assert_eq!(modulate(&[0]), vec![1.0]);
        assert_eq!(modulate(&[1]), vec![-1.0]);
        assert_eq!(modulate(&[0, 1, 0]), vec![1.0, -1.0, 1.0]);
    }

    #[test]
    fn variance_formula() {
        let cfg = ChannelConfig::new(0.0, 0.5, 0).unwrap();
        assert!((cfg.noise_variance() - 1.0).abs() < 1e-15);
        let cfg = ChannelConfig::new(3.0, 0.25, 0).unwrap();
        let expect = 1.0 / (2.0 * 0.25 * 10f64.powf(0.3));
        assert!((cfg.noise_variance() - expect).abs() < 1e-15);
        assert!(ChannelConfig::new(1.0, 0.0, 0).is_err());
        assert!(ChannelConfig::new(1.0, 1.5, 0).is_err());
    }

    #[test]
    fn llr_examples() {
        assert_eq!(llr_from_variance(&[1.0], 1.0), vec![2.0]);
        assert_eq!(llr_from_variance(&[0.0], 0.3), vec![0.0]);
        assert_eq!(llr_from_variance(&[-0.5], 0.5), vec![-2.0]);
        let a = llr_from_variance(&[0.3, -1.1], 0.7);
        let b = llr_from_variance(&[0.6, -2.2], 0.7);
        for (x, y) in a.iter().zip(&b) {
            assert!((2.0 * x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn high_snr_is_nearly_noiseless() {
        let cfg = ChannelConfig::new(200.0, 0.5, 3).unwrap();
        let sym = modulate(&[0, 1, 1, 0]);
        let out = transmit(&sym, &cfg);
        for (a, b) in sym.iter().zip(&out) {
            assert!((a - b).abs() < 1e-6);
        }
        let llr = channel_llr(&out, &cfg);
        assert!(llr[0] > 0.0 && llr[1] < 0.0 && llr[2] < 0.0 && llr[3] > 0.0);
    }

    #[test]
    fn transmit_is_deterministic() {
        let cfg = ChannelConfig::new(1.0, 0.5, 99).unwrap();
        let sym = modulate(&[0; 64]);
        assert_eq!(transmit(&sym, &cfg), transmit(&sym, &cfg));
        let other = ChannelConfig { seed: 100, ..cfg };
        assert_ne!(transmit(&sym, &cfg), transmit(&sym, &other));
    }

    #[test]
    fn trial_streams_differ() {
        let cfg = ChannelConfig::new(1.0, 0.5, 5).unwrap();
        let sym = vec![0.0; 16];
        let a = add_noise(&sym, 1.0, &mut cfg.trial_rng(0));
        let b = add_noise(&sym, 1.0, &mut cfg.trial_rng(1));
        assert_ne!(a, b);
    }

    #[test]
    fn empirical_noise_variance() {
        let cfg = ChannelConfig::new(1.5, 0.5, 11).unwrap();
        let sym = vec![1.0; 1_000_000];
        let out = transmit(&sym, &cfg);
        let mean = out.iter().zip(&sym).map(|(o, s)| o - s).sum::<f64>() / sym.len() as f64;
        let var = out.iter().zip(&sym).map(|(o, s)| (o - s - mean).powi(2)).sum::<f64>() / sym.len() as f64;
        assert!((var / cfg.noise_variance() - 1.0).abs() < 0.01, "var {var}");
    }

    #[test]
    fn llr_matches_likelihood_ratio() {
        for &y in &[-1.3, -0.2, 0.0, 0.4, 2.0] {
            let v = 0.8;
            let direct = (bpsk_likelihood(y, 0, v) / bpsk_likelihood(y, 1, v)).ln();
            assert!((direct - llr_from_variance(&[y], v)[0]).abs() < 1e-12);
        }
    }
}
