// BPSK over AWGN: noise variance, channel LLRs and raw bit errors.

use polarlab::channel::{add_noise, llr_from_variance, modulate, ChannelConfig};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let bits: Vec<u8> = (0..4096).map(|i| ((i * 7 + i / 3) % 2) as u8).collect();
    for ebno in [0.0, 2.0, 4.0] {
        let cfg = ChannelConfig::new(ebno, 0.5, 42)?;
        let var = cfg.noise_variance();
        let y = add_noise(&modulate(&bits), var, &mut cfg.trial_rng(0));
        let llrs = llr_from_variance(&y, var);
        let errors = llrs.iter().zip(&bits).filter(|(l, &b)| (**l < 0.0) != (b == 1)).count();
        println!(
            "Eb/N0 {ebno:>3} dB  sigma^2 {var:.4}  raw BER {:.4}",
            errors as f64 / bits.len() as f64
        );
    }
    Ok(())
}

fn main() {
    run_example().unwrap();
}
