// Encoding and successive-cancellation decoding of a (256, 128) code.

use polarlab::channel::{add_noise, llr_from_variance, modulate, ChannelConfig};
use polarlab::decoder::sc_decode;
use polarlab::polar::{Construction, PolarCode};
use rand::Rng;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let code = PolarCode::construct(8, 128, &Construction::default())?;
    let cfg = ChannelConfig::new(3.0, 0.5, 7)?;
    let mut errors = 0;
    let trials = 200;
    for t in 0..trials {
        let mut rng = cfg.trial_rng(t);
        let payload: Vec<u8> = (0..128).map(|_| rng.random_range(0..2)).collect();
        let x = code.encode(&payload)?;
        let y = add_noise(&modulate(&x), cfg.noise_variance(), &mut rng);
        let out = sc_decode(&llr_from_variance(&y, cfg.noise_variance()), &code)?;
        if code.extract_payload(&out.decisions) != payload {
            errors += 1;
        }
        assert_eq!(out.stats.llr_updates, 8 * 256);
    }
    println!("SC, (256,128) at 3 dB: {errors}/{trials} block errors");
    Ok(())
}

fn main() {
    run_example().unwrap();
}
