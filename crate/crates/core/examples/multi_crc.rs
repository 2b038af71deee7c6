// Multi-CRC layout with local CRCs pruning the list at sub-block ends.

use polarlab::channel::modulate;
use polarlab::channel::{add_noise, llr_from_variance, ChannelConfig};
use polarlab::decoder::LVector;
use polarlab::multicrc::{build_layout, multicrc_encode, multicrc_rscl_decode};
use polarlab::polar::{kron_encode, Construction, PolarCode};
use rand::Rng;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let n = 9;
    let r_vec = [2, 2, 2, 10];
    let code = PolarCode::construct(n, 256 + 16, &Construction::default())?;
    let layout = build_layout(&code, 2, &r_vec)?;
    println!(
        "r = {:?}  K_j = {:?}  message bits {}",
        layout.r_vec(),
        layout.k_vec(),
        layout.message_len()
    );

    let lvec: LVector = "2,4,8x7".parse()?;
    let cfg = ChannelConfig::new(2.0, layout.message_len() as f64 / 512.0, 11)?;
    let (mut errors, mut fallbacks) = (0, 0);
    for t in 0..50 {
        let mut rng = cfg.trial_rng(t);
        let msg: Vec<u8> = (0..layout.message_len()).map(|_| rng.random_range(0..2)).collect();
        let x = kron_encode(&multicrc_encode(&msg, &layout, &code)?, n)?;
        let y = add_noise(&modulate(&x), cfg.noise_variance(), &mut rng);
        let out = multicrc_rscl_decode(&llr_from_variance(&y, cfg.noise_variance()), &code, &layout, &lvec)?;
        errors += (out.message != msg) as u32;
        fallbacks += out.local_fallback as u32;
    }
    println!("multi-CRC R-SCL {lvec}: {errors}/50 block errors, {fallbacks} local fallbacks");
    Ok(())
}

fn main() {
    run_example().unwrap();
}
