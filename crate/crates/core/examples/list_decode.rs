// CRC-aided SCL against R-SCL with a reduced per-stage list schedule.

use polarlab::channel::{add_noise, llr_from_variance, modulate, ChannelConfig};
use polarlab::crc::CrcSpec;
use polarlab::decoder::{rscl_decode, scl_decode, LVector};
use polarlab::polar::{Construction, PolarCode};
use polarlab::sim::complexity_report;
use rand::Rng;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let n = 8;
    let crc = CrcSpec::crc16();
    let code = PolarCode::construct(n, 128 + 16, &Construction::default())?;
    let reduced: LVector = "2,3,4,4,8x4".parse()?;
    let uniform = LVector::uniform(n, 8)?;
    println!("survivors per level: {:?}", &reduced.survivor_schedule()[..16]);

    let cfg = ChannelConfig::new(2.0, 0.5, 3)?;
    let (mut scl_err, mut rscl_err) = (0, 0);
    let (mut scl_peak, mut rscl_peak) = (0, 0);
    for t in 0..100 {
        let mut rng = cfg.trial_rng(t);
        let msg: Vec<u8> = (0..128).map(|_| rng.random_range(0..2)).collect();
        let x = code.encode(&crc.append(&msg))?;
        let y = add_noise(&modulate(&x), cfg.noise_variance(), &mut rng);
        let llrs = llr_from_variance(&y, cfg.noise_variance());

        let a = scl_decode(&llrs, &code, 8, Some(&crc))?;
        let b = rscl_decode(&llrs, &code, &reduced, Some(&crc))?;
        scl_err += (a.message(&code, 16) != msg) as u32;
        rscl_err += (b.message(&code, 16) != msg) as u32;
        scl_peak = scl_peak.max(a.stats.peak_space_units());
        rscl_peak = rscl_peak.max(b.stats.peak_space_units());
        for (m, &peak) in b.stats.peak_banks.iter().enumerate() {
            assert!(peak <= reduced.limit(m + 1));
        }
    }
    let full = complexity_report(n, &uniform)?;
    let cut = complexity_report(n, &reduced)?;
    println!(
        "SCL  L=8       errors {scl_err:>3}/100  space {:>5} (peak {scl_peak})  time {}",
        full.space_units, full.time_units
    );
    println!(
        "R-SCL {reduced}  errors {rscl_err:>3}/100  space {:>5} (peak {rscl_peak})  time {}",
        cut.space_units, cut.time_units
    );
    Ok(())
}

fn main() {
    run_example().unwrap();
}
