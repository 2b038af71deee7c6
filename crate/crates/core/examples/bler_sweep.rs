// A small reproducible BLER sweep written as CSV.

use polarlab::crc::CrcSpec;
use polarlab::decoder::BoxplusMode;
use polarlab::polar::Construction;
use polarlab::sim::{run_bler_sweep, CodeSpec, CrcMode, DecoderSpec, LVectorSpec, SimConfig};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let mut config = SimConfig {
        code: CodeSpec {
            n: 7,
            k: 48,
            construction: Construction::default(),
        },
        crc: CrcMode::Single(CrcSpec::crc16()),
        decoder: DecoderSpec::Scl { list_size: 4 },
        snr_points_db: vec![1.0, 2.0, 3.0],
        max_trials: 400,
        max_block_errors: 50,
        seed: 2024,
        boxplus: BoxplusMode::Exact,
    };
    print!("{}", run_bler_sweep(&config)?.to_csv());

    config.decoder = DecoderSpec::Rscl {
        lvec: LVectorSpec::Text("1,2,4x5".into()),
    };
    print!("{}", run_bler_sweep(&config)?.to_csv());
    println!("{}", config.to_json());
    Ok(())
}

fn main() {
    run_example().unwrap();
}
