// Appending and checking the CRC-2, CRC-10 and CRC-16 codes.

use polarlab::crc::CrcSpec;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let message = [1, 0, 1, 1, 0, 0, 1, 0, 1, 1, 1, 0];
    for spec in [CrcSpec::crc2(), CrcSpec::crc10(), CrcSpec::crc16()] {
        let mut word = spec.append(&message);
        let rem: String = spec.remainder(&message).iter().map(|b| b.to_string()).collect();
        println!("{:<34} remainder {rem}", spec.to_string());
        assert!(spec.check(&word)?);
        word[3] ^= 1;
        assert!(!spec.check(&word)?);
    }

    let custom: CrcSpec = "x^8+x^2+x+1".parse()?;
    println!("custom degree {}", custom.degree());
    Ok(())
}

fn main() {
    run_example().unwrap();
}
