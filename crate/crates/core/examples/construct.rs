// Frozen-set construction with the three reliability estimators.

use polarlab::polar::{Construction, FrozenSetFile, PolarCode};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let (n, k) = (5, 16);
    let methods = [
        Construction::BhattacharyyaBec { erasure: 0.5 },
        Construction::GaussianApproxAwgn { design_ebno_db: 2.0 },
        Construction::MonteCarlo {
            design_ebno_db: 2.0,
            trials: 500,
            seed: 1,
        },
    ];
    for spec in &methods {
        let code = PolarCode::construct(n, k, spec)?;
        println!("{:<24} {:?}", spec.to_string(), code.unfrozen());
    }

    // information sets nest as k grows
    let ga = Construction::default();
    let small = PolarCode::construct(n, 8, &ga)?;
    let large = PolarCode::construct(n, 24, &ga)?;
    assert!(small.unfrozen().iter().all(|i| large.unfrozen().contains(i)));

    let file = FrozenSetFile::from_code(&small, &ga);
    let text = file.to_string();
    print!("{text}");
    assert_eq!(text.parse::<FrozenSetFile>()?.to_code()?, small);
    Ok(())
}

fn main() {
    run_example().unwrap();
}
