// Space and time units of SCL and R-SCL list-size schedules.

use polarlab::decoder::LVector;
use polarlab::sim::{complexity_report, named_lvector};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let mut rows: Vec<(String, usize, LVector)> = Vec::new();
    for l in [32, 16, 8] {
        rows.push((format!("SCL L={l}"), 11, LVector::uniform(11, l)?));
    }
    for name in ["L1", "L2", "L3", "L4", "L5", "L6"] {
        rows.push((name.to_string(), 11, named_lvector(name).unwrap()));
    }
    for l in [32, 16, 8] {
        rows.push((format!("SCL L={l}"), 14, LVector::uniform(14, l)?));
    }
    for name in ["L7", "L8", "L9"] {
        rows.push((name.to_string(), 14, named_lvector(name).unwrap()));
    }
    println!("{:<10} {:>3} {:>8} {:>9}", "decoder", "n", "space", "time");
    for (label, n, lvec) in rows {
        let r = complexity_report(n, &lvec)?;
        println!("{label:<10} {n:>3} {:>8} {:>9}", r.space_units, r.time_units);
    }
    Ok(())
}

fn main() {
    run_example().unwrap();
}
