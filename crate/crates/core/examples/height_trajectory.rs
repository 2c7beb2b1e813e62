// Average heights along an orbit shrink towards a bounded band.

use corrdyn::dynamics::{height_trajectory, Correspondence, OrbitOptions};
use corrdyn::expr::{parse_map, parse_set};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    for (a, b, k) in [("z^3", "z", "{8}"), ("z^2 - 3", "z + 1", "{5, 1/2}")] {
        let c = Correspondence::new(parse_map(a)?, parse_map(b)?);
        let h = height_trajectory(&c, &parse_set(k)?, 3, &OrbitOptions::default())?;
        println!(
            "A = {a}, B = {b}, K = {k}: Ĉ = {:.4}, bound {:.4}",
            h.c_hat, h.fu_bound
        );
        for r in &h.orbit.records {
            println!("  step {} avg height {:.6}", r.step, r.avg_height.unwrap());
        }
        for s in &h.band {
            println!(
                "  step {} deviation {:+.6} within band: {}",
                s.step, s.deviation, s.within_band
            );
        }
        println!("  bound holds: {}", h.fu_holds);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
