// Iterating a correspondence z ↦ B(A⁻¹(z)) and watching the sets grow.

use corrdyn::dynamics::{growth_check, orbit, Correspondence, OrbitOptions};
use corrdyn::expr::{parse_map, parse_set};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let c = Correspondence::new(parse_map("z^3 - 2z")?, parse_map("z^2 + 1")?);
    let k = parse_set("{0, 1, 2, 5, -1}")?;

    let opts = OrbitOptions {
        compute_heights: false,
        ..OrbitOptions::default()
    };
    let report = orbit(&c, &k, 4, &opts)?;
    for r in &report.records {
        println!(
            "step {}: {} points, raw degree {}, lower bound {:?}",
            r.step, r.cardinality, r.raw_degree, r.if_lower_bound
        );
    }

    let g = growth_check(&c, &k, 4, 5000)?;
    println!(
        "|K| = {} exceeds (2n-2)/(n-m) = {}: {}; growth holds: {}",
        k.cardinality(),
        g.threshold,
        g.exceeds_threshold,
        g.holds
    );

    // a tight threshold stops the orbit before the degree explodes
    let capped = orbit(
        &c,
        &k,
        10,
        &OrbitOptions {
            degree_threshold: 200,
            ..opts
        },
    )?;
    println!(
        "with threshold 200: {:?} after {} records",
        capped.status,
        capped.records.len()
    );
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
