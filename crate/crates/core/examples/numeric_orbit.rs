// The same orbit in floating point, compared against the exact sets.

use corrdyn::dynamics::{orbit, Correspondence, OrbitOptions};
use corrdyn::expr::{parse_map, parse_set};
use corrdyn::numeric::{match_distance, numeric_orbit, NumericPointSet, DEDUP_TOLERANCE};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let c = Correspondence::new(parse_map("z^2 + z - 1")?, parse_map("2z - 3")?);
    let k = parse_set("{1, -2}")?;
    let start = NumericPointSet::from_algset(&k, DEDUP_TOLERANCE, 128)?;
    let steps = numeric_orbit(&c, &start, 4, 128)?;
    let exact = orbit(
        &c,
        &k,
        4,
        &OrbitOptions {
            compute_heights: false,
            ..OrbitOptions::default()
        },
    )?;
    for (s, r) in steps.iter().zip(&exact.records) {
        let ex = NumericPointSet::from_algset(&r.set, DEDUP_TOLERANCE, 128)?;
        println!(
            "step {}: {} points, Σ log⁺|z| = {:.6}, min gap {:.2e}, distance to exact {:?}",
            s.step,
            s.cardinality,
            s.logmax_total,
            s.min_pairwise_distance.unwrap_or(f64::NAN),
            match_distance(&s.points, &ex.to_c64())
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
