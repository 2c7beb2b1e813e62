// Rationals of bounded height form a finite list.

use corrdyn::heights::{enumerate_rational_points, weil_height};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    for b in [1u32, 2, 3, 5, 10, 50] {
        let pts = enumerate_rational_points((b as f64).ln())?;
        println!("h ≤ log {b}: {} points", pts.len());
    }
    let small = enumerate_rational_points(2f64.ln())?;
    for x in &small {
        println!("  {x}  h = {:.4}", weil_height(x).value);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
