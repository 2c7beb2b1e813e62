// A = z², B = (z+1)²: every integer sits in both preimages of the squares,
// but a finite truncation leaves N without a partner.

use corrdyn::dynamics::squares_example;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    for n in [3, 5, 8] {
        let e = squares_example(n)?;
        println!("N = {n}: K = {}", e.k);
        println!("  A⁻¹(K) ⊆ B⁻¹(K): {}", e.inclusion.holds);
        if let Some(w) = &e.inclusion.witness {
            println!("  witness {w} (expected {})", e.expected_witness);
        }
        println!("  after removing N: {}", e.trimmed.holds);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
