// An identity F∘A = F∘B makes every K = F⁻¹(K̂) satisfy A⁻¹(K) = B⁻¹(K).

use corrdyn::dynamics::invariant_from_identity;
use corrdyn::expr::{parse_map, parse_set};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let f = parse_map("z^2")?;
    let a = parse_map("(z^2 - 3)/(z + 1)")?;
    let b = a.scaled(-1, 1)?;
    println!("F = {f}, A = {a}, B = {b}");
    for k_hat in ["{4}", "{0, 2, inf}", "roots(z^2 - z - 1)"] {
        let inv = invariant_from_identity(&f, &a, &b, &parse_set(k_hat)?)?;
        println!(
            "K̂ = {k_hat}: K = {}, A⁻¹(K) = B⁻¹(K): {}",
            inv.k, inv.verified
        );
    }

    let bad = parse_map("z + 1")?;
    match invariant_from_identity(&f, &a, &bad, &parse_set("{4}")?) {
        Ok(_) => println!("unexpected"),
        Err(e) => println!("B = z + 1: {e}"),
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
