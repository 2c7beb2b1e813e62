// Exact integer polynomial arithmetic: gcd, resultant, squarefree parts and
// substitution into a fraction.

use corrdyn::expr::parse_poly;
use corrdyn::poly::{compose_fraction, gcd_poly, resultant, squarefree_decomposition};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let p = parse_poly("(z - 1)^3 * (z + 2)^2 * (2z + 3)")?;
    let q = parse_poly("(z - 1) * (z + 2)^4 * (z^2 + 1)")?;
    println!("p = {p}");
    println!("q = {q}");
    println!("gcd(p, q) = {}", gcd_poly(&p, &q)?);

    let (content, parts) = squarefree_decomposition(&p)?;
    print!("p = {content}");
    for (a, i) in &parts {
        print!(" · ({a})^{i}");
    }
    println!();

    let f = parse_poly("z^2 + 1")?;
    let g = parse_poly("z - 3")?;
    println!("Res(f, g) = {} (f(3) = 10)", resultant(&f, &g)?);

    // (z-3)^2 · p(f/g) for p = z^2 - 2
    let s = compose_fraction(&parse_poly("z^2 - 2")?, &f, &g, 2)?;
    println!("(z-3)^2 · ((f/g)^2 - 2) = {s}");
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
