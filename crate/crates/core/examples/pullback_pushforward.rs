// Preimages and images of finite point sets under a rational map, with the
// cardinality bounds checked along the way.

use corrdyn::expr::{parse_map, parse_set};
use corrdyn::maps::{pullback_set, pushforward_set, verify_rh_bound};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let f = parse_map("(z^2 - 1)/(z + 3)")?;
    for src in ["{0, 1, inf}", "roots(z^2 - 5)", "{-1/3, 2} "] {
        let s = parse_set(src)?;
        let pre = pullback_set(&f, &s);
        let back = pushforward_set(&f, &pre);
        let rh = verify_rh_bound(&f, &s);
        println!("S = {s}");
        println!(
            "  F⁻¹(S) = {pre}  ({} points, bounds {}..={})",
            rh.actual, rh.lower, rh.upper
        );
        println!("  F(F⁻¹(S)) = S: {}", back == s);
        if let Ok(pts) = pre.rational_points() {
            let shown: Vec<String> = pts.iter().map(ToString::to_string).collect();
            println!("  rational preimages: [{}]", shown.join(", "));
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
