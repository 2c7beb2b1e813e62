// Heights of algebraic numbers: Mahler measure by roots and by Graeffe
// iteration, Weil heights of rationals, and the defect of a map.

use corrdyn::expr::{parse_map, parse_poly};
use corrdyn::heights::{
    enumerate_rational_points, estimate_functorial_constant, graeffe_log_mahler, mahler_measure,
    weil_height,
};
use corrdyn::point::ProjPoint;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    for src in [
        "z^2 - z - 1",
        "z^10 + z^9 - z^7 - z^6 - z^5 - z^4 - z^3 + z + 1",
        "z^12 - 1",
        "7z^3 - 2",
    ] {
        let p = parse_poly(src)?;
        let m = mahler_measure(&p)?;
        let g = graeffe_log_mahler(&p)?;
        println!(
            "m({src}) = {:.15} (Graeffe {:.15} ± {:.1e})",
            m.value, g.value, g.error_bound
        );
    }

    let x = ProjPoint::ratio(-22, 7);
    println!("h({x}) = {:.6}", weil_height(&x).value);

    let grid = enumerate_rational_points(20f64.ln())?;
    for src in ["z^2", "(z^2 + 1)/(z - 2)"] {
        let est = estimate_functorial_constant(&parse_map(src)?, &grid)?;
        println!(
            "|h(R(z)) - d·h(z)| for R = {src}: max {:.6} over {} points, at {}",
            est.c_hat, est.sample_count, est.worst_point
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
