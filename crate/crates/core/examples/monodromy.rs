// Lefschetz numbers of monodromy iterates and the monodromy zeta function
// from the resolution.
//
// ```bash
// cargo run --example monodromy
// ```

use singularity::invariants::{lefschetz, zeta};
use singularity::poly::parse_poly;
use singularity::resolution::embedded_resolution;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    for text in ["x^2 + y^3", "x^3 + y^4", "x^2*y + y^4"] {
        let tree = embedded_resolution(&parse_poly(text, &["x", "y"])?)?;
        let z = zeta(&tree);
        println!("{text}: zeta = {z}");
        let row: Vec<String> = (1..=12).map(|m| lefschetz(&tree, m).to_string()).collect();
        println!("  Lambda(1..12) = {}", row.join(" "));
        for m in 1..=12 {
            assert_eq!(z.lefschetz(m), lefschetz(&tree, m));
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("monodromy example failed");
}
