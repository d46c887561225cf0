// Milnor number, multiplicity and σ from local standard bases.
//
// ```bash
// cargo run --example milnor
// ```

use singularity::local_algebra::{milnor_number, multiplicity, sigma_invariant};
use singularity::poly::{parse_poly, Extended};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let cases: [(&str, &[&str]); 5] = [
        ("x^2 + y^3", &["x", "y"]),
        ("x^3 + x*y^3", &["x", "y"]),
        ("x^4 - y^4", &["x", "y"]),
        ("z0^7 + z1^2 + z2^2", &["z0", "z1", "z2"]),
        ("x^3 + y^3 + z^3", &["x", "y", "z"]),
    ];
    println!("{:<22} {:>4} {:>4} {:>5}", "f", "mu", "nu", "sigma");
    for (text, vars) in cases {
        let f = parse_poly(text, vars)?;
        let mu = milnor_number(&f);
        let nu = multiplicity(&f)?;
        // σ is only defined here for plane curves.
        let sigma = sigma_invariant(&f).map_or("-".to_string(), |s| s.to_string());
        println!("{text:<22} {mu:>4} {nu:>4} {sigma:>5}");
    }

    // A non-isolated singularity has infinite Milnor number.
    let line = parse_poly("x^2", &["x", "y"])?;
    assert_eq!(milnor_number(&line), Extended::Infinite);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("milnor example failed");
}
