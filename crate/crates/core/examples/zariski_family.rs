// μ-constant families: four lines through the origin with a moving
// cross-ratio, and a family whose Milnor number jumps.
//
// ```bash
// cargo run --example zariski_family
// ```

use singularity::family::{cross_ratio, family_check, j_invariant, j_invariant_value, FamilySpec};
use singularity::poly::ratfunc::RationalFunction;
use singularity::poly::univariate::UniPoly;
use singularity::poly::Rational;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let lines = FamilySpec::from_json(
        r#"{
            "poly": "x*y*(x - y)*(x - t*y)",
            "vars": ["x", "y"],
            "param": "t",
            "samples": [2, 3, -1, "5/2"],
            "excluded": [0, 1]
        }"#,
    )?;
    print!("{}", family_check(&lines)?);

    // Moving the fourth point to (t - 1)/(t + 1) gives cross-ratio
    // (t - 1)/t; j tells the projective classes apart.
    let moving = RationalFunction::new(UniPoly::from_ints(&[-1, 1]), UniPoly::from_ints(&[1, 1]), "t")?;
    let points = [-1, 0, 1].map(|c| RationalFunction::from_int(c, "t"));
    let lambda = cross_ratio([&points[0], &points[1], &points[2], &moving])?;
    let j = j_invariant(&lambda)?;
    println!("cross-ratio = {lambda}");
    println!("j = {j}");
    for v in [2, 3, -1] {
        let t = Rational::from_integer(v.into());
        let jt = j.eval(&t).expect("t is not a pole");
        println!("j at t = {v}: {jt}");
    }
    println!("j(-1) = {}", j_invariant_value(&Rational::from_integer((-1).into()))?);

    let jump = FamilySpec::from_json(
        r#"{"poly": "x^2*(x + t) + y^2*(y^2 + t)", "vars": ["x", "y"], "param": "t", "samples": [0, 1]}"#,
    )?;
    print!("{}", family_check(&jump)?);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("family example failed");
}
