// Parse a polynomial, differentiate it and substitute into it.
//
// ```bash
// cargo run --example polynomials
// ```

use singularity::poly::{parse_poly, PolyError};

pub fn run_example() -> Result<(), PolyError> {
    let vars = ["x", "y"];
    let f = parse_poly("(x^2 - y^3)*(x^3 - y^2)", &vars)?;
    println!("f      = {f}");
    println!("df/dx  = {}", f.partial_derivative("x")?);
    println!("df/dy  = {}", f.partial_derivative("y")?);
    println!("ord f  = {}", f.min_total_degree());
    println!("tangent cone = {}", f.lowest_form());

    let shear = parse_poly("x + 2*y", &vars)?;
    let g = f.substitute("x", &shear)?;
    println!("f(x + 2y, y) = {g}");
    assert_eq!(g.min_total_degree(), f.min_total_degree());
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("polynomial example failed");
}
