// Embedded resolution of the cusp, its dual graph in DOT, and the
// log canonical threshold read off the divisors.
//
// ```bash
// cargo run --example resolve_cusp > cusp.dot
// ```

use singularity::invariants::{fiber_topology, lct};
use singularity::poly::parse_poly;
use singularity::resolution::{embedded_resolution, find_ample_weights, make_separating};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let f = parse_poly("x^2 + y^3", &["x", "y"])?;
    let tree = embedded_resolution(&f)?;
    for d in &tree.divisors {
        eprintln!("E{}: m = {}, a = {}, E^2 = {}", d.id, d.m, d.a, d.self_intersection);
    }
    assert!(tree.is_negative_definite());
    eprintln!("lct = {}", lct(&tree));
    eprintln!("fiber: {:?}", fiber_topology(&tree)?);
    eprintln!("ample weights: {:?}", find_ample_weights(&tree));

    // Blowing up further until no two divisors with m_i | 12 meet.
    let sep = make_separating(&tree, 12);
    eprintln!("12-separating resolution has {} divisors", sep.len());

    print!("{}", tree.to_dot());
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("resolution example failed");
}
