// Conley–Zehnder indices of paths of symplectic matrices.
//
// ```bash
// cargo run --example conley_zehnder
// ```

use std::f64::consts::PI;

use nalgebra::DMatrix;
use singularity::cz::{concatenate, cz_index, direct_sum, find_crossings, CzError, SymplecticPath};

pub fn run_example() -> Result<(), CzError> {
    for turns in 1..=3 {
        let path = SymplecticPath::rotation(2.0 * PI * turns as f64);
        println!("{turns} full turn(s): CZ = {}", cz_index(&path)?);
    }

    // Half a turn ends at -I; a hyperbolic piece stays off the unit circle.
    let half = SymplecticPath::rotation(PI);
    let hyperbolic = SymplecticPath::new(None, vec![(DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0]), 1.0)])?;
    println!("half turn: CZ = {}", cz_index(&half)?);
    println!("hyperbolic: CZ = {}", cz_index(&hyperbolic)?);
    let sum = direct_sum(&SymplecticPath::rotation(1.0), &hyperbolic)?;
    println!("direct sum: CZ = {}", cz_index(&sum)?);

    let tail = SymplecticPath::new(Some(half.end()), vec![(DMatrix::identity(2, 2) * 0.5, 1.0)])?;
    let both = concatenate(&half, &tail)?;
    for c in find_crossings(&both)? {
        println!(
            "crossing t = {:.6} segment {} kernel {} signature {} -> {}",
            c.time,
            c.segment,
            c.kernel_dim,
            c.signature,
            c.contribution()
        );
    }
    println!("concatenation: CZ = {}", cz_index(&both)?);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("Conley-Zehnder example failed");
}
