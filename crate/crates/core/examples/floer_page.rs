// First page of the spectral sequence for the Floer cohomology of the
// monodromy iterates, and the two invariants read off it.
//
// ```bash
// cargo run --example floer_page
// ```

use singularity::invariants::{lct, lefschetz};
use singularity::mclean::{e1_page, lct_via_floer, multiplicity_via_ss};
use singularity::poly::parse_poly;
use singularity::resolution::{embedded_resolution, make_separating};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let tree = embedded_resolution(&parse_poly("x^3 + y^4", &["x", "y"])?)?;
    for m in 1..=6 {
        let sep = make_separating(&tree, m);
        let page = e1_page(&sep, m, None)?;
        let cells: Vec<String> = page
            .entries
            .iter()
            .map(|(&(p, q), r)| format!("E1^({p},{q}) = {r}"))
            .collect();
        println!("m = {m}: {}", if cells.is_empty() { "0".into() } else { cells.join(", ") });
        assert_eq!(page.euler_characteristic(), -lefschetz(&tree, m));
    }
    println!("multiplicity from the first nonzero page: {}", multiplicity_via_ss(&tree));
    let floer = lct_via_floer(&tree, tree.lcm_multiplicities())?;
    println!("lct from Floer degrees: {floer} (discrepancies: {})", lct(&tree));
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("spectral sequence example failed");
}
