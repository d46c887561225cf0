mod common;

use std::f64::consts::PI;

use common::{random_continuation, random_path, random_pieces};
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use singularity::cz::{concatenate, cz_index, direct_sum, find_crossings, HalfInteger, SymplecticPath};

const WANTED: usize = 50;

fn parity_holds(p: &SymplecticPath, cz: HalfInteger) -> Option<bool> {
    let end = p.end();
    let n = p.dimension();
    let shifted = DMatrix::identity(n, n) - &end;
    if shifted.clone().singular_values().min() < 1e-3 {
        return None;
    }
    let cz = cz.to_integer()?;
    let lhs = if (n as i64 / 2 - cz).rem_euclid(2) == 0 { 1.0 } else { -1.0 };
    Some(lhs == shifted.determinant().signum())
}

#[test]
fn crossing_invariants() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..20 {
        let dim = 2 * rng.gen_range(1..=2);
        let Ok(crossings) = find_crossings(&random_path(&mut rng, dim)) else { continue };
        for c in crossings {
            assert!(c.signature.unsigned_abs() as usize <= c.kernel_dim);
            assert_eq!((c.signature - c.kernel_dim as i64).rem_euclid(2), 0);
        }
    }
}

#[test]
fn catenation_is_additive() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut checked = 0;
    for _ in 0..200 {
        let dim = 2 * rng.gen_range(1..=2);
        let a = random_path(&mut rng, dim);
        let b = random_continuation(&mut rng, a.end());
        let (Ok(ia), Ok(ib)) = (cz_index(&a), cz_index(&b)) else { continue };
        let ab = concatenate(&a, &b).unwrap();
        assert_eq!(cz_index(&ab).unwrap(), ia + ib);
        checked += 1;
        if checked == WANTED {
            break;
        }
    }
    assert_eq!(checked, WANTED);
}

#[test]
fn direct_sum_is_additive() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let mut checked = 0;
    for _ in 0..200 {
        let a = random_path(&mut rng, 2);
        let dim = 2 * rng.gen_range(1..=2);
        let pieces = random_pieces(&mut rng, dim, Some(a.duration()));
        let b = SymplecticPath::new(None, pieces).unwrap();
        let (Ok(ia), Ok(ib)) = (cz_index(&a), cz_index(&b)) else { continue };
        let sum = direct_sum(&a, &b).unwrap();
        assert_eq!(cz_index(&sum).unwrap(), ia + ib);
        checked += 1;
        if checked == WANTED {
            break;
        }
    }
    assert_eq!(checked, WANTED);
}

#[test]
fn parity_law() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let mut checked = 0;
    for _ in 0..200 {
        let dim = 2 * rng.gen_range(1..=2);
        let p = random_path(&mut rng, dim);
        let Ok(cz) = cz_index(&p) else { continue };
        let Some(ok) = parity_holds(&p, cz) else { continue };
        assert!(ok, "parity fails with cz = {cz}");
        checked += 1;
        if checked == WANTED {
            break;
        }
    }
    assert_eq!(checked, WANTED);
}

#[test]
fn reparameterization_invariance() {
    let mut rng = ChaCha8Rng::seed_from_u64(19);
    for _ in 0..25 {
        let dim = 2 * rng.gen_range(1..=2);
        let p = random_path(&mut rng, dim);
        let Ok(cz) = cz_index(&p) else { continue };
        let factor = rng.gen_range(0.3..3.0);
        assert_eq!(cz_index(&p.time_scaled(factor)).unwrap(), cz);
    }
}

#[test]
fn rotation_axioms() {
    let full = SymplecticPath::rotation(2.0 * PI);
    assert_eq!(cz_index(&full).unwrap().to_integer(), Some(2));
    // A constant tail at a nondegenerate endpoint adds nothing.
    let half = SymplecticPath::rotation(PI);
    let tail = SymplecticPath::constant(half.end(), 1.0).unwrap();
    let with_tail = concatenate(&half, &tail).unwrap();
    assert_eq!(cz_index(&with_tail).unwrap(), cz_index(&half).unwrap());
    // k full turns have index 2k.
    for k in 1..=4 {
        let p = SymplecticPath::rotation(2.0 * PI * k as f64);
        assert_eq!(cz_index(&p).unwrap().to_integer(), Some(2 * k));
    }
}
