mod common;

use std::f64::consts::PI;
use std::panic::{self, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

use common::{mu_oracle, plane, random_continuation, random_path, random_pieces, PLANE_CORPUS};
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use singularity::cz::{concatenate, cz_index, direct_sum, HalfInteger, SymplecticPath};
use singularity::family::{cross_ratio, family_check, j_invariant, j_invariant_value, FamilySpec, Verdict};
use singularity::invariants::{fiber_topology, lct, lefschetz};
use singularity::local_algebra::{milnor_number, multiplicity};
use singularity::mclean::{e1_page, lct_via_floer, multiplicity_via_ss};
use singularity::poly::ratfunc::RationalFunction;
use singularity::poly::univariate::UniPoly;
use singularity::poly::{parse_poly, Extended, Rational};
use singularity::resolution::{embedded_resolution, make_separating, ResolutionTree};

type Check = Result<(), String>;
type Criterion = (&'static str, fn() -> Check);

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

fn tree(f: &str) -> ResolutionTree {
    embedded_resolution(&plane(f)).unwrap()
}

fn golden_invariants() -> Check {
    let mu = |f: &str, vars: &[&str]| milnor_number(&parse_poly(f, vars).unwrap());
    let xy = ["x", "y"];
    for (f, vars, want) in [
        ("x^2 + y^3", &xy[..], 2),
        ("x^2 + y^2*(1 + y)", &xy, 1),
        ("x^3 + y^4", &xy, 6),
        ("x*y*(x - y)*(x - 2*y)", &xy, 9),
        ("z0^7 + z1^2 + z2^2", &["z0", "z1", "z2"], 6),
    ] {
        ensure!(mu(f, vars) == Extended::Finite(want), "mu({f}) = {}, want {want}", mu(f, vars));
    }
    for (f, want) in [("x^3 + y^4", 3), ("x^2 + y^3", 2), ("x^2 + y^2", 2)] {
        let nu = multiplicity(&plane(f)).unwrap();
        ensure!(nu == want, "nu({f}) = {nu}, want {want}");
    }
    Ok(())
}

fn cusp_lct() -> Check {
    let t = tree("x^2 + y^3");
    ensure!(lct(&t) == q(5, 6), "divisorial lct = {}", lct(&t));
    let floer = lct_via_floer(&t, 6).map_err(|e| e.to_string())?;
    ensure!(floer == q(5, 6), "Floer lct = {floer}");
    Ok(())
}

fn fiber_shapes() -> Check {
    for (f, euler, genus, branches) in [
        ("x^2 + y^3", -1, 1, 1),
        ("x^2 + y^2", 0, 0, 2),
        ("x^3 + y^4", -5, 3, 1),
    ] {
        let fib = fiber_topology(&tree(f)).map_err(|e| e.to_string())?;
        ensure!(
            (fib.euler, fib.genus, fib.branches) == (euler, genus, branches),
            "{f}: got {fib:?}"
        );
    }
    Ok(())
}

fn multiplicity_detection() -> Check {
    ensure!(PLANE_CORPUS.len() >= 8, "corpus too small");
    for &(f, _) in PLANE_CORPUS {
        let t = tree(f);
        let nu = multiplicity(&plane(f)).unwrap();
        let ss = multiplicity_via_ss(&t);
        ensure!(ss == nu, "{f}: via ss {ss}, nu {nu}");
        let min = t.min_multiplicity();
        if t.divisors.iter().filter(|d| d.m == min).count() == 1 {
            let page = e1_page(&make_separating(&t, nu), nu, None).map_err(|e| e.to_string())?;
            ensure!(page.support.len() == 1, "{f}: support {:?}", page.support);
        }
    }
    Ok(())
}

/// Λ(φ^m) = 1 − Σ λ^m over the monodromy eigenvalues on H_1 of the fiber of
/// x^a + y^b, which are ζ_a^i ζ_b^j for 0 < i < a, 0 < j < b.
fn brieskorn_lefschetz(a: u64, b: u64, m: u64) -> i64 {
    let mut trace = 0.0;
    for i in 1..a {
        for j in 1..b {
            let angle = 2.0 * PI * m as f64 * (i as f64 / a as f64 + j as f64 / b as f64);
            trace += angle.cos();
        }
    }
    (1.0 - trace).round() as i64
}

fn a_campo() -> Check {
    for &(f, _) in PLANE_CORPUS {
        if multiplicity(&plane(f)).unwrap() >= 2 {
            let l = lefschetz(&tree(f), 1);
            ensure!(l == 0, "{f}: Lambda(1) = {l}");
        }
    }
    let cusp = tree("x^2 + y^3");
    for (m, want) in [(2, 2), (6, -1)] {
        let l = lefschetz(&cusp, m);
        ensure!(l == want && l == brieskorn_lefschetz(2, 3, m), "cusp Lambda({m}) = {l}");
    }
    let e6 = tree("x^3 + y^4");
    for m in 1..=12 {
        ensure!(lefschetz(&e6, m) == brieskorn_lefschetz(3, 4, m), "x^3 + y^4, m = {m}");
    }
    Ok(())
}

fn euler_identity() -> Check {
    for &(f, _) in PLANE_CORPUS {
        let t = tree(f);
        for m in 1..=12 {
            let page = e1_page(&make_separating(&t, m), m, None).map_err(|e| e.to_string())?;
            let l = lefschetz(&t, m);
            ensure!(page.euler_characteristic() == -l, "{f}, m = {m}: {} vs {}", page.euler_characteristic(), -l);
        }
    }
    Ok(())
}

fn cross_path_consistency() -> Check {
    for &(f, _) in PLANE_CORPUS {
        let fib = fiber_topology(&tree(f)).map_err(|e| e.to_string())?;
        let mu = milnor_number(&plane(f));
        ensure!(mu == Extended::Finite(fib.mu), "{f}: fiber {} vs standard basis {mu}", fib.mu);
    }
    Ok(())
}

fn zariski_desk_check() -> Check {
    let lines = FamilySpec::from_json(
        r#"{"poly": "x*y*(x - y)*(x - t*y)", "vars": ["x", "y"], "param": "t",
            "samples": [2, 3, -1, "5/2"], "excluded": [0, 1]}"#,
    )
    .map_err(|e| e.to_string())?;
    let r = family_check(&lines).map_err(|e| e.to_string())?;
    ensure!(
        r.mu_constant && r.nu_constant && r.lct_constant == Some(true),
        "four lines: {r}"
    );
    ensure!(
        r.rows.iter().all(|row| row.nu == 4 && row.lct == Some(q(1, 2))),
        "four lines rows: {r}"
    );
    ensure!(r.zariski_verdict == Verdict::Pass, "four lines verdict");

    let jump = FamilySpec::from_json(
        r#"{"poly": "x^2*(x + t) + y^2*(y^2 + t)", "vars": ["x", "y"], "param": "t", "samples": [0, 1]}"#,
    )
    .map_err(|e| e.to_string())?;
    let r = family_check(&jump).map_err(|e| e.to_string())?;
    let mus: Vec<Extended> = r.rows.iter().map(|row| row.mu).collect();
    ensure!(mus == [Extended::Finite(6), Extended::Finite(1)], "jump: {mus:?}");
    ensure!(!r.mu_constant && r.zariski_verdict == Verdict::NotApplicable, "jump: {r}");
    Ok(())
}

fn cz_axioms() -> Check {
    let full = cz_index(&SymplecticPath::rotation(2.0 * PI)).map_err(|e| e.to_string())?;
    ensure!(full == HalfInteger::from_int(2), "rotation: {full}");

    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let (mut cat, mut sum, mut parity) = (0, 0, 0);
    let mut tries = 0;
    while (cat < 50 || sum < 50 || parity < 50) && tries < 600 {
        tries += 1;
        let dim = 2 * rng.gen_range(1..=2);
        let a = random_path(&mut rng, dim);
        let Ok(ia) = cz_index(&a) else { continue };

        if parity < 50 {
            let shifted = DMatrix::identity(dim, dim) - a.end();
            if let Some(cz) = ia.to_integer() {
                if shifted.clone().singular_values().min() > 1e-3 {
                    let lhs = if ((dim / 2) as i64 - cz).rem_euclid(2) == 0 { 1.0 } else { -1.0 };
                    ensure!(lhs == shifted.determinant().signum(), "parity fails with cz = {cz}");
                    parity += 1;
                }
            }
        }
        if cat < 50 {
            let b = random_continuation(&mut rng, a.end());
            if let Ok(ib) = cz_index(&b) {
                let ab = cz_index(&concatenate(&a, &b).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
                ensure!(ab == ia + ib, "catenation: {ab} != {ia} + {ib}");
                cat += 1;
            }
        }
        if sum < 50 {
            let other = 2 * rng.gen_range(1..=2);
            let b = SymplecticPath::new(None, random_pieces(&mut rng, other, Some(a.duration())))
                .map_err(|e| e.to_string())?;
            if let Ok(ib) = cz_index(&b) {
                let ab = cz_index(&direct_sum(&a, &b).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
                ensure!(ab == ia + ib, "direct sum: {ab} != {ia} + {ib}");
                sum += 1;
            }
        }
    }
    ensure!(cat == 50 && sum == 50 && parity == 50, "only {cat}/{sum}/{parity} regular samples");
    Ok(())
}

fn cross_ratio_and_j() -> Check {
    let var = "t";
    let moving = RationalFunction::new(UniPoly::from_ints(&[-1, 1]), UniPoly::from_ints(&[1, 1]), var)
        .map_err(|e| e.to_string())?;
    let pts = [-1, 0, 1].map(|c| RationalFunction::from_int(c, var));
    let lambda = cross_ratio([&pts[0], &pts[1], &pts[2], &moving]).map_err(|e| e.to_string())?;
    let want = RationalFunction::new(UniPoly::from_ints(&[-1, 1]), UniPoly::from_ints(&[0, 1]), var)
        .map_err(|e| e.to_string())?;
    ensure!(lambda == want, "cross-ratio = {lambda}");

    // 256 (t² − t + 1)³ / (t² (t − 1)²), expanded by hand.
    let num = UniPoly::from_ints(&[256, -768, 1536, -1792, 1536, -768, 256]);
    let den = UniPoly::from_ints(&[0, 0, 1, -2, 1]);
    let want = RationalFunction::new(num, den, var).map_err(|e| e.to_string())?;
    let j = j_invariant(&lambda).map_err(|e| e.to_string())?;
    ensure!(j == want, "j = {j}");

    let j_minus_one = j_invariant_value(&q(-1, 1)).map_err(|e| e.to_string())?;
    ensure!(j_minus_one == q(1728, 1), "j(-1) = {j_minus_one}");
    Ok(())
}

fn mu_oracle_agreement() -> Check {
    let mut checked = 0;
    for &(f, _) in PLANE_CORPUS {
        let p = plane(f);
        let mu = milnor_number(&p);
        if mu.finite().is_some_and(|m| m <= 12) {
            let oracle = mu_oracle(&p);
            ensure!(oracle == mu.finite(), "{f}: standard basis {mu}, oracle {oracle:?}");
            checked += 1;
        }
    }
    ensure!(checked == PLANE_CORPUS.len(), "only {checked} corpus members have mu <= 12");
    Ok(())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("golden invariants", golden_invariants),
        ("cusp lct, divisorial and Floer", cusp_lct),
        ("fiber topology", fiber_shapes),
        ("multiplicity from the spectral sequence", multiplicity_detection),
        ("A'Campo vanishing and cusp Lefschetz numbers", a_campo),
        ("E1 Euler characteristic vs Lefschetz, m <= 12", euler_identity),
        ("fiber mu vs standard-basis mu", cross_path_consistency),
        ("Zariski desk check", zariski_desk_check),
        ("Conley-Zehnder axioms", cz_axioms),
        ("cross-ratio and j-invariant", cross_ratio_and_j),
        ("mu vs truncated linear algebra", mu_oracle_agreement),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(()) => println!("PASS {:>2} {name} ({secs:.2}s)", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name} ({secs:.2}s): {why}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
