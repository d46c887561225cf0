#![allow(dead_code)]

use nalgebra::DMatrix;
use num::{BigInt, Integer, ToPrimitive};
use rand::Rng;

use singularity::cz::SymplecticPath;
use singularity::poly::{parse_poly, Polynomial, Rational};

/// Plane curves with isolated singularities at the origin, with μ.
pub const PLANE_CORPUS: &[(&str, u64)] = &[
    ("x^2 + y^3", 2),
    ("x^2 + y^2", 1),
    ("x^2 + y^2*(1 + y)", 1),
    ("y^2 - x^2*(x + 1)", 1),
    ("x^2 - y^4", 3),
    ("x^2 + y^5", 4),
    ("x^2*y + y^4", 5),
    ("x^3 + y^4", 6),
    ("x^3 + x*y^3", 7),
    ("x^3 + y^5", 8),
    ("x*y*(x - y)*(x - 2*y)", 9),
    ("x^4 - y^4", 9),
    ("(x^2 - y^3)*(x^3 - y^2)", 11),
];

pub fn plane(s: &str) -> Polynomial {
    parse_poly(s, &["x", "y"]).unwrap()
}

const PRIMES: [u64; 2] = [1_000_000_007, 998_244_353];

fn reduce(q: &Rational, p: u64) -> u64 {
    let pm = BigInt::from(p);
    let n = q.numer().mod_floor(&pm).to_u64().unwrap();
    let d = q.denom().mod_floor(&pm).to_u64().unwrap();
    n * inv(d, p) % p
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = (r as u128 * b as u128 % p as u128) as u64;
        }
        b = (b as u128 * b as u128 % p as u128) as u64;
        e >>= 1;
    }
    r
}

fn inv(a: u64, p: u64) -> u64 {
    assert!(a % p != 0, "bad reduction");
    pow_mod(a, p - 2, p)
}

fn monomials_below(nvars: usize, d: u32) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    for _ in 0..nvars {
        out = out
            .into_iter()
            .flat_map(|e: Vec<u32>| {
                let used: u32 = e.iter().sum();
                (0..d - used).map(move |k| {
                    let mut e = e.clone();
                    e.push(k);
                    e
                })
            })
            .collect();
    }
    out
}

fn rank_mod(mut rows: Vec<Vec<u64>>, p: u64) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..rows.len()).find(|&r| rows[r][c] != 0) else {
            continue;
        };
        rows.swap(rank, piv);
        let iv = inv(rows[rank][c], p);
        for v in rows[rank].iter_mut() {
            *v = (*v as u128 * iv as u128 % p as u128) as u64;
        }
        let pivot_row = rows[rank].clone();
        for r in 0..rows.len() {
            if r != rank && rows[r][c] != 0 {
                let f = rows[r][c];
                for (v, &pv) in rows[r].iter_mut().zip(&pivot_row) {
                    *v = (*v + p - (f as u128 * pv as u128 % p as u128) as u64) % p;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// `dim k[x]/(I + m^D)` over F_p, by linear algebra on truncated multiples.
fn truncated_dim(gens: &[Polynomial], d: u32, p: u64) -> usize {
    let n = gens[0].nvars();
    let monos = monomials_below(n, d);
    let index: std::collections::HashMap<&[u32], usize> =
        monos.iter().enumerate().map(|(i, e)| (e.as_slice(), i)).collect();
    let mut rows = Vec::new();
    for g in gens {
        for m in &monos {
            let mut row = vec![0u64; monos.len()];
            let mut any = false;
            for (mono, c) in g.terms() {
                let e: Vec<u32> = mono.exponents().iter().zip(m).map(|(a, b)| a + b).collect();
                if e.iter().sum::<u32>() < d {
                    let i = index[e.as_slice()];
                    row[i] = (row[i] + reduce(c, p)) % p;
                    any = true;
                }
            }
            if any {
                rows.push(row);
            }
        }
    }
    monos.len() - rank_mod(rows, p)
}

/// Length of the local algebra `O/I` for a zero-dimensional ideal: the
/// truncations stabilise exactly when `m^D ⊂ I` (Nakayama).
pub fn local_length_oracle(gens: &[Polynomial], max_d: u32) -> Option<u64> {
    let mut best = None;
    for p in PRIMES {
        let mut prev = truncated_dim(gens, 1, p);
        let mut found = None;
        for d in 2..=max_d {
            let cur = truncated_dim(gens, d, p);
            if cur == prev {
                found = Some(cur as u64);
                break;
            }
            prev = cur;
        }
        // Bad reduction can only drop the rank, so the smaller value wins.
        best = match (best, found) {
            (None, f) => f,
            (Some(b), Some(f)) => Some(std::cmp::min(b, f)),
            (b, None) => b,
        };
    }
    best
}

pub fn jacobian(f: &Polynomial) -> Vec<Polynomial> {
    f.vars().iter().map(|v| f.partial_derivative(v).unwrap()).collect()
}

pub fn mu_oracle(f: &Polynomial) -> Option<u64> {
    local_length_oracle(&jacobian(f), 40)
}

pub fn sigma_oracle(f: &Polynomial) -> Option<u64> {
    let mut gens = vec![f.clone()];
    let first = jacobian(f);
    for (i, g) in first.iter().enumerate() {
        for v in &f.vars()[i..] {
            gens.push(g.partial_derivative(v).unwrap());
        }
    }
    gens.extend(first);
    local_length_oracle(&gens, 40).map(|d| d + 1)
}

/// Divisor data `(m, a)` of the toric ray `(p, q)` for `f`:
/// `m = min(p i + q j)` over the support and `a + 1 = p + q`.
pub fn toric_divisor(f: &Polynomial, p: u64, q: u64) -> (u64, u64) {
    let m = f
        .terms()
        .map(|(mono, _)| p * mono.exponents()[0] as u64 + q * mono.exponents()[1] as u64)
        .min()
        .unwrap();
    (m, p + q - 1)
}

/// Random symmetric matrix with entries in `[-2, 2]`.
pub fn random_symmetric(rng: &mut impl Rng, dim: usize) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(dim, dim);
    for i in 0..dim {
        for j in i..dim {
            let v = rng.gen_range(-2.0..2.0);
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
    }
    m
}

fn well_conditioned(s: &DMatrix<f64>) -> bool {
    s.clone().symmetric_eigenvalues().iter().all(|e| e.abs() > 0.2)
}

/// Random generators and durations; the first generator is nondegenerate so
/// the crossing at the identity is regular.
pub fn random_pieces(rng: &mut impl Rng, dim: usize, total: Option<f64>) -> Vec<(DMatrix<f64>, f64)> {
    let k = rng.gen_range(1..=3);
    let mut pieces: Vec<(DMatrix<f64>, f64)> = (0..k)
        .map(|_| (random_symmetric(rng, dim), rng.gen_range(0.3..1.8)))
        .collect();
    while !well_conditioned(&pieces[0].0) {
        pieces[0].0 = random_symmetric(rng, dim);
    }
    if let Some(total) = total {
        let s: f64 = pieces.iter().map(|p| p.1).sum();
        for p in &mut pieces {
            p.1 *= total / s;
        }
    }
    pieces
}

pub fn random_path(rng: &mut impl Rng, dim: usize) -> SymplecticPath {
    SymplecticPath::new(None, random_pieces(rng, dim, None)).unwrap()
}

/// A path from `start` whose generators are all nondegenerate.
pub fn random_continuation(rng: &mut impl Rng, start: DMatrix<f64>) -> SymplecticPath {
    let dim = start.nrows();
    let mut pieces = random_pieces(rng, dim, None);
    for p in &mut pieces {
        while !well_conditioned(&p.0) {
            p.0 = random_symmetric(rng, dim);
        }
    }
    SymplecticPath::new(Some(start), pieces).unwrap()
}
