//! Invariants read off a resolution tree: log canonical threshold, Lefschetz
//! numbers of monodromy iterates, the monodromy zeta function and the
//! topology of the Milnor fiber. Also a Newton-polygon oracle used to
//! cross-check nondegenerate curves.

use std::collections::BTreeMap;
use std::fmt;

use num::{BigInt, Integer, One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::poly::{Polynomial, Rational};
use crate::resolution::ResolutionTree;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum InvariantError {
    #[error("no divisor E{0}")]
    UnknownDivisor(usize),
    #[error("inconsistent fiber topology: euler {euler}, branches {branches}")]
    InconsistentTopology { euler: i64, branches: u64 },
    #[error("Newton polygon is degenerate: {0}")]
    DegeneratePolygon(String),
}

/// `Π_d (1 − t^d)^{e_d}` with every stored exponent nonzero.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZetaFunction {
    pub factors: BTreeMap<u64, i64>,
}

impl ZetaFunction {
    /// Lefschetz number of the `m`-th iterate encoded by the factors.
    pub fn lefschetz(&self, m: u64) -> i64 {
        self.factors
            .iter()
            .filter(|(&d, _)| m % d == 0)
            .map(|(&d, &e)| -(d as i64) * e)
            .sum()
    }
}

impl fmt::Display for ZetaFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|(&d, &e)| {
                let base = if d == 1 { "(1 - t)".to_string() } else { format!("(1 - t^{d})") };
                if e == 1 {
                    base
                } else {
                    format!("{base}^{e}")
                }
            })
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiberTopology {
    pub mu: u64,
    pub branches: u64,
    pub euler: i64,
    pub genus: u64,
}

/// `min(1, min_i (a_i + 1)/m_i)`.
pub fn lct(tree: &ResolutionTree) -> Rational {
    tree.divisors
        .iter()
        .map(|d| Rational::new(BigInt::from(d.a + 1), BigInt::from(d.m)))
        .fold(Rational::one(), |acc, r| if r < acc { r } else { acc })
}

/// Euler characteristic of `E_i` with all other components of the total
/// transform removed.
pub fn euler_open(tree: &ResolutionTree, id: usize) -> Result<i64, InvariantError> {
    let d = tree.divisor(id).ok_or(InvariantError::UnknownDivisor(id))?;
    Ok(2 - d.adjacent.len() as i64 - d.strict_points as i64)
}

fn euler_open_unchecked(tree: &ResolutionTree, id: usize) -> i64 {
    euler_open(tree, id).expect("id taken from the tree")
}

/// `Λ(φ^m) = Σ_{m_i | m} m_i χ(E_i^o)` over exceptional divisors.
pub fn lefschetz(tree: &ResolutionTree, m: u64) -> i64 {
    tree.divisors
        .iter()
        .filter(|d| m % d.m == 0)
        .map(|d| d.m as i64 * euler_open_unchecked(tree, d.id))
        .sum()
}

pub fn zeta(tree: &ResolutionTree) -> ZetaFunction {
    let mut factors = BTreeMap::new();
    for d in &tree.divisors {
        *factors.entry(d.m).or_insert(0) -= euler_open_unchecked(tree, d.id);
    }
    factors.retain(|_, e| *e != 0);
    ZetaFunction { factors }
}

pub fn fiber_topology(tree: &ResolutionTree) -> Result<FiberTopology, InvariantError> {
    let euler: i64 = tree
        .divisors
        .iter()
        .map(|d| d.m as i64 * euler_open_unchecked(tree, d.id))
        .sum();
    let branches = tree.branches();
    let twice_genus = 2 - euler - branches as i64;
    if euler > 1 || branches == 0 || twice_genus < 0 || twice_genus % 2 != 0 {
        return Err(InvariantError::InconsistentTopology { euler, branches });
    }
    Ok(FiberTopology {
        mu: (1 - euler) as u64,
        branches,
        euler,
        genus: (twice_genus / 2) as u64,
    })
}

/// Milnor number and log canonical threshold from the Newton polygon of a
/// convenient curve. Only meaningful when `f` is Newton-nondegenerate.
pub fn newton_oracle(f: &Polynomial) -> Result<(u64, Rational), InvariantError> {
    if f.nvars() != 2 {
        return Err(InvariantError::DegeneratePolygon(format!("{} variables", f.nvars())));
    }
    let support: Vec<(i64, i64)> = f
        .terms()
        .map(|(m, _)| (m.exponents()[0] as i64, m.exponents()[1] as i64))
        .collect();
    if support.contains(&(0, 0)) {
        return Err(InvariantError::DegeneratePolygon("nonzero constant term".into()));
    }
    let a = support.iter().filter(|p| p.1 == 0).map(|p| p.0).min();
    let b = support.iter().filter(|p| p.0 == 0).map(|p| p.1).min();
    let (Some(a), Some(b)) = (a, b) else {
        return Err(InvariantError::DegeneratePolygon("not convenient".into()));
    };

    let mut pts = support.clone();
    pts.sort();
    pts.dedup();
    // Lower convex hull, walked left to right and cut at (a, 0).
    let mut hull: Vec<(i64, i64)> = Vec::new();
    for &p in &pts {
        while hull.len() >= 2 {
            let (o, q) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            let cross = (q.0 - o.0) * (p.1 - o.1) - (q.1 - o.1) * (p.0 - o.0);
            if cross <= 0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    let start = hull.iter().position(|&p| p == (0, b)).expect("lowest point on the y-axis");
    let end = hull.iter().position(|&p| p == (a, 0)).expect("lowest point on the x-axis");
    let chain = &hull[start..=end];

    // Twice the area under the chain, by trapezoids.
    let twice_area: i64 = chain.windows(2).map(|w| (w[1].0 - w[0].0) * (w[0].1 + w[1].1)).sum();
    let mu = twice_area - a - b + 1;

    // (t, t) enters the Newton polyhedron at t = max over edges of N/(p+q).
    let mut t_star = Rational::zero();
    for w in chain.windows(2) {
        let (p, q) = (w[0].1 - w[1].1, w[1].0 - w[0].0);
        let g = p.gcd(&q);
        let (p, q) = (p / g, q / g);
        let n = p * w[0].0 + q * w[0].1;
        let t = Rational::new(n.into(), (p + q).into());
        if t > t_star {
            t_star = t;
        }
    }
    let lct = if t_star <= Rational::one() { Rational::one() } else { t_star.recip() };
    debug_assert!(lct.is_positive());
    Ok((mu as u64, lct))
}
