//! First page of the spectral sequence computing fixed-point Floer
//! cohomology of monodromy iterates of a plane curve, built from the
//! homology of cyclic covers of the open divisors `E_i^o`.
//!
//! For each divisor with `m_i | m` and `k_i = m / m_i`, the cover homology in
//! degree `j` sits at `p = −k_i w_i` and total degree
//! `p + q = 1 − j − 2 k_i (a_i + 1)`.

use std::collections::{BTreeMap, BTreeSet};

use num::{BigInt, Integer, One};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::invariants::euler_open;
use crate::poly::Rational;
use crate::resolution::{find_ample_weights, make_separating, ResolutionTree};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SpectralError {
    #[error("no divisor E{0}")]
    UnknownDivisor(usize),
    #[error("weights must be {expected} positive integers making -Σ w_i E_i ample")]
    NotAmple { expected: usize },
    #[error("resolution is not {0}-separating")]
    NotSeparating(u64),
    #[error("m_max = {given} is smaller than lcm(m_i) = {needed}")]
    MmaxTooSmall { given: u64, needed: u64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverHomology {
    pub components: u64,
    pub rank_h1: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct E1Entry {
    pub p: i64,
    pub q: i64,
    pub rank: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct E1Page {
    pub m: u64,
    #[serde(with = "entry_list")]
    pub entries: BTreeMap<(i64, i64), u64>,
    pub weights: Vec<u64>,
    /// Divisors with `m_i | m`.
    pub support: BTreeSet<usize>,
}

mod entry_list {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(map: &BTreeMap<(i64, i64), u64>, s: S) -> Result<S::Ok, S::Error> {
        let list: Vec<E1Entry> = map.iter().map(|(&(p, q), &rank)| E1Entry { p, q, rank }).collect();
        list.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BTreeMap<(i64, i64), u64>, D::Error> {
        let list = Vec::<E1Entry>::deserialize(d)?;
        Ok(list.into_iter().map(|e| ((e.p, e.q), e.rank)).collect())
    }
}

impl E1Page {
    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// `Σ (−1)^{p+q} rank`.
    pub fn euler_characteristic(&self) -> i64 {
        self.entries
            .iter()
            .map(|(&(p, q), &r)| if (p + q).rem_euclid(2) == 0 { r as i64 } else { -(r as i64) })
            .sum()
    }

    /// Total rank in each total degree `p + q`.
    pub fn total_degrees(&self) -> BTreeMap<i64, u64> {
        let mut out = BTreeMap::new();
        for (&(p, q), &r) in &self.entries {
            *out.entry(p + q).or_insert(0) += r;
        }
        out
    }
}

/// Homology of the cyclic `m_i`-fold cover of `E_i^o` whose monodromy
/// around the puncture left by a neighbouring component of multiplicity
/// `m_j` is `m_j mod m_i`.
pub fn cover_homology(tree: &ResolutionTree, id: usize) -> Result<CoverHomology, SpectralError> {
    let d = tree.divisor(id).ok_or(SpectralError::UnknownDivisor(id))?;
    let mut g = d.m;
    for &j in &d.adjacent {
        g = g.gcd(&tree.divisor(j).unwrap().m);
    }
    if d.strict_points > 0 {
        g = 1;
    }
    let chi = euler_open(tree, id).map_err(|_| SpectralError::UnknownDivisor(id))?;
    let rank_h1 = g as i64 - d.m as i64 * chi;
    debug_assert!(rank_h1 >= 0);
    Ok(CoverHomology {
        components: g,
        rank_h1: rank_h1 as u64,
    })
}

/// E1 page for the `m`-th iterate. `weights` defaults to
/// [`find_ample_weights`].
pub fn e1_page(tree: &ResolutionTree, m: u64, weights: Option<&[u64]>) -> Result<E1Page, SpectralError> {
    if !tree.is_separating(m) {
        return Err(SpectralError::NotSeparating(m));
    }
    let weights = match weights {
        Some(w) if tree.is_ample(w) => w.to_vec(),
        Some(_) => return Err(SpectralError::NotAmple { expected: tree.len() }),
        None => find_ample_weights(tree),
    };
    let mut entries = BTreeMap::new();
    let mut support = BTreeSet::new();
    for (d, &w) in tree.divisors.iter().zip(&weights) {
        if m % d.m != 0 {
            continue;
        }
        support.insert(d.id);
        let k = (m / d.m) as i64;
        let cover = cover_homology(tree, d.id)?;
        let p = -k * w as i64;
        for (j, rank) in [(0, cover.components), (1, cover.rank_h1)] {
            if rank == 0 {
                continue;
            }
            let q = 1 - j - 2 * k * (d.a as i64 + 1) - p;
            *entries.entry((p, q)).or_insert(0) += rank;
        }
    }
    Ok(E1Page {
        m,
        entries,
        weights,
        support,
    })
}

/// Smallest iterate with a nonzero E1 page.
pub fn multiplicity_via_ss(tree: &ResolutionTree) -> u64 {
    (1..=tree.min_multiplicity().max(1))
        .find(|&m| {
            let t = make_separating(tree, m);
            !e1_page(&t, m, None).expect("separating tree, default weights").is_empty()
        })
        .expect("the page at m = min m_i is nonzero")
}

/// Floer-degree estimate of the log canonical threshold from the pages
/// `k = 1..=m_max`.
///
/// An entry in degree `α` contributes the slope `⌈−α/2⌉ / k`, which drops
/// the bounded shift between the two homological degrees of a divisor; that
/// shift vanishes in the limit `k → ∞` anyway.
pub fn lct_via_floer(tree: &ResolutionTree, m_max: u64) -> Result<Rational, SpectralError> {
    let needed = tree.lcm_multiplicities();
    if m_max < needed {
        return Err(SpectralError::MmaxTooSmall { given: m_max, needed });
    }
    let best = (1..=m_max)
        .into_par_iter()
        .filter_map(|k| {
            let t = make_separating(tree, k);
            let page = e1_page(&t, k, None).expect("separating tree, default weights");
            page.entries
                .keys()
                .map(|&(p, q)| {
                    let minus_alpha = -(p + q);
                    Rational::new(BigInt::from(minus_alpha).div_ceil(&BigInt::from(2)), BigInt::from(k))
                })
                .min()
        })
        .min()
        .unwrap_or_else(Rational::one);
    Ok(best.min(Rational::one()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::invariants::{lct, lefschetz};
    use crate::poly::parse_poly;
    use crate::resolution::embedded_resolution;

    fn tree(s: &str) -> ResolutionTree {
        embedded_resolution(&parse_poly(s, &["x", "y"]).unwrap()).unwrap()
    }

    fn by_m(t: &ResolutionTree, m: u64) -> usize {
        t.divisors.iter().find(|d| d.m == m).unwrap().id
    }

    #[test]
    fn cusp_covers() {
        let t = tree("x^2 + y^3");
        assert_eq!(cover_homology(&t, by_m(&t, 2)), Ok(CoverHomology { components: 2, rank_h1: 0 }));
        assert_eq!(cover_homology(&t, by_m(&t, 6)), Ok(CoverHomology { components: 1, rank_h1: 7 }));
        let n = tree("x^2 + y^2");
        assert_eq!(cover_homology(&n, 1), Ok(CoverHomology { components: 1, rank_h1: 1 }));
        assert_eq!(cover_homology(&n, 7), Err(SpectralError::UnknownDivisor(7)));
    }

    #[test]
    fn cusp_pages() {
        let t = tree("x^2 + y^3");
        let page = e1_page(&t, 2, None).unwrap();
        assert_eq!(page.entries.len(), 1);
        let (&(p, q), &r) = page.entries.iter().next().unwrap();
        assert_eq!((p + q, r), (-3, 2));
        assert_eq!(page.euler_characteristic(), -2);
        assert!(e1_page(&t, 1, None).unwrap().is_empty());
        assert_eq!(e1_page(&t, 12, None), Err(SpectralError::NotSeparating(12)));
        assert_eq!(
            e1_page(&t, 2, Some(&[1, 1, 1])),
            Err(SpectralError::NotAmple { expected: 3 })
        );
    }

    #[test]
    fn node_page() {
        let t = tree("x^2 + y^2");
        let page = e1_page(&t, 2, None).unwrap();
        assert_eq!(page.total_degrees(), BTreeMap::from([(-4, 1), (-3, 1)]));
        assert_eq!(page.euler_characteristic(), -lefschetz(&t, 2));
    }

    #[test]
    fn euler_identity() {
        for s in ["x^2 + y^3", "x^3 + y^4", "x^2 + y^2", "x^2*y + y^4"] {
            let t = tree(s);
            for m in 1..=12 {
                let sep = make_separating(&t, m);
                let page = e1_page(&sep, m, None).unwrap();
                assert_eq!(page.euler_characteristic(), -lefschetz(&t, m), "{s}, m = {m}");
            }
        }
    }

    #[test]
    fn weight_choice_only_moves_p() {
        let t = tree("x^2 + y^3");
        let w = find_ample_weights(&t);
        let doubled: Vec<u64> = w.iter().map(|x| 2 * x + 1).collect();
        assert!(t.is_ample(&doubled));
        let a = e1_page(&t, 6, Some(&w)).unwrap();
        let b = e1_page(&t, 6, Some(&doubled)).unwrap();
        assert_eq!(a.total_degrees(), b.total_degrees());
        assert_ne!(a.entries, b.entries);
    }

    #[test]
    fn multiplicity_detection() {
        assert_eq!(multiplicity_via_ss(&tree("x^2 + y^3")), 2);
        assert_eq!(multiplicity_via_ss(&tree("x^3 + y^4")), 3);
        assert_eq!(multiplicity_via_ss(&tree("x^2 + y^2")), 2);
        assert_eq!(multiplicity_via_ss(&tree("y - x^2")), 1);
    }

    #[test]
    fn floer_lct() {
        let q = |n: i64, d: i64| Rational::new(n.into(), d.into());
        assert_eq!(lct_via_floer(&tree("x^2 + y^3"), 6), Ok(q(5, 6)));
        assert_eq!(lct_via_floer(&tree("x^2 + y^2"), 2), Ok(q(1, 1)));
        let e6 = tree("x^3 + y^4");
        assert_eq!(lct_via_floer(&e6, 24), Ok(lct(&e6)));
        assert_eq!(
            lct_via_floer(&e6, 5),
            Err(SpectralError::MmaxTooSmall { given: 5, needed: 24 })
        );
    }
}
