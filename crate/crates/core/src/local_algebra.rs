//! Invariants of the local ring at the origin.
//!
//! Standard bases are computed with Mora's tangent-cone algorithm under the
//! local degree reverse-lexicographic order, so quotient dimensions are those
//! of the localization at 0 (not of the global polynomial ring).

use std::cmp::Ordering;

use num::{One, Zero};
use thiserror::Error;

use crate::poly::{Extended, Monomial, Polynomial, Rational};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LocalError {
    #[error("the zero polynomial has no multiplicity")]
    ZeroPolynomial,
    #[error("f(0) = {0} is nonzero; the origin is not on the hypersurface")]
    NotThroughOrigin(Rational),
    #[error("expected a polynomial in exactly two variables, got {0}")]
    NotBivariate(usize),
    #[error("the quotient is infinite-dimensional (non-isolated singularity)")]
    NotIsolated,
}

/// Monomial order for the local ring: lower total degree is *larger*, ties
/// broken reverse-lexicographically in the declared variable order.
/// The constant monomial 1 is the largest monomial.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum LocalOrder {
    #[default]
    NegDegRevLex,
}

impl LocalOrder {
    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        match self {
            LocalOrder::NegDegRevLex => {
                let by_degree = b.degree().cmp(&a.degree());
                if by_degree != Ordering::Equal {
                    return by_degree;
                }
                // Reverse lex: the last differing exponent decides, smaller wins.
                for (x, y) in a.exponents().iter().zip(b.exponents()).rev() {
                    if x != y {
                        return y.cmp(x);
                    }
                }
                Ordering::Equal
            }
        }
    }

    pub fn leading_monomial(&self, p: &Polynomial) -> Option<Monomial> {
        p.terms()
            .map(|(m, _)| m)
            .max_by(|a, b| self.cmp(a, b))
            .cloned()
    }
}

/// Generator with its cached leading data.
#[derive(Clone, Debug)]
struct Entry {
    poly: Polynomial,
    lm: Monomial,
    ecart: u32,
}

impl Entry {
    fn new(poly: Polynomial, order: LocalOrder) -> Option<Entry> {
        let lm = order.leading_monomial(&poly)?;
        let lc = poly.coefficient(&lm);
        let poly = poly.scale(&lc.recip());
        let ecart = poly.max_total_degree().unwrap_or(0) - lm.degree();
        Some(Entry { poly, lm, ecart })
    }
}

/// Cancels the leading term of `h` using `g`, whose leading monomial divides it.
fn reduce_by(h: &Entry, g: &Entry) -> Polynomial {
    let shift = h.lm.div(&g.lm).expect("reducer leading monomial divides");
    let c = h.poly.coefficient(&h.lm);
    &h.poly - &g.poly.mul_monomial(&shift, &c)
}

fn s_polynomial(f: &Entry, g: &Entry) -> Polynomial {
    // Entries are monic, so the leading coefficients cancel directly.
    let l = f.lm.lcm(&g.lm);
    let one = Rational::one();
    let a = f.poly.mul_monomial(&l.div(&f.lm).unwrap(), &one);
    let b = g.poly.mul_monomial(&l.div(&g.lm).unwrap(), &one);
    &a - &b
}

/// Mora's weak normal form of `f` with respect to `basis`.
fn normal_form(f: Polynomial, basis: &[Entry], order: LocalOrder) -> Option<Entry> {
    let mut reducers: Vec<Entry> = basis.to_vec();
    let mut h = Entry::new(f, order)?;
    loop {
        let best = reducers
            .iter()
            .filter(|g| g.lm.divides(&h.lm))
            .min_by(|a, b| a.ecart.cmp(&b.ecart).then_with(|| order.cmp(&a.lm, &b.lm)));
        let Some(g) = best else {
            return Some(h);
        };
        let g = g.clone();
        if g.ecart > h.ecart {
            reducers.push(h.clone());
        }
        h = Entry::new(reduce_by(&h, &g), order)?;
    }
}

/// Public wrapper of the Mora normal form; returns zero when `f` reduces to 0.
pub fn mora_normal_form(f: &Polynomial, basis: &StandardBasis) -> Polynomial {
    let entries: Vec<Entry> = basis
        .generators
        .iter()
        .filter_map(|g| Entry::new(g.clone(), basis.order))
        .collect();
    normal_form(f.clone(), &entries, basis.order)
        .map(|e| e.poly)
        .unwrap_or_else(|| Polynomial::zero(f.vars()))
}

#[derive(Clone, Debug)]
pub struct StandardBasis {
    pub nvars: usize,
    pub generators: Vec<Polynomial>,
    pub order: LocalOrder,
    pub leading_terms: Vec<Monomial>,
}

/// Standard basis of the ideal generated by `gens` in the localization at 0.
///
/// S-pairs are processed in order of increasing lcm degree; every nonzero
/// normal form joins the basis. Zero generators are ignored.
pub fn standard_basis(gens: &[Polynomial], order: LocalOrder) -> StandardBasis {
    let nvars = gens.first().map_or(0, Polynomial::nvars);
    let mut basis: Vec<Entry> = gens
        .iter()
        .filter_map(|g| Entry::new(g.clone(), order))
        .collect();

    // A unit generator makes the ideal the whole local ring.
    if let Some(unit) = basis.iter().find(|e| e.lm.is_one()) {
        let unit = unit.clone();
        return finish(vec![unit], order, nvars);
    }

    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for j in 0..basis.len() {
        for i in 0..j {
            pairs.push((i, j));
        }
    }
    while !pairs.is_empty() {
        let pick = pairs
            .iter()
            .enumerate()
            .min_by_key(|(_, &(i, j))| (basis[i].lm.lcm(&basis[j].lm).degree(), i, j))
            .map(|(k, _)| k)
            .unwrap();
        let (i, j) = pairs.swap_remove(pick);
        let s = s_polynomial(&basis[i], &basis[j]);
        if let Some(h) = normal_form(s, &basis, order) {
            if h.lm.is_one() {
                return finish(vec![h], order, nvars);
            }
            let k = basis.len();
            basis.push(h);
            pairs.extend((0..k).map(|i| (i, k)));
        }
    }
    finish(basis, order, nvars)
}

fn finish(entries: Vec<Entry>, order: LocalOrder, nvars: usize) -> StandardBasis {
    let leading_terms = entries.iter().map(|e| e.lm.clone()).collect();
    StandardBasis {
        nvars,
        generators: entries.into_iter().map(|e| e.poly).collect(),
        order,
        leading_terms,
    }
}

impl StandardBasis {
    /// Leading monomials with redundant (divisible) ones removed, sorted.
    pub fn minimal_leading_terms(&self) -> Vec<Monomial> {
        let mut out: Vec<Monomial> = Vec::new();
        let mut lts = self.leading_terms.clone();
        lts.sort_by_key(|m| m.degree());
        for m in lts {
            if !out.iter().any(|o| o.divides(&m)) {
                out.push(m);
            }
        }
        out.sort();
        out
    }

    /// For each variable, the least `k` with `x_i^k` in the leading-term
    /// ideal, or `None` if no pure power of that variable is there.
    pub fn pure_power_bounds(&self) -> Vec<Option<u32>> {
        let n = self.nvars;
        let mut bounds = vec![None; n];
        for m in &self.leading_terms {
            if m.is_one() {
                return vec![Some(0); n];
            }
            if let Some((i, k)) = m.pure_power() {
                bounds[i] = Some(bounds[i].map_or(k, |b: u32| b.min(k)));
            }
        }
        bounds
    }

    /// The quotient is finite iff every variable has a pure power in the
    /// leading-term ideal.
    pub fn is_zero_dimensional(&self) -> bool {
        self.pure_power_bounds().iter().all(Option::is_some)
    }

    /// Monomials outside the leading-term ideal, if there are finitely many.
    pub fn standard_monomials(&self) -> Option<Vec<Monomial>> {
        let bounds: Vec<u32> = self.pure_power_bounds().into_iter().collect::<Option<_>>()?;
        let lts = self.minimal_leading_terms();
        let mut out = Vec::new();
        let mut exps = vec![0u32; bounds.len()];
        if bounds.contains(&0) {
            return Some(out);
        }
        loop {
            let m = Monomial::new(exps.clone());
            if !lts.iter().any(|l| l.divides(&m)) {
                out.push(m);
            }
            // odometer over the box [0, b_i)
            let mut i = 0;
            loop {
                if i == exps.len() {
                    return Some(out);
                }
                exps[i] += 1;
                if exps[i] < bounds[i] {
                    break;
                }
                exps[i] = 0;
                i += 1;
            }
        }
    }

    pub fn quotient_dimension(&self) -> Extended {
        match self.standard_monomials() {
            Some(ms) => Extended::Finite(ms.len() as u64),
            None => Extended::Infinite,
        }
    }
}

fn check_through_origin(f: &Polynomial) -> Result<(), LocalError> {
    if f.is_zero() {
        return Err(LocalError::ZeroPolynomial);
    }
    let c = f.constant_term();
    if !c.is_zero() {
        return Err(LocalError::NotThroughOrigin(c));
    }
    Ok(())
}

/// Order of `f` at the origin: the largest ν with f ∈ m^ν.
pub fn multiplicity(f: &Polynomial) -> Result<u64, LocalError> {
    check_through_origin(f)?;
    Ok(f.min_total_degree().finite().expect("nonzero polynomial"))
}

pub fn jacobian_ideal(f: &Polynomial) -> Vec<Polynomial> {
    (0..f.nvars()).map(|i| f.derivative_at(i)).collect()
}

/// Milnor number: the dimension of the local algebra modulo the Jacobian
/// ideal. `Infinite` when the singularity is not isolated.
pub fn milnor_number(f: &Polynomial) -> Extended {
    let jac = jacobian_ideal(f);
    if jac.iter().all(Polynomial::is_zero) {
        return Extended::Infinite;
    }
    standard_basis(&jac, LocalOrder::NegDegRevLex).quotient_dimension()
}

/// Pham's analytic invariant of a plane curve: one plus the local dimension
/// of the quotient by `f`, its first partials and its second partials.
pub fn sigma_invariant(f: &Polynomial) -> Result<u64, LocalError> {
    if f.nvars() != 2 {
        return Err(LocalError::NotBivariate(f.nvars()));
    }
    check_through_origin(f)?;
    let mut gens = vec![f.clone()];
    let first = jacobian_ideal(f);
    for (i, d) in first.iter().enumerate() {
        for j in i..2 {
            gens.push(d.derivative_at(j));
        }
    }
    gens.extend(first);
    match standard_basis(&gens, LocalOrder::NegDegRevLex).quotient_dimension() {
        Extended::Finite(d) => Ok(1 + d),
        Extended::Infinite => Err(LocalError::NotIsolated),
    }
}
