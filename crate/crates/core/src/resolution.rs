//! Embedded resolution of plane-curve singularities by point blowups.
//!
//! Each pending center is a point in a local chart with coordinates `(x, y)`
//! centred at it, carrying the local equation of the strict transform and the
//! exceptional divisors through it. Those divisors are always coordinate
//! axes: `dx` is `{x = 0}` and `dy` is `{y = 0}`. Blowing up the point
//! introduces the two standard charts
//!
//! ```text
//! chart 1: x = x1, y = x1*y1   (E = {x1 = 0}, covers every direction but x = 0)
//! chart 2: x = x2*y2, y = y2   (E = {y2 = 0}, the direction x = 0 is its origin)
//! ```
//!
//! Points of the new divisor met by the strict transform are the roots of
//! the tangent cone. Rational roots become new centers. Irrational simple
//! roots are transverse smooth intersections and are only counted (by the
//! degree of their squarefree factor). An irrational multiple root would need
//! a center with irrational coordinates, which is reported as an error.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use num::{BigInt, Integer, One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::local_algebra::milnor_number;
use crate::poly::univariate::UniPoly;
use crate::poly::{Extended, Polynomial, Rational};

const MAX_BLOWUPS: usize = 5_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ResolutionError {
    #[error("expected a polynomial in exactly two variables, got {0}")]
    NotBivariate(usize),
    #[error("the polynomial does not vanish at the origin")]
    NotThroughOrigin,
    #[error("the singularity at the origin is not isolated")]
    NotIsolated,
    #[error("a required center is not rational; it is cut out by {polynomial} = 0 on an exceptional divisor")]
    NonRationalCenter { polynomial: String },
    #[error("resolution did not terminate within {0} blowups")]
    TooManyBlowups(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Divisor {
    pub id: usize,
    /// Order of vanishing of the pulled-back function along the divisor.
    pub m: u64,
    /// Discrepancy.
    pub a: u64,
    pub self_intersection: i64,
    pub adjacent: BTreeSet<usize>,
    /// Geometric points where the final strict transform meets this divisor.
    pub strict_points: u64,
}

/// One blowup: the divisor it created and the divisors through its center.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlowupStep {
    pub created: usize,
    pub through: Vec<usize>,
    pub strict_multiplicity: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResolutionTree {
    pub divisors: Vec<Divisor>,
    pub first_blowup_id: usize,
    pub n_plus_1: usize,
    pub steps: Vec<BlowupStep>,
}

/// A blowup center used when refining a resolution.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Center {
    /// Intersection point of two adjacent divisors.
    Pair(usize, usize),
    /// A point where the strict transform meets the divisor.
    Strict(usize),
}

impl ResolutionTree {
    fn empty() -> Self {
        ResolutionTree {
            divisors: Vec::new(),
            first_blowup_id: 1,
            n_plus_1: 2,
            steps: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.divisors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.divisors.is_empty()
    }

    pub fn divisor(&self, id: usize) -> Option<&Divisor> {
        id.checked_sub(1).and_then(|i| self.divisors.get(i))
    }

    fn divisor_mut(&mut self, id: usize) -> &mut Divisor {
        &mut self.divisors[id - 1]
    }

    pub fn ids(&self) -> impl Iterator<Item = usize> + '_ {
        self.divisors.iter().map(|d| d.id)
    }

    /// Blows up a point lying on the divisors `through` (at most two, which
    /// must then be adjacent) where the strict transform has multiplicity
    /// `strict_multiplicity` (0 if it does not pass). Returns the new id.
    fn blow_up(&mut self, through: &[usize], strict_multiplicity: u64) -> usize {
        debug_assert!(through.len() <= 2);
        let id = self.divisors.len() + 1;
        let m = strict_multiplicity + through.iter().map(|&j| self.divisor_mut(j).m).sum::<u64>();
        let a = 1 + through.iter().map(|&j| self.divisor_mut(j).a).sum::<u64>();
        for &j in through {
            let d = self.divisor_mut(j);
            d.self_intersection -= 1;
            d.adjacent.insert(id);
        }
        if let [i, j] = *through {
            self.divisor_mut(i).adjacent.remove(&j);
            self.divisor_mut(j).adjacent.remove(&i);
        }
        self.divisors.push(Divisor {
            id,
            m,
            a,
            self_intersection: -1,
            adjacent: through.iter().copied().collect(),
            strict_points: 0,
        });
        self.steps.push(BlowupStep {
            created: id,
            through: through.to_vec(),
            strict_multiplicity,
        });
        id
    }

    /// Blows up the given center. For [`Center::Strict`] the strict-transform
    /// point moves onto the new divisor.
    pub fn blow_up_center(&mut self, center: Center) -> usize {
        match center {
            Center::Pair(i, j) => {
                assert!(
                    self.divisor(i).is_some_and(|d| d.adjacent.contains(&j)),
                    "E{i} and E{j} do not meet"
                );
                self.blow_up(&[i, j], 0)
            }
            Center::Strict(i) => {
                assert!(
                    self.divisor(i).is_some_and(|d| d.strict_points > 0),
                    "strict transform does not meet E{i}"
                );
                let id = self.blow_up(&[i], 1);
                self.divisor_mut(i).strict_points -= 1;
                self.divisor_mut(id).strict_points = 1;
                id
            }
        }
    }

    /// The tree as it stood after the first `k` blowups. Strict-transform
    /// attachments are only known for the final tree and are left at zero.
    pub fn after_steps(&self, k: usize) -> ResolutionTree {
        let mut t = ResolutionTree::empty();
        t.first_blowup_id = self.first_blowup_id;
        for step in &self.steps[..k.min(self.steps.len())] {
            t.blow_up(&step.through, step.strict_multiplicity);
        }
        t
    }

    /// Symmetric matrix indexed by divisor position: self-intersections on the
    /// diagonal, 1 for meeting pairs.
    pub fn intersection_matrix(&self) -> Vec<Vec<i64>> {
        let n = self.len();
        let mut q = vec![vec![0; n]; n];
        for (i, d) in self.divisors.iter().enumerate() {
            q[i][i] = d.self_intersection;
            for &j in &d.adjacent {
                q[i][j - 1] = 1;
            }
        }
        q
    }

    /// Exact test via Gaussian elimination: all pivots are negative iff
    /// every leading principal minor has sign (-1)^k.
    pub fn is_negative_definite(&self) -> bool {
        let rhs = vec![Rational::zero(); self.len()];
        match self.tree_solve(&rhs) {
            Some((pivots, _)) => pivots.iter().all(Signed::is_negative),
            None => dense_solve(&self.intersection_matrix(), &rhs).0,
        }
    }

    /// Leaf-first elimination when the dual graph is a tree, which causes no
    /// fill-in. Returns the pivots and, if none vanish, the solution of
    /// `Q w = rhs`.
    fn tree_solve(&self, rhs: &[Rational]) -> Option<(Vec<Rational>, Option<Vec<Rational>>)> {
        let n = self.len();
        let edges = self.divisors.iter().map(|d| d.adjacent.len()).sum::<usize>() / 2;
        if n == 0 || edges + 1 != n || !self.is_connected() {
            return None;
        }
        let mut parent = vec![None; n];
        let mut order = Vec::with_capacity(n);
        let mut seen = vec![false; n];
        seen[0] = true;
        let mut stack = vec![0];
        while let Some(v) = stack.pop() {
            order.push(v);
            for &j in &self.divisors[v].adjacent {
                if !seen[j - 1] {
                    seen[j - 1] = true;
                    parent[j - 1] = Some(v);
                    stack.push(j - 1);
                }
            }
        }
        let mut d: Vec<Rational> = self
            .divisors
            .iter()
            .map(|x| Rational::from_integer(x.self_intersection.into()))
            .collect();
        let mut r = rhs.to_vec();
        for &v in order.iter().rev() {
            let Some(p) = parent[v] else { continue };
            if d[v].is_zero() {
                return Some((d, None));
            }
            let inv = d[v].recip();
            d[p] -= &inv;
            let t = &r[v] * &inv;
            r[p] -= t;
        }
        if d[0].is_zero() {
            return Some((d, None));
        }
        let mut w = vec![Rational::zero(); n];
        for &v in &order {
            let above = parent[v].map_or_else(Rational::zero, |p| w[p].clone());
            w[v] = (&r[v] - above) / &d[v];
        }
        Some((d, Some(w)))
    }

    pub fn is_connected(&self) -> bool {
        let Some(first) = self.divisors.first() else {
            return true;
        };
        let mut seen = BTreeSet::from([first.id]);
        let mut stack = vec![first.id];
        while let Some(id) = stack.pop() {
            for &j in &self.divisor(id).unwrap().adjacent {
                if seen.insert(j) {
                    stack.push(j);
                }
            }
        }
        seen.len() == self.len()
    }

    /// Checks the structural invariants of a resolution tree.
    pub fn validate(&self) -> Result<(), String> {
        for d in &self.divisors {
            if d.m == 0 {
                return Err(format!("E{} has m = 0", d.id));
            }
            if d.self_intersection > -1 {
                return Err(format!("E{} has self-intersection {}", d.id, d.self_intersection));
            }
            for &j in &d.adjacent {
                if !self.divisor(j).is_some_and(|e| e.adjacent.contains(&d.id)) {
                    return Err(format!("adjacency E{}-E{j} is not symmetric", d.id));
                }
            }
        }
        if !self.is_connected() {
            return Err("dual graph is disconnected".into());
        }
        if !self.is_negative_definite() {
            return Err("intersection matrix is not negative definite".into());
        }
        Ok(())
    }

    /// Number of analytic branches of the curve.
    pub fn branches(&self) -> u64 {
        self.divisors.iter().map(|d| d.strict_points).sum()
    }

    pub fn min_multiplicity(&self) -> u64 {
        self.divisors.iter().map(|d| d.m).min().unwrap_or(0)
    }

    pub fn lcm_multiplicities(&self) -> u64 {
        self.divisors.iter().fold(1u64, |acc, d| acc.lcm(&d.m))
    }

    /// First center violating `m_i + m_j > m` (strict transform counted with
    /// multiplicity 1): pairs by ascending ids first, then strict points.
    pub fn separation_violation(&self, m: u64) -> Option<Center> {
        for d in &self.divisors {
            for &j in d.adjacent.range(d.id + 1..) {
                if d.m + self.divisor(j).unwrap().m <= m {
                    return Some(Center::Pair(d.id, j));
                }
            }
        }
        self.divisors
            .iter()
            .find(|d| d.strict_points > 0 && d.m < m)
            .map(|d| Center::Strict(d.id))
    }

    pub fn is_separating(&self, m: u64) -> bool {
        self.separation_violation(m).is_none()
    }

    /// `−Σ w_i E_i` is ample when every `w_i > 0` and `(Qw)_j ≤ −1`.
    pub fn is_ample(&self, weights: &[u64]) -> bool {
        if weights.len() != self.len() || weights.contains(&0) {
            return false;
        }
        let q = self.intersection_matrix();
        q.iter().all(|row| {
            row.iter()
                .zip(weights)
                .map(|(&a, &w)| a as i128 * w as i128)
                .sum::<i128>()
                <= -1
        })
    }

    /// Dual graph in DOT format. Strict-transform branches are box nodes.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("graph resolution {\n");
        for d in &self.divisors {
            let _ = writeln!(
                s,
                "  E{id} [label=\"E{id} m={} a={} s={}\"];",
                d.m,
                d.a,
                d.self_intersection,
                id = d.id
            );
        }
        let mut strict = 0;
        for d in &self.divisors {
            for _ in 0..d.strict_points {
                strict += 1;
                let _ = writeln!(s, "  S{strict} [shape=box, label=\"strict {strict}\"];");
            }
        }
        for d in &self.divisors {
            for &j in d.adjacent.range(d.id + 1..) {
                let _ = writeln!(s, "  E{} -- E{j};", d.id);
            }
        }
        let mut strict = 0;
        for d in &self.divisors {
            for _ in 0..d.strict_points {
                strict += 1;
                let _ = writeln!(s, "  E{} -- S{strict};", d.id);
            }
        }
        s.push_str("}\n");
        s
    }
}

/// A pending center in its local chart.
struct Point {
    g: Polynomial,
    dx: Option<usize>,
    dy: Option<usize>,
}

/// Order in `y` of `g(0, y)` (or in `x` of `g(x, 0)` when `along_x`).
fn axis_order(g: &Polynomial, along_x: bool) -> Option<u32> {
    g.terms()
        .filter_map(|(m, _)| {
            let e = m.exponents();
            if along_x {
                (e[1] == 0).then_some(e[0])
            } else {
                (e[0] == 0).then_some(e[1])
            }
        })
        .min()
}

fn tangent_cone_in_chart(g: &Polynomial, d: u32) -> UniPoly {
    // T(1, y): the term x^i y^j of the degree-d part lands on y^j.
    let mut coeffs = vec![Rational::zero(); d as usize + 1];
    for (m, c) in g.terms() {
        if m.degree() == d {
            coeffs[m.exponents()[1] as usize] += c;
        }
    }
    UniPoly::new(coeffs)
}

fn needs_blowup(p: &Point, mult: u32) -> bool {
    match mult {
        0 => false,
        1 => match (p.dx, p.dy) {
            (Some(_), Some(_)) => true,
            (Some(_), None) => axis_order(&p.g, false) != Some(1),
            (None, Some(_)) => axis_order(&p.g, true) != Some(1),
            (None, None) => false,
        },
        _ => true,
    }
}

/// Resolves the plane curve `f = 0` at the origin until the total transform
/// has simple normal crossings. The origin is always the first center.
pub fn embedded_resolution(f: &Polynomial) -> Result<ResolutionTree, ResolutionError> {
    if f.nvars() != 2 {
        return Err(ResolutionError::NotBivariate(f.nvars()));
    }
    if f.is_zero() || !f.constant_term().is_zero() {
        return Err(ResolutionError::NotThroughOrigin);
    }
    if milnor_number(f) == Extended::Infinite {
        return Err(ResolutionError::NotIsolated);
    }

    let mut tree = ResolutionTree::empty();
    let mut stack = vec![Point {
        g: f.clone(),
        dx: None,
        dy: None,
    }];
    let mut first = true;
    while let Some(p) = stack.pop() {
        let Extended::Finite(mult) = p.g.min_total_degree() else {
            unreachable!("strict transform of a reduced curve is nonzero");
        };
        let mult = mult as u32;
        if !first && !needs_blowup(&p, mult) {
            if mult == 1 {
                if let Some(d) = p.dx.or(p.dy) {
                    tree.divisor_mut(d).strict_points += 1;
                }
            }
            continue;
        }
        first = false;
        if tree.len() >= MAX_BLOWUPS {
            return Err(ResolutionError::TooManyBlowups(MAX_BLOWUPS));
        }
        let through: Vec<usize> = [p.dx, p.dy].into_iter().flatten().collect();
        let e = tree.blow_up(&through, mult as u64);
        let children = chart_points(&p, e, mult, &mut tree)?;
        // Pushed in reverse so the smallest pending center is processed first.
        stack.extend(children.into_iter().rev());
    }
    Ok(tree)
}

/// New centers on the divisor `e` created by blowing up `p`, in the order
/// chart-1 origin, other rational directions ascending, chart-2 origin.
fn chart_points(
    p: &Point,
    e: usize,
    d: u32,
    tree: &mut ResolutionTree,
) -> Result<Vec<Point>, ResolutionError> {
    let cone = tangent_cone_in_chart(&p.g, d);
    let at_infinity = d as usize - cone.degree().expect("tangent cone is nonzero");
    let roots = cone.rational_roots();

    let mut rest = cone.clone();
    for r in &roots {
        let lin = UniPoly::new(vec![-r.clone(), Rational::one()]);
        for _ in 0..cone.root_multiplicity(r) {
            rest = rest.exact_div(&lin);
        }
    }
    for (factor, k) in rest.squarefree_decomposition() {
        if k >= 2 {
            return Err(ResolutionError::NonRationalCenter {
                polynomial: factor.display_in(&p.g.vars()[1]),
            });
        }
        tree.divisor_mut(e).strict_points += factor.degree().unwrap() as u64;
    }

    let chart1 = p.g.map_exponents(|ex| vec![ex[0] + ex[1] - d, ex[1]]);
    let mut out = Vec::new();
    for r in &roots {
        if r.is_zero() {
            out.push(Point {
                g: chart1.clone(),
                dx: Some(e),
                dy: p.dy,
            });
        } else {
            let y = &p.g.vars()[1];
            let shift = &Polynomial::variable(p.g.vars(), y).unwrap()
                + &Polynomial::constant(p.g.vars(), r.clone());
            out.push(Point {
                g: chart1.substitute(y, &shift).unwrap(),
                dx: Some(e),
                dy: None,
            });
        }
    }
    if at_infinity > 0 {
        out.push(Point {
            g: p.g.map_exponents(|ex| vec![ex[0], ex[0] + ex[1] - d]),
            dx: p.dx,
            dy: Some(e),
        });
    }
    Ok(out)
}

/// Gaussian elimination without pivoting: whether every pivot is negative,
/// and the solution of `q w = rhs` when no pivot vanishes.
fn dense_solve(q: &[Vec<i64>], rhs: &[Rational]) -> (bool, Option<Vec<Rational>>) {
    let n = q.len();
    let mut a: Vec<Vec<Rational>> = q
        .iter()
        .zip(rhs)
        .map(|(row, b)| {
            let mut r: Vec<Rational> = row.iter().map(|&v| Rational::from_integer(v.into())).collect();
            r.push(b.clone());
            r
        })
        .collect();
    let mut negative = true;
    for k in 0..n {
        if a[k][k].is_zero() {
            return (false, None);
        }
        negative &= a[k][k].is_negative();
        for i in k + 1..n {
            if a[i][k].is_zero() {
                continue;
            }
            let f = &a[i][k] / &a[k][k];
            for j in k..=n {
                let t = &f * &a[k][j];
                a[i][j] -= t;
            }
        }
    }
    let mut w = vec![Rational::zero(); n];
    for k in (0..n).rev() {
        let mut acc = a[k][n].clone();
        for j in k + 1..n {
            acc -= &a[k][j] * &w[j];
        }
        w[k] = acc / &a[k][k];
    }
    (negative, Some(w))
}

/// Refines `tree` by blowing up intersection points until every adjacent
/// pair (strict-transform branches counting with multiplicity 1) satisfies
/// `m_i + m_j > m`. Returns the tree unchanged when it already does.
pub fn make_separating(tree: &ResolutionTree, m: u64) -> ResolutionTree {
    let mut t = tree.clone();
    while let Some(center) = t.separation_violation(m) {
        t.blow_up_center(center);
    }
    t
}

/// Positive integer weights `w` with `(Qw)_j ≤ −1` for every divisor.
///
/// Solves `Qw = −1` exactly, clears denominators and removes the common
/// content. Negative definiteness of a tree-shaped `Q` with nonnegative
/// off-diagonal entries makes every coordinate of the solution positive.
pub fn find_ample_weights(tree: &ResolutionTree) -> Vec<u64> {
    let rhs = vec![-Rational::one(); tree.len()];
    let sol = match tree.tree_solve(&rhs) {
        Some((_, Some(w))) => w,
        _ => dense_solve(&tree.intersection_matrix(), &rhs).1.expect("intersection matrix is singular"),
    };
    let den = sol.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = sol
        .iter()
        .map(|x| (x * Rational::from_integer(den.clone())).to_integer())
        .collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    let w: Vec<u64> = ints
        .iter()
        .map(|x| (x / &g).to_u64().expect("positive weight fits in u64"))
        .collect();
    debug_assert!(tree.is_ample(&w));
    w
}
