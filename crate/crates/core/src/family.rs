//! One-parameter families: sample the parameter, compute μ, ν and lct of
//! each member, and check that μ-constancy comes with constant ν and lct.
//! Also the cross-ratio and j-invariant used for the family of four lines.

use std::fmt;

use num::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::invariants::lct;
use crate::local_algebra::milnor_number;
use crate::poly::ratfunc::{RatFuncError, RationalFunction};
use crate::poly::{parse_poly, serde_rational, Extended, PolyError, Polynomial, Rational};
use crate::resolution::embedded_resolution;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FamilyError {
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("parameter {0:?} is also listed as a variable")]
    ParamAmongVars(String),
    #[error("sample {0} is excluded")]
    SampleExcluded(Rational),
    #[error("invalid family file: {0}")]
    Json(String),
    #[error("points {0} and {1} coincide")]
    Coincident(usize, usize),
    #[error("lambda must not be 0 or 1")]
    DegenerateLambda,
    #[error(transparent)]
    RatFunc(#[from] RatFuncError),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Exclusion {
    Value(i64),
    Text(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilySpec {
    pub poly: String,
    pub vars: Vec<String>,
    pub param: String,
    #[serde(with = "serde_rational::vec")]
    pub samples: Vec<Rational>,
    /// Rational values, or polynomials in the parameter whose roots are
    /// excluded (`"t^3 - 27"`).
    #[serde(default)]
    pub excluded: Vec<Exclusion>,
}

impl FamilySpec {
    pub fn from_json(text: &str) -> Result<Self, FamilyError> {
        serde_json::from_str(text).map_err(|e| FamilyError::Json(e.to_string()))
    }

    fn is_excluded(&self, t: &Rational) -> Result<bool, FamilyError> {
        for e in &self.excluded {
            let guard = match e {
                Exclusion::Value(n) => Polynomial::constant(&[&self.param], Rational::from_integer((*n).into())),
                Exclusion::Text(s) => parse_poly(s, &[&self.param])?,
            };
            // A constant c excludes t = c; anything else excludes its roots.
            let hit = if guard.max_total_degree().unwrap_or(0) == 0 {
                guard.constant_term() == *t
            } else {
                guard.eval(std::slice::from_ref(t)).is_zero()
            };
            if hit {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyRow {
    #[serde(with = "serde_rational")]
    pub t: Rational,
    pub mu: Extended,
    pub nu: u64,
    /// `None` when unavailable (three or more variables, or resolution failed).
    #[serde(with = "serde_rational::option")]
    pub lct: Option<Rational>,
    pub note: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Fail,
    NotApplicable,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyReport {
    pub rows: Vec<FamilyRow>,
    pub mu_constant: bool,
    pub nu_constant: bool,
    pub lct_constant: Option<bool>,
    pub zariski_verdict: Verdict,
}

fn all_equal<T: PartialEq>(v: &[T]) -> bool {
    v.windows(2).all(|w| w[0] == w[1])
}

fn member_row(f: &Polynomial, t: &Rational) -> FamilyRow {
    let mu = milnor_number(f);
    let nu = f.min_total_degree().finite().unwrap_or(0);
    let mut note = None;
    if f.is_zero() || !f.constant_term().is_zero() {
        note = Some("member does not vanish at the origin".to_string());
    } else if mu.is_infinite() {
        note = Some("non-isolated singularity".to_string());
    }
    let lct = if f.nvars() != 2 || note.is_some() {
        None
    } else {
        match embedded_resolution(f) {
            Ok(tree) => Some(lct(&tree)),
            Err(e) => {
                note = Some(e.to_string());
                None
            }
        }
    };
    FamilyRow {
        t: t.clone(),
        mu,
        nu,
        lct,
        note,
    }
}

/// Evaluates every sample. Constancy is over the listed samples only.
pub fn family_check(spec: &FamilySpec) -> Result<FamilyReport, FamilyError> {
    if spec.vars.contains(&spec.param) {
        return Err(FamilyError::ParamAmongVars(spec.param.clone()));
    }
    let mut all_vars = spec.vars.clone();
    all_vars.push(spec.param.clone());
    let f = parse_poly(&spec.poly, &all_vars)?;
    for t in &spec.samples {
        if spec.is_excluded(t)? {
            return Err(FamilyError::SampleExcluded(t.clone()));
        }
    }
    let mut rows: Vec<FamilyRow> = spec
        .samples
        .par_iter()
        .map(|t| {
            let member = f.specialize(&spec.param, t).expect("parameter is a variable of f");
            member_row(&member, t)
        })
        .collect();
    rows.sort_by(|a, b| a.t.cmp(&b.t));

    let mus: Vec<Extended> = rows.iter().map(|r| r.mu).collect();
    let mu_constant = all_equal(&mus) && mus.iter().all(|m| !m.is_infinite());
    let nu_constant = all_equal(&rows.iter().map(|r| r.nu).collect::<Vec<_>>());
    let lcts: Option<Vec<Rational>> = rows.iter().map(|r| r.lct.clone()).collect();
    let lct_constant = lcts.map(|v| all_equal(&v));
    let zariski_verdict = if !mu_constant {
        Verdict::NotApplicable
    } else if nu_constant && lct_constant != Some(false) {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    Ok(FamilyReport {
        rows,
        mu_constant,
        nu_constant,
        lct_constant,
        zariski_verdict,
    })
}

impl fmt::Display for FamilyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{:>10}  {:>9}  {:>3}  {:>12}", "t", "mu", "nu", "lct")?;
        for r in &self.rows {
            let lct = r.lct.as_ref().map_or("unavailable".to_string(), |q| q.to_string());
            write!(f, "{:>10}  {:>9}  {:>3}  {:>12}", r.t.to_string(), r.mu.to_string(), r.nu, lct)?;
            if let Some(n) = &r.note {
                write!(f, "  ({n})")?;
            }
            writeln!(f)?;
        }
        let yn = |b: bool| if b { "yes" } else { "no" };
        writeln!(f, "mu constant: {}", yn(self.mu_constant))?;
        writeln!(f, "nu constant: {}", yn(self.nu_constant))?;
        writeln!(
            f,
            "lct constant: {}",
            self.lct_constant.map_or("unavailable", yn)
        )?;
        let verdict = match self.zariski_verdict {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::NotApplicable => "not applicable",
        };
        writeln!(f, "verdict: {verdict} (checked on the listed samples only)")
    }
}

/// `((z1 − z3)(z2 − z4)) / ((z1 − z4)(z2 − z3))`.
pub fn cross_ratio(z: [&RationalFunction; 4]) -> Result<RationalFunction, FamilyError> {
    for i in 0..4 {
        for j in i + 1..4 {
            if z[i].sub(z[j])?.is_zero() {
                return Err(FamilyError::Coincident(i + 1, j + 1));
            }
        }
    }
    let num = z[0].sub(z[2])?.mul(&z[1].sub(z[3])?)?;
    let den = z[0].sub(z[3])?.mul(&z[1].sub(z[2])?)?;
    Ok(num.div(&den)?)
}

/// `256 (λ² − λ + 1)³ / (λ² (λ − 1)²)`.
pub fn j_invariant(lambda: &RationalFunction) -> Result<RationalFunction, FamilyError> {
    let var = lambda.var();
    let one = RationalFunction::from_int(1, var);
    let l_minus_1 = lambda.sub(&one)?;
    if lambda.is_zero() || l_minus_1.is_zero() {
        return Err(FamilyError::DegenerateLambda);
    }
    let l2 = lambda.mul(lambda)?;
    let inner = l2.sub(lambda)?.add(&one)?;
    let num = RationalFunction::from_int(256, var).mul(&inner.pow(3))?;
    let den = l2.mul(&l_minus_1.pow(2))?;
    Ok(num.div(&den)?)
}

/// Convenience for constant arguments.
pub fn j_invariant_value(lambda: &Rational) -> Result<Rational, FamilyError> {
    let j = j_invariant(&RationalFunction::from(lambda.clone()))?;
    Ok(j.as_constant().expect("constant input gives a constant"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::univariate::UniPoly;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn spec(poly: &str, vars: &[&str], samples: &[Rational], excluded: &[&str]) -> FamilySpec {
        FamilySpec {
            poly: poly.into(),
            vars: vars.iter().map(|s| s.to_string()).collect(),
            param: "t".into(),
            samples: samples.to_vec(),
            excluded: excluded.iter().map(|s| Exclusion::Text(s.to_string())).collect(),
        }
    }

    #[test]
    fn four_lines_family() {
        let s = spec("x*y*(x - y)*(x - t*y)", &["x", "y"], &[q(2, 1), q(3, 1), q(-1, 1)], &["0", "1"]);
        let r = family_check(&s).unwrap();
        assert!(r.rows.iter().all(|row| row.mu == Extended::Finite(9) && row.nu == 4));
        assert!(r.rows.iter().all(|row| row.lct == Some(q(1, 2))));
        assert_eq!(r.rows[0].t, q(-1, 1));
        assert!(r.mu_constant && r.nu_constant);
        assert_eq!(r.lct_constant, Some(true));
        assert_eq!(r.zariski_verdict, Verdict::Pass);
    }

    #[test]
    fn jump_family() {
        let s = spec("x^2*(x + t) + y^2*(y^2 + t)", &["x", "y"], &[q(0, 1), q(1, 1)], &[]);
        let r = family_check(&s).unwrap();
        assert_eq!(r.rows[0].mu, Extended::Finite(6));
        assert_eq!(r.rows[1].mu, Extended::Finite(1));
        assert!(!r.mu_constant);
        assert_eq!(r.zariski_verdict, Verdict::NotApplicable);
    }

    #[test]
    fn hesse_family_in_three_variables() {
        let s = spec("x^3 + y^3 + z^3 - t*x*y*z", &["x", "y", "z"], &[q(0, 1), q(1, 1)], &["t^3 - 27"]);
        let r = family_check(&s).unwrap();
        assert!(r.rows.iter().all(|row| row.mu == Extended::Finite(8) && row.nu == 3 && row.lct.is_none()));
        assert_eq!(r.lct_constant, None);
        assert_eq!(r.zariski_verdict, Verdict::Pass);
        let bad = spec("x^3 + y^3 + z^3 - t*x*y*z", &["x", "y", "z"], &[q(3, 1)], &["t^3 - 27"]);
        assert_eq!(family_check(&bad), Err(FamilyError::SampleExcluded(q(3, 1))));
    }

    #[test]
    fn spec_validation() {
        let s = spec("x^2 + t*y^2", &["x", "t"], &[q(1, 1)], &[]);
        assert_eq!(family_check(&s), Err(FamilyError::ParamAmongVars("t".into())));
        let json = r#"{"poly": "x^2 + y^2 + t*x*y", "vars": ["x", "y"], "param": "t",
                       "samples": ["0", "1/2", 1], "excluded": [2, "-2"]}"#;
        let s = FamilySpec::from_json(json).unwrap();
        assert_eq!(s.samples, vec![q(0, 1), q(1, 2), q(1, 1)]);
        assert!(family_check(&s).unwrap().mu_constant);
    }

    #[test]
    fn four_points_cross_ratio() {
        let t = RationalFunction::variable("t");
        let c = |n: i64| RationalFunction::from_int(n, "t");
        let z4 = RationalFunction::new(UniPoly::from_ints(&[-1, 1]), UniPoly::from_ints(&[1, 1]), "t").unwrap();
        let cr = cross_ratio([&c(-1), &c(0), &c(1), &z4]).unwrap();
        assert_eq!(cr, t.sub(&c(1)).unwrap().div(&t).unwrap());
        assert_eq!(cr.to_string(), "(t - 1)/t");
        let third = RationalFunction::from(q(-1, 3));
        assert_eq!(cross_ratio([&c(-1), &c(0), &c(1), &third]).unwrap().as_constant(), Some(q(-1, 1)));
        assert_eq!(cross_ratio([&c(0), &c(1), &c(0), &c(2)]), Err(FamilyError::Coincident(1, 3)));
    }

    #[test]
    fn j_values() {
        assert_eq!(j_invariant_value(&q(-1, 1)), Ok(q(1728, 1)));
        assert_eq!(j_invariant_value(&q(1, 1)), Err(FamilyError::DegenerateLambda));
        let t = RationalFunction::variable("t");
        let one = RationalFunction::from_int(1, "t");
        let lam = t.sub(&one).unwrap().div(&t).unwrap();
        let j = j_invariant(&lam).unwrap();
        let num = UniPoly::from_ints(&[1, -1, 1]).pow(3).scale(&q(256, 1));
        let den = &UniPoly::from_ints(&[0, 0, 1]) * &UniPoly::from_ints(&[-1, 1]).pow(2);
        assert_eq!(j, RationalFunction::new(num, den, "t").unwrap());
        assert_eq!(j_invariant(&lam.recip().unwrap()).unwrap(), j);
        assert_eq!(j_invariant(&one.sub(&lam).unwrap()).unwrap(), j);
    }
}
