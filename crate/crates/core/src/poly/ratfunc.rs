//! Rational functions in one variable, kept in lowest terms.

use std::fmt;

use num::{One, Zero};
use thiserror::Error;

use super::univariate::UniPoly;
use super::Rational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RatFuncError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("rational functions in different variables: {0} and {1}")]
    VariableMismatch(String, String),
}

/// `num / den` with `gcd(num, den) = 1` and `den` monic.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalFunction {
    num: UniPoly,
    den: UniPoly,
    var: String,
}

impl RationalFunction {
    pub fn new(num: UniPoly, den: UniPoly, var: &str) -> Result<Self, RatFuncError> {
        if den.is_zero() {
            return Err(RatFuncError::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(Self::constant(Rational::zero(), var));
        }
        let g = num.gcd(&den);
        let num = num.exact_div(&g);
        let den = den.exact_div(&g);
        let lead = den.leading().recip();
        Ok(RationalFunction {
            num: num.scale(&lead),
            den: den.scale(&lead),
            var: var.to_string(),
        })
    }

    pub fn constant(c: Rational, var: &str) -> Self {
        RationalFunction {
            num: UniPoly::constant(c),
            den: UniPoly::one(),
            var: var.to_string(),
        }
    }

    pub fn from_int(n: i64, var: &str) -> Self {
        Self::constant(Rational::from_integer(n.into()), var)
    }

    /// The identity function `t`.
    pub fn variable(var: &str) -> Self {
        RationalFunction {
            num: UniPoly::x(),
            den: UniPoly::one(),
            var: var.to_string(),
        }
    }

    pub fn polynomial(p: UniPoly, var: &str) -> Self {
        Self::new(p, UniPoly::one(), var).expect("nonzero denominator")
    }

    pub fn numerator(&self) -> &UniPoly {
        &self.num
    }

    pub fn denominator(&self) -> &UniPoly {
        &self.den
    }

    pub fn var(&self) -> &str {
        &self.var
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// The constant value, if this function does not depend on the variable.
    pub fn as_constant(&self) -> Option<Rational> {
        (self.num.is_constant() && self.den.is_constant()).then(|| self.num.coeff(0) / self.den.coeff(0))
    }

    fn same_var(&self, other: &Self) -> Result<(), RatFuncError> {
        // Constants are variable-agnostic.
        if self.var == other.var || self.as_constant().is_some() || other.as_constant().is_some() {
            Ok(())
        } else {
            Err(RatFuncError::VariableMismatch(self.var.clone(), other.var.clone()))
        }
    }

    fn pick_var<'a>(&'a self, other: &'a Self) -> &'a str {
        if self.as_constant().is_some() {
            &other.var
        } else {
            &self.var
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, RatFuncError> {
        self.same_var(other)?;
        Self::new(
            &(&self.num * &other.den) + &(&other.num * &self.den),
            &self.den * &other.den,
            self.pick_var(other),
        )
    }

    pub fn sub(&self, other: &Self) -> Result<Self, RatFuncError> {
        self.same_var(other)?;
        Self::new(
            &(&self.num * &other.den) - &(&other.num * &self.den),
            &self.den * &other.den,
            self.pick_var(other),
        )
    }

    pub fn mul(&self, other: &Self) -> Result<Self, RatFuncError> {
        self.same_var(other)?;
        Self::new(&self.num * &other.num, &self.den * &other.den, self.pick_var(other))
    }

    pub fn div(&self, other: &Self) -> Result<Self, RatFuncError> {
        self.same_var(other)?;
        if other.is_zero() {
            return Err(RatFuncError::DivisionByZero);
        }
        Self::new(&self.num * &other.den, &self.den * &other.num, self.pick_var(other))
    }

    pub fn recip(&self) -> Result<Self, RatFuncError> {
        Self::from_int(1, &self.var).div(self)
    }

    pub fn pow(&self, k: u32) -> Self {
        RationalFunction {
            num: self.num.pow(k),
            den: self.den.pow(k),
            var: self.var.clone(),
        }
    }

    pub fn eval(&self, x: &Rational) -> Option<Rational> {
        let d = self.den.eval(x);
        (!d.is_zero()).then(|| self.num.eval(x) / d)
    }
}

impl From<Rational> for RationalFunction {
    fn from(c: Rational) -> Self {
        RationalFunction::constant(c, "t")
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let wrap = |p: &UniPoly| {
            let s = p.display_in(&self.var);
            let simple = p.coeffs().iter().filter(|c| !c.is_zero()).count() <= 1
                && !s.starts_with('-');
            if simple {
                s
            } else {
                format!("({s})")
            }
        };
        if self.den.is_one_poly() {
            write!(f, "{}", self.num.display_in(&self.var))
        } else {
            write!(f, "{}/{}", wrap(&self.num), wrap(&self.den))
        }
    }
}

impl UniPoly {
    fn is_one_poly(&self) -> bool {
        self.degree() == Some(0) && self.coeff(0).is_one()
    }
}
