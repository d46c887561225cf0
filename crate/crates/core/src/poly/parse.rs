//! Recursive-descent parser for polynomial expressions.
//!
//! ```text
//! expr   := ['+'|'-'] term (('+'|'-') term)*
//! term   := factor ('*' factor)*
//! factor := primary ('^' uint)*
//! primary:= rational | ident | '(' expr ')'
//! ```
//! Multiplication must be explicit. A sign is accepted at the start of an
//! expression so printed polynomials with a negative leading term re-parse.

use num::{BigInt, One, Zero};

use super::{PolyError, Polynomial, Rational};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(String),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Dot,
    End,
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, PolyError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let tok = match c {
            '0'..='9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                out.push((Tok::Num(text[start..i].to_string()), start));
                continue;
            }
            'a'..='z' | 'A'..='Z' | '_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((Tok::Ident(text[start..i].to_string()), start));
                continue;
            }
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '.' => Tok::Dot,
            other => {
                return Err(PolyError::Syntax {
                    pos: start,
                    msg: format!("unexpected character {other:?}"),
                })
            }
        };
        out.push((tok, start));
        i += c.len_utf8();
    }
    out.push((Tok::End, text.len()));
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    at: usize,
    vars: &'a [String],
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn peek2(&self) -> &Tok {
        self.toks.get(self.at + 1).map_or(&Tok::End, |t| &t.0)
    }

    fn pos(&self) -> usize {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].0.clone();
        if t != Tok::End {
            self.at += 1;
        }
        t
    }

    fn syntax<T>(&self, msg: impl Into<String>) -> Result<T, PolyError> {
        Err(PolyError::Syntax {
            pos: self.pos(),
            msg: msg.into(),
        })
    }

    fn expr(&mut self) -> Result<Polynomial, PolyError> {
        let negate = match self.peek() {
            Tok::Minus => {
                self.bump();
                true
            }
            Tok::Plus => {
                self.bump();
                false
            }
            _ => false,
        };
        let mut acc = self.term()?;
        if negate {
            acc = -acc;
        }
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    acc = &acc + &self.term()?;
                }
                Tok::Minus => {
                    self.bump();
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial, PolyError> {
        let mut acc = self.factor()?;
        while *self.peek() == Tok::Star {
            self.bump();
            acc = &acc * &self.factor()?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Polynomial, PolyError> {
        let mut base = self.primary()?;
        while *self.peek() == Tok::Caret {
            self.bump();
            let e = self.exponent()?;
            base = base.pow(e);
        }
        Ok(base)
    }

    fn exponent(&mut self) -> Result<u32, PolyError> {
        let pos = self.pos();
        match self.peek().clone() {
            Tok::Minus => Err(PolyError::NegativeExponent { pos }),
            Tok::LParen if *self.peek2() == Tok::Minus => Err(PolyError::NegativeExponent { pos }),
            Tok::Num(digits) => {
                self.bump();
                if matches!(self.peek(), Tok::Dot | Tok::Slash) {
                    return Err(PolyError::NonIntegerExponent { pos });
                }
                match digits.parse::<u32>() {
                    Ok(e) => Ok(e),
                    Err(_) => Err(PolyError::Syntax {
                        pos,
                        msg: "exponent too large".into(),
                    }),
                }
            }
            _ => self.syntax("expected an unsigned integer exponent"),
        }
    }

    fn primary(&mut self) -> Result<Polynomial, PolyError> {
        let pos = self.pos();
        match self.bump() {
            Tok::Num(digits) => {
                if *self.peek() == Tok::Dot {
                    return self.syntax("decimal literals are not supported; write a/b");
                }
                let num: BigInt = digits.parse().expect("lexer yields digits");
                let mut den = BigInt::one();
                if *self.peek() == Tok::Slash {
                    self.bump();
                    match self.bump() {
                        Tok::Num(d) => den = d.parse().expect("lexer yields digits"),
                        _ => {
                            return Err(PolyError::Syntax {
                                pos: self.toks[self.at.saturating_sub(1)].1,
                                msg: "expected an integer denominator".into(),
                            })
                        }
                    }
                    if den.is_zero() {
                        return Err(PolyError::Syntax {
                            pos,
                            msg: "zero denominator".into(),
                        });
                    }
                }
                Ok(Polynomial::constant(self.vars, Rational::new(num, den)))
            }
            Tok::Ident(name) => match Polynomial::variable(self.vars, &name) {
                Ok(p) => Ok(p),
                Err(_) => Err(PolyError::UnknownIdentifier { name, pos }),
            },
            Tok::LParen => {
                let inner = self.expr()?;
                if self.bump() != Tok::RParen {
                    return Err(PolyError::Syntax {
                        pos: self.toks[self.at.saturating_sub(1)].1,
                        msg: "expected ')'".into(),
                    });
                }
                Ok(inner)
            }
            Tok::End => Err(PolyError::Syntax {
                pos,
                msg: "unexpected end of input".into(),
            }),
            other => Err(PolyError::Syntax {
                pos,
                msg: format!("unexpected token {other:?}"),
            }),
        }
    }
}

/// Parses `text` as a polynomial in the ordered variables `vars`.
pub fn parse_poly<S: AsRef<str>>(text: &str, vars: &[S]) -> Result<Polynomial, PolyError> {
    let vars: Vec<String> = vars.iter().map(|v| v.as_ref().to_string()).collect();
    let toks = lex(text)?;
    let mut p = Parser {
        toks,
        at: 0,
        vars: &vars,
    };
    let out = p.expr()?;
    if *p.peek() != Tok::End {
        return p.syntax("expected an operator or end of input");
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Monomial;

    fn r(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    #[test]
    fn simple_sum() {
        let f = parse_poly("x^2 + y^3", &["x", "y"]).unwrap();
        assert_eq!(f.num_terms(), 2);
        assert_eq!(f.coefficient(&Monomial::new(vec![2, 0])), r(1));
        assert_eq!(f.coefficient(&Monomial::new(vec![0, 3])), r(1));
    }

    #[test]
    fn family_expands_to_four_terms() {
        let f = parse_poly("x^2*(x+t) + y^2*(y^2+t)", &["x", "y", "t"]).unwrap();
        assert_eq!(f.num_terms(), 4);
        assert_eq!(f.coefficient(&Monomial::new(vec![3, 0, 0])), r(1));
        assert_eq!(f.coefficient(&Monomial::new(vec![2, 0, 1])), r(1));
        assert_eq!(f.coefficient(&Monomial::new(vec![0, 4, 0])), r(1));
        assert_eq!(f.coefficient(&Monomial::new(vec![0, 2, 1])), r(1));
    }

    #[test]
    fn rationals_and_signs() {
        let f = parse_poly("-3/4*x + (x - 1/4*x)", &["x"]).unwrap();
        assert!(f.is_zero());
        let g = parse_poly("+x - -1", &["x"]);
        assert!(g.is_err());
    }

    #[test]
    fn errors() {
        let v = ["x", "y"];
        assert_eq!(
            parse_poly("x^(-1)", &v),
            Err(PolyError::NegativeExponent { pos: 2 })
        );
        assert_eq!(
            parse_poly("x^-2", &v),
            Err(PolyError::NegativeExponent { pos: 2 })
        );
        assert_eq!(
            parse_poly("x^1/2", &v),
            Err(PolyError::NonIntegerExponent { pos: 2 })
        );
        assert_eq!(
            parse_poly("x^2.5", &v),
            Err(PolyError::NonIntegerExponent { pos: 2 })
        );
        assert_eq!(
            parse_poly("x + z", &v),
            Err(PolyError::UnknownIdentifier {
                name: "z".into(),
                pos: 4
            })
        );
        assert!(matches!(parse_poly("2x", &v), Err(PolyError::Syntax { pos: 1, .. })));
        assert!(matches!(parse_poly("(x + y", &v), Err(PolyError::Syntax { .. })));
        assert!(matches!(parse_poly("x +", &v), Err(PolyError::Syntax { pos: 3, .. })));
        assert!(matches!(parse_poly("1/0", &v), Err(PolyError::Syntax { .. })));
        assert!(matches!(parse_poly("x $ y", &v), Err(PolyError::Syntax { pos: 2, .. })));
    }

    #[test]
    fn power_is_left_associative() {
        let v = ["x"];
        assert_eq!(parse_poly("x^2^3", &v).unwrap(), parse_poly("x^6", &v).unwrap());
    }
}
