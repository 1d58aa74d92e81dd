//! Recursive-descent parser for polynomial expressions in `X` and `t`.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary ('*' unary)*
//! unary  := '-' unary | factor
//! factor := base ('^' nat)?
//! base   := rational | 'X' | 't' | '(' expr ')'
//! ```
//!
//! A rational literal is `n` or `n/m`. There is no implicit multiplication.

use std::fmt;

use hyperpell::{Field, RatFunc, Rational, UniPoly};
use num_rational::BigRational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Num(Rational),
    X,
    T,
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("parse error at position {pos}: expected {}, found {found}", expected.join(" or "))]
pub struct ParseError {
    /// Byte offset into the input.
    pub pos: usize,
    pub expected: Vec<String>,
    pub found: String,
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn error(&mut self, expected: &[&str]) -> ParseError {
        let found = match self.peek() {
            None => "end of input".to_string(),
            Some(c) => format!("'{}'", c as char),
        };
        ParseError {
            pos: self.pos,
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found,
        }
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn digits(&mut self) -> Option<&'a str> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        (self.pos > start).then(|| std::str::from_utf8(&self.src[start..self.pos]).expect("ascii"))
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            if self.eat(b'+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat(b'-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        while self.eat(b'*') {
            lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.eat(b'-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.factor()
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        let base = self.base()?;
        if !self.eat(b'^') {
            return Ok(base);
        }
        let Some(n) = self.digits() else {
            return Err(self.error(&["a nonnegative integer exponent"]));
        };
        let e: u32 = n.parse().map_err(|_| ParseError {
            pos: self.pos - n.len(),
            expected: vec!["an exponent below 2^32".into()],
            found: n.to_string(),
        })?;
        Ok(Expr::Pow(Box::new(base), e))
    }

    fn base(&mut self) -> Result<Expr, ParseError> {
        const EXPECTED: &[&str] = &["a number", "'X'", "'t'", "'('"];
        match self.peek() {
            Some(b'X') => {
                self.pos += 1;
                Ok(Expr::X)
            }
            Some(b't') => {
                self.pos += 1;
                Ok(Expr::T)
            }
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.error(&["')'"]));
                }
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.digits().expect("peeked a digit");
                let num: num_bigint::BigInt = n.parse().expect("digits");
                // a '/' directly after an integer belongs to the literal
                let save = self.pos;
                if self.eat(b'/') {
                    let Some(d) = self.digits() else {
                        return Err(self.error(&["a denominator"]));
                    };
                    let den: num_bigint::BigInt = d.parse().expect("digits");
                    if den == 0.into() {
                        return Err(ParseError {
                            pos: self.pos - d.len(),
                            expected: vec!["a nonzero denominator".into()],
                            found: d.to_string(),
                        });
                    }
                    return Ok(Expr::Num(BigRational::new(num, den)));
                }
                self.pos = save;
                Ok(Expr::Num(BigRational::from_integer(num)))
            }
            _ => Err(self.error(EXPECTED)),
        }
    }
}

pub fn parse_poly(input: &str) -> Result<Expr, ParseError> {
    let mut p = Parser {
        src: input.as_bytes(),
        pos: 0,
    };
    let e = p.expr()?;
    if p.peek().is_some() {
        return Err(p.error(&["an operator", "end of input"]));
    }
    Ok(e)
}

impl Expr {
    pub fn uses_t(&self) -> bool {
        match self {
            Expr::T => true,
            Expr::Num(_) | Expr::X => false,
            Expr::Neg(a) | Expr::Pow(a, _) => a.uses_t(),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) => a.uses_t() || b.uses_t(),
        }
    }

    /// The polynomial in `X` with coefficients in ℚ(t).
    pub fn to_poly_qt(&self) -> UniPoly<RatFunc> {
        self.eval(&|| UniPoly::constant(RatFunc::t()))
    }

    /// The polynomial in `X` over ℚ, or `None` if `t` occurs.
    pub fn to_poly_q(&self) -> Option<UniPoly<Rational>> {
        if self.uses_t() {
            return None;
        }
        Some(self.eval(&|| unreachable!("no t")))
    }

    fn eval<F: Field>(&self, t: &dyn Fn() -> UniPoly<F>) -> UniPoly<F> {
        match self {
            Expr::Num(q) => UniPoly::constant(F::from_rational(q)),
            Expr::X => UniPoly::x(),
            Expr::T => t(),
            Expr::Neg(a) => a.eval(t).neg_ref(),
            Expr::Add(a, b) => a.eval(t).add_ref(&b.eval(t)),
            Expr::Sub(a, b) => a.eval(t).sub_ref(&b.eval(t)),
            Expr::Mul(a, b) => a.eval(t).mul_ref(&b.eval(t)),
            Expr::Pow(a, e) => a.eval(t).pow(*e),
        }
    }
}

/// A parsed polynomial over ℚ or ℚ(t).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Poly {
    Q(UniPoly<Rational>),
    Qt(UniPoly<RatFunc>),
}

impl Poly {
    pub fn parse(input: &str) -> Result<Self, ParseError> {
        let e = parse_poly(input)?;
        Ok(match e.to_poly_q() {
            Some(p) => Poly::Q(p),
            None => Poly::Qt(e.to_poly_qt()),
        })
    }

    pub fn to_qt(&self) -> UniPoly<RatFunc> {
        match self {
            Poly::Q(p) => p.embed(),
            Poly::Qt(p) => p.clone(),
        }
    }
}

/// Canonical text: descending powers in `X`, explicit `*` and `^`,
/// rationals as `a/b`. Parses back to the same polynomial.
impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Poly::Q(p) => f.write_str(&p.fmt_var("X")),
            Poly::Qt(p) => f.write_str(&p.fmt_var("X")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(p: &str) -> UniPoly<Rational> {
        parse_poly(p).unwrap().to_poly_q().unwrap()
    }

    #[test]
    fn grammar() {
        assert_eq!(q("X^6+X"), UniPoly::from_i64s(&[0, 1, 0, 0, 0, 0, 1]));
        assert_eq!(q("X*(X^7-X^3-1)"), UniPoly::from_i64s(&[0, -1, 0, 0, -1, 0, 0, 0, 1]));
        assert_eq!(q(" 4 * X + 1 "), UniPoly::from_i64s(&[1, 4]));
        assert_eq!(q("-X^2"), UniPoly::from_i64s(&[0, 0, -1]));
        assert_eq!(q("2-(-X)"), UniPoly::from_i64s(&[2, 1]));
        assert_eq!(q("1/2*X"), UniPoly::from_coeffs(vec![Rational::from_i64(0), Rational::new(1.into(), 2.into())]));
        assert_eq!(q("(X+1)^0"), UniPoly::one());
        let fam = parse_poly("(X-t)*(X^7-X^3-1)").unwrap();
        assert!(fam.uses_t());
        assert_eq!(fam.to_poly_qt().degree(), Some(8));
    }

    #[test]
    fn errors() {
        let e = parse_poly("X^-1").unwrap_err();
        assert_eq!(e.pos, 2);
        assert!(parse_poly("2X").is_err());
        assert!(parse_poly("X+").is_err());
        assert!(parse_poly("(X+1").is_err());
        assert!(parse_poly("1/0").is_err());
        assert!(parse_poly("y").is_err());
        assert!(parse_poly("").is_err());
    }

    #[test]
    fn printing_round_trips() {
        for s in ["X^6+X+t", "(X-t)*(X^7-X^3-1)", "-1/2*X^3+X-7", "(2*t^2-t)*X^4-t", "0", "-X"] {
            let p = Poly::parse(s).unwrap();
            let printed = p.to_string();
            assert_eq!(Poly::parse(&printed).unwrap(), p, "{s} -> {printed}");
        }
        assert_eq!(Poly::parse("X*(X^7-X^3-1)").unwrap().to_string(), "X^8-X^4-X");
    }
}
