//! Symbolic real-valued expressions over rationals, square roots,
//! natural logarithms, and dominant roots of recurrence pairs.
//!
//! An expression can be re-evaluated at any working precision, which is
//! what lets the reduction routines escalate precision without the caller
//! having to supply fresh enclosures. The concrete syntax accepted by
//! [`parse_real_expr`] is
//!
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := unary (('*' | '/') unary)*
//! unary := '-' unary | atom
//! atom  := number | 'sqrt' '(' expr ')' | 'log' '(' expr ')'
//!        | 'alpha' '(' int ',' int ')' | '(' expr ')'
//! ```
//!
//! where `number` is a decimal literal such as `30`, `0.3`, or `8/9`
//! (the slash binds as ordinary division). `log` is the natural
//! logarithm and `alpha(r, s)` is the larger root of `x^2 = r*x + s`.

use crate::lucas::{LucasError, LucasPair};
use crate::real::{Real, RealError};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ExprError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("zero denominator in rational literal")]
    ZeroDenominator,
    #[error(transparent)]
    Lucas(#[from] LucasError),
    #[error(transparent)]
    Real(#[from] RealError),
}

/// A real number given symbolically, evaluable at any precision.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RealExpr {
    /// Exact fraction `p / q` with `q > 0`.
    Rational(BigInt, BigInt),
    Sqrt(Box<RealExpr>),
    /// Natural logarithm.
    Log(Box<RealExpr>),
    /// Dominant root of `x^2 = r*x + s`.
    Alpha(i64, i64),
    Neg(Box<RealExpr>),
    Add(Box<RealExpr>, Box<RealExpr>),
    Sub(Box<RealExpr>, Box<RealExpr>),
    Mul(Box<RealExpr>, Box<RealExpr>),
    Div(Box<RealExpr>, Box<RealExpr>),
}

impl RealExpr {
    pub fn integer(n: i64) -> Self {
        RealExpr::Rational(BigInt::from(n), BigInt::one())
    }

    pub fn ratio(p: i64, q: i64) -> Result<Self, ExprError> {
        if q == 0 {
            return Err(ExprError::ZeroDenominator);
        }
        let (p, q) = if q < 0 { (-p, -q) } else { (p, q) };
        Ok(RealExpr::Rational(BigInt::from(p), BigInt::from(q)))
    }

    /// Certified enclosure of the value at `prec` working bits.
    pub fn eval(&self, prec: u32) -> Result<Real, ExprError> {
        Ok(match self {
            RealExpr::Rational(p, q) => Real::from_ratio(p, q, prec)?,
            RealExpr::Sqrt(e) => e.eval(prec)?.sqrt(prec)?,
            RealExpr::Log(e) => e.eval(prec)?.ln(prec)?,
            RealExpr::Alpha(r, s) => LucasPair::new(*r, *s)?.alpha(prec),
            RealExpr::Neg(e) => e.eval(prec)?.neg(),
            RealExpr::Add(a, b) => a.eval(prec)?.add(&b.eval(prec)?, prec),
            RealExpr::Sub(a, b) => a.eval(prec)?.sub(&b.eval(prec)?, prec),
            RealExpr::Mul(a, b) => a.eval(prec)?.mul(&b.eval(prec)?, prec),
            RealExpr::Div(a, b) => a.eval(prec)?.div(&b.eval(prec)?, prec)?,
        })
    }

    /// The exact rational value, when the expression is built purely from
    /// rationals and field operations.
    pub fn as_rational(&self) -> Option<(BigInt, BigInt)> {
        match self {
            RealExpr::Rational(p, q) => Some((p.clone(), q.clone())),
            RealExpr::Sqrt(_) | RealExpr::Log(_) | RealExpr::Alpha(_, _) => None,
            RealExpr::Neg(e) => {
                let (p, q) = e.as_rational()?;
                Some((-p, q))
            }
            RealExpr::Add(a, b) => {
                let (ap, aq) = a.as_rational()?;
                let (bp, bq) = b.as_rational()?;
                Some(reduce(ap * &bq + bp * &aq, aq * bq))
            }
            RealExpr::Sub(a, b) => {
                let (ap, aq) = a.as_rational()?;
                let (bp, bq) = b.as_rational()?;
                Some(reduce(ap * &bq - bp * &aq, aq * bq))
            }
            RealExpr::Mul(a, b) => {
                let (ap, aq) = a.as_rational()?;
                let (bp, bq) = b.as_rational()?;
                Some(reduce(ap * bp, aq * bq))
            }
            RealExpr::Div(a, b) => {
                let (ap, aq) = a.as_rational()?;
                let (bp, bq) = b.as_rational()?;
                if bp.is_zero() {
                    return None;
                }
                Some(reduce(ap * bq, aq * bp))
            }
        }
    }
}

fn reduce(mut p: BigInt, mut q: BigInt) -> (BigInt, BigInt) {
    use num_integer::Integer;
    if q.is_negative() {
        p = -p;
        q = -q;
    }
    let g = p.gcd(&q);
    if !g.is_zero() && !g.is_one() {
        p /= &g;
        q /= &g;
    }
    (p, q)
}

impl std::fmt::Display for RealExpr {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RealExpr::Rational(p, q) => {
                if q.is_one() {
                    write!(f, "{p}")
                } else {
                    write!(f, "{p}/{q}")
                }
            }
            RealExpr::Sqrt(e) => write!(f, "sqrt({e})"),
            RealExpr::Log(e) => write!(f, "log({e})"),
            RealExpr::Alpha(r, s) => write!(f, "alpha({r},{s})"),
            RealExpr::Neg(e) => write!(f, "-({e})"),
            RealExpr::Add(a, b) => write!(f, "({a} + {b})"),
            RealExpr::Sub(a, b) => write!(f, "({a} - {b})"),
            RealExpr::Mul(a, b) => write!(f, "({a} * {b})"),
            RealExpr::Div(a, b) => write!(f, "({a} / {b})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Num(String),
    Ident(String),
    LParen,
    RParen,
    Comma,
    Plus,
    Minus,
    Star,
    Slash,
}

fn tokenize(s: &str) -> Result<Vec<Token>, ExprError> {
    let mut out = Vec::new();
    let mut it = s.chars().peekable();
    while let Some(&c) = it.peek() {
        match c {
            ' ' | '\t' | '\n' | '\r' => {
                it.next();
            }
            '(' => {
                it.next();
                out.push(Token::LParen);
            }
            ')' => {
                it.next();
                out.push(Token::RParen);
            }
            ',' => {
                it.next();
                out.push(Token::Comma);
            }
            '+' => {
                it.next();
                out.push(Token::Plus);
            }
            '-' => {
                it.next();
                out.push(Token::Minus);
            }
            '*' => {
                it.next();
                out.push(Token::Star);
            }
            '/' => {
                it.next();
                out.push(Token::Slash);
            }
            '0'..='9' => {
                let mut lit = String::new();
                let mut seen_dot = false;
                while let Some(&d) = it.peek() {
                    if d.is_ascii_digit() || (d == '.' && !seen_dot) {
                        seen_dot |= d == '.';
                        lit.push(d);
                        it.next();
                    } else {
                        break;
                    }
                }
                out.push(Token::Num(lit));
            }
            'a'..='z' | 'A'..='Z' | '_' => {
                let mut id = String::new();
                while let Some(&d) = it.peek() {
                    if d.is_ascii_alphanumeric() || d == '_' {
                        id.push(d);
                        it.next();
                    } else {
                        break;
                    }
                }
                out.push(Token::Ident(id));
            }
            other => return Err(ExprError::Parse(format!("unexpected character '{other}'"))),
        }
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, want: Token) -> Result<(), ExprError> {
        match self.next() {
            Some(t) if t == want => Ok(()),
            other => Err(ExprError::Parse(format!("expected {want:?}, found {other:?}"))),
        }
    }

    fn expr(&mut self) -> Result<RealExpr, ExprError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Token::Plus) => {
                    self.next();
                    acc = RealExpr::Add(Box::new(acc), Box::new(self.term()?));
                }
                Some(Token::Minus) => {
                    self.next();
                    acc = RealExpr::Sub(Box::new(acc), Box::new(self.term()?));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<RealExpr, ExprError> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(Token::Star) => {
                    self.next();
                    acc = RealExpr::Mul(Box::new(acc), Box::new(self.unary()?));
                }
                Some(Token::Slash) => {
                    self.next();
                    acc = RealExpr::Div(Box::new(acc), Box::new(self.unary()?));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<RealExpr, ExprError> {
        if self.peek() == Some(&Token::Minus) {
            self.next();
            return Ok(RealExpr::Neg(Box::new(self.unary()?)));
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<RealExpr, ExprError> {
        match self.next() {
            Some(Token::Num(lit)) => number_literal(&lit),
            Some(Token::LParen) => {
                let e = self.expr()?;
                self.expect(Token::RParen)?;
                Ok(e)
            }
            Some(Token::Ident(name)) => {
                self.expect(Token::LParen)?;
                match name.as_str() {
                    "sqrt" | "log" => {
                        let arg = self.expr()?;
                        self.expect(Token::RParen)?;
                        if name == "sqrt" {
                            Ok(RealExpr::Sqrt(Box::new(arg)))
                        } else {
                            Ok(RealExpr::Log(Box::new(arg)))
                        }
                    }
                    "alpha" => {
                        let r = self.signed_int()?;
                        self.expect(Token::Comma)?;
                        let s = self.signed_int()?;
                        self.expect(Token::RParen)?;
                        Ok(RealExpr::Alpha(r, s))
                    }
                    other => Err(ExprError::Parse(format!("unknown function '{other}'"))),
                }
            }
            other => Err(ExprError::Parse(format!("unexpected token {other:?}"))),
        }
    }

    fn signed_int(&mut self) -> Result<i64, ExprError> {
        let neg = if self.peek() == Some(&Token::Minus) {
            self.next();
            true
        } else {
            false
        };
        match self.next() {
            Some(Token::Num(lit)) if !lit.contains('.') => {
                let v: i64 = lit
                    .parse()
                    .map_err(|_| ExprError::Parse(format!("integer out of range: {lit}")))?;
                Ok(if neg { -v } else { v })
            }
            other => Err(ExprError::Parse(format!("expected integer, found {other:?}"))),
        }
    }
}

fn number_literal(lit: &str) -> Result<RealExpr, ExprError> {
    if let Some(dot) = lit.find('.') {
        let (int_part, frac_part) = (&lit[..dot], &lit[dot + 1..]);
        if frac_part.is_empty() {
            return Err(ExprError::Parse(format!("bad decimal literal: {lit}")));
        }
        let digits: String = format!("{int_part}{frac_part}");
        let p: BigInt = digits
            .parse()
            .map_err(|_| ExprError::Parse(format!("bad decimal literal: {lit}")))?;
        let q = BigInt::from(10u32).pow(frac_part.len() as u32);
        let (p, q) = reduce(p, q);
        Ok(RealExpr::Rational(p, q))
    } else {
        let p: BigInt =
            lit.parse().map_err(|_| ExprError::Parse(format!("bad integer literal: {lit}")))?;
        Ok(RealExpr::Rational(p, BigInt::one()))
    }
}

/// Parse the concrete expression syntax described in the module docs.
pub fn parse_real_expr(s: &str) -> Result<RealExpr, ExprError> {
    let mut p = Parser { tokens: tokenize(s)?, pos: 0 };
    let e = p.expr()?;
    if p.pos != p.tokens.len() {
        return Err(ExprError::Parse(format!("trailing input after expression: {s}")));
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close_to(e: &RealExpr, expect: &str) {
        let v = e.eval(192).unwrap();
        let want = Real::from_decimal_str(expect, 192).unwrap();
        let diff = v.sub(&want, 192).abs();
        assert!(
            diff.lo() < &crate::real::Dyadic::new(BigInt::one(), -20),
            "{e} evaluated to {} expected {expect}",
            v.to_decimal(12)
        );
    }

    #[test]
    fn parses_and_evaluates_literals() {
        close_to(&parse_real_expr("30").unwrap(), "30");
        close_to(&parse_real_expr("0.3").unwrap(), "0.3");
        close_to(&parse_real_expr("8/9").unwrap(), "0.888888888888888888888888");
        close_to(&parse_real_expr("-7/2").unwrap(), "-3.5");
        close_to(&parse_real_expr("1 + 2*3").unwrap(), "7");
        close_to(&parse_real_expr("(1 + 2)*3").unwrap(), "9");
    }

    #[test]
    fn parses_functions() {
        close_to(&parse_real_expr("sqrt(2)").unwrap(), "1.414213562373095048801689");
        close_to(&parse_real_expr("log(10)").unwrap(), "2.302585092994045684017991");
        // Larger root of x^2 = x + 1.
        close_to(&parse_real_expr("alpha(1,1)").unwrap(), "1.618033988749894848204587");
        // Larger root of x^2 = 2x + 1.
        close_to(&parse_real_expr("alpha(2,1)").unwrap(), "2.414213562373095048801689");
        close_to(
            &parse_real_expr("log(10)/log(alpha(1,1))").unwrap(),
            "4.784971966781665971358189",
        );
    }

    #[test]
    fn rational_detection() {
        let e = parse_real_expr("1/4 + 1/4").unwrap();
        let (p, q) = e.as_rational().unwrap();
        assert_eq!((p, q), (BigInt::one(), BigInt::from(2)));
        assert!(parse_real_expr("sqrt(2)").unwrap().as_rational().is_none());
        let neg = parse_real_expr("-(3/6)").unwrap();
        assert_eq!(neg.as_rational().unwrap(), (BigInt::from(-1), BigInt::from(2)));
    }

    #[test]
    fn rejects_malformed_input() {
        assert!(parse_real_expr("sqrt(").is_err());
        assert!(parse_real_expr("alpha(1)").is_err());
        assert!(parse_real_expr("2 +").is_err());
        assert!(parse_real_expr("log 10").is_err());
        assert!(parse_real_expr("1 2").is_err());
        assert!(parse_real_expr("$").is_err());
    }
}
