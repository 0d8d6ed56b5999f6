//! Weight-function expressions.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor (('*' | '/') factor)*
//! factor := atom ('^' signed-number)?
//! atom   := number | 'x' | '(' expr ')' | family
//! family := 'identity' ['(' ')'] | name '(' number ',' number ')'
//! ```
//! with family names `linear(c0, c1) = c0 + c1 x`, `quad(c0, c2) = c0 + c2 x^2`
//! and `betainv(b1, b2) = x^-b1 (1 - x)^-b2`.

use std::fmt;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Family {
    Identity,
    Linear { c0: f64, c1: f64 },
    Quad { c0: f64, c2: f64 },
    BetaInv { b1: f64, b2: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl BinOp {
    fn symbol(self) -> char {
        match self {
            BinOp::Add => '+',
            BinOp::Sub => '-',
            BinOp::Mul => '*',
            BinOp::Div => '/',
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(f64),
    Var,
    Binary(BinOp, Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, f64),
    Family(Family),
}

fn eval_err(x: f64, message: impl Into<String>) -> Error {
    Error::Evaluation { x, message: message.into() }
}

fn checked_pow(base: f64, exp: f64, x: f64) -> Result<f64> {
    if base == 0.0 && exp < 0.0 {
        return Err(eval_err(x, format!("0 raised to negative power {exp}")));
    }
    let v = base.powf(exp);
    if v.is_nan() {
        return Err(eval_err(x, format!("{base}^{exp} is not a real number")));
    }
    Ok(v)
}

impl Expr {
    pub fn eval(&self, x: f64) -> Result<f64> {
        match self {
            Expr::Const(c) => Ok(*c),
            Expr::Var => Ok(x),
            Expr::Binary(op, l, r) => {
                let (a, b) = (l.eval(x)?, r.eval(x)?);
                match op {
                    BinOp::Add => Ok(a + b),
                    BinOp::Sub => Ok(a - b),
                    BinOp::Mul => Ok(a * b),
                    BinOp::Div => {
                        if b == 0.0 {
                            Err(eval_err(x, "division by zero"))
                        } else {
                            Ok(a / b)
                        }
                    }
                }
            }
            Expr::Pow(base, exp) => checked_pow(base.eval(x)?, *exp, x),
            Expr::Family(f) => match *f {
                Family::Identity => Ok(x),
                Family::Linear { c0, c1 } => Ok(c0 + c1 * x),
                Family::Quad { c0, c2 } => Ok(c0 + c2 * x * x),
                Family::BetaInv { b1, b2 } => Ok(checked_pow(x, -b1, x)? * checked_pow(1.0 - x, -b2, x)?),
            },
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Const(c) => write!(f, "{c}"),
            Expr::Var => write!(f, "x"),
            Expr::Binary(op, l, r) => write!(f, "({l} {} {r})", op.symbol()),
            Expr::Pow(base, exp) => match **base {
                Expr::Pow(..) => write!(f, "({base})^{exp}"),
                _ => write!(f, "{base}^{exp}"),
            },
            Expr::Family(fam) => match fam {
                Family::Identity => write!(f, "identity"),
                Family::Linear { c0, c1 } => write!(f, "linear({c0}, {c1})"),
                Family::Quad { c0, c2 } => write!(f, "quad({c0}, {c2})"),
                Family::BetaInv { b1, b2 } => write!(f, "betainv({b1}, {b2})"),
            },
        }
    }
}

/// A parsed weight specification and the text it came from.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightSpec {
    source: String,
    expr: Expr,
}

impl WeightSpec {
    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn expr(&self) -> &Expr {
        &self.expr
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        self.expr.eval(x)
    }
}

impl fmt::Display for WeightSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.expr.fmt(f)
    }
}

impl std::str::FromStr for WeightSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_weight(s)
    }
}

pub fn parse_weight(spec: &str) -> Result<WeightSpec> {
    let mut p = Parser { src: spec.as_bytes(), pos: 0 };
    p.skip_ws();
    if p.pos == p.src.len() {
        return Err(p.error("empty weight specification"));
    }
    let expr = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.error(format!("unexpected `{}`", p.src[p.pos] as char)));
    }
    Ok(WeightSpec { source: spec.to_string(), expr })
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, message: impl Into<String>) -> Error {
        Error::Syntax { offset: self.pos, message: message.into() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(format!("expected `{}`", c as char)))
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        while let Some(c @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            let rhs = self.term()?;
            let op = if c == b'+' { BinOp::Add } else { BinOp::Sub };
            lhs = Expr::Binary(op, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.factor()?;
        while let Some(c @ (b'*' | b'/')) = self.peek() {
            self.pos += 1;
            let rhs = self.factor()?;
            let op = if c == b'*' { BinOp::Mul } else { BinOp::Div };
            lhs = Expr::Binary(op, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let exp = self.signed_number()?;
            return Ok(Expr::Pow(Box::new(base), exp));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                self.expect(b')')?;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => Ok(Expr::Const(self.number()?)),
            Some(c) if c.is_ascii_alphabetic() => self.identifier(),
            Some(c) => Err(self.error(format!("unexpected `{}`", c as char))),
            None => Err(self.error("unexpected end of input")),
        }
    }

    fn identifier(&mut self) -> Result<Expr> {
        let start = self.pos;
        while self.pos < self.src.len() && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_') {
            self.pos += 1;
        }
        let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii identifier");
        let family = match name {
            "x" => return Ok(Expr::Var),
            "identity" => {
                if self.peek() == Some(b'(') {
                    self.pos += 1;
                    self.expect(b')')?;
                }
                return Ok(Expr::Family(Family::Identity));
            }
            "linear" | "quad" | "betainv" => name,
            _ => {
                self.pos = start;
                return Err(self.error(format!("unknown identifier `{name}`")));
            }
        };
        self.expect(b'(')?;
        let first = self.signed_number()?;
        self.expect(b',')?;
        let second = self.signed_number()?;
        self.expect(b')')?;
        Ok(Expr::Family(match family {
            "linear" => Family::Linear { c0: first, c1: second },
            "quad" => Family::Quad { c0: first, c2: second },
            _ => Family::BetaInv { b1: first, b2: second },
        }))
    }

    fn signed_number(&mut self) -> Result<f64> {
        let negative = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                true
            }
            Some(b'+') => {
                self.pos += 1;
                false
            }
            _ => false,
        };
        let v = self.number()?;
        Ok(if negative { -v } else { v })
    }

    fn number(&mut self) -> Result<f64> {
        self.skip_ws();
        let start = self.pos;
        let digits = |p: &mut Self| {
            let s = p.pos;
            while p.pos < p.src.len() && p.src[p.pos].is_ascii_digit() {
                p.pos += 1;
            }
            p.pos - s
        };
        let mut count = digits(self);
        if self.src.get(self.pos) == Some(&b'.') {
            self.pos += 1;
            count += digits(self);
        }
        if count == 0 {
            self.pos = start;
            return Err(self.error("expected a number"));
        }
        if matches!(self.src.get(self.pos), Some(b'e' | b'E')) {
            let mark = self.pos;
            self.pos += 1;
            if matches!(self.src.get(self.pos), Some(b'+' | b'-')) {
                self.pos += 1;
            }
            if digits(self) == 0 {
                self.pos = mark;
            }
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii number");
        text.parse::<f64>().map_err(|_| Error::Syntax { offset: start, message: format!("bad number `{text}`") })
    }
}
