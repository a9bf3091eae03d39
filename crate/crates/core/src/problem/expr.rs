//! Expression mini-language for coefficient fields.
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*
//! unary   := ('-' | '+') unary | power
//! power   := atom ('^' unary)?
//! atom    := number | 'x' | 't' | 'u' | 'pi'
//!          | func '(' expr (',' expr)* ')' | '(' expr ')'
//! func    := sin | cos | exp | gamma     (one argument)
//!          | pow                         (two arguments)
//! ```
//!
//! Whitespace is ignored. `^` binds tighter than unary minus and is right
//! associative, so `-x^2` is `-(x^2)` and `2^3^2` is `2^9`.

use std::{fmt, str::FromStr};

use thiserror::Error;

use crate::{kernels::gamma, Scalar};

#[derive(Debug, Error, Clone, PartialEq)]
#[error("expression error at byte {pos}: {message}")]
pub struct ExprError {
    pub pos: usize,
    pub message: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Var {
    X,
    T,
    U,
}

impl Var {
    fn name(self) -> &'static str {
        match self {
            Var::X => "x",
            Var::T => "t",
            Var::U => "u",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

impl BinOp {
    fn symbol(self) -> char {
        match self {
            BinOp::Add => '+',
            BinOp::Sub => '-',
            BinOp::Mul => '*',
            BinOp::Div => '/',
            BinOp::Pow => '^',
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Sin,
    Cos,
    Exp,
    Gamma,
    Pow,
}

impl Func {
    fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Exp => "exp",
            Func::Gamma => "gamma",
            Func::Pow => "pow",
        }
    }

    fn arity(self) -> usize {
        match self {
            Func::Pow => 2,
            _ => 1,
        }
    }

    fn lookup(name: &str) -> Option<Func> {
        Some(match name {
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "exp" => Func::Exp,
            "gamma" => Func::Gamma,
            "pow" => Func::Pow,
            _ => return None,
        })
    }
}

/// Parsed closed-form expression in `x`, `t` and `u`.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(f64),
    Pi,
    Var(Var),
    Neg(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
    Call(Func, Vec<Expr>),
}

impl Expr {
    pub fn parse(src: &str) -> Result<Expr, ExprError> {
        let mut p = Parser {
            src,
            bytes: src.as_bytes(),
            pos: 0,
        };
        let e = p.expr()?;
        p.skip_ws();
        if p.pos != p.bytes.len() {
            return Err(p.error("unexpected trailing input"));
        }
        Ok(e)
    }

    pub fn num(v: f64) -> Expr {
        Expr::Num(v)
    }

    /// Negation that folds into numeric literals, so printing and reparsing
    /// gives back the same tree.
    pub fn neg(e: Expr) -> Expr {
        match e {
            Expr::Num(v) => Expr::Num(-v),
            other => Expr::Neg(Box::new(other)),
        }
    }

    pub fn bin(op: BinOp, a: Expr, b: Expr) -> Expr {
        Expr::Bin(op, Box::new(a), Box::new(b))
    }

    pub fn uses(&self, var: Var) -> bool {
        match self {
            Expr::Num(_) | Expr::Pi => false,
            Expr::Var(v) => *v == var,
            Expr::Neg(e) => e.uses(var),
            Expr::Bin(_, a, b) => a.uses(var) || b.uses(var),
            Expr::Call(_, args) => args.iter().any(|a| a.uses(var)),
        }
    }

    /// Constant value when the expression does not depend on any variable.
    pub fn as_constant(&self) -> Option<f64> {
        if self.uses(Var::X) || self.uses(Var::T) || self.uses(Var::U) {
            None
        } else {
            Some(self.eval::<f64>(0.0, 0.0, 0.0))
        }
    }

    pub fn eval<S: Scalar>(&self, x: S, t: S, u: S) -> S {
        match self {
            Expr::Num(v) => S::lit(*v),
            Expr::Pi => S::PI(),
            Expr::Var(Var::X) => x,
            Expr::Var(Var::T) => t,
            Expr::Var(Var::U) => u,
            Expr::Neg(e) => -e.eval(x, t, u),
            Expr::Bin(op, a, b) => {
                let (a, b) = (a.eval(x, t, u), b.eval(x, t, u));
                match op {
                    BinOp::Add => a + b,
                    BinOp::Sub => a - b,
                    BinOp::Mul => a * b,
                    BinOp::Div => a / b,
                    BinOp::Pow => power(a, b),
                }
            }
            Expr::Call(f, args) => {
                let a = args[0].eval(x, t, u);
                match f {
                    Func::Sin => a.sin(),
                    Func::Cos => a.cos(),
                    Func::Exp => a.exp(),
                    Func::Gamma => gamma(a).unwrap_or_else(|_| S::nan()),
                    Func::Pow => power(a, args[1].eval(x, t, u)),
                }
            }
        }
    }

    /// Evaluates a field of `(x, t)`.
    #[inline]
    pub fn at<S: Scalar>(&self, x: S, t: S) -> S {
        self.eval(x, t, S::zero())
    }
}

/// `a^b`, with integer exponents taken by repeated multiplication so negative
/// bases work as expected.
fn power<S: Scalar>(a: S, b: S) -> S {
    if b == b.trunc() && b.abs() <= S::lit(64.0) {
        let n = b.to_i32().unwrap_or(0);
        a.powi(n)
    } else {
        a.powf(b)
    }
}

impl FromStr for Expr {
    type Err = ExprError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Expr::parse(s)
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(v) if *v < 0.0 || (*v == 0.0 && v.is_sign_negative()) => {
                write!(f, "(-{:?})", -v)
            }
            Expr::Num(v) => write!(f, "{v:?}"),
            Expr::Pi => f.write_str("pi"),
            Expr::Var(v) => f.write_str(v.name()),
            Expr::Neg(e) => write!(f, "(-{e})"),
            Expr::Bin(op, a, b) => write!(f, "({a} {} {b})", op.symbol()),
            Expr::Call(func, args) => {
                write!(f, "{}(", func.name())?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str(")")
            }
        }
    }
}

struct Parser<'a> {
    src: &'a str,
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn error(&self, message: impl Into<String>) -> ExprError {
        ExprError {
            pos: self.pos,
            message: message.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek() {
                Some(b'+') => BinOp::Add,
                Some(b'-') => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.pos += 1;
            let rhs = self.term()?;
            lhs = Expr::bin(op, lhs, rhs);
        }
    }

    fn term(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek() {
                Some(b'*') => BinOp::Mul,
                Some(b'/') => BinOp::Div,
                _ => return Ok(lhs),
            };
            self.pos += 1;
            let rhs = self.unary()?;
            lhs = Expr::bin(op, lhs, rhs);
        }
    }

    fn unary(&mut self) -> Result<Expr, ExprError> {
        if self.eat(b'-') {
            return Ok(Expr::neg(self.unary()?));
        }
        if self.eat(b'+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ExprError> {
        let base = self.atom()?;
        if self.eat(b'^') {
            let exp = self.unary()?;
            return Ok(Expr::bin(BinOp::Pow, base, exp));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, ExprError> {
        match self.peek() {
            None => Err(self.error("unexpected end of expression")),
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.error("expected ')'"));
                }
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => self.number(),
            Some(c) if c.is_ascii_alphabetic() => self.ident(),
            Some(c) => Err(self.error(format!("unexpected character '{}'", c as char))),
        }
    }

    fn number(&mut self) -> Result<Expr, ExprError> {
        let start = self.pos;
        let b = self.bytes;
        while self.pos < b.len() && (b[self.pos].is_ascii_digit() || b[self.pos] == b'.') {
            self.pos += 1;
        }
        if self.pos < b.len() && (b[self.pos] == b'e' || b[self.pos] == b'E') {
            let mut look = self.pos + 1;
            if look < b.len() && (b[look] == b'+' || b[look] == b'-') {
                look += 1;
            }
            if look < b.len() && b[look].is_ascii_digit() {
                self.pos = look;
                while self.pos < b.len() && b[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
            }
        }
        let text = &self.src[start..self.pos];
        text.parse::<f64>().map(Expr::Num).map_err(|_| ExprError {
            pos: start,
            message: format!("invalid number '{text}'"),
        })
    }

    fn ident(&mut self) -> Result<Expr, ExprError> {
        let start = self.pos;
        let b = self.bytes;
        while self.pos < b.len() && (b[self.pos].is_ascii_alphanumeric() || b[self.pos] == b'_') {
            self.pos += 1;
        }
        let name = &self.src[start..self.pos];
        match name {
            "x" => return Ok(Expr::Var(Var::X)),
            "t" => return Ok(Expr::Var(Var::T)),
            "u" => return Ok(Expr::Var(Var::U)),
            "pi" => return Ok(Expr::Pi),
            _ => {}
        }
        let func = Func::lookup(name).ok_or_else(|| ExprError {
            pos: start,
            message: format!("unknown identifier '{name}'"),
        })?;
        if !self.eat(b'(') {
            return Err(self.error(format!("expected '(' after {name}")));
        }
        let mut args = vec![self.expr()?];
        while self.eat(b',') {
            args.push(self.expr()?);
        }
        if !self.eat(b')') {
            return Err(self.error("expected ')'"));
        }
        if args.len() != func.arity() {
            return Err(ExprError {
                pos: start,
                message: format!(
                    "{name} takes {} argument(s), got {}",
                    func.arity(),
                    args.len()
                ),
            });
        }
        Ok(Expr::Call(func, args))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ev(src: &str, x: f64, t: f64, u: f64) -> f64 {
        Expr::parse(src).unwrap().eval(x, t, u)
    }

    #[test]
    fn precedence_and_associativity() {
        assert_eq!(ev("1 + 2 * 3", 0.0, 0.0, 0.0), 7.0);
        assert_eq!(ev("-2^2", 0.0, 0.0, 0.0), -4.0);
        assert_eq!(ev("2^3^2", 0.0, 0.0, 0.0), 512.0);
        assert_eq!(ev("8 / 4 / 2", 0.0, 0.0, 0.0), 1.0);
        assert_eq!(ev("2^-1", 0.0, 0.0, 0.0), 0.5);
        assert_eq!(ev("(x + t) * u", 1.0, 2.0, 3.0), 9.0);
    }

    #[test]
    fn functions_and_constants() {
        assert!((ev("cos(pi*x)", 1.0, 0.0, 0.0) + 1.0).abs() < 1e-15);
        assert!((ev("gamma(0.5)^2", 0.0, 0.0, 0.0) - std::f64::consts::PI).abs() < 1e-13);
        assert_eq!(ev("pow(u, 2)", 0.0, 0.0, -3.0), 9.0);
        assert_eq!(ev("exp(0)", 0.0, 0.0, 0.0), 1.0);
        assert_eq!(ev("1.5e-3 * 2E2", 0.0, 0.0, 0.0), 0.3);
        assert_eq!(ev(" x*t*sin( u ^ 2 ) ", 0.5, 1.0, 0.0), 0.0);
    }

    #[test]
    fn errors_carry_position() {
        let e = Expr::parse("1 + foo(x)").unwrap_err();
        assert_eq!(e.pos, 4);
        assert!(Expr::parse("sin(x, t)").is_err());
        assert!(Expr::parse("pow(x)").is_err());
        assert!(Expr::parse("(x + 1").is_err());
        assert!(Expr::parse("x 1").is_err());
        assert!(Expr::parse("").is_err());
        assert!(Expr::parse("x $ 2").is_err());
    }

    #[test]
    fn variable_usage() {
        let e = Expr::parse("x*t*sin(u^2)").unwrap();
        assert!(e.uses(Var::U) && e.uses(Var::X));
        assert_eq!(Expr::parse("1/2").unwrap().as_constant(), Some(0.5));
        assert_eq!(Expr::parse("1+t").unwrap().as_constant(), None);
    }

    fn arb_expr() -> impl Strategy<Value = Expr> {
        let leaf = prop_oneof![
            (0.0f64..100.0).prop_map(Expr::Num),
            Just(Expr::Pi),
            Just(Expr::Var(Var::X)),
            Just(Expr::Var(Var::T)),
            Just(Expr::Var(Var::U)),
        ];
        leaf.prop_recursive(4, 32, 3, |inner| {
            prop_oneof![
                inner.clone().prop_map(Expr::neg),
                (inner.clone(), inner.clone(), 0..5usize).prop_map(|(a, b, i)| {
                    let op = [BinOp::Add, BinOp::Sub, BinOp::Mul, BinOp::Div, BinOp::Pow][i];
                    Expr::bin(op, a, b)
                }),
                (inner.clone(), 0..4usize).prop_map(|(a, i)| {
                    Expr::Call([Func::Sin, Func::Cos, Func::Exp, Func::Gamma][i], vec![a])
                }),
                (inner.clone(), inner).prop_map(|(a, b)| Expr::Call(Func::Pow, vec![a, b])),
            ]
        })
    }

    proptest! {
        #[test]
        fn display_reparses_to_same_tree(e in arb_expr()) {
            let text = e.to_string();
            let back = Expr::parse(&text).unwrap();
            prop_assert_eq!(back, e);
        }
    }
}
