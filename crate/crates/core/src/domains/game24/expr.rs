//! Exact-rational arithmetic expressions over + - * /.

use std::fmt;

use num_rational::Rational64;
use num_traits::{CheckedAdd, CheckedDiv, CheckedMul, CheckedSub, Zero};

use crate::error::ParseError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Op {
    Add,
    Sub,
    Mul,
    Div,
}

impl Op {
    pub const ALL: [Op; 4] = [Op::Add, Op::Sub, Op::Mul, Op::Div];

    pub fn symbol(self) -> char {
        match self {
            Op::Add => '+',
            Op::Sub => '-',
            Op::Mul => '*',
            Op::Div => '/',
        }
    }

    pub fn from_symbol(c: char) -> Option<Op> {
        match c {
            '+' => Some(Op::Add),
            '-' | '−' | '–' => Some(Op::Sub),
            '*' | '×' | '∗' | '·' => Some(Op::Mul),
            '/' | '÷' => Some(Op::Div),
            _ => None,
        }
    }

    fn precedence(self) -> u8 {
        match self {
            Op::Add | Op::Sub => 1,
            Op::Mul | Op::Div => 2,
        }
    }

    /// `None` on division by zero or overflow.
    pub fn apply(self, a: Rational64, b: Rational64) -> Option<Rational64> {
        match self {
            Op::Add => a.checked_add(&b),
            Op::Sub => a.checked_sub(&b),
            Op::Mul => a.checked_mul(&b),
            Op::Div if b.is_zero() => None,
            Op::Div => a.checked_div(&b),
        }
    }
}

impl fmt::Display for Op {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Num(Rational64),
    Bin { op: Op, lhs: Box<Expr>, rhs: Box<Expr> },
}

impl Expr {
    pub fn num(n: i64) -> Expr {
        Expr::Num(Rational64::from_integer(n))
    }

    pub fn bin(op: Op, lhs: Expr, rhs: Expr) -> Expr {
        Expr::Bin { op, lhs: Box::new(lhs), rhs: Box::new(rhs) }
    }

    pub fn eval(&self) -> Option<Rational64> {
        match self {
            Expr::Num(n) => Some(*n),
            Expr::Bin { op, lhs, rhs } => op.apply(lhs.eval()?, rhs.eval()?),
        }
    }

    /// Leaf values in left-to-right order.
    pub fn leaves(&self) -> Vec<Rational64> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves(&self, out: &mut Vec<Rational64>) {
        match self {
            Expr::Num(n) => out.push(*n),
            Expr::Bin { lhs, rhs, .. } => {
                lhs.collect_leaves(out);
                rhs.collect_leaves(out);
            }
        }
    }

    fn fmt_child(&self, f: &mut fmt::Formatter<'_>, parent: Op, right: bool) -> fmt::Result {
        let wrap = match self {
            Expr::Num(_) => false,
            Expr::Bin { op, .. } => {
                op.precedence() < parent.precedence()
                    || (right && op.precedence() == parent.precedence() && matches!(parent, Op::Sub | Op::Div))
            }
        };
        if wrap {
            write!(f, "({self})")
        } else {
            write!(f, "{self}")
        }
    }
}

/// Integers print bare; other rationals print as `p/q`.
pub fn fmt_rational(r: &Rational64) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(n) if n.is_integer() => write!(f, "{}", n.numer()),
            Expr::Num(n) => write!(f, "({})", fmt_rational(n)),
            Expr::Bin { op, lhs, rhs } => {
                lhs.fmt_child(f, *op, false)?;
                write!(f, " {op} ")?;
                rhs.fmt_child(f, *op, true)
            }
        }
    }
}

/// Parses a rational literal: `12`, `-3`, `8/3`, or a decimal such as `2.66`.
pub fn parse_rational(text: &str) -> Result<Rational64, ParseError> {
    let t = text.trim();
    let bad = || ParseError::new(format!("not a number: `{t}`"));
    if let Some((n, d)) = t.split_once('/') {
        let n: i64 = n.trim().parse().map_err(|_| bad())?;
        let d: i64 = d.trim().parse().map_err(|_| bad())?;
        if d == 0 {
            return Err(bad());
        }
        return Ok(Rational64::new(n, d));
    }
    if let Some((whole, frac)) = t.split_once('.') {
        if frac.is_empty() || frac.len() > 9 || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = whole.starts_with('-');
        let whole: i64 = if whole.is_empty() || whole == "-" { 0 } else { whole.parse().map_err(|_| bad())? };
        let scale = 10i64.pow(frac.len() as u32);
        let frac: i64 = frac.parse().map_err(|_| bad())?;
        let mag = whole.abs().checked_mul(scale).and_then(|w| w.checked_add(frac)).ok_or_else(bad)?;
        return Ok(Rational64::new(if negative { -mag } else { mag }, scale));
    }
    t.parse::<i64>().map(Rational64::from_integer).map_err(|_| bad())
}

#[derive(Clone, Debug, PartialEq)]
enum Token {
    Num(Rational64),
    Op(Op),
    Open,
    Close,
}

fn tokenize(text: &str) -> Result<Vec<Token>, ParseError> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        if c.is_whitespace() {
            chars.next();
        } else if c.is_ascii_digit() || c == '.' {
            let mut lit = String::new();
            while let Some(&d) = chars.peek() {
                if d.is_ascii_digit() || d == '.' {
                    lit.push(d);
                    chars.next();
                } else {
                    break;
                }
            }
            if lit.len() > 12 {
                return Err(ParseError::new(format!("number too long: `{lit}`")));
            }
            out.push(Token::Num(parse_rational(&lit)?));
        } else if c == '(' || c == '[' {
            out.push(Token::Open);
            chars.next();
        } else if c == ')' || c == ']' {
            out.push(Token::Close);
            chars.next();
        } else if let Some(op) = Op::from_symbol(c) {
            out.push(Token::Op(op));
            chars.next();
        } else {
            return Err(ParseError::new(format!("unexpected character `{c}`")));
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

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        while let Some(Token::Op(op @ (Op::Add | Op::Sub))) = self.peek().cloned() {
            self.pos += 1;
            let rhs = self.term()?;
            lhs = Expr::bin(op, lhs, rhs);
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.factor()?;
        while let Some(Token::Op(op @ (Op::Mul | Op::Div))) = self.peek().cloned() {
            self.pos += 1;
            let rhs = self.factor()?;
            lhs = Expr::bin(op, lhs, rhs);
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        match self.tokens.get(self.pos).cloned() {
            Some(Token::Num(n)) => {
                self.pos += 1;
                Ok(Expr::Num(n))
            }
            Some(Token::Open) => {
                self.pos += 1;
                let inner = self.expr()?;
                match self.peek() {
                    Some(Token::Close) => {
                        self.pos += 1;
                        Ok(inner)
                    }
                    _ => Err(ParseError::new("unbalanced parentheses")),
                }
            }
            Some(t) => Err(ParseError::new(format!("unexpected token {t:?}"))),
            None => Err(ParseError::new("unexpected end of expression")),
        }
    }
}

/// Parses an infix expression. Anything after the first `=` is ignored.
pub fn parse_expr(text: &str) -> Result<Expr, ParseError> {
    let lhs = text.split('=').next().unwrap_or_default();
    let tokens = tokenize(lhs)?;
    if tokens.is_empty() {
        return Err(ParseError::new("empty expression"));
    }
    let mut p = Parser { tokens, pos: 0 };
    let e = p.expr()?;
    if p.pos != p.tokens.len() {
        return Err(ParseError::new("trailing input after expression"));
    }
    Ok(e)
}
