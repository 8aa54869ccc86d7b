//! A small expression language for complex boundary data and maps.
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*
//! unary   := '-' unary | power
//! power   := primary ('^' ['+' | '-'] INTEGER)*
//! primary := NUMBER | 'i' | 't' | 'z' | 'conj' '(' expr ')' | '(' expr ')'
//! ```
//!
//! Numbers are real decimal or scientific literals; `i` is the imaginary
//! unit. An expression refers to at most one of the variables `t` (a point
//! on the contour) or `z` (a field point).

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Moduli below this are treated as division by zero.
pub const DIVISION_GUARD: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Var {
    T,
    Z,
}

impl Var {
    pub fn name(self) -> &'static str {
        match self {
            Var::T => "t",
            Var::Z => "z",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(f64),
    I,
    Var(Var),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i32),
    Conj(Box<Expr>),
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Tok {
    Num(f64),
    Ident(Ident),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Ident {
    I,
    T,
    Z,
    Conj,
}

fn parse_err<T>(offset: usize, message: impl Into<String>) -> Result<T> {
    Err(Error::Parse {
        offset,
        message: message.into(),
    })
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut pos = 0;
    while pos < bytes.len() {
        let c = bytes[pos];
        let start = pos;
        let single = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                pos += 1;
                continue;
            }
            b'+' => Some(Tok::Plus),
            b'-' => Some(Tok::Minus),
            b'*' => Some(Tok::Star),
            b'/' => Some(Tok::Slash),
            b'^' => Some(Tok::Caret),
            b'(' => Some(Tok::LParen),
            b')' => Some(Tok::RParen),
            _ => None,
        };
        if let Some(tok) = single {
            out.push((tok, start));
            pos += 1;
            continue;
        }
        if c.is_ascii_digit() || c == b'.' {
            while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                pos += 1;
            }
            if pos < bytes.len() && bytes[pos] == b'.' {
                pos += 1;
                while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                    pos += 1;
                }
            }
            if pos < bytes.len() && (bytes[pos] == b'e' || bytes[pos] == b'E') {
                pos += 1;
                if pos < bytes.len() && (bytes[pos] == b'+' || bytes[pos] == b'-') {
                    pos += 1;
                }
                let exp_start = pos;
                while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                    pos += 1;
                }
                if exp_start == pos {
                    return parse_err(pos, "malformed exponent in numeric literal");
                }
            }
            let text = &src[start..pos];
            match text.parse::<f64>() {
                Ok(v) if v.is_finite() => out.push((Tok::Num(v), start)),
                Ok(_) => return parse_err(start, format!("literal `{text}` overflows")),
                Err(_) => return parse_err(start, format!("malformed literal `{text}`")),
            }
            continue;
        }
        if c.is_ascii_alphabetic() || c == b'_' {
            while pos < bytes.len() && (bytes[pos].is_ascii_alphanumeric() || bytes[pos] == b'_') {
                pos += 1;
            }
            let ident = match &src[start..pos] {
                "i" => Ident::I,
                "t" => Ident::T,
                "z" => Ident::Z,
                "conj" => Ident::Conj,
                other => return parse_err(start, format!("unknown identifier `{other}`")),
            };
            out.push((Tok::Ident(ident), start));
            continue;
        }
        let ch = src[start..].chars().next().unwrap_or('?');
        return parse_err(start, format!("unexpected character `{ch}`"));
    }
    out.push((Tok::End, src.len()));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Tok {
        self.toks[self.pos].0
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.peek();
        if t != Tok::End {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<()> {
        if self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            self.unexpected(what)
        }
    }

    fn unexpected<T>(&self, expected: &str) -> Result<T> {
        let found = match self.peek() {
            Tok::End => "end of input".to_string(),
            t => format!("{t:?}"),
        };
        parse_err(self.offset(), format!("expected {expected}, found {found}"))
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Tok::Minus => {
                    self.bump();
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
                }
                Tok::Slash => {
                    self.bump();
                    lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.peek() == Tok::Minus {
            self.bump();
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let mut base = self.primary()?;
        while self.peek() == Tok::Caret {
            self.bump();
            let negative = match self.peek() {
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
            let offset = self.offset();
            let n = match self.bump() {
                Tok::Num(v) if v.fract() == 0.0 && v.abs() <= i32::MAX as f64 => v as i32,
                _ => return parse_err(offset, "exponent must be an integer literal"),
            };
            base = Expr::Pow(Box::new(base), if negative { -n } else { n });
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Expr> {
        let offset = self.offset();
        match self.peek() {
            Tok::Num(v) => {
                self.bump();
                Ok(Expr::Num(v))
            }
            Tok::Ident(Ident::I) => {
                self.bump();
                Ok(Expr::I)
            }
            Tok::Ident(Ident::T) => {
                self.bump();
                Ok(Expr::Var(Var::T))
            }
            Tok::Ident(Ident::Z) => {
                self.bump();
                Ok(Expr::Var(Var::Z))
            }
            Tok::Ident(Ident::Conj) => {
                self.bump();
                self.expect(Tok::LParen, "`(` after conj")?;
                let inner = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(Expr::Conj(Box::new(inner)))
            }
            Tok::LParen => {
                self.bump();
                let inner = self.expr()?;
                if self.peek() != Tok::RParen {
                    return parse_err(
                        self.offset(),
                        format!("unbalanced parenthesis opened at offset {offset}"),
                    );
                }
                self.bump();
                Ok(inner)
            }
            _ => self.unexpected("a number, variable, `i`, `conj` or `(`"),
        }
    }
}

/// Parses an expression.
pub fn parse(src: &str) -> Result<Expr> {
    let mut p = Parser {
        toks: lex(src)?,
        pos: 0,
    };
    let e = p.expr()?;
    if p.peek() != Tok::End {
        return p.unexpected("an operator or end of input");
    }
    Ok(e)
}

impl FromStr for Expr {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse(s)
    }
}

fn checked_div(num: Complex64, den: Complex64) -> Result<Complex64> {
    if den.norm() < DIVISION_GUARD {
        return Err(Error::Eval(format!(
            "division by a value of modulus {:e}",
            den.norm()
        )));
    }
    Ok(num / den)
}

fn powi(base: Complex64, n: i32) -> Result<Complex64> {
    let mut acc = Complex64::new(1.0, 0.0);
    let mut b = base;
    let mut k = n.unsigned_abs();
    while k > 0 {
        if k & 1 == 1 {
            acc *= b;
        }
        b *= b;
        k >>= 1;
    }
    if n < 0 {
        checked_div(Complex64::new(1.0, 0.0), acc)
    } else {
        Ok(acc)
    }
}

impl Expr {
    pub fn zero() -> Self {
        Expr::Num(0.0)
    }

    /// Evaluates with `var` bound to `value`. Any other variable is unbound.
    pub fn eval(&self, var: Var, value: Complex64) -> Result<Complex64> {
        Ok(match self {
            Expr::Num(v) => Complex64::new(*v, 0.0),
            Expr::I => Complex64::i(),
            Expr::Var(v) if *v == var => value,
            Expr::Var(v) => {
                return Err(Error::Eval(format!(
                    "unbound variable `{}` (bound: `{}`)",
                    v.name(),
                    var.name()
                )))
            }
            Expr::Neg(a) => -a.eval(var, value)?,
            Expr::Add(a, b) => a.eval(var, value)? + b.eval(var, value)?,
            Expr::Sub(a, b) => a.eval(var, value)? - b.eval(var, value)?,
            Expr::Mul(a, b) => a.eval(var, value)? * b.eval(var, value)?,
            Expr::Div(a, b) => checked_div(a.eval(var, value)?, b.eval(var, value)?)?,
            Expr::Pow(a, n) => powi(a.eval(var, value)?, *n)?,
            Expr::Conj(a) => a.eval(var, value)?.conj(),
        })
    }

    /// Evaluates an expression in the boundary variable `t`.
    pub fn eval_t(&self, t: Complex64) -> Result<Complex64> {
        self.eval(Var::T, t)
    }

    /// Evaluates an expression in the field variable `z`.
    pub fn eval_z(&self, z: Complex64) -> Result<Complex64> {
        self.eval(Var::Z, z)
    }

    /// Evaluates binding whichever variable the expression uses.
    pub fn eval_any(&self, value: Complex64) -> Result<Complex64> {
        self.eval(self.free_var().unwrap_or(Var::T), value)
    }

    /// The variable the expression refers to, if any. Expressions mixing `t`
    /// and `z` report `t`; evaluation then fails on `z`.
    pub fn free_var(&self) -> Option<Var> {
        match self {
            Expr::Num(_) | Expr::I => None,
            Expr::Var(v) => Some(*v),
            Expr::Neg(a) | Expr::Pow(a, _) | Expr::Conj(a) => a.free_var(),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                match (a.free_var(), b.free_var()) {
                    (Some(Var::T), _) | (_, Some(Var::T)) => Some(Var::T),
                    (x, y) => x.or(y),
                }
            }
        }
    }

    /// True for the literal `0` (possibly negated or parenthesised).
    pub fn is_literal_zero(&self) -> bool {
        match self {
            Expr::Num(v) => *v == 0.0,
            Expr::Neg(a) => a.is_literal_zero(),
            _ => false,
        }
    }

    /// Number of nodes in the tree.
    pub fn size(&self) -> usize {
        match self {
            Expr::Num(_) | Expr::I | Expr::Var(_) => 1,
            Expr::Neg(a) | Expr::Pow(a, _) | Expr::Conj(a) => 1 + a.size(),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                1 + a.size() + b.size()
            }
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            // `{:?}` is the shortest representation that parses back exactly
            Expr::Num(v) => write!(f, "{v:?}"),
            Expr::I => f.write_str("i"),
            Expr::Var(v) => f.write_str(v.name()),
            Expr::Neg(a) => write!(f, "(-{a})"),
            Expr::Add(a, b) => write!(f, "({a} + {b})"),
            Expr::Sub(a, b) => write!(f, "({a} - {b})"),
            Expr::Mul(a, b) => write!(f, "({a} * {b})"),
            Expr::Div(a, b) => write!(f, "({a} / {b})"),
            Expr::Pow(a, n) => write!(f, "({a}^{n})"),
            Expr::Conj(a) => write!(f, "conj({a})"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(e: Expr) -> Box<Expr> {
        Box::new(e)
    }

    fn t() -> Expr {
        Expr::Var(Var::T)
    }

    #[test]
    fn parse_examples() {
        assert_eq!(
            parse("t/(t^2-1)").unwrap(),
            Expr::Div(
                b(t()),
                b(Expr::Sub(b(Expr::Pow(b(t()), 2)), b(Expr::Num(1.0))))
            )
        );
        assert_eq!(
            parse("conj(t)+i").unwrap(),
            Expr::Add(b(Expr::Conj(b(t()))), b(Expr::I))
        );
        match parse("t*(1+") {
            Err(Error::Parse { offset, .. }) => assert_eq!(offset, 5),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn precedence_and_associativity() {
        // ^ binds tighter than unary minus
        assert_eq!(parse("-t^2").unwrap(), Expr::Neg(b(Expr::Pow(b(t()), 2))));
        assert_eq!(
            parse("1-t-2").unwrap(),
            Expr::Sub(b(Expr::Sub(b(Expr::Num(1.0)), b(t()))), b(Expr::Num(2.0)))
        );
        assert_eq!(
            parse("8/t/2").unwrap(),
            Expr::Div(b(Expr::Div(b(Expr::Num(8.0)), b(t()))), b(Expr::Num(2.0)))
        );
        assert_eq!(parse("t^-2").unwrap(), Expr::Pow(b(t()), -2));
        assert_eq!(parse("1.5e-3").unwrap(), Expr::Num(1.5e-3));
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(
            parse("t^2.5"),
            Err(Error::Parse { offset: 2, .. })
        ));
        assert!(matches!(parse("t^z"), Err(Error::Parse { offset: 2, .. })));
        assert!(matches!(
            parse("sin(t)"),
            Err(Error::Parse { offset: 0, .. })
        ));
        assert!(matches!(parse("(t"), Err(Error::Parse { offset: 2, .. })));
        assert!(matches!(parse("t)"), Err(Error::Parse { offset: 1, .. })));
        assert!(matches!(
            parse("2 $ t"),
            Err(Error::Parse { offset: 2, .. })
        ));
        assert!(matches!(parse("1e"), Err(Error::Parse { .. })));
        assert!(matches!(parse("1e400"), Err(Error::Parse { .. })));
        assert!(matches!(parse(""), Err(Error::Parse { offset: 0, .. })));
    }

    #[test]
    fn eval_examples() {
        let e = parse("t/(t^2-1)").unwrap();
        let v = e.eval_t(Complex64::new(2.0, 0.0)).unwrap();
        assert!((v - Complex64::new(2.0 / 3.0, 0.0)).norm() < 1e-15);
        let e = parse("conj(t)").unwrap();
        assert_eq!(e.eval_t(Complex64::i()).unwrap(), -Complex64::i());
    }

    #[test]
    fn eval_errors() {
        let e = parse("1/(t-1)").unwrap();
        assert!(matches!(
            e.eval_t(Complex64::new(1.0, 0.0)),
            Err(Error::Eval(_))
        ));
        assert!(matches!(
            e.eval_z(Complex64::new(0.0, 0.0)),
            Err(Error::Eval(_))
        ));
        let e = parse("t^-1").unwrap();
        assert!(e.eval_t(Complex64::new(0.0, 0.0)).is_err());
    }

    #[test]
    fn display_reparses_to_same_tree() {
        for src in [
            "t/(t^2-1)",
            "conj(t)+i",
            "-(z - 0.25)^-3 * 1e-7",
            "--t",
            "conj(conj(t)/(conj(t)^2-1))",
        ] {
            let e = parse(src).unwrap();
            let again = parse(&e.to_string()).unwrap();
            assert_eq!(e, again, "{src} -> {e}");
        }
    }

    #[test]
    fn literal_zero() {
        assert!(parse("0").unwrap().is_literal_zero());
        assert!(parse("-(0)").unwrap().is_literal_zero());
        assert!(!parse("0*t").unwrap().is_literal_zero());
    }
}
