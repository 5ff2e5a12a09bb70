//! Closed-form scalar expressions over the coordinates `x1, x2, y1, y2`.
//!
//! The grammar (EBNF):
//!
//! ```text
//! expr   := term (('+'|'-') term)*
//! term   := factor (('*'|'/') factor)*
//! factor := '-'* base ('^' signed_number)?
//! base   := number | ident | '(' expr ')' | func '(' expr ')'
//! func   := 'exp' | 'log' | 'sin' | 'cos' | 'sqrt'
//! ident  := 'x1' | 'x2' | 'y1' | 'y2'
//! ```
//!
//! Printing and parsing round-trip: `parse(&e.to_string()) == e` for every
//! expression produced by the parser or the constructors below.

use alloc::boxed::Box;
use alloc::format;
use alloc::string::{String, ToString};
use core::fmt;

/// A coordinate symbol. `X1`/`X2` live on the surface; `Y1`/`Y2` are the
/// cotangent fiber coordinates of the extension.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Var {
    X1,
    X2,
    Y1,
    Y2,
}

impl Var {
    pub const ALL: [Var; 4] = [Var::X1, Var::X2, Var::Y1, Var::Y2];

    /// Position of this coordinate in a point vector `(x1, x2, y1, y2)`.
    pub fn index(self) -> usize {
        match self {
            Var::X1 => 0,
            Var::X2 => 1,
            Var::Y1 => 2,
            Var::Y2 => 3,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Var::X1 => "x1",
            Var::X2 => "x2",
            Var::Y1 => "y1",
            Var::Y2 => "y2",
        }
    }

    pub fn from_index(i: usize) -> Var {
        Var::ALL[i]
    }
}

/// Unary elementary functions admitted by the grammar.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Func {
    Exp,
    Log,
    Sin,
    Cos,
    Sqrt,
}

impl Func {
    pub fn name(self) -> &'static str {
        match self {
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Sqrt => "sqrt",
        }
    }
}

/// Expression AST. `Pow` carries a literal real exponent per the grammar;
/// integer exponents admit any base, non-integer exponents require a
/// positive base at evaluation time.
#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Num(f64),
    Var(Var),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Pow(Box<Expr>, f64),
    Func(Func, Box<Expr>),
}

impl Expr {
    pub fn num(v: f64) -> Expr {
        Expr::Num(v)
    }

    pub fn var(v: Var) -> Expr {
        Expr::Var(v)
    }

    pub fn add(a: Expr, b: Expr) -> Expr {
        Expr::Add(Box::new(a), Box::new(b))
    }

    pub fn sub(a: Expr, b: Expr) -> Expr {
        Expr::Sub(Box::new(a), Box::new(b))
    }

    pub fn mul(a: Expr, b: Expr) -> Expr {
        Expr::Mul(Box::new(a), Box::new(b))
    }

    pub fn div(a: Expr, b: Expr) -> Expr {
        Expr::Div(Box::new(a), Box::new(b))
    }

    pub fn neg(a: Expr) -> Expr {
        Expr::Neg(Box::new(a))
    }

    pub fn pow(a: Expr, e: f64) -> Expr {
        Expr::Pow(Box::new(a), e)
    }

    pub fn func(f: Func, a: Expr) -> Expr {
        Expr::Func(f, Box::new(a))
    }

    /// Largest coordinate index referenced, or `None` for a constant
    /// expression. Used to validate 2-variable vs 4-variable contexts.
    pub fn max_var_index(&self) -> Option<usize> {
        match self {
            Expr::Num(_) => None,
            Expr::Var(v) => Some(v.index()),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                match (a.max_var_index(), b.max_var_index()) {
                    (Some(x), Some(y)) => Some(x.max(y)),
                    (x, y) => x.or(y),
                }
            }
            Expr::Neg(a) | Expr::Func(_, a) => a.max_var_index(),
            Expr::Pow(a, _) => a.max_var_index(),
        }
    }

    /// Formal partial derivative with respect to `v`. No simplification is
    /// performed beyond dropping derivatives of constants.
    pub fn derivative(&self, v: Var) -> Expr {
        match self {
            Expr::Num(_) => Expr::Num(0.0),
            Expr::Var(w) => Expr::Num(if *w == v { 1.0 } else { 0.0 }),
            Expr::Add(a, b) => Expr::add(a.derivative(v), b.derivative(v)),
            Expr::Sub(a, b) => Expr::sub(a.derivative(v), b.derivative(v)),
            Expr::Mul(a, b) => Expr::add(
                Expr::mul(a.derivative(v), (**b).clone()),
                Expr::mul((**a).clone(), b.derivative(v)),
            ),
            Expr::Div(a, b) => {
                // (a/b)' = a'/b - a b'/b^2
                Expr::sub(
                    Expr::div(a.derivative(v), (**b).clone()),
                    Expr::div(
                        Expr::mul((**a).clone(), b.derivative(v)),
                        Expr::pow((**b).clone(), 2.0),
                    ),
                )
            }
            Expr::Neg(a) => Expr::neg(a.derivative(v)),
            Expr::Pow(a, e) => Expr::mul(
                Expr::mul(Expr::Num(*e), Expr::pow((**a).clone(), e - 1.0)),
                a.derivative(v),
            ),
            Expr::Func(f, a) => {
                let inner = a.derivative(v);
                let outer = match f {
                    Func::Exp => Expr::func(Func::Exp, (**a).clone()),
                    Func::Log => Expr::div(Expr::Num(1.0), (**a).clone()),
                    Func::Sin => Expr::func(Func::Cos, (**a).clone()),
                    Func::Cos => Expr::neg(Expr::func(Func::Sin, (**a).clone())),
                    Func::Sqrt => Expr::div(
                        Expr::Num(0.5),
                        Expr::func(Func::Sqrt, (**a).clone()),
                    ),
                };
                Expr::mul(outer, inner)
            }
        }
    }

    /// Substitute each coordinate by the expression `subs[var.index()]`.
    pub fn substitute(&self, subs: &[Expr; 4]) -> Expr {
        match self {
            Expr::Num(v) => Expr::Num(*v),
            Expr::Var(v) => subs[v.index()].clone(),
            Expr::Add(a, b) => Expr::add(a.substitute(subs), b.substitute(subs)),
            Expr::Sub(a, b) => Expr::sub(a.substitute(subs), b.substitute(subs)),
            Expr::Mul(a, b) => Expr::mul(a.substitute(subs), b.substitute(subs)),
            Expr::Div(a, b) => Expr::div(a.substitute(subs), b.substitute(subs)),
            Expr::Neg(a) => Expr::neg(a.substitute(subs)),
            Expr::Pow(a, e) => Expr::pow(a.substitute(subs), *e),
            Expr::Func(f, a) => Expr::func(*f, a.substitute(subs)),
        }
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, prec: u8) -> fmt::Result {
        // precedence: add 0, mul 1, unary/pow 2, atom 3
        let my = match self {
            Expr::Add(..) | Expr::Sub(..) => 0,
            Expr::Mul(..) | Expr::Div(..) => 1,
            Expr::Neg(..) | Expr::Pow(..) => 2,
            Expr::Num(_) | Expr::Var(_) | Expr::Func(..) => 3,
        };
        let paren = my < prec;
        if paren {
            write!(f, "(")?;
        }
        match self {
            Expr::Num(v) => {
                if *v < 0.0 || (*v == 0.0 && v.is_sign_negative()) {
                    // negative literal only arises from programmatic
                    // construction; print as a parenthesised negation so the
                    // printer/parser round trip holds
                    write!(f, "(-{})", -*v)?;
                } else {
                    write!(f, "{}", v)?;
                }
            }
            Expr::Var(v) => write!(f, "{}", v.name())?,
            Expr::Add(a, b) => {
                a.fmt_prec(f, 0)?;
                write!(f, " + ")?;
                b.fmt_prec(f, 1)?;
            }
            Expr::Sub(a, b) => {
                a.fmt_prec(f, 0)?;
                write!(f, " - ")?;
                b.fmt_prec(f, 1)?;
            }
            Expr::Mul(a, b) => {
                a.fmt_prec(f, 1)?;
                write!(f, "*")?;
                b.fmt_prec(f, 2)?;
            }
            Expr::Div(a, b) => {
                a.fmt_prec(f, 1)?;
                write!(f, "/")?;
                b.fmt_prec(f, 2)?;
            }
            Expr::Neg(a) => {
                write!(f, "-")?;
                a.fmt_prec(f, 2)?;
            }
            Expr::Pow(a, e) => {
                a.fmt_prec(f, 3)?;
                write!(f, "^{}", e)?;
            }
            Expr::Func(func, a) => {
                write!(f, "{}(", func.name())?;
                a.fmt_prec(f, 0)?;
                write!(f, ")")?;
            }
        }
        if paren {
            write!(f, ")")?;
        }
        Ok(())
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}

impl From<f64> for Expr {
    fn from(v: f64) -> Expr {
        if v < 0.0 {
            Expr::neg(Expr::Num(-v))
        } else {
            Expr::Num(v)
        }
    }
}

impl From<Var> for Expr {
    fn from(v: Var) -> Expr {
        Expr::Var(v)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParseErrorKind {
    UnexpectedChar(char),
    UnexpectedEnd,
    UnknownIdentifier(String),
    ArityMismatch(String),
    BadNumber,
    TrailingInput,
}

/// Parse failure with the byte offset of the offending input.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub offset: usize,
    pub kind: ParseErrorKind,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            ParseErrorKind::UnexpectedChar(c) => {
                write!(f, "unexpected character '{}' at byte {}", c, self.offset)
            }
            ParseErrorKind::UnexpectedEnd => {
                write!(f, "unexpected end of input at byte {}", self.offset)
            }
            ParseErrorKind::UnknownIdentifier(s) => {
                write!(f, "unknown identifier '{}' at byte {}", s, self.offset)
            }
            ParseErrorKind::ArityMismatch(s) => {
                write!(f, "function '{}' takes one argument (byte {})", s, self.offset)
            }
            ParseErrorKind::BadNumber => write!(f, "malformed number at byte {}", self.offset),
            ParseErrorKind::TrailingInput => {
                write!(f, "trailing input at byte {}", self.offset)
            }
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for ParseError {}

struct Parser<'a> {
    src: &'a str,
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        Parser {
            src,
            bytes: src.as_bytes(),
            pos: 0,
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

    fn err(&self, kind: ParseErrorKind) -> ParseError {
        ParseError {
            offset: self.pos,
            kind,
        }
    }

    fn expect(&mut self, c: u8) -> Result<(), ParseError> {
        match self.peek() {
            Some(b) if b == c => {
                self.pos += 1;
                Ok(())
            }
            Some(b) => Err(self.err(ParseErrorKind::UnexpectedChar(b as char))),
            None => Err(self.err(ParseErrorKind::UnexpectedEnd)),
        }
    }

    fn parse_expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.parse_term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    let rhs = self.parse_term()?;
                    lhs = Expr::add(lhs, rhs);
                }
                Some(b'-') => {
                    self.pos += 1;
                    let rhs = self.parse_term()?;
                    lhs = Expr::sub(lhs, rhs);
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn parse_term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.parse_factor()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    let rhs = self.parse_factor()?;
                    lhs = Expr::mul(lhs, rhs);
                }
                Some(b'/') => {
                    self.pos += 1;
                    let rhs = self.parse_factor()?;
                    lhs = Expr::div(lhs, rhs);
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn parse_factor(&mut self) -> Result<Expr, ParseError> {
        if self.peek() == Some(b'-') {
            self.pos += 1;
            let inner = self.parse_factor()?;
            return Ok(Expr::neg(inner));
        }
        let base = self.parse_base()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let exp = self.parse_signed_number()?;
            return Ok(Expr::pow(base, exp));
        }
        Ok(base)
    }

    fn parse_signed_number(&mut self) -> Result<f64, ParseError> {
        let neg = if self.peek() == Some(b'-') {
            self.pos += 1;
            true
        } else {
            if self.peek() == Some(b'+') {
                self.pos += 1;
            }
            false
        };
        let v = self.parse_number()?;
        Ok(if neg { -v } else { v })
    }

    fn parse_number(&mut self) -> Result<f64, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos < self.bytes.len() && self.bytes[self.pos] == b'.' {
            self.pos += 1;
            while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
        }
        if self.pos == start {
            return Err(self.err(ParseErrorKind::BadNumber));
        }
        if self.pos < self.bytes.len() && (self.bytes[self.pos] | 0x20) == b'e' {
            let mark = self.pos;
            self.pos += 1;
            if self.pos < self.bytes.len()
                && (self.bytes[self.pos] == b'+' || self.bytes[self.pos] == b'-')
            {
                self.pos += 1;
            }
            let digits = self.pos;
            while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            if self.pos == digits {
                // not an exponent after all, e.g. an identifier follows
                self.pos = mark;
            }
        }
        self.src[start..self.pos]
            .parse::<f64>()
            .map_err(|_| ParseError {
                offset: start,
                kind: ParseErrorKind::BadNumber,
            })
    }

    fn parse_base(&mut self) -> Result<Expr, ParseError> {
        match self.peek() {
            None => Err(self.err(ParseErrorKind::UnexpectedEnd)),
            Some(b'(') => {
                self.pos += 1;
                let e = self.parse_expr()?;
                self.expect(b')')?;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => {
                let v = self.parse_number()?;
                Ok(Expr::Num(v))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.bytes.len()
                    && (self.bytes[self.pos].is_ascii_alphanumeric() || self.bytes[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let ident = &self.src[start..self.pos];
                for v in Var::ALL {
                    if ident == v.name() {
                        return Ok(Expr::Var(v));
                    }
                }
                let func = match ident {
                    "exp" => Some(Func::Exp),
                    "log" => Some(Func::Log),
                    "sin" => Some(Func::Sin),
                    "cos" => Some(Func::Cos),
                    "sqrt" => Some(Func::Sqrt),
                    _ => None,
                };
                match func {
                    Some(f) => {
                        self.expect(b'(')?;
                        let arg = self.parse_expr()?;
                        if self.peek() == Some(b',') {
                            return Err(ParseError {
                                offset: self.pos,
                                kind: ParseErrorKind::ArityMismatch(ident.to_string()),
                            });
                        }
                        self.expect(b')')?;
                        Ok(Expr::func(f, arg))
                    }
                    None => Err(ParseError {
                        offset: start,
                        kind: ParseErrorKind::UnknownIdentifier(ident.to_string()),
                    }),
                }
            }
            Some(c) => Err(self.err(ParseErrorKind::UnexpectedChar(c as char))),
        }
    }
}

/// Parse an expression string.
pub fn parse_expr(text: &str) -> Result<Expr, ParseError> {
    let mut p = Parser::new(text);
    let e = p.parse_expr()?;
    if p.peek().is_some() {
        return Err(p.err(ParseErrorKind::TrailingInput));
    }
    Ok(e)
}

/// Shorthand for tests and catalog construction; panics on parse failure.
pub fn expr(text: &str) -> Expr {
    match parse_expr(text) {
        Ok(e) => e,
        Err(err) => panic!("bad expression {:?}: {}", text, format!("{}", err)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_polynomial() {
        let e = parse_expr("x1^2 * x2").unwrap();
        assert_eq!(
            e,
            Expr::mul(Expr::pow(Expr::var(Var::X1), 2.0), Expr::var(Var::X2))
        );
    }

    #[test]
    fn parses_exp_of_linear() {
        let e = parse_expr("exp(-x1 + 3*x2)").unwrap();
        assert_eq!(
            e,
            Expr::func(
                Func::Exp,
                Expr::add(
                    Expr::neg(Expr::var(Var::X1)),
                    Expr::mul(Expr::Num(3.0), Expr::var(Var::X2))
                )
            )
        );
    }

    #[test]
    fn rejects_unknown_identifier() {
        let err = parse_expr("foo(x1)").unwrap_err();
        assert_eq!(err.offset, 0);
        assert!(matches!(err.kind, ParseErrorKind::UnknownIdentifier(_)));
    }

    #[test]
    fn rejects_arity_mismatch() {
        let err = parse_expr("exp(x1, x2)").unwrap_err();
        assert!(matches!(err.kind, ParseErrorKind::ArityMismatch(_)));
    }

    #[test]
    fn reports_syntax_error_offset() {
        let err = parse_expr("x1 + $").unwrap_err();
        assert_eq!(err.offset, 5);
    }

    #[test]
    fn roundtrips() {
        for src in [
            "x1^2*x2",
            "exp(-x1 + 3*x2)",
            "1/(x1 - 2)",
            "-x1^-2",
            "sqrt(x1)*cos(x2) - sin(x1*x2)",
            "x1^0.5 + 2.25e-3",
            "(x1 + x2)*(y1 - y2)",
            "log(x1)/x1",
        ] {
            let e = parse_expr(src).unwrap();
            let printed = e.to_string();
            let back = parse_expr(&printed).unwrap();
            assert_eq!(e, back, "roundtrip failed for {} -> {}", src, printed);
        }
    }

    #[test]
    fn derivative_of_product() {
        let e = parse_expr("x1^2*x2").unwrap();
        let d = e.derivative(Var::X1);
        // 2*x1*x2 once evaluated
        let p = [2.0, 3.0];
        let val = crate::jet::eval_jet(&d, &p, 0).unwrap().value();
        assert!((val - 12.0).abs() < 1e-12);
    }

    #[test]
    fn max_var_index() {
        assert_eq!(parse_expr("3").unwrap().max_var_index(), None);
        assert_eq!(parse_expr("x2 + 1").unwrap().max_var_index(), Some(1));
        assert_eq!(parse_expr("y2*x1").unwrap().max_var_index(), Some(3));
    }
}
