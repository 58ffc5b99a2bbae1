//! Scalar expressions in the variables `t` and `z`.
//!
//! Grammar, loosest binding first:
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*
//! unary   := '-' unary | power
//! power   := primary ('^' exponent)?
//! exponent:= '-' exponent | power
//! primary := NUMBER | 't' | 'z' | NAME '(' expr ')' | '(' expr ')'
//! ```
//!
//! `^` is right-associative and binds tighter than unary minus, so `-2^2`
//! is `-4`, while `2^-1` is still accepted. The minus sign may be written
//! as ASCII `-` or as U+2212.

use std::fmt;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Var {
    T,
    Z,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinaryOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Sin,
    Cos,
    Exp,
    Ln,
    Abs,
    Sqrt,
}

impl Func {
    pub const ALL: [Func; 6] = [Func::Sin, Func::Cos, Func::Exp, Func::Ln, Func::Abs, Func::Sqrt];

    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Exp => "exp",
            Func::Ln => "ln",
            Func::Abs => "abs",
            Func::Sqrt => "sqrt",
        }
    }

    fn from_name(name: &str) -> Option<Func> {
        Func::ALL.into_iter().find(|f| f.name() == name)
    }

    fn apply(self, x: f64) -> f64 {
        match self {
            Func::Sin => x.sin(),
            Func::Cos => x.cos(),
            Func::Exp => x.exp(),
            Func::Ln => x.ln(),
            Func::Abs => x.abs(),
            Func::Sqrt => x.sqrt(),
        }
    }
}

/// Parsed expression tree.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Number(f64),
    Var(Var),
    Neg(Box<Expr>),
    Binary(BinaryOp, Box<Expr>, Box<Expr>),
    Call(Func, Box<Expr>),
}

impl Expr {
    pub fn binary(op: BinaryOp, lhs: Expr, rhs: Expr) -> Expr {
        Expr::Binary(op, Box::new(lhs), Box::new(rhs))
    }

    /// Evaluates at `(t, z)`. Any non-finite intermediate value is an error.
    pub fn eval(&self, t: f64, z: f64) -> Result<f64> {
        let v = match self {
            Expr::Number(x) => *x,
            Expr::Var(Var::T) => t,
            Expr::Var(Var::Z) => z,
            Expr::Neg(e) => -e.eval(t, z)?,
            Expr::Binary(op, l, r) => {
                let x = l.eval(t, z)?;
                let y = r.eval(t, z)?;
                match op {
                    BinaryOp::Add => x + y,
                    BinaryOp::Sub => x - y,
                    BinaryOp::Mul => x * y,
                    BinaryOp::Div => {
                        if y == 0.0 {
                            return Err(Error::Eval(format!("division by zero in `{self}`")));
                        }
                        x / y
                    }
                    BinaryOp::Pow => power(x, y)?,
                }
            }
            Expr::Call(func, arg) => {
                let x = arg.eval(t, z)?;
                if *func == Func::Ln && x <= 0.0 {
                    return Err(Error::Eval(format!("ln of non-positive value {x}")));
                }
                if *func == Func::Sqrt && x < 0.0 {
                    return Err(Error::Eval(format!("sqrt of negative value {x}")));
                }
                func.apply(x)
            }
        };
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::Eval(format!("`{self}` at t = {t}, z = {z}")))
        }
    }

    /// True when `z` occurs anywhere in the tree.
    pub fn depends_on_z(&self) -> bool {
        match self {
            Expr::Number(_) | Expr::Var(Var::T) => false,
            Expr::Var(Var::Z) => true,
            Expr::Neg(e) | Expr::Call(_, e) => e.depends_on_z(),
            Expr::Binary(_, l, r) => l.depends_on_z() || r.depends_on_z(),
        }
    }

    /// True when the tree is the literal constant zero (`0`, `-0`, `0*...`
    /// is not recognised).
    pub fn is_zero(&self) -> bool {
        match self {
            Expr::Number(x) => *x == 0.0,
            Expr::Neg(e) => e.is_zero(),
            _ => false,
        }
    }
}

fn power(x: f64, p: f64) -> Result<f64> {
    if x == 0.0 && p < 0.0 {
        return Err(Error::Eval(format!("0 raised to negative power {p}")));
    }
    if x < 0.0 {
        if p.fract() != 0.0 {
            return Err(Error::Eval(format!("negative base {x} with non-integer exponent {p}")));
        }
        if p.abs() <= i32::MAX as f64 {
            return Ok(x.powi(p as i32));
        }
    }
    Ok(x.powf(p))
}

/// Fully parenthesised rendering; re-parsing it yields an equivalent tree.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Number(x) if x.is_sign_negative() => write!(f, "(-{})", -x),
            Expr::Number(x) => write!(f, "{x}"),
            Expr::Var(Var::T) => f.write_str("t"),
            Expr::Var(Var::Z) => f.write_str("z"),
            Expr::Neg(e) => write!(f, "(-{e})"),
            Expr::Binary(op, l, r) => {
                let sym = match op {
                    BinaryOp::Add => '+',
                    BinaryOp::Sub => '-',
                    BinaryOp::Mul => '*',
                    BinaryOp::Div => '/',
                    BinaryOp::Pow => '^',
                };
                write!(f, "({l} {sym} {r})")
            }
            Expr::Call(func, arg) => write!(f, "{}({arg})", func.name()),
        }
    }
}

impl std::str::FromStr for Expr {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse(s)
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Num(x) => format!("number {x}"),
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Plus => "`+`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Star => "`*`".into(),
            Tok::Slash => "`/`".into(),
            Tok::Caret => "`^`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::End => "end of input".into(),
        }
    }
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let simple = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
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
        if let Some(tok) = simple {
            out.push((tok, start));
            i += 1;
            continue;
        }
        if src[i..].starts_with('\u{2212}') {
            out.push((Tok::Minus, start));
            i += '\u{2212}'.len_utf8();
            continue;
        }
        if c.is_ascii_digit() || c == b'.' {
            while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
                i += 1;
            }
            if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                let mut j = i + 1;
                if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                    j += 1;
                }
                if j < bytes.len() && bytes[j].is_ascii_digit() {
                    while j < bytes.len() && bytes[j].is_ascii_digit() {
                        j += 1;
                    }
                    i = j;
                }
            }
            let text = &src[start..i];
            let value = text.parse::<f64>().map_err(|_| Error::Syntax {
                offset: start,
                expected: format!("a valid number, found `{text}`"),
            })?;
            out.push((Tok::Num(value), start));
            continue;
        }
        if c.is_ascii_alphabetic() || c == b'_' {
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push((Tok::Ident(src[start..i].to_string()), start));
            continue;
        }
        let ch = src[i..].chars().next().unwrap_or('?');
        return Err(Error::Syntax { offset: start, expected: format!("a token, found `{ch}`") });
    }
    out.push((Tok::End, src.len()));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn fail<T>(&self, expected: &str) -> Result<T> {
        Err(Error::Syntax {
            offset: self.offset(),
            expected: format!("{expected}, found {}", self.peek().describe()),
        })
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<()> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            self.fail(what)
        }
    }

    // Binding powers: +,- = 1; *,/ = 2; unary minus = 3; ^ = 4.
    fn expr(&mut self, min_bp: u8) -> Result<Expr> {
        let mut lhs = self.prefix()?;
        loop {
            let (op, bp) = match self.peek() {
                Tok::Plus => (BinaryOp::Add, 1),
                Tok::Minus => (BinaryOp::Sub, 1),
                Tok::Star => (BinaryOp::Mul, 2),
                Tok::Slash => (BinaryOp::Div, 2),
                Tok::Caret => (BinaryOp::Pow, 4),
                Tok::RParen | Tok::End => break,
                _ => return self.fail("an operator, `)` or end of input"),
            };
            if bp < min_bp {
                break;
            }
            self.bump();
            // right-associative ^ re-enters at its own power; the exponent
            // may carry its own leading minus
            let rhs = if op == BinaryOp::Pow { self.expr(bp)? } else { self.expr(bp + 1)? };
            lhs = Expr::binary(op, lhs, rhs);
        }
        Ok(lhs)
    }

    fn prefix(&mut self) -> Result<Expr> {
        let offset = self.offset();
        match self.bump() {
            Tok::Minus => {
                // operand binds everything tighter than unary minus, i.e. ^
                let operand = self.expr(4)?;
                Ok(Expr::Neg(Box::new(operand)))
            }
            Tok::Num(x) => Ok(Expr::Number(x)),
            Tok::LParen => {
                let inner = self.expr(0)?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(inner)
            }
            Tok::Ident(name) => match name.as_str() {
                "t" => Ok(Expr::Var(Var::T)),
                "z" => Ok(Expr::Var(Var::Z)),
                _ => {
                    let Some(func) = Func::from_name(&name) else {
                        return Err(Error::UnknownIdentifier { name, offset });
                    };
                    self.expect(Tok::LParen, &format!("`(` after `{}`", func.name()))?;
                    let arg = self.expr(0)?;
                    self.expect(Tok::RParen, "`)`")?;
                    Ok(Expr::Call(func, Box::new(arg)))
                }
            },
            tok => Err(Error::Syntax {
                offset,
                expected: format!("a number, variable, function or `(`, found {}", tok.describe()),
            }),
        }
    }
}

/// Parses `text` into an expression tree.
pub fn parse(text: &str) -> Result<Expr> {
    let toks = lex(text)?;
    let mut p = Parser { toks, pos: 0 };
    let e = p.expr(0)?;
    if *p.peek() != Tok::End {
        return p.fail("end of input");
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ev(s: &str, t: f64, z: f64) -> f64 {
        parse(s).unwrap().eval(t, z).unwrap()
    }

    #[test]
    fn precedence_and_associativity() {
        assert_eq!(ev("2+3*4", 0.0, 0.0), 14.0);
        assert_eq!(ev("2^3^2", 0.0, 0.0), 512.0);
        assert_eq!(ev("(2+3)*4", 0.0, 0.0), 20.0);
        assert_eq!(ev("-2^2", 0.0, 0.0), -4.0);
        assert_eq!(ev("2^-1", 0.0, 0.0), 0.5);
        assert_eq!(ev("2*-3", 0.0, 0.0), -6.0);
        assert_eq!(ev("8/4/2", 0.0, 0.0), 1.0);
        assert_eq!(ev("10-4-3", 0.0, 0.0), 3.0);
        assert_eq!(ev("\u{2212}t + 1", 3.0, 0.0), -2.0);
        assert_eq!(ev("1.5e2 + 2E-1", 0.0, 0.0), 150.2);
    }

    #[test]
    fn worked_right_hand_side() {
        let f = "t^(-1/6) + (1/16)*t^(5/6)*sin(z)";
        assert!((ev(f, 1.0, 0.0) - 1.0).abs() < 1e-15);
        assert!(parse(f).unwrap().depends_on_z());
        assert!(!parse("t^(-1/6)").unwrap().depends_on_z());
    }

    #[test]
    fn evaluation() {
        assert!((ev("t^(-1/6)", 64.0, 0.0) - 0.5).abs() < 1e-15);
        assert_eq!(ev("abs(z)", 0.3, -2.0), 2.0);
        assert_eq!(ev("(-2)^3", 0.0, 0.0), -8.0);
        assert_eq!(ev("z^2", 0.0, -3.0), 9.0);
        assert!((ev("exp(ln(t)) + sqrt(4) + cos(0)", 2.5, 0.0) - 5.5).abs() < 1e-14);
    }

    #[test]
    fn evaluation_errors() {
        for (s, t, z) in [
            ("ln(t)", 0.0, 0.0),
            ("1/z", 1.0, 0.0),
            ("t^(-1)", 0.0, 0.0),
            ("z^0.5", 1.0, -1.0),
            ("sqrt(z)", 1.0, -1.0),
            ("exp(1000)", 0.0, 0.0),
        ] {
            let e = parse(s).unwrap();
            assert!(matches!(e.eval(t, z), Err(Error::Eval(_))), "{s}");
        }
    }

    #[test]
    fn syntax_errors_carry_offsets() {
        match parse("1 + * 2") {
            Err(Error::Syntax { offset, .. }) => assert_eq!(offset, 4),
            other => panic!("{other:?}"),
        }
        match parse("sin(t) + foo(z)") {
            Err(Error::UnknownIdentifier { name, offset }) => {
                assert_eq!(name, "foo");
                assert_eq!(offset, 9);
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse("x"), Err(Error::UnknownIdentifier { .. })));
    }

    #[test]
    fn display_reparses() {
        let e = parse("-t^2 / (1 + z) - sin(-z)").unwrap();
        let again = parse(&e.to_string()).unwrap();
        assert_eq!(e, again);
    }
}
