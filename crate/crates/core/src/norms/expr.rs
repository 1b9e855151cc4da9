//! Arithmetic expressions over coordinates `x1..xn`.
//!
//! Grammar (`^` binds tighter than unary minus, which binds tighter than
//! `*` and `/`; `^` is right-associative):
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*
//! unary   := '-' unary | power
//! power   := primary ('^' unary)?
//! primary := number | x<k> | func '(' expr (',' expr)* ')' | '(' expr ')'
//! func    := abs | sqrt | max | min
//! ```

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::base::Vector;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Func {
    Abs,
    Sqrt,
    Max,
    Min,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum Expr {
    Num(f64),
    /// Zero-based coordinate index.
    Var(usize),
    Neg(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
    Call(Func, Vec<Expr>),
}

/// A parsed expression bound to an ambient dimension.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExpressionAst {
    pub source: String,
    pub dim: usize,
    pub root: Expr,
}

impl ExpressionAst {
    pub fn eval(&self, x: &Vector) -> Result<f64> {
        x.check_dim(self.dim)?;
        self.root.eval(x.as_slice())
    }
}

impl fmt::Display for ExpressionAst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.root.fmt(f)
    }
}

impl Expr {
    pub fn eval(&self, x: &[f64]) -> Result<f64> {
        let v = match self {
            Expr::Num(c) => *c,
            Expr::Var(i) => x[*i],
            Expr::Neg(a) => -a.eval(x)?,
            Expr::Bin(op, a, b) => {
                let (a, b) = (a.eval(x)?, b.eval(x)?);
                match op {
                    BinOp::Add => a + b,
                    BinOp::Sub => a - b,
                    BinOp::Mul => a * b,
                    BinOp::Div => {
                        if b == 0.0 {
                            return Err(self.domain("division by zero"));
                        }
                        a / b
                    }
                    BinOp::Pow => a.powf(b),
                }
            }
            Expr::Call(func, args) => {
                let vals = args.iter().map(|a| a.eval(x)).collect::<Result<Vec<_>>>()?;
                match func {
                    Func::Abs => vals[0].abs(),
                    Func::Sqrt => {
                        if vals[0] < 0.0 {
                            return Err(
                                self.domain(&format!("square root of negative value {}", vals[0]))
                            );
                        }
                        vals[0].sqrt()
                    }
                    Func::Max => vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max),
                    Func::Min => vals.iter().cloned().fold(f64::INFINITY, f64::min),
                }
            }
        };
        if v.is_finite() {
            Ok(v)
        } else {
            Err(self.domain("non-finite result"))
        }
    }

    fn domain(&self, message: &str) -> Error {
        Error::Domain {
            term: self.to_string(),
            message: message.to_string(),
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(c) => write!(f, "{c}"),
            Expr::Var(i) => write!(f, "x{}", i + 1),
            Expr::Neg(a) => write!(f, "-({a})"),
            Expr::Bin(op, a, b) => {
                let s = match op {
                    BinOp::Add => "+",
                    BinOp::Sub => "-",
                    BinOp::Mul => "*",
                    BinOp::Div => "/",
                    BinOp::Pow => "^",
                };
                write!(f, "({a} {s} {b})")
            }
            Expr::Call(func, args) => {
                let name = match func {
                    Func::Abs => "abs",
                    Func::Sqrt => "sqrt",
                    Func::Max => "max",
                    Func::Min => "min",
                };
                write!(f, "{name}(")?;
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

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Sym(char),
    End,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(source: &str) -> Result<Vec<Token>> {
    let chars: Vec<char> = source.chars().collect();
    let mut out = Vec::new();
    let (mut line, mut col) = (1, 1);
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let (l0, c0) = (line, col);
        if c == '\n' {
            line += 1;
            col = 1;
            i += 1;
            continue;
        }
        if c.is_whitespace() {
            col += 1;
            i += 1;
            continue;
        }
        if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                let mut j = i + 1;
                if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                    j += 1;
                }
                if j < chars.len() && chars[j].is_ascii_digit() {
                    i = j;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                }
            }
            let text: String = chars[start..i].iter().collect();
            let v: f64 = text.parse().map_err(|_| Error::Parse {
                line: l0,
                column: c0,
                message: format!("malformed number `{text}`"),
            })?;
            col += i - start;
            out.push(Token {
                tok: Tok::Num(v),
                line: l0,
                column: c0,
            });
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            col += i - start;
            out.push(Token {
                tok: Tok::Ident(chars[start..i].iter().collect()),
                line: l0,
                column: c0,
            });
            continue;
        }
        if "+-*/^(),".contains(c) {
            out.push(Token {
                tok: Tok::Sym(c),
                line: l0,
                column: c0,
            });
            col += 1;
            i += 1;
            continue;
        }
        return Err(Error::Parse {
            line: l0,
            column: c0,
            message: format!("unexpected character `{c}`"),
        });
    }
    out.push(Token {
        tok: Tok::End,
        line,
        column: col,
    });
    Ok(out)
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    dim: usize,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, t: &Token, message: impl Into<String>) -> Error {
        Error::Parse {
            line: t.line,
            column: t.column,
            message: message.into(),
        }
    }

    fn is_sym(&self, c: char) -> bool {
        self.peek().tok == Tok::Sym(c)
    }

    fn expect(&mut self, c: char) -> Result<()> {
        let t = self.bump();
        if t.tok == Tok::Sym(c) {
            Ok(())
        } else {
            Err(self.error(&t, format!("expected `{c}`, found {}", describe(&t.tok))))
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        while self.is_sym('+') || self.is_sym('-') {
            let op = if self.bump().tok == Tok::Sym('+') {
                BinOp::Add
            } else {
                BinOp::Sub
            };
            let rhs = self.term()?;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        while self.is_sym('*') || self.is_sym('/') {
            let op = if self.bump().tok == Tok::Sym('*') {
                BinOp::Mul
            } else {
                BinOp::Div
            };
            let rhs = self.unary()?;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.is_sym('-') {
            self.bump();
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.primary()?;
        if self.is_sym('^') {
            self.bump();
            let exp = self.unary()?;
            return Ok(Expr::Bin(BinOp::Pow, Box::new(base), Box::new(exp)));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Expr> {
        let t = self.bump();
        match &t.tok {
            Tok::Num(v) => Ok(Expr::Num(*v)),
            Tok::Sym('(') => {
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Tok::Ident(name) => {
                if let Some(idx) = name
                    .strip_prefix('x')
                    .filter(|s| !s.is_empty() && s.chars().all(|c| c.is_ascii_digit()))
                {
                    let k: usize = idx
                        .parse()
                        .map_err(|_| self.error(&t, format!("bad coordinate `{name}`")))?;
                    if k == 0 || k > self.dim {
                        return Err(self.error(
                            &t,
                            format!("coordinate `{name}` out of range (dimension {})", self.dim),
                        ));
                    }
                    return Ok(Expr::Var(k - 1));
                }
                let func = match name.as_str() {
                    "abs" => Func::Abs,
                    "sqrt" => Func::Sqrt,
                    "max" => Func::Max,
                    "min" => Func::Min,
                    _ => return Err(self.error(&t, format!("unknown identifier `{name}`"))),
                };
                self.expect('(')?;
                let mut args = vec![self.expr()?];
                while self.is_sym(',') {
                    self.bump();
                    args.push(self.expr()?);
                }
                self.expect(')')?;
                let ok = match func {
                    Func::Abs | Func::Sqrt => args.len() == 1,
                    Func::Max | Func::Min => args.len() >= 2,
                };
                if !ok {
                    return Err(self.error(
                        &t,
                        format!("wrong number of arguments to `{name}` ({})", args.len()),
                    ));
                }
                Ok(Expr::Call(func, args))
            }
            other => Err(self.error(&t, format!("unexpected {}", describe(other)))),
        }
    }
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Num(v) => format!("number `{v}`"),
        Tok::Ident(s) => format!("identifier `{s}`"),
        Tok::Sym(c) => format!("`{c}`"),
        Tok::End => "end of input".to_string(),
    }
}

pub fn parse_expression(source: &str, dim: usize) -> Result<ExpressionAst> {
    if dim == 0 {
        return Err(Error::Input("expression dimension must be positive".into()));
    }
    if source.trim().is_empty() {
        return Err(Error::Parse {
            line: 1,
            column: 1,
            message: "empty expression".into(),
        });
    }
    let toks = lex(source)?;
    let mut p = Parser { toks, pos: 0, dim };
    let root = p.expr()?;
    let t = p.peek().clone();
    if t.tok != Tok::End {
        return Err(p.error(
            &t,
            format!("unexpected {} after expression", describe(&t.tok)),
        ));
    }
    Ok(ExpressionAst {
        source: source.to_string(),
        dim,
        root,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ev(src: &str, x: &[f64]) -> f64 {
        parse_expression(src, x.len())
            .unwrap()
            .eval(&Vector::from_slice(x).unwrap())
            .unwrap()
    }

    #[test]
    fn textbook_style_formulas_parse() {
        parse_expression("max(0, sqrt(2*(x1^2+x2^2)) - 2*x2)", 2).unwrap();
        parse_expression("(x1^2+x2^2)/(2*x1)", 2).unwrap();
        assert_eq!(ev("(x1^2+x2^2)/(2*x1)", &[1.0, 1.0]), 1.0);
    }

    #[test]
    fn out_of_range_coordinate() {
        match parse_expression("x3", 2) {
            Err(Error::Parse {
                line,
                column,
                message,
            }) => {
                assert_eq!((line, column), (1, 1));
                assert!(message.contains("x3"));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn precedence_and_associativity() {
        assert_eq!(ev("-2^2", &[0.0]), -4.0);
        assert_eq!(ev("2^3^2", &[0.0]), 512.0);
        assert_eq!(ev("2^-1", &[0.0]), 0.5);
        assert_eq!(ev("8/4/2", &[0.0]), 1.0);
        assert_eq!(ev("1-2-3", &[0.0]), -4.0);
        assert_eq!(ev("1+2*3", &[0.0]), 7.0);
        assert_eq!(ev("min(3, x1, 5)", &[-1.0]), -1.0);
        assert_eq!(ev("1.5e1 + .5", &[0.0]), 15.5);
    }

    #[test]
    fn errors_carry_locations() {
        match parse_expression("x1 +\n  foo(x1)", 1) {
            Err(Error::Parse { line, column, .. }) => assert_eq!((line, column), (2, 3)),
            other => panic!("{other:?}"),
        }
        assert!(parse_expression("(x1", 1).is_err());
        assert!(parse_expression("x1 x1", 1).is_err());
        assert!(parse_expression("sqrt(x1, x1)", 1).is_err());
        assert!(parse_expression("", 1).is_err());
        assert!(parse_expression("x1 $", 1).is_err());
    }

    #[test]
    fn domain_errors_name_the_subterm() {
        let e = parse_expression("1 + sqrt(x1)", 1).unwrap();
        match e.eval(&Vector::from_slice(&[-1.0]).unwrap()) {
            Err(Error::Domain { term, .. }) => assert_eq!(term, "sqrt(x1)"),
            other => panic!("{other:?}"),
        }
        let e = parse_expression("1/x1", 1).unwrap();
        assert!(matches!(
            e.eval(&Vector::from_slice(&[0.0]).unwrap()),
            Err(Error::Domain { .. })
        ));
    }
}
