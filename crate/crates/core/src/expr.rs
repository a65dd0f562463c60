//! Closed-form profile expressions `ξ ↦ f(x, ξ)` and their parser.
//!
//! Grammar (precedence low to high):
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' unary)?
//! atom   := number | 'inf' | variable | func '(' expr (',' expr)* ')'
//!         | '(' expr ')' | '|' expr '|'
//! ```
//!
//! Variables: `x` (alias `x1`), `x2`, `xi` (alias `xi1`, also `ξ`), `xi2`,
//! and `nxi` for the euclidean norm `|ξ|`. Functions: `abs`, `min`, `max`,
//! `pow`, `sqrt`, `sin`, `cos`, `exp`. The unicode operators `×`, `÷` and
//! `−` are accepted.

use alloc::boxed::Box;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::ops;

use crate::num;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Var {
    X1,
    X2,
    Xi1,
    Xi2,
    NormXi,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Abs,
    Min,
    Max,
    Sqrt,
    Sin,
    Cos,
    Exp,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(f64),
    Var(Var),
    Neg(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
    Call(Func, Vec<Expr>),
}

impl Expr {
    pub fn c(v: f64) -> Expr {
        Expr::Const(v)
    }

    pub fn xi() -> Expr {
        Expr::Var(Var::Xi1)
    }

    pub fn xi2() -> Expr {
        Expr::Var(Var::Xi2)
    }

    pub fn x() -> Expr {
        Expr::Var(Var::X1)
    }

    pub fn norm_xi() -> Expr {
        Expr::Var(Var::NormXi)
    }

    pub fn abs(self) -> Expr {
        Expr::Call(Func::Abs, alloc::vec![self])
    }

    pub fn sqrt(self) -> Expr {
        Expr::Call(Func::Sqrt, alloc::vec![self])
    }

    pub fn max(self, other: Expr) -> Expr {
        Expr::Call(Func::Max, alloc::vec![self, other])
    }

    pub fn min(self, other: Expr) -> Expr {
        Expr::Call(Func::Min, alloc::vec![self, other])
    }

    pub fn pow(self, e: Expr) -> Expr {
        Expr::Bin(BinOp::Pow, Box::new(self), Box::new(e))
    }

    pub fn eval(&self, x: [f64; 2], xi: [f64; 2]) -> f64 {
        match self {
            Expr::Const(v) => *v,
            Expr::Var(v) => match v {
                Var::X1 => x[0],
                Var::X2 => x[1],
                Var::Xi1 => xi[0],
                Var::Xi2 => xi[1],
                Var::NormXi => num::norm(xi),
            },
            Expr::Neg(a) => -a.eval(x, xi),
            Expr::Bin(op, a, b) => {
                let (a, b) = (a.eval(x, xi), b.eval(x, xi));
                match op {
                    BinOp::Add => a + b,
                    BinOp::Sub => a - b,
                    BinOp::Mul => a * b,
                    BinOp::Div => a / b,
                    BinOp::Pow => num::powf(a, b),
                }
            }
            Expr::Call(func, args) => match func {
                Func::Abs => args[0].eval(x, xi).abs(),
                Func::Sqrt => num::sqrt(args[0].eval(x, xi)),
                Func::Sin => libm::sin(args[0].eval(x, xi)),
                Func::Cos => libm::cos(args[0].eval(x, xi)),
                Func::Exp => libm::exp(args[0].eval(x, xi)),
                Func::Min => args
                    .iter()
                    .map(|a| a.eval(x, xi))
                    .fold(f64::INFINITY, f64::min),
                Func::Max => args
                    .iter()
                    .map(|a| a.eval(x, xi))
                    .fold(f64::NEG_INFINITY, f64::max),
            },
        }
    }

    /// True when the expression reads `x1` or `x2`.
    pub fn depends_on_x(&self) -> bool {
        self.any_var(&|v| matches!(v, Var::X1 | Var::X2))
    }

    /// True when the expression reads `ξ` in any form.
    pub fn depends_on_xi(&self) -> bool {
        self.any_var(&|v| matches!(v, Var::Xi1 | Var::Xi2 | Var::NormXi))
    }

    pub fn uses_second_axis(&self) -> bool {
        self.any_var(&|v| matches!(v, Var::X2 | Var::Xi2))
    }

    fn any_var(&self, pred: &dyn Fn(Var) -> bool) -> bool {
        match self {
            Expr::Const(_) => false,
            Expr::Var(v) => pred(*v),
            Expr::Neg(a) => a.any_var(pred),
            Expr::Bin(_, a, b) => a.any_var(pred) || b.any_var(pred),
            Expr::Call(_, args) => args.iter().any(|a| a.any_var(pred)),
        }
    }

    /// Substitutes `ξ ↦ ξ + shift` everywhere.
    pub fn shift_xi(&self, shift: [f64; 2]) -> Expr {
        if shift == [0.0, 0.0] {
            return self.clone();
        }
        let s1 = Expr::xi() + Expr::c(shift[0]);
        let s2 = Expr::xi2() + Expr::c(shift[1]);
        self.substitute(&|v| match v {
            Var::Xi1 => Some(s1.clone()),
            Var::Xi2 => Some(s2.clone()),
            Var::NormXi => {
                Some((s1.clone().pow(Expr::c(2.0)) + s2.clone().pow(Expr::c(2.0))).sqrt())
            }
            _ => None,
        })
    }

    fn substitute(&self, map: &dyn Fn(Var) -> Option<Expr>) -> Expr {
        match self {
            Expr::Const(v) => Expr::Const(*v),
            Expr::Var(v) => map(*v).unwrap_or(Expr::Var(*v)),
            Expr::Neg(a) => Expr::Neg(Box::new(a.substitute(map))),
            Expr::Bin(op, a, b) => Expr::Bin(
                *op,
                Box::new(a.substitute(map)),
                Box::new(b.substitute(map)),
            ),
            Expr::Call(f, args) => Expr::Call(*f, args.iter().map(|a| a.substitute(map)).collect()),
        }
    }

    pub fn parse(src: &str) -> Result<Expr, ParseError> {
        let tokens = lex(src)?;
        let mut p = Parser { tokens, pos: 0 };
        let e = p.expr()?;
        match p.tokens.get(p.pos) {
            None => Ok(e),
            Some(t) => Err(ParseError {
                column: t.column,
                message: "unexpected trailing token".to_string(),
            }),
        }
    }
}

impl ops::Add for Expr {
    type Output = Expr;
    fn add(self, rhs: Expr) -> Expr {
        Expr::Bin(BinOp::Add, Box::new(self), Box::new(rhs))
    }
}

impl ops::Sub for Expr {
    type Output = Expr;
    fn sub(self, rhs: Expr) -> Expr {
        Expr::Bin(BinOp::Sub, Box::new(self), Box::new(rhs))
    }
}

impl ops::Mul for Expr {
    type Output = Expr;
    fn mul(self, rhs: Expr) -> Expr {
        Expr::Bin(BinOp::Mul, Box::new(self), Box::new(rhs))
    }
}

impl ops::Div for Expr {
    type Output = Expr;
    fn div(self, rhs: Expr) -> Expr {
        Expr::Bin(BinOp::Div, Box::new(self), Box::new(rhs))
    }
}

impl ops::Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::Neg(Box::new(self))
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Const(v) if v.is_infinite() && *v > 0.0 => write!(f, "inf"),
            Expr::Const(v) if v.is_infinite() => write!(f, "(-inf)"),
            Expr::Const(v) if *v < 0.0 => write!(f, "({v:?})"),
            Expr::Const(v) => write!(f, "{v:?}"),
            Expr::Var(v) => f.write_str(match v {
                Var::X1 => "x1",
                Var::X2 => "x2",
                Var::Xi1 => "xi1",
                Var::Xi2 => "xi2",
                Var::NormXi => "nxi",
            }),
            Expr::Neg(a) => write!(f, "(-{a})"),
            Expr::Bin(op, a, b) => {
                let sym = match op {
                    BinOp::Add => "+",
                    BinOp::Sub => "-",
                    BinOp::Mul => "*",
                    BinOp::Div => "/",
                    BinOp::Pow => "^",
                };
                write!(f, "({a} {sym} {b})")
            }
            Expr::Call(func, args) => {
                let name = match func {
                    Func::Abs => "abs",
                    Func::Min => "min",
                    Func::Max => "max",
                    Func::Sqrt => "sqrt",
                    Func::Sin => "sin",
                    Func::Cos => "cos",
                    Func::Exp => "exp",
                };
                write!(f, "{name}(")?;
                for (k, a) in args.iter().enumerate() {
                    if k > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{a}")?;
                }
                write!(f, ")")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("expression syntax error at column {column}: {message}")]
pub struct ParseError {
    pub column: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Op(char),
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    column: usize,
}

fn lex(src: &str) -> Result<Vec<Token>, ParseError> {
    let mut out = Vec::new();
    let chars: Vec<(usize, char)> = src.chars().enumerate().collect();
    let mut k = 0;
    while k < chars.len() {
        let (col, c) = chars[k];
        let column = col + 1;
        if c.is_whitespace() {
            k += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let start = k;
            while k < chars.len() {
                let d = chars[k].1;
                let exp_sign =
                    (d == '-' || d == '+') && k > start && matches!(chars[k - 1].1, 'e' | 'E');
                if d.is_ascii_digit() || d == '.' || d == 'e' || d == 'E' || exp_sign {
                    k += 1;
                } else {
                    break;
                }
            }
            let text: String = chars[start..k].iter().map(|p| p.1).collect();
            let v = text.parse::<f64>().map_err(|_| ParseError {
                column,
                message: alloc::format!("bad number '{text}'"),
            })?;
            out.push(Token {
                tok: Tok::Num(v),
                column,
            });
        } else if c.is_alphabetic() || c == '_' {
            let start = k;
            while k < chars.len() && (chars[k].1.is_alphanumeric() || chars[k].1 == '_') {
                k += 1;
            }
            let text: String = chars[start..k].iter().map(|p| p.1).collect();
            out.push(Token {
                tok: Tok::Ident(text),
                column,
            });
        } else {
            let op = match c {
                '×' => '*',
                '÷' => '/',
                '−' => '-',
                '+' | '-' | '*' | '/' | '^' | '(' | ')' | ',' | '|' => c,
                _ => {
                    return Err(ParseError {
                        column,
                        message: alloc::format!("unexpected character '{c}'"),
                    })
                }
            };
            out.push(Token {
                tok: Tok::Op(op),
                column,
            });
            k += 1;
        }
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn column(&self) -> usize {
        self.tokens
            .get(self.pos)
            .map(|t| t.column)
            .unwrap_or_else(|| self.tokens.last().map(|t| t.column + 1).unwrap_or(1))
    }

    fn err(&self, msg: &str) -> ParseError {
        ParseError {
            column: self.column(),
            message: msg.to_string(),
        }
    }

    fn eat_op(&mut self, c: char) -> bool {
        if let Some(Token {
            tok: Tok::Op(o), ..
        }) = self.tokens.get(self.pos)
        {
            if *o == c {
                self.pos += 1;
                return true;
            }
        }
        false
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            if self.eat_op('+') {
                lhs = lhs + self.term()?;
            } else if self.eat_op('-') {
                lhs = lhs - self.term()?;
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat_op('*') {
                lhs = lhs * self.unary()?;
            } else if self.eat_op('/') {
                lhs = lhs / self.unary()?;
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.eat_op('-') {
            return Ok(-self.unary()?);
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if self.eat_op('^') {
            let e = self.unary()?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        let Some(tok) = self.tokens.get(self.pos).cloned() else {
            return Err(self.err("unexpected end of expression"));
        };
        self.pos += 1;
        match tok.tok {
            Tok::Num(v) => Ok(Expr::Const(v)),
            Tok::Op('(') => {
                let e = self.expr()?;
                if !self.eat_op(')') {
                    return Err(self.err("expected ')'"));
                }
                Ok(e)
            }
            Tok::Op('|') => {
                let e = self.expr()?;
                if !self.eat_op('|') {
                    return Err(self.err("expected closing '|'"));
                }
                Ok(e.abs())
            }
            Tok::Ident(name) => self.ident(&name, tok.column),
            Tok::Op(c) => Err(ParseError {
                column: tok.column,
                message: alloc::format!("unexpected '{c}'"),
            }),
        }
    }

    fn ident(&mut self, name: &str, column: usize) -> Result<Expr, ParseError> {
        let var = match name {
            "x" | "x1" => Some(Var::X1),
            "x2" => Some(Var::X2),
            "xi" | "xi1" | "ξ" | "ξ1" => Some(Var::Xi1),
            "xi2" | "ξ2" => Some(Var::Xi2),
            "nxi" => Some(Var::NormXi),
            _ => None,
        };
        if let Some(v) = var {
            return Ok(Expr::Var(v));
        }
        if name == "inf" {
            return Ok(Expr::Const(f64::INFINITY));
        }
        let func = match name {
            "abs" => Func::Abs,
            "min" => Func::Min,
            "max" => Func::Max,
            "sqrt" => Func::Sqrt,
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "exp" => Func::Exp,
            "pow" => {
                let args = self.args(column)?;
                if args.len() != 2 {
                    return Err(ParseError {
                        column,
                        message: "pow takes two arguments".to_string(),
                    });
                }
                let mut it = args.into_iter();
                let (a, b) = (it.next().unwrap(), it.next().unwrap());
                return Ok(a.pow(b));
            }
            _ => {
                return Err(ParseError {
                    column,
                    message: alloc::format!("unknown name '{name}'"),
                })
            }
        };
        let args = self.args(column)?;
        let arity_ok = match func {
            Func::Abs | Func::Sqrt | Func::Sin | Func::Cos | Func::Exp => args.len() == 1,
            Func::Min | Func::Max => !args.is_empty(),
        };
        if !arity_ok {
            return Err(ParseError {
                column,
                message: alloc::format!("wrong number of arguments to '{name}'"),
            });
        }
        Ok(Expr::Call(func, args))
    }

    fn args(&mut self, column: usize) -> Result<Vec<Expr>, ParseError> {
        if !self.eat_op('(') {
            return Err(ParseError {
                column,
                message: "expected '(' after function name".to_string(),
            });
        }
        let mut args = alloc::vec![self.expr()?];
        while self.eat_op(',') {
            args.push(self.expr()?);
        }
        if !self.eat_op(')') {
            return Err(self.err("expected ')'"));
        }
        Ok(args)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ev(s: &str, x: f64, xi: f64) -> f64 {
        Expr::parse(s).unwrap().eval([x, 0.0], [xi, 0.0])
    }

    #[test]
    fn precedence() {
        assert_eq!(ev("1 + 2 * 3", 0.0, 0.0), 7.0);
        assert_eq!(ev("-2^2", 0.0, 0.0), -4.0);
        assert_eq!(ev("2^3^2", 0.0, 0.0), 512.0);
        assert_eq!(ev("(1 - |xi|)", 0.0, -0.25), 0.75);
        assert_eq!(ev("max(1 - abs(xi), 0)", 0.0, 3.0), 0.0);
        assert_eq!(ev("2 × 3 ÷ 4 − 1", 0.0, 0.0), 0.5);
    }

    #[test]
    fn double_well() {
        let s = "min((xi+1)^2, (xi-1)^2)";
        assert_eq!(ev(s, 0.0, 0.0), 1.0);
        assert_eq!(ev(s, 0.0, 1.0), 0.0);
        assert_eq!(ev(s, 0.0, -3.0), 4.0);
    }

    #[test]
    fn norm_and_shift() {
        let e = Expr::parse("nxi").unwrap();
        assert_eq!(e.eval([0.0; 2], [3.0, 4.0]), 5.0);
        let s = e.shift_xi([1.0, 0.0]);
        assert!((s.eval([0.0; 2], [2.0, 4.0]) - 5.0).abs() < 1e-12);
        assert!(!e.depends_on_x());
        assert!(Expr::parse("x * xi").unwrap().depends_on_x());
    }

    #[test]
    fn field_functions() {
        assert!(
            (ev("sin(x) + cos(x)", 0.5, 0.0) - (libm::sin(0.5) + libm::cos(0.5))).abs() < 1e-15
        );
        assert_eq!(ev("exp(0)", 0.0, 0.0), 1.0);
    }

    #[test]
    fn infinity_literal() {
        assert_eq!(ev("inf", 0.0, 0.0), f64::INFINITY);
        assert_eq!(ev("min(inf, 2)", 0.0, 0.0), 2.0);
    }

    #[test]
    fn errors() {
        assert_eq!(Expr::parse("1 + ").unwrap_err().column, 4);
        assert!(Expr::parse("foo(1)").is_err());
        assert!(Expr::parse("abs(1, 2)").is_err());
        assert_eq!(Expr::parse("1 $ 2").unwrap_err().column, 3);
    }

    #[test]
    fn display_round_trip() {
        for s in [
            "min((xi+1)^2, (xi-1)^2)",
            "max(1 - |xi|, 0)",
            "-x*2 + nxi/3",
            "inf",
            "2 + -3",
            "sin(3*x) + exp(-x^2) * cos(x2)",
        ] {
            let e = Expr::parse(s).unwrap();
            let again = Expr::parse(&e.to_string()).unwrap();
            assert_eq!(e, again, "{s}");
        }
    }
}
