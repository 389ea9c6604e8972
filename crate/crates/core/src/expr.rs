//! Game-definition files.
//!
//! A definition is a TOML document with the three strategy intervals and one
//! arithmetic expression per payoff component:
//!
//! ```toml
//! name = "eurozone m=0 n=1"
//!
//! [strategies]
//! e = [0.0, 1.0]
//! f = [0.0, 1.0]
//! c = [0.0, 1.0]
//!
//! [payoff]
//! f1 = "x + 1/(x+1) - z"
//! f2 = "(1+0)*y + (1+1)*z"
//! ```
//!
//! Expression grammar:
//!
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := unary (('*' | '/') unary)*
//! unary := '-' unary | power
//! power := atom ('^' INTEGER)?
//! atom  := NUMBER | 'x' | 'y' | 'z' | '(' expr ')'
//! ```
//!
//! Exponents are positive integer literals. A division is accepted only if
//! its denominator keeps one strict sign, bounded away from zero, on a
//! lattice of the strategy cube; `1/(x+1)` on `[0, 1]` passes, `1/x` does not.

use std::fmt;
use std::path::Path;

use serde::Deserialize;
use thiserror::Error;

use crate::game::{CoopetitiveGame, Interval, StrategyCube};
use crate::geometry::PayoffPoint;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ExprError {
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("unguarded division: denominator `{0}` vanishes or changes sign on the strategy cube")]
    UnguardedDivision(String),
    #[error("payoff `{name}` is not finite at cube corner ({x}, {y}, {z})")]
    NotFinite { name: String, x: f64, y: f64, z: f64 },
    #[error("invalid game definition: {0}")]
    Definition(String),
    #[error("cannot read {path}: {msg}")]
    Io { path: String, msg: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Var {
    X,
    Y,
    Z,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(f64),
    Var(Var),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
}

impl Expr {
    pub fn eval(&self, x: f64, y: f64, z: f64) -> f64 {
        match self {
            Expr::Num(v) => *v,
            Expr::Var(Var::X) => x,
            Expr::Var(Var::Y) => y,
            Expr::Var(Var::Z) => z,
            Expr::Neg(a) => -a.eval(x, y, z),
            Expr::Add(a, b) => a.eval(x, y, z) + b.eval(x, y, z),
            Expr::Sub(a, b) => a.eval(x, y, z) - b.eval(x, y, z),
            Expr::Mul(a, b) => a.eval(x, y, z) * b.eval(x, y, z),
            Expr::Div(a, b) => a.eval(x, y, z) / b.eval(x, y, z),
            Expr::Pow(a, k) => a.eval(x, y, z).powi(*k as i32),
        }
    }

    fn denominators<'a>(&'a self, out: &mut Vec<&'a Expr>) {
        match self {
            Expr::Num(_) | Expr::Var(_) => {}
            Expr::Neg(a) | Expr::Pow(a, _) => a.denominators(out),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) => {
                a.denominators(out);
                b.denominators(out);
            }
            Expr::Div(a, b) => {
                a.denominators(out);
                b.denominators(out);
                out.push(b);
            }
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(v) => write!(f, "{v}"),
            Expr::Var(Var::X) => f.write_str("x"),
            Expr::Var(Var::Y) => f.write_str("y"),
            Expr::Var(Var::Z) => f.write_str("z"),
            Expr::Neg(a) => write!(f, "-({a})"),
            Expr::Add(a, b) => write!(f, "({a} + {b})"),
            Expr::Sub(a, b) => write!(f, "({a} - {b})"),
            Expr::Mul(a, b) => write!(f, "({a} * {b})"),
            Expr::Div(a, b) => write!(f, "({a} / {b})"),
            Expr::Pow(a, k) => write!(f, "({a})^{k}"),
        }
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ExprError> {
        Err(ExprError::Parse {
            pos: self.pos,
            msg: msg.into(),
        })
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
            if self.eat(b'+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat(b'-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat(b'*') {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.eat(b'/') {
                lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, ExprError> {
        if self.eat(b'-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ExprError> {
        let base = self.atom()?;
        if !self.eat(b'^') {
            return Ok(base);
        }
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).unwrap_or_default();
        match digits.parse::<u32>() {
            Ok(k) if k > 0 && k <= i32::MAX as u32 => Ok(Expr::Pow(Box::new(base), k)),
            _ => {
                self.pos = start;
                self.err("exponent must be a positive integer literal")
            }
        }
    }

    fn atom(&mut self) -> Result<Expr, ExprError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(b')') {
                    return self.err("expected `)`");
                }
                Ok(e)
            }
            Some(b'x') => {
                self.pos += 1;
                Ok(Expr::Var(Var::X))
            }
            Some(b'y') => {
                self.pos += 1;
                Ok(Expr::Var(Var::Y))
            }
            Some(b'z') => {
                self.pos += 1;
                Ok(Expr::Var(Var::Z))
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => self.number(),
            Some(c) => self.err(format!("unexpected `{}`", c as char)),
            None => self.err("unexpected end of expression"),
        }
    }

    fn number(&mut self) -> Result<Expr, ExprError> {
        let start = self.pos;
        let digits = |p: &mut Self| {
            while p.pos < p.src.len() && p.src[p.pos].is_ascii_digit() {
                p.pos += 1;
            }
        };
        digits(self);
        if self.src.get(self.pos) == Some(&b'.') {
            self.pos += 1;
            digits(self);
        }
        if matches!(self.src.get(self.pos), Some(b'e' | b'E')) {
            let save = self.pos;
            self.pos += 1;
            if matches!(self.src.get(self.pos), Some(b'+' | b'-')) {
                self.pos += 1;
            }
            let exp_start = self.pos;
            digits(self);
            if self.pos == exp_start {
                self.pos = save;
            }
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap_or_default();
        match text.parse::<f64>() {
            Ok(v) if v.is_finite() => Ok(Expr::Num(v)),
            _ => {
                self.pos = start;
                self.err(format!("invalid number `{text}`"))
            }
        }
    }
}

pub fn parse_expr(src: &str) -> Result<Expr, ExprError> {
    let mut p = Parser {
        src: src.as_bytes(),
        pos: 0,
    };
    let e = p.expr()?;
    if p.peek().is_some() {
        return p.err("trailing input");
    }
    Ok(e)
}

/// Lattice points per axis for the division guard.
const GUARD_LATTICE: usize = 9;
const GUARD_MIN: f64 = 1e-9;

/// Rejects divisions whose denominator touches zero or changes sign on
/// the cube lattice.
pub fn check_divisions(e: &Expr, cube: &StrategyCube) -> Result<(), ExprError> {
    let mut dens = Vec::new();
    e.denominators(&mut dens);
    let xs = cube.e.sample(GUARD_LATTICE);
    let ys = cube.f.sample(GUARD_LATTICE);
    let zs = cube.c.sample(GUARD_LATTICE);
    for den in dens {
        let mut sign = 0.0;
        for &x in &xs {
            for &y in &ys {
                for &z in &zs {
                    let v = den.eval(x, y, z);
                    if !v.is_finite() || v.abs() < GUARD_MIN || (sign != 0.0 && v.signum() != sign) {
                        return Err(ExprError::UnguardedDivision(den.to_string()));
                    }
                    sign = v.signum();
                }
            }
        }
    }
    Ok(())
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDefinition {
    name: Option<String>,
    strategies: RawStrategies,
    payoff: RawPayoff,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawStrategies {
    e: [f64; 2],
    f: [f64; 2],
    c: [f64; 2],
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPayoff {
    f1: String,
    f2: String,
}

/// A parsed and validated game definition.
#[derive(Debug, Clone, PartialEq)]
pub struct GameDefinition {
    pub name: Option<String>,
    pub cube: StrategyCube,
    pub f1: Expr,
    pub f2: Expr,
}

impl GameDefinition {
    pub fn parse(text: &str) -> Result<Self, ExprError> {
        let raw: RawDefinition =
            toml::from_str(text).map_err(|e| ExprError::Definition(e.message().to_string()))?;
        let interval = |name: &str, [lo, hi]: [f64; 2]| {
            Interval::new(lo, hi).map_err(|_| ExprError::Definition(format!("strategy set `{name}` = [{lo}, {hi}] is not an interval")))
        };
        let cube = StrategyCube {
            e: interval("e", raw.strategies.e)?,
            f: interval("f", raw.strategies.f)?,
            c: interval("c", raw.strategies.c)?,
        };
        let def = Self {
            name: raw.name,
            cube,
            f1: parse_expr(&raw.payoff.f1)?,
            f2: parse_expr(&raw.payoff.f2)?,
        };
        def.validate()?;
        Ok(def)
    }

    pub fn load(path: &Path) -> Result<Self, ExprError> {
        let text = std::fs::read_to_string(path).map_err(|e| ExprError::Io {
            path: path.display().to_string(),
            msg: e.to_string(),
        })?;
        Self::parse(&text)
    }

    fn validate(&self) -> Result<(), ExprError> {
        for (name, e) in [("f1", &self.f1), ("f2", &self.f2)] {
            check_divisions(e, &self.cube)?;
            for &x in &[self.cube.e.lo, self.cube.e.hi] {
                for &y in &[self.cube.f.lo, self.cube.f.hi] {
                    for &z in &[self.cube.c.lo, self.cube.c.hi] {
                        if !e.eval(x, y, z).is_finite() {
                            return Err(ExprError::NotFinite {
                                name: name.into(),
                                x,
                                y,
                                z,
                            });
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn to_game(&self) -> CoopetitiveGame {
        let (f1, f2) = (self.f1.clone(), self.f2.clone());
        CoopetitiveGame::new(self.cube, move |x, y, z| {
            PayoffPoint::new(f1.eval(x, y, z), f2.eval(x, y, z))
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eval(src: &str, x: f64, y: f64, z: f64) -> f64 {
        parse_expr(src).unwrap().eval(x, y, z)
    }

    #[test]
    fn precedence_and_associativity() {
        assert_eq!(eval("1 + 2 * 3", 0.0, 0.0, 0.0), 7.0);
        assert_eq!(eval("(1 + 2) * 3", 0.0, 0.0, 0.0), 9.0);
        assert_eq!(eval("8 - 3 - 2", 0.0, 0.0, 0.0), 3.0);
        assert_eq!(eval("8 / 4 / 2", 0.0, 0.0, 0.0), 1.0);
        assert_eq!(eval("-x^2", 3.0, 0.0, 0.0), -9.0);
        assert_eq!(eval("2*x^3 - y", 2.0, 1.0, 0.0), 15.0);
        assert_eq!(eval("1.5e1 + .5", 0.0, 0.0, 0.0), 15.5);
    }

    #[test]
    fn eurozone_formula() {
        let f1 = parse_expr("x + 1/(x+1) - z").unwrap();
        for &(x, z) in &[(0.0, 0.0), (1.0, 0.0), (0.3, 0.7)] {
            assert_eq!(f1.eval(x, 0.0, z), x + 1.0 / (x + 1.0) - z);
        }
    }

    #[test]
    fn parse_errors() {
        for bad in ["", "x +", "(x", "x ^ 0", "x ^ 1.5", "x ^ -2", "w", "1 2", "x ** 2"] {
            assert!(matches!(parse_expr(bad), Err(ExprError::Parse { .. })), "{bad}");
        }
    }

    #[test]
    fn division_guard() {
        let cube = StrategyCube::unit();
        assert!(check_divisions(&parse_expr("1/(x+1)").unwrap(), &cube).is_ok());
        assert!(check_divisions(&parse_expr("1/(-x-1)").unwrap(), &cube).is_ok());
        assert!(check_divisions(&parse_expr("1/x").unwrap(), &cube).is_err());
        assert!(check_divisions(&parse_expr("y/(x - 0.55)").unwrap(), &cube).is_err());
        assert!(check_divisions(&parse_expr("1/(1/(z+1))").unwrap(), &cube).is_ok());
    }

    #[test]
    fn definition_file() {
        let text = r#"
            name = "demo"
            [strategies]
            e = [0.0, 1.0]
            f = [0.0, 1.0]
            c = [0.0, 1.0]
            [payoff]
            f1 = "x + 1/(x+1) - z"
            f2 = "y + 2*z"
        "#;
        let def = GameDefinition::parse(text).unwrap();
        assert_eq!(def.name.as_deref(), Some("demo"));
        let g = def.to_game();
        assert_eq!(g.payoff(1.0, 1.0, 1.0), PayoffPoint::new(0.5, 3.0));
    }

    #[test]
    fn definition_errors() {
        let with = |e: &str, f1: &str| {
            format!("[strategies]\ne = {e}\nf = [0.0, 1.0]\nc = [0.0, 1.0]\n[payoff]\nf1 = \"{f1}\"\nf2 = \"y\"\n")
        };
        assert!(matches!(GameDefinition::parse(&with("[1.0, 0.0]", "x")), Err(ExprError::Definition(_))));
        assert!(matches!(GameDefinition::parse(&with("[0.0, 1.0]", "1/x")), Err(ExprError::UnguardedDivision(_))));
        assert!(matches!(GameDefinition::parse(&with("[0.0, 1.0]", "x +")), Err(ExprError::Parse { .. })));
        assert!(matches!(GameDefinition::parse("[payoff]\nf1 = \"x\""), Err(ExprError::Definition(_))));
    }
}
