//! The expression language for elements of `K` and rational functions in `x`.
//!
//! ```text
//! Expr   := Term (('+'|'-') Term)*
//! Term   := Unary (('*'|'/') Unary)*
//! Unary  := '-' Unary | Factor
//! Factor := Atom ['^' Int | '^' '(' Rational ')']
//! Atom   := 'x' | 't' | generator | constant | integer | '(' Expr ')'
//! ```
//!
//! Exponents with a denominator are only allowed on `t` and must lie in
//! the value group.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::ratfunc::RatFunc;
use crate::valgroup::{fmt_q, Q};
use crate::valued_field::{ValuedElement, ValuedField};

/// A parsed expression: a constant of `K` when `x` does not occur.
#[derive(Clone, Debug, PartialEq)]
pub enum Parsed {
    Element(ValuedElement),
    Function(RatFunc),
}

impl Parsed {
    pub fn into_function(self) -> RatFunc {
        match self {
            Parsed::Element(e) => RatFunc::constant(e),
            Parsed::Function(f) => f,
        }
    }

    pub fn into_element(self) -> Result<ValuedElement> {
        match self {
            Parsed::Element(e) => Ok(e),
            Parsed::Function(f) if f.is_constant() => {
                let n = f.num().coeff(0);
                let d = f.den().coeff(0);
                n.checked_div(&d)
            }
            Parsed::Function(_) => Err(Error::Usage("expected a constant, found a function of x".into())),
        }
    }

    pub fn to_expr(&self) -> String {
        match self {
            Parsed::Element(e) => e.to_expr(),
            Parsed::Function(f) => f.to_expr(),
        }
    }
}

impl fmt::Display for Parsed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_expr())
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Sym(char),
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let n: BigInt = src[start..i].parse().expect("digits");
            out.push((start, Tok::Int(n)));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push((start, Tok::Ident(src[start..i].to_string())));
        } else if "+-*/^()".contains(c) {
            out.push((i, Tok::Sym(c)));
            i += 1;
        } else {
            let ch = src[i..].chars().next().expect("char");
            return Err(Error::Syntax {
                pos: i,
                msg: format!("unexpected character `{ch}`"),
            });
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
    kv: &'a ValuedField,
    constants: &'a BTreeMap<String, ValuedElement>,
}

fn lift(v: Parsed) -> RatFunc {
    v.into_function()
}

fn rf_err(e: Error) -> Error {
    match e {
        Error::ZeroDenominator => Error::DivisionByZero,
        e => e,
    }
}

fn binop(op: char, a: Parsed, b: Parsed) -> Result<Parsed> {
    use Parsed::*;
    Ok(match (a, b) {
        (Element(x), Element(y)) => Element(match op {
            '+' => x.add(&y),
            '-' => x.sub(&y),
            '*' => x.mul(&y),
            _ => x.checked_div(&y)?,
        }),
        (a, b) => {
            let (f, g) = (lift(a), lift(b));
            let r = match op {
                '+' => f.add(&g),
                '-' => f.sub(&g),
                '*' => f.mul(&g),
                _ => {
                    if g.is_zero() {
                        return Err(Error::DivisionByZero);
                    }
                    f.div(&g)
                }
            }
            .map_err(rf_err)?;
            Function(r)
        }
    })
}

fn power(base: Parsed, e: i64) -> Result<Parsed> {
    match base {
        Parsed::Element(x) => Ok(Parsed::Element(x.pow(e)?)),
        Parsed::Function(f) => {
            let n = u32::try_from(e.unsigned_abs()).map_err(|_| Error::Usage("exponent too large".into()))?;
            let p = f.pow(n)?;
            if e >= 0 {
                Ok(Parsed::Function(p))
            } else if p.is_zero() {
                Err(Error::DivisionByZero)
            } else {
                let one = RatFunc::constant(p.kv().one());
                Ok(Parsed::Function(one.div(&p).map_err(rf_err)?))
            }
        }
    }
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn at(&self) -> usize {
        self.toks.get(self.pos).map(|(p, _)| *p).unwrap_or(self.end)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(&format!("expected `{c}`")))
        }
    }

    fn error(&self, msg: &str) -> Error {
        let found = match self.peek() {
            None => "end of input".to_string(),
            Some(Tok::Int(n)) => format!("`{n}`"),
            Some(Tok::Ident(s)) => format!("`{s}`"),
            Some(Tok::Sym(c)) => format!("`{c}`"),
        };
        Error::Syntax {
            pos: self.at(),
            msg: format!("{msg}, found {found}"),
        }
    }

    fn expr(&mut self) -> Result<Parsed> {
        let mut acc = self.term()?;
        loop {
            let op = match self.peek() {
                Some(Tok::Sym(c)) if *c == '+' || *c == '-' => *c,
                _ => return Ok(acc),
            };
            self.pos += 1;
            let rhs = self.term()?;
            acc = binop(op, acc, rhs)?;
        }
    }

    fn term(&mut self) -> Result<Parsed> {
        let mut acc = self.unary()?;
        loop {
            let op = match self.peek() {
                Some(Tok::Sym(c)) if *c == '*' || *c == '/' => *c,
                _ => return Ok(acc),
            };
            self.pos += 1;
            let rhs = self.unary()?;
            acc = binop(op, acc, rhs)?;
        }
    }

    fn unary(&mut self) -> Result<Parsed> {
        if self.eat('-') {
            let v = self.unary()?;
            return Ok(match v {
                Parsed::Element(e) => Parsed::Element(e.neg()),
                Parsed::Function(f) => Parsed::Function(f.neg()),
            });
        }
        self.factor()
    }

    fn integer(&mut self) -> Result<BigInt> {
        let neg = self.eat('-');
        match self.peek() {
            Some(Tok::Int(n)) => {
                let n = n.clone();
                self.pos += 1;
                Ok(if neg { -n } else { n })
            }
            _ => Err(self.error("expected an integer")),
        }
    }

    fn factor(&mut self) -> Result<Parsed> {
        let is_t = matches!(self.peek(), Some(Tok::Ident(s)) if s == self.kv.uniformizer());
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let start = self.at();
        let exponent: Q = if self.eat('(') {
            let n = self.integer()?;
            let d = if self.eat('/') {
                self.integer()?
            } else {
                BigInt::one()
            };
            self.expect(')')?;
            if d.is_zero() {
                return Err(Error::Syntax {
                    pos: start,
                    msg: "zero denominator in exponent".into(),
                });
            }
            Q::new(n, d)
        } else {
            Q::from_integer(self.integer()?)
        };
        if exponent.is_integer() {
            let e = exponent.to_integer().to_i64().ok_or_else(|| Error::Syntax {
                pos: start,
                msg: "exponent out of range".into(),
            })?;
            return power(base, e);
        }
        if !is_t {
            return Err(Error::RationalExponentNotAllowed(format!(
                "exponent {} on something other than {}",
                fmt_q(&exponent),
                self.kv.uniformizer()
            )));
        }
        if !self.kv.group().contains(&exponent) {
            return Err(Error::RationalExponentNotAllowed(format!(
                "{} is not in the value group {}",
                fmt_q(&exponent),
                self.kv.group()
            )));
        }
        Ok(Parsed::Element(self.kv.t_pow(&exponent)?))
    }

    fn atom(&mut self) -> Result<Parsed> {
        let kv = self.kv;
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.pos += 1;
                let c = kv.field().from_q(&Q::from_integer(n));
                Ok(Parsed::Element(kv.constant(c)))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                if name == "x" {
                    Ok(Parsed::Function(RatFunc::x(kv)))
                } else if name == kv.uniformizer() {
                    Ok(Parsed::Element(kv.t()))
                } else if kv.field().degree() > 1 && name == kv.field().symbol() {
                    Ok(Parsed::Element(kv.constant(kv.field().gen())))
                } else if let Some(c) = self.constants.get(&name) {
                    Ok(Parsed::Element(c.clone()))
                } else {
                    Err(Error::UnknownSymbol(name))
                }
            }
            Some(Tok::Sym('(')) => {
                self.pos += 1;
                let v = self.expr()?;
                self.expect(')')?;
                Ok(v)
            }
            _ => Err(self.error("expected an operand")),
        }
    }
}

/// Parses `src` over `kv`, resolving named constants from `constants`.
pub fn parse_expr(
    src: &str,
    kv: &ValuedField,
    constants: &BTreeMap<String, ValuedElement>,
) -> Result<Parsed> {
    let toks = lex(src)?;
    let mut p = Parser {
        toks,
        pos: 0,
        end: src.len(),
        kv,
        constants,
    };
    let v = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(v)
}

/// Splits a comma-separated list at top-level commas.
pub fn split_list(src: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in src.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push(src[start..i].trim());
                start = i + 1;
            }
            _ => {}
        }
    }
    let last = src[start..].trim();
    if !last.is_empty() || !out.is_empty() {
        out.push(last);
    }
    out
}

/// Parses a comma-separated list of expressions.
pub fn parse_list(
    src: &str,
    kv: &ValuedField,
    constants: &BTreeMap<String, ValuedElement>,
) -> Result<Vec<Parsed>> {
    split_list(src)
        .into_iter()
        .map(|s| parse_expr(s, kv, constants))
        .collect()
}
