//! Text form of polynomials.
//!
//! The canonical grammar is an expanded sum of terms such as
//! `3*z1^2*z2 - 5/7*z3 + 1`. Whitespace is insignificant. Variables are
//! `z1, z2, ...` unless an explicit name list is supplied (the factoring
//! engine uses `x`, `y`, `t`). A second entry point accepts parenthesised
//! products, which the command line uses for `--expand`.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::poly::{Monomial, SparsePoly};
use crate::rational::{render_q, Q};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Sym(char),
}

fn tokenize(text: &str) -> Result<Vec<(Tok, usize)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            out.push((Tok::Num(text[start..i].parse().unwrap()), start));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push((Tok::Ident(text[start..i].to_string()), start));
        } else if "+-*/^()".contains(c) {
            out.push((Tok::Sym(c), i));
            i += 1;
        } else {
            return Err(Error::Parse { pos: i, msg: format!("unexpected character '{c}'") });
        }
    }
    Ok(out)
}

/// How identifiers map to variable indices.
enum Names<'a> {
    /// `z1..zn`; `n` is fixed in advance.
    Z(usize),
    List(&'a [&'a str]),
}

impl Names<'_> {
    fn nvars(&self) -> usize {
        match self {
            Names::Z(n) => *n,
            Names::List(l) => l.len(),
        }
    }

    fn lookup(&self, name: &str, pos: usize) -> Result<usize> {
        match self {
            Names::Z(n) => {
                let idx = name
                    .strip_prefix('z')
                    .and_then(|d| if d.starts_with('0') { None } else { d.parse::<usize>().ok() })
                    .filter(|&k| k >= 1);
                match idx {
                    Some(k) if k <= *n => Ok(k - 1),
                    Some(k) => Err(Error::Parse {
                        pos,
                        msg: format!("variable z{k} exceeds the declared count {n}"),
                    }),
                    None => Err(Error::Parse { pos, msg: format!("unknown variable name '{name}'") }),
                }
            }
            Names::List(l) => l
                .iter()
                .position(|v| *v == name)
                .ok_or_else(|| Error::Parse { pos, msg: format!("unknown variable name '{name}'") }),
        }
    }
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end: usize,
    names: Names<'a>,
    allow_groups: bool,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map(|(_, p)| *p).unwrap_or(self.end)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse { pos: self.offset(), msg: msg.into() })
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<SparsePoly> {
        let n = self.names.nvars();
        let mut acc = SparsePoly::zero(n);
        let mut first = true;
        loop {
            let negative = if self.eat('-') {
                true
            } else if self.eat('+') {
                false
            } else if first {
                false
            } else {
                break;
            };
            let t = self.term()?;
            acc = if negative { &acc - &t } else { &acc + &t };
            first = false;
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<SparsePoly> {
        let mut acc = self.power()?;
        loop {
            if self.eat('*') {
                let rhs = self.power()?;
                acc = &acc * &rhs;
            } else if self.peek() == Some(&Tok::Sym('/')) {
                let at = self.offset();
                self.pos += 1;
                let rhs = self.power()?;
                if !rhs.is_constant() || rhs.is_zero() {
                    return Err(Error::Parse { pos: at, msg: "division by a non-constant or zero".into() });
                }
                acc = acc.scale(&rhs.constant_term().recip());
            } else {
                break;
            }
        }
        Ok(acc)
    }

    fn power(&mut self) -> Result<SparsePoly> {
        let base = self.atom()?;
        if self.eat('^') {
            let at = self.offset();
            match self.peek().cloned() {
                Some(Tok::Num(k)) => {
                    self.pos += 1;
                    let k = k
                        .to_u32()
                        .ok_or(Error::Parse { pos: at, msg: "exponent too large".into() })?;
                    Ok(base.pow(k))
                }
                _ => self.err("expected a non-negative integer exponent"),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<SparsePoly> {
        let n = self.names.nvars();
        let at = self.offset();
        match self.peek().cloned() {
            Some(Tok::Num(v)) => {
                self.pos += 1;
                Ok(SparsePoly::constant(n, Q::from_integer(v)))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                let i = self.names.lookup(&name, at)?;
                Ok(SparsePoly::var(n, i))
            }
            Some(Tok::Sym('(')) if self.allow_groups => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return self.err("expected ')'");
                }
                Ok(e)
            }
            Some(Tok::Sym('(')) => self.err("parentheses are only accepted with --expand"),
            Some(Tok::Sym(c)) => self.err(format!("unexpected '{c}'")),
            None => self.err("unexpected end of input"),
        }
    }
}

fn run(text: &str, names: Names<'_>, allow_groups: bool) -> Result<SparsePoly> {
    let toks = tokenize(text)?;
    if toks.is_empty() {
        return Err(Error::Parse { pos: 0, msg: "empty input".into() });
    }
    let mut p = Parser { toks, pos: 0, end: text.len(), names, allow_groups };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return p.err("unexpected trailing input");
    }
    Ok(e)
}

/// Highest `k` such that `zk` appears in `text` (0 if none).
fn max_z_index(text: &str) -> Result<usize> {
    let mut n = 0;
    for (t, pos) in tokenize(text)? {
        if let Tok::Ident(name) = t {
            let k = name
                .strip_prefix('z')
                .and_then(|d| if d.starts_with('0') { None } else { d.parse::<usize>().ok() })
                .filter(|&k| k >= 1)
                .ok_or_else(|| Error::Parse { pos, msg: format!("unknown variable name '{name}'") })?;
            n = n.max(k);
        }
    }
    Ok(n)
}

/// Parses an expanded polynomial in `z1..zN`, where `N` is the largest index present.
pub fn parse_poly(text: &str) -> Result<SparsePoly> {
    let n = max_z_index(text)?;
    parse_poly_n(text, n)
}

/// Parses an expanded polynomial in `z1..zn` for a fixed `n`.
pub fn parse_poly_n(text: &str, n: usize) -> Result<SparsePoly> {
    run(text, Names::Z(n), false)
}

/// Parses an expanded polynomial over an explicit list of variable names.
pub fn parse_poly_vars(text: &str, names: &[&str]) -> Result<SparsePoly> {
    run(text, Names::List(names), false)
}

/// Parses and expands an expression with parentheses and powers of groups.
pub fn parse_expression(text: &str, n: Option<usize>) -> Result<SparsePoly> {
    let n = match n {
        Some(n) => n,
        None => max_z_index(text)?,
    };
    run(text, Names::Z(n), true)
}

pub fn parse_expression_vars(text: &str, names: &[&str]) -> Result<SparsePoly> {
    run(text, Names::List(names), true)
}

/// Names `z1..zn`.
pub fn z_names(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("z{i}")).collect()
}

/// Canonical rendering with variables `z1..zn`.
pub fn render_poly(p: &SparsePoly) -> String {
    render_poly_with(p, &z_names(p.nvars()))
}

/// Canonical rendering: terms in descending graded lexicographic order.
pub fn render_poly_with<S: AsRef<str>>(p: &SparsePoly, names: &[S]) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (k, (m, c)) in p.terms().enumerate() {
        let neg = c.is_negative();
        if k == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let a = c.abs();
        let mono = render_monomial(m, names);
        if mono.is_empty() {
            out.push_str(&render_q(&a));
        } else if a.is_one() {
            out.push_str(&mono);
        } else {
            out.push_str(&render_q(&a));
            out.push('*');
            out.push_str(&mono);
        }
    }
    out
}

fn render_monomial<S: AsRef<str>>(m: &Monomial, names: &[S]) -> String {
    let mut parts = Vec::new();
    for (i, &e) in m.0.iter().enumerate() {
        match e {
            0 => {}
            1 => parts.push(names[i].as_ref().to_string()),
            _ => parts.push(format!("{}^{}", names[i].as_ref(), e)),
        }
    }
    parts.join("*")
}

/// Parses a rational constant such as `-5/7`.
pub fn parse_rational(text: &str) -> Result<Q> {
    let p = run(text, Names::Z(0), false)?;
    if p.is_zero() {
        return Ok(Q::zero());
    }
    Ok(p.constant_term())
}
