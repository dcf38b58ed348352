//! Rational-linear expressions in named parameters.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::error::{AlgebraError, Result};
use crate::rational::{format_rational, int, parse_rational, Rational};

/// Scalar ring for multivector coefficients. Everything is a module over the rationals.
pub trait Coeff: Clone + PartialEq + fmt::Debug + Send + Sync + 'static {
    fn zero_coeff() -> Self;
    fn is_zero_coeff(&self) -> bool;
    fn add_assign(&mut self, other: &Self);
    fn neg(&self) -> Self;
    fn scale(&self, q: &Rational) -> Self;
    fn from_rational(q: Rational) -> Self;
    fn to_json(&self) -> Value;
    fn from_json(v: &Value) -> Result<Self>;

    fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// Adds `q·other` in place.
    fn axpy(&mut self, q: &Rational, other: &Self) {
        if !q.is_zero() {
            self.add_assign(&other.scale(q));
        }
    }
}

impl Coeff for Rational {
    fn zero_coeff() -> Self {
        Zero::zero()
    }
    fn is_zero_coeff(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add_assign(&mut self, other: &Self) {
        *self += other;
    }
    fn neg(&self) -> Self {
        -self.clone()
    }
    fn scale(&self, q: &Rational) -> Self {
        self * q
    }
    fn from_rational(q: Rational) -> Self {
        q
    }
    fn to_json(&self) -> Value {
        Value::String(format_rational(self))
    }
    fn from_json(v: &Value) -> Result<Self> {
        match v {
            Value::String(s) => parse_rational(s),
            Value::Number(n) if n.is_i64() => Ok(int(n.as_i64().unwrap())),
            _ => Err(AlgebraError::Parse(format!("expected a rational string, got {v}"))),
        }
    }
}

/// `constant + Σ coef·name`, with no zero coefficients stored.
#[derive(Clone, PartialEq, Eq, Default, Hash)]
pub struct ParamExpr {
    pub constant: Rational,
    pub terms: BTreeMap<String, Rational>,
}

impl From<Rational> for ParamExpr {
    fn from(q: Rational) -> Self {
        ParamExpr::constant(q)
    }
}

impl ParamExpr {
    pub fn constant(q: Rational) -> Self {
        ParamExpr { constant: q, terms: BTreeMap::new() }
    }

    pub fn atom(name: &str) -> Self {
        Self::term(name, Rational::one())
    }

    pub fn term(name: &str, q: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !q.is_zero() {
            terms.insert(name.to_string(), q);
        }
        ParamExpr { constant: Rational::zero(), terms }
    }

    pub fn coeff_of(&self, name: &str) -> Rational {
        self.terms.get(name).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn names(&self) -> impl Iterator<Item = &String> {
        self.terms.keys()
    }

    /// Substitutes every parameter for which `f` returns a value.
    pub fn substitute<F>(&self, f: F) -> ParamExpr
    where
        F: Fn(&str) -> Option<ParamExpr>,
    {
        let mut out = ParamExpr::constant(self.constant.clone());
        for (n, q) in &self.terms {
            match f(n) {
                Some(e) => out.axpy(q, &e),
                None => out.axpy(q, &ParamExpr::atom(n)),
            }
        }
        out
    }

    /// Evaluates with every parameter assigned; missing names count as zero.
    pub fn eval(&self, values: &BTreeMap<String, Rational>) -> Rational {
        let mut acc = self.constant.clone();
        for (n, q) in &self.terms {
            if let Some(v) = values.get(n) {
                acc += q * v;
            }
        }
        acc
    }

    /// Drops every term whose name fails `keep`.
    pub fn restrict<F: Fn(&str) -> bool>(&self, keep: F) -> ParamExpr {
        ParamExpr {
            constant: self.constant.clone(),
            terms: self.terms.iter().filter(|(n, _)| keep(n)).map(|(n, q)| (n.clone(), q.clone())).collect(),
        }
    }

    pub fn parse(s: &str) -> Result<ParamExpr> {
        let toks = tokenize(s)?;
        let mut p = Parser { toks, pos: 0, src: s };
        let e = p.expr()?;
        if p.pos != p.toks.len() {
            return Err(p.err("trailing input"));
        }
        Ok(e)
    }
}

impl Coeff for ParamExpr {
    fn zero_coeff() -> Self {
        ParamExpr::default()
    }
    fn is_zero_coeff(&self) -> bool {
        Zero::is_zero(&self.constant) && self.terms.is_empty()
    }
    fn add_assign(&mut self, other: &Self) {
        self.constant += &other.constant;
        for (n, q) in &other.terms {
            let slot = self.terms.entry(n.clone()).or_insert_with(Rational::zero);
            *slot += q;
            if slot.is_zero() {
                self.terms.remove(n);
            }
        }
    }
    fn neg(&self) -> Self {
        self.scale(&-Rational::one())
    }
    fn scale(&self, q: &Rational) -> Self {
        if q.is_zero() {
            return ParamExpr::default();
        }
        ParamExpr {
            constant: &self.constant * q,
            terms: self.terms.iter().map(|(n, c)| (n.clone(), c * q)).collect(),
        }
    }
    fn from_rational(q: Rational) -> Self {
        ParamExpr::constant(q)
    }
    fn to_json(&self) -> Value {
        let terms: serde_json::Map<String, Value> =
            self.terms.iter().map(|(n, q)| (n.clone(), Value::String(format_rational(q)))).collect();
        json!({"const": format_rational(&self.constant), "terms": terms})
    }
    fn from_json(v: &Value) -> Result<Self> {
        match v {
            Value::String(s) => ParamExpr::parse(s),
            Value::Number(_) => Ok(ParamExpr::constant(Rational::from_json(v)?)),
            Value::Object(m) => {
                let mut out = match m.get("const") {
                    Some(c) => ParamExpr::constant(Rational::from_json(c)?),
                    None => ParamExpr::default(),
                };
                if let Some(t) = m.get("terms") {
                    let t = t
                        .as_object()
                        .ok_or_else(|| AlgebraError::Parse("\"terms\" must be an object".into()))?;
                    for (n, q) in t {
                        check_name(n)?;
                        out.add_assign(&ParamExpr::term(n, Rational::from_json(q)?));
                    }
                }
                Ok(out)
            }
            _ => Err(AlgebraError::Parse(format!("not an expression: {v}"))),
        }
    }
}

fn check_name(n: &str) -> Result<()> {
    let mut chars = n.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => {}
        _ => return Err(AlgebraError::Parse(format!("bad parameter name {n:?}"))),
    }
    if chars.all(|c| c.is_ascii_alphanumeric() || c == '_') {
        Ok(())
    } else {
        Err(AlgebraError::Parse(format!("bad parameter name {n:?}")))
    }
}

/// Orders `B10` after `B9`.
pub fn natural_cmp(a: &str, b: &str) -> Ordering {
    fn chunks(s: &str) -> Vec<(bool, String)> {
        let mut out: Vec<(bool, String)> = Vec::new();
        for c in s.chars() {
            let d = c.is_ascii_digit();
            match out.last_mut() {
                Some((kind, buf)) if *kind == d => buf.push(c),
                _ => out.push((d, c.to_string())),
            }
        }
        out
    }
    let (ca, cb) = (chunks(a), chunks(b));
    for (x, y) in ca.iter().zip(cb.iter()) {
        let o = match (x.0, y.0) {
            (true, true) => {
                let (p, q) = (x.1.trim_start_matches('0'), y.1.trim_start_matches('0'));
                p.len().cmp(&q.len()).then_with(|| p.cmp(q))
            }
            _ => x.1.cmp(&y.1),
        };
        if o != Ordering::Equal {
            return o;
        }
    }
    ca.len().cmp(&cb.len())
}

impl fmt::Display for ParamExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut names: Vec<&String> = self.terms.keys().collect();
        names.sort_by(|a, b| natural_cmp(a, b));
        let mut first = true;
        let mut put = |f: &mut fmt::Formatter<'_>, q: &Rational, name: Option<&str>| -> fmt::Result {
            let neg = q.is_negative();
            let mag = q.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            match name {
                Some(n) if mag.is_one() => write!(f, "{n}"),
                Some(n) => write!(f, "{}{}", format_rational(&mag), n),
                None => write!(f, "{}", format_rational(&mag)),
            }
        };
        for n in names {
            put(f, &self.terms[n], Some(n))?;
        }
        if !self.constant.is_zero() || self.terms.is_empty() {
            put(f, &self.constant, None)?;
        }
        Ok(())
    }
}

impl fmt::Debug for ParamExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(Rational),
    Name(String),
    Plus,
    Minus,
    Star,
    Slash,
    LParen,
    RParen,
}

fn tokenize(s: &str) -> Result<Vec<Tok>> {
    let chars: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            ' ' | '\t' | '·' => i += 1,
            '+' => {
                out.push(Tok::Plus);
                i += 1
            }
            '-' | '\u{2212}' => {
                out.push(Tok::Minus);
                i += 1
            }
            '*' => {
                out.push(Tok::Star);
                i += 1
            }
            '/' => {
                out.push(Tok::Slash);
                i += 1
            }
            '(' => {
                out.push(Tok::LParen);
                i += 1
            }
            ')' => {
                out.push(Tok::RParen);
                i += 1
            }
            d if d.is_ascii_digit() => {
                let st = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let t: String = chars[st..i].iter().collect();
                out.push(Tok::Num(parse_rational(&t)?));
            }
            a if a.is_ascii_alphabetic() => {
                let st = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                out.push(Tok::Name(chars[st..i].iter().collect()));
            }
            _ => return Err(AlgebraError::Parse(format!("unexpected {c:?} in {s:?}"))),
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Tok>,
    pos: usize,
    src: &'a str,
}

impl Parser<'_> {
    fn err(&self, what: &str) -> AlgebraError {
        AlgebraError::Parse(format!("{what} at token {} of {:?}", self.pos, self.src))
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn expr(&mut self) -> Result<ParamExpr> {
        let mut acc = ParamExpr::default();
        let mut sign = Rational::one();
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    sign = -sign;
                }
                _ => break,
            }
        }
        acc.axpy(&sign, &self.product()?);
        loop {
            let s = match self.peek() {
                Some(Tok::Plus) => int(1),
                Some(Tok::Minus) => int(-1),
                _ => break,
            };
            self.pos += 1;
            acc.axpy(&s, &self.product()?);
        }
        Ok(acc)
    }

    // Implicit multiplication is allowed; at most one factor may be non-constant.
    fn product(&mut self) -> Result<ParamExpr> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    let f = self.factor()?;
                    acc = self.mul(acc, f)?;
                }
                Some(Tok::Slash) => {
                    self.pos += 1;
                    let f = self.factor()?;
                    if !f.is_constant() || f.constant.is_zero() {
                        return Err(self.err("division by a non-constant or zero"));
                    }
                    acc = acc.scale(&(Rational::one() / f.constant));
                }
                Some(Tok::Num(_)) | Some(Tok::Name(_)) | Some(Tok::LParen) => {
                    let f = self.factor()?;
                    acc = self.mul(acc, f)?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn mul(&self, a: ParamExpr, b: ParamExpr) -> Result<ParamExpr> {
        if a.is_constant() {
            Ok(b.scale(&a.constant))
        } else if b.is_constant() {
            Ok(a.scale(&b.constant))
        } else {
            Err(self.err("non-linear product"))
        }
    }

    fn factor(&mut self) -> Result<ParamExpr> {
        match self.toks.get(self.pos).cloned() {
            Some(Tok::Num(q)) => {
                self.pos += 1;
                Ok(ParamExpr::constant(q))
            }
            Some(Tok::Name(n)) => {
                self.pos += 1;
                Ok(ParamExpr::atom(&n))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(&Tok::RParen) {
                    return Err(self.err("missing ')'"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(Tok::Minus) => {
                self.pos += 1;
                Ok(self.factor()?.neg())
            }
            _ => Err(self.err("expected a factor")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn parses_printed_entries() {
        let e = ParamExpr::parse("-4C2+A2").unwrap();
        assert_eq!(e.coeff_of("C2"), int(-4));
        assert_eq!(e.coeff_of("A2"), int(1));
        let e = ParamExpr::parse("-(A3 + 2C3)").unwrap();
        assert_eq!(e.coeff_of("C3"), int(-2));
        let e = ParamExpr::parse("3F + tau0/24").unwrap();
        assert_eq!(e.coeff_of("tau0"), rat(1, 24));
        let e = ParamExpr::parse("2*(S11_1 - 1/2)").unwrap();
        assert_eq!(e.constant, int(-1));
        assert!(ParamExpr::parse("A1*B2").is_err());
        assert!(ParamExpr::parse("A1 +").is_err());
    }

    #[test]
    fn display_is_natural_order() {
        let e = ParamExpr::parse("B10 - B9 + 1/2").unwrap();
        assert_eq!(e.to_string(), "-B9 + B10 + 1/2");
        assert_eq!(ParamExpr::default().to_string(), "0");
    }

    #[test]
    fn json_roundtrip() {
        let e = ParamExpr::parse("-3B4 - 3M4 + 2/7").unwrap();
        assert_eq!(ParamExpr::from_json(&e.to_json()).unwrap(), e);
    }

    #[test]
    fn cancellation_removes_terms() {
        let mut e = ParamExpr::atom("x");
        e.add_assign(&ParamExpr::atom("x").neg());
        assert!(e.is_zero_coeff());
    }
}
