//! Sparse polynomials in one, two or three variables.
//!
//! Terms live in a map from exponent vectors to nonzero coefficients.
//! Display order is graded lexicographic, highest term first, with the
//! variable order `x < y` (plane), `x1 < x2 < x3` (space) or `t` (series).

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::scalar::{binomial, ExactScalar};

pub type Exp = [u32; 3];

pub fn exp_deg(e: &Exp) -> u32 {
    e[0] + e[1] + e[2]
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MultiPoly {
    nvars: usize,
    terms: BTreeMap<Exp, ExactScalar>,
}

pub fn var_names(nvars: usize) -> &'static [&'static str] {
    match nvars {
        1 => &["t"],
        2 => &["x", "y"],
        3 => &["x1", "x2", "x3"],
        _ => panic!("unsupported variable count {nvars}"),
    }
}

fn graded_desc(a: &Exp, b: &Exp) -> std::cmp::Ordering {
    exp_deg(b).cmp(&exp_deg(a)).then_with(|| b.cmp(a))
}

impl MultiPoly {
    pub fn zero(nvars: usize) -> Self {
        assert!((1..=3).contains(&nvars));
        MultiPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: ExactScalar) -> Self {
        let mut p = MultiPoly::zero(nvars);
        p.add_term([0, 0, 0], c);
        p
    }

    pub fn one(nvars: usize) -> Self {
        MultiPoly::constant(nvars, ExactScalar::one())
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = [0; 3];
        e[i] = 1;
        MultiPoly::monomial(nvars, e, ExactScalar::one())
    }

    pub fn monomial(nvars: usize, e: Exp, c: ExactScalar) -> Self {
        let mut p = MultiPoly::zero(nvars);
        p.add_term(e, c);
        p
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Exp, ExactScalar)>) -> Self {
        let mut p = MultiPoly::zero(nvars);
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exp, &ExactScalar)> {
        self.terms.iter()
    }

    /// Terms in display order.
    pub fn terms_graded(&self) -> Vec<(Exp, ExactScalar)> {
        let mut v: Vec<_> = self.terms.iter().map(|(e, c)| (*e, c.clone())).collect();
        v.sort_by(|a, b| graded_desc(&a.0, &b.0));
        v
    }

    pub fn coeff(&self, e: &Exp) -> ExactScalar {
        self.terms.get(e).cloned().unwrap_or_else(ExactScalar::zero)
    }

    pub fn constant_term(&self) -> ExactScalar {
        self.coeff(&[0, 0, 0])
    }

    pub fn add_term(&mut self, e: Exp, c: ExactScalar) {
        debug_assert!(e[self.nvars..].iter().all(|&x| x == 0));
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(v) => {
                *v += &c;
                if v.is_zero() {
                    self.terms.remove(&e);
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(exp_deg).max().unwrap_or(0)
    }

    /// Lowest total degree of a term; `None` for the zero polynomial.
    pub fn order(&self) -> Option<u32> {
        self.terms.keys().map(exp_deg).min()
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|e| e[var]).max().unwrap_or(0)
    }

    pub fn truncate(&self, n: u32) -> Self {
        MultiPoly {
            nvars: self.nvars,
            terms: self.terms.iter().filter(|(e, _)| exp_deg(e) <= n).map(|(e, c)| (*e, c.clone())).collect(),
        }
    }

    pub fn homogeneous_part(&self, d: u32) -> Self {
        MultiPoly {
            nvars: self.nvars,
            terms: self.terms.iter().filter(|(e, _)| exp_deg(e) == d).map(|(e, c)| (*e, c.clone())).collect(),
        }
    }

    pub fn radicand(&self) -> Result<Option<num_bigint::BigInt>> {
        ExactScalar::checked_field(self.terms.values())
    }

    pub fn is_rational(&self) -> bool {
        self.terms.values().all(|c| c.is_rational())
    }

    pub fn scale(&self, c: &ExactScalar) -> Self {
        if c.is_zero() {
            return MultiPoly::zero(self.nvars);
        }
        MultiPoly { nvars: self.nvars, terms: self.terms.iter().map(|(e, v)| (*e, v * c)).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars);
        let mut r = self.clone();
        for (e, c) in &other.terms {
            r.add_term(*e, c.clone());
        }
        r
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars);
        let mut r = self.clone();
        for (e, c) in &other.terms {
            r.add_term(*e, -c);
        }
        r
    }

    pub fn neg(&self) -> Self {
        self.scale(&ExactScalar::from_i64(-1))
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.mul_trunc(other, u32::MAX)
    }

    /// Product with all terms above total degree `n` dropped.
    pub fn mul_trunc(&self, other: &Self, n: u32) -> Self {
        assert_eq!(self.nvars, other.nvars);
        let mut r = MultiPoly::zero(self.nvars);
        for (e1, c1) in &self.terms {
            let d1 = exp_deg(e1);
            if d1 > n {
                continue;
            }
            for (e2, c2) in &other.terms {
                if d1.saturating_add(exp_deg(e2)) > n {
                    continue;
                }
                r.add_term([e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2]], c1 * c2);
            }
        }
        r
    }

    pub fn pow(&self, k: u32) -> Self {
        self.pow_trunc(k, u32::MAX)
    }

    pub fn pow_trunc(&self, k: u32, n: u32) -> Self {
        let mut acc = MultiPoly::one(self.nvars);
        for _ in 0..k {
            acc = acc.mul_trunc(self, n);
        }
        acc
    }

    pub fn derivative(&self, var: usize) -> Self {
        let mut r = MultiPoly::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[var] == 0 {
                continue;
            }
            let mut e2 = *e;
            e2[var] -= 1;
            r.add_term(e2, c * ExactScalar::from_i64(e[var] as i64));
        }
        r
    }

    pub fn gradient(&self) -> Vec<MultiPoly> {
        (0..self.nvars).map(|i| self.derivative(i)).collect()
    }

    pub fn eval(&self, point: &[ExactScalar]) -> ExactScalar {
        let mut acc = ExactScalar::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for i in 0..self.nvars {
                if e[i] > 0 {
                    t = &t * &point[i].pow(e[i]);
                }
            }
            acc += &t;
        }
        acc
    }

    /// Substitutes `subs[i]` for variable `i`; the result lives in the ring
    /// of the substituted polynomials. Terms above degree `n` are dropped
    /// along the way when `n` is finite.
    pub fn compose_trunc(&self, subs: &[MultiPoly], n: u32) -> MultiPoly {
        assert_eq!(subs.len(), self.nvars);
        let target = subs[0].nvars;
        let mut cache: Vec<Vec<MultiPoly>> = subs.iter().map(|s| vec![MultiPoly::one(target), s.clone()]).collect();
        let mut out = MultiPoly::zero(target);
        for (e, c) in &self.terms {
            let mut t = MultiPoly::constant(target, c.clone());
            for i in 0..self.nvars {
                let k = e[i] as usize;
                if k == 0 {
                    continue;
                }
                while cache[i].len() <= k {
                    let next = cache[i].last().unwrap().mul_trunc(&subs[i], n);
                    cache[i].push(next);
                }
                t = t.mul_trunc(&cache[i][k], n);
                if t.is_zero() {
                    break;
                }
            }
            out = out.add(&t);
        }
        out
    }

    pub fn compose(&self, subs: &[MultiPoly]) -> MultiPoly {
        self.compose_trunc(subs, u32::MAX)
    }

    /// `p(center + x)`: the germ of `p` at `center` in local coordinates.
    pub fn translate(&self, center: &[ExactScalar]) -> MultiPoly {
        if center.iter().all(|c| c.is_zero()) {
            return self.clone();
        }
        let mut out = MultiPoly::zero(self.nvars);
        for (e, c) in &self.terms {
            // expand prod (x_i + c_i)^{e_i}
            let mut partial: Vec<(Exp, ExactScalar)> = vec![([0, 0, 0], c.clone())];
            for i in 0..self.nvars {
                let k = e[i];
                if k == 0 {
                    continue;
                }
                let mut next = Vec::new();
                for (pe, pc) in &partial {
                    for j in 0..=k {
                        let coef = ExactScalar::from_rational(binomial(k, j)) * center[i].pow(k - j);
                        if coef.is_zero() {
                            continue;
                        }
                        let mut ne = *pe;
                        ne[i] += j;
                        next.push((ne, pc * &coef));
                    }
                }
                partial = next;
            }
            for (pe, pc) in partial {
                out.add_term(pe, pc);
            }
        }
        out
    }

    /// Univariate antiderivative with zero constant term (series variable).
    pub fn integrate(&self, var: usize) -> MultiPoly {
        let mut r = MultiPoly::zero(self.nvars);
        for (e, c) in &self.terms {
            let mut e2 = *e;
            e2[var] += 1;
            r.add_term(e2, c / ExactScalar::from_i64(e2[var] as i64));
        }
        r
    }

    /// Embeds the polynomial into a ring with more variables.
    pub fn lift(&self, nvars: usize) -> MultiPoly {
        assert!(nvars >= self.nvars);
        MultiPoly { nvars, terms: self.terms.clone() }
    }

    /// Renames a one-variable polynomial into variable `var` of an
    /// `nvars`-variable ring.
    pub fn univariate_into(&self, nvars: usize, var: usize) -> MultiPoly {
        let mut r = MultiPoly::zero(nvars);
        for (e, c) in &self.terms {
            let mut ne = [0; 3];
            ne[var] = exp_deg(e);
            r.add_term(ne, c.clone());
        }
        r
    }

    /// Coefficient list of a univariate view in `var`, lowest power first,
    /// with coefficients polynomials in the remaining variables.
    pub fn coefficients_in(&self, var: usize) -> Vec<MultiPoly> {
        let d = self.degree_in(var) as usize;
        let mut out = vec![MultiPoly::zero(self.nvars); d + 1];
        for (e, c) in &self.terms {
            let mut ne = *e;
            let k = ne[var] as usize;
            ne[var] = 0;
            out[k].add_term(ne, c.clone());
        }
        out
    }

    pub fn parse(text: &str) -> Result<MultiPoly> {
        let nvars = detect_vars(text)?;
        MultiPoly::parse_with(text, nvars)
    }

    pub fn parse_with(text: &str, nvars: usize) -> Result<MultiPoly> {
        let tokens = tokenize(text)?;
        let mut p = Parser { toks: tokens, pos: 0, nvars };
        let r = p.expr()?;
        if p.pos != p.toks.len() {
            return Err(Error::Parse(format!("unexpected token {:?}", p.toks[p.pos])));
        }
        r.radicand()?;
        Ok(r)
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let names = var_names(self.nvars);
        let mut first = true;
        for (e, c) in self.terms_graded() {
            let mut mono = Vec::new();
            for (i, name) in names.iter().enumerate() {
                match e[i] {
                    0 => {}
                    1 => mono.push(name.to_string()),
                    k => mono.push(format!("{name}^{k}")),
                }
            }
            let mono = mono.join("*");
            let neg = c.is_negative_atom();
            let mag = if neg { -c.clone() } else { c.clone() };
            let body = if mono.is_empty() {
                if mag.is_atomic() {
                    mag.to_string()
                } else {
                    format!("({mag})")
                }
            } else if mag.is_one() {
                mono
            } else if mag.is_atomic() {
                format!("{mag}*{mono}")
            } else {
                format!("({mag})*{mono}")
            };
            if first {
                write!(f, "{}{}", if neg { "-" } else { "" }, body)?;
            } else {
                write!(f, " {} {}", if neg { "-" } else { "+" }, body)?;
            }
            first = false;
        }
        Ok(())
    }
}

impl Serialize for MultiPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for MultiPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        MultiPoly::parse(&s).map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(num_bigint::BigInt),
    Ident(String),
    Op(char),
}

fn tokenize(text: &str) -> Result<Vec<Tok>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let ch = chars[i];
        if ch.is_whitespace() {
            i += 1;
        } else if ch.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            out.push(Tok::Num(s.parse().map_err(|_| Error::Parse(s.clone()))?));
        } else if ch.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_alphanumeric() {
                i += 1;
            }
            out.push(Tok::Ident(chars[start..i].iter().collect()));
        } else if "+-*/^()".contains(ch) {
            out.push(Tok::Op(ch));
            i += 1;
        } else {
            return Err(Error::Parse(format!("unexpected character '{ch}'")));
        }
    }
    Ok(out)
}

fn detect_vars(text: &str) -> Result<usize> {
    let toks = tokenize(text)?;
    let mut kinds = std::collections::BTreeSet::new();
    for t in toks {
        if let Tok::Ident(s) = t {
            match s.as_str() {
                "x" | "y" => {
                    kinds.insert(2);
                }
                "x1" | "x2" | "x3" => {
                    kinds.insert(3);
                }
                "t" => {
                    kinds.insert(1);
                }
                "sqrt" => {}
                other => return Err(Error::Parse(format!("unknown identifier '{other}'"))),
            }
        }
    }
    match kinds.len() {
        0 => Ok(2),
        1 => Ok(*kinds.iter().next().unwrap()),
        _ => Err(Error::Parse("mixed variable families".into())),
    }
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
    nvars: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat_op(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Op(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<MultiPoly> {
        let mut acc = self.term()?;
        loop {
            if self.eat_op('+') {
                acc = acc.add(&self.term()?);
            } else if self.eat_op('-') {
                acc = acc.sub(&self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<MultiPoly> {
        let mut acc = self.unary()?;
        loop {
            if self.eat_op('*') {
                acc = acc.mul(&self.unary()?);
            } else if self.eat_op('/') {
                let d = self.unary()?;
                if d.degree() > 0 || d.is_zero() {
                    return Err(Error::Parse("division by a non-constant or zero".into()));
                }
                acc = acc.scale(&d.constant_term().inv());
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<MultiPoly> {
        if self.eat_op('-') {
            return Ok(self.unary()?.neg());
        }
        if self.eat_op('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<MultiPoly> {
        let base = self.atom()?;
        if self.eat_op('^') {
            match self.toks.get(self.pos).cloned() {
                Some(Tok::Num(n)) => {
                    self.pos += 1;
                    let k = n.to_u32().ok_or_else(|| Error::Parse("exponent too large".into()))?;
                    Ok(base.pow(k))
                }
                _ => Err(Error::Parse("expected integer exponent".into())),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<MultiPoly> {
        let tok = self.toks.get(self.pos).cloned().ok_or_else(|| Error::Parse("unexpected end".into()))?;
        self.pos += 1;
        match tok {
            Tok::Num(n) => Ok(MultiPoly::constant(self.nvars, ExactScalar::from(n))),
            Tok::Op('(') => {
                let e = self.expr()?;
                if !self.eat_op(')') {
                    return Err(Error::Parse("missing ')'".into()));
                }
                Ok(e)
            }
            Tok::Ident(s) if s == "sqrt" => {
                if !self.eat_op('(') {
                    return Err(Error::Parse("sqrt needs '('".into()));
                }
                let e = self.expr()?;
                if !self.eat_op(')') {
                    return Err(Error::Parse("missing ')'".into()));
                }
                if e.degree() > 0 {
                    return Err(Error::Parse("sqrt of a non-constant".into()));
                }
                let c = e.constant_term();
                let q = c.as_rational().ok_or_else(|| Error::Parse("sqrt of an irrational".into()))?;
                if q.is_zero() {
                    return Ok(MultiPoly::zero(self.nvars));
                }
                Ok(MultiPoly::constant(self.nvars, ExactScalar::sqrt_of_rational(q)))
            }
            Tok::Ident(s) => {
                let names = var_names(self.nvars);
                let i = names
                    .iter()
                    .position(|n| *n == s)
                    .ok_or_else(|| Error::Parse(format!("variable '{s}' not in {names:?}")))?;
                Ok(MultiPoly::var(self.nvars, i))
            }
            Tok::Op(c) => Err(Error::Parse(format!("unexpected '{c}'"))),
        }
    }
}

/// Shorthand used throughout tests and the corpus.
pub fn p(text: &str) -> MultiPoly {
    MultiPoly::parse(text).unwrap_or_else(|e| panic!("bad polynomial {text:?}: {e}"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display_graded_lex() {
        let f = p("x + 3/2*x^2*y - y^3");
        assert_eq!(f.to_string(), "3/2*x^2*y - y^3 + x");
        assert_eq!(p(" ( y - x^2 ) ^2 + y^4").to_string(), "x^4 + y^4 - 2*x^2*y + y^2");
        assert_eq!(p("x1^2 - 2*x3").nvars(), 3);
        assert_eq!(p("sqrt(2)*t + 1").to_string(), "sqrt(2)*t + 1");
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!(MultiPoly::parse("x + z").is_err());
        assert!(MultiPoly::parse("x / y").is_err());
        assert!(MultiPoly::parse("x1 + y").is_err());
        assert!(MultiPoly::parse("sqrt(2)*x + sqrt(3)").is_err());
    }

    #[test]
    fn truncate_examples() {
        assert_eq!(p("x^3 + y").truncate(2), p("y"));
        assert_eq!(p("x^2*y + x^2").truncate(2), p("x^2"));
        let f = p("x^2 - y");
        assert_eq!(f.truncate(5), f);
    }

    #[test]
    fn compose_and_translate() {
        let f = p("x^2 + y");
        let g = f.compose(&[p("x + y"), p("y^2")]);
        assert_eq!(g, p("x^2 + 2*x*y + y^2 + y^2"));
        let t = f.translate(&[ExactScalar::from_i64(1), ExactScalar::from_i64(2)]);
        assert_eq!(t, p("x^2 + 2*x + 1 + y + 2"));
    }

    #[test]
    fn orders_and_degrees() {
        let f = p("x^3 + x*y + y^5");
        assert_eq!(f.order(), Some(2));
        assert_eq!(f.degree(), 5);
        assert_eq!(f.derivative(1), p("x + 5*y^4"));
    }
}
