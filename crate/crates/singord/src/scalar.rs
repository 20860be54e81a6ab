//! Exact scalars: rationals and elements of one quadratic extension.
//!
//! An [`ExactScalar`] is either a reduced fraction or `a + b*sqrt(c)` with
//! `b != 0` and `c` a square-free integer other than 0 and 1. Values with a
//! vanishing irrational part are always stored as rationals, so structural
//! equality is value equality.
//!
//! Only one extension may be live in a computation. Mixing two different
//! radicands is a logic error and panics in the operator impls; callers that
//! combine user data go through [`ExactScalar::checked_field`] first.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ExactScalar {
    Rat(Rational),
    Quad { a: Rational, b: Rational, c: BigInt },
}

impl Default for ExactScalar {
    fn default() -> Self {
        ExactScalar::zero()
    }
}

/// Splits `n != 0` as `k^2 * s` with `s` square-free (up to the trial bound).
///
/// Trial division runs to `10^6`; a cofactor above that is kept whole unless
/// it is a perfect square. Radicands in this crate are small in practice.
pub fn square_free_split(n: &BigInt) -> (BigInt, BigInt) {
    assert!(!n.is_zero());
    let sign = if n.is_negative() { -1 } else { 1 };
    let mut rest = n.abs();
    let mut k = BigInt::one();
    let mut s = BigInt::from(sign);
    let mut p = BigInt::from(2u32);
    let limit = BigInt::from(1_000_000u32);
    while &p * &p <= rest && p <= limit {
        let mut e = 0u32;
        while (&rest % &p).is_zero() {
            rest /= &p;
            e += 1;
        }
        for _ in 0..e / 2 {
            k *= &p;
        }
        if e % 2 == 1 {
            s *= &p;
        }
        p += if p == BigInt::from(2u32) { 1u32 } else { 2u32 };
    }
    if rest > BigInt::one() {
        let r = rest.sqrt();
        if &r * &r == rest {
            k *= r;
        } else {
            s *= rest;
        }
    }
    (k, s)
}

fn is_square_rat(q: &Rational) -> Option<Rational> {
    if q.is_negative() {
        return None;
    }
    let n = q.numer().sqrt();
    let d = q.denom().sqrt();
    if &n * &n == *q.numer() && &d * &d == *q.denom() {
        Some(BigRational::new(n, d))
    } else {
        None
    }
}

impl ExactScalar {
    pub fn zero() -> Self {
        ExactScalar::Rat(Rational::zero())
    }

    pub fn one() -> Self {
        ExactScalar::Rat(Rational::one())
    }

    pub fn from_i64(n: i64) -> Self {
        ExactScalar::Rat(rat_int(n))
    }

    pub fn from_frac(n: i64, d: i64) -> Self {
        ExactScalar::Rat(rat(n, d))
    }

    pub fn from_rational(q: Rational) -> Self {
        ExactScalar::Rat(q)
    }

    /// `a + b*sqrt(c)`; `c` is reduced to its square-free part.
    pub fn quad(a: Rational, b: Rational, c: BigInt) -> Self {
        if b.is_zero() || c.is_zero() {
            return ExactScalar::Rat(a);
        }
        let (k, s) = square_free_split(&c);
        let b = b * BigRational::from_integer(k);
        if s.is_one() {
            return ExactScalar::Rat(a + b);
        }
        ExactScalar::Quad { a, b, c: s }
    }

    /// `sqrt(c)` for a rational `c`, possibly leaving the rationals.
    pub fn sqrt_of_rational(q: &Rational) -> Self {
        if q.is_zero() {
            return ExactScalar::zero();
        }
        // sqrt(p/q) = sqrt(p*q)/q
        let pq = q.numer() * q.denom();
        let (k, s) = square_free_split(&pq);
        let coeff = BigRational::new(k, q.denom().clone());
        if s.is_one() {
            ExactScalar::Rat(coeff)
        } else {
            ExactScalar::Quad { a: Rational::zero(), b: coeff, c: s }
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, ExactScalar::Rat(q) if q.is_zero())
    }

    pub fn is_one(&self) -> bool {
        matches!(self, ExactScalar::Rat(q) if q.is_one())
    }

    pub fn is_rational(&self) -> bool {
        matches!(self, ExactScalar::Rat(_))
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        match self {
            ExactScalar::Rat(q) => Some(q),
            _ => None,
        }
    }

    /// Radicand of the extension this value lives in, if any.
    pub fn radicand(&self) -> Option<&BigInt> {
        match self {
            ExactScalar::Quad { c, .. } => Some(c),
            _ => None,
        }
    }

    /// Rational and irrational parts `(a, b)`.
    pub fn parts(&self) -> (Rational, Rational) {
        match self {
            ExactScalar::Rat(q) => (q.clone(), Rational::zero()),
            ExactScalar::Quad { a, b, .. } => (a.clone(), b.clone()),
        }
    }

    /// Returns the common radicand of a set of values, or an error if two
    /// different extensions appear.
    pub fn checked_field<'a>(values: impl IntoIterator<Item = &'a ExactScalar>) -> Result<Option<BigInt>> {
        let mut field: Option<BigInt> = None;
        for v in values {
            if let Some(c) = v.radicand() {
                match &field {
                    None => field = Some(c.clone()),
                    Some(f) if f == c => {}
                    Some(f) => {
                        return Err(Error::ExtensionDepth(format!("sqrt({f}) and sqrt({c}) both present")))
                    }
                }
            }
        }
        Ok(field)
    }

    fn combine_c(x: &BigInt, y: &BigInt) -> BigInt {
        assert_eq!(x, y, "arithmetic across two different quadratic extensions");
        x.clone()
    }

    pub fn inv(&self) -> Self {
        match self {
            ExactScalar::Rat(q) => {
                assert!(!q.is_zero(), "division by zero");
                ExactScalar::Rat(q.recip())
            }
            ExactScalar::Quad { a, b, c } => {
                let cq = BigRational::from_integer(c.clone());
                let norm = a * a - &cq * b * b;
                ExactScalar::quad(a / &norm, -(b / &norm), c.clone())
            }
        }
    }

    /// Field norm down to the rationals.
    pub fn norm(&self) -> Rational {
        match self {
            ExactScalar::Rat(q) => q.clone(),
            ExactScalar::Quad { a, b, c } => a * a - BigRational::from_integer(c.clone()) * b * b,
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = ExactScalar::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Square root inside the current field, adjoining `sqrt` of a rational
    /// when needed. Fails with `ExtensionDepth` when a value already in an
    /// extension has no square root there.
    pub fn sqrt(&self) -> Result<Self> {
        match self {
            ExactScalar::Rat(q) => Ok(ExactScalar::sqrt_of_rational(q)),
            ExactScalar::Quad { a, b, c } => {
                let cq = BigRational::from_integer(c.clone());
                let norm = a * a - &cq * b * b;
                if let Some(n) = is_square_rat(&norm) {
                    let two = rat_int(2);
                    for cand in [(a + &n) / &two, (a - &n) / &two] {
                        if cand.is_zero() {
                            continue;
                        }
                        if let Some(x) = is_square_rat(&cand) {
                            let y = b / (&two * &x);
                            return Ok(ExactScalar::quad(x, y, c.clone()));
                        }
                    }
                }
                Err(Error::ExtensionDepth(format!("sqrt({self}) needs a second extension")))
            }
        }
    }

    /// Sign for values in a real field (`c > 0`).
    pub fn signum_real(&self) -> Option<Ordering> {
        match self {
            ExactScalar::Rat(q) => Some(q.cmp(&Rational::zero())),
            ExactScalar::Quad { a, b, c } => {
                if c.is_negative() {
                    return None;
                }
                let cq = BigRational::from_integer(c.clone());
                let sa = a.cmp(&Rational::zero());
                let sb = b.cmp(&Rational::zero());
                if sa == sb || sa == Ordering::Equal {
                    return Some(sb);
                }
                // opposite signs: compare a^2 with b^2 c
                let lhs = a * a;
                let rhs = b * b * cq;
                Some(match lhs.cmp(&rhs) {
                    Ordering::Greater => sa,
                    Ordering::Less => sb,
                    Ordering::Equal => Ordering::Equal,
                })
            }
        }
    }

    /// Exact comparison in a real field.
    pub fn cmp_real(&self, other: &Self) -> Option<Ordering> {
        (self - other).signum_real()
    }

    /// Integer part, `[x]`, for real values.
    pub fn floor(&self) -> Option<BigInt> {
        match self {
            ExactScalar::Rat(q) => Some(q.floor().to_integer()),
            ExactScalar::Quad { a, b, c } => {
                if c.is_negative() {
                    return None;
                }
                // estimate b*sqrt(c) by the integer square root of b^2 c scaled
                let bb = b * b * BigRational::from_integer(c.clone());
                let scale = bb.denom().clone();
                let root = (bb.numer() * &scale).sqrt();
                let approx = BigRational::new(root, scale);
                let approx = if b.is_negative() { -approx } else { approx };
                let mut n = (a + approx).floor().to_integer();
                // settle the estimate with exact comparisons
                loop {
                    let nv = ExactScalar::Rat(BigRational::from_integer(n.clone()));
                    match self.cmp_real(&nv)? {
                        Ordering::Less => n -= 1,
                        _ => {
                            let n1 = ExactScalar::Rat(BigRational::from_integer(&n + 1));
                            if self.cmp_real(&n1)? != Ordering::Less {
                                n += 1;
                            } else {
                                return Some(n);
                            }
                        }
                    }
                }
            }
        }
    }

    /// Galois conjugate `a - b sqrt(c)`.
    pub fn conj(&self) -> Self {
        match self {
            ExactScalar::Rat(_) => self.clone(),
            ExactScalar::Quad { a, b, c } => ExactScalar::Quad { a: a.clone(), b: -b.clone(), c: c.clone() },
        }
    }

    pub fn to_f64_lossy(&self) -> f64 {
        // Display helper only; never used in a decision.
        match self {
            ExactScalar::Rat(q) => q.to_f64().unwrap_or(f64::NAN),
            ExactScalar::Quad { a, b, c } => {
                a.to_f64().unwrap_or(f64::NAN) + b.to_f64().unwrap_or(f64::NAN) * c.to_f64().unwrap_or(f64::NAN).sqrt()
            }
        }
    }

    /// Whether the value prints as a single signed factor (no inner `+`).
    pub fn is_atomic(&self) -> bool {
        match self {
            ExactScalar::Rat(_) => true,
            ExactScalar::Quad { a, .. } => a.is_zero(),
        }
    }

    pub fn is_negative_atom(&self) -> bool {
        match self {
            ExactScalar::Rat(q) => q.is_negative(),
            ExactScalar::Quad { a, b, .. } => a.is_zero() && b.is_negative(),
        }
    }
}

fn fmt_rat(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

impl fmt::Display for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExactScalar::Rat(q) => write!(f, "{}", fmt_rat(q)),
            ExactScalar::Quad { a, b, c } => {
                let root = format!("sqrt({c})");
                let bpart = if b.is_one() {
                    root
                } else if (-b).is_one() {
                    format!("-{root}")
                } else {
                    format!("{}*{root}", fmt_rat(b))
                };
                if a.is_zero() {
                    write!(f, "{bpart}")
                } else if b.is_negative() {
                    write!(f, "{}{}", fmt_rat(a), bpart)
                } else {
                    write!(f, "{}+{}", fmt_rat(a), bpart)
                }
            }
        }
    }
}

impl FromStr for ExactScalar {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let p = crate::poly::MultiPoly::parse_with(s, 2)?;
        if p.degree() > 0 {
            return Err(Error::Parse(format!("not a constant: {s}")));
        }
        Ok(p.constant_term())
    }
}

impl Serialize for ExactScalar {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for ExactScalar {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl From<i64> for ExactScalar {
    fn from(n: i64) -> Self {
        ExactScalar::from_i64(n)
    }
}

impl From<Rational> for ExactScalar {
    fn from(q: Rational) -> Self {
        ExactScalar::Rat(q)
    }
}

impl From<BigInt> for ExactScalar {
    fn from(n: BigInt) -> Self {
        ExactScalar::Rat(BigRational::from_integer(n))
    }
}

fn add_ref(x: &ExactScalar, y: &ExactScalar) -> ExactScalar {
    use ExactScalar::*;
    match (x, y) {
        (Rat(p), Rat(q)) => Rat(p + q),
        (Rat(p), Quad { a, b, c }) | (Quad { a, b, c }, Rat(p)) => {
            Quad { a: a + p, b: b.clone(), c: c.clone() }
        }
        (Quad { a, b, c }, Quad { a: a2, b: b2, c: c2 }) => {
            let c = ExactScalar::combine_c(c, c2);
            let bb = b + b2;
            if bb.is_zero() {
                Rat(a + a2)
            } else {
                Quad { a: a + a2, b: bb, c }
            }
        }
    }
}

fn mul_ref(x: &ExactScalar, y: &ExactScalar) -> ExactScalar {
    use ExactScalar::*;
    match (x, y) {
        (Rat(p), Rat(q)) => Rat(p * q),
        (Rat(p), Quad { a, b, c }) | (Quad { a, b, c }, Rat(p)) => {
            if p.is_zero() {
                Rat(Rational::zero())
            } else {
                Quad { a: a * p, b: b * p, c: c.clone() }
            }
        }
        (Quad { a, b, c }, Quad { a: a2, b: b2, c: c2 }) => {
            let c = ExactScalar::combine_c(c, c2);
            let cq = BigRational::from_integer(c.clone());
            let ra = a * a2 + cq * b * b2;
            let rb = a * b2 + b * a2;
            if rb.is_zero() {
                Rat(ra)
            } else {
                Quad { a: ra, b: rb, c }
            }
        }
    }
}

impl Neg for ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        match self {
            ExactScalar::Rat(q) => ExactScalar::Rat(-q),
            ExactScalar::Quad { a, b, c } => ExactScalar::Quad { a: -a, b: -b, c },
        }
    }
}

impl Neg for &ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        -(self.clone())
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $body:expr) => {
        impl $trait<&ExactScalar> for &ExactScalar {
            type Output = ExactScalar;
            fn $method(self, rhs: &ExactScalar) -> ExactScalar {
                let f: fn(&ExactScalar, &ExactScalar) -> ExactScalar = $body;
                f(self, rhs)
            }
        }
        impl $trait<ExactScalar> for ExactScalar {
            type Output = ExactScalar;
            fn $method(self, rhs: ExactScalar) -> ExactScalar {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&ExactScalar> for ExactScalar {
            type Output = ExactScalar;
            fn $method(self, rhs: &ExactScalar) -> ExactScalar {
                (&self).$method(rhs)
            }
        }
        impl $trait<ExactScalar> for &ExactScalar {
            type Output = ExactScalar;
            fn $method(self, rhs: ExactScalar) -> ExactScalar {
                self.$method(&rhs)
            }
        }
    };
}

binop!(Add, add, |x, y| add_ref(x, y));
binop!(Sub, sub, |x, y| add_ref(x, &(-y)));
binop!(Mul, mul, |x, y| mul_ref(x, y));
binop!(Div, div, |x, y| mul_ref(x, &y.inv()));

impl AddAssign<&ExactScalar> for ExactScalar {
    fn add_assign(&mut self, rhs: &ExactScalar) {
        match (&mut *self, rhs) {
            (ExactScalar::Rat(p), ExactScalar::Rat(q)) => *p += q,
            _ => *self = add_ref(self, rhs),
        }
    }
}

impl SubAssign<&ExactScalar> for ExactScalar {
    fn sub_assign(&mut self, rhs: &ExactScalar) {
        match (&mut *self, rhs) {
            (ExactScalar::Rat(p), ExactScalar::Rat(q)) => *p -= q,
            _ => *self = add_ref(self, &(-rhs)),
        }
    }
}

impl MulAssign<&ExactScalar> for ExactScalar {
    fn mul_assign(&mut self, rhs: &ExactScalar) {
        match (&mut *self, rhs) {
            (ExactScalar::Rat(p), ExactScalar::Rat(q)) => *p *= q,
            _ => *self = mul_ref(self, rhs),
        }
    }
}

/// Integer binomial coefficient as a rational.
pub fn binomial(n: u32, k: u32) -> Rational {
    if k > n {
        return Rational::zero();
    }
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    BigRational::from_integer(acc)
}

/// `ceil(sqrt(n))` and friends are not needed; integer square root of a
/// non-negative integer is.
pub fn isqrt(n: &BigInt) -> BigInt {
    if n.sign() == Sign::Minus {
        panic!("isqrt of negative");
    }
    n.sqrt()
}

/// Floor division helper for the integer-part bracket on rationals.
pub fn floor_rat(q: &Rational) -> BigInt {
    q.floor().to_integer()
}

pub fn gcd_int(a: &BigInt, b: &BigInt) -> BigInt {
    a.gcd(b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> ExactScalar {
        ExactScalar::from_frac(n, d)
    }

    #[test]
    fn rationals_reduce() {
        assert_eq!(q(2, 4), q(1, 2));
        assert_eq!(q(3, -6).to_string(), "-1/2");
    }

    #[test]
    fn sqrt_adjoins_one_root() {
        let r = ExactScalar::from_i64(2).sqrt().unwrap();
        assert_eq!(r.to_string(), "sqrt(2)");
        assert_eq!(&r * &r, ExactScalar::from_i64(2));
        let r8 = ExactScalar::from_i64(8).sqrt().unwrap();
        assert_eq!(r8.to_string(), "2*sqrt(2)");
        let half = ExactScalar::from_frac(1, 2).sqrt().unwrap();
        assert_eq!(half.to_string(), "1/2*sqrt(2)");
        assert_eq!(ExactScalar::from_frac(9, 4).sqrt().unwrap(), q(3, 2));
    }

    #[test]
    fn sqrt_inside_extension() {
        // (1 + sqrt 2)^2 = 3 + 2 sqrt 2
        let x = ExactScalar::quad(rat_int(3), rat_int(2), BigInt::from(2));
        let r = x.sqrt().unwrap();
        assert_eq!(&r * &r, x);
        let y = ExactScalar::quad(rat_int(1), rat_int(1), BigInt::from(2));
        assert!(matches!(y.sqrt(), Err(Error::ExtensionDepth(_))));
    }

    #[test]
    fn inverse_in_extension() {
        let x = ExactScalar::quad(rat_int(1), rat_int(1), BigInt::from(3));
        assert_eq!(&x * &x.inv(), ExactScalar::one());
    }

    #[test]
    fn real_order_and_floor() {
        let s2 = ExactScalar::from_i64(2).sqrt().unwrap();
        assert_eq!(s2.floor().unwrap(), BigInt::from(1));
        let x = ExactScalar::from_i64(3) - &s2 * ExactScalar::from_i64(5); // 3 - 7.07
        assert_eq!(x.floor().unwrap(), BigInt::from(-5));
        assert_eq!(s2.cmp_real(&q(141, 100)), Some(Ordering::Greater));
        assert_eq!(s2.cmp_real(&q(142, 100)), Some(Ordering::Less));
    }

    #[test]
    fn parse_roundtrip() {
        for s in ["0", "-3/7", "sqrt(5)", "1/2-3*sqrt(2)", "2+sqrt(3)"] {
            let v: ExactScalar = s.parse().unwrap();
            assert_eq!(v.to_string(), s);
        }
    }

    #[test]
    fn square_free_parts() {
        let (k, s) = square_free_split(&BigInt::from(72));
        assert_eq!((k, s), (BigInt::from(6), BigInt::from(2)));
        let (k, s) = square_free_split(&BigInt::from(-50));
        assert_eq!((k, s), (BigInt::from(5), BigInt::from(-2)));
    }
}
