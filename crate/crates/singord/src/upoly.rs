//! Dense univariate polynomials over [`ExactScalar`] and truncated power
//! series in one variable.

use std::fmt;

use crate::error::{Error, Result};
use crate::poly::MultiPoly;
use crate::scalar::ExactScalar;

/// Coefficients lowest degree first; no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct UPoly(Vec<ExactScalar>);

impl UPoly {
    pub fn new(mut c: Vec<ExactScalar>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        UPoly(c)
    }

    pub fn zero() -> Self {
        UPoly(Vec::new())
    }

    pub fn constant(c: ExactScalar) -> Self {
        UPoly::new(vec![c])
    }

    pub fn one() -> Self {
        UPoly::constant(ExactScalar::one())
    }

    /// `t - a`
    pub fn linear_root(a: &ExactScalar) -> Self {
        UPoly::new(vec![-a, ExactScalar::one()])
    }

    pub fn from_i64(c: &[i64]) -> Self {
        UPoly::new(c.iter().map(|&v| ExactScalar::from_i64(v)).collect())
    }

    pub fn coeffs(&self) -> &[ExactScalar] {
        &self.0
    }

    pub fn coeff(&self, i: usize) -> ExactScalar {
        self.0.get(i).cloned().unwrap_or_else(ExactScalar::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn lc(&self) -> ExactScalar {
        self.0.last().cloned().unwrap_or_else(ExactScalar::zero)
    }

    pub fn order(&self) -> Option<usize> {
        self.0.iter().position(|c| !c.is_zero())
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.0.len().max(o.0.len());
        UPoly::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.0.len().max(o.0.len());
        UPoly::new((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }

    pub fn scale(&self, c: &ExactScalar) -> Self {
        UPoly::new(self.0.iter().map(|x| x * c).collect())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return UPoly::zero();
        }
        let mut out = vec![ExactScalar::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.0.iter().enumerate() {
                out[i + j] += &(a * b);
            }
        }
        UPoly::new(out)
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&self.lc().inv())
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn divrem(&self, d: &Self) -> (Self, Self) {
        let dd = d.degree().expect("division by zero polynomial");
        let inv = d.lc().inv();
        let mut r = self.0.clone();
        if r.len() <= dd {
            return (UPoly::zero(), self.clone());
        }
        let mut q = vec![ExactScalar::zero(); r.len() - dd];
        for k in (0..q.len()).rev() {
            let c = &r[k + dd] * &inv;
            if c.is_zero() {
                continue;
            }
            for (j, dc) in d.0.iter().enumerate() {
                let t = &c * dc;
                r[k + j] -= &t;
            }
            q[k] = c;
        }
        r.truncate(dd);
        (UPoly::new(q), UPoly::new(r))
    }

    pub fn rem(&self, d: &Self) -> Self {
        self.divrem(d).1
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, o: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r.monic();
        }
        a.monic()
    }

    pub fn derivative(&self) -> Self {
        UPoly::new(self.0.iter().enumerate().skip(1).map(|(i, c)| c * ExactScalar::from_i64(i as i64)).collect())
    }

    pub fn eval(&self, x: &ExactScalar) -> ExactScalar {
        let mut acc = ExactScalar::zero();
        for c in self.0.iter().rev() {
            acc = &acc * x + c;
        }
        acc
    }

    /// `p(t + c)`
    pub fn shift(&self, c: &ExactScalar) -> Self {
        let mut acc = UPoly::zero();
        let lin = UPoly::new(vec![c.clone(), ExactScalar::one()]);
        for a in self.0.iter().rev() {
            acc = acc.mul(&lin).add(&UPoly::constant(a.clone()));
        }
        acc
    }

    /// Yun's square-free decomposition: `(factor, multiplicity)` pairs with
    /// monic, pairwise coprime, square-free factors of positive degree.
    pub fn squarefree(&self) -> Vec<(UPoly, usize)> {
        let mut out = Vec::new();
        if self.degree().unwrap_or(0) == 0 {
            return out;
        }
        let f = self.monic();
        let df = f.derivative();
        let a = f.gcd(&df);
        let mut b = f.divrem(&a).0;
        let mut c = df.divrem(&a).0;
        let mut d = c.sub(&b.derivative());
        let mut i = 1;
        loop {
            let g = b.gcd(&d);
            if g.degree().unwrap_or(0) > 0 {
                out.push((g.clone(), i));
            }
            b = b.divrem(&g).0;
            if b.degree().unwrap_or(0) == 0 {
                break;
            }
            c = d.divrem(&g).0;
            d = c.sub(&b.derivative());
            i += 1;
        }
        out
    }

    pub fn to_poly(&self, nvars: usize, var: usize) -> MultiPoly {
        let mut p = MultiPoly::zero(nvars);
        for (i, c) in self.0.iter().enumerate() {
            let mut e = [0; 3];
            e[var] = i as u32;
            p.add_term(e, c.clone());
        }
        p
    }

    /// Reads a polynomial in which only `var` occurs.
    pub fn from_poly(p: &MultiPoly, var: usize) -> Self {
        let mut c = vec![ExactScalar::zero(); p.degree_in(var) as usize + 1];
        for (e, v) in p.terms() {
            debug_assert!((0..3).all(|i| i == var || e[i] == 0));
            c[e[var] as usize] += v;
        }
        UPoly::new(c)
    }
}

impl fmt::Display for UPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_poly(1, 0))
    }
}

/// Square root of a one-variable series `u` with even order `2*m0`.
///
/// The returned `psi` has all terms of degree below `n` and satisfies
/// `psi^2 = u` modulo `t^(n+1)`. When the leading coefficient is not a square
/// its root is adjoined.
pub fn series_sqrt(u: &MultiPoly, n: u32) -> Result<MultiPoly> {
    if u.nvars() != 1 {
        return Err(Error::InvalidInput("series_sqrt expects a polynomial in t".into()));
    }
    let up = UPoly::from_poly(u, 0);
    let ord = up.order().ok_or(Error::ZeroInput)?;
    if ord % 2 == 1 {
        return Err(Error::OddOrder(ord));
    }
    let m0 = ord / 2;
    let alpha = up.coeff(ord);
    let root = alpha.sqrt()?;
    ExactScalar::checked_field(up.coeffs().iter().chain(std::iter::once(&root)))?;
    let n = n as usize;
    if n < m0 {
        return Ok(MultiPoly::zero(1));
    }
    // u = alpha t^{2 m0} (1 + v); sqrt(1 + v) by the convolution recurrence
    let len = n - m0;
    let inv = alpha.inv();
    let w: Vec<ExactScalar> = (0..len).map(|i| up.coeff(ord + i) * &inv).collect();
    let half = ExactScalar::from_frac(1, 2);
    let mut s = vec![ExactScalar::one(); len.max(1)];
    for k in 1..len {
        let mut acc = w[k].clone();
        for i in 1..k {
            acc -= &(&s[i] * &s[k - i]);
        }
        s[k] = &acc * &half;
    }
    let mut psi = MultiPoly::zero(1);
    for (i, c) in s.iter().enumerate().take(len) {
        psi.add_term([(m0 + i) as u32, 0, 0], c * &root);
    }
    Ok(psi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::p;

    #[test]
    fn gcd_and_squarefree() {
        let a = UPoly::from_i64(&[-1, 0, 1]); // t^2 - 1
        let b = UPoly::from_i64(&[1, 1]); // t + 1
        assert_eq!(a.gcd(&b), b);
        // (t-1)^2 (t+2)^3
        let f = UPoly::from_i64(&[-1, 1]).mul(&UPoly::from_i64(&[-1, 1])).mul(&UPoly::from_i64(&[2, 1]).mul(&UPoly::from_i64(&[2, 1])).mul(&UPoly::from_i64(&[2, 1])));
        let sq = f.squarefree();
        assert_eq!(sq, vec![(UPoly::from_i64(&[-1, 1]), 2), (UPoly::from_i64(&[2, 1]), 3)]);
    }

    #[test]
    fn sqrt_examples() {
        assert_eq!(series_sqrt(&p("t^2"), 5).unwrap(), p("t"));
        assert_eq!(series_sqrt(&p("4*t^4 + 4*t^5"), 6).unwrap(), p("2*t^2 + t^3 - 1/4*t^4 + 1/8*t^5"));
        assert_eq!(series_sqrt(&p("2*t^2"), 4).unwrap(), p("sqrt(2)*t"));
        assert_eq!(series_sqrt(&p("t^3 + t^4"), 6), Err(Error::OddOrder(3)));
        assert!(matches!(series_sqrt(&p("(1+sqrt(2))*t^2"), 4), Err(Error::ExtensionDepth(_))));
    }
}
