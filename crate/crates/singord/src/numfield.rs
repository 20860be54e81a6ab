//! Arithmetic in `K[a] / P(a)` for a square-free `P` over the scalar field,
//! with dynamic evaluation: `P` is never factored up front. When an
//! element turns out to be a zero divisor, the computation reports the
//! factor of `P` it found and the caller restarts on each factor.

use crate::error::Error;
use crate::scalar::ExactScalar;
use crate::upoly::UPoly;

pub type Elt = UPoly;

/// Control flow of a computation over a split-able field.
#[derive(Debug, Clone)]
pub enum Flow {
    /// A proper monic factor of the current modulus.
    Split(UPoly),
    /// A truncated germ ran out of known terms; retry with more.
    Precision,
    Fail(Error),
}

impl From<Error> for Flow {
    fn from(e: Error) -> Self {
        Flow::Fail(e)
    }
}

pub type FResult<T> = std::result::Result<T, Flow>;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NumField {
    modulus: UPoly,
}

impl NumField {
    /// The scalar field itself, presented as `K[a]/(a)`.
    pub fn base() -> Self {
        NumField { modulus: UPoly::from_i64(&[0, 1]) }
    }

    pub fn new(modulus: UPoly) -> Self {
        assert!(modulus.degree().unwrap_or(0) >= 1);
        NumField { modulus: modulus.monic() }
    }

    pub fn modulus(&self) -> &UPoly {
        &self.modulus
    }

    pub fn degree(&self) -> usize {
        self.modulus.degree().unwrap()
    }

    pub fn is_base(&self) -> bool {
        self.degree() == 1
    }

    pub fn reduce(&self, e: &UPoly) -> Elt {
        if e.degree().unwrap_or(0) < self.degree() {
            e.clone()
        } else {
            e.rem(&self.modulus)
        }
    }

    pub fn from_scalar(&self, c: &ExactScalar) -> Elt {
        self.reduce(&UPoly::constant(c.clone()))
    }

    /// The class of the generator `a`.
    pub fn generator(&self) -> Elt {
        self.reduce(&UPoly::from_i64(&[0, 1]))
    }

    pub fn zero(&self) -> Elt {
        UPoly::zero()
    }

    pub fn one(&self) -> Elt {
        UPoly::one()
    }

    pub fn add(&self, a: &Elt, b: &Elt) -> Elt {
        a.add(b)
    }

    pub fn sub(&self, a: &Elt, b: &Elt) -> Elt {
        a.sub(b)
    }

    pub fn neg(&self, a: &Elt) -> Elt {
        a.scale(&ExactScalar::from_i64(-1))
    }

    pub fn mul(&self, a: &Elt, b: &Elt) -> Elt {
        if a.is_zero() || b.is_zero() {
            return UPoly::zero();
        }
        if a.degree() == Some(0) {
            return b.scale(&a.coeff(0));
        }
        if b.degree() == Some(0) {
            return a.scale(&b.coeff(0));
        }
        self.reduce(&a.mul(b))
    }

    pub fn scale(&self, a: &Elt, c: &ExactScalar) -> Elt {
        a.scale(c)
    }

    pub fn pow(&self, a: &Elt, k: u32) -> Elt {
        let mut acc = self.one();
        for _ in 0..k {
            acc = self.mul(&acc, a);
        }
        acc
    }

    /// Inverse, or the factor of the modulus exposed by a zero divisor.
    pub fn inv(&self, a: &Elt) -> FResult<Elt> {
        if a.is_zero() {
            return Err(Flow::Fail(Error::InvariantBreach("inverse of zero in a number field".into())));
        }
        if a.degree() == Some(0) {
            return Ok(UPoly::constant(a.coeff(0).inv()));
        }
        // extended Euclid on (a, P)
        let (mut r0, mut r1) = (self.modulus.clone(), a.clone());
        let (mut s0, mut s1) = (UPoly::zero(), UPoly::one());
        while r1.degree().unwrap_or(0) > 0 || r1.is_zero() {
            if r1.is_zero() {
                // gcd r0 has positive degree
                return Err(Flow::Split(r0.monic()));
            }
            let (q, r) = r0.divrem(&r1);
            let s = s0.sub(&q.mul(&s1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s;
        }
        // r1 is a nonzero constant
        Ok(self.reduce(&s1.scale(&r1.coeff(0).inv())))
    }

    /// Decides whether `a` vanishes, splitting when it vanishes on part of
    /// the spectrum only.
    pub fn is_zero(&self, a: &Elt) -> FResult<bool> {
        if a.is_zero() {
            return Ok(true);
        }
        if a.degree() == Some(0) {
            return Ok(false);
        }
        let g = self.modulus.gcd(a);
        if g.degree().unwrap_or(0) == 0 {
            Ok(false)
        } else {
            Err(Flow::Split(g))
        }
    }

    /// Image of an element of a field whose modulus is a multiple of ours.
    pub fn embed(&self, a: &Elt) -> Elt {
        self.reduce(a)
    }

    /// Complementary factor `P / g`.
    pub fn cofactor(&self, g: &UPoly) -> UPoly {
        self.modulus.divrem(g).0.monic()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_integers() {
        let k = NumField::new(UPoly::from_i64(&[1, 0, 1]));
        let i = k.generator();
        assert_eq!(k.mul(&i, &i), UPoly::from_i64(&[-1]));
        let a = UPoly::from_i64(&[2, 3]);
        let inv = k.inv(&a).unwrap();
        assert_eq!(k.mul(&a, &inv), k.one());
    }

    #[test]
    fn zero_divisor_splits() {
        // a^2 - 1 is not a field; a - 1 is a zero divisor
        let k = NumField::new(UPoly::from_i64(&[-1, 0, 1]));
        match k.inv(&UPoly::from_i64(&[-1, 1])) {
            Err(Flow::Split(g)) => {
                assert_eq!(g, UPoly::from_i64(&[-1, 1]));
                assert_eq!(k.cofactor(&g), UPoly::from_i64(&[1, 1]));
            }
            other => panic!("expected split, got {other:?}"),
        }
        assert!(matches!(k.is_zero(&UPoly::from_i64(&[1, 1])), Err(Flow::Split(_))));
    }
}
