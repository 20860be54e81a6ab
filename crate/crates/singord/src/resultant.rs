//! Resultants of plane polynomials by a fraction-free Sylvester determinant.

use crate::error::{Error, Result};
use crate::poly::MultiPoly;
use crate::upoly::UPoly;

/// Coefficients of `p` as a polynomial in `var`, each a univariate
/// polynomial in the other plane variable.
fn as_nested(p: &MultiPoly, var: usize) -> Vec<UPoly> {
    let other = 1 - var;
    p.coefficients_in(var).iter().map(|c| UPoly::from_poly(c, other)).collect()
}

/// Determinant by Bareiss elimination over `Q[x]`.
pub fn bareiss_det(mut m: Vec<Vec<UPoly>>) -> UPoly {
    let n = m.len();
    if n == 0 {
        return UPoly::one();
    }
    let mut sign_neg = false;
    let mut prev = UPoly::one();
    for k in 0..n.saturating_sub(1) {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(k, i);
                    sign_neg = !sign_neg;
                }
                None => return UPoly::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = m[i][j].mul(&m[k][k]).sub(&m[i][k].mul(&m[k][j]));
                let (q, r) = num.divrem(&prev);
                debug_assert!(r.is_zero());
                m[i][j] = q;
            }
            m[i][k] = UPoly::zero();
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    if sign_neg {
        d.scale(&crate::ExactScalar::from_i64(-1))
    } else {
        d
    }
}

/// Resultant of `p` and `q` with respect to variable `var` of the plane.
/// The result is a polynomial in the remaining variable.
pub fn eliminant(p: &MultiPoly, q: &MultiPoly, var: usize) -> Result<MultiPoly> {
    if p.is_zero() || q.is_zero() {
        return Err(Error::ZeroInput);
    }
    if p.nvars() != 2 || q.nvars() != 2 || var > 1 {
        return Err(Error::InvalidInput("eliminant works on plane polynomials".into()));
    }
    let a = as_nested(p, var);
    let b = as_nested(q, var);
    let (m, n) = (a.len() - 1, b.len() - 1);
    if m == 0 && n == 0 {
        return Err(Error::InvalidInput("no positive degree in the eliminated variable".into()));
    }
    let size = m + n;
    let mut rows = vec![vec![UPoly::zero(); size]; size];
    for (i, row) in rows.iter_mut().enumerate().take(n) {
        for (k, c) in a.iter().enumerate() {
            row[i + m - k] = c.clone();
        }
    }
    for i in 0..m {
        for (k, c) in b.iter().enumerate() {
            rows[n + i][i + n - k] = c.clone();
        }
    }
    Ok(bareiss_det(rows).to_poly(2, 1 - var))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::p;

    fn up_to_sign(a: &MultiPoly, b: &MultiPoly) -> bool {
        a == b || a == &b.neg()
    }

    #[test]
    fn examples() {
        assert!(up_to_sign(&eliminant(&p("y^2 - x^3"), &p("y"), 1).unwrap(), &p("x^3")));
        assert!(up_to_sign(&eliminant(&p("y - x"), &p("y + x"), 1).unwrap(), &p("2*x")));
        assert!(up_to_sign(&eliminant(&p("y^2 - x^3"), &p("y - x^2"), 1).unwrap(), &p("x^4 - x^3")));
        assert_eq!(eliminant(&MultiPoly::zero(2), &p("y"), 1), Err(Error::ZeroInput));
    }

    #[test]
    fn common_factor_vanishes() {
        let c = p("y - x^2 + 1");
        let f = c.mul(&p("y + 3*x"));
        let g = c.mul(&p("y^2 - x"));
        assert!(eliminant(&f, &g, 1).unwrap().is_zero());
    }
}
