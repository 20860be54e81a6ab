//! Jet spaces: polynomials modulo all monomials of total degree above `N`.
//!
//! Monomials are indexed in the local order, lowest degree first, so that
//! the pivot of a reduced row is its lowest-order monomial.

use std::collections::HashMap;
use std::sync::Arc;

use crate::linalg::SVec;
use crate::poly::{exp_deg, Exp, MultiPoly};

#[derive(Clone, Debug)]
pub struct JetSpace {
    nvars: usize,
    order: u32,
    monos: Arc<Vec<Exp>>,
    index: Arc<HashMap<Exp, usize>>,
}

/// Monomials of degree exactly `d`, `x` powers descending.
pub fn monomials_of_degree(nvars: usize, d: u32) -> Vec<Exp> {
    match nvars {
        1 => vec![[d, 0, 0]],
        2 => (0..=d).rev().map(|a| [a, d - a, 0]).collect(),
        3 => {
            let mut v = Vec::new();
            for a in (0..=d).rev() {
                for b in (0..=d - a).rev() {
                    v.push([a, b, d - a - b]);
                }
            }
            v
        }
        _ => panic!("unsupported variable count"),
    }
}

pub fn binom_dim(nvars: usize, n: u32) -> usize {
    // C(n + nvars, nvars)
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for i in 1..=nvars as u128 {
        num *= n as u128 + i;
        den *= i;
    }
    (num / den) as usize
}

impl JetSpace {
    pub fn new(nvars: usize, order: u32) -> Self {
        let mut monos = Vec::with_capacity(binom_dim(nvars, order));
        for d in 0..=order {
            monos.extend(monomials_of_degree(nvars, d));
        }
        let index = monos.iter().enumerate().map(|(i, e)| (*e, i)).collect();
        JetSpace { nvars, order, monos: Arc::new(monos), index: Arc::new(index) }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn dim(&self) -> usize {
        self.monos.len()
    }

    pub fn monomial(&self, i: usize) -> Exp {
        self.monos[i]
    }

    pub fn monomials(&self) -> &[Exp] {
        &self.monos
    }

    pub fn index_of(&self, e: &Exp) -> Option<usize> {
        self.index.get(e).copied()
    }

    /// First index of the degree-`d` block.
    pub fn degree_start(&self, d: u32) -> usize {
        if d == 0 {
            0
        } else {
            binom_dim(self.nvars, d - 1)
        }
    }

    pub fn degree_of(&self, i: usize) -> u32 {
        exp_deg(&self.monos[i])
    }

    /// Coordinates of the `N`-jet of `p`.
    pub fn to_vec(&self, p: &MultiPoly) -> SVec {
        let mut v: SVec = p.terms().filter_map(|(e, c)| self.index_of(e).map(|i| (i, c.clone()))).collect();
        v.sort_by_key(|x| x.0);
        v
    }

    pub fn to_poly(&self, v: &SVec) -> MultiPoly {
        MultiPoly::from_terms(self.nvars, v.iter().map(|(i, c)| (self.monos[*i], c.clone())))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::p;

    #[test]
    fn dimension_and_order() {
        for n in 0..8 {
            let j = JetSpace::new(2, n);
            assert_eq!(j.dim(), ((n + 1) * (n + 2) / 2) as usize);
            let j3 = JetSpace::new(3, n);
            assert_eq!(j3.dim(), binom_dim(3, n));
            for i in 1..j3.dim() {
                assert!(j3.degree_of(i - 1) <= j3.degree_of(i));
            }
        }
    }

    #[test]
    fn truncation_roundtrip() {
        let j = JetSpace::new(2, 3);
        let f = p("x^4 + x^2*y - 2*y + 5");
        assert_eq!(j.to_poly(&j.to_vec(&f)), f.truncate(3));
        assert_eq!(j.to_poly(&j.to_vec(&f.truncate(3))), f.truncate(3).truncate(3));
    }
}
