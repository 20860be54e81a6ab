//! Conditions imposed by a zero-dimensional scheme on plane curves of
//! degree `n`, computed by exact elimination.
//!
//! The columns are the monomials `x^a y^b`, `a + b <= n`, of the affine
//! chart; each is expanded at every point and reduced modulo the local
//! ideal. Since columns for degree `n` contain those for `n - 1`, one
//! incremental elimination yields the whole Hilbert function.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::jet::monomials_of_degree;
use crate::linalg::{transpose, Echelon, SVec};
use crate::par::{map_with, Exec};
use crate::poly::MultiPoly;
use crate::schemes::{SampleMode, ZeroDimScheme};

fn forms_dim(n: usize) -> usize {
    (n + 1) * (n + 2) / 2
}

struct LocalData {
    offset: usize,
    ideal: crate::colength::JetIdeal,
    xs: Vec<MultiPoly>,
    ys: Vec<MultiPoly>,
}

/// Incremental condition matrix.
struct Conditions {
    locals: Vec<LocalData>,
    echelon: Echelon,
    /// rank after all columns of degree `<= n`
    ranks: Vec<usize>,
    deg: usize,
    width: usize,
}

impl Conditions {
    fn new(z: &ZeroDimScheme) -> Result<Conditions> {
        let mut locals = Vec::new();
        let mut offset = 0;
        for p in &z.points {
            let at = p.position.coords()?.to_vec();
            let cert = p.ideal.certificate();
            if cert == 0 {
                continue;
            }
            let ideal = p.ideal.at_order(cert).with_center(at.clone());
            let dim = ideal.jet().dim();
            let x = MultiPoly::var(2, 0).add(&MultiPoly::constant(2, at[0].clone()));
            let y = MultiPoly::var(2, 1).add(&MultiPoly::constant(2, at[1].clone()));
            locals.push(LocalData { offset, ideal, xs: vec![MultiPoly::one(2), x], ys: vec![MultiPoly::one(2), y] });
            offset += dim;
        }
        Ok(Conditions { locals, echelon: Echelon::new(), ranks: Vec::new(), deg: z.degree(), width: offset })
    }

    fn power(cache: &mut Vec<MultiPoly>, k: usize, n: u32) -> MultiPoly {
        while cache.len() <= k {
            let next = cache.last().unwrap().mul_trunc(&cache[1], n);
            cache.push(next);
        }
        cache[k].clone()
    }

    fn column(&mut self, a: u32, b: u32) -> SVec {
        let mut col = Vec::new();
        for l in &mut self.locals {
            let n = l.ideal.jet_order();
            let m = Self::power(&mut l.xs, a as usize, n + 1).mul_trunc(&Self::power(&mut l.ys, b as usize, n + 1), n + 1);
            for (i, c) in l.ideal.normal_form(&m) {
                col.push((l.offset + i, c));
            }
        }
        col
    }

    /// Extends the elimination through degree `n`.
    fn rank(&mut self, n: usize) -> usize {
        while self.ranks.len() <= n {
            let d = self.ranks.len() as u32;
            if self.ranks.last() == Some(&self.deg) {
                self.ranks.push(self.deg);
                continue;
            }
            for e in monomials_of_degree(2, d) {
                let col = self.column(e[0], e[1]);
                if !col.is_empty() {
                    self.echelon.insert(&col);
                }
            }
            self.ranks.push(self.echelon.rank());
        }
        self.ranks[n]
    }
}

/// `(h0, h1)` of the ideal sheaf twisted by `n`.
pub fn cohomology(z: &ZeroDimScheme, n: usize) -> Result<(usize, usize)> {
    let mut c = Conditions::new(z)?;
    let r = c.rank(n);
    Ok((forms_dim(n) - r, z.degree() - r))
}

/// Basis of the curves of degree `<= n` through `z`.
pub fn curves_through(z: &ZeroDimScheme, n: usize) -> Result<Vec<MultiPoly>> {
    let mut c = Conditions::new(z)?;
    let mons: Vec<_> = (0..=n as u32).flat_map(|d| monomials_of_degree(2, d)).collect();
    let cols: Vec<SVec> = mons.iter().map(|e| c.column(e[0], e[1])).collect();
    let mut cond = Echelon::new();
    for r in transpose(&cols, c.width).iter().filter(|r| !r.is_empty()) {
        cond.insert(r);
    }
    Ok(cond
        .nullspace(mons.len())
        .into_iter()
        .map(|v| MultiPoly::from_terms(2, v.into_iter().map(|(j, x)| (mons[j], x))))
        .collect())
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct CastelnuovoProfile {
    pub deg: usize,
    pub ord0: usize,
    pub ord1: usize,
    /// `C(n)` for `n = 0 ..= ord1 + 1`
    pub castelnuovo: Vec<usize>,
    pub h0: Vec<usize>,
    pub h1: Vec<usize>,
}

/// Hilbert data, orders and Castelnuovo function, with its four standard
/// properties checked.
pub fn castelnuovo(z: &ZeroDimScheme) -> Result<CastelnuovoProfile> {
    let deg = z.degree();
    let mut c = Conditions::new(z)?;
    let mut h0 = Vec::new();
    let mut h1 = Vec::new();
    let (mut ord0, mut ord1) = (None, None);
    let mut n = 0;
    while ord0.is_none() || ord1.is_none() || n <= ord1.unwrap() + 1 {
        let r = c.rank(n);
        h0.push(forms_dim(n) - r);
        h1.push(deg - r);
        if ord0.is_none() && h0[n] > 0 {
            ord0 = Some(n);
        }
        if ord1.is_none() && h1[n] == 0 {
            ord1 = Some(n);
        }
        if n > deg + 2 {
            return Err(Error::InvariantBreach("no independent conditions up to deg + 1".into()));
        }
        n += 1;
    }
    let (ord0, ord1) = (ord0.unwrap(), ord1.unwrap());
    let cast: Vec<usize> = (0..h1.len()).map(|n| if n == 0 { deg - h1[0] } else { h1[n - 1] - h1[n] }).collect();
    let profile = CastelnuovoProfile { deg, ord0, ord1, castelnuovo: cast[..=ord1 + 1].to_vec(), h0, h1 };
    check_profile(&profile)?;
    Ok(profile)
}

/// The staircase (`e16`), monotonicity (`e13`), vanishing (`e17`) and sum
/// (`e14`) properties, each with its truth value.
pub fn castelnuovo_properties(p: &CastelnuovoProfile) -> Vec<(&'static str, bool)> {
    let c = &p.castelnuovo;
    let staircase = (0..p.ord0.min(c.len())).all(|n| c[n] == n + 1);
    let monotone = (p.ord0.max(1)..c.len()).all(|n| c[n] <= c[n - 1]);
    let vanishing = c.iter().skip(p.ord1 + 1).all(|&v| v == 0);
    let sum = c.iter().sum::<usize>() == p.deg;
    vec![("e16", staircase), ("e13", monotone), ("e17", vanishing), ("e14", sum)]
}

/// The four properties above plus the Euler bookkeeping
/// `h0(n) + C(n) = h0(n - 1) + n + 1`.
pub fn check_profile(p: &CastelnuovoProfile) -> Result<()> {
    if let Some((id, _)) = castelnuovo_properties(p).into_iter().find(|(_, ok)| !ok) {
        return Err(Error::InvariantBreach(format!("Castelnuovo function violates {id}")));
    }
    for n in 0..p.h0.len() {
        let prev = if n == 0 { 0 } else { p.h0[n - 1] };
        let cn = if n == 0 { p.deg - p.h1[0] } else { p.h1[n - 1] - p.h1[n] };
        if p.h0[n] + cn != prev + n + 1 {
            return Err(Error::InvariantBreach(format!("Euler bookkeeping fails at {n}")));
        }
    }
    Ok(())
}

/// `(ord0, ord1)` of a scheme with explicit positions.
pub fn orders(z: &ZeroDimScheme) -> Result<(usize, usize)> {
    let p = castelnuovo(z)?;
    Ok((p.ord0, p.ord1))
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct Trial {
    pub seed: u64,
    pub ord0: usize,
    pub ord1: usize,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct GenericOrders {
    pub deg: usize,
    /// Largest `ord0` over the trials.
    pub ord0: usize,
    /// Smallest `ord1` over the trials.
    pub ord1: usize,
    pub trials: Vec<Trial>,
    /// At least `min(3, T)` trials attain both extremes.
    pub stable: bool,
}

pub fn trial_seed(seed: u64, t: usize) -> u64 {
    seed.wrapping_mul(1_000_003).wrapping_add(t as u64)
}

/// Orders of `T` sampled representatives of `Iso(Z)` or `Def(Z)`.
pub fn generic_orders(z: &ZeroDimScheme, mode: SampleMode, trials: usize, seed: u64) -> Result<GenericOrders> {
    generic_orders_with(Exec::default_for_build(), z, mode, trials, seed)
}

pub fn generic_orders_with(
    exec: Exec,
    z: &ZeroDimScheme,
    mode: SampleMode,
    trials: usize,
    seed: u64,
) -> Result<GenericOrders> {
    if trials == 0 {
        return Err(Error::InvalidInput("at least one trial".into()));
    }
    let seeds: Vec<u64> = (0..trials).map(|t| trial_seed(seed, t)).collect();
    let rows = map_with(exec, &seeds, |&s| -> Result<Trial> {
        let y = z.sample_representative(mode, s)?;
        let (ord0, ord1) = orders(&y)?;
        Ok(Trial { seed: s, ord0, ord1 })
    });
    let rows = rows.into_iter().collect::<Result<Vec<_>>>()?;
    let ord0 = rows.iter().map(|r| r.ord0).max().unwrap();
    let ord1 = rows.iter().map(|r| r.ord1).min().unwrap();
    let need = trials.min(3);
    let stable = rows.iter().filter(|r| r.ord0 == ord0).count() >= need && rows.iter().filter(|r| r.ord1 == ord1).count() >= need;
    Ok(GenericOrders { deg: z.degree(), ord0, ord1, trials: rows, stable })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::p;
    use crate::scalar::ExactScalar;
    use crate::schemes::{build_scheme, simple_points, Position, SchemeKind};

    fn pt(a: i64, b: i64) -> Vec<ExactScalar> {
        vec![ExactScalar::from_i64(a), ExactScalar::from_i64(b)]
    }

    #[test]
    fn small_examples() {
        let one = simple_points(&[pt(0, 0)]).unwrap();
        assert_eq!(cohomology(&one, 0).unwrap(), (0, 0));
        let three = simple_points(&[pt(0, 0), pt(1, 0), pt(0, 1)]).unwrap();
        assert_eq!(cohomology(&three, 1).unwrap(), (0, 0));
        let f1 = build_scheme(None, &SchemeKind::Fat(2), Position::Explicit(pt(0, 0))).unwrap();
        let f2 = build_scheme(None, &SchemeKind::Fat(2), Position::Explicit(pt(1, 2))).unwrap();
        assert_eq!(cohomology(&f1.union(&f2).unwrap(), 2).unwrap(), (1, 1));
        let conics = curves_through(&f1.union(&f2).unwrap(), 2).unwrap();
        assert_eq!(conics.len(), 1);
        assert_eq!(conics[0].degree(), 2);
        assert!(conics[0].eval(&pt(1, 2)).is_zero());
    }

    #[test]
    fn profiles() {
        let one = simple_points(&[pt(0, 0)]).unwrap();
        let p1 = castelnuovo(&one).unwrap();
        assert_eq!((p1.ord0, p1.ord1, p1.castelnuovo.clone()), (1, 0, vec![1, 0]));
        let fat = build_scheme(None, &SchemeKind::Fat(2), Position::origin()).unwrap();
        let pf = castelnuovo(&fat).unwrap();
        assert_eq!((pf.ord0, pf.ord1), (2, 1));
        let cusp = build_scheme(Some(&p("y^2 - x^3")), &SchemeKind::S, Position::origin()).unwrap();
        assert_eq!(castelnuovo(&cusp).unwrap().castelnuovo.iter().sum::<usize>(), 5);
    }

    #[test]
    fn generic_fat_points() {
        let f = build_scheme(None, &SchemeKind::Fat(3), Position::Generic).unwrap();
        let two = f.union(&f).unwrap();
        let g = generic_orders(&two, SampleMode::Iso, 3, 0).unwrap();
        assert_eq!(g.ord0, 3);
        assert!(g.ord1 >= 4);
        let pts = build_scheme(None, &SchemeKind::Fat(1), Position::Generic).unwrap();
        let three = pts.union(&pts).unwrap().union(&pts).unwrap();
        assert_eq!(generic_orders(&three, SampleMode::Iso, 3, 0).unwrap().ord1, 1);
    }
}
