//! Ideals of finite colength in the local ring at a point, modelled inside
//! a jet space, and the invariants read off from them.
//!
//! A [`JetIdeal`] stores the image of `I` in `O / m^(N+1)` together with a
//! certificate `D <= N` such that `m^D` is contained in `I`. With the
//! certificate in hand the jet image determines `I` exactly, so colengths,
//! normal forms and membership are exact.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::jet::{monomials_of_degree, JetSpace};
use crate::linalg::{svec_combine, transpose, Echelon, SVec};
use crate::poly::{Exp, MultiPoly};
use crate::rng;
use crate::scalar::ExactScalar;

#[derive(Clone, Debug)]
pub struct JetIdeal {
    center: Vec<ExactScalar>,
    jet: JetSpace,
    basis: Echelon,
    certificate: u32,
}

/// Jet orders tried while certifying a colength.
fn schedule(ceiling: usize) -> Vec<u32> {
    let mut v = Vec::new();
    let mut n = 4u32;
    while (n as usize) < ceiling {
        v.push(n);
        n = (n + 2).max(n + n / 4);
    }
    v.push(ceiling as u32);
    v
}

/// Index of `x_i * mono(j)` in the same jet space, if still inside it.
fn shift_table(jet: &JetSpace) -> Vec<Vec<Option<usize>>> {
    (0..jet.nvars())
        .map(|i| {
            (0..jet.dim())
                .map(|j| {
                    let mut e = jet.monomial(j);
                    e[i] += 1;
                    jet.index_of(&e)
                })
                .collect()
        })
        .collect()
}

fn shift(v: &SVec, table: &[Option<usize>]) -> SVec {
    v.iter().filter_map(|(j, c)| table[*j].map(|k| (k, c.clone()))).collect()
}

/// Smallest `D <= N` such that every degree-`D` monomial lies in the span.
fn find_certificate(jet: &JetSpace, basis: &Echelon) -> Option<u32> {
    (0..=jet.order()).find(|&d| {
        monomials_of_degree(jet.nvars(), d).iter().all(|e| basis.contains(&vec![(jet.index_of(e).unwrap(), ExactScalar::one())]))
    })
}

/// Span of the jets of `gens` closed under multiplication by variables.
fn saturate(jet: &JetSpace, gens: &[SVec]) -> Echelon {
    let table = shift_table(jet);
    let mut basis = Echelon::new();
    let mut work: Vec<SVec> = gens.to_vec();
    work.reverse();
    while let Some(v) = work.pop() {
        let before = basis.rank();
        if basis.insert(&v) {
            debug_assert_eq!(basis.rank(), before + 1);
            for t in table.iter() {
                let w = shift(&v, t);
                if !w.is_empty() {
                    work.push(w);
                }
            }
        }
    }
    basis
}

impl JetIdeal {
    /// Builds an ideal from a subspace of `J(N)` that is already closed
    /// under multiplication by variables.
    pub fn from_subspace(center: Vec<ExactScalar>, jet: JetSpace, basis: Echelon) -> Result<JetIdeal> {
        let certificate = find_certificate(&jet, &basis).ok_or(Error::NonFiniteColength(jet.order() as usize))?;
        Ok(JetIdeal { center, jet, basis, certificate })
    }

    /// `m^k` at a point.
    pub fn max_power(nvars: usize, k: u32, center: Vec<ExactScalar>) -> JetIdeal {
        let jet = JetSpace::new(nvars, k);
        let mut basis = Echelon::new();
        for i in jet.degree_start(k)..jet.dim() {
            basis.insert(&vec![(i, ExactScalar::one())]);
        }
        JetIdeal { center, jet, basis, certificate: k }
    }

    pub fn nvars(&self) -> usize {
        self.jet.nvars()
    }

    pub fn center(&self) -> &[ExactScalar] {
        &self.center
    }

    pub fn with_center(mut self, center: Vec<ExactScalar>) -> JetIdeal {
        self.center = center;
        self
    }

    pub fn jet_order(&self) -> u32 {
        self.jet.order()
    }

    pub fn jet(&self) -> &JetSpace {
        &self.jet
    }

    /// `D` with `m^D` inside the ideal.
    pub fn certificate(&self) -> u32 {
        self.certificate
    }

    pub fn colength(&self) -> usize {
        self.jet.dim() - self.basis.rank()
    }

    pub fn basis(&self) -> &Echelon {
        &self.basis
    }

    /// Monomials spanning the quotient, in local order.
    pub fn standard_monomials(&self) -> Vec<Exp> {
        (0..self.jet.dim()).filter(|i| !self.basis.is_pivot(*i)).map(|i| self.jet.monomial(i)).collect()
    }

    /// Normal form of a germ written in local coordinates at the center.
    pub fn normal_form(&self, p: &MultiPoly) -> SVec {
        self.basis.reduce(&self.jet.to_vec(p))
    }

    pub fn contains(&self, p: &MultiPoly) -> bool {
        self.normal_form(p).is_empty()
    }

    /// The same ideal presented in `J(n)`, `n >= certificate`.
    pub fn at_order(&self, n: u32) -> JetIdeal {
        assert!(n >= self.certificate, "jet order below the certificate");
        if n == self.jet.order() {
            return self.clone();
        }
        let jet = JetSpace::new(self.nvars(), n);
        let mut basis = Echelon::new();
        for row in self.basis.rows() {
            let p = self.jet.to_poly(row);
            basis.insert(&jet.to_vec(&p));
        }
        for i in jet.degree_start(self.certificate)..jet.dim() {
            basis.insert(&vec![(i, ExactScalar::one())]);
        }
        JetIdeal { center: self.center.clone(), jet, basis, certificate: self.certificate }
    }

    /// Germs spanning the ideal modulo `m^(N+1)`.
    pub fn basis_polys(&self) -> Vec<MultiPoly> {
        self.basis.rows().map(|r| self.jet.to_poly(r)).collect()
    }

    /// Rows of the reduced echelon form as polynomials, pivot order.
    pub fn rref_polys(&self) -> Vec<MultiPoly> {
        self.basis.rref().iter().map(|r| self.jet.to_poly(r)).collect()
    }

    pub fn same_ideal(&self, other: &JetIdeal) -> bool {
        if self.nvars() != other.nvars() || self.colength() != other.colength() {
            return false;
        }
        let n = self.jet_order().max(other.jet_order());
        let a = self.at_order(n);
        let b = other.at_order(n);
        let same = a.basis.rows().all(|r| b.basis.contains(r));
        same
    }

    /// `m * I`.
    pub fn mul_maximal(&self) -> JetIdeal {
        let src = self.at_order(self.jet_order().max(self.certificate + 1));
        let table = shift_table(&src.jet);
        let mut basis = Echelon::new();
        for row in src.basis.rows() {
            for t in &table {
                basis.insert(&shift(row, t));
            }
        }
        JetIdeal::from_subspace(self.center.clone(), src.jet.clone(), basis).expect("m*I keeps a certificate")
    }

    /// `I + J`.
    pub fn sum(&self, other: &JetIdeal) -> JetIdeal {
        let n = self.jet_order().max(other.jet_order());
        let a = self.at_order(n);
        let b = other.at_order(n);
        let mut basis = a.basis.clone();
        for r in b.basis.rows() {
            basis.insert(r);
        }
        JetIdeal::from_subspace(self.center.clone(), a.jet.clone(), basis).expect("sum keeps a certificate")
    }

    /// `I : l` for a germ `l` in local coordinates.
    pub fn quotient(&self, l: &MultiPoly) -> JetIdeal {
        if !l.constant_term().is_zero() {
            return self.clone();
        }
        let n = self.certificate.max(1);
        let src = self.at_order(n);
        let jet = src.jet.clone();
        let cols: Vec<SVec> = (0..jet.dim())
            .map(|j| {
                let m = MultiPoly::monomial(self.nvars(), jet.monomial(j), ExactScalar::one());
                src.normal_form(&m.mul_trunc(l, n))
            })
            .collect();
        let rows = transpose(&cols, jet.dim());
        let mut cond = Echelon::new();
        for r in rows.iter().filter(|r| !r.is_empty()) {
            cond.insert(r);
        }
        let mut basis = Echelon::new();
        for v in cond.nullspace(jet.dim()) {
            basis.insert(&v);
        }
        JetIdeal::from_subspace(self.center.clone(), jet, basis).expect("quotient keeps a certificate")
    }

    /// `{ g o phi : g in I }` for an origin-fixing coordinate change `phi`
    /// given by its component germs.
    pub fn pullback(&self, phi: &[MultiPoly]) -> Result<JetIdeal> {
        check_invertible(phi)?;
        let n = self.jet_order();
        let mut basis = Echelon::new();
        for p in self.basis_polys() {
            basis.insert(&self.jet.to_vec(&p.compose_trunc(phi, n)));
        }
        JetIdeal::from_subspace(self.center.clone(), self.jet.clone(), basis)
    }

    /// Seeded combination of basis germs with coefficients in `[-9, 9]`.
    pub fn sample_element(&self, seed: u64) -> MultiPoly {
        self.sample_element_within(seed, 9)
    }

    /// Seeded combination with coefficients in `[-bound, bound]`.
    pub fn sample_element_within(&self, seed: u64, bound: i64) -> MultiPoly {
        let mut r = rng::stream(seed, 0x5a4d);
        let rows: Vec<&SVec> = self.basis.rows().collect();
        for _ in 0..100 {
            let coeffs: Vec<ExactScalar> = rows.iter().map(|_| rng::bounded(&mut r, bound)).collect();
            let v = svec_combine(coeffs.iter().zip(rows.iter().copied()));
            if !v.is_empty() {
                return self.jet.to_poly(&v);
            }
        }
        MultiPoly::zero(self.nvars())
    }
}

pub fn check_invertible(phi: &[MultiPoly]) -> Result<()> {
    let n = phi.len();
    if phi.iter().any(|p| !p.constant_term().is_zero()) {
        return Err(Error::NonInvertible);
    }
    let mut e = Echelon::new();
    for p in phi {
        let row: SVec = (0..n)
            .filter_map(|j| {
                let mut ex = [0; 3];
                ex[j] = 1;
                let c = p.coeff(&ex);
                (!c.is_zero()).then_some((j, c))
            })
            .collect();
        e.insert(&row);
    }
    if e.rank() == n {
        Ok(())
    } else {
        Err(Error::NonInvertible)
    }
}

/// Certified ideal generated by `gens` (global coordinates) at `center`.
pub fn close_ideal(gens: &[MultiPoly], center: &[ExactScalar]) -> Result<JetIdeal> {
    close_ideal_with_ceiling(gens, center, crate::jet_ceiling())
}

pub fn close_ideal_with_ceiling(gens: &[MultiPoly], center: &[ExactScalar], ceiling: usize) -> Result<JetIdeal> {
    if gens.iter().all(|g| g.is_zero()) {
        return Err(Error::ZeroInput);
    }
    let nvars = gens[0].nvars();
    let local: Vec<MultiPoly> = gens.iter().map(|g| g.translate(center)).collect();
    for n in schedule(ceiling) {
        let jet = JetSpace::new(nvars, n);
        let vecs: Vec<SVec> = local.iter().map(|g| jet.to_vec(g)).filter(|v| !v.is_empty()).collect();
        let basis = saturate(&jet, &vecs);
        if let Some(d) = find_certificate(&jet, &basis) {
            let ideal = JetIdeal { center: center.to_vec(), jet, basis, certificate: d };
            // present at D + 1 and check the colength against a fresh closure
            let target = d + 1;
            let fresh_jet = JetSpace::new(nvars, target);
            let fresh: Vec<SVec> = local.iter().map(|g| fresh_jet.to_vec(g)).filter(|v| !v.is_empty()).collect();
            let fresh_basis = saturate(&fresh_jet, &fresh);
            let out = ideal.at_order(target);
            if fresh_basis.rank() != out.basis.rank() {
                return Err(Error::InvariantBreach("colength unstable after certification".into()));
            }
            return Ok(out);
        }
    }
    Err(Error::NonFiniteColength(ceiling))
}

pub fn origin(nvars: usize) -> Vec<ExactScalar> {
    vec![ExactScalar::zero(); nvars]
}

/// Jacobian ideal at the origin.
pub fn jacobian_ideal(f: &MultiPoly) -> Result<JetIdeal> {
    close_ideal(&f.gradient(), &origin(f.nvars()))
}

pub fn milnor_number(f: &MultiPoly) -> Result<usize> {
    Ok(jacobian_ideal(f)?.colength())
}

/// `<f, f_x, f_y>` at the origin.
pub fn tjurina_ideal(f: &MultiPoly) -> Result<JetIdeal> {
    let mut gens = vec![f.clone()];
    gens.extend(f.gradient());
    close_ideal(&gens, &origin(f.nvars()))
}

pub fn tjurina_number(f: &MultiPoly) -> Result<usize> {
    Ok(tjurina_ideal(f)?.colength())
}

/// Order of `f` at the origin.
pub fn multiplicity(f: &MultiPoly) -> u32 {
    f.order().unwrap_or(0)
}

/// Rank of the Hessian at the origin subtracted from the variable count.
pub fn hessian_corank(f: &MultiPoly) -> usize {
    let n = f.nvars();
    let mut e = Echelon::new();
    for i in 0..n {
        let row: SVec = (0..n)
            .filter_map(|j| {
                let mut ex = [0; 3];
                ex[i] += 1;
                ex[j] += 1;
                let c = f.coeff(&ex);
                (!c.is_zero()).then_some((j, c))
            })
            .collect();
        e.insert(&row);
    }
    n - e.rank()
}

/// Type of an isolated plane singularity, simple ones named.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SingType {
    Smooth,
    A(usize),
    D(usize),
    E(usize),
    NonSimple { mu: usize },
}

impl SingType {
    pub fn is_simple(&self) -> bool {
        !matches!(self, SingType::NonSimple { .. })
    }

    pub fn mu(&self) -> usize {
        match *self {
            SingType::Smooth => 0,
            SingType::A(k) | SingType::D(k) | SingType::E(k) => k,
            SingType::NonSimple { mu } => mu,
        }
    }

    pub fn name(&self) -> String {
        match *self {
            SingType::Smooth => "A0".into(),
            SingType::A(k) => format!("A{k}"),
            SingType::D(k) => format!("D{k}"),
            SingType::E(k) => format!("E{k}"),
            SingType::NonSimple { mu } => format!("nonsimple(mu={mu})"),
        }
    }
}

/// A binary cubic form is the cube of a linear form iff its Hessian
/// vanishes.
fn is_cube(c: &MultiPoly) -> bool {
    let h = c.derivative(0).derivative(0).mul(&c.derivative(1).derivative(1)).sub(&c.derivative(0).derivative(1).pow(2));
    h.is_zero()
}

/// Classifies the plane germ of `f` at the origin by multiplicity, Milnor
/// number, Hessian corank and the tangent cone.
pub fn classify(f: &MultiPoly) -> Result<SingType> {
    let mt = multiplicity(f);
    let mu = milnor_number(f)?;
    if mu == 0 {
        return Ok(SingType::Smooth);
    }
    if mt == 2 || (f.nvars() != 2 && hessian_corank(f) <= 1) {
        return Ok(SingType::A(mu));
    }
    if f.nvars() == 2 && mt == 3 {
        let cone = f.homogeneous_part(3);
        if !is_cube(&cone) {
            return Ok(SingType::D(mu));
        }
        if (6..=8).contains(&mu) {
            return Ok(SingType::E(mu));
        }
    }
    Ok(SingType::NonSimple { mu })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, PartialOrd, Ord)]
pub enum IdealKind {
    EA,
    A,
    A1,
    Crit0,
    Crit,
}

/// `{ g : g and all partials of g lie in the reference }`, solved in
/// `J(D + 1)` where `m^D` lies in the reference ideal.
fn derived_from_reference(reference: &JetIdeal) -> JetIdeal {
    let nvars = reference.nvars();
    let n = reference.certificate() + 1;
    let jet = JetSpace::new(nvars, n);
    let refi = reference.at_order(reference.jet_order().max(reference.certificate()));
    let width = refi.jet.dim();
    let cols: Vec<SVec> = (0..jet.dim())
        .map(|j| {
            let m = MultiPoly::monomial(nvars, jet.monomial(j), ExactScalar::one());
            let mut col: SVec = Vec::new();
            let mut parts = vec![m.clone()];
            parts.extend(m.gradient());
            for (k, q) in parts.iter().enumerate() {
                for (c, x) in refi.normal_form(q) {
                    col.push((k * width + c, x));
                }
            }
            col
        })
        .collect();
    let rows = transpose(&cols, (nvars + 1) * width);
    let mut cond = Echelon::new();
    for r in rows.iter().filter(|r| !r.is_empty()) {
        cond.insert(r);
    }
    let mut basis = Echelon::new();
    for v in cond.nullspace(jet.dim()) {
        basis.insert(&v);
    }
    JetIdeal::from_subspace(reference.center.clone(), jet, basis).expect("derived ideal contains m^(D+1)")
}

/// The ideals `I^ea`, `I^a`, `m I^a`, `I_0(f)` and `m I_0(f)` at the origin.
pub fn derived_ideal(f: &MultiPoly, kind: IdealKind) -> Result<JetIdeal> {
    match kind {
        IdealKind::EA | IdealKind::A | IdealKind::A1 => {
            let t = tjurina_ideal(f).map_err(|e| match e {
                Error::NonFiniteColength(_) => Error::NotReduced,
                other => other,
            })?;
            match kind {
                IdealKind::EA => Ok(t),
                IdealKind::A => Ok(derived_from_reference(&t)),
                _ => Ok(derived_from_reference(&t).mul_maximal()),
            }
        }
        IdealKind::Crit0 => Ok(derived_from_reference(&jacobian_ideal(f)?)),
        IdealKind::Crit => Ok(derived_from_reference(&jacobian_ideal(f)?).mul_maximal()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::p;

    fn o() -> Vec<ExactScalar> {
        origin(2)
    }

    #[test]
    fn close_examples() {
        assert_eq!(close_ideal(&[p("x"), p("y")], &o()).unwrap().colength(), 1);
        assert_eq!(close_ideal(&[p("x^2"), p("y^2")], &o()).unwrap().colength(), 4);
        assert_eq!(close_ideal(&[p("3*x^2"), p("2*y")], &o()).unwrap().colength(), 2);
        assert!(matches!(milnor_number(&p("x^2")), Err(Error::NonFiniteColength(_))));
    }

    #[test]
    fn milnor_normal_forms() {
        for k in 1..=12 {
            assert_eq!(milnor_number(&p(&format!("x^{} + y^2", k + 1))).unwrap(), k);
            assert_eq!(tjurina_number(&p(&format!("x^{} + y^2", k + 1))).unwrap(), k);
        }
        assert_eq!(milnor_number(&p("x^2*y - y^3")).unwrap(), 4);
        assert_eq!(milnor_number(&p("x^3 + y^4")).unwrap(), 6);
    }

    #[test]
    fn classification() {
        assert_eq!(classify(&p("x^2 + y^2")).unwrap(), SingType::A(1));
        assert_eq!(classify(&p("y^2 - x^8")).unwrap(), SingType::A(7));
        assert_eq!(classify(&p("x^2*y + y^5")).unwrap(), SingType::D(6));
        assert_eq!(classify(&p("x^3 + x*y^3")).unwrap(), SingType::E(7));
        assert_eq!(classify(&p("x^4 + y^4")).unwrap(), SingType::NonSimple { mu: 9 });
        assert_eq!(classify(&p("x + y^2")).unwrap(), SingType::Smooth);
    }

    #[test]
    fn derived_examples() {
        assert_eq!(derived_ideal(&p("x^2 + y^2"), IdealKind::Crit0).unwrap().colength(), 3);
        // x^{k+1} + y^2: the conditions are monomial, excluding x^j (j <= k)
        // and x^j y (j < k)
        for k in 1..=8u32 {
            let f = p(&format!("x^{} + y^2", k + 1));
            let crit0 = derived_ideal(&f, IdealKind::Crit0).unwrap();
            assert_eq!(crit0.colength(), (2 * k + 1) as usize);
            let a = derived_ideal(&f, IdealKind::A).unwrap();
            assert_eq!(a.colength(), crit0.colength());
            assert!(a.same_ideal(&crit0));
        }
    }

    #[test]
    fn maximal_multiple_adds_generator_count() {
        let f = p("x^3 + y^2");
        let a = derived_ideal(&f, IdealKind::A).unwrap();
        let a1 = derived_ideal(&f, IdealKind::A1).unwrap();
        // I^a = <x^3, x y, y^2>, three minimal generators
        assert_eq!(a.colength(), 5);
        assert_eq!(a1.colength(), 8);
    }

    #[test]
    fn certification_is_stable() {
        for f in ["x^5 + y^2", "x^3 + y^4", "x^2*y + y^5", "x^4 + x^2*y^3 + y^5"] {
            let j = jacobian_ideal(&p(f)).unwrap();
            let up = j.at_order(j.jet_order() + 2);
            assert_eq!(j.colength(), up.colength());
        }
    }

    #[test]
    fn quotient_of_fat_point() {
        let m3 = JetIdeal::max_power(2, 3, o());
        let q = m3.quotient(&p("x + 2*y"));
        assert_eq!(q.colength(), 3);
        assert_eq!(m3.quotient(&p("x + 1")).colength(), 6);
    }
}
