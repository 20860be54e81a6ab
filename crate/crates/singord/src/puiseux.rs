//! Resolution of plane germs by point blow-ups, tracked per packet of
//! conjugate points.
//!
//! A germ is blown up at its singular point; the strict transform is
//! followed at every point of the exceptional divisor given by a factor of
//! the tangent cone. Points cut out by an irreducible-or-not factor of
//! degree `d` are kept together as one vertex carrying `packet = d`, with
//! coordinates in `K[a]/(factor)`. Conjugates are never separated; a zero
//! divisor met on the way splits the factor and the subtree is recomputed.
//!
//! Local coordinates `(s, t)` at every point keep `{s = 0}` equal to the
//! newest exceptional divisor through it and `{t = 0}` equal to an older
//! one when the point is a satellite.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::colength;
use crate::error::{Error, Result};
use crate::numfield::{Elt, FResult, Flow, NumField};
use crate::poly::MultiPoly;
use crate::resultant::eliminant;
use crate::rng;
use crate::scalar::{binomial, ExactScalar, Rational};
use crate::upoly::UPoly;

pub type Key = (u32, u32);

/// Coefficients that can be carried through chart substitutions.
pub trait Coef: Clone {
    fn zero() -> Self;
    fn is_zero_struct(&self) -> bool;
    /// `self += other * c`
    fn add_scaled(&mut self, k: &NumField, other: &Self, c: &Elt);
}

impl Coef for Elt {
    fn zero() -> Self {
        UPoly::zero()
    }
    fn is_zero_struct(&self) -> bool {
        self.is_zero()
    }
    fn add_scaled(&mut self, k: &NumField, other: &Self, c: &Elt) {
        *self = k.add(self, &k.mul(other, c));
    }
}

/// Linear form in unknown coefficients.
pub type LinForm = BTreeMap<usize, Elt>;

impl Coef for LinForm {
    fn zero() -> Self {
        BTreeMap::new()
    }
    fn is_zero_struct(&self) -> bool {
        self.is_empty()
    }
    fn add_scaled(&mut self, k: &NumField, other: &Self, c: &Elt) {
        for (i, v) in other {
            let e = self.entry(*i).or_insert_with(UPoly::zero);
            *e = k.add(e, &k.mul(v, c));
            if e.is_zero() {
                self.remove(i);
            }
        }
    }
}

pub type LPoly<C> = BTreeMap<Key, C>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Chart {
    /// `t = s (t' + alpha)`
    One(Elt),
    /// `s = s' t'`, `t = s'`
    Two,
}

/// Where a point sits on the exceptional divisor of its parent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointData {
    pub field: NumField,
    pub chart: Chart,
}

fn add_term<C: Coef>(out: &mut LPoly<C>, k: &NumField, key: Key, c: &C, scale: &Elt) {
    let e = out.entry(key).or_insert_with(C::zero);
    e.add_scaled(k, c, scale);
    if e.is_zero_struct() {
        out.remove(&key);
    }
}

/// Strict (or virtual) transform: substitute the chart and divide by
/// `s'^m`. Terms of total degree below `m` must be absent. Only terms of
/// total degree below `prec` are kept.
pub fn chart_transform<C: Coef>(k: &NumField, f: &LPoly<C>, m: u32, chart: &Chart, prec: u32) -> LPoly<C> {
    let mut out = LPoly::new();
    match chart {
        Chart::Two => {
            let one = k.one();
            for (&(i, j), c) in f {
                debug_assert!(i + j >= m);
                let a = i + j - m;
                if a + i < prec {
                    add_term(&mut out, k, (a, i), c, &one);
                }
            }
        }
        Chart::One(alpha) => {
            let mut pows = vec![k.one()];
            for (&(i, j), c) in f {
                debug_assert!(i + j >= m);
                let a = i + j - m;
                if a >= prec {
                    continue;
                }
                while pows.len() <= j as usize {
                    let nx = k.mul(pows.last().unwrap(), alpha);
                    pows.push(nx);
                }
                for kk in 0..=j {
                    if a + kk >= prec {
                        break;
                    }
                    let p = &pows[(j - kk) as usize];
                    if p.is_zero() {
                        continue;
                    }
                    let s = k.scale(p, &ExactScalar::from_rational(binomial(j, kk)));
                    add_term(&mut out, k, (a, kk), c, &s);
                }
            }
        }
    }
    out
}

/// Local germ with rational (or base-field) coefficients as an `LPoly`.
pub fn lpoly_from(f: &MultiPoly, prec: u32) -> LPoly<Elt> {
    f.terms()
        .filter(|(e, _)| e[0] + e[1] < prec)
        .map(|(e, c)| ((e[0], e[1]), UPoly::constant(c.clone())))
        .collect()
}

/// Multiplicity of a truncated germ, deciding zero divisors on the way.
fn order_checked(k: &NumField, f: &LPoly<Elt>, prec: u32) -> FResult<u32> {
    let mut by_deg: BTreeMap<u32, Vec<&Elt>> = BTreeMap::new();
    for (&(i, j), c) in f {
        by_deg.entry(i + j).or_default().push(c);
    }
    for (d, cs) in by_deg {
        if d >= prec {
            break;
        }
        for c in cs {
            if !k.is_zero(c)? {
                return Ok(d);
            }
        }
    }
    Err(Flow::Precision)
}

// ---- univariate polynomials over a split-able field ----

pub(crate) type LU = Vec<Elt>;

pub(crate) fn lu_trim(k: &NumField, mut p: LU) -> FResult<LU> {
    while let Some(c) = p.last() {
        if c.is_zero() || k.is_zero(c)? {
            p.pop();
        } else {
            break;
        }
    }
    Ok(p)
}

fn lu_monic(k: &NumField, p: &LU) -> FResult<LU> {
    let inv = k.inv(p.last().unwrap())?;
    Ok(p.iter().map(|c| k.mul(c, &inv)).collect())
}

fn lu_divrem(k: &NumField, a: &LU, b: &LU) -> FResult<(LU, LU)> {
    let db = b.len() - 1;
    let inv = k.inv(b.last().unwrap())?;
    let mut r = a.clone();
    if r.len() <= db {
        return Ok((Vec::new(), lu_trim(k, r)?));
    }
    let mut q = vec![k.zero(); r.len() - db];
    for i in (0..q.len()).rev() {
        let c = k.mul(&r[i + db], &inv);
        if c.is_zero() {
            continue;
        }
        for (j, bc) in b.iter().enumerate() {
            r[i + j] = k.sub(&r[i + j], &k.mul(&c, bc));
        }
        q[i] = c;
    }
    r.truncate(db);
    Ok((lu_trim(k, q)?, lu_trim(k, r)?))
}

pub(crate) fn lu_gcd(k: &NumField, a: &LU, b: &LU) -> FResult<LU> {
    let (mut a, mut b) = (lu_trim(k, a.clone())?, lu_trim(k, b.clone())?);
    if a.is_empty() {
        return if b.is_empty() { Ok(b) } else { lu_monic(k, &b) };
    }
    while !b.is_empty() {
        let r = lu_divrem(k, &a, &b)?.1;
        a = b;
        b = r;
    }
    lu_monic(k, &a)
}

fn lu_deriv(k: &NumField, p: &LU) -> FResult<LU> {
    lu_trim(k, p.iter().enumerate().skip(1).map(|(i, c)| k.scale(c, &ExactScalar::from_i64(i as i64))).collect())
}

fn lu_sub(k: &NumField, a: &LU, b: &LU) -> FResult<LU> {
    let n = a.len().max(b.len());
    let z = k.zero();
    lu_trim(k, (0..n).map(|i| k.sub(a.get(i).unwrap_or(&z), b.get(i).unwrap_or(&z))).collect())
}

/// Square-free factors of positive degree.
fn lu_squarefree(k: &NumField, f: &LU) -> FResult<Vec<LU>> {
    let f = lu_trim(k, f.clone())?;
    if f.len() <= 1 {
        return Ok(Vec::new());
    }
    let f = lu_monic(k, &f)?;
    let df = lu_deriv(k, &f)?;
    let a = lu_gcd(k, &f, &df)?;
    let mut b = lu_divrem(k, &f, &a)?.0;
    let c = lu_divrem(k, &df, &a)?.0;
    let mut d = lu_sub(k, &c, &lu_deriv(k, &b)?)?;
    let mut out = Vec::new();
    loop {
        let g = lu_gcd(k, &b, &d)?;
        if g.len() > 1 {
            out.push(g.clone());
        }
        b = lu_divrem(k, &b, &g)?.0;
        if b.len() <= 1 {
            break;
        }
        let c = lu_divrem(k, &d, &g)?.0;
        d = lu_sub(k, &c, &lu_deriv(k, &b)?)?;
    }
    Ok(out)
}

/// Tangent cone `sum c_j w^j` with `c_j` the coefficient of `s^(m-j) t^j`.
fn cone(f: &LPoly<Elt>, m: u32) -> LU {
    (0..=m).map(|j| f.get(&(m - j, j)).cloned().unwrap_or_else(UPoly::zero)).collect()
}

#[derive(Clone, Debug)]
enum Dir {
    Linear(Elt),
    NewField(UPoly),
    Infinity,
}

/// Directions of the points cut out by a binary form given through its
/// chart-one polynomial `q` and the multiplicity at infinity.
fn directions(k: &NumField, q: &LU, at_infinity: bool) -> FResult<Vec<Dir>> {
    let mut out = Vec::new();
    for g in lu_squarefree(k, q)? {
        if g.len() == 2 {
            out.push(Dir::Linear(k.neg(&g[0])));
        } else if k.is_base() {
            out.push(Dir::NewField(UPoly::new(g.iter().map(|c| c.coeff(0)).collect())));
        } else {
            return Err(Flow::Fail(Error::ExtensionDepth(format!(
                "tangent factor of degree {} over a field of degree {}",
                g.len() - 1,
                k.degree()
            ))));
        }
    }
    if at_infinity {
        out.push(Dir::Infinity);
    }
    Ok(out)
}

/// Runs `attempt` over `K[a]/(g)`, splitting `g` whenever a zero divisor
/// shows up, and collects the results per factor.
pub(crate) fn over_new_fields<T>(g: &UPoly, mut attempt: impl FnMut(&NumField) -> FResult<T>) -> FResult<Vec<T>> {
    let mut work = vec![g.monic()];
    let mut out = Vec::new();
    while let Some(h) = work.pop() {
        let kf = NumField::new(h.clone());
        match attempt(&kf) {
            Ok(v) => out.push(v),
            Err(Flow::Split(f1)) => {
                let f2 = kf.cofactor(&f1);
                work.push(f2);
                work.push(f1);
            }
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}

#[derive(Clone, Debug)]
struct Site {
    depth: usize,
    s_div: Option<usize>,
    t_div: Option<usize>,
}

fn child_site(k: &NumField, parent: &Site, chart: &Chart) -> FResult<Site> {
    let t_div = match chart {
        Chart::One(alpha) => {
            if k.is_zero(alpha)? {
                parent.t_div
            } else {
                None
            }
        }
        Chart::Two => parent.s_div,
    };
    Ok(Site { depth: parent.depth + 1, s_div: Some(parent.depth), t_div })
}

#[derive(Clone, Debug)]
struct RNode {
    mult: u32,
    satellite: bool,
    prox_depths: Vec<usize>,
    packet: usize,
    point: Option<PointData>,
    children: Vec<RNode>,
    exits: Vec<usize>,
}

enum Outcome {
    Essential(RNode),
    Exit(usize),
}

fn resolve_point(k: &NumField, f: &LPoly<Elt>, prec: u32, site: &Site, point: Option<PointData>) -> FResult<Outcome> {
    let m = order_checked(k, f, prec)?;
    let is_root = site.depth == 0;
    let satellite = site.t_div.is_some();
    if m == 0 {
        return Err(Flow::Fail(Error::InvalidInput("germ does not vanish at the center".into())));
    }
    if !is_root && !satellite && m == 1 {
        let tangent = match f.get(&(0, 1)) {
            None => true,
            Some(c) => k.is_zero(c)?,
        };
        if !tangent {
            return Ok(Outcome::Exit(k.degree()));
        }
    }
    if prec <= m + 1 {
        return Err(Flow::Precision);
    }
    let mut prox_depths = Vec::new();
    if !is_root {
        prox_depths.push(site.depth - 1);
    }
    if let Some(t) = site.t_div {
        prox_depths.push(t);
    }
    let mut node =
        RNode { mult: m, satellite, prox_depths, packet: k.degree(), point, children: Vec::new(), exits: Vec::new() };
    let q = lu_trim(k, cone(f, m))?;
    let at_inf = (q.len() as u32) < m + 1;
    let nprec = prec - m;
    for dir in directions(k, &q, at_inf)? {
        match dir {
            Dir::Linear(alpha) => {
                let chart = Chart::One(alpha);
                let cs = child_site(k, site, &chart)?;
                let g = chart_transform(k, f, m, &chart, nprec);
                let pd = PointData { field: k.clone(), chart };
                record(&mut node, resolve_point(k, &g, nprec, &cs, Some(pd))?);
            }
            Dir::Infinity => {
                let cs = child_site(k, site, &Chart::Two)?;
                let g = chart_transform(k, f, m, &Chart::Two, nprec);
                let pd = PointData { field: k.clone(), chart: Chart::Two };
                record(&mut node, resolve_point(k, &g, nprec, &cs, Some(pd))?);
            }
            Dir::NewField(gq) => {
                let outs = over_new_fields(&gq, |kf| {
                    let chart = Chart::One(kf.generator());
                    let cs = child_site(kf, site, &chart)?;
                    let g = chart_transform(kf, f, m, &chart, nprec);
                    let pd = PointData { field: kf.clone(), chart };
                    resolve_point(kf, &g, nprec, &cs, Some(pd))
                })?;
                for o in outs {
                    record(&mut node, o);
                }
            }
        }
    }
    Ok(Outcome::Essential(node))
}

fn record(node: &mut RNode, o: Outcome) {
    match o {
        Outcome::Essential(c) => node.children.push(c),
        Outcome::Exit(p) => node.exits.push(p),
    }
}

// ---- cluster trees ----

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ClusterVertex {
    pub parent: Option<usize>,
    pub multiplicity: u32,
    /// Vertices whose exceptional divisor passes through this point.
    pub proximate_to: Vec<usize>,
    pub satellite: bool,
    /// Number of conjugate points represented.
    pub packet: usize,
    #[serde(skip)]
    pub point: Option<PointData>,
}

/// Weighted forest of infinitely near points; vertices are stored so that
/// parents precede children.
#[derive(Clone, Debug, Serialize, Deserialize, Default)]
pub struct ClusterTree {
    pub vertices: Vec<ClusterVertex>,
}

impl ClusterTree {
    /// One point of multiplicity `m`.
    pub fn fat(m: u32) -> ClusterTree {
        ClusterTree {
            vertices: vec![ClusterVertex {
                parent: None,
                multiplicity: m,
                proximate_to: Vec::new(),
                satellite: false,
                packet: 1,
                point: None,
            }],
        }
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn children(&self, v: usize) -> Vec<usize> {
        (0..self.vertices.len()).filter(|&c| self.vertices[c].parent == Some(v)).collect()
    }

    pub fn roots(&self) -> Vec<usize> {
        (0..self.vertices.len()).filter(|&c| self.vertices[c].parent.is_none()).collect()
    }

    /// `sum packet * m (m + 1) / 2`, the colength of the cluster ideal.
    pub fn degree(&self) -> usize {
        self.vertices.iter().map(|v| v.packet * (v.multiplicity * (v.multiplicity + 1) / 2) as usize).sum()
    }

    pub fn m2(&self) -> usize {
        self.vertices.iter().map(|v| v.packet * (v.multiplicity * v.multiplicity) as usize).sum()
    }

    pub fn delta(&self) -> usize {
        self.vertices.iter().map(|v| v.packet * (v.multiplicity * v.multiplicity.saturating_sub(1) / 2) as usize).sum()
    }

    pub fn root_multiplicity(&self) -> u32 {
        self.roots().iter().map(|&r| self.vertices[r].multiplicity).max().unwrap_or(0)
    }

    /// Largest sum of multiplicities along a chain starting at `v`.
    pub fn need(&self, v: usize) -> u32 {
        self.vertices[v].multiplicity + self.children(v).into_iter().map(|c| self.need(c)).max().unwrap_or(0)
    }

    pub fn has_directions(&self) -> bool {
        self.vertices.iter().all(|v| v.parent.is_none() || v.point.is_some())
    }

    pub fn without_directions(&self) -> ClusterTree {
        let mut t = self.clone();
        for v in &mut t.vertices {
            v.point = None;
        }
        t
    }

    /// Proximity inequalities: a point carries at least the multiplicity
    /// of the points proximate to it.
    pub fn check_proximity(&self) -> Result<()> {
        for (p, vp) in self.vertices.iter().enumerate() {
            let mut sum = 0usize;
            for vq in &self.vertices {
                if vq.proximate_to.contains(&p) {
                    sum += vq.multiplicity as usize * vq.packet / vp.packet.max(1);
                }
            }
            if sum > vp.multiplicity as usize {
                return Err(Error::ProximityViolation(p));
            }
        }
        Ok(())
    }

    fn depth(&self, v: usize) -> usize {
        let mut d = 0;
        let mut c = v;
        while let Some(p) = self.vertices[c].parent {
            d += 1;
            c = p;
        }
        d
    }

    fn canon(&self, v: usize) -> String {
        let vx = &self.vertices[v];
        let dv = self.depth(v);
        let mut prox: Vec<usize> = vx.proximate_to.iter().map(|&p| dv - self.depth(p)).collect();
        prox.sort();
        let mut kids: BTreeMap<String, usize> = BTreeMap::new();
        for c in self.children(v) {
            let w = self.vertices[c].packet / vx.packet.max(1);
            *kids.entry(self.canon(c)).or_default() += w.max(1);
        }
        let inner: Vec<String> = kids.into_iter().map(|(k, n)| format!("{n}x{k}")).collect();
        format!("({}{:?}[{}])", vx.multiplicity, prox, inner.join(","))
    }

    /// A string equal for two trees exactly when they have the same
    /// weighted shape and proximity structure, packets expanded.
    pub fn canonical(&self) -> String {
        let mut roots: Vec<String> = self.roots().into_iter().map(|r| self.canon(r)).collect();
        roots.sort();
        roots.join("+")
    }

    pub fn same_shape(&self, other: &ClusterTree) -> bool {
        self.canonical() == other.canonical()
    }

    fn from_rnode(root: &RNode) -> (ClusterTree, Vec<(usize, usize)>) {
        let mut t = ClusterTree::default();
        let mut exits = Vec::new();
        let mut path: Vec<usize> = Vec::new();
        fn walk(
            n: &RNode,
            parent: Option<usize>,
            path: &mut Vec<usize>,
            t: &mut ClusterTree,
            exits: &mut Vec<(usize, usize)>,
        ) {
            let id = t.vertices.len();
            let proximate_to = n.prox_depths.iter().map(|&d| path[d]).collect();
            t.vertices.push(ClusterVertex {
                parent,
                multiplicity: n.mult,
                proximate_to,
                satellite: n.satellite,
                packet: n.packet,
                point: n.point.clone(),
            });
            for &p in &n.exits {
                exits.push((id, p));
            }
            path.push(id);
            for c in &n.children {
                walk(c, Some(id), path, t, exits);
            }
            path.pop();
        }
        walk(root, None, &mut path, &mut t, &mut exits);
        (t, exits)
    }
}

// ---- branches ----

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct BranchClass {
    pub ramification: u32,
    /// Characteristic exponents `beta_j / e` with the degree of the packet
    /// of points where each one appears.
    pub characteristic: Vec<(String, usize)>,
    pub multiplicity_sequence: Vec<u32>,
    pub packet: usize,
}

fn branch_of(tree: &ClusterTree, vertex: usize, packet: usize) -> BranchClass {
    let mut path = vec![vertex];
    while let Some(p) = tree.vertices[*path.last().unwrap()].parent {
        path.push(p);
    }
    path.reverse();
    let len = path.len();
    // the exit point is proximate to the last essential vertex only
    let prox = |j: usize| -> Vec<usize> {
        if j == len {
            vec![path[len - 1]]
        } else {
            tree.vertices[path[j]].proximate_to.clone()
        }
    };
    let mut ms = vec![0u32; len + 1];
    ms[len] = 1;
    for i in (0..len).rev() {
        ms[i] = (i + 1..=len).filter(|&j| prox(j).contains(&path[i])).map(|j| ms[j]).sum();
    }
    let e = ms[0];
    let mut characteristic = Vec::new();
    let mut groups: Vec<Vec<usize>> = vec![vec![0]];
    for i in 1..len {
        if !tree.vertices[path[i]].satellite && tree.vertices[path[i - 1]].satellite {
            groups.push(vec![i]);
        } else {
            groups.last_mut().unwrap().push(i);
        }
    }
    let mut e_prev = e as u64;
    let mut beta = 0u64;
    for g in groups {
        if e_prev <= 1 {
            break;
        }
        let sum: u64 = g.iter().map(|&i| (ms[i] as u64) * (ms[i] as u64)).sum();
        beta += sum / e_prev;
        let q = Rational::new((beta as i64).into(), (e as i64).into());
        characteristic.push((q.to_string(), tree.vertices[path[g[0]]].packet));
        e_prev = num_integer::gcd(e_prev, beta);
    }
    BranchClass { ramification: e, characteristic, multiplicity_sequence: ms, packet }
}

/// Essential tree, branch classes and classical invariants of a germ.
#[derive(Clone, Debug, Serialize)]
pub struct Resolution {
    pub tree: ClusterTree,
    pub branches: Vec<BranchClass>,
    pub mt: u32,
    pub delta: usize,
    pub r: usize,
}

const PRECISIONS: [u32; 4] = [24, 48, 96, 192];

/// Resolves the germ of `f` at `center`.
pub fn resolve(f: &MultiPoly, center: &[ExactScalar]) -> Result<Resolution> {
    if f.nvars() != 2 {
        return Err(Error::InvalidInput("resolution needs a plane germ".into()));
    }
    if f.is_zero() {
        return Err(Error::ZeroInput);
    }
    f.radicand()?;
    let local = f.translate(center);
    if !local.constant_term().is_zero() {
        return Err(Error::InvalidInput("germ does not vanish at the center".into()));
    }
    let k = NumField::base();
    let site = Site { depth: 0, s_div: None, t_div: None };
    for prec in PRECISIONS {
        let lp = lpoly_from(&local, prec);
        match resolve_point(&k, &lp, prec, &site, None) {
            Ok(Outcome::Essential(root)) => return Ok(finish(&root)),
            Ok(Outcome::Exit(_)) => unreachable!("the root is always kept"),
            Err(Flow::Precision) => continue,
            Err(Flow::Split(_)) => return Err(Error::InvariantBreach("split of the base field".into())),
            Err(Flow::Fail(e)) => return Err(e),
        }
    }
    // a germ that outruns every precision has a multiple component
    match colength::tjurina_number(&local) {
        Err(Error::NonFiniteColength(_)) => Err(Error::NotReduced),
        Err(e) => Err(e),
        Ok(_) => Err(Error::InvariantBreach("resolution did not terminate".into())),
    }
}

fn finish(root: &RNode) -> Resolution {
    let (tree, exits) = ClusterTree::from_rnode(root);
    let branches: Vec<BranchClass> = exits.iter().map(|&(v, p)| branch_of(&tree, v, p)).collect();
    let r = exits.iter().map(|e| e.1).sum();
    Resolution { mt: tree.vertices[0].multiplicity, delta: tree.delta(), r, tree, branches }
}

pub fn delta_invariant(f: &MultiPoly, center: &[ExactScalar]) -> Result<usize> {
    Ok(resolve(f, center)?.delta)
}

// ---- pairs of germs ----

#[derive(Clone, Debug)]
struct JNode {
    mf: u32,
    mg: u32,
    satellite: bool,
    prox_depths: Vec<usize>,
    packet: usize,
    point: Option<PointData>,
    children: Vec<JNode>,
}

struct JointBudget {
    used: usize,
    limit: usize,
}

#[allow(clippy::too_many_arguments)]
fn joint_point(
    k: &NumField,
    f: &LPoly<Elt>,
    pf: u32,
    g: &LPoly<Elt>,
    pg: u32,
    site: &Site,
    point: Option<PointData>,
    budget: &mut JointBudget,
) -> FResult<JNode> {
    let mf = order_checked(k, f, pf)?;
    let mg = order_checked(k, g, pg)?;
    let mut prox_depths = Vec::new();
    if site.depth > 0 {
        prox_depths.push(site.depth - 1);
    }
    if let Some(t) = site.t_div {
        prox_depths.push(t);
    }
    let mut node = JNode {
        mf,
        mg,
        satellite: site.t_div.is_some(),
        prox_depths,
        packet: k.degree(),
        point,
        children: Vec::new(),
    };
    if mf == 0 || mg == 0 {
        return Ok(node);
    }
    budget.used += k.degree() * (mf * mg) as usize;
    if budget.used > budget.limit {
        return Err(Flow::Fail(Error::CommonComponent));
    }
    if pf <= mf + 1 || pg <= mg + 1 {
        return Err(Flow::Precision);
    }
    let qf = lu_trim(k, cone(f, mf))?;
    let qg = lu_trim(k, cone(g, mg))?;
    let inf = (qf.len() as u32) < mf + 1 && (qg.len() as u32) < mg + 1;
    let common = lu_gcd(k, &qf, &qg)?;
    let (nf, ng) = (pf - mf, pg - mg);
    let step = |kf: &NumField, chart: Chart, budget: &mut JointBudget| -> FResult<JNode> {
        let cs = child_site(kf, site, &chart)?;
        let f2 = chart_transform(kf, f, mf, &chart, nf);
        let g2 = chart_transform(kf, g, mg, &chart, ng);
        let pd = PointData { field: kf.clone(), chart };
        joint_point(kf, &f2, nf, &g2, ng, &cs, Some(pd), budget)
    };
    for dir in directions(k, &common, inf)? {
        match dir {
            Dir::Linear(alpha) => {
                let c = step(k, Chart::One(alpha), budget)?;
                node.children.push(c);
            }
            Dir::Infinity => {
                let c = step(k, Chart::Two, budget)?;
                node.children.push(c);
            }
            Dir::NewField(gq) => {
                let start = budget.used;
                let outs = over_new_fields(&gq, |kf| {
                    budget.used = start;
                    let r = step(kf, Chart::One(kf.generator()), budget);
                    r.map(|n| (n, budget.used - start))
                });
                let outs = outs?;
                budget.used = start + outs.iter().map(|o| o.1).sum::<usize>();
                node.children.extend(outs.into_iter().map(|o| o.0));
            }
        }
    }
    Ok(node)
}

fn joint(f: &MultiPoly, g: &MultiPoly, limit: usize) -> Result<JNode> {
    let k = NumField::base();
    let site = Site { depth: 0, s_div: None, t_div: None };
    for prec in PRECISIONS {
        let mut budget = JointBudget { used: 0, limit };
        match joint_point(&k, &lpoly_from(f, prec), prec, &lpoly_from(g, prec), prec, &site, None, &mut budget) {
            Ok(n) => return Ok(n),
            Err(Flow::Precision) => continue,
            Err(Flow::Split(_)) => return Err(Error::InvariantBreach("split of the base field".into())),
            Err(Flow::Fail(e)) => return Err(e),
        }
    }
    Err(Error::CommonComponent)
}

fn jsum(n: &JNode) -> usize {
    if n.mf == 0 || n.mg == 0 {
        return 0;
    }
    n.packet * (n.mf * n.mg) as usize + n.children.iter().map(jsum).sum::<usize>()
}

fn check_pair(f: &MultiPoly, g: &MultiPoly) -> Result<()> {
    if f.is_zero() || g.is_zero() {
        return Err(Error::ZeroInput);
    }
    if f.nvars() != 2 || g.nvars() != 2 {
        return Err(Error::InvalidInput("intersection needs plane germs".into()));
    }
    Ok(())
}

/// Local intersection number by Noether's formula over common infinitely
/// near points.
pub fn intersection_number(f: &MultiPoly, g: &MultiPoly, center: &[ExactScalar]) -> Result<usize> {
    check_pair(f, g)?;
    let (lf, lg) = (f.translate(center), g.translate(center));
    if !lf.constant_term().is_zero() || !lg.constant_term().is_zero() {
        return Ok(0);
    }
    let limit = (f.degree() * g.degree()) as usize;
    Ok(jsum(&joint(&lf, &lg, limit)?))
}

/// Intersection multiplicity, cross-checked against the order in `x` of
/// the resultant in `y` after a seeded shear.
pub fn intersection_multiplicity(f: &MultiPoly, g: &MultiPoly, center: &[ExactScalar]) -> Result<usize> {
    let i = intersection_number(f, g, center)?;
    let (lf, lg) = (f.translate(center), g.translate(center));
    if i == 0 {
        return Ok(0);
    }
    let mut r = rng::stream(0x1e5, 7);
    let mut best = usize::MAX;
    for _ in 0..5 {
        let c = ExactScalar::from_i64(rng::small_nonzero(&mut r));
        // x -> x + c y sends other intersection points off the line x = 0
        let shear = [MultiPoly::var(2, 0).add(&MultiPoly::var(2, 1).scale(&c)), MultiPoly::var(2, 1)];
        let (sf, sg) = (lf.compose(&shear), lg.compose(&shear));
        let res = eliminant(&sf, &sg, 1)?;
        if res.is_zero() {
            return Err(Error::CommonComponent);
        }
        let ord = res.order().unwrap() as usize;
        best = best.min(ord);
        if ord == i {
            return Ok(i);
        }
    }
    Err(Error::InvariantBreach(format!("intersection {i} disagrees with resultant order {best}")))
}

fn jtree(n: &JNode) -> ClusterTree {
    let mut t = ClusterTree::default();
    let mut path: Vec<usize> = Vec::new();
    fn walk(n: &JNode, parent: Option<usize>, path: &mut Vec<usize>, t: &mut ClusterTree) {
        if n.mf == 0 || n.mg == 0 {
            return;
        }
        let id = t.vertices.len();
        t.vertices.push(ClusterVertex {
            parent,
            multiplicity: n.mf.min(n.mg),
            proximate_to: n.prox_depths.iter().map(|&d| path[d]).collect(),
            satellite: n.satellite,
            packet: n.packet,
            point: n.point.clone(),
        });
        path.push(id);
        for c in &n.children {
            walk(c, Some(id), path, t);
        }
        path.pop();
    }
    walk(n, None, &mut path, &mut t);
    t
}

/// Common infinitely near points of two germs at the origin with the
/// smaller multiplicity at each.
pub fn common_tree(f: &MultiPoly, g: &MultiPoly) -> Result<ClusterTree> {
    check_pair(f, g)?;
    let limit = (f.degree() * g.degree()) as usize;
    Ok(jtree(&joint(f, g, limit)?))
}

/// Maximal cluster subscheme of an ideal, read off from generic members.
pub fn cluster_of_ideal(ideal: &colength::JetIdeal, seed: u64) -> Result<ClusterTree> {
    if ideal.colength() == 0 {
        return Ok(ClusterTree::default());
    }
    if ideal.nvars() != 2 {
        return Err(Error::InvalidInput("cluster trees live in the plane".into()));
    }
    let draw = |k: u64| ideal.sample_element_within(seed.wrapping_mul(3).wrapping_add(k), 1000);
    let (s1, s2, s3) = (draw(1), draw(2), draw(3));
    let t12 = common_tree(&s1, &s2)?;
    let t13 = common_tree(&s1, &s3)?;
    if !t12.same_shape(&t13) {
        return Err(Error::GenericityFailure("generic members disagree on the cluster".into()));
    }
    Ok(t12)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::p;

    fn o() -> Vec<ExactScalar> {
        vec![ExactScalar::zero(), ExactScalar::zero()]
    }

    fn mults(t: &ClusterTree) -> Vec<u32> {
        t.vertices.iter().map(|v| v.multiplicity).collect()
    }

    #[test]
    fn cusp_node_a4() {
        let c = resolve(&p("y^2 - x^3"), &o()).unwrap();
        assert_eq!(mults(&c.tree), vec![2, 1, 1]);
        assert_eq!((c.delta, c.r), (1, 1));
        assert_eq!(c.branches[0].characteristic, vec![("3/2".to_string(), 1)]);
        let n = resolve(&p("y^2 - x^2"), &o()).unwrap();
        assert_eq!(mults(&n.tree), vec![2]);
        assert_eq!((n.delta, n.r), (1, 2));
        let a4 = resolve(&p("y^2 - x^5"), &o()).unwrap();
        assert_eq!(mults(&a4.tree), vec![2, 2, 1, 1]);
        assert_eq!(a4.tree.degree(), 8);
        assert_eq!(a4.delta, 2);
    }

    #[test]
    fn triple_point_and_packets() {
        let t = resolve(&p("x^3 - y^3"), &o()).unwrap();
        assert_eq!((t.delta, t.r), (3, 3));
        let q = resolve(&p("(x^2 + y^2)^2 + x^5"), &o()).unwrap();
        let mu = colength::milnor_number(&p("(x^2 + y^2)^2 + x^5")).unwrap();
        assert_eq!(mu + q.r, 2 * q.delta + 1);
        q.tree.check_proximity().unwrap();
    }

    #[test]
    fn intersections() {
        assert_eq!(intersection_multiplicity(&p("y"), &p("x"), &o()).unwrap(), 1);
        assert_eq!(intersection_multiplicity(&p("y^2 - x^3"), &p("y"), &o()).unwrap(), 3);
        assert_eq!(intersection_multiplicity(&p("y^2 - x^3"), &p("y^2 + x^3"), &o()).unwrap(), 6);
        assert_eq!(intersection_number(&p("y*(y - x^2)"), &p("y*(x - 1)"), &o()), Err(Error::CommonComponent));
    }

    #[test]
    fn milnor_formula_on_normal_forms() {
        let germs = [
            "x^4 + y^4",
            "x^4 + x^2*y^3 + y^5",
            "x^2*y + y^5",
            "x^3 + y^4",
            "x^3 + x*y^3",
            "x^3 + y^5",
            "x*y*(x - y)*(x + y)",
            "y^2 - x^13",
            "(y - x^2)^2 - x^7",
            "(y^2 - x^3)^2 - 4*x^5*y - x^7",
            "x^5 + y^5 + x^2*y^2",
        ];
        for g in germs {
            let f = p(g);
            let r = resolve(&f, &o()).unwrap();
            let mu = colength::milnor_number(&f).unwrap();
            assert_eq!(mu + r.r, 2 * r.delta + 1, "{g}");
            r.tree.check_proximity().unwrap();
        }
    }

    #[test]
    fn not_reduced() {
        assert_eq!(resolve(&p("y^2"), &o()).unwrap_err(), Error::NotReduced);
    }
}
