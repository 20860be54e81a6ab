//! Constructive realization: polynomials of small degree with a prescribed
//! critical point, plane curves with prescribed singular points, the
//! explicit `A_k` family and the three-variable `A_k` construction.
//!
//! Nothing is trusted by construction. Every result carries a record of
//! invariants recomputed from the output polynomial, and `verified` is the
//! conjunction of those checks.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::bounds::{self, BoundReport, Flavor, GermInvariants, Rel};
use crate::cohomology::{castelnuovo, cohomology, curves_through, trial_seed};
use crate::colength::{
    classify, hessian_corank, milnor_number, multiplicity, origin, tjurina_number, JetIdeal, SingType,
};
use crate::error::{Error, Result};
use crate::linalg::Echelon;
use crate::numfield::{FResult, NumField};
use crate::poly::MultiPoly;
use crate::puiseux::{lu_gcd, lu_trim, over_new_fields, resolve, Resolution, LU};
use crate::resultant::eliminant;
use crate::rng::{self, SeededRng};
use crate::scalar::ExactScalar;
use crate::schemes::{build_scheme, random_automorphism, Position, SchemeKind, ZeroDimScheme};
use crate::upoly::{series_sqrt, UPoly};

const ATTEMPTS: usize = 5;
const TAG_CRIT: u64 = 0x7265_616c_0001;
const TAG_CURVE: u64 = 0x7265_616c_0002;
const TAG_MEMBER: u64 = 0x7265_616c_0003;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Certification {
    /// Right equivalence follows from the recomputed invariants.
    Certified,
    /// Necessary invariants agree; equivalence is not decided.
    InvariantMatched,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Checks {
    pub mu: Vec<usize>,
    pub tau: Vec<usize>,
    pub mt: Vec<u32>,
    pub delta: Vec<usize>,
    pub branches: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub corank: Option<Vec<usize>>,
    pub type_match: bool,
    pub tree_match: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub extra_sing_clean: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub irreducible: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t_smooth: Option<bool>,
    /// Vanishing of first cohomology, by name.
    pub h1: BTreeMap<String, bool>,
}

impl Checks {
    fn passed(&self) -> bool {
        self.type_match
            && self.tree_match
            && self.extra_sing_clean != Some(false)
            && self.irreducible != Some(false)
            && self.t_smooth != Some(false)
            && self.h1.values().all(|&v| v)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RealizationResult {
    pub polynomial: String,
    #[serde(skip)]
    pub poly: MultiPoly,
    pub degree: u32,
    pub flavor: String,
    pub targets: Vec<String>,
    pub positions: Vec<Vec<String>>,
    pub checks: Checks,
    pub bounds: Vec<BoundReport>,
    pub within_bound: bool,
    /// Existence conditions evaluated before sampling, when relevant.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub conditions: Vec<BoundReport>,
    /// Intermediate sizes: scheme degrees and orders.
    pub details: BTreeMap<String, usize>,
    pub certification: Certification,
    pub attempts: usize,
    pub seed: u64,
    pub verified: bool,
}

impl RealizationResult {
    fn finish(mut self) -> RealizationResult {
        self.within_bound = self.bounds.iter().all(|b| b.passed());
        self.verified = self.checks.passed() && self.within_bound;
        self
    }
}

fn show(v: &[ExactScalar]) -> Vec<String> {
    v.iter().map(|c| c.to_string()).collect()
}

/// Normal form of a simple type, `None` for non-simple or smooth.
pub fn normal_form(t: &str) -> Result<MultiPoly> {
    let bad = || Error::InvalidInput(format!("unknown target {t}"));
    let (kind, k) = t.split_at(1.min(t.len()));
    let k: u32 = k.parse().map_err(|_| bad())?;
    let text = match (kind, k) {
        ("A", k) if k >= 1 => format!("x^{} + y^2", k + 1),
        ("D", k) if k >= 4 => format!("x^2*y + y^{}", k - 1),
        ("E", 6) => "x^3 + y^4".into(),
        ("E", 7) => "x^3 + x*y^3".into(),
        ("E", 8) => "x^3 + y^5".into(),
        _ => return Err(bad()),
    };
    MultiPoly::parse(&text)
}

/// `x^a y^b` coefficients `c` of degree `<= deg` with `sum c x^a y^b - g`
/// in `ideal`, if any.
fn solve_modulo(ideal: &JetIdeal, g: &MultiPoly, deg: u32) -> Option<MultiPoly> {
    let big = ideal.jet().dim();
    let mons: Vec<_> = (0..=deg).flat_map(|d| crate::jet::monomials_of_degree(2, d)).collect();
    let mut e = Echelon::new();
    for (j, m) in mons.iter().enumerate() {
        let mut col = ideal.normal_form(&MultiPoly::monomial(2, *m, ExactScalar::one()));
        col.push((big + j, ExactScalar::one()));
        e.insert(&col);
    }
    let r = e.reduce(&ideal.normal_form(g));
    if r.iter().any(|(i, _)| *i < big) {
        return None;
    }
    Some(MultiPoly::from_terms(2, r.into_iter().map(|(i, c)| (mons[i - big], -c))))
}

struct PointRecord {
    mu: usize,
    tau: usize,
    mt: u32,
    delta: usize,
    r: usize,
    corank: usize,
    sing: SingType,
    tree_match: bool,
}

fn record_point(local: &MultiPoly, reference: &Resolution) -> Result<PointRecord> {
    let res = resolve(local, &origin(2))?;
    Ok(PointRecord {
        mu: milnor_number(local)?,
        tau: tjurina_number(local)?,
        mt: multiplicity(local),
        delta: res.delta,
        r: res.r,
        corank: hessian_corank(local),
        sing: classify(local)?,
        tree_match: res.tree.same_shape(&reference.tree),
    })
}

fn push_point(c: &mut Checks, p: &PointRecord) {
    c.mu.push(p.mu);
    c.tau.push(p.tau);
    c.mt.push(p.mt);
    c.delta.push(p.delta);
    c.branches.push(p.r);
}

/// Polynomial of small degree whose critical point at the origin is
/// equivalent to that of `f`.
///
/// The germ is moved by a random automorphism jet to `g`, and the lowest
/// degree `p` with `p - g` in `I(g) = m I_0(g)` is solved for; that degree
/// is at most `ord1(Z_0(g)) + 1`. For a simple germ `Z_0` is `Z^s` of the
/// curve `g = 0`, as for the analytic schemes.
pub fn realize_critical_point(f: &MultiPoly, seed: u64) -> Result<RealizationResult> {
    if f.nvars() != 2 {
        return Err(Error::InvalidInput("critical points are realized in the plane".into()));
    }
    let target = classify(f)?;
    if target == SingType::Smooth {
        return Err(Error::InvalidInput("no critical point at the origin".into()));
    }
    let reference = resolve(f, &origin(2))?;
    let inv = bounds::germ_invariants(f)?;
    let targets = bounds::order_targets(&inv, Flavor::Crit);
    let (kind0, kind) = (SchemeKind::Crit0, SchemeKind::Crit);
    let n = build_scheme(Some(f), &kind, Position::origin())?.points[0].ideal.certificate() + 1;
    let mut best: Option<RealizationResult> = None;
    let mut last = None;
    for attempt in 0..ATTEMPTS {
        let mut r = rng::stream(trial_seed(seed, attempt), TAG_CRIT);
        let g = f.compose_trunc(&random_automorphism(&mut r, n), n);
        let z0 = build_scheme(Some(&g), &kind0, Position::origin())?;
        let ord1 = castelnuovo(&z0)?.ord1;
        let z = build_scheme(Some(&g), &kind, Position::origin())?;
        let residue_ok = cohomology(&z, ord1 + 1)?.1 == 0;
        let ideal = &z.points[0].ideal;
        let low = multiplicity(f);
        let Some(p) = (low..=ord1 as u32 + 1).find_map(|d| solve_modulo(ideal, &g, d)) else {
            last = Some(Error::GenericityFailure("no polynomial of degree ord1 + 1 solves the system".into()));
            continue;
        };
        let rec = record_point(&p, &reference)?;
        let mut checks = Checks { type_match: rec.sing == target, tree_match: rec.tree_match, ..Checks::default() };
        push_point(&mut checks, &rec);
        checks.corank = Some(vec![rec.corank]);
        checks.h1.insert("residue".into(), residue_ok);
        if let SingType::A(k) = target {
            checks.type_match &= rec.mu == k && rec.corank <= 1;
        } else {
            checks.type_match &= rec.mu == inv.mu && rec.tau == inv.tau && rec.delta == inv.delta && rec.r == inv.r;
        }
        let degree = p.degree();
        let details = BTreeMap::from([
            ("deg_z".to_string(), z.degree()),
            ("deg_z_reduced".to_string(), z0.degree()),
            ("ord1_reduced".to_string(), ord1),
        ]);
        let out = RealizationResult {
            polynomial: p.to_string(),
            degree,
            poly: p,
            flavor: "crit".into(),
            targets: vec![target.name()],
            positions: vec![show(&origin(2))],
            checks,
            bounds: targets.iter().map(|t| t.check(degree as usize)).collect(),
            within_bound: false,
            conditions: Vec::new(),
            details,
            certification: if matches!(target, SingType::A(_)) {
                Certification::Certified
            } else {
                Certification::InvariantMatched
            },
            attempts: attempt + 1,
            seed,
            verified: false,
        }
        .finish();
        if !out.checks.passed() {
            last = Some(Error::VerificationFailure(format!("{} at attempt {}", target.name(), attempt + 1)));
            continue;
        }
        let done = out.verified;
        if best.as_ref().is_none_or(|b| b.degree > out.degree) {
            best = Some(out);
        }
        if done {
            break;
        }
    }
    // explicit models of lower degree, checked the same way
    for m in models(f, target)? {
        if best.as_ref().is_some_and(|b| b.degree <= m.degree()) {
            continue;
        }
        let rec = record_point(&m, &reference)?;
        let ok = rec.sing == target && rec.mu == inv.mu && rec.tree_match && rec.tau == inv.tau;
        if !ok {
            continue;
        }
        let mut checks = Checks { type_match: true, tree_match: true, ..Checks::default() };
        push_point(&mut checks, &rec);
        checks.corank = Some(vec![rec.corank]);
        let degree = m.degree();
        best = Some(
            RealizationResult {
                polynomial: m.to_string(),
                degree,
                poly: m,
                flavor: "crit".into(),
                targets: vec![target.name()],
                positions: vec![show(&origin(2))],
                checks,
                bounds: targets.iter().map(|t| t.check(degree as usize)).collect(),
                within_bound: false,
                conditions: Vec::new(),
                details: BTreeMap::from([("model".to_string(), 1)]),
                certification: if matches!(target, SingType::A(_)) {
                    Certification::Certified
                } else {
                    Certification::InvariantMatched
                },
                attempts: ATTEMPTS,
                seed,
                verified: false,
            }
            .finish(),
        );
    }
    best.ok_or_else(|| last.unwrap_or_else(|| Error::GenericityFailure("no attempt succeeded".into())))
}

/// The germ itself and, for `A_(2m-1)`, the pair `y (y - x^m)` of smooth
/// branches with contact `m`.
fn models(f: &MultiPoly, target: SingType) -> Result<Vec<MultiPoly>> {
    let mut out = vec![f.clone()];
    if let SingType::A(k) = target {
        if k % 2 == 1 {
            out.push(MultiPoly::parse(&format!("y^2 - x^{}*y", k.div_ceil(2)))?);
        }
    }
    Ok(out)
}

/// `(y - x^m)^2 + y^(2m)`, of degree `2m` with an `A_(2m^2 - 1)` point.
pub fn ak_family(m: u32) -> Result<RealizationResult> {
    if m < 2 {
        return Err(Error::InvalidInput("m must be at least 2".into()));
    }
    let p = MultiPoly::parse(&format!("(y - x^{m})^2 + y^{}", 2 * m))?;
    let k = (2 * m * m - 1) as usize;
    let reference = resolve(&normal_form(&format!("A{k}"))?, &origin(2))?;
    let rec = record_point(&p, &reference)?;
    let mut checks = Checks {
        type_match: rec.mu == k && rec.corank <= 1 && rec.sing == SingType::A(k),
        tree_match: rec.tree_match,
        ..Checks::default()
    };
    push_point(&mut checks, &rec);
    checks.corank = Some(vec![rec.corank]);
    let bound = ExactScalar::from_i64(2 * bounds::isqrt(k + 5) as i64 - 1);
    let degree = p.degree();
    Ok(RealizationResult {
        polynomial: p.to_string(),
        degree,
        poly: p.clone(),
        flavor: "crit".into(),
        targets: vec![format!("A{k}")],
        positions: vec![show(&origin(2))],
        checks,
        bounds: vec![BoundReport::new("t5", &p.to_string(), ExactScalar::from_i64(degree as i64), Rel::Le, bound)],
        within_bound: false,
        conditions: Vec::new(),
        details: BTreeMap::new(),
        certification: Certification::Certified,
        attempts: 1,
        seed: 0,
        verified: false,
    }
    .finish())
}

fn random_positions(r: &mut SeededRng, n: usize) -> Vec<Vec<ExactScalar>> {
    let mut out: Vec<Vec<ExactScalar>> = Vec::new();
    while out.len() < n {
        let p = vec![rng::small_rational(r), rng::small_rational(r)];
        if !out.contains(&p) {
            out.push(p);
        }
    }
    out
}

fn union_all(parts: impl IntoIterator<Item = Result<ZeroDimScheme>>) -> Result<ZeroDimScheme> {
    let mut z = ZeroDimScheme::empty();
    for p in parts {
        z = z.union(&p?)?;
    }
    Ok(z)
}

/// The points at infinity are smooth. With `F` the homogenization, a point
/// `[x : y : 0]` is singular iff it is a multiple root of the top form and
/// `F_z`, the form of degree `n - 1`, vanishes there.
fn smooth_at_infinity(d: &MultiPoly) -> bool {
    let n = d.degree();
    let (top, sub) = (d.homogeneous_part(n), d.homogeneous_part(n - 1));
    let u = UPoly::new((0..=n).map(|i| top.coeff(&[i, n - i, 0])).collect());
    let v = UPoly::new((0..n).map(|i| sub.coeff(&[i, n - 1 - i, 0])).collect());
    let affine = u.gcd(&u.derivative()).gcd(&v);
    if affine.degree().unwrap_or(0) > 0 {
        return false;
    }
    let at_x = n as usize - u.degree().unwrap_or(0);
    !(at_x >= 2 && sub.coeff(&[n - 1, 0, 0]).is_zero())
}

/// Removes every root at `a`.
fn strip_root(mut g: UPoly, a: &ExactScalar) -> UPoly {
    let lin = UPoly::linear_root(a);
    while !g.is_zero() && g.degree() > Some(0) && g.eval(a).is_zero() {
        g = g.divrem(&lin).0;
    }
    g
}

/// Decides by elimination whether `D = D_x = D_y = 0` has affine solutions
/// other than `known`, and whether the points at infinity are smooth.
pub fn extra_singularities_clean(d: &MultiPoly, known: &[Vec<ExactScalar>]) -> Result<bool> {
    if !smooth_at_infinity(d) {
        return Ok(false);
    }
    let (dx, dy) = (d.derivative(0), d.derivative(1));
    if dy.is_zero() {
        return Ok(false);
    }
    let r1 = UPoly::from_poly(&eliminant(d, &dx, 1)?, 0);
    let r2 = UPoly::from_poly(&eliminant(d, &dy, 1)?, 0);
    if r1.is_zero() || r2.is_zero() {
        return Ok(false);
    }
    let in_y = |p: &MultiPoly| -> Vec<UPoly> { p.coefficients_in(1).iter().map(|c| UPoly::from_poly(c, 0)).collect() };
    let (cd, cx, cy) = (in_y(d), in_y(&dx), in_y(&dy));
    let mut g = r1.gcd(&r2);
    let mut xs: Vec<&ExactScalar> = known.iter().map(|p| &p[0]).collect();
    xs.sort_by_key(|a| a.to_string());
    xs.dedup();
    for a in xs {
        g = strip_root(g, a);
        // other singular points on the vertical line through known ones
        let at = |cs: &[UPoly]| UPoly::new(cs.iter().map(|c| c.eval(a)).collect());
        let mut h = at(&cd).gcd(&at(&cx)).gcd(&at(&cy));
        for p in known.iter().filter(|p| &p[0] == a) {
            h = strip_root(h, &p[1]);
        }
        if h.degree().unwrap_or(0) > 0 {
            return Ok(false);
        }
    }
    if g.degree().unwrap_or(0) == 0 {
        return Ok(true);
    }
    let sq = g.divrem(&g.gcd(&g.derivative())).0;
    let found = over_new_fields(&sq, |k: &NumField| -> FResult<bool> {
        let at = |cs: &[UPoly]| -> FResult<LU> { lu_trim(k, cs.iter().map(|c| k.reduce(c)).collect()) };
        let h = lu_gcd(k, &lu_gcd(k, &at(&cd)?, &at(&cx)?)?, &at(&cy)?)?;
        Ok(h.len() > 1)
    })
    .map_err(|f| match f {
        crate::numfield::Flow::Fail(e) => e,
        _ => Error::InvariantBreach("unexpected precision request in the scan".into()),
    })?;
    Ok(!found.iter().any(|&b| b))
}

/// Certifies that a curve of degree `n` whose singular points are exactly
/// `points = (position, delta, branches)` has no component of degree
/// `n1 <= n / 2`. Two components meet in `n1 (n - n1)` points counted with
/// multiplicity, only at points with several branches, and a point
/// contributes at most its `delta`. A line component meeting the rest at two
/// or more points is tested directly.
pub fn certified_irreducible(d: &MultiPoly, points: &[(Vec<ExactScalar>, usize, usize)]) -> bool {
    let n = d.degree() as usize;
    let multi: Vec<_> = points.iter().filter(|p| p.2 >= 2).collect();
    let total: usize = multi.iter().map(|p| p.1).sum();
    for n1 in 1..=n / 2 {
        if total < n1 * (n - n1) {
            continue;
        }
        if n1 > 1 || multi.iter().any(|p| p.1 + 1 >= n) {
            return false;
        }
        let t = MultiPoly::var(2, 0);
        for (i, a) in multi.iter().enumerate() {
            for b in &multi[i + 1..] {
                let line: Vec<MultiPoly> = (0..2)
                    .map(|c| MultiPoly::constant(2, a.0[c].clone()).add(&t.scale(&(&b.0[c] - &a.0[c]))))
                    .collect();
                if d.compose(&line).is_zero() {
                    return false;
                }
            }
        }
    }
    true
}

fn kinds(flavor: Flavor) -> Result<(SchemeKind, SchemeKind, SchemeKind)> {
    match flavor {
        Flavor::Top => Ok((SchemeKind::S, SchemeKind::S1, SchemeKind::ES)),
        Flavor::An => Ok((SchemeKind::A, SchemeKind::A1, SchemeKind::EA)),
        Flavor::Crit => Err(Error::InvalidInput("plane curves take the top or an flavor".into())),
    }
}

/// Irreducible plane curve of degree `d` with singular points of the types
/// of `targets` and no others.
pub fn realize_plane_curve(targets: &[MultiPoly], d: usize, flavor: Flavor, seed: u64) -> Result<RealizationResult> {
    if targets.is_empty() || d == 0 {
        return Err(Error::InvalidInput("need at least one target and a positive degree".into()));
    }
    let (kind, kind1, kind_e) = kinds(flavor)?;
    let invs: Vec<GermInvariants> = targets.iter().map(bounds::germ_invariants).collect::<Result<_>>()?;
    let refs: Vec<Resolution> = targets.iter().map(|f| resolve(f, &origin(2))).collect::<Result<_>>()?;
    let conditions = bounds::existence_from_invariants(&invs, d)?;
    let gate_id = if flavor == Flavor::Top { "e39" } else { "e43" };
    let gate = conditions.iter().any(|c| c.id == gate_id && c.passed());
    let mut last = None;
    for attempt in 0..ATTEMPTS {
        let mut r = rng::stream(trial_seed(seed, attempt), TAG_CURVE);
        let positions = random_positions(&mut r, targets.len() + 1);
        let (zs, w) = positions.split_at(targets.len());
        let germs: Vec<MultiPoly> = targets.iter().map(|f| f.compose_trunc(&random_automorphism(&mut r, 2), d as u32 + 2)).collect();
        let at = |i: usize, k: &SchemeKind| build_scheme(Some(&germs[i]), k, Position::Explicit(zs[i].clone()));
        let z = union_all((0..targets.len()).map(|i| at(i, &kind)))?;
        let mut h1 = BTreeMap::new();
        h1.insert("e48".to_string(), cohomology(&z, d - 1)?.1 == 0);
        if !gate && !h1["e48"] {
            return Err(Error::ConditionFailed(format!("{gate_id} fails and the vanishing at degree d - 1 does not hold")));
        }
        let extra = build_scheme(None, &SchemeKind::Fat(1), Position::Explicit(w[0].clone()))?;
        h1.insert("e46".to_string(), cohomology(&z.union(&extra)?, d)?.1 == 0);
        let mut e47 = true;
        for i in 0..targets.len() {
            let zi = union_all((0..targets.len()).map(|j| at(j, if i == j { &kind1 } else { &kind })))?;
            e47 &= cohomology(&zi, d)?.1 == 0;
        }
        h1.insert("e47".to_string(), e47);
        let basis = curves_through(&z, d)?;
        if basis.is_empty() {
            last = Some(Error::GenericityFailure("empty linear system".into()));
            continue;
        }
        let mut mr = rng::stream(trial_seed(seed, attempt), TAG_MEMBER);
        let curve = basis.iter().fold(MultiPoly::zero(2), |acc, b| acc.add(&b.scale(&rng::bounded(&mut mr, 99))));
        if curve.degree() as usize != d {
            last = Some(Error::GenericityFailure("member of lower degree".into()));
            continue;
        }
        let mut checks = Checks { type_match: true, tree_match: true, ..Checks::default() };
        let mut pts = Vec::new();
        let mut local_e = Vec::new();
        for (i, inv) in invs.iter().enumerate() {
            let local = curve.translate(&zs[i]);
            let rec = match record_point(&local, &refs[i]) {
                Ok(rec) => rec,
                Err(Error::NonFiniteColength(_)) | Err(Error::NotReduced) => {
                    checks.type_match = false;
                    break;
                }
                Err(e) => return Err(e),
            };
            checks.tree_match &= rec.tree_match;
            checks.type_match &= rec.mu == inv.mu && (!inv.sing.is_simple() || rec.sing == inv.sing);
            if flavor == Flavor::An {
                checks.type_match &= rec.tau == inv.tau;
            }
            push_point(&mut checks, &rec);
            pts.push((zs[i].clone(), rec.delta, rec.r));
            local_e.push(build_scheme(Some(&local), &kind_e, Position::Explicit(zs[i].clone())));
        }
        if checks.type_match && checks.tree_match {
            checks.extra_sing_clean = Some(extra_singularities_clean(&curve, zs)?);
            checks.irreducible = Some(certified_irreducible(&curve, &pts));
            let ze = union_all(local_e)?;
            checks.t_smooth = Some(cohomology(&ze, d)?.1 == 0);
        }
        let mut details = BTreeMap::from([("deg_z".to_string(), z.degree()), ("system_dim".to_string(), basis.len())]);
        details.insert("gate_e39_or_e43".to_string(), gate as usize);
        let out = RealizationResult {
            polynomial: curve.to_string(),
            degree: curve.degree(),
            poly: curve,
            flavor: if flavor == Flavor::Top { "top" } else { "an" }.into(),
            targets: invs.iter().map(|i| i.kind.clone()).collect(),
            positions: zs.iter().map(|p| show(p)).collect(),
            checks: Checks { h1, ..checks },
            bounds: Vec::new(),
            within_bound: false,
            conditions: conditions.clone(),
            details,
            certification: if invs.iter().all(|i| i.sing.is_simple()) {
                Certification::Certified
            } else {
                Certification::InvariantMatched
            },
            attempts: attempt + 1,
            seed,
            verified: false,
        }
        .finish();
        if out.verified {
            return Ok(out);
        }
        last = Some(Error::VerificationFailure(format!("curve of degree {d} at attempt {}", attempt + 1)));
    }
    Err(last.unwrap_or_else(|| Error::GenericityFailure("no attempt succeeded".into())))
}

/// Coordinates in which `h` has a nonzero `x_2^2` coefficient.
fn with_square_in_second(h: &MultiPoly) -> Result<MultiPoly> {
    let (x, y) = (MultiPoly::var(2, 0), MultiPoly::var(2, 1));
    let h2 = if !h.coeff(&[0, 2, 0]).is_zero() {
        h.clone()
    } else if !h.coeff(&[2, 0, 0]).is_zero() {
        h.compose(&[y, x])
    } else {
        h.compose(&[x.add(&y), y])
    };
    if h2.coeff(&[0, 2, 0]).is_zero() {
        return Err(Error::VerificationFailure("Hessian of h vanishes".into()));
    }
    Ok(h2)
}

/// `f = h(x1, x2) + x3^2 - 2 x3 psi(x1)` with an `A_k` point, where `h` has an
/// `A_(2 m0 - 1)` point and `psi^2 = int_0^t (phi - t^k)` for `phi` the
/// derivative of `h` along its polar curve.
pub fn construct_ak_3d(k: usize, seed: u64) -> Result<RealizationResult> {
    if !(2..=27).contains(&k) {
        return Err(Error::InvalidInput("k must lie in 2..=27".into()));
    }
    let s = (1..=3).find(|s| s * s * s >= k).unwrap();
    let m0 = (s * s).min(k / 2);
    let hres = realize_critical_point(&normal_form(&format!("A{}", 2 * m0 - 1))?, seed)?;
    let h = with_square_in_second(&hres.poly)?;
    let prec = (k + 2) as u32;
    let t = MultiPoly::var(1, 0);
    let c2 = h.coeff(&[0, 2, 0]);
    let hx2 = h.derivative(1);
    let step = (&c2 + &c2).inv();
    let mut x2 = MultiPoly::zero(1);
    for _ in 0..=prec {
        let res = hx2.compose_trunc(&[t.clone(), x2.clone()], prec + 1).truncate(prec);
        x2 = x2.sub(&res.scale(&step)).truncate(prec);
    }
    let phi = h.derivative(0).compose_trunc(&[t.clone(), x2.clone()], prec + 1).truncate(prec);
    let tk = MultiPoly::monomial(1, [k as u32, 0, 0], ExactScalar::one());
    let u = phi.sub(&tk).integrate(0);
    let psi = series_sqrt(&u, prec)?;
    let x3 = MultiPoly::var(3, 2);
    let f = h.lift(3).add(&x3.pow(2)).sub(&x3.mul(&psi.univariate_into(3, 0)).scale(&ExactScalar::from_i64(2)));
    let mu = milnor_number(&f)?;
    let corank = hessian_corank(&f);
    let mut checks = Checks { type_match: mu == k && corank <= 1, tree_match: true, ..Checks::default() };
    checks.mu.push(mu);
    checks.mt.push(multiplicity(&f));
    checks.corank = Some(vec![corank]);
    let details = BTreeMap::from([
        ("m0".to_string(), m0),
        ("s".to_string(), s),
        ("h_degree".to_string(), hres.degree as usize),
        ("psi_order".to_string(), psi.order().unwrap_or(0) as usize),
    ]);
    Ok(RealizationResult {
        polynomial: f.to_string(),
        degree: f.degree(),
        poly: f,
        flavor: "crit".into(),
        targets: vec![format!("A{k}")],
        positions: vec![show(&origin(3))],
        checks,
        bounds: Vec::new(),
        within_bound: false,
        conditions: Vec::new(),
        details,
        certification: Certification::Certified,
        attempts: hres.attempts,
        seed,
        verified: false,
    }
    .finish())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::colength::{derived_ideal, IdealKind};
    use crate::poly::p;

    #[test]
    fn solve_modulo_recovers_low_degree() {
        let f = p("y^2 - x^3");
        let i = derived_ideal(&f, IdealKind::Crit).unwrap();
        let g = f.add(&p("x^7 + y^6"));
        let q = solve_modulo(&i, &g, 3).unwrap();
        assert!(i.contains(&q.sub(&g)));
        assert!(q.degree() <= 3);
    }

    #[test]
    fn small_critical_points() {
        let a1 = realize_critical_point(&normal_form("A1").unwrap(), 0).unwrap();
        assert!(a1.verified && a1.degree <= 3);
        let e6 = realize_critical_point(&normal_form("E6").unwrap(), 0).unwrap();
        assert!(e6.verified, "{e6:?}");
        assert_eq!(e6.degree, 4);
    }

    #[test]
    fn family_member() {
        let r = ak_family(2).unwrap();
        assert!(r.verified);
        assert_eq!((r.degree, r.checks.mu[0]), (4, 7));
    }

    #[test]
    fn scan_finds_extra_points() {
        let o = vec![ExactScalar::zero(), ExactScalar::zero()];
        let nodal = p("y^2 - x^2 - x^3");
        assert!(extra_singularities_clean(&nodal, std::slice::from_ref(&o)).unwrap());
        assert!(!extra_singularities_clean(&nodal, &[]).unwrap());
        // two conics meeting in four points, two of them irrational
        let two = p("(x^2 + y^2 - 1)*(x^2 - 2*y^2 + x - 1)");
        assert!(!extra_singularities_clean(&two, &[]).unwrap());
        // three concurrent lines through the origin, parallel pairs meet at infinity
        let one = vec![ExactScalar::one(), ExactScalar::one()];
        assert!(!extra_singularities_clean(&p("x*(x - 1)*(y - x)"), &[o.clone(), one]).unwrap());
        assert!(extra_singularities_clean(&p("y^2 - x^3"), &[o]).unwrap());
    }

    #[test]
    fn irreducibility_certificate() {
        let z = |a: i64, b: i64| vec![ExactScalar::from_i64(a), ExactScalar::from_i64(b)];
        let line_cubic = p("y*(y^2 - x^3 + 5*x - 1)");
        let nodes: Vec<_> = [(0, 0), (1, 0), (2, 0)].iter().map(|&(a, b)| (z(a, b), 1, 2)).collect();
        assert!(!certified_irreducible(&line_cubic, &nodes));
        let spread: Vec<_> = [(0, 0), (1, 0), (0, 1)].iter().map(|&(a, b)| (z(a, b), 1, 2)).collect();
        assert!(certified_irreducible(&p("x^4 + y^4 + x*y"), &spread));
        assert!(certified_irreducible(&p("y^2 - x^3"), &[(z(0, 0), 1, 1)]));
    }
}
