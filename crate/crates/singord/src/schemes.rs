//! Zero-dimensional schemes in the affine chart `z = 1` of the plane.
//!
//! A scheme is a list of points, each carrying a certified ideal in local
//! coordinates at its position and, when known, a cluster presentation.

use std::fmt;
use std::str::FromStr;

use serde_json::{json, Value};

use crate::cluster::cluster_ideal;
use crate::colength::{classify, derived_ideal, multiplicity, origin, IdealKind, JetIdeal};
use crate::error::{Error, Result};
use crate::jet::JetSpace;
use crate::linalg::Echelon;
use crate::numfield::NumField;
use crate::poly::MultiPoly;
use crate::puiseux::{cluster_of_ideal, intersection_number, resolve, Chart, ClusterTree, PointData};
use crate::rng::{self, SeededRng};
use crate::scalar::ExactScalar;
use crate::upoly::UPoly;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Position {
    Explicit(Vec<ExactScalar>),
    Generic,
}

impl Position {
    pub fn origin() -> Position {
        Position::Explicit(origin(2))
    }

    pub fn coords(&self) -> Result<&[ExactScalar]> {
        match self {
            Position::Explicit(c) => Ok(c),
            Position::Generic => Err(Error::SymbolicPosition),
        }
    }
}

#[derive(Clone, Debug)]
pub struct SchemePoint {
    pub position: Position,
    pub ideal: JetIdeal,
    pub cluster: Option<ClusterTree>,
}

#[derive(Clone, Debug)]
pub struct ZeroDimScheme {
    pub points: Vec<SchemePoint>,
    pub provenance: String,
}

#[derive(Clone, Debug)]
pub enum SchemeKind {
    ES,
    S,
    S1,
    EA,
    A,
    A1,
    Crit0,
    Crit,
    Fat(u32),
    Cluster(ClusterTree),
}

impl fmt::Display for SchemeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SchemeKind::ES => write!(f, "es"),
            SchemeKind::S => write!(f, "s"),
            SchemeKind::S1 => write!(f, "s1"),
            SchemeKind::EA => write!(f, "ea"),
            SchemeKind::A => write!(f, "a"),
            SchemeKind::A1 => write!(f, "a1"),
            SchemeKind::Crit0 => write!(f, "crit0"),
            SchemeKind::Crit => write!(f, "crit"),
            SchemeKind::Fat(m) => write!(f, "fat{m}"),
            SchemeKind::Cluster(_) => write!(f, "cluster"),
        }
    }
}

impl FromStr for SchemeKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "es" => SchemeKind::ES,
            "s" => SchemeKind::S,
            "s1" => SchemeKind::S1,
            "ea" => SchemeKind::EA,
            "a" => SchemeKind::A,
            "a1" => SchemeKind::A1,
            "crit0" => SchemeKind::Crit0,
            "crit" => SchemeKind::Crit,
            _ => match s.strip_prefix("fat").and_then(|m| m.parse().ok()) {
                Some(m) if m >= 1 => SchemeKind::Fat(m),
                _ => return Err(Error::InvalidInput(format!("unknown scheme kind {s}"))),
            },
        })
    }
}

/// Seeded line through the origin meeting every branch of `f`
/// transversally.
pub fn transverse_line(f: &MultiPoly, seed: u64) -> Result<MultiPoly> {
    let mt = multiplicity(f) as usize;
    let mut r = rng::stream(seed, 0x11e);
    let o = origin(2);
    for _ in 0..50 {
        let (a, b) = (rng::small(&mut r), rng::small_nonzero(&mut r));
        let l = MultiPoly::var(2, 0).scale(&a.into()).add(&MultiPoly::var(2, 1).scale(&b.into()));
        if intersection_number(&l, f, &o)? == mt {
            return Ok(l);
        }
    }
    Err(Error::GenericityFailure("no transverse line found".into()))
}

fn cluster_point(tree: ClusterTree, position: Position) -> Result<SchemePoint> {
    let ideal = cluster_ideal(&tree, origin(2))?;
    Ok(SchemePoint { position, ideal, cluster: Some(tree) })
}

fn s_point(f: &MultiPoly, position: Position) -> Result<SchemePoint> {
    cluster_point(resolve(f, &origin(2))?.tree, position)
}

fn s1_point(f: &MultiPoly, position: Position) -> Result<SchemePoint> {
    let l = transverse_line(f, 0)?;
    s_point(&l.mul(f), position)
}

fn plain(ideal: JetIdeal, position: Position) -> SchemePoint {
    SchemePoint { position, ideal, cluster: None }
}

/// Scheme of the given kind for the germ `f` at the origin (local
/// coordinates), placed at `position`. Fat points and clusters take no
/// germ.
pub fn build_scheme(f: Option<&MultiPoly>, kind: &SchemeKind, position: Position) -> Result<ZeroDimScheme> {
    let germ = || -> Result<&MultiPoly> {
        let f = f.ok_or_else(|| Error::InvalidInput(format!("kind {kind} needs a germ")))?;
        if f.nvars() != 2 {
            return Err(Error::InvalidInput("plane germ expected".into()));
        }
        if f.is_zero() {
            return Err(Error::ZeroInput);
        }
        if !f.constant_term().is_zero() {
            return Err(Error::InvalidInput("germ does not vanish at the origin".into()));
        }
        Ok(f)
    };
    let simple = |f: &MultiPoly| -> Result<bool> {
        match classify(f) {
            Ok(t) => Ok(t.is_simple()),
            Err(Error::NonFiniteColength(_)) => Err(Error::NotReduced),
            Err(e) => Err(e),
        }
    };
    let point = match kind {
        SchemeKind::Fat(m) => cluster_point(ClusterTree::fat(*m), position)?,
        SchemeKind::Cluster(t) => cluster_point(t.clone(), position)?,
        SchemeKind::S => s_point(germ()?, position)?,
        SchemeKind::S1 => s1_point(germ()?, position)?,
        SchemeKind::A | SchemeKind::Crit0 if simple(germ()?)? => s_point(germ()?, position)?,
        SchemeKind::A1 | SchemeKind::Crit if simple(germ()?)? => s1_point(germ()?, position)?,
        SchemeKind::ES => {
            let s = s_point(germ()?, position.clone())?;
            let ea = derived_ideal(germ()?, IdealKind::EA)?;
            plain(s.ideal.sum(&ea), position)
        }
        SchemeKind::EA => plain(derived_ideal(germ()?, IdealKind::EA)?, position),
        SchemeKind::A => plain(derived_ideal(germ()?, IdealKind::A)?, position),
        SchemeKind::A1 => plain(derived_ideal(germ()?, IdealKind::A1)?, position),
        SchemeKind::Crit0 => plain(derived_ideal(germ()?, IdealKind::Crit0)?, position),
        SchemeKind::Crit => plain(derived_ideal(germ()?, IdealKind::Crit)?, position),
    };
    let provenance = match f {
        Some(f) if !matches!(kind, SchemeKind::Fat(_) | SchemeKind::Cluster(_)) => format!("{kind}({f})"),
        _ => kind.to_string(),
    };
    Ok(ZeroDimScheme { points: vec![point], provenance })
}

/// Reduced points at the given positions.
pub fn simple_points(positions: &[Vec<ExactScalar>]) -> Result<ZeroDimScheme> {
    let mut z = ZeroDimScheme::empty();
    for p in positions {
        z = z.union(&build_scheme(None, &SchemeKind::Fat(1), Position::Explicit(p.clone()))?)?;
    }
    Ok(z)
}

fn local_line(l: &MultiPoly, at: &[ExactScalar]) -> MultiPoly {
    l.translate(at)
}

impl ZeroDimScheme {
    pub fn empty() -> ZeroDimScheme {
        ZeroDimScheme { points: Vec::new(), provenance: "empty".into() }
    }

    pub fn degree(&self) -> usize {
        self.points.iter().map(|p| p.ideal.colength()).sum()
    }

    pub fn has_explicit_positions(&self) -> bool {
        self.points.iter().all(|p| matches!(p.position, Position::Explicit(_)))
    }

    /// Sum of squared multiplicities of the maximal cluster subscheme,
    /// checked against `deg Z <= M2 < 2 deg Z`.
    pub fn m2(&self) -> Result<usize> {
        let mut m2 = 0;
        for p in &self.points {
            m2 += match &p.cluster {
                Some(t) => t.m2(),
                None => cluster_of_ideal(&p.ideal, 0)?.m2(),
            };
        }
        let d = self.degree();
        if d > m2 || (d > 0 && m2 >= 2 * d) {
            return Err(Error::InvariantBreach(format!("deg {d} and M2 {m2} break the sandwich")));
        }
        Ok(m2)
    }

    /// Disjoint union.
    pub fn union(&self, other: &ZeroDimScheme) -> Result<ZeroDimScheme> {
        for a in &self.points {
            for b in &other.points {
                if let (Position::Explicit(x), Position::Explicit(y)) = (&a.position, &b.position) {
                    if x == y {
                        return Err(Error::OverlappingSupport);
                    }
                }
            }
        }
        let provenance = match (self.points.is_empty(), other.points.is_empty()) {
            (true, _) => other.provenance.clone(),
            (_, true) => self.provenance.clone(),
            _ => format!("{} + {}", self.provenance, other.provenance),
        };
        let mut points = self.points.clone();
        points.extend(other.points.iter().cloned());
        Ok(ZeroDimScheme { points, provenance })
    }

    /// Residual scheme `Z : L` and `deg (Z cap L)` for an affine line `L`.
    pub fn residue(&self, l: &MultiPoly) -> Result<(ZeroDimScheme, usize)> {
        if l.degree() != 1 {
            return Err(Error::InvalidInput("residue needs a line".into()));
        }
        let mut points = Vec::new();
        for p in &self.points {
            let at = p.position.coords()?;
            if !l.eval(at).is_zero() {
                points.push(p.clone());
                continue;
            }
            let q = p.ideal.quotient(&local_line(l, at));
            if q.colength() > 0 {
                points.push(SchemePoint { position: p.position.clone(), ideal: q, cluster: None });
            }
        }
        let z = ZeroDimScheme { points, provenance: format!("({}):L", self.provenance) };
        let drop = self.degree() - z.degree();
        Ok((z, drop))
    }

    /// Pulls every local ideal back along an origin-fixing coordinate
    /// change given by its component germs.
    pub fn apply_automorphism(&self, phi: &[MultiPoly]) -> Result<ZeroDimScheme> {
        let points = self
            .points
            .iter()
            .map(|p| {
                let ideal = p.ideal.at_order(p.ideal.certificate().max(1)).pullback(phi)?;
                Ok(SchemePoint {
                    position: p.position.clone(),
                    ideal,
                    cluster: p.cluster.as_ref().map(|t| t.without_directions()),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(ZeroDimScheme { points, provenance: self.provenance.clone() })
    }

    /// Generic representative of `Iso(Z)` or `Def(Z)`.
    pub fn sample_representative(&self, mode: SampleMode, seed: u64) -> Result<ZeroDimScheme> {
        let mut r = rng::stream(seed, 0x5a3);
        let mut used: Vec<Vec<ExactScalar>> = Vec::new();
        let mut points = Vec::new();
        for p in &self.points {
            let position = loop {
                let c = vec![rng::small_rational(&mut r), rng::small_rational(&mut r)];
                if !used.contains(&c) {
                    used.push(c.clone());
                    break c;
                }
            };
            let (ideal, tree) = match mode {
                SampleMode::Iso => (p.ideal.clone(), p.cluster.clone()),
                SampleMode::Def => {
                    let tree = p
                        .cluster
                        .as_ref()
                        .filter(|t| t.has_directions())
                        .ok_or_else(|| Error::ModeUnsupported("deformation sampling needs a cluster".into()))?;
                    let fresh = deform_tree(tree, &mut r)?;
                    (cluster_ideal(&fresh, origin(2))?, Some(fresh))
                }
            };
            let n = ideal.certificate().max(2);
            let phi = random_automorphism(&mut r, n);
            let ideal = ideal.at_order(n).pullback(&phi)?;
            points.push(SchemePoint {
                position: Position::Explicit(position),
                ideal,
                cluster: tree.map(|t| t.without_directions()),
            });
        }
        Ok(ZeroDimScheme { points, provenance: format!("{}({})", mode.name(), self.provenance) })
    }

    pub fn to_json(&self) -> Value {
        let points: Vec<Value> = self
            .points
            .iter()
            .map(|p| {
                let ideal = p.ideal.at_order(p.ideal.certificate());
                let rows: Vec<String> = ideal.rref_polys().iter().map(|q| q.to_string()).collect();
                let position = match &p.position {
                    Position::Explicit(c) => json!(c.iter().map(|x| x.to_string()).collect::<Vec<_>>()),
                    Position::Generic => json!("GENERIC"),
                };
                let mut v = json!({
                    "position": position,
                    "colength": ideal.colength(),
                    "jet_order": ideal.jet_order(),
                    "subspace_rows": rows,
                });
                if let Some(t) = &p.cluster {
                    v["cluster"] = serde_json::to_value(t).expect("cluster serializes");
                }
                v
            })
            .collect();
        json!({ "points": points, "provenance": self.provenance })
    }

    pub fn from_json(v: &Value) -> Result<ZeroDimScheme> {
        let bad = |what: &str| Error::InvalidInput(format!("scheme file: {what}"));
        let provenance = v["provenance"].as_str().unwrap_or("file").to_string();
        let mut points = Vec::new();
        for p in v["points"].as_array().ok_or_else(|| bad("points"))? {
            let position = match &p["position"] {
                Value::String(s) if s == "GENERIC" => Position::Generic,
                Value::Array(a) => Position::Explicit(
                    a.iter()
                        .map(|x| x.as_str().ok_or_else(|| bad("position"))?.parse())
                        .collect::<Result<Vec<ExactScalar>>>()?,
                ),
                _ => return Err(bad("position")),
            };
            let n = p["jet_order"].as_u64().ok_or_else(|| bad("jet_order"))? as u32;
            let jet = JetSpace::new(2, n);
            let mut basis = Echelon::new();
            for row in p["subspace_rows"].as_array().ok_or_else(|| bad("subspace_rows"))? {
                let q = MultiPoly::parse_with(row.as_str().ok_or_else(|| bad("row"))?, 2)?;
                if q.degree() > n {
                    return Err(bad("row above the jet order"));
                }
                basis.insert(&jet.to_vec(&q));
            }
            let ideal = JetIdeal::from_subspace(origin(2), jet, basis)?;
            if let Some(c) = p["colength"].as_u64() {
                if c as usize != ideal.colength() {
                    return Err(bad("colength does not match the rows"));
                }
            }
            let cluster = match p.get("cluster") {
                Some(c) => Some(serde_json::from_value(c.clone()).map_err(|e| bad(&e.to_string()))?),
                None => None,
            };
            points.push(SchemePoint { position, ideal, cluster });
        }
        Ok(ZeroDimScheme { points, provenance })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SampleMode {
    Iso,
    Def,
}

impl SampleMode {
    pub fn name(&self) -> &'static str {
        match self {
            SampleMode::Iso => "iso",
            SampleMode::Def => "def",
        }
    }
}

impl FromStr for SampleMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "iso" => Ok(SampleMode::Iso),
            "def" => Ok(SampleMode::Def),
            _ => Err(Error::InvalidInput(format!("unknown mode {s}"))),
        }
    }
}

/// Random invertible linear part plus random terms of degrees `2..=n`.
pub fn random_automorphism(r: &mut SeededRng, n: u32) -> Vec<MultiPoly> {
    let (x, y) = (MultiPoly::var(2, 0), MultiPoly::var(2, 1));
    let lin = loop {
        let c: Vec<i64> = (0..4).map(|_| rng::small(r)).collect();
        if c[0] * c[3] - c[1] * c[2] != 0 {
            break c;
        }
    };
    let higher = |r: &mut SeededRng| {
        let mons: Vec<_> = (2..=n).flat_map(|d| crate::jet::monomials_of_degree(2, d)).collect();
        MultiPoly::from_terms(2, mons.into_iter().map(|e| (e, rng::small_scalar(r))))
    };
    let a = x.scale(&lin[0].into()).add(&y.scale(&lin[1].into())).add(&higher(r));
    let b = x.scale(&lin[2].into()).add(&y.scale(&lin[3].into())).add(&higher(r));
    vec![a, b]
}

/// Moves every free point with a rational direction to a fresh random
/// direction, keeping the shape of the cluster.
fn deform_tree(tree: &ClusterTree, r: &mut SeededRng) -> Result<ClusterTree> {
    let mut out = tree.clone();
    let base = NumField::base();
    for v in 0..out.len() {
        let parent = match out.vertices[v].parent {
            Some(p) => p,
            None => continue,
        };
        let free_rational = {
            let vx = &out.vertices[v];
            !vx.satellite && vx.point.as_ref().is_some_and(|pd| pd.field.is_base())
        };
        if !free_rational {
            continue;
        }
        let taken: Vec<ExactScalar> = out
            .children(parent)
            .into_iter()
            .filter(|&c| c != v)
            .filter_map(|c| match &out.vertices[c].point {
                Some(PointData { field, chart: Chart::One(a) }) if field.is_base() => Some(a.coeff(0)),
                _ => None,
            })
            .collect();
        let alpha = loop {
            let a = rng::small_rational(r);
            if !a.is_zero() && !taken.contains(&a) {
                break a;
            }
        };
        out.vertices[v].point = Some(PointData { field: base.clone(), chart: Chart::One(UPoly::constant(alpha)) });
    }
    // a generic member must see exactly the deformed cluster
    let ideal = cluster_ideal(&out, origin(2))?;
    for s in 0..3u64 {
        let g = ideal.sample_element(s + 1);
        if let Ok(res) = resolve(&g, &origin(2)) {
            if res.tree.same_shape(&out) {
                return Ok(out);
            }
        }
    }
    Err(Error::GenericityFailure("deformed cluster is not realized by its members".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::p;

    fn build(f: &str, kind: SchemeKind) -> ZeroDimScheme {
        build_scheme(Some(&p(f)), &kind, Position::origin()).unwrap()
    }

    #[test]
    fn degrees_and_m2() {
        let node = build("y^2 - x^2", SchemeKind::S);
        assert_eq!((node.degree(), node.m2().unwrap()), (3, 4));
        let triple = build("x^3 - y^3", SchemeKind::S);
        assert_eq!((triple.degree(), triple.m2().unwrap()), (6, 9));
        let cusp = build("y^2 - x^3", SchemeKind::S);
        assert_eq!((cusp.degree(), cusp.m2().unwrap()), (5, 6));
        assert_eq!(build("x^2*y - y^3", SchemeKind::S).degree(), 6);
        let fat = build_scheme(None, &SchemeKind::Fat(3), Position::origin()).unwrap();
        assert_eq!((fat.degree(), fat.m2().unwrap()), (6, 9));
        assert_eq!(build("y^2 - x^3", SchemeKind::Crit0).degree(), 5);
    }

    #[test]
    fn kinds_are_nested() {
        for f in ["y^2 - x^3", "x^4 + y^4", "x^3 + y^5", "x^2*y + y^6"] {
            let d = |k| build(f, k).degree();
            let (es, s, ea, a, a1) = (d(SchemeKind::ES), d(SchemeKind::S), d(SchemeKind::EA), d(SchemeKind::A), d(SchemeKind::A1));
            assert!(es <= s && es <= ea && ea <= a && a <= a1, "{f}");
        }
    }

    #[test]
    fn residue_by_lines() {
        let fat = build_scheme(None, &SchemeKind::Fat(3), Position::origin()).unwrap();
        let (res, drop) = fat.residue(&p("x + 2*y")).unwrap();
        assert_eq!((res.degree(), drop), (3, 3));
        let (same, drop) = fat.residue(&p("x + 1")).unwrap();
        assert_eq!((same.degree(), drop), (6, 0));
        let f = p("y^2 - x^3");
        let s1 = build_scheme(Some(&f), &SchemeKind::S1, Position::origin()).unwrap();
        let l = transverse_line(&f, 0).unwrap();
        let (res, _) = s1.residue(&l).unwrap();
        let s = build("y^2 - x^3", SchemeKind::S);
        assert!(res.points[0].ideal.same_ideal(&s.points[0].ideal));
    }

    #[test]
    fn automorphisms_and_samples() {
        let cusp = build("y^2 - x^3", SchemeKind::S);
        let moved = cusp.apply_automorphism(&[p("x"), p("y + x")]).unwrap();
        assert_eq!(moved.degree(), 5);
        let back = moved.apply_automorphism(&[p("x"), p("y - x")]).unwrap();
        assert!(back.points[0].ideal.same_ideal(&cusp.points[0].ideal));
        let a = cusp.sample_representative(SampleMode::Iso, 3).unwrap();
        let b = cusp.sample_representative(SampleMode::Iso, 3).unwrap();
        assert_eq!(a.to_json(), b.to_json());
        let d = cusp.sample_representative(SampleMode::Def, 1).unwrap();
        assert_eq!(d.degree(), 5);
        assert_eq!(d.m2().unwrap(), 6);
        let crit = build("x^4 + y^4", SchemeKind::Crit0);
        assert_eq!(crit.sample_representative(SampleMode::Def, 0).unwrap_err(), Error::ModeUnsupported("deformation sampling needs a cluster".into()));
    }

    #[test]
    fn json_roundtrip_and_union() {
        let cusp = build("y^2 - x^3", SchemeKind::S).sample_representative(SampleMode::Iso, 0).unwrap();
        let node = build("y^2 - x^2", SchemeKind::S);
        let u = cusp.union(&node).unwrap();
        assert_eq!(u.degree(), 8);
        assert_eq!(node.union(&node).unwrap_err(), Error::OverlappingSupport);
        let back = ZeroDimScheme::from_json(&u.to_json()).unwrap();
        assert_eq!(back.to_json(), u.to_json());
    }
}
