//! Numeric inequalities on computed invariants, evaluated exactly.
//!
//! Right-hand sides with square roots live in one quadratic extension at a
//! time and are compared by exact sign determination; integer parts use
//! the exact floor.

use std::cmp::Ordering;

use serde::Serialize;

use crate::cohomology::{generic_orders, GenericOrders};
use crate::colength::{classify, milnor_number, multiplicity, tjurina_number, SingType};
use crate::error::{Error, Result};
use crate::poly::MultiPoly;
use crate::puiseux::resolve;
use crate::scalar::{ExactScalar, Rational};
use crate::schemes::{build_scheme, Position, SampleMode, SchemeKind, ZeroDimScheme};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Rel {
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = "<")]
    Lt,
    #[serde(rename = ">=")]
    Ge,
    #[serde(rename = ">")]
    Gt,
    #[serde(rename = "=")]
    Eq,
}

impl Rel {
    fn holds(self, o: Ordering) -> bool {
        match self {
            Rel::Le => o != Ordering::Greater,
            Rel::Lt => o == Ordering::Less,
            Rel::Ge => o != Ordering::Less,
            Rel::Gt => o == Ordering::Greater,
            Rel::Eq => o == Ordering::Equal,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundReport {
    pub id: String,
    pub subject: String,
    pub lhs: ExactScalar,
    pub relation: Rel,
    pub rhs: ExactScalar,
    /// Distance to the boundary, positive on the satisfied side.
    pub slack: ExactScalar,
    pub verdict: Verdict,
}

impl BoundReport {
    pub fn new(id: &str, subject: &str, lhs: ExactScalar, relation: Rel, rhs: ExactScalar) -> BoundReport {
        let ord = lhs.cmp_real(&rhs).expect("real comparison");
        let slack = match relation {
            Rel::Ge | Rel::Gt => &lhs - &rhs,
            _ => &rhs - &lhs,
        };
        let verdict = if relation.holds(ord) { Verdict::Pass } else { Verdict::Fail };
        BoundReport { id: id.into(), subject: subject.into(), lhs, relation, rhs, slack, verdict }
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    /// Downgrades to INCONCLUSIVE when the underlying sampling was unstable.
    fn sampled(mut self, stable: bool) -> BoundReport {
        if !stable {
            self.verdict = Verdict::Inconclusive;
        }
        self
    }
}

fn int(n: usize) -> ExactScalar {
    ExactScalar::from_i64(n as i64)
}

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

fn sqrt_q(x: Rational) -> ExactScalar {
    ExactScalar::sqrt_of_rational(&x)
}

fn floor(x: &ExactScalar) -> ExactScalar {
    ExactScalar::from(x.floor().expect("real value"))
}

/// `sqrt(3 M2 / 2) + deg / sqrt(3 M2 / 2)`.
pub fn interpolation_term(deg: usize, m2: usize) -> ExactScalar {
    let s = sqrt_q(q(3 * m2 as i64, 2));
    &s + &(int(deg) * s.inv())
}

/// Invariants of a plane germ at the origin used by the bounds.
#[derive(Clone, Debug, Serialize)]
pub struct GermInvariants {
    pub germ: String,
    pub kind: String,
    pub mu: usize,
    pub tau: usize,
    pub mt: u32,
    pub delta: usize,
    pub r: usize,
    pub deg_s: usize,
    pub m2_s: usize,
    pub deg_a: usize,
    pub m2_a: usize,
    #[serde(skip)]
    pub sing: SingType,
}

pub fn germ_invariants(f: &MultiPoly) -> Result<GermInvariants> {
    let res = resolve(f, &crate::colength::origin(2))?;
    let s = build_scheme(Some(f), &SchemeKind::S, Position::origin())?;
    let a = build_scheme(Some(f), &SchemeKind::A, Position::origin())?;
    let sing = classify(f)?;
    Ok(GermInvariants {
        germ: f.to_string(),
        kind: sing.name(),
        mu: milnor_number(f)?,
        tau: tjurina_number(f)?,
        mt: multiplicity(f),
        delta: res.delta,
        r: res.r,
        deg_s: s.degree(),
        m2_s: s.m2()?,
        deg_a: a.degree(),
        m2_a: a.m2()?,
        sing,
    })
}

/// Degree bounds for `Z^s`, `Z^a` and `Z_0` of a germ, with the exact
/// formulas for simple types.
pub fn check_degree_bounds(f: &MultiPoly) -> Result<Vec<BoundReport>> {
    let inv = germ_invariants(f)?;
    let deg0 = build_scheme(Some(f), &SchemeKind::Crit0, Position::origin())?.degree();
    let name = inv.germ.as_str();
    let mut out = vec![
        BoundReport::new("e38", name, int(inv.deg_s), Rel::Le, int(inv.m2_s)),
        BoundReport::new("e73", name, int(inv.m2_s), Rel::Lt, int(2 * inv.deg_s)),
    ];
    // the inequalities are stated for germs outside the A series
    let general = [
        BoundReport::new("e40", name, int(inv.deg_s), Rel::Le, int(3 * inv.delta)),
        BoundReport::new("e42", name, int(inv.deg_a), Rel::Le, int(2 * inv.mu)),
        BoundReport::new(
            "e71",
            name,
            int(deg0),
            Rel::Le,
            ExactScalar::from_i64(3 * inv.mu as i64 - 2 * inv.mt as i64 + 2),
        ),
    ];
    if !matches!(inv.sing, SingType::A(_)) {
        out.extend(general);
    }
    match inv.sing {
        SingType::A(k) => {
            let v = int((3 * k + 4) / 2);
            out.push(BoundReport::new("e41-s", name, int(inv.deg_s), Rel::Eq, v.clone()));
            out.push(BoundReport::new("e41-a", name, int(inv.deg_a), Rel::Eq, v.clone()));
            out.push(BoundReport::new("e41-0", name, int(deg0), Rel::Eq, v));
        }
        SingType::D(k) => out.push(BoundReport::new("e41-d", name, int(inv.deg_s), Rel::Eq, int((3 * k).div_ceil(2)))),
        SingType::E(k) => out.push(BoundReport::new("e41-e", name, int(inv.deg_a), Rel::Eq, int(k + 3))),
        _ => {}
    }
    Ok(out)
}

/// A scheme is singular when some point is not reduced.
pub fn is_singular(z: &ZeroDimScheme) -> bool {
    z.points.iter().any(|p| p.ideal.colength() > 1)
}

/// Order bounds on sampled representatives. Verdicts are INCONCLUSIVE
/// when fewer than `min(3, T)` trials attain the extreme orders.
pub fn check_order_bounds(
    z: &ZeroDimScheme,
    mode: SampleMode,
    trials: usize,
    seed: u64,
) -> Result<(Vec<BoundReport>, GenericOrders)> {
    let g = generic_orders(z, mode, trials, seed)?;
    let deg = z.degree();
    let m2 = z.m2()?;
    let name = z.provenance.as_str();
    let mut out = vec![
        BoundReport::new("e3", name, int(g.ord0), Rel::Ge, int(deg) * sqrt_q(q(2 * m2 as i64, 1)).inv()),
        BoundReport::new("e3-weak", name, int(g.ord0), Rel::Gt, sqrt_q(q(deg as i64, 4))),
    ];
    if is_singular(z) {
        out.push(BoundReport::new("e7", name, int(g.ord1), Rel::Le, interpolation_term(deg, m2) - int(2)));
        if deg > 2 {
            let rhs = ExactScalar::from_i64(4) * sqrt_q(q(deg as i64, 3)) - int(2);
            out.push(BoundReport::new("e24", name, int(g.ord1), Rel::Lt, rhs));
        }
    } else {
        out.push(BoundReport::new("e22", name, int(g.ord1), Rel::Eq, int(expected_ord1_reduced(deg))));
    }
    let stable = g.stable;
    Ok((out.into_iter().map(|r| r.sampled(stable)).collect(), g))
}

/// `-[(3 - sqrt(1 + 8 deg)) / 2]`.
pub fn expected_ord1_reduced(deg: usize) -> usize {
    let x = (ExactScalar::from_i64(3) - sqrt_q(q(1 + 8 * deg as i64, 1))) * ExactScalar::from_frac(1, 2);
    let f = x.floor().expect("real");
    usize::try_from(-f).expect("nonnegative")
}

fn e50_weight(inv: &GermInvariants) -> Rational {
    match inv.sing {
        SingType::A(1) => q(6, 1),
        SingType::A(2) => q(10, 1),
        SingType::D(4) => q(169, 6),
        SingType::A(k) if k % 2 == 0 => q(25, 3) + q(27 * inv.delta as i64, 2),
        _ => q(27 * inv.delta as i64, 2),
    }
}

fn e57_weight(inv: &GermInvariants) -> Rational {
    match inv.sing {
        SingType::A(1) => q(6, 1),
        SingType::A(2) => q(10, 1),
        SingType::D(4) => q(169, 6),
        _ => {
            let (mu, delta) = (inv.mu as i64, inv.delta as i64);
            let a = q(10 * mu + 3 * delta, 2);
            let b = q(6 * mu + 3 * delta, 2);
            &a * &a / b
        }
    }
}

/// Existence conditions for a curve of degree `d` with the given germs.
pub fn existence_condition(germs: &[MultiPoly], d: usize) -> Result<Vec<BoundReport>> {
    if germs.is_empty() {
        return Err(Error::InvalidInput("no singularities given".into()));
    }
    let invs = germs.iter().map(germ_invariants).collect::<Result<Vec<_>>>()?;
    existence_from_invariants(&invs, d)
}

pub fn existence_from_invariants(invs: &[GermInvariants], d: usize) -> Result<Vec<BoundReport>> {
    let name = invs.iter().map(|i| i.kind.clone()).collect::<Vec<_>>().join("+") + &format!(" d={d}");
    let sum = |f: &dyn Fn(&GermInvariants) -> usize| invs.iter().map(f).sum::<usize>();
    let (ds, ms) = (sum(&|i| i.deg_s), sum(&|i| i.m2_s));
    let (da, ma) = (sum(&|i| i.deg_a), sum(&|i| i.m2_a));
    let dd = d as i64;
    let cap = ExactScalar::from_i64(dd * dd - 2 * dd + 3);
    let w50: Rational = invs.iter().map(e50_weight).sum();
    let w57: Rational = invs.iter().map(e57_weight).sum();
    Ok(vec![
        BoundReport::new("e39", &name, floor(&interpolation_term(ds, ms)), Rel::Le, int(d + 1)),
        BoundReport::new("e43", &name, floor(&interpolation_term(da, ma)), Rel::Le, int(d + 1)),
        BoundReport::new("e50", &name, w50.into(), Rel::Le, cap.clone()),
        BoundReport::new("e57", &name, w57.into(), Rel::Le, cap),
    ])
}

/// Smallest `d` passing (e39) for the given germs.
pub fn minimal_degree_e39(invs: &[GermInvariants]) -> usize {
    let ds: usize = invs.iter().map(|i| i.deg_s).sum();
    let ms: usize = invs.iter().map(|i| i.m2_s).sum();
    let t = floor(&interpolation_term(ds, ms));
    let t = t.as_rational().expect("integer").to_integer();
    usize::try_from(t - 1).unwrap_or(0).max(1)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Flavor {
    Crit,
    Top,
    An,
}

impl std::str::FromStr for Flavor {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "crit" => Ok(Flavor::Crit),
            "top" => Ok(Flavor::Top),
            "an" => Ok(Flavor::An),
            _ => Err(Error::InvalidInput(format!("unknown flavor {s}"))),
        }
    }
}

/// Upper bound (or exact value) for the degree realizing a germ.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrderTarget {
    pub id: String,
    pub subject: String,
    pub relation: Rel,
    pub rhs: ExactScalar,
}

impl OrderTarget {
    fn new(id: &str, subject: &str, relation: Rel, rhs: ExactScalar) -> OrderTarget {
        OrderTarget { id: id.into(), subject: subject.into(), relation, rhs }
    }

    pub fn check(&self, achieved: usize) -> BoundReport {
        BoundReport::new(&self.id, &self.subject, int(achieved), self.relation, self.rhs.clone())
    }

    /// Largest admissible integer degree.
    pub fn max_degree(&self) -> usize {
        let f = self.rhs.floor().expect("real");
        let f = i64::try_from(f).expect("small");
        let exact_int = ExactScalar::from_i64(f) == self.rhs;
        let v = if self.relation == Rel::Lt && exact_int { f - 1 } else { f };
        v.max(0) as usize
    }
}

pub fn isqrt(n: usize) -> usize {
    num_integer::Roots::sqrt(&n)
}

/// Degree targets for realizing `f` as a critical point, a
/// topological singular point or an analytic one.
pub fn singularity_order_bounds(f: &MultiPoly, flavor: Flavor) -> Result<Vec<OrderTarget>> {
    let inv = germ_invariants(f)?;
    Ok(order_targets(&inv, flavor))
}

pub fn order_targets(inv: &GermInvariants, flavor: Flavor) -> Vec<OrderTarget> {
    let name = inv.germ.as_str();
    let mut out = Vec::new();
    match (flavor, inv.sing) {
        (Flavor::Crit, SingType::A(m)) => out.push(OrderTarget::new("t5", name, Rel::Le, int(2 * isqrt(m + 5) - 1))),
        (Flavor::Crit, SingType::D(m)) => out.push(OrderTarget::new("t5", name, Rel::Le, int(2 * isqrt(m + 7)))),
        (_, SingType::E(m)) => out.push(OrderTarget::new(if flavor == Flavor::Crit { "t5" } else { "t3-3" }, name, Rel::Eq, int((m + 2) / 2))),
        (Flavor::Crit, _) => {
            let v = 3 * inv.mu as i64 - 2 * inv.mt as i64 + 2;
            let rhs = ExactScalar::from_i64(4) * sqrt_q(q(v, 3)) - int(1);
            out.push(OrderTarget::new("e72", name, Rel::Lt, rhs));
        }
        (_, SingType::A(m)) => out.push(OrderTarget::new("t3-3", name, Rel::Le, int(2 * isqrt(m + 5)))),
        (_, SingType::D(m)) => out.push(OrderTarget::new("t3-3", name, Rel::Le, int(2 * isqrt(m + 7) + 1))),
        (Flavor::Top, _) => {
            let rhs = ExactScalar::from_i64(9) * sqrt_q(q(inv.delta as i64, 6)) - int(1);
            out.push(OrderTarget::new("t3-3", name, Rel::Le, rhs));
        }
        (Flavor::An, _) => {
            let (mu, delta) = (inv.mu as i64, inv.delta as i64);
            let a = ExactScalar::from(q(10 * mu + 3 * delta, 2));
            let rhs = a * sqrt_q(q(6 * mu + 3 * delta, 2)).inv() - int(1);
            out.push(OrderTarget::new("t3-3", name, Rel::Le, rhs));
        }
    }
    match flavor {
        Flavor::Top => {
            out.push(OrderTarget::new("e45", name, Rel::Le, interpolation_term(inv.deg_s, inv.m2_s) - int(1)))
        }
        Flavor::An => {
            out.push(OrderTarget::new("e44", name, Rel::Le, interpolation_term(inv.deg_a, inv.m2_a) - int(1)))
        }
        Flavor::Crit => {}
    }
    out
}

/// The two non-simple analytic bounds are ordered:
/// `(5 mu + 3 delta / 2) / sqrt(3 mu + 3 delta / 2) <= 3 sqrt(mu)`,
/// compared on squares.
pub fn analytic_bound_chain(inv: &GermInvariants) -> BoundReport {
    let (mu, delta) = (inv.mu as i64, inv.delta as i64);
    let a = q(10 * mu + 3 * delta, 2);
    let b = q(6 * mu + 3 * delta, 2);
    BoundReport::new("t3-3-chain", &inv.germ, (&a * &a / b).into(), Rel::Le, int(9 * inv.mu))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::p;

    #[test]
    fn degree_examples() {
        let r = check_degree_bounds(&p("y^2 - x^4")).unwrap();
        let s = r.iter().find(|b| b.id == "e41-s").unwrap();
        assert_eq!(s.lhs, int(6));
        assert!(s.passed());
        let e7 = check_degree_bounds(&p("x^3 + x*y^3")).unwrap();
        let e = e7.iter().find(|b| b.id == "e41-e").unwrap();
        assert_eq!((e.lhs.clone(), e.passed()), (int(10), true));
        let ns = check_degree_bounds(&p("x^4 + y^5")).unwrap();
        let e71 = ns.iter().find(|b| b.id == "e71").unwrap();
        assert_eq!(e71.rhs, int(30));
        assert!(ns.iter().all(|b| b.passed()), "{ns:?}");
    }

    #[test]
    fn targets() {
        let a7 = p("y^2 - x^8");
        assert_eq!(singularity_order_bounds(&a7, Flavor::An).unwrap()[0].rhs, int(6));
        assert_eq!(singularity_order_bounds(&a7, Flavor::Crit).unwrap()[0].rhs, int(5));
        let e6 = singularity_order_bounds(&p("x^3 + y^4"), Flavor::Crit).unwrap();
        assert_eq!((e6[0].rhs.clone(), e6[0].relation), (int(4), Rel::Eq));
        for m in 1..=20 {
            assert_eq!(2 * isqrt(m + 5) - 1, 2 * isqrt(m + 5) - 1);
            assert_eq!(isqrt(m * m), m);
            assert_eq!(isqrt(m * m - 1), m - 1);
        }
    }

    #[test]
    fn reduced_points_formula() {
        let want = [(1, 0), (3, 1), (5, 2), (6, 2), (7, 3), (10, 3), (15, 4)];
        for (deg, o) in want {
            assert_eq!(expected_ord1_reduced(deg), o, "{deg}");
        }
    }

    #[test]
    fn existence_examples() {
        let r = existence_condition(&[p("y^2 - x^3")], 4).unwrap();
        assert!(r[0].passed());
        let nodes: Vec<MultiPoly> = (0..3).map(|_| p("y^2 - x^2")).collect();
        let r = existence_condition(&nodes, 4).unwrap();
        assert_eq!(r[0].verdict, Verdict::Fail);
        let r = existence_condition(&nodes, 5).unwrap();
        assert_eq!((r[2].lhs.clone(), r[2].slack.clone()), (int(18), int(0)));
        assert!(r[2].passed());
    }
}
