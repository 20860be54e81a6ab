//! Ideals of weighted clusters: germs whose virtual transform has
//! multiplicity at least `m_q` at every point `q` of the cluster.

use std::collections::BTreeMap;

use crate::colength::JetIdeal;
use crate::error::{Error, Result};
use crate::jet::JetSpace;
use crate::linalg::{Echelon, SVec};
use crate::numfield::NumField;
use crate::puiseux::{chart_transform, ClusterTree, LPoly, LinForm};
use crate::scalar::ExactScalar;
use crate::upoly::UPoly;

fn embed(k: &NumField, f: &LPoly<LinForm>) -> LPoly<LinForm> {
    f.iter()
        .map(|(key, lf)| {
            let lf: LinForm = lf.iter().map(|(i, c)| (*i, k.reduce(c))).filter(|(_, c)| !c.is_zero()).collect();
            (*key, lf)
        })
        .filter(|(_, lf)| !lf.is_empty())
        .collect()
}

fn visit(tree: &ClusterTree, v: usize, k: &NumField, f: LPoly<LinForm>, cond: &mut Echelon) {
    let m = tree.vertices[v].multiplicity;
    let mut rest = LPoly::new();
    for (key, lf) in f {
        if key.0 + key.1 < m {
            for r in 0..k.degree() {
                let row: SVec = lf.iter().map(|(i, c)| (*i, c.coeff(r))).filter(|(_, c)| !c.is_zero()).collect();
                if !row.is_empty() {
                    cond.insert(&row);
                }
            }
        } else {
            rest.insert(key, lf);
        }
    }
    for c in tree.children(v) {
        let pd = tree.vertices[c].point.as_ref().expect("directions checked");
        let kf = &pd.field;
        let g = chart_transform(kf, &embed(kf, &rest), m, &pd.chart, tree.need(c));
        visit(tree, c, kf, g, cond);
    }
}

/// Ideal at `center` of a single-rooted cluster carrying directions.
pub fn cluster_ideal(tree: &ClusterTree, center: Vec<ExactScalar>) -> Result<JetIdeal> {
    let roots = tree.roots();
    if roots.len() != 1 {
        return Err(Error::InvalidInput("cluster must have one root".into()));
    }
    if !tree.has_directions() {
        return Err(Error::InvalidInput("cluster points carry no coordinates".into()));
    }
    tree.check_proximity()?;
    let n = tree.need(roots[0]);
    let jet = JetSpace::new(2, n);
    let low = jet.degree_start(n);
    let mut f: LPoly<LinForm> = LPoly::new();
    for i in 0..low {
        let e = jet.monomial(i);
        f.insert((e[0], e[1]), BTreeMap::from([(i, UPoly::one())]));
    }
    let mut cond = Echelon::new();
    visit(tree, roots[0], &NumField::base(), f, &mut cond);
    let mut basis = Echelon::new();
    for v in cond.nullspace(low) {
        basis.insert(&v);
    }
    for i in low..jet.dim() {
        basis.insert(&vec![(i, ExactScalar::one())]);
    }
    let ideal = JetIdeal::from_subspace(center, jet, basis)?;
    if ideal.colength() != tree.degree() {
        return Err(Error::InvariantBreach(format!(
            "cluster ideal has colength {} against degree {}",
            ideal.colength(),
            tree.degree()
        )));
    }
    Ok(ideal)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::p;
    use crate::puiseux::{cluster_of_ideal, resolve};

    fn o() -> Vec<ExactScalar> {
        vec![ExactScalar::zero(), ExactScalar::zero()]
    }

    #[test]
    fn equisingular_clusters() {
        for g in ["y^2 - x^3", "y^2 - x^6", "x^4 + y^4", "(x^2 + y^2)^2 + x^5", "x^3 + y^5"] {
            let f = p(g);
            let r = resolve(&f, &o()).unwrap();
            let i = cluster_ideal(&r.tree, o()).unwrap();
            assert!(i.contains(&f), "{g}");
            let back = cluster_of_ideal(&i, 1).unwrap();
            assert!(back.same_shape(&r.tree), "{g}");
        }
    }

    #[test]
    fn fat_point() {
        let i = cluster_ideal(&ClusterTree::fat(3), o()).unwrap();
        assert_eq!(i.colength(), 6);
        assert!(i.contains(&p("x^2*y")));
        assert!(!i.contains(&p("x*y")));
    }
}
