//! Sparse exact linear algebra: semi-echelon bases, normal forms, rank and
//! nullspaces.

use std::collections::BTreeMap;

use crate::scalar::ExactScalar;

/// Sparse vector: `(column, value)` pairs, columns strictly increasing,
/// values nonzero.
pub type SVec = Vec<(usize, ExactScalar)>;

pub fn svec_scale(v: &SVec, c: &ExactScalar) -> SVec {
    if c.is_zero() {
        return Vec::new();
    }
    v.iter().map(|(i, x)| (*i, x * c)).collect()
}

pub fn svec_add(a: &SVec, b: &SVec) -> SVec {
    let mut m: BTreeMap<usize, ExactScalar> = a.iter().cloned().collect();
    for (i, x) in b {
        let e = m.entry(*i).or_insert_with(ExactScalar::zero);
        *e += x;
    }
    m.into_iter().filter(|(_, x)| !x.is_zero()).collect()
}

/// Linear combination `sum c_i v_i`.
pub fn svec_combine<'a>(terms: impl IntoIterator<Item = (&'a ExactScalar, &'a SVec)>) -> SVec {
    let mut m: BTreeMap<usize, ExactScalar> = BTreeMap::new();
    for (c, v) in terms {
        if c.is_zero() {
            continue;
        }
        for (i, x) in v {
            let e = m.entry(*i).or_insert_with(ExactScalar::zero);
            *e += &(c * x);
        }
    }
    m.into_iter().filter(|(_, x)| !x.is_zero()).collect()
}

/// Basis of a subspace with distinct pivots. Each stored row has its pivot
/// as lowest column, normalized to one.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Echelon {
    rows: BTreeMap<usize, SVec>,
}

impl Echelon {
    pub fn new() -> Self {
        Echelon { rows: BTreeMap::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_pivot(&self, col: usize) -> bool {
        self.rows.contains_key(&col)
    }

    pub fn pivots(&self) -> impl Iterator<Item = usize> + '_ {
        self.rows.keys().copied()
    }

    pub fn rows(&self) -> impl Iterator<Item = &SVec> {
        self.rows.values()
    }

    /// Unique representative of `v` modulo the span supported on
    /// non-pivot columns.
    pub fn reduce(&self, v: &SVec) -> SVec {
        let mut m: BTreeMap<usize, ExactScalar> = v.iter().cloned().collect();
        let mut cursor = 0usize;
        loop {
            let next = m.range(cursor..).find(|(c, _)| self.rows.contains_key(c)).map(|(c, x)| (*c, x.clone()));
            let Some((c, x)) = next else { break };
            let row = &self.rows[&c];
            for (j, r) in row {
                let e = m.entry(*j).or_insert_with(ExactScalar::zero);
                *e -= &(&x * r);
                if e.is_zero() {
                    m.remove(j);
                }
            }
            cursor = c + 1;
        }
        m.into_iter().collect()
    }

    pub fn contains(&self, v: &SVec) -> bool {
        self.reduce(v).is_empty()
    }

    /// Adds `v` to the span; returns whether the rank grew.
    pub fn insert(&mut self, v: &SVec) -> bool {
        let r = self.reduce(v);
        match r.first() {
            None => false,
            Some((p, lead)) => {
                let p = *p;
                let inv = lead.inv();
                let row = svec_scale(&r, &inv);
                self.rows.insert(p, row);
                true
            }
        }
    }

    /// Rows in reduced row echelon form, ordered by pivot.
    pub fn rref(&self) -> Vec<SVec> {
        self.rows
            .iter()
            .map(|(p, row)| {
                let tail: SVec = row.iter().filter(|(c, _)| c != p).cloned().collect();
                let mut out = vec![(*p, ExactScalar::one())];
                out.extend(self.reduce(&tail));
                out
            })
            .collect()
    }

    /// Basis of `{x : r . x = 0 for every row r}` in a space of `ncols`
    /// coordinates, one vector per non-pivot column.
    pub fn nullspace(&self, ncols: usize) -> Vec<SVec> {
        let rref = self.rref();
        let mut by_free: BTreeMap<usize, SVec> = BTreeMap::new();
        for f in 0..ncols {
            if !self.is_pivot(f) {
                by_free.insert(f, vec![(f, ExactScalar::one())]);
            }
        }
        for row in &rref {
            let p = row[0].0;
            for (c, x) in &row[1..] {
                if let Some(v) = by_free.get_mut(c) {
                    v.push((p, -x));
                }
            }
        }
        by_free
            .into_values()
            .map(|mut v| {
                v.sort_by_key(|x| x.0);
                v
            })
            .collect()
    }
}

pub fn rank_of(vectors: impl IntoIterator<Item = SVec>) -> usize {
    let mut e = Echelon::new();
    for v in vectors {
        e.insert(&v);
    }
    e.rank()
}

/// Turns column vectors into row vectors.
pub fn transpose(cols: &[SVec], nrows: usize) -> Vec<SVec> {
    let mut rows = vec![Vec::new(); nrows];
    for (j, col) in cols.iter().enumerate() {
        for (i, x) in col {
            rows[*i].push((j, x.clone()));
        }
    }
    rows
}

pub fn dot(a: &SVec, b: &SVec) -> ExactScalar {
    let (mut i, mut j) = (0, 0);
    let mut acc = ExactScalar::zero();
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                acc += &(&a[i].1 * &b[j].1);
                i += 1;
                j += 1;
            }
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(xs: &[(usize, i64)]) -> SVec {
        xs.iter().map(|&(i, x)| (i, ExactScalar::from_i64(x))).collect()
    }

    #[test]
    fn rank_and_reduce() {
        let mut e = Echelon::new();
        assert!(e.insert(&v(&[(0, 1), (1, 2)])));
        assert!(e.insert(&v(&[(0, 2), (1, 4), (2, 1)])));
        assert!(!e.insert(&v(&[(0, 3), (1, 6), (2, 1)])));
        assert_eq!(e.rank(), 2);
        assert_eq!(e.reduce(&v(&[(1, 1)])), v(&[(1, 1)]));
        assert!(e.reduce(&v(&[(0, 1), (1, 2), (2, 5)])).is_empty());
    }

    #[test]
    fn nullspace_is_orthogonal() {
        let rows = vec![v(&[(0, 1), (1, 1), (3, 2)]), v(&[(1, 1), (2, -1)]), v(&[(0, 1), (2, 1), (3, 2)])];
        let mut e = Echelon::new();
        for r in &rows {
            e.insert(r);
        }
        let ns = e.nullspace(4);
        assert_eq!(ns.len(), 4 - e.rank());
        for n in &ns {
            for r in &rows {
                assert!(dot(n, r).is_zero());
            }
        }
    }
}
