//! Exact sparse Gaussian elimination over any field of coefficients.

use std::collections::HashMap;

use crate::scalars::FieldValue;

/// Field operations needed by elimination.
pub trait Coeff: Clone {
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Multiplicative inverse of a nonzero value.
    fn inv(&self) -> Self;
}

impl Coeff for FieldValue {
    fn is_zero(&self) -> bool {
        FieldValue::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self.add_ref(o)
    }
    fn sub(&self, o: &Self) -> Self {
        self.sub_ref(o)
    }
    fn mul(&self, o: &Self) -> Self {
        self.mul_ref(o)
    }
    fn neg(&self) -> Self {
        self.neg_ref()
    }
    fn inv(&self) -> Self {
        FieldValue::inv(self).expect("pivot is nonzero")
    }
}

/// Sparse vector: strictly increasing indices, no stored zeros.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseVec<C> {
    pub entries: Vec<(usize, C)>,
}

impl<C: Coeff> Default for SparseVec<C> {
    fn default() -> Self {
        SparseVec { entries: Vec::new() }
    }
}

impl<C: Coeff> SparseVec<C> {
    pub fn new() -> Self {
        SparseVec::default()
    }

    /// Build from unsorted entries, summing duplicates.
    pub fn from_unsorted(mut entries: Vec<(usize, C)>) -> Self {
        entries.sort_by_key(|e| e.0);
        let mut out: Vec<(usize, C)> = Vec::with_capacity(entries.len());
        for (i, c) in entries {
            match out.last_mut() {
                Some((j, d)) if *j == i => *d = d.add(&c),
                _ => out.push((i, c)),
            }
        }
        out.retain(|(_, c)| !c.is_zero());
        SparseVec { entries: out }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn lead(&self) -> Option<usize> {
        self.entries.first().map(|e| e.0)
    }

    pub fn get(&self, i: usize) -> Option<&C> {
        self.entries.binary_search_by_key(&i, |e| e.0).ok().map(|k| &self.entries[k].1)
    }

    pub fn scale(&self, s: &C) -> Self {
        SparseVec { entries: self.entries.iter().map(|(i, c)| (*i, c.mul(s))).collect() }
    }

    /// `self - s * other`.
    pub fn sub_scaled(&self, other: &SparseVec<C>, s: &C) -> Self {
        let (a, b) = (&self.entries, &other.entries);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() || j < b.len() {
            if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
                out.push(a[i].clone());
                i += 1;
            } else if i == a.len() || b[j].0 < a[i].0 {
                out.push((b[j].0, b[j].1.mul(s).neg()));
                j += 1;
            } else {
                let v = a[i].1.sub(&b[j].1.mul(s));
                if !v.is_zero() {
                    out.push((a[i].0, v));
                }
                i += 1;
                j += 1;
            }
        }
        SparseVec { entries: out }
    }
}

/// Row-echelon basis of a growing subspace; every stored row has leading coefficient 1.
#[derive(Clone, Debug)]
pub struct Echelon<C> {
    rows: Vec<SparseVec<C>>,
    pivots: HashMap<usize, usize>,
}

impl<C: Coeff> Default for Echelon<C> {
    fn default() -> Self {
        Echelon { rows: Vec::new(), pivots: HashMap::new() }
    }
}

impl<C: Coeff> Echelon<C> {
    pub fn new() -> Self {
        Echelon::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Remainder of `v` after clearing every pivot column it meets.
    pub fn reduce(&self, v: &SparseVec<C>) -> SparseVec<C> {
        let mut v = v.clone();
        let mut done: Vec<(usize, C)> = Vec::new();
        // entries without a pivot are final; set them aside
        while let Some(lead) = v.lead() {
            match self.pivots.get(&lead) {
                Some(&r) => {
                    let c = v.entries[0].1.clone();
                    v = v.sub_scaled(&self.rows[r], &c);
                }
                None => {
                    let e = v.entries.remove(0);
                    done.push(e);
                }
            }
        }
        SparseVec { entries: done }
    }

    /// Add `v` to the span; returns whether it was independent.
    pub fn insert(&mut self, v: &SparseVec<C>) -> bool {
        let mut v = v.clone();
        loop {
            let lead = match v.lead() {
                None => return false,
                Some(l) => l,
            };
            match self.pivots.get(&lead) {
                Some(&r) => {
                    let c = v.entries[0].1.clone();
                    v = v.sub_scaled(&self.rows[r], &c);
                }
                None => {
                    let inv = v.entries[0].1.inv();
                    let v = v.scale(&inv);
                    self.pivots.insert(lead, self.rows.len());
                    self.rows.push(v);
                    return true;
                }
            }
        }
    }

    pub fn contains(&self, v: &SparseVec<C>) -> bool {
        self.reduce(v).is_zero()
    }
}

pub fn rank<C: Coeff>(rows: impl IntoIterator<Item = SparseVec<C>>) -> usize {
    let mut e = Echelon::new();
    for r in rows {
        e.insert(&r);
    }
    e.rank()
}

/// Solve `sum_j m[i][j] x_j = rhs_i` given as sparse rows paired with the right-hand
/// side. Pivots are taken at the smallest unknown index; free unknowns are set to 0.
/// Returns `None` when the system is inconsistent.
pub fn solve<C: Coeff>(equations: Vec<(SparseVec<C>, C)>, unknowns: usize, zero: &C) -> Option<Vec<C>> {
    // augment with column `unknowns` holding the right-hand side
    let mut ech: Echelon<C> = Echelon::new();
    for (mut row, rhs) in equations {
        if !rhs.is_zero() {
            row.entries.push((unknowns, rhs));
        }
        ech.insert(&row);
    }
    if ech.pivots.contains_key(&unknowns) {
        return None;
    }
    let mut x: Vec<C> = vec![zero.clone(); unknowns];
    let mut order: Vec<(usize, usize)> = ech.pivots.iter().map(|(&c, &r)| (c, r)).collect();
    order.sort_unstable_by(|a, b| b.0.cmp(&a.0));
    for (col, r) in order {
        let row = &ech.rows[r];
        let mut val = row.get(unknowns).cloned().unwrap_or_else(|| zero.clone());
        for (j, c) in &row.entries[1..] {
            if *j < unknowns && !x[*j].is_zero() {
                val = val.sub(&c.mul(&x[*j]));
            }
        }
        x[col] = val;
    }
    Some(x)
}

/// Dimension of the solution space of the homogeneous system.
pub fn nullity<C: Coeff>(rows: Vec<SparseVec<C>>, unknowns: usize) -> usize {
    unknowns - rank(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::{FieldConfig, FieldValue};
    use proptest::prelude::*;

    fn v(cfg: &std::sync::Arc<FieldConfig>, e: &[(usize, i64)]) -> SparseVec<FieldValue> {
        SparseVec::from_unsorted(e.iter().map(|&(i, c)| (i, FieldValue::from_int(cfg, c))).collect())
    }

    #[test]
    fn rank_and_solve() {
        let q = FieldConfig::rationals();
        let rows = vec![v(&q, &[(0, 1), (1, 2)]), v(&q, &[(0, 2), (1, 4)]), v(&q, &[(2, 3)])];
        assert_eq!(rank(rows.clone()), 2);
        let zero = FieldValue::zero(&q);
        let eqs = vec![
            (rows[0].clone(), FieldValue::from_int(&q, 5)),
            (rows[2].clone(), FieldValue::from_int(&q, 6)),
        ];
        let x = solve(eqs, 3, &zero).unwrap();
        // pivot at x0, x1 free
        assert_eq!(x[0], FieldValue::from_int(&q, 5));
        assert!(x[1].is_zero());
        assert_eq!(x[2], FieldValue::from_int(&q, 2));
        let bad = vec![
            (rows[0].clone(), FieldValue::from_int(&q, 1)),
            (rows[1].clone(), FieldValue::from_int(&q, 1)),
        ];
        assert!(solve(bad, 3, &zero).is_none());
    }

    proptest! {
        #[test]
        fn solutions_satisfy_the_system(
            m in proptest::collection::vec(proptest::collection::vec(-3i64..4, 5), 1..6),
            rhs_seed in proptest::collection::vec(-3i64..4, 5),
        ) {
            let q = FieldConfig::rationals();
            let zero = FieldValue::zero(&q);
            // right-hand side in the column space so a solution exists
            let rows: Vec<SparseVec<FieldValue>> = m
                .iter()
                .map(|r| v(&q, &r.iter().enumerate().map(|(j, &c)| (j, c)).collect::<Vec<_>>()))
                .collect();
            let rhs: Vec<FieldValue> = m
                .iter()
                .map(|r| FieldValue::from_int(&q, r.iter().zip(&rhs_seed).map(|(a, b)| a * b).sum()))
                .collect();
            let eqs: Vec<_> = rows.iter().cloned().zip(rhs.iter().cloned()).collect();
            let x = solve(eqs, 5, &zero).expect("consistent");
            for (r, b) in rows.iter().zip(&rhs) {
                let mut s = zero.clone();
                for (j, c) in &r.entries {
                    s = s.add_ref(&c.mul_ref(&x[*j]));
                }
                prop_assert_eq!(&s, b);
            }
            let n = nullity(rows, 5);
            prop_assert!(n <= 5);
        }
    }
}
