//! Sparse tensors of tower elements: `E⊗E` pairs and longer bar tensors.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;

use crate::ncpoly::{Monomial, TowerElement};
use crate::ore::OreTower;
use crate::scalars::FieldValue;

fn add_into<K: Ord>(map: &mut BTreeMap<K, FieldValue>, k: K, c: FieldValue) {
    if c.is_zero() {
        return;
    }
    match map.entry(k) {
        Entry::Vacant(v) => {
            v.insert(c);
        }
        Entry::Occupied(mut o) => {
            let s = o.get().add_ref(&c);
            if s.is_zero() {
                o.remove();
            } else {
                *o.get_mut() = s;
            }
        }
    }
}

/// An element of `E⊗E` over the ground field.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Pair {
    terms: BTreeMap<(Monomial, Monomial), FieldValue>,
}

impl Pair {
    pub fn zero() -> Self {
        Pair::default()
    }

    pub fn of(left: &TowerElement, right: &TowerElement) -> Self {
        let mut p = Pair::zero();
        for (m, c) in left.terms() {
            for (n, d) in right.terms() {
                p.add_term(m.clone(), n.clone(), c.mul_ref(d));
            }
        }
        p
    }

    pub fn basis(m: Monomial, n: Monomial, c: FieldValue) -> Self {
        let mut p = Pair::zero();
        p.add_term(m, n, c);
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(Monomial, Monomial), &FieldValue)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn add_term(&mut self, m: Monomial, n: Monomial, c: FieldValue) {
        add_into(&mut self.terms, (m, n), c);
    }

    pub fn add_assign(&mut self, o: &Pair) {
        for ((m, n), c) in &o.terms {
            self.add_term(m.clone(), n.clone(), c.clone());
        }
    }

    pub fn add_scaled(&mut self, o: &Pair, s: &FieldValue) {
        for ((m, n), c) in &o.terms {
            self.add_term(m.clone(), n.clone(), c.mul_ref(s));
        }
    }

    pub fn sub(&self, o: &Pair) -> Pair {
        let mut out = self.clone();
        for ((m, n), c) in &o.terms {
            out.add_term(m.clone(), n.clone(), c.neg_ref());
        }
        out
    }

    pub fn neg(&self) -> Pair {
        Pair { terms: self.terms.iter().map(|(k, c)| (k.clone(), c.neg_ref())).collect() }
    }

    /// Apply a linear map to each factor separately.
    pub fn map(
        &self,
        mut left: impl FnMut(&Monomial) -> TowerElement,
        mut right: impl FnMut(&Monomial) -> TowerElement,
    ) -> Pair {
        let mut out = Pair::zero();
        for ((m, n), c) in &self.terms {
            let (l, r) = (left(m), right(n));
            for (a, x) in l.terms() {
                for (b, y) in r.terms() {
                    out.add_term(a.clone(), b.clone(), c.mul_ref(x).mul_ref(y));
                }
            }
        }
        out
    }

    /// Outer left action: `(l⊗r)·(m⊗n) = lm⊗nr`, extended bilinearly in `self = l⊗r`.
    pub fn outer(&self, t: &OreTower, on: &Pair) -> Pair {
        let mut out = Pair::zero();
        for ((l, r), c) in &self.terms {
            for ((m, n), d) in &on.terms {
                let lm = t.mul_mono(l, m);
                let nr = t.mul_mono(n, r);
                let cd = c.mul_ref(d);
                for (a, x) in lm.terms() {
                    let cdx = cd.mul_ref(x);
                    for (b, y) in nr.terms() {
                        out.add_term(a.clone(), b.clone(), cdx.mul_ref(y));
                    }
                }
            }
        }
        out
    }

    /// Multiply the first factor on the left by `a` and the second on the right by `b`.
    pub fn sandwich(&self, t: &OreTower, a: &TowerElement, b: &TowerElement) -> Pair {
        self.map(|m| t.multiply(a, &t.mono(m.clone())), |n| t.multiply(&t.mono(n.clone()), b))
    }

    /// Inner action: `a·(m⊗n)·b = mb⊗an`.
    pub fn inner(&self, t: &OreTower, a: &TowerElement, b: &TowerElement) -> Pair {
        self.map(|m| t.multiply(&t.mono(m.clone()), b), |n| t.multiply(a, &t.mono(n.clone())))
    }

    /// Multiplication `E⊗E → E`.
    pub fn multiply_out(&self, t: &OreTower) -> TowerElement {
        let mut out = TowerElement::zero();
        for ((m, n), c) in &self.terms {
            out.add_scaled(&t.mul_mono(m, n), c);
        }
        out
    }

    pub fn render(&self, t: &OreTower) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let one = FieldValue::one(t.field());
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|((m, n), c)| {
                let l = t.render(&TowerElement::monomial(m.clone(), one.clone()));
                let r = t.render(&TowerElement::monomial(n.clone(), one.clone()));
                if c.is_one() {
                    format!("{l}⊗{r}")
                } else {
                    format!("({})*{l}⊗{r}", c.render())
                }
            })
            .collect();
        parts.join(" + ")
    }
}

/// An element of `E⊗A^{⊗n}⊗E` (or any tensor power), keyed by monomial tuples.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Tensor {
    terms: BTreeMap<Vec<Monomial>, FieldValue>,
}

impl Tensor {
    pub fn zero() -> Self {
        Tensor::default()
    }

    /// Expand the tensor product of the given factors.
    pub fn of(t: &OreTower, factors: &[TowerElement]) -> Self {
        let mut acc: Vec<(Vec<Monomial>, FieldValue)> = vec![(Vec::new(), FieldValue::one(t.field()))];
        for f in factors {
            let mut next = Vec::new();
            for (k, c) in &acc {
                for (m, d) in f.terms() {
                    let mut k2 = k.clone();
                    k2.push(m.clone());
                    next.push((k2, c.mul_ref(d)));
                }
            }
            acc = next;
        }
        let mut t = Tensor::zero();
        for (k, c) in acc {
            t.add_term(k, c);
        }
        t
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<Monomial>, &FieldValue)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, k: Vec<Monomial>, c: FieldValue) {
        add_into(&mut self.terms, k, c);
    }

    pub fn add_scaled(&mut self, o: &Tensor, s: &FieldValue) {
        for (k, c) in &o.terms {
            self.add_term(k.clone(), c.mul_ref(s));
        }
    }

    pub fn sub(&self, o: &Tensor) -> Tensor {
        let mut out = self.clone();
        for (k, c) in &o.terms {
            out.add_term(k.clone(), c.neg_ref());
        }
        out
    }

    pub fn render(&self, t: &OreTower) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let one = |m: &Monomial| t.render(&TowerElement::monomial(m.clone(), FieldValue::one(t.field())));
        self.terms
            .iter()
            .map(|(k, c)| {
                let body: Vec<String> = k.iter().map(one).collect();
                if c.is_one() {
                    body.join("⊗")
                } else {
                    format!("({})*{}", c.render(), body.join("⊗"))
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}
