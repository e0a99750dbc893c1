//! Tower elements in left normal form and unnormalized free-algebra expressions.

use std::cmp::Ordering;
use std::collections::btree_map::Entry;
use std::collections::BTreeMap;

use smallvec::SmallVec;

use crate::scalars::FieldValue;

/// Exponent vector `x_1^{e_1} ... x_n^{e_n}` in level order, trailing zeros trimmed.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial(SmallVec<[u16; 8]>);

impl std::fmt::Debug for Monomial {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:?}", self.0.as_slice())
    }
}

impl Monomial {
    pub fn one() -> Self {
        Monomial(SmallVec::new())
    }

    pub fn from_exps(exps: &[u16]) -> Self {
        let mut v: SmallVec<[u16; 8]> = exps.iter().copied().collect();
        while v.last() == Some(&0) {
            v.pop();
        }
        Monomial(v)
    }

    pub fn var(gen: usize, power: u16) -> Self {
        let mut v: SmallVec<[u16; 8]> = SmallVec::from_elem(0, gen + 1);
        v[gen] = power;
        Monomial::from_exps(&v)
    }

    pub fn exps(&self) -> &[u16] {
        &self.0
    }

    pub fn exp(&self, gen: usize) -> u16 {
        self.0.get(gen).copied().unwrap_or(0)
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    /// Number of generators in scope: one past the highest generator used.
    pub fn span(&self) -> usize {
        self.0.len()
    }

    pub fn total(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn weighted_degree(&self, weights: &[u32]) -> u32 {
        self.0.iter().zip(weights).map(|(&e, &w)| e as u32 * w).sum()
    }

    /// Split into the part on generators `< gen` and the part on `>= gen`.
    pub fn split_at(&self, gen: usize) -> (Monomial, Monomial) {
        let cut = gen.min(self.0.len());
        let low = Monomial::from_exps(&self.0[..cut]);
        let mut high: SmallVec<[u16; 8]> = SmallVec::from_elem(0, cut);
        high.extend_from_slice(&self.0[cut..]);
        (low, Monomial::from_exps(&high))
    }

    /// Concatenate a monomial on generators `< k` with one on generators `>= k`.
    /// Both are already in normal order so no rewriting is needed.
    pub fn concat_ordered(low: &Monomial, high: &Monomial) -> Monomial {
        let n = low.0.len().max(high.0.len());
        let v: SmallVec<[u16; 8]> = (0..n).map(|i| low.exp(i) + high.exp(i)).collect();
        Monomial::from_exps(&v)
    }

    /// Highest generator index with a nonzero exponent.
    pub fn top(&self) -> Option<usize> {
        if self.0.is_empty() {
            None
        } else {
            Some(self.0.len() - 1)
        }
    }

    /// Lowest generator index with a nonzero exponent.
    pub fn first(&self) -> Option<usize> {
        self.0.iter().position(|&e| e > 0)
    }

    pub fn with_exp(&self, gen: usize, power: u16) -> Monomial {
        let mut v = self.0.clone();
        if v.len() <= gen {
            v.resize(gen + 1, 0);
        }
        v[gen] = power;
        Monomial::from_exps(&v)
    }

    pub fn render(&self, names: &[String]) -> String {
        let mut parts = Vec::new();
        for (i, &e) in self.0.iter().enumerate() {
            match e {
                0 => {}
                1 => parts.push(names[i].clone()),
                _ => parts.push(format!("{}^{}", names[i], e)),
            }
        }
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total().cmp(&other.total()).then_with(|| {
            let n = self.0.len().max(other.0.len());
            for i in 0..n {
                match self.exp(i).cmp(&other.exp(i)) {
                    Ordering::Equal => {}
                    o => return o,
                }
            }
            Ordering::Equal
        })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A sparse linear combination of normal-form monomials.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct TowerElement {
    terms: BTreeMap<Monomial, FieldValue>,
}

impl std::fmt::Debug for TowerElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_map().entries(self.terms.iter()).finish()
    }
}

impl TowerElement {
    pub fn zero() -> Self {
        TowerElement::default()
    }

    pub fn monomial(m: Monomial, c: FieldValue) -> Self {
        let mut e = TowerElement::zero();
        e.add_term(m, c);
        e
    }

    pub fn scalar(c: FieldValue) -> Self {
        TowerElement::monomial(Monomial::one(), c)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &FieldValue)> {
        self.terms.iter()
    }

    pub fn into_terms(self) -> impl Iterator<Item = (Monomial, FieldValue)> {
        self.terms.into_iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, m: &Monomial) -> Option<&FieldValue> {
        self.terms.get(m)
    }

    /// Smallest number of tower levels containing every generator used.
    pub fn level(&self) -> usize {
        self.terms.keys().map(Monomial::span).max().unwrap_or(0)
    }

    pub fn add_term(&mut self, m: Monomial, c: FieldValue) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
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

    pub fn add_scaled(&mut self, other: &TowerElement, s: &FieldValue) {
        if s.is_zero() {
            return;
        }
        for (m, c) in &other.terms {
            self.add_term(m.clone(), c.mul_ref(s));
        }
    }

    pub fn add_assign(&mut self, other: &TowerElement) {
        for (m, c) in &other.terms {
            self.add_term(m.clone(), c.clone());
        }
    }

    pub fn add(&self, other: &TowerElement) -> TowerElement {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn sub(&self, other: &TowerElement) -> TowerElement {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.neg_ref());
        }
        out
    }

    pub fn neg(&self) -> TowerElement {
        TowerElement { terms: self.terms.iter().map(|(m, c)| (m.clone(), c.neg_ref())).collect() }
    }

    pub fn scale(&self, s: &FieldValue) -> TowerElement {
        if s.is_zero() {
            return TowerElement::zero();
        }
        TowerElement { terms: self.terms.iter().map(|(m, c)| (m.clone(), c.mul_ref(s))).collect() }
    }

    /// Apply `f` to every monomial, keeping coefficients; images must stay distinct.
    pub fn map_monomials(&self, f: impl Fn(&Monomial) -> Monomial) -> TowerElement {
        let mut out = TowerElement::zero();
        for (m, c) in &self.terms {
            out.add_term(f(m), c.clone());
        }
        out
    }

    /// Maximum weighted degree over the terms; `None` for zero.
    pub fn weighted_degree(&self, weights: &[u32]) -> Option<u32> {
        self.terms.keys().map(|m| m.weighted_degree(weights)).max()
    }

    pub fn is_homogeneous(&self, weights: &[u32]) -> bool {
        let mut it = self.terms.keys().map(|m| m.weighted_degree(weights));
        match it.next() {
            None => true,
            Some(d) => it.all(|e| e == d),
        }
    }

    /// The part of weighted degree exactly `d`.
    pub fn homogeneous_part(&self, weights: &[u32], d: u32) -> TowerElement {
        TowerElement {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.weighted_degree(weights) == d)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// The scalar `c` when the element equals `c * 1`.
    pub fn as_scalar(&self) -> Option<FieldValue> {
        match self.terms.len() {
            0 => None,
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    /// Render in descending weighted-degree order, round-trippable by the parser.
    pub fn render(&self, names: &[String], weights: &[u32]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut terms: Vec<(&Monomial, &FieldValue)> = self.terms.iter().collect();
        terms.sort_by(|a, b| {
            b.0.weighted_degree(weights)
                .cmp(&a.0.weighted_degree(weights))
                .then_with(|| {
                    let n = a.0.span().max(b.0.span());
                    for i in 0..n {
                        match b.0.exp(i).cmp(&a.0.exp(i)) {
                            Ordering::Equal => {}
                            o => return o,
                        }
                    }
                    Ordering::Equal
                })
        });
        let mut out = String::new();
        for (i, (m, c)) in terms.into_iter().enumerate() {
            let (neg, mag) = coefficient_parts(c);
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            if m.is_one() {
                out.push_str(if mag.is_empty() { "1" } else { &mag });
            } else if mag.is_empty() {
                out.push_str(&m.render(names));
            } else {
                out.push_str(&mag);
                out.push('*');
                out.push_str(&m.render(names));
            }
        }
        out
    }
}

/// Split a coefficient into sign and magnitude text; the magnitude is empty for 1.
fn coefficient_parts(c: &FieldValue) -> (bool, String) {
    if c.is_one() {
        return (false, String::new());
    }
    if c.neg_ref().is_one() {
        return (true, String::new());
    }
    let s = c.render();
    if c.is_atomic() {
        if let Some(rest) = s.strip_prefix('-') {
            return (true, rest.to_string());
        }
        return (false, s);
    }
    (false, format!("({s})"))
}

/// Unnormalized expression over the tower's generators and scalars.
#[derive(Clone, Debug)]
pub enum FreeExpr {
    Scalar(FieldValue),
    Gen(usize),
    Sum(Vec<FreeExpr>),
    Product(Vec<FreeExpr>),
    Neg(Box<FreeExpr>),
    Pow(Box<FreeExpr>, u32),
}

impl FreeExpr {
    pub fn gen(i: usize) -> Self {
        FreeExpr::Gen(i)
    }

    pub fn scaled(c: FieldValue, e: FreeExpr) -> Self {
        FreeExpr::Product(vec![FreeExpr::Scalar(c), e])
    }

    /// Product of generators, e.g. a word in the free algebra.
    pub fn word(gens: &[usize]) -> Self {
        FreeExpr::Product(gens.iter().map(|&g| FreeExpr::Gen(g)).collect())
    }

    /// Every generator index referenced.
    pub fn generators(&self, out: &mut Vec<usize>) {
        match self {
            FreeExpr::Scalar(_) => {}
            FreeExpr::Gen(g) => out.push(*g),
            FreeExpr::Sum(v) | FreeExpr::Product(v) => v.iter().for_each(|e| e.generators(out)),
            FreeExpr::Neg(e) | FreeExpr::Pow(e, _) => e.generators(out),
        }
    }
}
