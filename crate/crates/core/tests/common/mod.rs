//! Shared helpers for the integration tests: bundled case loading and a word-rewriting
//! oracle that is independent of the library's normal-form multiplication.

#![allow(dead_code)]

use std::collections::{BTreeMap, HashMap};
use std::io::Write;
use std::sync::Arc;

use ore_nakayama::dsl::{parse_tower, TowerSpec};
use ore_nakayama::ncpoly::{Monomial, TowerElement};
use ore_nakayama::ore::OreTower;
use ore_nakayama::scalars::FieldValue;

pub const GOOD: &[&str] = &["quantum-plane", "quantum-affine", "weyl", "jordan", "dim3", "D", "D-symbolic", "G"];

pub fn case_text(name: &str) -> String {
    let path = format!("{}/cases/{name}.ore", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path}: {e}"))
}

pub fn load(name: &str) -> TowerSpec {
    parse_tower(&case_text(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

/// Print past the test harness's output capture so the lines land in the log.
pub fn emit(line: &str) {
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "{line}");
    let _ = out.flush();
}

pub type Word = Vec<usize>;
pub type WordSum = BTreeMap<Word, FieldValue>;

fn word_of(m: &Monomial) -> Word {
    let mut w = Vec::new();
    for (g, &e) in m.exps().iter().enumerate() {
        w.extend(std::iter::repeat(g).take(e as usize));
    }
    w
}

fn add_to(sum: &mut WordSum, w: Word, c: FieldValue) {
    match sum.get_mut(&w) {
        Some(v) => {
            *v = v.add_ref(&c);
            if v.is_zero() {
                sum.remove(&w);
            }
        }
        None if !c.is_zero() => {
            sum.insert(w, c);
        }
        None => {}
    }
}

/// Rewrites words with `x_j x_i → σ_j(x_i) x_j + δ_j(x_i)` for `j > i` until every word is
/// nondecreasing, then reads them as monomials.
pub struct WordOracle {
    tower: Arc<OreTower>,
    rules: HashMap<(usize, usize), Vec<(Word, FieldValue)>>,
}

impl WordOracle {
    pub fn new(tower: &Arc<OreTower>) -> Self {
        let mut rules = HashMap::new();
        for j in 1..tower.num_gens() {
            let level = tower.level(j);
            for i in 0..j {
                let mut rhs = Vec::new();
                for (m, c) in level.sigma.images[i].terms() {
                    let mut w = word_of(m);
                    w.push(j);
                    rhs.push((w, c.clone()));
                }
                for (m, c) in level.delta.images[i].terms() {
                    rhs.push((word_of(m), c.clone()));
                }
                rules.insert((j, i), rhs);
            }
        }
        WordOracle { tower: tower.clone(), rules }
    }

    pub fn normalize(&self, input: WordSum) -> TowerElement {
        let mut pending: Vec<(Word, FieldValue)> = input.into_iter().collect();
        let mut done = WordSum::new();
        while let Some((w, c)) = pending.pop() {
            match (0..w.len().saturating_sub(1)).find(|&k| w[k] > w[k + 1]) {
                None => add_to(&mut done, w, c),
                Some(k) => {
                    for (rhs, rc) in &self.rules[&(w[k], w[k + 1])] {
                        let mut nw = w[..k].to_vec();
                        nw.extend_from_slice(rhs);
                        nw.extend_from_slice(&w[k + 2..]);
                        pending.push((nw, c.mul_ref(rc)));
                    }
                }
            }
        }
        let n = self.tower.num_gens();
        let mut out = TowerElement::zero();
        for (w, c) in done {
            let mut exps = vec![0u16; n];
            for g in w {
                exps[g] += 1;
            }
            out.add_term(Monomial::from_exps(&exps), c);
        }
        out
    }

    pub fn word(&self, w: &[usize]) -> TowerElement {
        let one = FieldValue::one(self.tower.field());
        self.normalize(WordSum::from([(w.to_vec(), one)]))
    }

    /// Product of two normal-form elements, each expanded into ordered words.
    pub fn product(&self, a: &TowerElement, b: &TowerElement) -> TowerElement {
        let mut sum = WordSum::new();
        for (ma, ca) in a.terms() {
            for (mb, cb) in b.terms() {
                let mut w = word_of(ma);
                w.extend(word_of(mb));
                add_to(&mut sum, w, ca.mul_ref(cb));
            }
        }
        self.normalize(sum)
    }

    /// `Σ c·word` with words given by generator names.
    pub fn linear(&self, terms: &[(FieldValue, &[&str])]) -> TowerElement {
        let mut sum = WordSum::new();
        for (c, names) in terms {
            let w = names.iter().map(|n| self.tower.gen_index(n).expect("generator")).collect();
            add_to(&mut sum, w, c.clone());
        }
        self.normalize(sum)
    }
}

/// Value of a `let` binding in a parsed case.
pub fn scalar(spec: &TowerSpec, name: &str) -> FieldValue {
    spec.lets.iter().find(|(n, _)| n == name).unwrap_or_else(|| panic!("no let {name}")).1.clone()
}
