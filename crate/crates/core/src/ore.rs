//! Iterated Ore extensions: the rewrite product, extension of σ and δ to all
//! elements, well-definedness checks, and the p/q coefficient operators.

use std::collections::HashMap;
use std::sync::Arc;

use parking_lot::Mutex;
use thiserror::Error;

use crate::ncpoly::{FreeExpr, Monomial, TowerElement};
use crate::report::{Check, VerificationReport};
use crate::scalars::{FieldConfig, FieldValue, ScalarError};

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum TowerError {
    #[error("elements belong to different towers")]
    TowerMismatch,
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("element is not in the base of level {0}")]
    ElementAboveBase(usize),
    #[error("operator index out of range")]
    IndexOutOfRange,
    #[error("tower has not been verified")]
    Unverified,
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

/// Images of the generators `0..len` under a map.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct GenMap {
    pub images: Vec<TowerElement>,
}

impl GenMap {
    pub fn new(images: Vec<TowerElement>) -> Self {
        GenMap { images }
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn get(&self, g: usize) -> Option<&TowerElement> {
        self.images.get(g)
    }
}

#[derive(Clone, Debug)]
pub struct OreLevel {
    pub name: String,
    pub degree: u32,
    pub sigma: GenMap,
    pub sigma_inv: GenMap,
    pub delta: GenMap,
}

impl OreLevel {
    /// A plain polynomial step: σ = id, δ = 0 on the given number of lower generators.
    pub fn polynomial(name: impl Into<String>, degree: u32, lower: usize, cfg: &Arc<FieldConfig>) -> Self {
        let id: Vec<TowerElement> = (0..lower)
            .map(|g| TowerElement::monomial(Monomial::var(g, 1), FieldValue::one(cfg)))
            .collect();
        OreLevel {
            name: name.into(),
            degree,
            sigma: GenMap::new(id.clone()),
            sigma_inv: GenMap::new(id),
            delta: GenMap::new(vec![TowerElement::zero(); lower]),
        }
    }
}

#[derive(Default)]
struct LevelCache {
    sigma: HashMap<Monomial, Arc<TowerElement>>,
    sigma_inv: HashMap<Monomial, Arc<TowerElement>>,
    delta: HashMap<Monomial, Arc<TowerElement>>,
    xpow: HashMap<(u16, Monomial), Arc<Vec<TowerElement>>>,
}

#[derive(Default)]
struct Caches {
    levels: Vec<LevelCache>,
    products: HashMap<(Monomial, Monomial), Arc<TowerElement>>,
    bases: HashMap<(usize, u32, bool), Arc<Vec<Monomial>>>,
}

#[derive(Clone, Copy)]
enum Which {
    Sigma,
    SigmaInv,
    Delta,
}

pub struct OreTower {
    field: Arc<FieldConfig>,
    levels: Vec<OreLevel>,
    graded: bool,
    names: Vec<String>,
    weights: Vec<u32>,
    sigma_is_id: Vec<bool>,
    sigma_inv_is_id: Vec<bool>,
    delta_is_zero: Vec<bool>,
    caches: Mutex<Caches>,
}

impl std::fmt::Debug for OreTower {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("OreTower").field("names", &self.names).field("graded", &self.graded).finish()
    }
}

impl OreTower {
    pub fn new(field: Arc<FieldConfig>, levels: Vec<OreLevel>, graded: bool) -> Arc<OreTower> {
        let names = levels.iter().map(|l| l.name.clone()).collect();
        let weights = levels.iter().map(|l| l.degree).collect();
        let is_identity = |m: &GenMap| {
            m.images.iter().enumerate().all(|(g, e)| {
                e.num_terms() == 1 && e.coeff(&Monomial::var(g, 1)).is_some_and(FieldValue::is_one)
            })
        };
        let sigma_is_id = levels.iter().map(|l| is_identity(&l.sigma)).collect();
        let sigma_inv_is_id = levels.iter().map(|l| is_identity(&l.sigma_inv)).collect();
        let delta_is_zero = levels.iter().map(|l| l.delta.images.iter().all(TowerElement::is_zero)).collect();
        let mut caches = Caches::default();
        caches.levels = (0..levels.len()).map(|_| LevelCache::default()).collect();
        Arc::new(OreTower {
            field,
            levels,
            graded,
            names,
            weights,
            sigma_is_id,
            sigma_inv_is_id,
            delta_is_zero,
            caches: Mutex::new(caches),
        })
    }

    /// The sub-tower made of the first `n` levels.
    pub fn truncate(&self, n: usize) -> Arc<OreTower> {
        OreTower::new(self.field.clone(), self.levels[..n].to_vec(), self.graded)
    }

    pub fn field(&self) -> &Arc<FieldConfig> {
        &self.field
    }

    pub fn levels(&self) -> &[OreLevel] {
        &self.levels
    }

    pub fn level(&self, i: usize) -> &OreLevel {
        &self.levels[i]
    }

    pub fn num_gens(&self) -> usize {
        self.levels.len()
    }

    pub fn graded(&self) -> bool {
        self.graded
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    pub fn gen_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn sigma_is_identity(&self, level: usize) -> bool {
        self.sigma_is_id[level]
    }

    pub fn delta_is_zero(&self, level: usize) -> bool {
        self.delta_is_zero[level]
    }

    pub fn max_degree(&self) -> u32 {
        self.weights.iter().copied().max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.weights.iter().sum()
    }

    pub fn one(&self) -> TowerElement {
        TowerElement::scalar(FieldValue::one(&self.field))
    }

    pub fn scalar(&self, c: FieldValue) -> TowerElement {
        TowerElement::scalar(c)
    }

    pub fn int(&self, n: i64) -> FieldValue {
        FieldValue::from_int(&self.field, n)
    }

    pub fn gen(&self, g: usize) -> TowerElement {
        TowerElement::monomial(Monomial::var(g, 1), FieldValue::one(&self.field))
    }

    pub fn mono(&self, m: Monomial) -> TowerElement {
        TowerElement::monomial(m, FieldValue::one(&self.field))
    }

    pub fn render(&self, e: &TowerElement) -> String {
        e.render(&self.names, &self.weights)
    }

    /// Weighted degree of a monomial.
    pub fn degree_of(&self, m: &Monomial) -> u32 {
        m.weighted_degree(&self.weights)
    }

    /// Monomials on the first `gens` generators of weighted degree `d`
    /// (or at most `d` when `upto`), in ascending monomial order.
    pub fn basis(&self, gens: usize, d: u32, upto: bool) -> Arc<Vec<Monomial>> {
        if let Some(b) = self.caches.lock().bases.get(&(gens, d, upto)) {
            return b.clone();
        }
        let mut out = Vec::new();
        let mut exps = vec![0u16; gens];
        fn rec(i: usize, left: u32, upto: bool, w: &[u32], exps: &mut Vec<u16>, out: &mut Vec<Monomial>) {
            if i == exps.len() {
                if upto || left == 0 {
                    out.push(Monomial::from_exps(exps));
                }
                return;
            }
            let mut e = 0u16;
            loop {
                let used = e as u32 * w[i];
                if used > left {
                    break;
                }
                exps[i] = e;
                rec(i + 1, left - used, upto, w, exps, out);
                e += 1;
            }
            exps[i] = 0;
        }
        rec(0, d, upto, &self.weights[..gens], &mut exps, &mut out);
        out.sort();
        let out = Arc::new(out);
        self.caches.lock().bases.insert((gens, d, upto), out.clone());
        out
    }

    /// Basis of the degree-`d` piece (filtration piece `<= d` when ungraded).
    pub fn degree_basis(&self, gens: usize, d: u32) -> Arc<Vec<Monomial>> {
        self.basis(gens, d, !self.graded)
    }

    // ---- products ----

    pub fn multiply(&self, a: &TowerElement, b: &TowerElement) -> TowerElement {
        let mut out = TowerElement::zero();
        for (m1, c1) in a.terms() {
            for (m2, c2) in b.terms() {
                let p = self.mul_mono(m1, m2);
                out.add_scaled(&p, &c1.mul_ref(c2));
            }
        }
        out
    }

    pub fn pow(&self, a: &TowerElement, e: u32) -> TowerElement {
        let mut out = self.one();
        for _ in 0..e {
            out = self.multiply(&out, a);
        }
        out
    }

    /// Normal form of the product of two monomials.
    pub fn mul_mono(&self, m: &Monomial, n: &Monomial) -> Arc<TowerElement> {
        if m.is_one() || n.is_one() {
            let prod = if m.is_one() { n.clone() } else { m.clone() };
            return Arc::new(self.mono(prod));
        }
        let key = (m.clone(), n.clone());
        if let Some(p) = self.caches.lock().products.get(&key) {
            return p.clone();
        }
        let k = m.top().unwrap();
        let a = m.exp(k);
        let m_low = m.with_exp(k, 0);
        let (u, v) = n.split_at(k);
        let mut out = TowerElement::zero();
        if u.is_one() {
            out = self.mono(Monomial::concat_ordered(&m_low, &v.with_exp(k, v.exp(k) + a)));
        } else {
            let coeffs = self.xpow(k, a, &u);
            for (i, c) in coeffs.iter().enumerate() {
                let high = v.with_exp(k, v.exp(k) + i as u16);
                for (w, cw) in c.terms() {
                    let low = self.mul_mono(&m_low, w);
                    for (lm, lc) in low.terms() {
                        out.add_term(Monomial::concat_ordered(lm, &high), lc.mul_ref(cw));
                    }
                }
            }
        }
        let out = Arc::new(out);
        self.caches.lock().products.insert(key, out.clone());
        out
    }

    /// Coefficients `[p^a_0(u), ..., p^a_a(u)]` of `x_k^a * u` for a monomial `u` below level `k`.
    fn xpow(&self, k: usize, a: u16, u: &Monomial) -> Arc<Vec<TowerElement>> {
        let key = (a, u.clone());
        if let Some(v) = self.caches.lock().levels[k].xpow.get(&key) {
            return v.clone();
        }
        let prev: Vec<TowerElement> = if a == 1 {
            vec![self.mono(u.clone())]
        } else {
            self.xpow(k, a - 1, u).as_ref().clone()
        };
        let out = Arc::new(self.apply_x(k, &prev));
        self.caches.lock().levels[k].xpow.insert(key, out.clone());
        out
    }

    /// Left-multiply `sum_i c_i x_k^i` by `x_k`, returning the new coefficient list.
    fn apply_x(&self, k: usize, coeffs: &[TowerElement]) -> Vec<TowerElement> {
        let mut out = vec![TowerElement::zero(); coeffs.len() + 1];
        for (i, c) in coeffs.iter().enumerate() {
            out[i + 1].add_assign(&self.level_map(k, Which::Sigma, c));
            if !self.delta_is_zero[k] {
                out[i].add_assign(&self.level_map(k, Which::Delta, c));
            }
        }
        out
    }

    fn level_map(&self, k: usize, which: Which, a: &TowerElement) -> TowerElement {
        let mut out = TowerElement::zero();
        for (m, c) in a.terms() {
            let img = self.level_map_mono(k, which, m);
            out.add_scaled(&img, c);
        }
        out
    }

    fn level_map_mono(&self, k: usize, which: Which, m: &Monomial) -> Arc<TowerElement> {
        let identity = match which {
            Which::Sigma => self.sigma_is_id[k],
            Which::SigmaInv => self.sigma_inv_is_id[k],
            Which::Delta => false,
        };
        if identity {
            return Arc::new(self.mono(m.clone()));
        }
        if m.is_one() {
            return Arc::new(match which {
                Which::Delta => TowerElement::zero(),
                _ => self.one(),
            });
        }
        {
            let cache = self.caches.lock();
            let lc = &cache.levels[k];
            let hit = match which {
                Which::Sigma => lc.sigma.get(m),
                Which::SigmaInv => lc.sigma_inv.get(m),
                Which::Delta => lc.delta.get(m),
            };
            if let Some(h) = hit {
                return h.clone();
            }
        }
        let g = m.first().unwrap();
        let rest = m.with_exp(g, m.exp(g) - 1);
        let lvl = &self.levels[k];
        let out = match which {
            Which::Sigma | Which::SigmaInv => {
                let map = if matches!(which, Which::Sigma) { &lvl.sigma } else { &lvl.sigma_inv };
                let head = &map.images[g];
                let tail = self.level_map_mono(k, which, &rest);
                self.multiply(head, &tail)
            }
            Which::Delta => {
                // δ(g·rest) = δ(g)·rest + σ(g)·δ(rest)
                let mut acc = self.multiply(&lvl.delta.images[g], &self.mono(rest.clone()));
                let drest = self.level_map_mono(k, Which::Delta, &rest);
                if !drest.is_zero() {
                    acc.add_assign(&self.multiply(&lvl.sigma.images[g], &drest));
                }
                acc
            }
        };
        let out = Arc::new(out);
        let mut cache = self.caches.lock();
        let lc = &mut cache.levels[k];
        match which {
            Which::Sigma => lc.sigma.insert(m.clone(), out.clone()),
            Which::SigmaInv => lc.sigma_inv.insert(m.clone(), out.clone()),
            Which::Delta => lc.delta.insert(m.clone(), out.clone()),
        };
        out
    }

    fn check_base(&self, level: usize, a: &TowerElement) -> Result<(), TowerError> {
        if a.level() > level {
            return Err(TowerError::ElementAboveBase(level));
        }
        Ok(())
    }

    /// σ of the given level applied to an element of its base.
    pub fn sigma(&self, level: usize, a: &TowerElement) -> Result<TowerElement, TowerError> {
        self.check_base(level, a)?;
        Ok(self.level_map(level, Which::Sigma, a))
    }

    pub fn sigma_inv(&self, level: usize, a: &TowerElement) -> Result<TowerElement, TowerError> {
        self.check_base(level, a)?;
        Ok(self.level_map(level, Which::SigmaInv, a))
    }

    /// The σ-derivation of the given level applied to an element of its base.
    pub fn apply_delta(&self, level: usize, a: &TowerElement) -> Result<TowerElement, TowerError> {
        self.check_base(level, a)?;
        if self.delta_is_zero[level] {
            return Ok(TowerElement::zero());
        }
        Ok(self.level_map(level, Which::Delta, a))
    }

    /// Multiplicative extension of an arbitrary generator map.
    pub fn apply_endo(&self, map: &GenMap, a: &TowerElement) -> Result<TowerElement, TowerError> {
        if a.level() > map.len() {
            let g = a.level() - 1;
            return Err(TowerError::UnknownGenerator(self.names[g].clone()));
        }
        let mut memo: HashMap<Monomial, TowerElement> = HashMap::new();
        let mut out = TowerElement::zero();
        for (m, c) in a.terms() {
            let img = self.endo_mono(map, m, &mut memo);
            out.add_scaled(&img, c);
        }
        Ok(out)
    }

    fn endo_mono(&self, map: &GenMap, m: &Monomial, memo: &mut HashMap<Monomial, TowerElement>) -> TowerElement {
        if m.is_one() {
            return self.one();
        }
        if let Some(v) = memo.get(m) {
            return v.clone();
        }
        let g = m.first().unwrap();
        let rest = m.with_exp(g, m.exp(g) - 1);
        let tail = self.endo_mono(map, &rest, memo);
        let out = self.multiply(&map.images[g], &tail);
        memo.insert(m.clone(), out.clone());
        out
    }

    pub fn eval_free_expr(&self, e: &FreeExpr) -> Result<TowerElement, TowerError> {
        Ok(match e {
            FreeExpr::Scalar(c) => self.scalar(c.clone()),
            FreeExpr::Gen(g) => {
                if *g >= self.num_gens() {
                    return Err(TowerError::UnknownGenerator(format!("#{g}")));
                }
                self.gen(*g)
            }
            FreeExpr::Sum(v) => {
                let mut acc = TowerElement::zero();
                for t in v {
                    acc.add_assign(&self.eval_free_expr(t)?);
                }
                acc
            }
            FreeExpr::Product(v) => {
                let mut acc = self.one();
                for t in v {
                    acc = self.multiply(&acc, &self.eval_free_expr(t)?);
                }
                acc
            }
            FreeExpr::Neg(t) => self.eval_free_expr(t)?.neg(),
            FreeExpr::Pow(t, k) => self.pow(&self.eval_free_expr(t)?, *k),
        })
    }

    // ---- coefficient operators ----

    /// `p^n_i(a)`: coefficient of `x^i` in the left normal form of `x^n a`.
    pub fn p_op(&self, level: usize, n: usize, i: usize, a: &TowerElement) -> Result<TowerElement, TowerError> {
        if i > n {
            return Err(TowerError::IndexOutOfRange);
        }
        Ok(self.p_all(level, n, a)?.swap_remove(i))
    }

    /// All of `p^n_0(a), ..., p^n_n(a)`.
    pub fn p_all(&self, level: usize, n: usize, a: &TowerElement) -> Result<Vec<TowerElement>, TowerError> {
        self.check_base(level, a)?;
        let mut cur = vec![a.clone()];
        for _ in 0..n {
            cur = self.apply_x(level, &cur);
        }
        Ok(cur)
    }

    /// `q^n_i(a)`: right coefficient of `x^i` in `a x^n`.
    pub fn q_op(&self, level: usize, n: usize, i: usize, a: &TowerElement) -> Result<TowerElement, TowerError> {
        if i > n {
            return Err(TowerError::IndexOutOfRange);
        }
        Ok(self.q_all(level, n, a)?.swap_remove(i))
    }

    pub fn q_all(&self, level: usize, n: usize, a: &TowerElement) -> Result<Vec<TowerElement>, TowerError> {
        self.check_base(level, a)?;
        let mut cur = vec![a.clone()];
        for _ in 0..n {
            // c x = x σ⁻¹(c) − δσ⁻¹(c)
            let mut next = vec![TowerElement::zero(); cur.len() + 1];
            for (i, c) in cur.iter().enumerate() {
                let s = self.level_map(level, Which::SigmaInv, c);
                if !self.delta_is_zero[level] {
                    next[i].add_assign(&self.level_map(level, Which::Delta, &s).neg());
                }
                next[i + 1].add_assign(&s);
            }
            cur = next;
        }
        Ok(cur)
    }

    /// Split a left-normal-form element as `sum_j x_top^j c_j` with `c_j` in the base.
    pub fn right_normal_form(&self, top: usize, a: &TowerElement) -> Result<Vec<TowerElement>, TowerError> {
        if a.level() > top + 1 {
            return Err(TowerError::TowerMismatch);
        }
        let left = self.left_coefficients(top, a);
        let mut out: Vec<TowerElement> = Vec::new();
        for (j, c) in left.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let qs = self.q_all(top, j, c)?;
            if out.len() < qs.len() {
                out.resize(qs.len(), TowerElement::zero());
            }
            for (i, q) in qs.into_iter().enumerate() {
                out[i].add_assign(&q);
            }
        }
        while out.last().is_some_and(TowerElement::is_zero) {
            out.pop();
        }
        Ok(out)
    }

    /// Split a left-normal-form element as `sum_j c_j x_top^j` (generators above `top` not allowed).
    pub fn left_coefficients(&self, top: usize, a: &TowerElement) -> Vec<TowerElement> {
        let mut out: Vec<TowerElement> = Vec::new();
        for (m, c) in a.terms() {
            let j = m.exp(top) as usize;
            if out.len() <= j {
                out.resize(j + 1, TowerElement::zero());
            }
            out[j].add_term(m.with_exp(top, 0), c.clone());
        }
        out
    }

    /// Reassemble `sum_j x_top^j c_j` into left normal form.
    pub fn from_right_form(&self, top: usize, parts: &[TowerElement]) -> TowerElement {
        let mut out = TowerElement::zero();
        for (j, c) in parts.iter().enumerate() {
            let xj = self.mono(Monomial::var(top, j as u16));
            out.add_assign(&self.multiply(&xj, c));
        }
        out
    }

    // ---- verification ----

    /// Well-definedness of level `i`: σ, σ⁻¹ respect the lower relations, are
    /// mutually inverse, δ is Leibniz-consistent, and the grading is respected.
    pub fn verify_level(&self, i: usize) -> VerificationReport {
        let mut rep = VerificationReport::new();
        let lvl = &self.levels[i];
        let name = &lvl.name;
        let r = &self.names;

        let mut shape = Ok(());
        for (label, map) in [("sigma", &lvl.sigma), ("sigma_inv", &lvl.sigma_inv), ("delta", &lvl.delta)] {
            if map.len() != i {
                shape = Err(format!("{label} of {name} has {} images, expected {i}", map.len()));
                break;
            }
            if let Some((g, _)) = map.images.iter().enumerate().find(|(_, e)| e.level() > i) {
                shape = Err(format!("{label}({}) of {name} leaves the base", r[g]));
                break;
            }
        }
        if lvl.degree == 0 && self.graded {
            shape = Err(format!("generator {name} has degree 0"));
        }
        let shape_ok = shape.is_ok();
        rep.push(Check::from_result(format!("{name}: map shapes"), shape));
        if !shape_ok {
            return rep;
        }

        let mut hom = Ok(());
        let mut hom_inv = Ok(());
        let mut leibniz = Ok(());
        'pairs: for j in 0..i {
            for l in 0..j {
                let gj = self.gen(j);
                let gl = self.gen(l);
                let prod = self.multiply(&gj, &gl);
                for (which, slot) in [(Which::Sigma, &mut hom), (Which::SigmaInv, &mut hom_inv)] {
                    if slot.is_err() {
                        continue;
                    }
                    let direct = self.level_map(i, which, &prod);
                    let imgs = self.level_map(i, which, &gj);
                    let imgl = self.level_map(i, which, &gl);
                    let via = self.multiply(&imgs, &imgl);
                    if direct != via {
                        let label = if matches!(which, Which::Sigma) { "sigma" } else { "sigma_inv" };
                        *slot = Err(format!(
                            "{label}({}*{}) = {} but {label}({})*{label}({}) = {}",
                            r[j],
                            r[l],
                            self.render(&direct),
                            r[j],
                            r[l],
                            self.render(&via)
                        ));
                    }
                }
                if leibniz.is_ok() && !self.delta_is_zero[i] {
                    let direct = self.level_map(i, Which::Delta, &prod);
                    let dj = &lvl.delta.images[j];
                    let dl = &lvl.delta.images[l];
                    let via = self.multiply(dj, &gl).add(&self.multiply(&lvl.sigma.images[j], dl));
                    if direct != via {
                        leibniz = Err(format!(
                            "pair ({}, {}): delta({}*{}) = {} but Leibniz gives {}",
                            r[j],
                            r[l],
                            r[j],
                            r[l],
                            self.render(&direct),
                            self.render(&via)
                        ));
                    }
                }
                if hom.is_err() && hom_inv.is_err() && leibniz.is_err() {
                    break 'pairs;
                }
            }
        }
        rep.push(Check::from_result(format!("{name}: sigma respects relations"), hom));
        rep.push(Check::from_result(format!("{name}: sigma_inv respects relations"), hom_inv));

        let mut inverse = Ok(());
        for g in 0..i {
            let x = self.gen(g);
            let a = self.level_map(i, Which::Sigma, &self.level_map(i, Which::SigmaInv, &x));
            let b = self.level_map(i, Which::SigmaInv, &self.level_map(i, Which::Sigma, &x));
            if a != x || b != x {
                inverse = Err(format!(
                    "on {}: sigma(sigma_inv) = {}, sigma_inv(sigma) = {}",
                    r[g],
                    self.render(&a),
                    self.render(&b)
                ));
                break;
            }
        }
        rep.push(Check::from_result(format!("{name}: sigma and sigma_inv are inverse"), inverse));
        rep.push(Check::from_result(format!("{name}: delta is a sigma-derivation"), leibniz));

        if self.graded {
            let mut grading = Ok(());
            for g in 0..i {
                let d = self.weights[g];
                for (label, map, want) in [
                    ("sigma", &lvl.sigma, d),
                    ("sigma_inv", &lvl.sigma_inv, d),
                    ("delta", &lvl.delta, d + lvl.degree),
                ] {
                    let e = &map.images[g];
                    if e.is_zero() {
                        continue;
                    }
                    if !e.is_homogeneous(&self.weights) || e.weighted_degree(&self.weights) != Some(want) {
                        grading = Err(format!(
                            "{label}({}) = {} is not homogeneous of degree {want}",
                            r[g],
                            self.render(e)
                        ));
                    }
                }
            }
            rep.push(Check::from_result(format!("{name}: grading"), grading));
        }
        rep
    }

    /// Verify every level in order.
    pub fn verify(&self) -> VerificationReport {
        let mut rep = VerificationReport::new();
        for i in 0..self.levels.len() {
            rep.extend(self.verify_level(i));
        }
        rep
    }
}
