//! Hochschild cochains of the base `A` with values in `A⊗A` or `E⊗E`, the
//! coboundaries, the map θ and its decomposition η into f₁, f₂, f₃.

use std::collections::{BTreeMap, HashMap};
use std::rc::Rc;
use std::sync::Arc;

use crate::ncpoly::{Monomial, TowerElement};
use crate::ore::OreTower;
use crate::report::{Check, VerificationReport};
use crate::scalars::FieldValue;

use super::{base_monomials, base_tuples, top, HomologyError, Pair, Perturbation};

type Eval = Rc<dyn Fn(&[Monomial]) -> Result<Pair, HomologyError>>;

/// A multilinear map on base monomial tuples, evaluated on demand.
#[derive(Clone)]
pub struct Cochain {
    pub arity: usize,
    eval: Eval,
}

impl std::fmt::Debug for Cochain {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Cochain(arity {})", self.arity)
    }
}

/// Which coboundary: values in `A⊗A`, or the version whose last term goes through σ⁻¹.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CoboundaryVariant {
    Plain,
    Twisted,
}

impl Cochain {
    pub fn new(arity: usize, eval: impl Fn(&[Monomial]) -> Result<Pair, HomologyError> + 'static) -> Self {
        Cochain { arity, eval: Rc::new(eval) }
    }

    /// Finite table; tuples missing from it are zero if their degree is within
    /// `known_upto`, and an error beyond it.
    pub fn from_table(t: &Arc<OreTower>, arity: usize, table: HashMap<Vec<Monomial>, Pair>, known_upto: Option<u32>) -> Self {
        let t = t.clone();
        Cochain::new(arity, move |args| {
            if let Some(cap) = known_upto {
                let d: u32 = args.iter().map(|m| t.degree_of(m)).sum();
                if d > cap {
                    return Err(HomologyError::CapExceeded { needed: d, cap });
                }
            }
            Ok(table.get(args).cloned().unwrap_or_default())
        })
    }

    /// The cochain sending `args` to `value` and every other basis tuple to 0.
    pub fn basis(args: Vec<Monomial>, value: Pair) -> Self {
        let n = args.len();
        Cochain::new(n, move |a| Ok(if a == args.as_slice() { value.clone() } else { Pair::zero() }))
    }

    pub fn at(&self, args: &[Monomial]) -> Result<Pair, HomologyError> {
        if args.len() != self.arity {
            return Err(HomologyError::ArityMismatch { expected: self.arity, got: args.len() });
        }
        (self.eval)(args)
    }

    /// Multilinear extension to arbitrary base elements.
    pub fn at_elems(&self, args: &[TowerElement]) -> Result<Pair, HomologyError> {
        if args.len() != self.arity {
            return Err(HomologyError::ArityMismatch { expected: self.arity, got: args.len() });
        }
        let mut out = Pair::zero();
        let mut idx: Vec<Monomial> = Vec::with_capacity(args.len());
        self.expand(args, &mut idx, None, &mut out)?;
        Ok(out)
    }

    fn expand(
        &self,
        args: &[TowerElement],
        idx: &mut Vec<Monomial>,
        coeff: Option<FieldValue>,
        out: &mut Pair,
    ) -> Result<(), HomologyError> {
        let k = idx.len();
        if k == args.len() {
            let v = (self.eval)(idx)?;
            match coeff {
                None => out.add_assign(&v),
                Some(c) => out.add_scaled(&v, &c),
            }
            return Ok(());
        }
        for (m, c) in args[k].terms() {
            idx.push(m.clone());
            let next = match &coeff {
                None => c.clone(),
                Some(d) => d.mul_ref(c),
            };
            self.expand(args, idx, Some(next), out)?;
            idx.pop();
        }
        Ok(())
    }

    /// Pointwise `c·self`.
    pub fn scaled(&self, c: FieldValue) -> Cochain {
        let f = self.clone();
        Cochain::new(self.arity, move |a| {
            let mut out = Pair::zero();
            out.add_scaled(&f.at(a)?, &c);
            Ok(out)
        })
    }

    /// Post-compose with a linear map on values.
    pub fn map_values(&self, g: impl Fn(&Pair) -> Result<Pair, HomologyError> + 'static) -> Cochain {
        let f = self.clone();
        Cochain::new(self.arity, move |a| g(&f.at(a)?))
    }
}

fn monos(t: &OreTower, args: &[Monomial]) -> Vec<TowerElement> {
    args.iter().map(|m| t.mono(m.clone())).collect()
}

fn map_left(t: &Arc<OreTower>, p: &Pair, g: impl Fn(&TowerElement) -> Result<TowerElement, HomologyError>) -> Result<Pair, HomologyError> {
    let mut out = Pair::zero();
    for ((m, n), c) in p.terms() {
        let img = g(&t.mono(m.clone()))?;
        out.add_scaled(&Pair::of(&img, &t.mono(n.clone())), c);
    }
    Ok(out)
}

fn map_right(t: &Arc<OreTower>, p: &Pair, g: impl Fn(&TowerElement) -> Result<TowerElement, HomologyError>) -> Result<Pair, HomologyError> {
    let mut out = Pair::zero();
    for ((m, n), c) in p.terms() {
        let img = g(&t.mono(n.clone()))?;
        out.add_scaled(&Pair::of(&t.mono(m.clone()), &img), c);
    }
    Ok(out)
}

/// Hochschild coboundary for the outer bimodule structure.
pub fn hoch_diff(t: &Arc<OreTower>, variant: CoboundaryVariant, f: &Cochain) -> Result<Cochain, HomologyError> {
    let x = top(t)?;
    let (t, f) = (t.clone(), f.clone());
    let n = f.arity;
    Ok(Cochain::new(n + 1, move |a| {
        let a_el = monos(&t, a);
        let mut out = map_left(&t, &f.at(&a[1..])?, |m| Ok(t.multiply(&a_el[0], m)))?;
        for i in 1..=n {
            let mut args: Vec<TowerElement> = a_el[..i - 1].to_vec();
            args.push(t.multiply(&a_el[i - 1], &a_el[i]));
            args.extend(a_el[i + 1..].iter().cloned());
            let v = f.at_elems(&args)?;
            if i % 2 == 0 {
                out.add_assign(&v);
            } else {
                out = out.sub(&v);
            }
        }
        let last = match variant {
            CoboundaryVariant::Plain => a_el[n].clone(),
            CoboundaryVariant::Twisted => t.sigma_inv(x, &a_el[n])?,
        };
        let v = map_right(&t, &f.at(&a[..n])?, |m| Ok(t.multiply(m, &last)))?;
        if (n + 1) % 2 == 0 {
            out.add_assign(&v);
        } else {
            out = out.sub(&v);
        }
        Ok(out)
    }))
}

fn sigma_inv_all(t: &OreTower, x: usize, a: &[TowerElement]) -> Result<Vec<TowerElement>, HomologyError> {
    a.iter().map(|e| t.sigma_inv(x, e).map_err(Into::into)).collect()
}

/// `Σ_j f(a_1, …, a_{j−1}, δσ⁻¹(a_j), σ⁻¹(a_{j+1}), …, σ⁻¹(a_n))`.
fn correction_sum(t: &OreTower, x: usize, f: &Cochain, a: &[TowerElement], inv: &[TowerElement]) -> Result<Pair, HomologyError> {
    let mut out = Pair::zero();
    for j in 0..a.len() {
        let d = t.apply_delta(x, &inv[j])?;
        if d.is_zero() {
            continue;
        }
        let mut args: Vec<TowerElement> = a[..j].to_vec();
        args.push(d);
        args.extend(inv[j + 1..].iter().cloned());
        out.add_assign(&f.at_elems(&args)?);
    }
    Ok(out)
}

/// `θ(f)(a) = x·f(σ⁻¹a) − f(a)·x − Σ_j f(…, δσ⁻¹a_j, σ⁻¹a_{j+1}, …)`, values in `E⊗E`.
pub fn theta(t: &Arc<OreTower>, f: &Cochain) -> Result<Cochain, HomologyError> {
    let x = top(t)?;
    let (t, f) = (t.clone(), f.clone());
    Ok(Cochain::new(f.arity, move |a| {
        let a_el = monos(&t, a);
        let inv = sigma_inv_all(&t, x, &a_el)?;
        let xe = t.gen(x);
        let mut out = map_left(&t, &f.at_elems(&inv)?, |m| Ok(t.multiply(&xe, m)))?;
        out = out.sub(&map_right(&t, &f.at(a)?, |m| Ok(t.multiply(m, &xe)))?);
        Ok(out.sub(&correction_sum(&t, x, &f, &a_el, &inv)?))
    }))
}

/// `f₁ = (σ⊗id)∘f∘(σ⁻¹)^{⊗n}`.
pub fn f1(t: &Arc<OreTower>, f: &Cochain) -> Result<Cochain, HomologyError> {
    let x = top(t)?;
    let (t, f) = (t.clone(), f.clone());
    Ok(Cochain::new(f.arity, move |a| {
        let inv = sigma_inv_all(&t, x, &monos(&t, a))?;
        map_left(&t, &f.at_elems(&inv)?, |m| Ok(t.sigma(x, m)?))
    }))
}

/// `f₂ = (id⊗σ⁻¹)∘f`.
pub fn f2(t: &Arc<OreTower>, f: &Cochain) -> Result<Cochain, HomologyError> {
    let x = top(t)?;
    let (t, f) = (t.clone(), f.clone());
    Ok(Cochain::new(f.arity, move |a| map_right(&t, &f.at(a)?, |m| Ok(t.sigma_inv(x, m)?))))
}

/// `f₃ = (δ⊗id)∘f∘(σ⁻¹)^{⊗n} + (id⊗δσ⁻¹)∘f − Σ_j f∘(id^{j−1}⊗δσ⁻¹⊗(σ⁻¹)^{n−j})`.
pub fn f3(t: &Arc<OreTower>, f: &Cochain, perturb: Perturbation) -> Result<Cochain, HomologyError> {
    let x = top(t)?;
    let (t, f) = (t.clone(), f.clone());
    Ok(Cochain::new(f.arity, move |a| {
        let a_el = monos(&t, a);
        let inv = sigma_inv_all(&t, x, &a_el)?;
        let mut out = map_left(&t, &f.at_elems(&inv)?, |m| Ok(t.apply_delta(x, m)?))?;
        out.add_assign(&map_right(&t, &f.at(a)?, |m| Ok(t.apply_delta(x, &t.sigma_inv(x, m)?)?))?);
        if !perturb.f3_sum {
            out = out.sub(&correction_sum(&t, x, &f, &a_el, &inv)?);
        }
        Ok(out)
    }))
}

/// `[f, x^l⊗x^k](a) = f′x^l ⊗ x^k f″`, valued in `E⊗E`.
pub fn embed(t: &Arc<OreTower>, f: &Cochain, l: u16, k: u16) -> Result<Cochain, HomologyError> {
    let x = top(t)?;
    let (t, f) = (t.clone(), f.clone());
    Ok(Cochain::new(f.arity, move |a| {
        let (xl, xk) = (t.mono(Monomial::var(x, l)), t.mono(Monomial::var(x, k)));
        Ok(f.at(a)?.map(|m| t.multiply(&t.mono(m.clone()), &xl), |n| t.multiply(&xk, &t.mono(n.clone()))))
    }))
}

/// Formal sum `Σ c·f⊗x^l⊗x^k` with `f` valued in `A⊗A`.
#[derive(Clone, Debug, Default)]
pub struct Formal {
    pub terms: Vec<(FieldValue, Cochain, u16, u16)>,
}

impl Formal {
    pub fn single(c: FieldValue, f: Cochain, l: u16, k: u16) -> Self {
        Formal { terms: vec![(c, f, l, k)] }
    }

    /// Components by `(l, k)` at a basis tuple.
    pub fn at(&self, args: &[Monomial]) -> Result<BTreeMap<(u16, u16), Pair>, HomologyError> {
        let mut out: BTreeMap<(u16, u16), Pair> = BTreeMap::new();
        for (c, f, l, k) in &self.terms {
            out.entry((*l, *k)).or_default().add_scaled(&f.at(args)?, c);
        }
        out.retain(|_, v| !v.is_zero());
        Ok(out)
    }

    /// The embedded cochain in `E⊗E`.
    pub fn embed(&self, t: &Arc<OreTower>, arity: usize) -> Result<Cochain, HomologyError> {
        let parts: Vec<(FieldValue, Cochain)> = self
            .terms
            .iter()
            .map(|(c, f, l, k)| Ok((c.clone(), embed(t, f, *l, *k)?)))
            .collect::<Result<_, HomologyError>>()?;
        Ok(Cochain::new(arity, move |a| {
            let mut out = Pair::zero();
            for (c, g) in &parts {
                out.add_scaled(&g.at(a)?, c);
            }
            Ok(out)
        }))
    }
}

/// `η(f⊗x^l⊗x^k) = f₁⊗x^{l+1}⊗x^k − f₂⊗x^l⊗x^{k+1} + f₃⊗x^l⊗x^k`, extended linearly.
pub fn eta(t: &Arc<OreTower>, u: &Formal, perturb: Perturbation) -> Result<Formal, HomologyError> {
    let mut out = Formal::default();
    for (c, f, l, k) in &u.terms {
        out.terms.push((c.clone(), f1(t, f)?, l + 1, *k));
        out.terms.push((c.neg_ref(), f2(t, f)?, *l, k + 1));
        out.terms.push((c.clone(), f3(t, f, perturb)?, *l, *k));
    }
    Ok(out)
}

/// The four `E^e` actions on formal sums: by `x` and by base elements on either side.
#[derive(Clone, Debug)]
pub enum Action {
    LeftX,
    LeftBase(TowerElement),
    RightX,
    RightBase(TowerElement),
}

pub fn act(t: &Arc<OreTower>, on: &Formal, action: &Action) -> Result<Formal, HomologyError> {
    let x = top(t)?;
    let mut out = Formal::default();
    for (c, f, l, k) in &on.terms {
        match action {
            Action::LeftX => out.terms.push((c.clone(), f.clone(), *l, k + 1)),
            Action::RightX => out.terms.push((c.clone(), f.clone(), l + 1, *k)),
            Action::LeftBase(a) => {
                for (i, q) in t.q_all(x, *k as usize, a)?.into_iter().enumerate() {
                    if q.is_zero() {
                        continue;
                    }
                    let tt = t.clone();
                    let g = f.map_values(move |p| map_right(&tt, p, |n| Ok(tt.multiply(&q, n))));
                    out.terms.push((c.clone(), g, *l, i as u16));
                }
            }
            Action::RightBase(a) => {
                for (i, p) in t.p_all(x, *l as usize, a)?.into_iter().enumerate() {
                    if p.is_zero() {
                        continue;
                    }
                    let tt = t.clone();
                    let g = f.map_values(move |v| map_left(&tt, v, |m| Ok(tt.multiply(m, &p))));
                    out.terms.push((c.clone(), g, i as u16, *k));
                }
            }
        }
    }
    Ok(out)
}

/// Basis cochains of arity `n` supported on one tuple, valued in basis pairs of `A⊗A`,
/// with support degree plus value degree at most `cap`.
fn basis_cochains(t: &OreTower, x: usize, n: usize, cap: u32) -> Vec<(Vec<Monomial>, Monomial, Monomial)> {
    let values = base_monomials(t, x, cap);
    let mut out = Vec::new();
    for args in base_tuples(t, x, n, cap) {
        let d: u32 = args.iter().map(|m| t.degree_of(m)).sum();
        for m in &values {
            for m2 in &values {
                if d + t.degree_of(m) + t.degree_of(m2) <= cap {
                    out.push((args.clone(), m.clone(), m2.clone()));
                }
            }
        }
    }
    out
}

fn show_tuple(t: &OreTower, a: &[Monomial]) -> String {
    let parts: Vec<String> = a.iter().map(|m| t.render(&t.mono(m.clone()))).collect();
    format!("({})", parts.join(", "))
}

/// Limits for the exhaustive cochain checks.
#[derive(Clone, Copy, Debug)]
pub struct CochainBounds {
    pub arity_max: usize,
    /// Bound on support degree plus value degree of basis cochains, and on the
    /// degree of evaluation tuples.
    pub cap: u32,
    pub lk_max: u16,
}

/// θ∘[−] = [−]∘η pointwise, and η commutes with the four module actions.
pub fn verify_eta_theta(t: &Arc<OreTower>, bounds: CochainBounds, perturb: Perturbation) -> Result<VerificationReport, HomologyError> {
    let x = top(t)?;
    let one = FieldValue::one(t.field());
    let mut diagram = Ok(());
    let mut linear = Ok(());
    let mut checked = 0usize;
    let actions: Vec<Action> = {
        let mut v = vec![Action::LeftX, Action::RightX];
        for g in 0..x {
            v.push(Action::LeftBase(t.gen(g)));
            v.push(Action::RightBase(t.gen(g)));
        }
        v
    };
    for n in 0..=bounds.arity_max {
        let points = base_tuples(t, x, n, bounds.cap);
        for (args, m, m2) in basis_cochains(t, x, n, bounds.cap) {
            let f = Cochain::basis(args.clone(), Pair::basis(m.clone(), m2.clone(), one.clone()));
            for l in 0..=bounds.lk_max {
                for k in 0..=bounds.lk_max {
                    let formal = Formal::single(one.clone(), f.clone(), l, k);
                    let lhs = theta(t, &formal.embed(t, n)?)?;
                    let image = eta(t, &formal, perturb)?;
                    let rhs = image.embed(t, n)?;
                    for p in &points {
                        checked += 1;
                        let (a, b) = (lhs.at(p)?, rhs.at(p)?);
                        if diagram.is_ok() && a != b {
                            diagram = Err(format!(
                                "f = {}↦{}, l = {l}, k = {k}, at {}: θ gives {} but η gives {}",
                                show_tuple(t, &args),
                                Pair::basis(m.clone(), m2.clone(), one.clone()).render(t),
                                show_tuple(t, p),
                                a.render(t),
                                b.render(t)
                            ));
                        }
                    }
                    if linear.is_err() {
                        continue;
                    }
                    for action in &actions {
                        let left = eta(t, &act(t, &formal, action)?, perturb)?;
                        let right = act(t, &image, action)?;
                        for p in &points {
                            if left.at(p)? != right.at(p)? {
                                linear = Err(format!(
                                    "f supported at {}, l = {l}, k = {k}, action {action:?}, at {}",
                                    show_tuple(t, &args),
                                    show_tuple(t, p)
                                ));
                                break;
                            }
                        }
                    }
                }
            }
        }
    }
    let mut r = VerificationReport::new();
    r.push(
        Check::from_result("cochains: θ∘embed = embed∘η", diagram)
            .with_range(0, bounds.cap)
            .with_note(format!("{checked} evaluations, arity ≤ {}", bounds.arity_max)),
    );
    r.push(Check::from_result("cochains: η is E^e-linear", linear).with_range(0, bounds.cap));
    Ok(r)
}

/// `(b⁰f)ᵢ = b¹(fᵢ)` for i = 1, 2, 3 and `b∘b = 0` for both coboundaries.
pub fn verify_cocycle_transfer(t: &Arc<OreTower>, bounds: CochainBounds, perturb: Perturbation) -> Result<VerificationReport, HomologyError> {
    let x = top(t)?;
    let one = FieldValue::one(t.field());
    let mut transfer: [Result<(), String>; 3] = [Ok(()), Ok(()), Ok(())];
    let mut square = Ok(());
    for n in 0..=bounds.arity_max {
        let points = base_tuples(t, x, n + 1, bounds.cap);
        let points2 = base_tuples(t, x, n + 2, bounds.cap);
        for (args, m, m2) in basis_cochains(t, x, n, bounds.cap) {
            let f = Cochain::basis(args.clone(), Pair::basis(m, m2, one.clone()));
            let bf = hoch_diff(t, CoboundaryVariant::Plain, &f)?;
            let parts = |g: &Cochain| -> Result<[Cochain; 3], HomologyError> {
                Ok([f1(t, g)?, f2(t, g)?, f3(t, g, perturb)?])
            };
            let lhs = parts(&bf)?;
            let rhs: Vec<Cochain> = parts(&f)?
                .iter()
                .map(|g| hoch_diff(t, CoboundaryVariant::Twisted, g))
                .collect::<Result<_, _>>()?;
            for p in &points {
                for i in 0..3 {
                    if transfer[i].is_ok() {
                        let (a, b) = (lhs[i].at(p)?, rhs[i].at(p)?);
                        if a != b {
                            transfer[i] = Err(format!(
                                "f supported at {}, at {}: {} vs {}",
                                show_tuple(t, &args),
                                show_tuple(t, p),
                                a.render(t),
                                b.render(t)
                            ));
                        }
                    }
                }
            }
            if square.is_ok() {
                for v in [CoboundaryVariant::Plain, CoboundaryVariant::Twisted] {
                    let dd = hoch_diff(t, v, &hoch_diff(t, v, &f)?)?;
                    for p in &points2 {
                        if !dd.at(p)?.is_zero() {
                            square = Err(format!("{v:?} coboundary squared is nonzero at {}", show_tuple(t, p)));
                            break;
                        }
                    }
                }
            }
        }
    }
    let mut r = VerificationReport::new();
    for (i, res) in transfer.into_iter().enumerate() {
        r.push(Check::from_result(format!("cochains: (b f)_{} = b_twisted(f_{})", i + 1, i + 1), res).with_range(0, bounds.cap));
    }
    r.push(Check::from_result("cochains: b∘b = 0", square).with_range(0, bounds.cap));
    Ok(r)
}
