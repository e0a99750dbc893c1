//! Nakayama automorphisms of a tower: the level-by-level ansatz `u·x + b`, pushed through
//! the inverse twists of higher levels, pinned down by other presentations of the same
//! algebra, by the defining relations, and by the Ext engine when those run out.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::dsl::RealizationSpec;
use crate::homology::{build_resolution, ext_top, HomologyError};
use crate::linalg::{solve, Echelon, SparseVec};
use crate::ncpoly::{Monomial, TowerElement};
use crate::ore::{GenMap, OreTower, TowerError};
use crate::report::{Check, VerificationReport};
use crate::scalars::{FieldConfig, FieldValue};

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum NakayamaError {
    #[error("tower fails verification: {0}")]
    UnverifiedTower(String),
    #[error("the image of {generator} is undetermined: {dimension}-parameter family remains")]
    Undetermined { generator: String, dimension: usize },
    #[error("no candidate satisfies the relations at level {0}")]
    NoSolution(String),
    #[error("realizations disagree: {0}")]
    InconsistentRealizations(String),
    #[error("the computed map is not an automorphism: {0}")]
    NotHomomorphism(String),
    #[error(transparent)]
    Homology(#[from] HomologyError),
    #[error(transparent)]
    Tower(#[from] TowerError),
}

/// How a generator's image was pinned down.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Propagation,
    Merge,
    Constraint,
    Ext,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Propagation => "propagation",
            Method::Merge => "merge",
            Method::Constraint => "constraint",
            Method::Ext => "ext",
        }
    }
}

/// Which engines `nakayama_full` may use.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Strategy {
    /// Propagation, merging and constraints, then Ext for whatever is left.
    #[default]
    Auto,
    /// Never call the Ext engine.
    Propagate,
    /// Read every image from the Ext engine of the whole tower.
    Ext,
}

/// Polynomial in unknown scalars with tower elements as coefficients.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Symbolic {
    terms: BTreeMap<Vec<usize>, TowerElement>,
}

impl Symbolic {
    pub fn exact(e: TowerElement) -> Self {
        let mut s = Symbolic::default();
        s.add_term(Vec::new(), e);
        s
    }

    fn add_term(&mut self, key: Vec<usize>, e: TowerElement) {
        if e.is_zero() {
            return;
        }
        let sum = match self.terms.remove(&key) {
            Some(old) => old.add(&e),
            None => e,
        };
        if !sum.is_zero() {
            self.terms.insert(key, sum);
        }
    }

    fn sub(&self, o: &Symbolic) -> Symbolic {
        let mut out = self.clone();
        for (k, e) in &o.terms {
            out.add_term(k.clone(), e.neg());
        }
        out
    }

    fn mul(&self, t: &OreTower, o: &Symbolic) -> Symbolic {
        let mut out = Symbolic::default();
        for (ka, ea) in &self.terms {
            for (kb, eb) in &o.terms {
                let mut k = ka.clone();
                k.extend(kb.iter().copied());
                k.sort_unstable();
                out.add_term(k, t.multiply(ea, eb));
            }
        }
        out
    }

    fn map(&self, mut f: impl FnMut(&TowerElement) -> Result<TowerElement, TowerError>) -> Result<Symbolic, TowerError> {
        let mut out = Symbolic::default();
        for (k, e) in &self.terms {
            out.add_term(k.clone(), f(e)?);
        }
        Ok(out)
    }

    fn shift_ids(&self, by: usize) -> Symbolic {
        Symbolic { terms: self.terms.iter().map(|(k, e)| (k.iter().map(|i| i + by).collect(), e.clone())).collect() }
    }

    fn substitute(&self, values: &HashMap<usize, FieldValue>) -> Symbolic {
        let mut out = Symbolic::default();
        for (k, e) in &self.terms {
            let mut c: Option<FieldValue> = None;
            let mut rest = Vec::new();
            for i in k {
                match values.get(i) {
                    Some(v) => c = Some(c.map_or_else(|| v.clone(), |d| d.mul_ref(v))),
                    None => rest.push(*i),
                }
            }
            out.add_term(rest, c.map_or_else(|| e.clone(), |c| e.scale(&c)));
        }
        out
    }

    /// The value when no unknowns remain.
    pub fn as_exact(&self) -> Option<TowerElement> {
        match self.terms.len() {
            0 => Some(TowerElement::zero()),
            1 => self.terms.get(&Vec::new()).cloned(),
            _ => None,
        }
    }

    pub fn is_exact(&self) -> bool {
        self.as_exact().is_some()
    }

    /// One linear equation per tower monomial whose coefficient is at most linear in
    /// the unknowns: `Σ c_i u_i = rhs`.
    fn linear_equations(&self, field: &Arc<FieldConfig>) -> Vec<Equation> {
        let mut by_mono: BTreeMap<Monomial, Vec<(&Vec<usize>, FieldValue)>> = BTreeMap::new();
        for (k, e) in &self.terms {
            for (m, c) in e.terms() {
                by_mono.entry(m.clone()).or_default().push((k, c.clone()));
            }
        }
        let mut out = Vec::new();
        for (_, parts) in by_mono {
            if parts.iter().any(|(k, _)| k.len() > 1) {
                continue;
            }
            let mut row = Vec::new();
            let mut rhs = FieldValue::zero(field);
            for (k, c) in parts {
                match k.first() {
                    Some(&i) => row.push((i, c)),
                    None => rhs = c.neg_ref(),
                }
            }
            out.push((row, rhs));
        }
        out
    }

    pub fn render(&self, t: &OreTower, unknowns: &[Unknown]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        self.terms
            .iter()
            .map(|(k, e)| {
                let names: Vec<String> = k.iter().map(|&i| unknowns[i].name(t)).collect();
                if names.is_empty() {
                    t.render(e)
                } else {
                    format!("{}*({})", names.join("*"), t.render(e))
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

/// An unknown scalar of the ansatz at one level.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum UnknownKind {
    /// The coefficient `u` of the level's own variable.
    Scale,
    /// The coefficient of one monomial in `b`.
    Shift(Monomial),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Unknown {
    pub level: usize,
    pub kind: UnknownKind,
}

impl Unknown {
    fn name(&self, t: &OreTower) -> String {
        match &self.kind {
            UnknownKind::Scale => format!("u_{}", t.names()[self.level]),
            UnknownKind::Shift(m) => format!("b_{}[{}]", t.names()[self.level], m.render(t.names())),
        }
    }
}

/// Images of the generators under the Nakayama automorphism, exact or still in ansatz form.
#[derive(Clone, Debug)]
pub struct PartialNakayama {
    tower: Arc<OreTower>,
    unknowns: Vec<Unknown>,
    /// `ν_{j+1}(x_j)` for the algebra on the first `j + 1` generators.
    local: Vec<Symbolic>,
    /// Images under the automorphism of the whole tower.
    images: Vec<Symbolic>,
    provenance: Vec<Option<Method>>,
}

impl PartialNakayama {
    pub fn tower(&self) -> &Arc<OreTower> {
        &self.tower
    }

    pub fn unknowns(&self) -> &[Unknown] {
        &self.unknowns
    }

    pub fn image(&self, g: usize) -> &Symbolic {
        &self.images[g]
    }

    pub fn exact(&self, g: usize) -> Option<TowerElement> {
        self.images[g].as_exact()
    }

    pub fn provenance(&self, g: usize) -> Option<Method> {
        self.provenance[g]
    }

    pub fn is_exact(&self) -> bool {
        self.images.iter().all(Symbolic::is_exact)
    }

    /// Lowest generator whose image still has unknowns.
    pub fn first_open(&self) -> Option<usize> {
        self.images.iter().position(|s| !s.is_exact())
    }

    pub fn render(&self, g: usize) -> String {
        self.images[g].render(&self.tower, &self.unknowns)
    }

    /// Replace the level-`g` ansatz by an exact candidate (pushed through higher levels).
    pub fn set_local(&mut self, g: usize, value: TowerElement, method: Method) -> Result<(), TowerError> {
        self.local[g] = Symbolic::exact(value);
        self.images[g] = push_up(&self.tower, g, &self.local[g])?;
        self.provenance[g] = Some(method);
        Ok(())
    }

    fn assign(&mut self, values: &HashMap<usize, FieldValue>, method: Method) {
        for g in 0..self.images.len() {
            let before = self.images[g].is_exact();
            self.local[g] = self.local[g].substitute(values);
            self.images[g] = self.images[g].substitute(values);
            if !before && self.images[g].is_exact() {
                self.provenance[g] = Some(method);
            }
        }
    }

    /// `ν` applied to an element, symbolically.
    fn apply(&self, e: &TowerElement) -> Symbolic {
        let mut memo: HashMap<Monomial, Symbolic> = HashMap::new();
        let mut out = Symbolic::default();
        for (m, c) in e.terms() {
            let img = self.apply_mono(m, &mut memo);
            for (k, v) in &img.terms {
                out.add_term(k.clone(), v.scale(c));
            }
        }
        out
    }

    fn apply_mono(&self, m: &Monomial, memo: &mut HashMap<Monomial, Symbolic>) -> Symbolic {
        if m.is_one() {
            return Symbolic::exact(self.tower.one());
        }
        if let Some(v) = memo.get(m) {
            return v.clone();
        }
        let g = m.first().expect("nontrivial monomial");
        let rest = m.with_exp(g, m.exp(g) - 1);
        let tail = self.apply_mono(&rest, memo);
        let out = self.images[g].mul(&self.tower, &tail);
        memo.insert(m.clone(), out.clone());
        out
    }

    /// `ν(x_k)ν(a) − ν(σ_k a)ν(x_k) − ν(δ_k a)` for generator `a` below level `k`.
    fn relation_defect(&self, k: usize, a: usize) -> Symbolic {
        let t = &self.tower;
        let level = t.level(k);
        let nx = &self.images[k];
        let na = &self.images[a];
        let mut out = nx.mul(t, na);
        out = out.sub(&self.apply(&level.sigma.images[a]).mul(t, nx));
        out.sub(&self.apply(&level.delta.images[a]))
    }

    /// The map on generators, once every image is exact.
    pub fn automorphism(&self) -> Option<GenMap> {
        self.images.iter().map(Symbolic::as_exact).collect::<Option<Vec<_>>>().map(GenMap::new)
    }
}

fn push_up(t: &OreTower, from: usize, s: &Symbolic) -> Result<Symbolic, TowerError> {
    let mut out = s.clone();
    for k in from + 1..t.num_gens() {
        out = out.map(|e| t.sigma_inv(k, e))?;
    }
    Ok(out)
}

/// The ansatz of every level pushed to the top: level 0 is exact, `u = 1` when σ is the
/// identity and `b = 0` when δ vanishes.
pub fn propagate(t: &Arc<OreTower>) -> Result<PartialNakayama, NakayamaError> {
    let n = t.num_gens();
    let one = FieldValue::one(t.field());
    let mut unknowns = Vec::new();
    let mut local = Vec::with_capacity(n);
    for j in 0..n {
        let x = t.gen(j);
        let mut s = Symbolic::default();
        if j == 0 || t.sigma_is_identity(j) {
            s.add_term(Vec::new(), x);
        } else {
            unknowns.push(Unknown { level: j, kind: UnknownKind::Scale });
            s.add_term(vec![unknowns.len() - 1], x);
        }
        if j > 0 && !t.delta_is_zero(j) {
            let deg = t.weights()[j];
            let span = if t.graded() { t.degree_basis(j, deg) } else { t.basis(j, deg, true) };
            for m in span.iter() {
                unknowns.push(Unknown { level: j, kind: UnknownKind::Shift(m.clone()) });
                s.add_term(vec![unknowns.len() - 1], TowerElement::monomial(m.clone(), one.clone()));
            }
        }
        local.push(s);
    }
    let images = local.iter().enumerate().map(|(j, s)| push_up(t, j, s)).collect::<Result<Vec<_>, _>>()?;
    let provenance = images.iter().map(|s| s.is_exact().then_some(Method::Propagation)).collect();
    Ok(PartialNakayama { tower: t.clone(), unknowns, local, images, provenance })
}

type Equation = (Vec<(usize, FieldValue)>, FieldValue);

/// Result of solving a pool of linear equations.
struct Solution {
    values: HashMap<usize, FieldValue>,
    rank: usize,
}


fn solve_pool(t: &OreTower, eqs: Vec<Equation>, unknowns: usize) -> Option<Solution> {
    let zero = FieldValue::zero(t.field());
    let mut ech = Echelon::new();
    let mut rows = Vec::with_capacity(eqs.len());
    for (row, rhs) in eqs {
        let v = SparseVec::from_unsorted(row);
        ech.insert(&v);
        rows.push((v, rhs));
    }
    let particular = solve(rows, unknowns, &zero)?;
    let one = FieldValue::one(t.field());
    let mut values = HashMap::new();
    for (i, v) in particular.into_iter().enumerate() {
        if ech.contains(&SparseVec { entries: vec![(i, one.clone())] }) {
            values.insert(i, v);
        }
    }
    Some(Solution { values, rank: ech.rank() })
}

fn check_scales(p: &PartialNakayama, values: &HashMap<usize, FieldValue>) -> Result<(), NakayamaError> {
    for (i, v) in values {
        if p.unknowns.get(*i).is_some_and(|u| u.kind == UnknownKind::Scale) && v.is_zero() {
            let g = &p.tower.names()[p.unknowns[*i].level];
            return Err(NakayamaError::NoSolution(format!("{g} (the scale would be 0)")));
        }
    }
    Ok(())
}

/// Outcome of [`constraint_solve`] at the lowest open level.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConstraintOutcome {
    /// Nothing was open.
    Complete,
    /// The level's unknowns were fixed.
    Unique { generator: usize },
    /// A family of this dimension remains at the level.
    Underdetermined { generator: usize, dimension: usize },
}

/// Impose the rewrite relations of the lowest open level against every lower generator.
pub fn constraint_solve(part: &PartialNakayama) -> Result<(PartialNakayama, ConstraintOutcome), NakayamaError> {
    let Some(j) = part.first_open() else {
        return Ok((part.clone(), ConstraintOutcome::Complete));
    };
    let t = &part.tower;
    let mut eqs = Vec::new();
    for a in 0..j {
        eqs.extend(part.relation_defect(j, a).linear_equations(t.field()));
    }
    // exact candidates can still violate relations against lower generators
    let level_unknowns: Vec<usize> = (0..part.unknowns.len()).filter(|&i| part.unknowns[i].level == j).collect();
    if eqs.iter().any(|(row, rhs)| row.is_empty() && !rhs.is_zero()) {
        return Err(NakayamaError::NoSolution(t.names()[j].clone()));
    }
    let sol = solve_pool(t, eqs, part.unknowns.len()).ok_or_else(|| NakayamaError::NoSolution(t.names()[j].clone()))?;
    check_scales(part, &sol.values)?;
    let mut next = part.clone();
    next.assign(&sol.values, Method::Constraint);
    let open = level_unknowns.iter().filter(|i| !sol.values.contains_key(i)).count();
    let outcome = if open == 0 {
        ConstraintOutcome::Unique { generator: j }
    } else {
        ConstraintOutcome::Underdetermined { generator: j, dimension: level_unknowns.len() - sol.rank.min(level_unknowns.len()) }
    };
    Ok((next, outcome))
}

/// The correspondence of a realization sends its defining relations to zero.
pub fn verify_correspondence(reference: &OreTower, r: &RealizationSpec) -> Result<(), String> {
    let src = &r.tower;
    let img = |e: &TowerElement| reference.apply_endo(&r.maps, e).map_err(|e| e.to_string());
    for k in 1..src.num_gens() {
        let level = src.level(k);
        let x = &r.maps.images[k];
        for a in 0..k {
            let ya = &r.maps.images[a];
            let lhs = reference.multiply(x, ya);
            let rhs = reference.multiply(&img(&level.sigma.images[a])?, x).add(&img(&level.delta.images[a])?);
            if lhs != rhs {
                return Err(format!(
                    "{}: the relation between {} and {} is not preserved",
                    r.label,
                    src.names()[k],
                    src.names()[a]
                ));
            }
        }
    }
    Ok(())
}

/// Equate the reference images with those transported from each realization.
pub fn merge_realizations(
    reference: &PartialNakayama,
    realizations: &[(RealizationSpec, PartialNakayama)],
) -> Result<PartialNakayama, NakayamaError> {
    let t = reference.tower.clone();
    let mut eqs = Vec::new();
    let mut offset = reference.unknowns.len();
    for (spec, part) in realizations {
        verify_correspondence(&t, spec).map_err(NakayamaError::InconsistentRealizations)?;
        for r in 0..spec.tower.num_gens() {
            let lhs = reference.apply(&spec.maps.images[r]);
            let rhs = part.images[r].shift_ids(offset).map(|e| t.apply_endo(&spec.maps, e))?;
            let defect = lhs.sub(&rhs);
            for eq in defect.linear_equations(t.field()) {
                if eq.0.is_empty() && !eq.1.is_zero() {
                    return Err(NakayamaError::InconsistentRealizations(format!(
                        "{}: the transported image of {} disagrees",
                        spec.label,
                        spec.tower.names()[r]
                    )));
                }
                eqs.push(eq);
            }
        }
        offset += part.unknowns.len();
    }
    let sol = solve_pool(&t, eqs, offset)
        .ok_or_else(|| NakayamaError::InconsistentRealizations("the transported images admit no common solution".into()))?;
    let values: HashMap<usize, FieldValue> =
        sol.values.into_iter().filter(|(i, _)| *i < reference.unknowns.len()).collect();
    check_scales(reference, &values)?;
    let mut next = reference.clone();
    next.assign(&values, Method::Merge);
    Ok(next)
}

#[derive(Clone, Debug, Serialize)]
pub struct GeneratorImage {
    pub generator: String,
    pub image: String,
    pub method: Method,
}

#[derive(Clone, Debug)]
pub struct NakayamaResult {
    pub automorphism: GenMap,
    pub method: Vec<Method>,
    pub cy_dimension: usize,
    pub is_calabi_yau: bool,
    pub caveats: Vec<String>,
    pub report: VerificationReport,
}

impl NakayamaResult {
    pub fn images(&self, t: &OreTower) -> Vec<GeneratorImage> {
        self.automorphism
            .images
            .iter()
            .enumerate()
            .map(|(g, e)| GeneratorImage { generator: t.names()[g].clone(), image: t.render(e), method: self.method[g] })
            .collect()
    }
}

/// Ext twist of the sub-algebra on the first `gens` generators.
fn ext_twist(t: &Arc<OreTower>, gens: usize, cap: u32, report: &mut VerificationReport) -> Result<GenMap, NakayamaError> {
    let sub = t.truncate(gens);
    let c = build_resolution(&sub)?;
    let r = ext_top(&c, cap)?;
    for check in r.report.checks {
        let name = format!("{} [first {} generators]", check.name, gens);
        report.push(Check { name, ..check });
    }
    Ok(r.twist)
}

/// Every rewrite relation is preserved and, for graded towers, degrees are kept.
pub fn verify_automorphism(t: &OreTower, map: &GenMap) -> VerificationReport {
    let mut hom = Ok(());
    'outer: for k in 1..t.num_gens() {
        let level = t.level(k);
        for a in 0..k {
            let ea = |e: &TowerElement| t.apply_endo(map, e);
            let lhs = t.multiply(&map.images[k], &map.images[a]);
            let rhs = match (ea(&level.sigma.images[a]), ea(&level.delta.images[a])) {
                (Ok(s), Ok(d)) => t.multiply(&s, &map.images[k]).add(&d),
                (Err(e), _) | (_, Err(e)) => {
                    hom = Err(e.to_string());
                    break 'outer;
                }
            };
            if lhs != rhs {
                hom = Err(format!("the relation between {} and {} is not preserved", t.names()[k], t.names()[a]));
                break 'outer;
            }
        }
    }
    let mut r = VerificationReport::new();
    r.push(Check::from_result("nakayama: relations preserved", hom));
    if t.graded() {
        let mut homogeneous = Ok(());
        for (g, e) in map.images.iter().enumerate() {
            if e.is_zero() || !e.is_homogeneous(t.weights()) || e.weighted_degree(t.weights()) != Some(t.weights()[g]) {
                homogeneous = Err(format!("the image of {} is not homogeneous of degree {}", t.names()[g], t.weights()[g]));
                break;
            }
        }
        r.push(Check::from_result("nakayama: homogeneous of degree 0", homogeneous));
    }
    r
}

/// Nakayama automorphism of a verified tower, with the provenance of every image.
pub fn nakayama_full(
    t: &Arc<OreTower>,
    realizations: &[RealizationSpec],
    strategy: Strategy,
    cap: u32,
) -> Result<NakayamaResult, NakayamaError> {
    let verified = t.verify();
    if let Some(f) = verified.failures().next() {
        return Err(NakayamaError::UnverifiedTower(format!("{}: {}", f.name, f.witness.clone().unwrap_or_default())));
    }
    let mut report = VerificationReport::new();
    let mut caveats = Vec::new();
    let mut used_ext = false;
    let mut main = propagate(t)?;

    if strategy == Strategy::Ext {
        let twist = ext_twist(t, t.num_gens(), cap, &mut report)?;
        used_ext = true;
        // cross-check against whatever propagation already knows
        let mut agree = Ok(());
        for g in 0..t.num_gens() {
            if let Some(e) = main.exact(g) {
                if e != twist.images[g] {
                    agree = Err(format!("{}: propagation gives {} but Ext gives {}", t.names()[g], t.render(&e), t.render(&twist.images[g])));
                }
            }
        }
        report.push(Check::from_result("nakayama: Ext agrees with propagation", agree));
        for g in 0..t.num_gens() {
            main.images[g] = Symbolic::exact(twist.images[g].clone());
            main.provenance[g] = Some(Method::Ext);
        }
    } else {
        let mut parts = Vec::new();
        for r in realizations {
            parts.push((r.clone(), settle(propagate(&r.tower)?)?.0));
        }
        loop {
            if !parts.is_empty() {
                main = merge_realizations(&main, &parts)?;
            }
            let (next, outcome) = settle(main)?;
            main = next;
            let Some(j) = main.first_open() else { break };
            let dimension = match outcome {
                ConstraintOutcome::Underdetermined { dimension, .. } => dimension,
                _ => main.unknowns.iter().filter(|u| u.level == j).count(),
            };
            if strategy == Strategy::Propagate {
                return Err(NakayamaError::Undetermined { generator: t.names()[j].clone(), dimension });
            }
            let twist = ext_twist(t, j + 1, cap, &mut report)?;
            used_ext = true;
            let mut eqs = Vec::new();
            eqs.extend(main.local[j].sub(&Symbolic::exact(twist.images[j].clone())).linear_equations(t.field()));
            let sol = solve_pool(t, eqs, main.unknowns.len())
                .ok_or_else(|| NakayamaError::NoSolution(format!("{} (Ext twist is outside the ansatz)", t.names()[j])))?;
            check_scales(&main, &sol.values)?;
            main.assign(&sol.values, Method::Ext);
            if !main.images[j].is_exact() {
                return Err(NakayamaError::NoSolution(format!("{} (Ext twist is outside the ansatz)", t.names()[j])));
            }
        }
    }
    let automorphism = main.automorphism().expect("every image is exact");
    report.extend(verify_automorphism(t, &automorphism));
    if let Some(f) = report.failures().find(|c| c.name.starts_with("nakayama: relations")) {
        return Err(NakayamaError::NotHomomorphism(f.witness.clone().unwrap_or_default()));
    }
    let identity = (0..t.num_gens()).all(|g| automorphism.images[g] == t.gen(g));
    if !t.graded() {
        caveats.push("ungraded tower: the automorphism is unique only up to inner automorphisms".into());
        caveats.push("the ansatz for b is bounded by the filtration degree of each generator".into());
    }
    if used_ext {
        caveats.push(format!("Ext vanishing certified in internal degrees 0..={cap}; higher degrees rest on the smoothness theorem"));
    }
    let method = (0..t.num_gens()).map(|g| main.provenance[g].unwrap_or(Method::Propagation)).collect();
    Ok(NakayamaResult { automorphism, method, cy_dimension: t.num_gens(), is_calabi_yau: identity, caveats, report })
}

/// Run [`constraint_solve`] bottom-up while it keeps fixing levels.
fn settle(mut part: PartialNakayama) -> Result<(PartialNakayama, ConstraintOutcome), NakayamaError> {
    loop {
        let (next, outcome) = constraint_solve(&part)?;
        part = next;
        match outcome {
            ConstraintOutcome::Unique { .. } => continue,
            other => return Ok((part, other)),
        }
    }
}
