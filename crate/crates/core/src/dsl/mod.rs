//! The `.ore` tower-specification format: parsing, scoping and evaluation.

mod lexer;
mod parser;

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use num_rational::BigRational;
use thiserror::Error;

use crate::ncpoly::{FreeExpr, TowerElement};
use crate::ore::{GenMap, OreLevel, OreTower};
use crate::scalars::{Algebraic, FieldConfig, FieldValue, RatFunc};

use parser::{Expr, ExprKind, GenDecl, MapEntry, Name, Parser, RealizationStmt, Section, Stmt};

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
    pub expected: Vec<String>,
}

impl ParseError {
    pub fn new(line: usize, column: usize, message: impl Into<String>, expected: Vec<String>) -> Self {
        ParseError { line, column, message: message.into(), expected }
    }

    fn at(line: usize, column: usize, message: impl Into<String>) -> Self {
        ParseError::new(line, column, message, Vec::new())
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.column, self.message)?;
        if !self.expected.is_empty() {
            write!(f, " (expected {})", self.expected.join(", "))?;
        }
        Ok(())
    }
}

/// A second presentation of the same algebra together with the comparison maps.
#[derive(Clone, Debug)]
pub struct RealizationSpec {
    pub label: String,
    pub tower: Arc<OreTower>,
    /// Image in the reference tower of each generator of this realization.
    pub maps: GenMap,
    /// Image in this realization of each reference generator, when given.
    pub inverse: Option<GenMap>,
}

#[derive(Clone, Debug, Default)]
pub struct Expectations {
    pub nakayama: Option<BTreeMap<usize, TowerElement>>,
    pub calabi_yau: Option<bool>,
    pub dimension: Option<usize>,
}

#[derive(Clone, Debug)]
pub struct CheckSpec {
    pub nonzero: bool,
    pub text: String,
    pub value: TowerElement,
}

#[derive(Clone, Debug)]
pub struct TowerSpec {
    pub field: Arc<FieldConfig>,
    pub lets: Vec<(String, FieldValue)>,
    pub tower: Arc<OreTower>,
    pub realizations: Vec<RealizationSpec>,
    pub expect: Expectations,
    pub relations: Vec<(String, TowerElement)>,
    pub checks: Vec<CheckSpec>,
    /// Lets plus, in a bound file, the parameters' numeric values.
    scalars: HashMap<String, FieldValue>,
}

impl TowerSpec {
    pub fn scope(&self) -> Scope {
        self.scope_for(self.tower.clone())
    }

    /// Same scalars, different generator set (e.g. a realization).
    pub fn scope_for(&self, tower: Arc<OreTower>) -> Scope {
        Scope { field: self.field.clone(), scalars: self.scalars.clone(), tower }
    }
}

/// Names visible when evaluating an element: scalars plus the tower's generators.
#[derive(Clone, Debug)]
pub struct Scope {
    pub field: Arc<FieldConfig>,
    pub scalars: HashMap<String, FieldValue>,
    pub tower: Arc<OreTower>,
}

enum Val {
    Scalar(FieldValue),
    Free(FreeExpr),
}

struct Env<'a> {
    field: &'a Arc<FieldConfig>,
    scalars: &'a HashMap<String, FieldValue>,
    gens: &'a [String],
}

impl Env<'_> {
    fn eval(&self, e: &Expr) -> Result<Val, ParseError> {
        let err = |m: String| ParseError::at(e.line, e.col, m);
        Ok(match &e.kind {
            ExprKind::Int(n) => Val::Scalar(FieldValue::from_rational(self.field, BigRational::from(n.clone()))),
            ExprKind::Name(s) => {
                if let Some(v) = self.scalars.get(s) {
                    Val::Scalar(v.clone())
                } else if let Some(g) = self.gens.iter().position(|n| n == s) {
                    Val::Free(FreeExpr::Gen(g))
                } else if let Some(v) = FieldValue::param(self.field, s) {
                    Val::Scalar(v)
                } else if self.field.algebraic().is_some_and(|a| &a.name == s) {
                    Val::Scalar(FieldValue::alpha(self.field).map_err(|x| err(x.to_string()))?)
                } else {
                    return Err(err(format!("unknown name `{s}`")));
                }
            }
            ExprKind::Neg(a) => match self.eval(a)? {
                Val::Scalar(v) => Val::Scalar(v.neg_ref()),
                Val::Free(f) => Val::Free(FreeExpr::Neg(Box::new(f))),
            },
            ExprKind::Add(a, b) | ExprKind::Sub(a, b) => {
                let sub = matches!(e.kind, ExprKind::Sub(..));
                match (self.eval(a)?, self.eval(b)?) {
                    (Val::Scalar(x), Val::Scalar(y)) => Val::Scalar(if sub { x.sub_ref(&y) } else { x.add_ref(&y) }),
                    (x, y) => {
                        let y = into_free(y);
                        let y = if sub { FreeExpr::Neg(Box::new(y)) } else { y };
                        Val::Free(FreeExpr::Sum(vec![into_free(x), y]))
                    }
                }
            }
            ExprKind::Mul(a, b) => match (self.eval(a)?, self.eval(b)?) {
                (Val::Scalar(x), Val::Scalar(y)) => Val::Scalar(x.mul_ref(&y)),
                (x, y) => Val::Free(FreeExpr::Product(vec![into_free(x), into_free(y)])),
            },
            ExprKind::Div(a, b) => {
                let y = match self.eval(b)? {
                    Val::Scalar(y) => y,
                    Val::Free(_) => return Err(err("division is only allowed by scalars".into())),
                };
                let inv = y.inv().map_err(|x| err(x.to_string()))?;
                match self.eval(a)? {
                    Val::Scalar(x) => Val::Scalar(x.mul_ref(&inv)),
                    Val::Free(f) => Val::Free(FreeExpr::scaled(inv, f)),
                }
            }
            ExprKind::Pow(a, k) => match self.eval(a)? {
                Val::Scalar(x) => Val::Scalar(x.pow(*k).map_err(|x| err(x.to_string()))?),
                Val::Free(f) => {
                    if *k < 0 {
                        return Err(err("negative powers of generators are not allowed".into()));
                    }
                    Val::Free(FreeExpr::Pow(Box::new(f), *k as u32))
                }
            },
        })
    }

    fn scalar(&self, e: &Expr) -> Result<FieldValue, ParseError> {
        match self.eval(e)? {
            Val::Scalar(v) => Ok(v),
            Val::Free(_) => Err(ParseError::at(e.line, e.col, "expected a scalar expression")),
        }
    }

    fn element(&self, tower: &OreTower, e: &Expr) -> Result<TowerElement, ParseError> {
        let f = into_free(self.eval(e)?);
        tower.eval_free_expr(&f).map_err(|x| ParseError::at(e.line, e.col, x.to_string()))
    }
}

fn into_free(v: Val) -> FreeExpr {
    match v {
        Val::Scalar(c) => FreeExpr::Scalar(c),
        Val::Free(f) => f,
    }
}

/// Evaluate an expression as `c0 + c1*a` over the parameter field, where `a` is
/// the algebraic name being defined. Products of two `a`-terms are rejected.
fn eval_linear(
    e: &Expr,
    params: &[String],
    scalars: &HashMap<String, RatFunc>,
    alg: &str,
) -> Result<(RatFunc, RatFunc), ParseError> {
    let err = |m: &str| ParseError::at(e.line, e.col, m);
    let rec = |x: &Expr| eval_linear(x, params, scalars, alg);
    Ok(match &e.kind {
        ExprKind::Int(n) => (RatFunc::constant(BigRational::from(n.clone())), RatFunc::zero()),
        ExprKind::Name(s) if s == alg => (RatFunc::zero(), RatFunc::one()),
        ExprKind::Name(s) => match params.iter().position(|p| p == s) {
            Some(i) => (RatFunc::param(i), RatFunc::zero()),
            None => match scalars.get(s) {
                Some(v) => (v.clone(), RatFunc::zero()),
                None => return Err(err(&format!("unknown name `{s}`"))),
            },
        },
        ExprKind::Neg(a) => {
            let (u, v) = rec(a)?;
            (u.neg(), v.neg())
        }
        ExprKind::Add(a, b) => {
            let ((u0, v0), (u1, v1)) = (rec(a)?, rec(b)?);
            (u0.add(&u1), v0.add(&v1))
        }
        ExprKind::Sub(a, b) => {
            let ((u0, v0), (u1, v1)) = (rec(a)?, rec(b)?);
            (u0.sub(&u1), v0.sub(&v1))
        }
        ExprKind::Mul(a, b) => {
            let ((u0, v0), (u1, v1)) = (rec(a)?, rec(b)?);
            if !v0.is_zero() && !v1.is_zero() {
                return Err(err("the defining equation must be linear in the algebraic element"));
            }
            (u0.mul(&u1), u0.mul(&v1).add(&v0.mul(&u1)))
        }
        ExprKind::Div(a, b) => {
            let ((u0, v0), (u1, v1)) = (rec(a)?, rec(b)?);
            if !v1.is_zero() {
                return Err(err("cannot divide by the algebraic element here"));
            }
            let inv = u1.inv().ok_or_else(|| err("division by zero"))?;
            (u0.mul(&inv), v0.mul(&inv))
        }
        ExprKind::Pow(a, k) => {
            let (u, v) = rec(a)?;
            if !v.is_zero() {
                return Err(err("the defining equation must be linear in the algebraic element"));
            }
            let base = if *k < 0 { u.inv().ok_or_else(|| err("division by zero"))? } else { u };
            let mut out = RatFunc::one();
            for _ in 0..k.unsigned_abs() {
                out = out.mul(&base);
            }
            (out, RatFunc::zero())
        }
    })
}

/// Parse a tower specification.
pub fn parse_tower(text: &str) -> Result<TowerSpec, ParseError> {
    let toks = lexer::tokenize(text)?;
    let chars: Vec<char> = text.chars().collect();
    let stmts = Parser::new(toks, &chars).file()?;
    Builder::default().run(stmts)
}

/// Parse one element in the given scope and normalize it.
pub fn parse_element(text: &str, scope: &Scope) -> Result<TowerElement, ParseError> {
    let toks = lexer::tokenize(text)?;
    let chars: Vec<char> = text.chars().collect();
    let mut p = Parser::new(toks, &chars);
    let e = p.expr()?;
    if !p.at_eof() {
        return p.trailing_error();
    }
    let env = Env { field: &scope.field, scalars: &scope.scalars, gens: scope.tower.names() };
    env.element(&scope.tower, &e)
}

#[derive(Default)]
struct Builder {
    params: Vec<String>,
    algebraic: Option<Algebraic>,
    bindings: Vec<(Name, BigRational)>,
    /// Symbolic field before bindings; set by the first statement that needs scalars.
    field: Option<Arc<FieldConfig>>,
    scalars: HashMap<String, FieldValue>,
    lets: Vec<(String, FieldValue)>,
    graded: bool,
    levels: Vec<OreLevel>,
}

fn dup(n: &Name) -> ParseError {
    ParseError::at(n.line, n.col, format!("name `{}` is already declared", n.text))
}

impl Builder {
    fn taken(&self, s: &str) -> bool {
        self.params.iter().any(|p| p == s)
            || self.algebraic.as_ref().is_some_and(|a| a.name == s)
            || self.scalars.contains_key(s)
            || self.levels.iter().any(|l| l.name == s)
    }

    fn env(&self) -> Env<'_> {
        Env { field: self.field.as_ref().unwrap(), scalars: &self.scalars, gens: &[] }
    }

    fn ensure_field(&mut self, at: (usize, usize)) -> Result<(), ParseError> {
        if self.field.is_some() {
            return Ok(());
        }
        let err = |m: String| ParseError::at(at.0, at.1, m);
        let bindings = if self.bindings.is_empty() {
            None
        } else {
            let mut vals = Vec::new();
            for p in &self.params {
                match self.bindings.iter().find(|(n, _)| &n.text == p) {
                    Some((_, v)) => vals.push(v.clone()),
                    None => return Err(err(format!("parameter `{p}` has no binding"))),
                }
            }
            Some(vals)
        };
        let symbolic = FieldConfig::new(self.params.clone(), self.algebraic.take(), bindings.clone())
            .map_err(|e| err(e.to_string()))?;
        if bindings.is_some() {
            let inst = symbolic.instance().map_err(|e| err(e.to_string()))?;
            for (name, v) in &self.bindings {
                self.scalars.insert(name.text.clone(), FieldValue::from_rational(&inst, v.clone()));
            }
            self.field = Some(inst);
        } else {
            self.field = Some(symbolic);
        }
        Ok(())
    }

    fn run(mut self, stmts: Vec<Stmt>) -> Result<TowerSpec, ParseError> {
        self.graded = true;
        let mut deferred = Vec::new();
        let mut saw_field = false;
        for s in stmts {
            match s {
                Stmt::Field(n) => {
                    if n.text != "Q" {
                        return Err(ParseError::new(n.line, n.col, format!("unsupported base field `{}`", n.text), vec!["`Q`".into()]));
                    }
                    if saw_field || self.field.is_some() || !self.params.is_empty() {
                        return Err(ParseError::at(n.line, n.col, "`field` must come first and only once"));
                    }
                    saw_field = true;
                }
                Stmt::Param(names) => {
                    for n in names {
                        if self.field.is_some() || self.algebraic.is_some() || !self.bindings.is_empty() {
                            return Err(ParseError::at(n.line, n.col, "parameters must be declared before other definitions"));
                        }
                        if self.taken(&n.text) {
                            return Err(dup(&n));
                        }
                        self.params.push(n.text);
                    }
                }
                Stmt::Algebraic { name, lhs, power, rhs } => {
                    if self.field.is_some() || !self.bindings.is_empty() {
                        return Err(ParseError::at(name.line, name.col, "`algebraic` must precede bindings and definitions"));
                    }
                    if self.algebraic.is_some() {
                        return Err(ParseError::at(name.line, name.col, "only one algebraic element is supported"));
                    }
                    if self.taken(&name.text) {
                        return Err(dup(&name));
                    }
                    if lhs.text != name.text {
                        return Err(ParseError::at(lhs.line, lhs.col, format!("expected `{}` on the left", name.text)));
                    }
                    if power != 2 {
                        return Err(ParseError::at(lhs.line, lhs.col, "only quadratic extensions are supported"));
                    }
                    let (m0, m1) = eval_linear(&rhs, &self.params, &HashMap::new(), &name.text)?;
                    self.algebraic = Some(Algebraic { name: name.text, m1, m0 });
                }
                Stmt::Bind { name, value } => {
                    if self.field.is_some() {
                        return Err(ParseError::at(name.line, name.col, "bindings must precede definitions and generators"));
                    }
                    if !self.params.contains(&name.text) {
                        return Err(ParseError::at(name.line, name.col, format!("`{}` is not a parameter", name.text)));
                    }
                    if self.bindings.iter().any(|(n, _)| n.text == name.text) {
                        return Err(dup(&name));
                    }
                    let (v, a) = eval_linear(&value, &[], &HashMap::new(), "")?;
                    let v = match (v.as_const(), a.is_zero()) {
                        (Some(c), true) => c.clone(),
                        _ => return Err(ParseError::at(value.line, value.col, "a binding must be a rational number")),
                    };
                    self.bindings.push((name, v));
                }
                Stmt::Let { name, value } => {
                    self.ensure_field((name.line, name.col))?;
                    if self.taken(&name.text) {
                        return Err(dup(&name));
                    }
                    let v = self.env().scalar(&value)?;
                    self.scalars.insert(name.text.clone(), v.clone());
                    self.lets.push((name.text, v));
                }
                Stmt::Graded(g) => self.graded = g,
                Stmt::Gen(decl) => {
                    self.ensure_field((decl.name.line, decl.name.col))?;
                    if !deferred.is_empty() && deferred.iter().any(|s| matches!(s, Stmt::Realization { .. })) {
                        return Err(ParseError::at(decl.name.line, decl.name.col, "generators must be declared before realizations"));
                    }
                    if self.taken(&decl.name.text) {
                        return Err(dup(&decl.name));
                    }
                    let level = build_level(self.field.as_ref().unwrap(), &self.scalars, &self.levels, self.graded, &decl)?;
                    self.levels.push(level);
                }
                other => deferred.push(other),
            }
        }
        self.ensure_field((1, 1))?;
        if self.levels.is_empty() {
            return Err(ParseError::at(1, 1, "no generators declared"));
        }
        let field = self.field.clone().unwrap();
        let tower = OreTower::new(field.clone(), self.levels.clone(), self.graded);
        let env = Env { field: &field, scalars: &self.scalars, gens: tower.names() };
        let gen_of = |n: &Name, t: &OreTower| {
            t.gen_index(&n.text)
                .ok_or_else(|| ParseError::at(n.line, n.col, format!("unknown generator `{}`", n.text)))
        };
        let mut expect = Expectations::default();
        let mut realizations = Vec::new();
        let mut relations = Vec::new();
        let mut checks = Vec::new();
        for s in deferred {
            match s {
                Stmt::ExpectNakayama(entries) => {
                    let mut m = BTreeMap::new();
                    for MapEntry { gen, image } in entries {
                        let g = gen_of(&gen, &tower)?;
                        if m.insert(g, env.element(&tower, &image)?).is_some() {
                            return Err(dup(&gen));
                        }
                    }
                    expect.nakayama = Some(m);
                }
                Stmt::ExpectCalabiYau(b) => expect.calabi_yau = Some(b),
                Stmt::ExpectDimension(d) => expect.dimension = Some(d),
                Stmt::Relation { name, value } => relations.push((name.text, env.element(&tower, &value)?)),
                Stmt::Check { nonzero, value, text } => {
                    checks.push(CheckSpec { nonzero, text, value: env.element(&tower, &value)? })
                }
                Stmt::Realization { at, body } => {
                    let label = format!("realization {}", realizations.len() + 1);
                    realizations.push(self.realization(&tower, &at, label, body)?);
                }
                _ => unreachable!("handled in the first pass"),
            }
        }
        Ok(TowerSpec {
            field,
            lets: self.lets,
            tower,
            realizations,
            expect,
            relations,
            checks,
            scalars: self.scalars,
        })
    }

    fn realization(
        &self,
        reference: &Arc<OreTower>,
        at: &Name,
        label: String,
        body: Vec<RealizationStmt>,
    ) -> Result<RealizationSpec, ParseError> {
        let field = self.field.as_ref().unwrap();
        let mut levels: Vec<OreLevel> = Vec::new();
        let mut maps = Vec::new();
        let mut inverse = Vec::new();
        for stmt in body {
            match stmt {
                RealizationStmt::Gen(decl) => {
                    if !maps.is_empty() || !inverse.is_empty() {
                        return Err(ParseError::at(decl.name.line, decl.name.col, "generators must precede `maps` and `inverse`"));
                    }
                    if self.scalars.contains_key(&decl.name.text) || levels.iter().any(|l| l.name == decl.name.text) {
                        return Err(dup(&decl.name));
                    }
                    levels.push(build_level(field, &self.scalars, &levels, self.graded, &decl)?);
                }
                RealizationStmt::Maps(e) => maps.extend(e),
                RealizationStmt::Inverse(e) => inverse.extend(e),
            }
        }
        if levels.len() != reference.num_gens() {
            return Err(ParseError::at(
                at.line,
                at.col,
                format!("a realization needs {} generators, found {}", reference.num_gens(), levels.len()),
            ));
        }
        let tower = OreTower::new(field.clone(), levels, self.graded);
        let ref_env = Env { field, scalars: &self.scalars, gens: reference.names() };
        let own_env = Env { field, scalars: &self.scalars, gens: tower.names() };
        let collect = |entries: &[MapEntry], src: &OreTower, dst: &OreTower, env: &Env| {
            let mut images: Vec<Option<TowerElement>> = vec![None; src.num_gens()];
            for MapEntry { gen, image } in entries {
                let g = src
                    .gen_index(&gen.text)
                    .ok_or_else(|| ParseError::at(gen.line, gen.col, format!("unknown generator `{}`", gen.text)))?;
                if images[g].is_some() {
                    return Err(dup(gen));
                }
                images[g] = Some(env.element(dst, image)?);
            }
            let mut out = Vec::new();
            for (g, img) in images.into_iter().enumerate() {
                match img {
                    Some(e) => out.push(e),
                    None => {
                        return Err(ParseError::at(
                            at.line,
                            at.col,
                            format!("no image given for generator `{}`", src.names()[g]),
                        ))
                    }
                }
            }
            Ok(GenMap::new(out))
        };
        let maps = collect(&maps, &tower, reference, &ref_env)?;
        let inverse =
            if inverse.is_empty() { None } else { Some(collect(&inverse, reference, &tower, &own_env)?) };
        Ok(RealizationSpec { label, tower, maps, inverse })
    }
}

fn build_level(
    field: &Arc<FieldConfig>,
    scalars: &HashMap<String, FieldValue>,
    lower: &[OreLevel],
    graded: bool,
    decl: &GenDecl,
) -> Result<OreLevel, ParseError> {
    let n = lower.len();
    let sections = match &decl.sections {
        None => return Ok(OreLevel::polynomial(decl.name.text.clone(), decl.degree, n, field)),
        Some(s) => s,
    };
    let partial = OreTower::new(field.clone(), lower.to_vec(), graded);
    let env = Env { field, scalars, gens: partial.names() };
    let mut maps: [Vec<Option<TowerElement>>; 3] = [vec![None; n], vec![None; n], vec![None; n]];
    let mut seen = [false; 3];
    for (kind, label, entries) in sections {
        let slot = match kind {
            Section::Sigma => 0,
            Section::SigmaInv => 1,
            Section::Delta => 2,
        };
        if seen[slot] {
            return Err(ParseError::at(label.line, label.col, "map section given twice"));
        }
        seen[slot] = true;
        for MapEntry { gen, image } in entries {
            let g = match partial.gen_index(&gen.text) {
                Some(g) => g,
                None if gen.text == decl.name.text => {
                    return Err(ParseError::at(gen.line, gen.col, "maps are defined on lower generators only"))
                }
                None => return Err(ParseError::at(gen.line, gen.col, format!("unknown generator `{}`", gen.text))),
            };
            if maps[slot][g].is_some() {
                return Err(dup(gen));
            }
            let e = env.element(&partial, image)?;
            if graded && !e.is_zero() {
                let want = partial.weights()[g] + if slot == 2 { decl.degree } else { 0 };
                if !e.is_homogeneous(partial.weights()) || e.weighted_degree(partial.weights()) != Some(want) {
                    return Err(ParseError::at(
                        image.line,
                        image.col,
                        format!(
                            "degree mismatch: image of `{}` must be homogeneous of degree {want}",
                            gen.text
                        ),
                    ));
                }
            }
            maps[slot][g] = Some(e);
        }
    }
    let [sigma, sigma_inv, delta] = maps;
    let full = |m: Vec<Option<TowerElement>>, what: &str| -> Result<GenMap, ParseError> {
        let mut out = Vec::new();
        for (g, e) in m.into_iter().enumerate() {
            match e {
                Some(e) => out.push(e),
                None => {
                    return Err(ParseError::at(
                        decl.name.line,
                        decl.name.col,
                        format!("{what} of `{}` is missing for level `{}`", partial.names()[g], decl.name.text),
                    ))
                }
            }
        }
        Ok(GenMap::new(out))
    };
    let sigma = full(sigma, "sigma")?;
    let sigma_inv = full(sigma_inv, "sigma_inv")?;
    let delta = GenMap::new(delta.into_iter().map(Option::unwrap_or_default).collect());
    Ok(OreLevel { name: decl.name.text.clone(), degree: decl.degree, sigma, sigma_inv, delta })
}
