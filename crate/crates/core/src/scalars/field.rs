use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, OnceLock};

use num_rational::BigRational;
use num_traits::Signed;

use super::poly::Poly;
use super::ratfunc::RatFunc;
use super::ScalarError;

/// A quadratic element `name` with `name^2 = m1*name + m0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Algebraic {
    pub name: String,
    pub m1: RatFunc,
    pub m0: RatFunc,
}

#[derive(Debug)]
pub struct FieldConfig {
    params: Vec<String>,
    algebraic: Option<Algebraic>,
    bindings: Option<Vec<BigRational>>,
    instance: OnceLock<Result<Arc<FieldConfig>, ScalarError>>,
}

impl PartialEq for FieldConfig {
    fn eq(&self, other: &Self) -> bool {
        self.params == other.params
            && self.algebraic == other.algebraic
            && self.bindings == other.bindings
    }
}

impl FieldConfig {
    pub fn rationals() -> Arc<FieldConfig> {
        FieldConfig::new(Vec::new(), None, None).unwrap()
    }

    pub fn new(
        params: Vec<String>,
        algebraic: Option<Algebraic>,
        bindings: Option<Vec<BigRational>>,
    ) -> Result<Arc<FieldConfig>, ScalarError> {
        for (i, p) in params.iter().enumerate() {
            if params[..i].contains(p) {
                return Err(ScalarError::DuplicateName(p.clone()));
            }
            if algebraic.as_ref().is_some_and(|a| &a.name == p) {
                return Err(ScalarError::DuplicateName(p.clone()));
            }
        }
        if let Some(a) = &algebraic {
            for part in [&a.m1, &a.m0] {
                let used = part.num().max_var().max(part.den().max_var());
                if used.is_some_and(|v| v >= params.len()) {
                    return Err(ScalarError::ParameterMismatch);
                }
            }
        }
        if let Some(b) = &bindings {
            if b.len() != params.len() {
                return Err(ScalarError::UnboundParameter(
                    params.get(b.len()).cloned().unwrap_or_default(),
                ));
            }
        }
        Ok(Arc::new(FieldConfig { params, algebraic, bindings, instance: OnceLock::new() }))
    }

    pub fn params(&self) -> &[String] {
        &self.params
    }

    pub fn algebraic(&self) -> Option<&Algebraic> {
        self.algebraic.as_ref()
    }

    pub fn bindings(&self) -> Option<&[BigRational]> {
        self.bindings.as_deref()
    }

    pub fn param_index(&self, name: &str) -> Option<usize> {
        self.params.iter().position(|p| p == name)
    }

    /// The parameter-free field obtained by substituting the numeric bindings.
    pub fn instance(&self) -> Result<Arc<FieldConfig>, ScalarError> {
        self.instance
            .get_or_init(|| {
                let values = self
                    .bindings
                    .as_ref()
                    .ok_or_else(|| ScalarError::UnboundParameter(self.params[0].clone()))?;
                let algebraic = match &self.algebraic {
                    None => None,
                    Some(a) => Some(Algebraic {
                        name: a.name.clone(),
                        m1: RatFunc::Const(a.m1.eval(values).ok_or(ScalarError::DenominatorVanishes)?),
                        m0: RatFunc::Const(a.m0.eval(values).ok_or(ScalarError::DenominatorVanishes)?),
                    }),
                };
                FieldConfig::new(Vec::new(), algebraic, None)
            })
            .clone()
    }

    fn names(&self) -> Vec<String> {
        self.params.clone()
    }
}

/// An element `re + alg*alpha` of the configured field.
#[derive(Clone)]
pub struct FieldValue {
    re: RatFunc,
    alg: RatFunc,
    cfg: Arc<FieldConfig>,
}

impl PartialEq for FieldValue {
    fn eq(&self, other: &Self) -> bool {
        self.re == other.re && self.alg == other.alg
    }
}

impl Eq for FieldValue {}

impl Hash for FieldValue {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.re.hash(state);
        self.alg.hash(state);
    }
}

impl fmt::Debug for FieldValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

impl fmt::Display for FieldValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

impl FieldValue {
    pub fn zero(cfg: &Arc<FieldConfig>) -> Self {
        FieldValue { re: RatFunc::zero(), alg: RatFunc::zero(), cfg: cfg.clone() }
    }

    pub fn one(cfg: &Arc<FieldConfig>) -> Self {
        FieldValue { re: RatFunc::one(), alg: RatFunc::zero(), cfg: cfg.clone() }
    }

    pub fn from_rational(cfg: &Arc<FieldConfig>, r: BigRational) -> Self {
        FieldValue { re: RatFunc::Const(r), alg: RatFunc::zero(), cfg: cfg.clone() }
    }

    pub fn from_int(cfg: &Arc<FieldConfig>, n: i64) -> Self {
        FieldValue::from_rational(cfg, BigRational::from_integer(n.into()))
    }

    pub fn from_parts(cfg: &Arc<FieldConfig>, re: RatFunc, alg: RatFunc) -> Result<Self, ScalarError> {
        if !alg.is_zero() && cfg.algebraic.is_none() {
            return Err(ScalarError::NoAlgebraicElement);
        }
        Ok(FieldValue { re, alg, cfg: cfg.clone() })
    }

    pub fn param(cfg: &Arc<FieldConfig>, name: &str) -> Option<Self> {
        let i = cfg.param_index(name)?;
        Some(FieldValue { re: RatFunc::param(i), alg: RatFunc::zero(), cfg: cfg.clone() })
    }

    pub fn alpha(cfg: &Arc<FieldConfig>) -> Result<Self, ScalarError> {
        cfg.algebraic.as_ref().ok_or(ScalarError::NoAlgebraicElement)?;
        Ok(FieldValue { re: RatFunc::zero(), alg: RatFunc::one(), cfg: cfg.clone() })
    }

    pub fn config(&self) -> &Arc<FieldConfig> {
        &self.cfg
    }

    pub fn re(&self) -> &RatFunc {
        &self.re
    }

    pub fn alg(&self) -> &RatFunc {
        &self.alg
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.alg.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.alg.is_zero()
    }

    /// The value as a plain rational, if it is one.
    pub fn as_rational(&self) -> Option<&BigRational> {
        if self.alg.is_zero() {
            self.re.as_const()
        } else {
            None
        }
    }

    pub fn same_field(&self, other: &FieldValue) -> bool {
        Arc::ptr_eq(&self.cfg, &other.cfg) || *self.cfg == *other.cfg
    }

    fn alg_data(&self) -> &Algebraic {
        self.cfg.algebraic.as_ref().expect("algebraic part without an algebraic element")
    }

    pub fn neg_ref(&self) -> FieldValue {
        FieldValue { re: self.re.neg(), alg: self.alg.neg(), cfg: self.cfg.clone() }
    }

    pub fn add_ref(&self, other: &FieldValue) -> FieldValue {
        FieldValue { re: self.re.add(&other.re), alg: self.alg.add(&other.alg), cfg: self.cfg.clone() }
    }

    pub fn sub_ref(&self, other: &FieldValue) -> FieldValue {
        FieldValue { re: self.re.sub(&other.re), alg: self.alg.sub(&other.alg), cfg: self.cfg.clone() }
    }

    pub fn mul_ref(&self, other: &FieldValue) -> FieldValue {
        if self.alg.is_zero() && other.alg.is_zero() {
            return FieldValue { re: self.re.mul(&other.re), alg: RatFunc::zero(), cfg: self.cfg.clone() };
        }
        if self.alg.is_zero() {
            return FieldValue { re: self.re.mul(&other.re), alg: self.re.mul(&other.alg), cfg: self.cfg.clone() };
        }
        if other.alg.is_zero() {
            return FieldValue { re: self.re.mul(&other.re), alg: self.alg.mul(&other.re), cfg: self.cfg.clone() };
        }
        let u0 = self.re.mul(&other.re);
        let u1 = self.re.mul(&other.alg).add(&self.alg.mul(&other.re));
        let u2 = self.alg.mul(&other.alg);
        let a = self.alg_data();
        FieldValue { re: u0.add(&u2.mul(&a.m0)), alg: u1.add(&u2.mul(&a.m1)), cfg: self.cfg.clone() }
    }

    pub fn scale_rational(&self, r: &BigRational) -> FieldValue {
        let c = RatFunc::Const(r.clone());
        FieldValue { re: self.re.mul(&c), alg: self.alg.mul(&c), cfg: self.cfg.clone() }
    }

    pub fn inv(&self) -> Result<FieldValue, ScalarError> {
        if self.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        if self.alg.is_zero() {
            let re = self.re.inv().ok_or(ScalarError::DivisionByZero)?;
            return Ok(FieldValue { re, alg: RatFunc::zero(), cfg: self.cfg.clone() });
        }
        let a = self.alg_data();
        let (u, v) = (&self.re, &self.alg);
        let conj_re = u.add(&v.mul(&a.m1));
        let norm = u.mul(u).add(&u.mul(v).mul(&a.m1)).sub(&v.mul(v).mul(&a.m0));
        let ninv = norm.inv().ok_or(ScalarError::DivisionByZero)?;
        Ok(FieldValue { re: conj_re.mul(&ninv), alg: v.neg().mul(&ninv), cfg: self.cfg.clone() })
    }

    pub fn div(&self, other: &FieldValue) -> Result<FieldValue, ScalarError> {
        Ok(self.mul_ref(&other.inv()?))
    }

    pub fn pow(&self, e: i64) -> Result<FieldValue, ScalarError> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut n = e.unsigned_abs();
        let mut out = FieldValue::one(&self.cfg);
        let mut b = base;
        while n > 0 {
            if n & 1 == 1 {
                out = out.mul_ref(&b);
            }
            n >>= 1;
            if n > 0 {
                b = b.mul_ref(&b);
            }
        }
        Ok(out)
    }

    /// Move this value into the parameter-free instance field.
    pub fn evaluate_instance(&self) -> Result<FieldValue, ScalarError> {
        let target = self.cfg.instance()?;
        let values = self.cfg.bindings.as_ref().ok_or_else(|| {
            ScalarError::UnboundParameter(self.cfg.params.first().cloned().unwrap_or_default())
        })?;
        let re = self.re.eval(values).ok_or(ScalarError::DenominatorVanishes)?;
        let alg = self.alg.eval(values).ok_or(ScalarError::DenominatorVanishes)?;
        Ok(FieldValue { re: RatFunc::Const(re), alg: RatFunc::Const(alg), cfg: target })
    }

    /// True when the rendered value needs no parentheses as a factor.
    pub fn is_atomic(&self) -> bool {
        if self.alg.is_zero() {
            return self.re.is_single_term() && !self.re.render(&self.cfg.names()).contains(" ");
        }
        self.re.is_zero() && self.alg.is_single_term()
    }

    /// Sign of the value when it is a plain rational.
    pub fn rational_sign(&self) -> Option<bool> {
        self.as_rational().map(|r| r.is_negative())
    }

    pub fn render(&self) -> String {
        let names = self.cfg.names();
        if self.alg.is_zero() {
            return self.re.render(&names);
        }
        let aname = &self.alg_data().name;
        let alg_part = if self.alg.is_one() {
            aname.clone()
        } else if self.alg == RatFunc::one().neg() {
            format!("-{aname}")
        } else {
            let s = self.alg.render(&names);
            if self.alg.is_single_term() && !s.contains('/') || self.alg.as_const().is_some() {
                format!("{s}*{aname}")
            } else {
                format!("({s})*{aname}")
            }
        };
        if self.re.is_zero() {
            return alg_part;
        }
        let re = self.re.render(&names);
        match alg_part.strip_prefix('-') {
            Some(rest) => format!("{re} - {rest}"),
            None => format!("{re} + {alg_part}"),
        }
    }
}

impl<'a> Add<&'a FieldValue> for &'a FieldValue {
    type Output = FieldValue;
    fn add(self, rhs: &'a FieldValue) -> FieldValue {
        self.add_ref(rhs)
    }
}

impl<'a> Sub<&'a FieldValue> for &'a FieldValue {
    type Output = FieldValue;
    fn sub(self, rhs: &'a FieldValue) -> FieldValue {
        self.sub_ref(rhs)
    }
}

impl<'a> Mul<&'a FieldValue> for &'a FieldValue {
    type Output = FieldValue;
    fn mul(self, rhs: &'a FieldValue) -> FieldValue {
        self.mul_ref(rhs)
    }
}

impl Neg for &FieldValue {
    type Output = FieldValue;
    fn neg(self) -> FieldValue {
        self.neg_ref()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldOp {
    Add,
    Sub,
    Mul,
    Div,
    Neg,
    Inv,
    Eq,
}

#[derive(Clone, Debug, PartialEq)]
pub enum FieldOpResult {
    Value(FieldValue),
    Bool(bool),
}

/// Checked binary/unary arithmetic; unary ops ignore `y`.
pub fn field_ops(x: &FieldValue, y: &FieldValue, op: FieldOp) -> Result<FieldOpResult, ScalarError> {
    if !x.same_field(y) {
        return Err(ScalarError::ParameterMismatch);
    }
    let v = match op {
        FieldOp::Add => x + y,
        FieldOp::Sub => x - y,
        FieldOp::Mul => x * y,
        FieldOp::Div => x.div(y)?,
        FieldOp::Neg => -x,
        FieldOp::Inv => x.inv()?,
        FieldOp::Eq => return Ok(FieldOpResult::Bool(x == y)),
    };
    Ok(FieldOpResult::Value(v))
}

/// Rewrite `u0 + u1*alpha + u2*alpha^2` using the declared minimal polynomial.
pub fn quad_reduce(
    cfg: &Arc<FieldConfig>,
    u0: &RatFunc,
    u1: &RatFunc,
    u2: &RatFunc,
) -> Result<FieldValue, ScalarError> {
    let a = cfg.algebraic.as_ref().ok_or(ScalarError::NoAlgebraicElement)?;
    Ok(FieldValue {
        re: u0.add(&u2.mul(&a.m0)),
        alg: u1.add(&u2.mul(&a.m1)),
        cfg: cfg.clone(),
    })
}

pub fn evaluate_instance(value: &FieldValue) -> Result<FieldValue, ScalarError> {
    value.evaluate_instance()
}

/// Convenience: base-field element from a polynomial in the parameters.
pub fn from_poly(cfg: &Arc<FieldConfig>, p: Poly) -> FieldValue {
    FieldValue { re: RatFunc::from_poly(p), alg: RatFunc::zero(), cfg: cfg.clone() }
}

pub fn rational(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}
