//! Canonical rational functions in the declared parameters.

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::poly::{gcd, render_rational, Poly};

/// A reduced fraction `num/den`. Constants take a fast path that skips all
/// polynomial work; general fractions have coprime parts and a denominator
/// whose deglex leading coefficient is one.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum RatFunc {
    Const(BigRational),
    Frac { num: Poly, den: Poly },
}

impl Default for RatFunc {
    fn default() -> Self {
        RatFunc::Const(BigRational::zero())
    }
}

impl RatFunc {
    pub fn zero() -> Self {
        RatFunc::Const(BigRational::zero())
    }

    pub fn one() -> Self {
        RatFunc::Const(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        RatFunc::Const(c)
    }

    pub fn from_poly(p: Poly) -> Self {
        match p.as_constant() {
            Some(c) => RatFunc::Const(c),
            None => RatFunc::Frac { num: p, den: Poly::one() },
        }
    }

    pub fn param(index: usize) -> Self {
        RatFunc::from_poly(Poly::var(index))
    }

    /// Build `num/den` and bring it to canonical form.
    pub fn new(num: Poly, den: Poly) -> Option<Self> {
        if den.is_zero() {
            return None;
        }
        if num.is_zero() {
            return Some(RatFunc::zero());
        }
        if let Some(d) = den.as_constant() {
            return Some(RatFunc::from_poly(num.scale(&d.recip())));
        }
        let g = gcd(&num, &den);
        let (num, den) = if g.is_constant() {
            (num, den)
        } else {
            (num.div_exact(&g).unwrap(), den.div_exact(&g).unwrap())
        };
        let lc = den.leading_coeff();
        let (num, den) = (num.scale(&lc.recip()), den.monic());
        if den.is_constant() {
            return Some(RatFunc::from_poly(num));
        }
        Some(RatFunc::Frac { num, den })
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, RatFunc::Const(c) if c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        matches!(self, RatFunc::Const(c) if c.is_one())
    }

    pub fn as_const(&self) -> Option<&BigRational> {
        match self {
            RatFunc::Const(c) => Some(c),
            RatFunc::Frac { .. } => None,
        }
    }

    pub fn num(&self) -> Poly {
        match self {
            RatFunc::Const(c) => Poly::constant(c.clone()),
            RatFunc::Frac { num, .. } => num.clone(),
        }
    }

    pub fn den(&self) -> Poly {
        match self {
            RatFunc::Const(_) => Poly::one(),
            RatFunc::Frac { den, .. } => den.clone(),
        }
    }

    pub fn add(&self, other: &RatFunc) -> RatFunc {
        match (self, other) {
            (RatFunc::Const(a), RatFunc::Const(b)) => RatFunc::Const(a + b),
            _ => {
                let (n1, d1, n2, d2) = (self.num(), self.den(), other.num(), other.den());
                if d1 == d2 {
                    return RatFunc::new(n1.add(&n2), d1).unwrap();
                }
                RatFunc::new(n1.mul(&d2).add(&n2.mul(&d1)), d1.mul(&d2)).unwrap()
            }
        }
    }

    pub fn neg(&self) -> RatFunc {
        match self {
            RatFunc::Const(a) => RatFunc::Const(-a.clone()),
            RatFunc::Frac { num, den } => RatFunc::Frac { num: num.neg(), den: den.clone() },
        }
    }

    pub fn sub(&self, other: &RatFunc) -> RatFunc {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &RatFunc) -> RatFunc {
        match (self, other) {
            (RatFunc::Const(a), RatFunc::Const(b)) => RatFunc::Const(a * b),
            (RatFunc::Const(a), RatFunc::Frac { num, den })
            | (RatFunc::Frac { num, den }, RatFunc::Const(a)) => {
                if a.is_zero() {
                    RatFunc::zero()
                } else {
                    RatFunc::Frac { num: num.scale(a), den: den.clone() }
                }
            }
            _ => {
                // cross-cancel before multiplying to keep the gcd inputs small
                let (n1, d1, n2, d2) = (self.num(), self.den(), other.num(), other.den());
                let g1 = gcd(&n1, &d2);
                let g2 = gcd(&n2, &d1);
                let n1 = n1.div_exact(&g1).unwrap();
                let d2 = d2.div_exact(&g1).unwrap();
                let n2 = n2.div_exact(&g2).unwrap();
                let d1 = d1.div_exact(&g2).unwrap();
                RatFunc::new(n1.mul(&n2), d1.mul(&d2)).unwrap()
            }
        }
    }

    pub fn inv(&self) -> Option<RatFunc> {
        match self {
            RatFunc::Const(a) if a.is_zero() => None,
            RatFunc::Const(a) => Some(RatFunc::Const(a.recip())),
            RatFunc::Frac { num, den } => RatFunc::new(den.clone(), num.clone()),
        }
    }

    pub fn div(&self, other: &RatFunc) -> Option<RatFunc> {
        Some(self.mul(&other.inv()?))
    }

    /// Substitute values for all parameters; `None` when the denominator vanishes.
    pub fn eval(&self, values: &[BigRational]) -> Option<BigRational> {
        match self {
            RatFunc::Const(c) => Some(c.clone()),
            RatFunc::Frac { num, den } => {
                let d = den.eval(values);
                if d.is_zero() {
                    return None;
                }
                Some(num.eval(values) / d)
            }
        }
    }

    /// Number of top-level summands when rendered (used for parenthesization).
    pub fn is_single_term(&self) -> bool {
        match self {
            RatFunc::Const(_) => true,
            RatFunc::Frac { num, den } => num.num_terms() == 1 && den.num_terms() == 1,
        }
    }

    pub fn render(&self, names: &[String]) -> String {
        match self {
            RatFunc::Const(c) => render_rational(c),
            RatFunc::Frac { num, den } => {
                if den.is_one_poly() {
                    return num.render(names);
                }
                let n = num.render(names);
                let d = den.render(names);
                let n = if num.num_terms() > 1 { format!("({n})") } else { n };
                let d = if den.num_terms() > 1 || d.contains('*') {
                    format!("({d})")
                } else {
                    d
                };
                format!("{n}/{d}")
            }
        }
    }
}

trait IsOnePoly {
    fn is_one_poly(&self) -> bool;
}

impl IsOnePoly for Poly {
    fn is_one_poly(&self) -> bool {
        self.as_constant().is_some_and(|c| c.is_one())
    }
}
