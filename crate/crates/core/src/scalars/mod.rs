//! Exact coefficient arithmetic: rationals, rational functions in named
//! parameters, and at most one quadratic extension on top.

mod field;
pub mod poly;
pub mod ratfunc;

pub use field::{
    evaluate_instance, field_ops, from_poly, quad_reduce, rational, Algebraic, FieldConfig, FieldOp,
    FieldOpResult, FieldValue,
};
pub use poly::Poly;
pub use ratfunc::RatFunc;

use thiserror::Error;

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum ScalarError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands belong to different coefficient fields")]
    ParameterMismatch,
    #[error("the field has no algebraic element")]
    NoAlgebraicElement,
    #[error("a denominator vanishes at the numeric instance")]
    DenominatorVanishes,
    #[error("parameter `{0}` has no numeric binding")]
    UnboundParameter(String),
    #[error("name `{0}` is declared twice")]
    DuplicateName(String),
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;
    use std::sync::Arc;

    fn sqrt_minus_seven() -> Arc<FieldConfig> {
        let alg = Algebraic {
            name: "alpha".into(),
            m1: RatFunc::zero(),
            m0: RatFunc::constant(rational(-7, 1)),
        };
        FieldConfig::new(vec![], Some(alg), None).unwrap()
    }

    #[test]
    fn square_of_half_one_plus_alpha() {
        let k = sqrt_minus_seven();
        let half = FieldValue::from_rational(&k, rational(1, 2));
        let a = FieldValue::alpha(&k).unwrap();
        let q = &half + &(&half * &a);
        let sq = &q * &q;
        let want = FieldValue::from_parts(
            &k,
            RatFunc::constant(rational(-3, 2)),
            RatFunc::constant(rational(1, 2)),
        )
        .unwrap();
        assert_eq!(sq, want);
        assert_eq!(sq.render(), "-3/2 + 1/2*alpha");
    }

    #[test]
    fn inverse_in_extension() {
        let k = sqrt_minus_seven();
        let a = FieldValue::alpha(&k).unwrap();
        let x = &FieldValue::from_int(&k, 3) + &a;
        let inv = x.inv().unwrap();
        assert!((&x * &inv).is_one());
    }

    #[test]
    fn quad_reduce_examples() {
        let k = sqrt_minus_seven();
        let z = RatFunc::zero();
        let one = RatFunc::one();
        let r = quad_reduce(&k, &z, &z, &one).unwrap();
        assert_eq!(r, FieldValue::from_int(&k, -7));
        let five = RatFunc::constant(rational(5, 1));
        assert_eq!(quad_reduce(&k, &five, &z, &z).unwrap(), FieldValue::from_int(&k, 5));
        let plain = FieldConfig::rationals();
        assert_eq!(quad_reduce(&plain, &z, &z, &one), Err(ScalarError::NoAlgebraicElement));
    }

    fn d_family() -> Arc<FieldConfig> {
        // q^2 = p^2*q - 2*p^4
        let p = Poly::var(0);
        let p2 = p.mul(&p);
        let alg = Algebraic {
            name: "q".into(),
            m1: RatFunc::from_poly(p2.clone()),
            m0: RatFunc::from_poly(p2.mul(&p2).scale(&rational(-2, 1))),
        };
        FieldConfig::new(vec!["p".into()], Some(alg), None).unwrap()
    }

    #[test]
    fn d_constraint_vanishes_symbolically() {
        let k = d_family();
        let p = FieldValue::param(&k, "p").unwrap();
        let q = FieldValue::alpha(&k).unwrap();
        let two = FieldValue::from_int(&k, 2);
        let p2 = &p * &p;
        let lhs = &(&(&two * &(&p2 * &p2)) - &(&p2 * &q)) + &(&q * &q);
        assert!(lhs.is_zero());
        let z = RatFunc::zero();
        let r = quad_reduce(&k, &z, &z, &RatFunc::one()).unwrap();
        assert_eq!(r.render(), "-2*p^4 + p^2*q");
        let qi = q.inv().unwrap();
        assert!((&qi * &q).is_one());
    }

    fn g_instance() -> Arc<FieldConfig> {
        let names = ["p", "q", "s", "g"].map(String::from).to_vec();
        let vals = vec![rational(7, 2), rational(7, 2), rational(1, 1), rational(-2, 1)];
        FieldConfig::new(names, None, Some(vals)).unwrap()
    }

    #[test]
    fn g_instance_values() {
        let k = g_instance();
        let v = |n: &str| FieldValue::param(&k, n).unwrap();
        let (p, q, s, g) = (v("p"), v("q"), v("s"), v("g"));
        let l5 = (&(&p * &(&s * &s)) + &(&q * &g)).div(&(&(&q * &s) + &g)).unwrap();
        let inst = l5.evaluate_instance().unwrap();
        assert_eq!(inst.as_rational(), Some(&rational(-7, 3)));
        let s2 = &s * &s;
        let c = &(&(&(&p * &(&s2 * &s)) * &g) + &(&(&q * &s) * &(&g * &g)))
            + &(&(&s2 * &(&s2 * &s)) + &(&g * &(&g * &g)));
        assert!(c.evaluate_instance().unwrap().is_zero());
        let three = FieldValue::from_int(&k, 3);
        assert_eq!(three.evaluate_instance().unwrap().as_rational(), Some(&rational(3, 1)));
    }

    #[test]
    fn unbound_instance_errors() {
        let k = FieldConfig::new(vec!["p".into()], None, None).unwrap();
        let p = FieldValue::param(&k, "p").unwrap();
        assert!(matches!(p.evaluate_instance(), Err(ScalarError::UnboundParameter(_))));
    }

    #[test]
    fn mismatched_fields_rejected() {
        let a = FieldValue::one(&sqrt_minus_seven());
        let b = FieldValue::one(&g_instance());
        assert_eq!(field_ops(&a, &b, FieldOp::Add), Err(ScalarError::ParameterMismatch));
        let _ = BigRational::from_integer(1.into());
    }
}
