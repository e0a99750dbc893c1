//! Property tests for tower arithmetic, the scalar fields and the `.ore` parser.

mod common;

use std::sync::{Arc, LazyLock};

use proptest::prelude::*;

use common::{load, WordOracle};
use ore_nakayama::dsl::{parse_element, parse_tower, TowerSpec};
use ore_nakayama::homology::ext::ext_top_scaled;
use ore_nakayama::homology::resolution::{build_resolution_with, PivotOrder};
use ore_nakayama::homology::{build_resolution, ext_top};
use ore_nakayama::ncpoly::{Monomial, TowerElement};
use ore_nakayama::ore::OreTower;
use ore_nakayama::scalars::FieldValue;

const TOWERS: &[&str] = &["jordan", "quantum-plane", "weyl", "dim3", "quantum-affine", "G", "D"];
const ELEMENT_DEGREE: u32 = 2;

static SPECS: LazyLock<Vec<TowerSpec>> = LazyLock::new(|| TOWERS.iter().map(|n| load(n)).collect());
static ORACLES: LazyLock<Vec<WordOracle>> = LazyLock::new(|| SPECS.iter().map(|s| WordOracle::new(&s.tower)).collect());

/// Integer combination of the first `coeffs.len()` monomials of degree ≤ `ELEMENT_DEGREE`
/// in the first `gens` generators.
fn element(t: &Arc<OreTower>, gens: usize, coeffs: &[i64]) -> TowerElement {
    let basis = t.basis(gens, ELEMENT_DEGREE, true);
    let mut e = TowerElement::zero();
    for (m, &c) in basis.iter().zip(coeffs) {
        e.add_term(m.clone(), FieldValue::from_int(t.field(), c));
    }
    e
}

fn coeffs() -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-3i64..=3, 0..8)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, ..ProptestConfig::default() })]

    #[test]
    fn multiplication_is_associative(k in 0..TOWERS.len(), a in coeffs(), b in coeffs(), c in coeffs()) {
        let t = &SPECS[k].tower;
        let n = t.num_gens();
        let (a, b, c) = (element(t, n, &a), element(t, n, &b), element(t, n, &c));
        prop_assert_eq!(t.multiply(&t.multiply(&a, &b), &c), t.multiply(&a, &t.multiply(&b, &c)));
    }

    #[test]
    fn multiplication_matches_word_rewriting(k in 0..TOWERS.len(), a in coeffs(), b in coeffs()) {
        let t = &SPECS[k].tower;
        let n = t.num_gens();
        let (a, b) = (element(t, n, &a), element(t, n, &b));
        prop_assert_eq!(t.multiply(&a, &b), ORACLES[k].product(&a, &b));
    }

    #[test]
    fn rewrite_rule_and_twist_laws(k in 0..TOWERS.len(), level_seed in 0usize..8, a in coeffs(), b in coeffs()) {
        let t = &SPECS[k].tower;
        let level = 1 + level_seed % (t.num_gens() - 1);
        let (a, b) = (element(t, level, &a), element(t, level, &b));
        let x = t.gen(level);
        let sa = t.sigma(level, &a).unwrap();
        // x a = σ(a) x + δ(a)
        let da = t.apply_delta(level, &a).unwrap();
        prop_assert_eq!(t.multiply(&x, &a), t.multiply(&sa, &x).add(&da));
        // σ and σ⁻¹ are mutually inverse algebra maps
        prop_assert_eq!(t.sigma_inv(level, &sa).unwrap(), a.clone());
        prop_assert_eq!(t.sigma(level, &t.sigma_inv(level, &a).unwrap()).unwrap(), a.clone());
        let ab = t.multiply(&a, &b);
        let sb = t.sigma(level, &b).unwrap();
        prop_assert_eq!(t.sigma(level, &ab).unwrap(), t.multiply(&sa, &sb));
        // δ(ab) = δ(a) b + σ(a) δ(b)
        let db = t.apply_delta(level, &b).unwrap();
        prop_assert_eq!(t.apply_delta(level, &ab).unwrap(), t.multiply(&da, &b).add(&t.multiply(&sa, &db)));
    }

    #[test]
    fn right_normal_form_roundtrip(k in 0..TOWERS.len(), a in coeffs()) {
        let t = &SPECS[k].tower;
        let top = t.num_gens() - 1;
        let a = element(t, t.num_gens(), &a);
        let parts = t.right_normal_form(top, &a).unwrap();
        prop_assert_eq!(t.from_right_form(top, &parts), a);
    }

    #[test]
    fn coefficient_operators_match_products(k in 0..TOWERS.len(), level_seed in 0usize..8, n in 0usize..4, a in coeffs()) {
        let t = &SPECS[k].tower;
        let level = 1 + level_seed % (t.num_gens() - 1);
        let a = element(t, level, &a);
        let xn = t.pow(&t.gen(level), n as u32);
        let mut left = TowerElement::zero();
        for (i, p) in t.p_all(level, n, &a).unwrap().iter().enumerate() {
            left.add_assign(&t.multiply(p, &t.mono(Monomial::var(level, i as u16))));
        }
        prop_assert_eq!(left, t.multiply(&xn, &a));
        let mut right = TowerElement::zero();
        for (i, q) in t.q_all(level, n, &a).unwrap().iter().enumerate() {
            right.add_assign(&t.multiply(&t.mono(Monomial::var(level, i as u16)), q));
        }
        prop_assert_eq!(right, t.multiply(&a, &xn));
    }

    #[test]
    fn rendered_elements_parse_back(k in 0..TOWERS.len(), a in coeffs(), b in coeffs()) {
        let spec = &SPECS[k];
        let t = &spec.tower;
        let e = t.multiply(&element(t, t.num_gens(), &a), &element(t, t.num_gens(), &b));
        let text = t.render(&e);
        let back = parse_element(&text, &spec.scope()).unwrap();
        prop_assert_eq!(back, e, "{}", text);
    }

    #[test]
    fn parser_never_panics(text in "[a-z0-9 \\n{}:;>*+^/()=-]{0,80}") {
        let _ = parse_tower(&text);
        let _ = parse_tower(&format!("field Q\ngen x deg 1\n{text}"));
    }

    #[test]
    fn symbolic_field_axioms(a in prop::collection::vec(-4i64..=4, 4), b in prop::collection::vec(-4i64..=4, 4), c in prop::collection::vec(-4i64..=4, 4)) {
        // elements c0 + c1 p + c2 q + c3 p q of Q(p)(q), q quadratic over Q(p)
        let spec = load("D-symbolic");
        let cfg = spec.tower.field().clone();
        let p = FieldValue::param(&cfg, "p").unwrap();
        let q = FieldValue::alpha(&cfg).unwrap();
        let make = |v: &[i64]| {
            let int = |n: i64| FieldValue::from_int(&cfg, n);
            int(v[0]).add_ref(&int(v[1]).mul_ref(&p)).add_ref(&int(v[2]).mul_ref(&q)).add_ref(&int(v[3]).mul_ref(&p.mul_ref(&q)))
        };
        let (a, b, c) = (make(&a), make(&b), make(&c));
        prop_assert_eq!(a.mul_ref(&b.add_ref(&c)), a.mul_ref(&b).add_ref(&a.mul_ref(&c)));
        prop_assert_eq!(a.mul_ref(&b).mul_ref(&c), a.mul_ref(&b.mul_ref(&c)));
        prop_assert_eq!(a.mul_ref(&b), b.mul_ref(&a));
        if !a.is_zero() {
            prop_assert!(a.mul_ref(&a.inv().unwrap()).is_one());
        }
        // the minimal polynomial q² = p² q − 2p⁴
        let p2 = p.mul_ref(&p);
        prop_assert_eq!(q.mul_ref(&q), p2.mul_ref(&q).sub_ref(&FieldValue::from_int(&cfg, 2).mul_ref(&p2).mul_ref(&p2)));
    }
}

#[test]
fn pivot_order_and_class_scaling_do_not_change_the_twist() {
    for name in ["jordan", "quantum-plane", "dim3"] {
        let t = load(name).tower;
        let first = ext_top(&build_resolution(&t).unwrap(), 4).unwrap();
        let last = ext_top(&build_resolution_with(&t, PivotOrder::Last).unwrap(), 4).unwrap();
        assert_eq!(first.twist, last.twist, "{name}: pivot order changes the twist");
        let c = FieldValue::from_int(t.field(), -5);
        let scaled = ext_top_scaled(&build_resolution(&t).unwrap(), 4, Some(c)).unwrap();
        assert_eq!(first.twist, scaled.twist, "{name}: rescaling the class changes the twist");
    }
}
