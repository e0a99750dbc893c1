use ore_nakayama::dsl::parse_tower;

fn load(name: &str) -> String {
    let path = format!("{}/cases/{name}.ore", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(path).unwrap()
}

const GOOD: &[&str] = &["quantum-plane", "quantum-affine", "weyl", "jordan", "dim3", "D", "D-symbolic", "G"];

#[test]
fn bundled_towers_verify() {
    for name in GOOD {
        let spec = parse_tower(&load(name)).unwrap_or_else(|e| panic!("{name}: {e}"));
        let report = spec.tower.verify();
        for c in report.failures() {
            panic!("{name}: {} failed: {:?}", c.name, c.witness);
        }
        for r in &spec.realizations {
            assert!(r.tower.verify().all_passed(), "{name} {}", r.label);
        }
    }
}

#[test]
fn relations_and_checks_hold() {
    for name in GOOD {
        let spec = parse_tower(&load(name)).unwrap();
        for (rel, v) in &spec.relations {
            assert!(v.is_zero(), "{name}: relation {rel} = {}", spec.tower.render(v));
        }
        for c in &spec.checks {
            assert_eq!(c.value.is_zero(), !c.nonzero, "{name}: check {}", c.text);
        }
    }
}

#[test]
fn negative_controls_fail_verification() {
    let bad = parse_tower(&load("bad-sigma-inverse")).unwrap().tower.verify();
    let c = bad.failures().next().expect("wrong inverse must be detected");
    assert!(c.name.contains("inverse"), "{}", c.name);
    let bad = parse_tower(&load("bad-delta")).unwrap().tower.verify();
    let c = bad.failures().next().expect("inconsistent delta must be detected");
    assert!(c.witness.as_deref().unwrap_or("").contains("pair"), "{:?}", c.witness);
}
