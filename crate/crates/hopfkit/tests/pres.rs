use std::collections::BTreeMap;

use hopfkit::algebra::pres_alg;
use hopfkit::catalog::registry::{build, list, Built};
use hopfkit::galois::verify_associativity;
use hopfkit::pres::{confluence_check, verify_normal_form, Builder, Presentation};
use hopfkit::*;

fn presentations() -> Vec<(String, std::sync::Arc<Presentation>, Window)> {
    let mut out = Vec::new();
    for s in list() {
        let item = build(s.name, &BTreeMap::new(), 1).unwrap();
        let p = match &item.built {
            Built::Hopf(h) => h.pres.clone(),
            Built::Algebra(p) => p.clone(),
            _ => continue,
        };
        out.push((s.name.to_string(), p, item.window));
    }
    out
}

#[test]
fn catalog_presentations_are_confluent() {
    for (name, p, w) in presentations() {
        let r = confluence_check(&p, w).unwrap();
        assert!(r.passed(), "{name}: {:?}", r.failures);
    }
}

#[test]
fn normal_forms_are_idempotent_and_products_associative() {
    for (name, p, _) in presentations() {
        let r = verify_normal_form(&p, Window::new(3, 1)).unwrap();
        assert!(r.passed(), "{name}: {:?}", r.witnesses);
        let r = verify_associativity(&*pres_alg(p.clone()), Window::new(3, 1)).unwrap();
        assert!(r.passed(), "{name}: {:?}", r.witnesses);
    }
}

#[test]
fn broken_rule_set_is_not_confluent() {
    // ba = ab + 1 and ca = ac, cb = 2bc: the overlap c·b·a resolves two ways
    let s = Scalar::from_int;
    let p = Builder::new("broken", 1)
        .poly("a", 1)
        .poly("b", 1)
        .poly("c", 1)
        .rule("b", "a", &[(s(1), "a b"), (s(1), "1")])
        .rule("c", "a", &[(s(1), "a c")])
        .rule("c", "b", &[(s(2), "b c")])
        .build()
        .unwrap();
    let r = confluence_check(&p, Window::new(3, 0)).unwrap();
    assert!(!r.passed());
    assert!(r.failures[0].word.contains('c'));
}

#[test]
fn power_rule_overlaps_are_checked() {
    // x² = 1 and yx = 2xy: y·x·x gives 4y one way and y the other
    let s = Scalar::from_int;
    let p = Builder::new("broken power", 1)
        .poly("x", 1)
        .poly("y", 1)
        .rule("y", "x", &[(s(2), "x y")])
        .power("x", 2, &[(s(1), "1")])
        .build()
        .unwrap();
    let r = confluence_check(&p, Window::new(3, 0)).unwrap();
    assert!(!r.passed());
    let ok = Builder::new("fine power", 1)
        .poly("x", 1)
        .poly("y", 1)
        .rule("y", "x", &[(s(-1), "x y")])
        .power("x", 2, &[(s(1), "1")])
        .build()
        .unwrap();
    assert!(confluence_check(&ok, Window::new(4, 0)).unwrap().passed());
}

#[test]
fn json_roundtrip() {
    for (name, p, w) in presentations() {
        let j = p.to_json();
        let text = serde_json::to_string(&j).unwrap();
        let back = Presentation::from_json(&serde_json::from_str(&text).unwrap()).unwrap();
        assert_eq!(serde_json::to_string(&back.to_json()).unwrap(), text, "{name}");
        let basis = p.enumerate_basis(Window::new(2, 1));
        for x in &basis {
            for y in &basis {
                assert_eq!(p.fmt_elem(&p.mul_mono(x, y).unwrap()), back.fmt_elem(&back.mul_mono(x, y).unwrap()), "{name}");
            }
        }
        let _ = w;
    }
}
