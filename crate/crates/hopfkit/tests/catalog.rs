use std::collections::BTreeMap;

use hopfkit::catalog::registry::{build, list, Built};
use hopfkit::error::Error;
use hopfkit::pres::Presentation;

fn params(kv: &[(&str, &str)]) -> BTreeMap<String, String> {
    kv.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect()
}

fn pres(b: &Built) -> &Presentation {
    match b {
        Built::Hopf(h) => &h.pres,
        Built::Algebra(p) => p,
        _ => panic!("not a presentation"),
    }
}

fn elem(p: &Presentation, terms: &[(i64, &str)]) -> String {
    let mut e = hopfkit::pres::Element::zero();
    for (c, m) in terms {
        e.add_term(p.parse_mono(m).unwrap(), hopfkit::scalar::Scalar::from_int(*c));
    }
    p.fmt_elem(&e)
}

/// x·y − y·x in normal form, printed.
fn commutator(p: &Presentation, x: &str, y: &str) -> String {
    let (a, b) = (p.parse_mono(x).unwrap(), p.parse_mono(y).unwrap());
    let xy = p.mul_mono(&a, &b).unwrap();
    let yx = p.mul_mono(&b, &a).unwrap();
    p.fmt_elem(&xy.sub(&yx))
}

#[test]
fn every_item_builds_with_defaults() {
    for s in list() {
        let item = build(s.name, &BTreeMap::new(), 1).unwrap_or_else(|e| panic!("{}: {e}", s.name));
        let j = item.to_json().unwrap();
        assert_eq!(j["item"], s.name);
    }
}

#[test]
fn deformation_examples() {
    let e = build("E_def", &params(&[("alpha", "0"), ("beta", "1"), ("lambda", "-1")]), 1).unwrap();
    let p = pres(&e.built);
    let want = elem(p, &[(1, "1"), (-1, "h^2 g^2")]);
    assert_eq!(commutator(p, "a", "b"), want);

    let a = build("A_def", &params(&[("alpha", "1"), ("beta", "0"), ("lambda", "q")]), 8).unwrap();
    let p = pres(&a.built);
    assert_eq!(commutator(p, "b", "c"), elem(p, &[(1, "1")]));

    let err = build("E_def", &params(&[("alpha", "1"), ("beta", "1"), ("lambda", "1")]), 1);
    assert!(matches!(err, Err(Error::Constraint(_))));
}

#[test]
fn parameters_are_validated() {
    assert!(matches!(build("tau_lambda", &params(&[("lambda", "0")]), 1), Err(Error::Constraint(_))));
    assert!(matches!(build("sigma_lambda", &params(&[("lambda", "0")]), 1), Err(Error::Constraint(_))));
    assert!(matches!(build("tau_xi_beta", &params(&[("xi", "2")]), 1), Err(Error::Constraint(_))));
    assert!(matches!(build("psi_zeta", &params(&[("zeta", "q^2")]), 8), Err(Error::Constraint(_))));
    assert!(matches!(build("Uq", &params(&[("ell", "1")]), 1), Err(Error::Constraint(_))));
    assert!(matches!(build("Uq", &params(&[("ell", "3")]), 4), Err(Error::Constraint(_))));
    assert!(matches!(build("nope", &params(&[]), 1), Err(Error::Unknown(_))));
    assert!(matches!(build("H", &params(&[("alpha", "1")]), 1), Err(Error::Unknown(_))));
}

#[test]
fn weyl_relation() {
    let w = build("weyl", &BTreeMap::new(), 1).unwrap();
    let p = pres(&w.built);
    assert_eq!(commutator(p, "X", "y"), elem(p, &[(1, "1")]));
}

#[test]
fn matched_pair_json_has_the_action_table() {
    let j = build("section5", &BTreeMap::new(), 1).unwrap().to_json().unwrap();
    let right = j["matched_pair"]["right_action"].as_array().unwrap();
    let gb = right.iter().find(|r| r[0] == "g" && r[1] == "b").unwrap();
    assert_eq!(gb[2], "(-1)*c");
    // stable output
    let again = build("section5", &BTreeMap::new(), 1).unwrap().to_json().unwrap();
    assert_eq!(j.to_string(), again.to_string());
}
