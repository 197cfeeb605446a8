use hopfkit::algebra::presentation_match;
use hopfkit::bicrossed::*;
use hopfkit::catalog::section5::*;
use hopfkit::{verify_hopf, Element, Monomial, Scalar, Window};

#[test]
fn section5_pair_verifies_and_builds_e() {
    let mp = section5_pair().unwrap();
    let w = Window::new(3, 2);
    let r = verify_matched_pair(&mp, w).unwrap();
    assert!(r.passed(), "{:#?}", r.witnesses);
    assert!(verify_action_zero(&mp, w).unwrap().passed());
    let e = bicrossed_product(&mp).unwrap();
    let m = presentation_match(e.p(), &e_pres().unwrap()).unwrap();
    assert!(m.passed(), "{:#?}", m.witnesses);
    assert!(verify_hopf(&e, Window::new(3, 2)).unwrap().passed());
}

#[test]
fn omega_values() {
    let mp = section5_pair().unwrap();
    let (ph, pu) = (mp.h.p(), mp.u.p());
    let w = mp.omega_mono(&pu.parse_mono("g").unwrap(), &ph.parse_mono("b").unwrap()).unwrap();
    let expect = hopfkit::Lin::term(vec![ph.parse_mono("c").unwrap(), pu.parse_mono("g").unwrap()], Scalar::from_int(-1));
    assert_eq!(w, expect);
    let w = mp.omega_mono(&pu.parse_mono("a").unwrap(), &ph.parse_mono("h").unwrap()).unwrap();
    let expect = hopfkit::Lin::term(vec![ph.parse_mono("h").unwrap(), pu.parse_mono("a").unwrap()], Scalar::from_int(-1));
    assert_eq!(w, expect);
}

#[test]
fn reverse_roundtrip_and_match() {
    let mp = section5_pair().unwrap();
    let w = Window::new(2, 1);
    assert!(verify_double_reverse(&mp, w).unwrap().passed());
    let e = bicrossed_product(&mp).unwrap();
    let r = verify_reverse_match(&mp, &e, w).unwrap();
    assert!(r.passed(), "{:#?}", r.witnesses);
}

#[test]
fn trivial_pair_is_tensor_product() {
    let mp = trivial_pair(h_hopf().unwrap(), u_hopf().unwrap());
    assert!(verify_matched_pair(&mp, Window::new(2, 1)).unwrap().passed());
    let rev = reverse_pair(&mp).unwrap();
    assert!(verify_matched_pair(&rev, Window::new(2, 1)).unwrap().passed());
}

#[test]
fn mutated_action_fails() {
    let mp = section5_pair().unwrap();
    let (ph, pu) = (mp.h.p(), mp.u.p());
    let bad = override_right(&mp, pu.parse_mono("g").unwrap(), ph.parse_mono("b").unwrap(), Element::basis(ph.parse_mono("c").unwrap()));
    let r = verify_matched_pair(&bad, Window::new(3, 2)).unwrap();
    assert!(!r.passed());
    let _ = Monomial(vec![]);
}
