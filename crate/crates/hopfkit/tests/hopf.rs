use hopfkit::catalog::section5::*;
use hopfkit::catalog::unrolled::*;
use hopfkit::pres::Builder;
use hopfkit::tensor::Tensor;
use hopfkit::*;

fn int(n: i64) -> Scalar {
    Scalar::from_int(n)
}

#[test]
fn catalog_hopf_algebras_pass() {
    let w = Window::new(3, 2);
    let items = vec![
        h_hopf().unwrap(),
        u_hopf().unwrap(),
        e_hopf().unwrap(),
        e_def_hopf(&Abl::new(int(0), int(0), int(2)).unwrap()).unwrap(),
        e_def_hopf(&Abl::new(int(0), int(1), int(-1)).unwrap()).unwrap(),
        l_alpha_hopf(&int(1)).unwrap(),
        kx_hopf().unwrap(),
    ];
    for h in items {
        let r = verify_hopf(&h, w).unwrap();
        assert!(r.passed(), "{}", r.render_tree());
    }
    for ell in [2, 3] {
        for h in [uq_hopf(ell).unwrap(), l_a00_hopf(ell, &int(3)).unwrap(), unrolled_hopf(ell, &int(1)).unwrap()] {
            let r = verify_hopf(&h, Window::new(ell + 1, 1)).unwrap();
            assert!(r.passed(), "{}", r.render_tree());
        }
    }
}

#[test]
fn mutated_coproduct_fails_with_witness() {
    let e = e_hopf().unwrap();
    let p = e.p();
    let mut d = Tensor::zero();
    d.add_term(vec![p.parse_mono("a").unwrap(), p.one()], Scalar::one());
    d.add_term(vec![p.parse_mono("g").unwrap(), p.parse_mono("a").unwrap()], Scalar::one());
    let bad = e.with_delta("a", d).unwrap();
    let r = verify_hopf(&bad, Window::new(2, 1)).unwrap();
    assert!(!r.passed());
    let w = r.witnesses.iter().find(|w| w.at.contains('a')).expect("witness on a");
    assert_ne!(w.lhs, w.rhs);
}

/// E^{-1}_{0,1} with the sign of the h²g² term in ab − ba flipped.
#[test]
fn mutated_relation_fails_with_witness() {
    let s = int;
    let p = Builder::new("E_def mutated", 1)
        .poly("b", 1)
        .poly("c", 1)
        .group("h")
        .poly("a", 1)
        .group("g")
        .qcomm("h", "b", s(-1))
        .qcomm("h", "c", s(-1))
        .qcomm("g", "a", s(-1))
        .conj("g", &[("b", &[("c", s(-1))]), ("c", &[("b", s(-1))])])
        .qcomm("a", "h", s(-1))
        .commute("g", "h")
        .rule("a", "b", &[(s(1), "b a"), (s(1), "1"), (s(1), "h^2 g^2")])
        .rule("a", "c", &[(s(1), "c a"), (s(1), "1"), (s(-1), "h^2 g^2")])
        .commute("b", "c")
        .build()
        .unwrap();
    let h = e_like_hopf("E_def mutated", p).unwrap();
    let r = verify_hopf(&h, Window::new(2, 2)).unwrap();
    assert!(!r.passed());
    assert!(r.witnesses.iter().any(|w| w.check.starts_with("delta-multiplicative") && w.at.contains('a') && w.at.contains('b')), "{:?}", r.witnesses);
}

#[test]
fn l_alpha_needs_h_to_the_fourth() {
    let bad = h_like_hopf("L_alpha h^2", l_alpha_h2_pres(&int(1)).unwrap()).unwrap();
    assert!(!verify_hopf(&bad, Window::new(2, 2)).unwrap().passed());
}

#[test]
fn coproduct_of_b_squared() {
    let h = h_hopf().unwrap();
    let p = h.p();
    let d = h.delta_mono(&p.parse_mono("b^2").unwrap()).unwrap();
    let mut e = Tensor::zero();
    e.add_term(vec![p.parse_mono("b^2").unwrap(), p.one()], Scalar::one());
    // (b⊗1)(h²⊗b) + (h²⊗b)(b⊗1) = (bh² + h²b)⊗b = 2 b h² ⊗ b
    e.add_term(vec![p.parse_mono("b h^2").unwrap(), p.parse_mono("b").unwrap()], int(2));
    e.add_term(vec![p.parse_mono("h^4").unwrap(), p.parse_mono("b^2").unwrap()], Scalar::one());
    assert_eq!(d, e, "{}", h.fmt_tensor(&d));
}
