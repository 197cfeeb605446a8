use std::collections::BTreeMap;
use std::sync::Arc;

use hopfkit::algebra::presentation_match;
use hopfkit::bicrossed::{bicrossed_presentation, verify_matched_pair, MatchedPair};
use hopfkit::catalog::forms::*;
use hopfkit::catalog::section5::*;
use hopfkit::deform::*;
use hopfkit::form::{exp_form, Closed, FormRef};
use hopfkit::pres::Monomial;
use hopfkit::*;

fn q8() -> Scalar {
    Scalar::root(8).unwrap()
}

fn seeds_of(f: &FormRef, mp: &MatchedPair) -> BTreeMap<(Letter, Letter), Scalar> {
    let (ph, pu) = (mp.h.p(), mp.u.p());
    let mut out = BTreeMap::new();
    for k in ph.letters() {
        for l in pu.letters() {
            out.insert((k, l), f.eval_mono(&ph.letter_mono(k), &pu.letter_mono(l)).unwrap());
        }
    }
    out
}

#[test]
fn sigma_alpha_is_a_cocycle_and_an_exponential() {
    let h = h_hopf().unwrap();
    let w = Window::new(4, 2);
    for alpha in [Scalar::one(), Scalar::from_frac(-3, 2)] {
        let s = sigma_alpha(h.clone(), &alpha).unwrap();
        let r = verify_cocycle(&s, w).unwrap();
        assert!(r.passed(), "{:?}", r.witnesses);
        let e = exp_form(eta_alpha(h.clone(), &alpha).unwrap(), 4);
        let c = compare_forms(&*s, &*e, w).unwrap();
        assert!(c.passed(), "{:?}", c.witnesses);
    }
}

fn mutated(name: &str, flip: impl Fn(&Monomial, &Monomial) -> bool + Send + Sync + 'static) -> FormRef {
    let h = h_hopf().unwrap();
    let good = sigma_alpha(h.clone(), &Scalar::one()).unwrap();
    Closed::new(name, h.clone(), h, move |x: &Monomial, y: &Monomial| {
        let v = good.eval_mono(x, y)?;
        Ok(if flip(x, y) { -v } else { v })
    })
}

#[test]
fn sigma_alpha_mutations() {
    let w = Window::new(3, 1);
    // without (−1)^m the form is symmetric in b, c and still a cocycle
    let r = verify_cocycle(&mutated("no_m_sign", |x, _| x.0[1] % 2 != 0), w).unwrap();
    assert!(r.passed());
    let r = verify_cocycle(&mutated("no_p_sign", |x, _| (x.0[2] * (x.0[0] + x.0[1])) % 2 != 0), w).unwrap();
    assert!(!r.passed());
    let wit = r.witnesses.iter().find(|w| w.check == "cocycle-identity").unwrap();
    assert!(wit.at.contains('c') && wit.at.contains('b'), "{wit:?}");
}

#[test]
fn pairings_and_deformed_products() {
    let mp = section5_pair().unwrap();
    let w = Window::new(3, 2);
    let cases: Vec<(FormRef, Abl)> = vec![
        (tau_lambda(mp.h.clone(), mp.u.clone(), &Scalar::from_int(2)), Abl::new(Scalar::zero(), Scalar::zero(), Scalar::from_int(2)).unwrap()),
        (tau_lambda(mp.h.clone(), mp.u.clone(), &q8()), Abl::new(Scalar::zero(), Scalar::zero(), q8()).unwrap()),
        (tau_xi_beta(mp.h.clone(), mp.u.clone(), &Scalar::one(), &Scalar::from_frac(1, 3)), Abl::new(Scalar::zero(), Scalar::from_frac(1, 3), Scalar::one()).unwrap()),
        (tau_xi_beta(mp.h.clone(), mp.u.clone(), &Scalar::from_int(-1), &Scalar::one()), Abl::new(Scalar::zero(), Scalar::one(), Scalar::from_int(-1)).unwrap()),
    ];
    for (tau, abl) in cases {
        let r = verify_skew_pairing(&mp, &tau, w).unwrap();
        assert!(r.passed(), "{}: {:?}", tau.name(), r.witnesses);
        let dp = deformed_actions(&mp, &tau, None, None).unwrap();
        let r = verify_matched_pair(&dp, Window::new(2, 1)).unwrap();
        assert!(r.passed(), "{}: {:?}", tau.name(), r.witnesses);
        let found = bicrossed_presentation(&dp, "deformed").unwrap();
        let expected = deformation_pres(&abl, false, HaReading::Computed).unwrap();
        let m = presentation_match(&found, &expected).unwrap();
        assert!(m.passed(), "{}: {:?}", tau.name(), m.witnesses);
    }
}

#[test]
fn tau_xi_beta_needs_xi_squared_one() {
    let mp = section5_pair().unwrap();
    let tau = tau_xi_beta(mp.h.clone(), mp.u.clone(), &q8(), &Scalar::one());
    let r = verify_skew_pairing(&mp, &tau, Window::new(2, 1)).unwrap();
    assert!(!r.passed());
}

#[test]
fn tau_hat_is_a_cocycle() {
    let mp = section5_pair().unwrap();
    let e = e_hopf().unwrap();
    let tau = tau_xi_beta(mp.h.clone(), mp.u.clone(), &Scalar::one(), &Scalar::from_int(2));
    let th = tau_hat(&tau, e.clone()).unwrap();
    let r = verify_cocycle(&th, Window::new(3, 1)).unwrap();
    assert!(r.passed(), "{:?}", r.witnesses);
    let ep = e.p();
    let v = th.eval_mono(&ep.parse_mono("a").unwrap(), &ep.parse_mono("b").unwrap()).unwrap();
    assert_eq!(v, Scalar::from_int(2));
}

#[test]
fn extension_from_generators() {
    let mp = section5_pair().unwrap();
    let w = Window::new(3, 2);
    let tau = tau_xi_beta(mp.h.clone(), mp.u.clone(), &Scalar::one(), &Scalar::from_frac(2, 5));
    let (ext, rep) = extend_pairing_from_generators("ext", seeds_of(&tau, &mp), &mp, w).unwrap();
    assert!(rep.passed(), "{:?}", rep.all_witnesses());
    assert!(compare_forms(&*ext, &*tau, w).unwrap().passed());

    let eps = hopfkit::form::counit_form(mp.h.clone(), mp.u.clone());
    let (ext, rep) = extend_pairing_from_generators("eps", seeds_of(&eps, &mp), &mp, w).unwrap();
    assert!(rep.passed());
    assert!(compare_forms(&*ext, &*eps, w).unwrap().passed());

    let mut bad = seeds_of(&tau, &mp);
    let (ph, pu) = (mp.h.p(), mp.u.p());
    let a = Letter::new(pu.gen_index("a").unwrap());
    bad.insert((Letter::new(ph.gen_index("b").unwrap()), a), Scalar::one());
    bad.insert((Letter::new(ph.gen_index("c").unwrap()), a), Scalar::zero());
    let (_, rep) = extend_pairing_from_generators("clash", bad, &mp, w).unwrap();
    assert!(!rep.passed());
}

#[test]
fn counit_forms_are_trivial() {
    let h = h_hopf().unwrap();
    let eps = hopfkit::form::counit_form(h.clone(), h.clone());
    assert!(verify_cocycle(&eps, Window::new(3, 1)).unwrap().passed());
    let mp = section5_pair().unwrap();
    let eps = hopfkit::form::counit_form(mp.h.clone(), mp.u.clone());
    let dp = deformed_actions(&mp, &eps, None, None).unwrap();
    let found = bicrossed_presentation(&dp, "E").unwrap();
    assert!(presentation_match(&found, &e_pres().unwrap()).unwrap().passed());
    let _ = Arc::clone(&mp);
}
