use std::time::Instant;

use hopfkit::catalog::corollary::*;
use hopfkit::*;

fn q8() -> Scalar {
    Scalar::root(8).unwrap()
}

fn run(case: Case) {
    let t = Instant::now();
    let r = verify_corollary(&case, Window::new(2, 1)).unwrap();
    assert!(r.passed(), "{}\n{:#?}", r.summary_line(), r.all_witnesses());
    eprintln!("{}{:?}", r.render_tree(), t.elapsed());
}

#[test]
fn case_1a() {
    run(Case::OneA { lambda: Scalar::from_int(2) });
    run(Case::OneA { lambda: q8() });
}

#[test]
fn case_1b() {
    for beta in [1, -1] {
        for xi in [1, -1] {
            run(Case::OneB { beta: Scalar::from_int(beta), xi: Scalar::from_int(xi) });
        }
    }
}

#[test]
fn case_2a() {
    run(Case::TwoA { alpha: Scalar::one(), zeta: q8() });
}

#[test]
fn case_2b() {
    run(Case::TwoB { beta: Scalar::one(), lambda: Scalar::one() });
}

#[test]
fn wrong_parameters_are_caught() {
    use hopfkit::algebra::{cocycle_left, pres_alg, presentation_match, twisted_tensor, Extraction};
    use hopfkit::bicrossed::bicrossed_presentation;
    use hopfkit::catalog::forms::*;
    use hopfkit::catalog::section5::*;
    use hopfkit::deform::deformed_actions;
    use hopfkit::galois::theta_from_psi;

    let mp = section5_pair().unwrap();
    let tau = tau_lambda(mp.h.clone(), mp.u.clone(), &Scalar::from_int(2));
    let found = bicrossed_presentation(&deformed_actions(&mp, &tau, None, None).unwrap(), "E").unwrap();
    let wrong = Abl::new(Scalar::zero(), Scalar::zero(), Scalar::from_int(3)).unwrap();
    assert!(!presentation_match(&found, &deformation_pres(&wrong, false, HaReading::Computed).unwrap()).unwrap().passed());

    let s = sigma_alpha(mp.h.clone(), &Scalar::one()).unwrap();
    let psi = psi_zeta(mp.h.clone(), mp.u.clone(), &q8());
    let th = theta_from_psi(mp.clone(), psi, cocycle_left(mp.h.clone(), s), pres_alg(mp.u.pres.clone()));
    let ext = Extraction::new(twisted_tensor(th), "A").unwrap();
    let wrong = Abl::new(Scalar::from_int(-1), Scalar::zero(), q8()).unwrap();
    assert!(!presentation_match(&ext.pres, &deformation_pres(&wrong, true, HaReading::Computed).unwrap()).unwrap().passed());
    assert!(Case::TwoA { alpha: Scalar::zero(), zeta: q8() }.abl().is_err());
}
