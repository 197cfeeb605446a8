use std::time::Instant;

use hopfkit::catalog::semidirect::*;
use hopfkit::catalog::unrolled::*;
use hopfkit::*;

#[test]
fn action_needs_b_and_c_zero() {
    for ell in [2u32, 3] {
        let b = Scalar::from_frac(1, 2);
        let p = a_abc_pres(ell, &Scalar::one(), &b, &Scalar::zero()).unwrap();
        let r = verify_derivation(&a_derivation(p.clone(), 1).unwrap()).unwrap();
        assert!(!r.passed());
        // X·(e^ℓ) = 2ℓ e^ℓ = 2ℓ·b while X·b = 0
        let wit = &r.all_witnesses()[0];
        let expected = hopfkit::pres::Element::term(p.one(), &Scalar::from_int(2 * ell as i64) * &b);
        assert_eq!(wit.lhs, p.fmt_elem(&expected), "{wit:?}");
        assert_eq!(wit.rhs, "0");
        let p = a_abc_pres(ell, &Scalar::one(), &Scalar::zero(), &Scalar::from_int(3)).unwrap();
        assert!(!verify_derivation(&a_derivation(p, 1).unwrap()).unwrap().passed());
        let p = a_abc_pres(ell, &Scalar::one(), &Scalar::zero(), &Scalar::zero()).unwrap();
        assert!(verify_derivation(&a_derivation(p, 1).unwrap()).unwrap().passed());
    }
}

#[test]
fn unrolled_pipeline() {
    for ell in [2u32, 3] {
        let t = Instant::now();
        let r = verify_unrolled(ell, &Scalar::one(), &Scalar::zero(), &Scalar::zero(), &Scalar::one(), Window::new(3, 1)).unwrap();
        assert!(r.passed(), "{}\n{:#?}", r.summary_line(), r.all_witnesses());
        eprintln!("{}{:?}", r.render_tree(), t.elapsed());
    }
}

#[test]
fn zero_lambda_is_rejected() {
    assert!(unrolled_setup(3, &Scalar::one(), &Scalar::zero(), 1).is_err());
}
