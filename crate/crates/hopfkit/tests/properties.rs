use hopfkit::catalog::section5::e_hopf;
use hopfkit::catalog::unrolled::uq_hopf;
use hopfkit::pres::Presentation;
use hopfkit::{Letter, Scalar};
use proptest::prelude::*;

fn cyclotomic() -> impl Strategy<Value = Scalar> {
    let q = Scalar::root(8).unwrap();
    prop::collection::vec((-5i64..=5, 1i64..=4), 4).prop_map(move |cs| {
        cs.iter().enumerate().fold(Scalar::zero(), |acc, (k, &(n, d))| &acc + &(&Scalar::from_frac(n, d) * &q.pow(k as i64).unwrap()))
    })
}

fn word(p: &Presentation, idx: &[usize]) -> Vec<Letter> {
    let ls = p.letters();
    idx.iter().map(|&i| ls[i % ls.len()]).collect()
}

proptest! {
    #[test]
    fn cyclotomic_field_laws(x in cyclotomic(), y in cyclotomic(), z in cyclotomic()) {
        prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
        prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
        if !x.is_zero() {
            prop_assert_eq!(&x * &x.inv().unwrap(), Scalar::one());
        }
    }

    #[test]
    fn normal_form_is_a_monoid_map(a in prop::collection::vec(0usize..16, 0..4), b in prop::collection::vec(0usize..16, 0..4)) {
        for h in [e_hopf().unwrap(), uq_hopf(3).unwrap()] {
            let p = h.p();
            let (wa, wb) = (word(p, &a), word(p, &b));
            let joined: Vec<Letter> = wa.iter().chain(&wb).copied().collect();
            let lhs = p.normal_form(&joined).unwrap();
            let rhs = p.mul(&p.normal_form(&wa).unwrap(), &p.normal_form(&wb).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }
}
