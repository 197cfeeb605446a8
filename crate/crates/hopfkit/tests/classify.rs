use hopfkit::catalog::forms::{psi_zeta, sigma_alpha, tau_lambda, tau_xi_beta};
use hopfkit::catalog::section5::section5_pair;
use hopfkit::classify::{
    check_family, classify_target, generate_constraints, normalize, parse_assumption, poly_eval, values_of,
    vanishing_conditions, ResidualSystem, SymForm, Target,
};
use hopfkit::pres::Window;
use hopfkit::scalar::Scalar;

fn int(n: i64) -> Scalar {
    Scalar::from_int(n)
}

fn skew() -> (SymForm, ResidualSystem) {
    let sym = SymForm::new(section5_pair().unwrap(), Target::SkewPairing, None).unwrap();
    let sys = generate_constraints(&sym, Window::new(3, 2)).unwrap();
    (sym, sys)
}

fn canon(sys: &ResidualSystem, s: &str) -> String {
    let p = sys.parse_poly(s, 1).unwrap();
    sys.fmt_poly(&normalize(sys.u.as_ref().unwrap(), &p).unwrap())
}

#[test]
fn skew_pairing_residuals() {
    let (_, sys) = skew();
    assert_eq!(sys.forced_zero, ["t_bg", "t_cg", "t_ha"]);
    assert!(sys.contains(&sys.parse_poly("t_ba*lambda^2 - t_ba", 1).unwrap()).unwrap());
    assert!(sys.contains(&sys.parse_poly("t_ca*lambda^2 - t_ca", 1).unwrap()).unwrap());
    assert!(sys.contains(&sys.parse_poly("t_ca - t_ba*lambda^2", 1).unwrap()).unwrap());
    // not a consequence without assumptions
    assert!(!sys.contains(&sys.parse_poly("t_ca - t_ba", 1).unwrap()).unwrap());
}

#[test]
fn skew_pairing_branches() {
    let (sym, sys) = skew();
    let u = &sym.unknowns;

    let b = vanishing_conditions(&sys, &[parse_assumption(u, "t_ba=0", 1).unwrap()]).unwrap();
    let rem: Vec<&str> = b.remaining.iter().map(|(p, _)| p.as_str()).collect();
    assert!(rem.contains(&"t_ca"), "{rem:?}");
    let b = vanishing_conditions(&sys, &[parse_assumption(u, "t_ba=0", 1).unwrap(), parse_assumption(u, "t_ca=0", 1).unwrap()]).unwrap();
    assert!(b.remaining.is_empty() && b.contradictions.is_empty(), "{b:?}");

    let b = vanishing_conditions(&sys, &[parse_assumption(u, "lambda^2=1", 1).unwrap()]).unwrap();
    let want = canon(&sys, "t_ca - t_ba");
    assert!(b.remaining.iter().any(|(p, _)| *p == want), "{:?}", b.remaining);
    assert!(b.contradictions.is_empty());

    // λ = 1, τ(b,a) = τ(c,a) = β: τ(b^n, a^n) = n! β^n
    let a = [parse_assumption(u, "lambda=1", 1).unwrap(), parse_assumption(u, "t_ca=t_ba", 1).unwrap()];
    let b = vanishing_conditions(&sys, &a).unwrap();
    assert!(b.remaining.is_empty() && b.contradictions.is_empty(), "{b:?}");
    let (ph, pu) = (sym.mp.h.p(), sym.mp.u.p());
    for n in 1..=3i64 {
        let v = sym.value(&ph.parse_mono(&format!("b^{n}")).unwrap(), &pu.parse_mono(&format!("a^{n}")).unwrap()).unwrap();
        for beta in [int(2), Scalar::from_frac(-1, 3)] {
            let mut point = vec![int(0); u.len()];
            point[u.index("t_ba").unwrap()] = beta.clone();
            point[u.index("t_ca").unwrap()] = beta.clone();
            point[u.index("lambda").unwrap()] = int(1);
            assert_eq!(poly_eval(&v, &point).unwrap(), Scalar::factorial(n as u64) * beta.pow(n).unwrap());
        }
    }
}

#[test]
fn catalog_pairings_satisfy_the_system() {
    let (sym, sys) = skew();
    let (h, u) = (sym.mp.h.clone(), sym.mp.u.clone());
    let lambdas = [int(1), int(-1), int(2), Scalar::from_frac(1, 2), int(3)];
    let samples: Vec<_> = lambdas
        .iter()
        .map(|l| (format!("lambda={l}"), values_of(&sym, &tau_lambda(h.clone(), u.clone(), l)).unwrap()))
        .collect();
    assert!(check_family(&sys, "tau_lambda", &samples).unwrap().passed());

    let betas = [int(0), int(1), int(-1), Scalar::from_frac(1, 2), int(3)];
    for xi in [int(1), int(-1)] {
        let samples: Vec<_> = betas
            .iter()
            .map(|b| (format!("beta={b}"), values_of(&sym, &tau_xi_beta(h.clone(), u.clone(), &xi, b)).unwrap()))
            .collect();
        assert!(check_family(&sys, "tau_xi_beta", &samples).unwrap().passed());
    }

    // τ(c,a) = τ(b,a) + 1 is not a skew pairing
    let i = sym.unknowns.index("t_ca").unwrap();
    let samples: Vec<_> = betas
        .iter()
        .map(|b| {
            let mut v = values_of(&sym, &tau_xi_beta(h.clone(), u.clone(), &int(1), b)).unwrap();
            v[i] = &v[i] + &int(1);
            (format!("beta={b}"), v)
        })
        .collect();
    let rep = check_family(&sys, "tau_xi_beta perturbed", &samples).unwrap();
    assert!(!rep.passed());
    assert!(!rep.all_witnesses().is_empty());
}

#[test]
fn psi_residuals_and_branches() {
    let sys = classify_target(Target::Psi, Window::new(3, 2), &int(1)).unwrap();
    assert_eq!(sys.forced_zero, ["p_bg", "p_cg", "p_ha"]);
    // 1 - (-1)^{qd} ζ^{4qd} for d = 1, q = 1, 2
    assert!(sys.contains(&sys.parse_poly("1 + zeta^4", 1).unwrap()).unwrap());
    assert!(sys.implies(&sys.parse_poly("1 - zeta^8", 1).unwrap()).unwrap());
    assert!(!sys.implies(&sys.parse_poly("1 - zeta^4", 1).unwrap()).unwrap());
    assert!(sys.contains(&sys.parse_poly("p_ba*zeta^2 - p_ba", 1).unwrap()).unwrap());

    let u = sys.u.as_ref().unwrap();
    let b = vanishing_conditions(&sys, &[parse_assumption(u, "zeta^2=1", 1).unwrap()]).unwrap();
    assert!(!b.contradictions.is_empty());
    let (p, at) = &b.contradictions[0];
    assert_eq!(p, "2");
    // the instance pairs b h^r with c h^s
    let slots: Vec<&str> = at.trim_start_matches("h-product (").split(", ").collect();
    let mut firsts: Vec<char> = slots[..2].iter().map(|s| s.chars().next().unwrap()).collect();
    firsts.sort();
    assert_eq!(firsts, ['b', 'c'], "{at}");

    let b = vanishing_conditions(&sys, &[parse_assumption(u, "zeta^4=-1", 1).unwrap()]).unwrap();
    let rem: Vec<&str> = b.remaining.iter().map(|(p, _)| p.as_str()).collect();
    assert!(rem.contains(&"p_ba") && rem.contains(&"p_ca"), "{rem:?}");
    assert!(b.contradictions.is_empty());
}

#[test]
fn psi_zeta_satisfies_the_system() {
    let mp = section5_pair().unwrap();
    let q8 = Scalar::root(8).unwrap();
    let points = [(int(1), q8.clone()), (int(2), q8.pow(3).unwrap()), (int(-1), q8.pow(5).unwrap()), (Scalar::from_frac(1, 2), q8.pow(7).unwrap()), (int(3), q8.clone())];
    for (alpha, zeta) in points {
        let s = sigma_alpha(mp.h.clone(), &alpha).unwrap();
        let sym = SymForm::new(mp.clone(), Target::Psi, Some(s)).unwrap();
        let sys = generate_constraints(&sym, Window::new(3, 1)).unwrap();
        let v = values_of(&sym, &psi_zeta(mp.h.clone(), mp.u.clone(), &zeta)).unwrap();
        let rep = check_family(&sys, "psi_zeta", &[(format!("alpha={alpha}, zeta={zeta}"), v.clone())]).unwrap();
        assert!(rep.passed(), "{}", rep.render_tree());
        // ζ = q8^2 is not allowed
        let mut bad = v;
        bad[sym.unknowns.index("zeta").unwrap()] = q8.pow(2).unwrap();
        assert!(!check_family(&sys, "psi_zeta", &[("zeta=q^2".into(), bad)]).unwrap().passed());
    }
}

#[test]
fn assumptions_are_validated() {
    let (sym, _) = skew();
    let u = &sym.unknowns;
    assert!(parse_assumption(u, "lambda=0", 1).is_err());
    assert!(parse_assumption(u, "t_ba*t_ca=1", 1).is_err());
    assert!(parse_assumption(u, "t_ba", 1).is_err());
    assert!(parse_assumption(u, "t_xx=1", 1).is_err());
}
