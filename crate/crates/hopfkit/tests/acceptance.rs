//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use hopfkit::algebra::{cocycle_left, pres_alg, presentation_match, TwistRef};
use hopfkit::bicrossed::*;
use hopfkit::catalog::corollary::{verify_corollary, Case};
use hopfkit::catalog::forms::*;
use hopfkit::catalog::registry::{build, list, Built};
use hopfkit::catalog::section5::*;
use hopfkit::catalog::semidirect::verify_unrolled;
use hopfkit::catalog::unrolled::*;
use hopfkit::classify::*;
use hopfkit::deform::*;
use hopfkit::form::{convolution_inverse, exp_form, FormRef};
use hopfkit::galois::*;
use hopfkit::pres::{confluence_check, verify_normal_form};
use hopfkit::tensor::Tensor;
use hopfkit::*;

fn int(n: i64) -> Scalar {
    Scalar::from_int(n)
}

fn q8() -> Scalar {
    Scalar::root(8).unwrap()
}

/// Collected failures of one criterion.
#[derive(Default)]
struct Tally {
    checks: usize,
    fails: Vec<String>,
}

impl Tally {
    fn check(&mut self, what: impl Into<String>, ok: bool) {
        self.checks += 1;
        if !ok {
            self.fails.push(what.into());
        }
    }

    fn report(&mut self, what: &str, r: &Report) {
        self.check(format!("{what}: {}", r.summary_line()), r.passed());
    }

    /// `r` must fail and name at least one witness.
    fn refuted(&mut self, what: &str, r: &Report) {
        let ok = !r.passed() && !r.all_witnesses().is_empty();
        self.check(format!("{what}: expected a failure with witness, got {}", r.summary_line()), ok);
    }

    fn within(&mut self, what: &str, t: Instant, limit: Duration) {
        let e = t.elapsed();
        self.check(format!("{what}: {e:?} over {limit:?}"), e <= limit);
    }
}

fn c1_verify_hopf(t: &mut Tally) -> Result<()> {
    let limit = Duration::from_secs(30);
    let mut items: Vec<(Arc<HopfData>, Window)> = vec![
        (h_hopf()?, Window::new(4, 4)),
        (u_hopf()?, Window::new(4, 4)),
        (e_hopf()?, Window::new(4, 4)),
        (e_def_hopf(&Abl::new(int(0), int(0), int(2))?)?, Window::new(4, 4)),
        (e_def_hopf(&Abl::new(int(0), int(1), int(-1))?)?, Window::new(4, 4)),
        (e_def_hopf(&Abl::new(int(1), int(0), q8())?)?, Window::new(4, 4)),
        (l_alpha_hopf(&int(1))?, Window::new(4, 4)),
    ];
    for ell in [2u32, 3] {
        items.push((uq_hopf(ell)?, Window::new(2 * ell, 2)));
        items.push((l_a00_hopf(ell, &int(1))?, Window::new(2 * ell, 2)));
    }
    for (h, w) in items {
        let t0 = Instant::now();
        let r = verify_hopf(&h, w)?;
        t.report(&h.name, &r);
        t.within(&h.name, t0, limit);
    }

    // Δ(a) = a⊗1 + g⊗a
    let e = e_hopf()?;
    let p = e.p();
    let mut d = Tensor::zero();
    d.add_term(vec![p.parse_mono("a")?, p.one()], Scalar::one());
    d.add_term(vec![p.parse_mono("g")?, p.parse_mono("a")?], Scalar::one());
    t.refuted("E with mutated coproduct", &verify_hopf(&*e.with_delta("a", d)?, Window::new(2, 1))?);
    // bc − cb = α(1 − h²)
    let bad = h_like_hopf("L_alpha h^2", l_alpha_h2_pres(&int(1))?)?;
    t.refuted("L_alpha with h^2", &verify_hopf(&bad, Window::new(2, 2))?);
    // bc − cb = 1 is not a Hopf ideal
    let bad = h_like_hopf("H_alpha", h_alpha_pres(&int(1))?)?;
    t.refuted("H_alpha as a Hopf algebra", &verify_hopf(&bad, Window::new(2, 2))?);
    Ok(())
}

fn c2_matched_pair(t: &mut Tally) -> Result<()> {
    let mp = section5_pair()?;
    let w = Window::new(3, 2);
    let r = verify_matched_pair(&mp, w)?;
    t.report("section5", &r);
    t.check("symmetry sub-check ran", r.subchecks.iter().any(|s| s.name.contains("symm") && s.checked > 0));
    t.report("action-zero", &verify_action_zero(&mp, w)?);
    let found = bicrossed_presentation(&mp, "H⋈U")?;
    t.report("bicrossed product is E", &presentation_match(&found, &*e_pres()?)?);
    t.report("reverse roundtrip", &verify_double_reverse(&mp, w)?);
    let e = bicrossed_product(&mp)?;
    t.report("reverse match", &verify_reverse_match(&mp, &e, Window::new(2, 1))?);
    Ok(())
}

fn c3_forms(t: &mut Tally) -> Result<()> {
    let mp = section5_pair()?;
    let (h, u) = (mp.h.clone(), mp.u.clone());
    let w4 = Window::new(4, 2);
    for alpha in [int(1), Scalar::from_frac(-3, 2)] {
        let s = sigma_alpha(h.clone(), &alpha)?;
        t.report(&format!("sigma_alpha={alpha} cocycle"), &verify_cocycle(&s, w4)?);
        let e = exp_form(eta_alpha(h.clone(), &alpha)?, 4);
        t.report(&format!("sigma_alpha={alpha} = exp eta"), &compare_forms(&*s, &*e, w4)?);
    }
    let w = Window::new(3, 2);
    let mut pairings: Vec<FormRef> = vec![tau_lambda(h.clone(), u.clone(), &int(2)), tau_lambda(h.clone(), u.clone(), &q8())];
    for xi in [1, -1] {
        pairings.push(tau_xi_beta(h.clone(), u.clone(), &int(xi), &Scalar::from_frac(1, 3)));
    }
    for tau in &pairings {
        t.report(&tau.name(), &verify_skew_pairing(&mp, tau, w)?);
    }
    let e = e_hopf()?;
    let th = tau_hat(&pairings[2], e)?;
    t.report("tau_hat cocycle on E", &verify_cocycle(&th, Window::new(3, 1))?);

    let psi = psi_zeta(h.clone(), u.clone(), &q8());
    let mut inverses = vec![sigma_alpha(h.clone(), &int(1))?, psi.clone()];
    inverses.extend(pairings[2..].iter().cloned());
    for f in &inverses {
        t.report(&format!("{} inverse", f.name()), &verify_convolution_inverse(f, w)?);
    }
    for tau_trivial in [true, false] {
        let c = psi_inverse_closed(&mp, &psi, tau_trivial);
        t.report("closed psi inverse", &compare_forms(&*c, &*convolution_inverse(psi.clone()), w)?);
    }
    Ok(())
}

fn c4_corollary(t: &mut Tally) -> Result<()> {
    let limit = Duration::from_secs(60);
    let mut cases = vec![Case::OneA { lambda: int(2) }, Case::OneA { lambda: q8() }];
    for beta in [1, -1] {
        for xi in [1, -1] {
            cases.push(Case::OneB { beta: int(beta), xi: int(xi) });
        }
    }
    cases.push(Case::TwoA { alpha: int(1), zeta: q8() });
    cases.push(Case::TwoB { beta: int(1), lambda: int(1) });
    for case in cases {
        let t0 = Instant::now();
        let r = verify_corollary(&case, Window::new(2, 1))?;
        let what = format!("case {} {:?}", case.label(), case);
        t.report(&what, &r);
        t.within(&what, t0, limit);
    }
    Ok(())
}

fn c5_kappa(t: &mut Tally) -> Result<()> {
    for h in [h_hopf()?, u_hopf()?, e_hopf()?] {
        let co = regular_comodule(pres_alg(h.pres.clone()), h.clone());
        let (k, rep) = solve_kappa_letters(&co, KappaSearch::default())?;
        t.report(&format!("solve kappa {}", h.name), &rep);
        let w = if h.name == "E" { Window::new(2, 1) } else { Window::new(3, 2) };
        t.report(&format!("kappa {} is the antipode form", h.name), &compare_kappa(&*k, &*antipode_kappa(&h)?, w)?);
    }

    let mp = section5_pair()?;
    let h = mp.h.clone();
    let co = regular_comodule(cocycle_left(h.clone(), sigma_alpha(h.clone(), &int(1))?), h.clone());
    let (k, rep) = solve_kappa_letters(&co, KappaSearch::default())?;
    t.report("solve kappa H_alpha", &rep);
    t.report("kappa H_alpha over H", &verify_kappa(&*co, &*k, Window::new(3, 1))?);

    let e = e_hopf()?;
    let tau = tau_lambda(mp.h.clone(), mp.u.clone(), &int(2));
    let (a, r) = (pres_alg(mp.h.pres.clone()), pres_alg(mp.u.pres.clone()));
    let th: TwistRef = theta_from_psi(mp.clone(), tau, a, r);
    let ca = regular_comodule(th.a().clone(), mp.h.clone());
    let cr = regular_comodule(th.r().clone(), mp.u.clone());
    let cert = galois_certificate(&th, &ca, &cr, &e, Window::new(2, 1), KappaSearch::default())?;
    t.report("A^lambda over E", &cert);
    let direct = cert.children.iter().find(|c| c.check == "compare-kappa" && c.item.contains("kappa_bicrossed"));
    t.check("kappa_bicrossed compared with the direct solve", direct.is_some_and(|c| c.passed()));
    Ok(())
}

fn c6_classify(t: &mut Tally) -> Result<()> {
    let mp = section5_pair()?;
    let sym = SymForm::new(mp.clone(), Target::SkewPairing, None)?;
    let sys = generate_constraints(&sym, Window::new(3, 2))?;
    let u = &sym.unknowns;
    t.check(format!("forced zeros {:?}", sys.forced_zero), sys.forced_zero == ["t_bg", "t_cg", "t_ha"]);
    for s in ["t_ba*lambda^2 - t_ba", "t_ca*lambda^2 - t_ca", "t_ca - t_ba*lambda^2"] {
        t.check(format!("residual {s}"), sys.contains(&sys.parse_poly(s, 1)?)?);
    }
    let b = vanishing_conditions(&sys, &[parse_assumption(u, "t_ba=0", 1)?])?;
    t.check("t_ba=0 leaves t_ca", b.remaining.iter().any(|(p, _)| p == "t_ca"));
    let b = vanishing_conditions(&sys, &[parse_assumption(u, "lambda^2=1", 1)?])?;
    let want = sys.fmt_poly(&normalize(u, &sys.parse_poly("t_ca - t_ba", 1)?)?);
    t.check("lambda^2=1 leaves t_ca - t_ba", b.remaining.iter().any(|(p, _)| *p == want));

    let (h, uu) = (mp.h.clone(), mp.u.clone());
    let samples = |f: &dyn Fn(&Scalar) -> FormRef, xs: &[Scalar]| -> Result<Vec<(String, Vec<Scalar>)>> {
        xs.iter().map(|x| Ok((x.to_string(), values_of(&sym, &f(x))?))).collect()
    };
    let lambdas = [int(1), int(-1), int(2), Scalar::from_frac(1, 2), int(3)];
    let s = samples(&|l| tau_lambda(h.clone(), uu.clone(), l), &lambdas)?;
    t.report("tau_lambda family", &check_family(&sys, "tau_lambda", &s)?);
    let betas = [int(0), int(1), int(-1), Scalar::from_frac(1, 2), int(3)];
    for xi in [int(1), int(-1)] {
        let s = samples(&|b| tau_xi_beta(h.clone(), uu.clone(), &xi, b), &betas)?;
        t.report("tau_xi_beta family", &check_family(&sys, "tau_xi_beta", &s)?);
    }

    let psys = classify_target(Target::Psi, Window::new(3, 2), &int(1))?;
    t.check(format!("psi forced zeros {:?}", psys.forced_zero), psys.forced_zero == ["p_bg", "p_cg", "p_ha"]);
    t.check("residual 1 + zeta^4", psys.contains(&psys.parse_poly("1 + zeta^4", 1)?)?);
    t.check("1 - zeta^8 implied", psys.implies(&psys.parse_poly("1 - zeta^8", 1)?)?);
    let pu = psys.u.as_ref().expect("psi unknowns");
    let b = vanishing_conditions(&psys, &[parse_assumption(pu, "zeta^2=1", 1)?])?;
    t.check("zeta^2=1 is contradictory", !b.contradictions.is_empty());
    let b = vanishing_conditions(&psys, &[parse_assumption(pu, "zeta^4=-1", 1)?])?;
    t.check("zeta^4=-1 is consistent", b.contradictions.is_empty());

    let q = q8();
    let points = [(int(1), q.clone()), (int(2), q.pow(3)?), (int(-1), q.pow(5)?), (Scalar::from_frac(1, 2), q.pow(7)?), (int(3), q.clone())];
    for (alpha, zeta) in points {
        let sym = SymForm::new(mp.clone(), Target::Psi, Some(sigma_alpha(h.clone(), &alpha)?))?;
        let sys = generate_constraints(&sym, Window::new(3, 1))?;
        let v = values_of(&sym, &psi_zeta(h.clone(), uu.clone(), &zeta))?;
        t.report("psi_zeta family", &check_family(&sys, "psi_zeta", &[(format!("alpha={alpha}, zeta={zeta}"), v)])?);
    }
    Ok(())
}

fn c7_unrolled(t: &mut Tally) -> Result<()> {
    let w = Window::new(3, 1);
    for ell in [2u32, 3] {
        let r = verify_unrolled(ell, &int(1), &int(0), &int(0), &int(1), w)?;
        t.report(&format!("unrolled l={ell}"), &r);
        for name in ["compatsemi-unit-action", "compatsemi-scaled-action"] {
            t.check(format!("l={ell} {name} probed"), r.subchecks.iter().any(|s| s.name == name && s.failed == 0));
        }
        for check in ["galois-certificate", "verify-left-galois"] {
            t.check(format!("l={ell} {check}"), r.children.iter().any(|c| c.check == check && c.passed()));
        }
        t.refuted(&format!("l={ell} b≠0"), &verify_unrolled(ell, &int(1), &Scalar::from_frac(1, 2), &int(0), &int(1), w)?);
        t.refuted(&format!("l={ell} c≠0"), &verify_unrolled(ell, &int(1), &int(0), &int(3), &int(1), w)?);
    }
    Ok(())
}

fn c8_infrastructure(t: &mut Tally) -> Result<()> {
    for s in list() {
        let item = build(s.name, &BTreeMap::new(), 1)?;
        let p = match &item.built {
            Built::Hopf(h) => h.pres.clone(),
            Built::Algebra(p) => p.clone(),
            _ => continue,
        };
        let c = confluence_check(&p, item.window)?;
        t.check(format!("{} confluent: {:?}", s.name, c.failures), c.passed());
        t.report(&format!("{} normal form", s.name), &verify_normal_form(&p, item.window)?);
        t.report(&format!("{} associative", s.name), &verify_associativity(&*pres_alg(p), Window::new(3, 1))?);
    }
    let run = || -> Result<Report> { verify_matched_pair(&*section5_pair()?, Window::new(2, 1)) };
    let (a, b) = (run()?, run()?);
    t.check("matched-pair report is deterministic", a.canonical_json() == b.canonical_json() && a.certificate_id() == b.certificate_id());
    let run = || -> Result<Report> { verify_corollary(&Case::OneA { lambda: int(2) }, Window::new(2, 1)) };
    let (a, b) = (run()?, run()?);
    t.check("corollary report is deterministic", a.canonical_json() == b.canonical_json());
    Ok(())
}

fn main() -> ExitCode {
    let criteria: [(&str, fn(&mut Tally) -> Result<()>); 8] = [
        ("verify_hopf on the catalog, mutations refuted", c1_verify_hopf),
        ("matched pair, bicrossed product and reverse", c2_matched_pair),
        ("cocycles, skew pairings and convolution inverses", c3_forms),
        ("deformation cases 1a, 1b, 2a, 2b", c4_corollary),
        ("kappa maps", c5_kappa),
        ("classification of skew pairings and psi", c6_classify),
        ("unrolled quantum group", c7_unrolled),
        ("confluence, normal forms, determinism", c8_infrastructure),
    ];
    let mut all = true;
    for (i, (title, f)) in criteria.into_iter().enumerate() {
        let t0 = Instant::now();
        let mut tally = Tally::default();
        if let Err(e) = f(&mut tally) {
            tally.fails.push(format!("error: {e}"));
        }
        let ok = tally.fails.is_empty();
        all &= ok;
        println!("{} {}. {} ({} checks, {:.1?})", if ok { "PASS" } else { "FAIL" }, i + 1, title, tally.checks, t0.elapsed());
        for f in &tally.fails {
            println!("    {f}");
        }
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
