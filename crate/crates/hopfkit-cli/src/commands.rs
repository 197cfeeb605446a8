use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::sync::Arc;
use std::time::Instant;

use anyhow::{bail, Context};
use clap::ValueEnum;
use serde_json::{json, Value};

use hopfkit::algebra::{pres_alg, presentation_match, twisted_tensor, TwistRef};
use hopfkit::bicrossed::{
    bicrossed_presentation, bicrossed_product, trivial_pair, verify_action_zero, verify_double_reverse, verify_matched_pair,
    verify_reverse_match, MatchedPair,
};
use hopfkit::catalog::corollary::{verify_corollary, Case};
use hopfkit::catalog::forms::sigma_alpha;
use hopfkit::catalog::registry::{build, ky_hopf, list, spec, Built, Item};
use hopfkit::catalog::section5::{e_hopf, e_pres, h_hopf, section5_pair};
use hopfkit::catalog::semidirect::verify_unrolled;
use hopfkit::catalog::unrolled::{kx_hopf, uq_hopf};
use hopfkit::classify::{classify_target, parse_assumption, report_system, vanishing_conditions, Target};
use hopfkit::deform::{compare_forms, tau_hat, verify_cocycle, verify_convolution_inverse, verify_skew_pairing};
use hopfkit::form::{convolution_inverse, counit_form, FormRef};
use hopfkit::galois::{
    antipode_kappa, compare_kappa, delta_shaped_letters, galois_certificate, psi_conditions_check, psi_inverse_closed,
    regular_comodule, sharp_comodule, solve_kappa_letters, theta_from_psi, verify_comodule, verify_comodule_compat,
    verify_gamma, verify_kappa, verify_twisting, CoRef, KappaSearch, OnLetters,
};
use hopfkit::scalar::parse_scalar;
use hopfkit::{verify_hopf, HopfData, Report, Scalar, Status, Window};

use crate::{Common, VerifyWhat};

/// Bad input from the command line; exits with 2.
#[derive(Debug)]
pub struct Usage(pub String);

impl fmt::Display for Usage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn usage<T>(msg: impl Into<String>) -> anyhow::Result<T> {
    Err(Usage(msg.into()).into())
}

/// Errors caused by the inputs rather than by the library.
pub fn is_usage(e: &anyhow::Error) -> bool {
    use hopfkit::Error::*;
    e.downcast_ref::<Usage>().is_some() || matches!(e.downcast_ref::<hopfkit::Error>(), Some(Parse { .. } | Constraint(_) | Unknown(_)))
}

#[derive(Clone, Copy, ValueEnum)]
pub enum TargetArg {
    SkewPairing,
    Psi,
}

pub enum Output {
    Report(Report),
    Data { json: Value, text: String },
}

impl From<Report> for Output {
    fn from(r: Report) -> Self {
        Output::Report(r)
    }
}

/// Print or write `out`; returns whether every check passed.
pub fn emit(out: Output, as_json: bool, path: Option<&Path>) -> anyhow::Result<bool> {
    let (value, text, passed) = match out {
        Output::Report(r) => {
            let mut v = serde_json::to_value(&r)?;
            v["certificate_id"] = json!(r.certificate_id());
            let text = format!("{}certificate {}\n", r.render_tree(), r.certificate_id());
            (v, text, r.status == Status::Pass)
        }
        Output::Data { json, text } => (json, text, true),
    };
    let pretty = serde_json::to_string_pretty(&value)? + "\n";
    if let Some(p) = path {
        std::fs::write(p, &pretty).with_context(|| format!("writing {}", p.display()))?;
    }
    if as_json {
        print!("{pretty}");
    } else {
        print!("{text}");
    }
    Ok(passed)
}

fn window(c: &Common, default: Window) -> anyhow::Result<Window> {
    match &c.window {
        None => Ok(default),
        Some(s) => Window::parse(s).or_else(|e| usage(e.to_string())),
    }
}

fn raw_params(c: &Common) -> anyhow::Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for p in &c.params {
        let Some((k, v)) = p.split_once('=') else {
            return usage(format!("--param expects name=value, got {p}"));
        };
        out.insert(k.trim().to_string(), v.trim().to_string());
    }
    Ok(out)
}

/// Build `--item`; `--alpha` and `--zeta` fill the item's parameters of those names.
fn load(c: &Common) -> anyhow::Result<Item> {
    let Some(name) = &c.item else {
        return usage("--item is required");
    };
    load_named(name, c)
}

fn load_named(name: &str, c: &Common) -> anyhow::Result<Item> {
    let s = spec(name)?;
    let mut raw = raw_params(c)?;
    for (k, v) in [("alpha", &c.alpha), ("zeta", &c.zeta)] {
        if let Some(v) = v {
            if s.params.iter().any(|p| p.name == k) {
                raw.insert(k.into(), v.clone());
            }
        }
    }
    // items with ℓ fix q from it
    let order = c.cyclotomic_order.unwrap_or(if s.params.iter().any(|p| p.name == "ell") { 1 } else { 8 });
    Ok(build(name, &raw, order)?)
}

fn hopf_of(item: &Item) -> anyhow::Result<Arc<HopfData>> {
    match &item.built {
        Built::Hopf(h) => Ok(h.clone()),
        _ => usage(format!("{} is not a Hopf algebra", item.spec.name)),
    }
}

fn form_of(item: &Item) -> anyhow::Result<FormRef> {
    match &item.built {
        Built::Form(f) => Ok(f.clone()),
        _ => usage(format!("{} is not a bilinear form", item.spec.name)),
    }
}

/// The matched pair a form on H ⊗ U or k[y] ⊗ k[x] pairs.
fn pair_for(f: &FormRef) -> anyhow::Result<Arc<MatchedPair>> {
    match (f.left().name.as_str(), f.right().name.as_str()) {
        ("H", "U") => Ok(section5_pair()?),
        ("k[y]", "k[X]") => Ok(trivial_pair(ky_hopf()?, kx_hopf()?)),
        (l, r) => usage(format!("{} is a form on {l} ⊗ {r}, not a pairing of a catalog matched pair", f.name())),
    }
}

fn scalar_flag(v: &Option<String>, default: &str, order: u32) -> anyhow::Result<Scalar> {
    Ok(parse_scalar(v.as_deref().unwrap_or(default), order)?)
}

/// Twisting maps in the catalog act on H-algebras and U-algebras inside E.
fn twist_parts(th: &TwistRef) -> anyhow::Result<(CoRef, CoRef, Arc<HopfData>)> {
    let mp = section5_pair()?;
    Ok((regular_comodule(th.a().clone(), mp.h.clone()), regular_comodule(th.r().clone(), mp.u.clone()), e_hopf()?))
}

/// The right comodule structure of a Hopf algebra or catalog algebra.
fn comodule_of(item: &Item) -> anyhow::Result<CoRef> {
    match &item.built {
        Built::Hopf(h) => Ok(regular_comodule(pres_alg(h.pres.clone()), h.clone())),
        Built::Algebra(p) => {
            let (h, names): (Arc<HopfData>, &[(&str, &str)]) = match item.spec.name {
                "H_alpha" => (h_hopf()?, &[]),
                "A_def" => (e_hopf()?, &[]),
                "A_abc" => {
                    let ell = item.params.get("ell").and_then(|s| s.to_string().parse().ok()).unwrap_or(2);
                    (uq_hopf(ell)?, &[("E", "e"), ("F", "f"), ("K", "g")])
                }
                n => return usage(format!("{n} has no catalog coaction")),
            };
            let letters = delta_shaped_letters(p, &h, names)?;
            Ok(OnLetters::new(&format!("{} over {}", p.name, h.name), p.clone(), h, letters)?)
        }
        Built::Twist(th) => {
            let (ca, cr, e) = twist_parts(th)?;
            Ok(sharp_comodule(twisted_tensor(th.clone()), ca, cr, e)?)
        }
        _ => usage(format!("{} is not an algebra", item.spec.name)),
    }
}

const GATED: &str = "gating check failed; later stages skipped (rerun with --unchecked to force)";

pub fn catalog_list() -> Output {
    let items = list();
    let mut text = String::new();
    for s in &items {
        let ps: Vec<String> = s.params.iter().map(|p| format!("{}={}", p.name, p.default)).collect();
        text.push_str(&format!("{:<13} {:<13} {:<28} {}\n", s.name, format!("{:?}", s.kind), ps.join(" "), s.about));
    }
    let json = serde_json::to_value(&items).expect("specs serialize");
    Output::Data { json, text }
}

pub fn catalog_build(name: &str, c: &Common) -> anyhow::Result<Output> {
    let item = load_named(name, c)?;
    let json = item.to_json()?;
    let text = serde_json::to_string_pretty(&json)? + "\n";
    Ok(Output::Data { json, text })
}

pub fn verify(what: VerifyWhat, c: &Common) -> anyhow::Result<Report> {
    let t0 = Instant::now();
    let item = load(c)?;
    let w = window(c, item.window)?;
    let rep = match what {
        VerifyWhat::Hopf => verify_hopf(&*hopf_of(&item)?, w)?,
        VerifyWhat::MatchedPair => {
            let Built::Pair(mp) = &item.built else {
                return usage(format!("{} is not a matched pair", item.spec.name));
            };
            let mut r = verify_matched_pair(mp, w)?;
            r.child(verify_action_zero(mp, w)?);
            r.child(verify_double_reverse(mp, w)?);
            r.child(verify_reverse_match(mp, &*bicrossed_product(mp)?, w)?);
            r.child(presentation_match(&*bicrossed_presentation(mp, "H⋈U")?, &*e_pres()?)?);
            r
        }
        VerifyWhat::Cocycle => {
            let f = form_of(&item)?;
            let f = if f.left().name == f.right().name {
                f
            } else {
                // a skew pairing τ gives the cocycle τ̂ on the bicrossed product
                pair_for(&f)?;
                tau_hat(&f, e_hopf()?)?
            };
            let mut r = verify_cocycle(&f, w)?;
            r.child(verify_convolution_inverse(&f, w)?);
            r
        }
        VerifyWhat::SkewPairing => {
            let f = form_of(&item)?;
            verify_skew_pairing(&*pair_for(&f)?, &f, w)?
        }
        VerifyWhat::Psi => {
            let psi = form_of(&item)?;
            let mp = pair_for(&psi)?;
            let default = if item.spec.name == "psi_zeta" { "1" } else { "0" };
            let alpha = scalar_flag(&c.alpha, default, c.cyclotomic_order.unwrap_or(8))?;
            let sigma = sigma_alpha(mp.h.clone(), &alpha)?;
            let mut r = psi_conditions_check(&mp, &psi, &sigma, &counit_form(mp.u.clone(), mp.u.clone()), w)?.param("alpha", &alpha);
            r.child(verify_convolution_inverse(&psi, w)?);
            if item.spec.name == "psi_zeta" {
                r.child(compare_forms(&*psi_inverse_closed(&mp, &psi, true), &*convolution_inverse(psi.clone()), w)?);
            }
            r
        }
        VerifyWhat::Twisting => match &item.built {
            Built::Twist(th) => verify_twisting(&**th, w)?,
            Built::Form(f) => {
                let mp = pair_for(f)?;
                let (a, r) = (pres_alg(mp.h.pres.clone()), pres_alg(mp.u.pres.clone()));
                verify_twisting(&*theta_from_psi(mp, f.clone(), a, r), w)?
            }
            _ => return usage(format!("{} is not a twisting map", item.spec.name)),
        },
        VerifyWhat::Comodule => match &item.built {
            Built::Twist(th) => {
                let (ca, cr, e) = twist_parts(th)?;
                verify_comodule_compat(th, &ca, &cr, &e, w)?
            }
            _ => verify_comodule(&*comodule_of(&item)?, comodule_window(c, &item)?)?,
        },
        VerifyWhat::Galois => return galois(&item, c, t0),
    };
    Ok(with_item_params(rep, &item))
}

fn with_item_params(mut r: Report, item: &Item) -> Report {
    for (k, v) in &item.params {
        r.params.entry(k.clone()).or_insert_with(|| v.to_string());
    }
    r
}

fn comodule_window(c: &Common, item: &Item) -> anyhow::Result<Window> {
    match item.built {
        Built::Twist(_) => window(c, item.window),
        _ => window(c, Window::new(3, 1)),
    }
}

fn galois(item: &Item, c: &Common, t0: Instant) -> anyhow::Result<Report> {
    let w = comodule_window(c, item)?;
    if let Built::Twist(th) = &item.built {
        let gate = verify_twisting(&**th, w)?;
        if !gate.passed() && !c.unchecked {
            let mut r = Report::new("galois-certificate", &th.name()).with_window(w);
            r.child(gate);
            r.note(GATED);
            return Ok(r.finish(t0));
        }
        let (ca, cr, e) = twist_parts(th)?;
        return Ok(with_item_params(galois_certificate(th, &ca, &cr, &e, w, KappaSearch::default())?, item));
    }
    let co = comodule_of(item)?;
    let mut r = Report::new("galois", &co.name()).with_window(w);
    r.child(verify_comodule(&*co, w)?);
    if !r.passed() && !c.unchecked {
        r.note(GATED);
        return Ok(with_item_params(r.finish(t0), item));
    }
    let (k, solved) = solve_kappa_letters(&co, KappaSearch::default())?;
    r.child(solved);
    r.child(verify_kappa(&*co, &*k, w)?);
    r.child(verify_gamma(&*co, &*k, w)?);
    Ok(with_item_params(r.finish(t0), item))
}

pub fn kappa(c: &Common) -> anyhow::Result<Report> {
    let t0 = Instant::now();
    let item = load(c)?;
    if let Built::Twist(_) = item.built {
        return galois(&item, c, t0);
    }
    let w = comodule_window(c, &item)?;
    let co = comodule_of(&item)?;
    let mut r = Report::new("kappa", &co.name()).with_window(w);
    let (k, solved) = solve_kappa_letters(&co, KappaSearch::default())?;
    r.child(solved);
    r.child(verify_kappa(&*co, &*k, w)?);
    if let Built::Hopf(h) = &item.built {
        r.child(compare_kappa(&*k, &*antipode_kappa(h)?, w)?);
    }
    Ok(with_item_params(r.finish(t0), &item))
}

pub fn classify(target: TargetArg, assume: &[String], c: &Common) -> anyhow::Result<Report> {
    let t0 = Instant::now();
    let w = window(c, Window::new(3, 2))?;
    let order = c.cyclotomic_order.unwrap_or(8);
    let alpha = scalar_flag(&c.alpha, "1", order)?;
    let target = match target {
        TargetArg::SkewPairing => Target::SkewPairing,
        TargetArg::Psi => Target::Psi,
    };
    let sys = classify_target(target, w, &alpha)?;
    let Some(u) = sys.u.as_ref() else {
        bail!("constraint system carries no unknowns");
    };
    let mut branches = Vec::new();
    if !assume.is_empty() {
        let a = assume.iter().map(|s| parse_assumption(u, s, order)).collect::<hopfkit::Result<Vec<_>>>()?;
        branches.push(vanishing_conditions(&sys, &a)?);
    }
    let mut r = report_system(&sys, &branches, t0);
    if target == Target::Psi {
        r = r.param("alpha", &alpha);
    }
    Ok(r)
}

pub fn corollary(case: &str, c: &Common) -> anyhow::Result<Report> {
    let order = c.cyclotomic_order.unwrap_or(8);
    let mut raw = raw_params(c)?;
    for (k, v) in [("alpha", &c.alpha), ("zeta", &c.zeta)] {
        if let Some(v) = v {
            raw.insert(k.into(), v.clone());
        }
    }
    let allowed: &[(&str, &str)] = match case {
        "1a" => &[("lambda", "2")],
        "1b" => &[("beta", "1"), ("xi", "1")],
        "2a" => &[("alpha", "1"), ("zeta", "q")],
        "2b" => &[("beta", "1"), ("lambda", "1")],
        _ => return usage(format!("unknown case {case}; expected 1a, 1b, 2a or 2b")),
    };
    if let Some(k) = raw.keys().find(|k| !allowed.iter().any(|(n, _)| n == k)) {
        return usage(format!("case {case} takes no parameter {k}"));
    }
    let mut get = |n: &str| -> anyhow::Result<Scalar> {
        let d = allowed.iter().find(|(k, _)| *k == n).map(|(_, d)| *d).expect("declared");
        Ok(parse_scalar(raw.remove(n).as_deref().unwrap_or(d), order)?)
    };
    let case = match case {
        "1a" => Case::OneA { lambda: get("lambda")? },
        "1b" => Case::OneB { beta: get("beta")?, xi: get("xi")? },
        "2a" => Case::TwoA { alpha: get("alpha")?, zeta: get("zeta")? },
        _ => Case::TwoB { beta: get("beta")?, lambda: get("lambda")? },
    };
    case.abl()?;
    Ok(verify_corollary(&case, window(c, Window::new(2, 1))?)?)
}

pub fn unrolled(c: &Common) -> anyhow::Result<Report> {
    let mut raw = raw_params(c)?;
    let ell: u32 = match raw.remove("ell") {
        None => 2,
        Some(s) => match s.parse() {
            Ok(n) => n,
            Err(_) => return usage(format!("ell must be an integer, got {s}")),
        },
    };
    let order = 2 * ell;
    if let Some(n) = c.cyclotomic_order.filter(|&n| n != order) {
        return usage(format!("cyclotomic order {n} does not match 2ℓ = {order}"));
    }
    let mut get = |n: &str, d: &str| -> anyhow::Result<Scalar> { Ok(parse_scalar(raw.remove(n).as_deref().unwrap_or(d), order)?) };
    let (a, b, cc, lambda) = (get("a", "1")?, get("b", "0")?, get("c", "0")?, get("lambda", "1")?);
    if let Some(k) = raw.keys().next() {
        return usage(format!("unrolled takes no parameter {k}"));
    }
    Ok(verify_unrolled(ell, &a, &b, &cc, &lambda, window(c, Window::new(3, 1))?)?)
}
