//! Hopf 2-cocycles and skew H⋈U-pairings: verification, the cocycle τ̂ on H ⋈ U, the
//! deformed actions, and pairings extended from their values on generators.

use std::collections::BTreeMap;
use std::sync::Arc;
use std::time::Instant;

use dashmap::DashMap;

use crate::algebra::Extraction;
use crate::bicrossed::{split, ActFn, MatchedPair};
use crate::error::{Error, Result};
use crate::form::{self, convolution, convolution_inverse, counit_form, Closed, Form, FormRef};
use crate::hopf::{tuples, HopfData};
use crate::pres::{Element, Letter, Monomial, Presentation, Window};
use crate::report::{sweep, Report};
use crate::scalar::Scalar;
use crate::tensor;

fn same(a: &HopfData, b: &HopfData) -> bool {
    std::ptr::eq(a, b) || a.name == b.name
}

fn label(ps: &[&Presentation], t: &[Monomial]) -> String {
    format!("({})", t.iter().zip(ps).map(|(m, p)| p.fmt_mono(m)).collect::<Vec<_>>().join(", "))
}

/// f * g and g * f against ε ⊗ ε on window pairs, with g the solved inverse of f.
fn check_inverse(rep: &mut Report, f: &FormRef, w: Window) -> Result<()> {
    let inv = convolution_inverse(f.clone());
    let eps = counit_form(f.left().clone(), f.right().clone());
    let (pl, pr) = (f.left().p(), f.right().p());
    let pairs = tuples(&[(pl, pl.enumerate_basis(w)), (pr, pr.enumerate_basis(w))], w.max_degree);
    for (name, prod) in [("inverse-right", convolution(f.clone(), inv.clone())), ("inverse-left", convolution(inv.clone(), f.clone()))] {
        let res = sweep(name, &pairs, |t| label(&[pl, pr], t), |t| {
            let l = prod.eval_mono(&t[0], &t[1])?;
            let r = eps.eval_mono(&t[0], &t[1])?;
            Ok((l != r).then(|| (l.to_string(), r.to_string())))
        });
        match res {
            Err(Error::NotInvertible(msg)) => {
                rep.fail_reason(name, msg);
                return Ok(());
            }
            other => rep.add_guarded(name, other)?,
        }
    }
    Ok(())
}

/// f * f⁻¹ = ε ⊗ ε = f⁻¹ * f on window pairs, with f⁻¹ solved degree by degree.
pub fn verify_convolution_inverse(f: &FormRef, w: Window) -> Result<Report> {
    let t0 = Instant::now();
    let mut rep = Report::new("convolution-inverse", &f.name()).with_window(w);
    check_inverse(&mut rep, f, w)?;
    Ok(rep.finish(t0))
}

/// σ(x,1) = ε(x) = σ(1,x), the cocycle identity
/// σ(x₁,y₁)σ(x₂y₂,z) = σ(y₁,z₁)σ(x,y₂z₂) on window triples, and convolution invertibility.
pub fn verify_cocycle(sigma: &FormRef, w: Window) -> Result<Report> {
    let t0 = Instant::now();
    let h = sigma.left().clone();
    if !same(&h, sigma.right()) {
        return Err(Error::Mismatch(format!("{}: a cocycle lives on H ⊗ H", sigma.name())));
    }
    let p = h.p();
    let mut rep = Report::new("verify-cocycle", &sigma.name()).with_window(w).param("hopf", &h.name);
    let basis = p.enumerate_basis(w);
    let one = p.one();
    rep.add_guarded("normalization", sweep("normalization", &basis, |m| p.fmt_mono(m), |x| {
        let e = h.counit_mono(x);
        let (l, r) = (sigma.eval_mono(x, &one)?, sigma.eval_mono(&one, x)?);
        if l != e {
            return Ok(Some((format!("σ(x,1) = {l}"), e.to_string())));
        }
        Ok((r != e).then(|| (format!("σ(1,x) = {r}"), e.to_string())))
    }))?;

    let triples = tuples(&[(p, basis.clone()), (p, basis.clone()), (p, basis.clone())], w.max_degree);
    rep.add_guarded("cocycle-identity", sweep("cocycle-identity", &triples, |t| label(&[p, p, p], t), |t| {
        let (x, y, z) = (&t[0], &t[1], &t[2]);
        let mut l = Scalar::zero();
        for (kx, cx) in h.delta_mono(x)?.iter() {
            for (ky, cy) in h.delta_mono(y)?.iter() {
                let s = sigma.eval_mono(&kx[0], &ky[0])?;
                if s.is_zero() {
                    continue;
                }
                let v = form::eval(&**sigma, &p.mul_mono(&kx[1], &ky[1])?, &Element::basis(z.clone()))?;
                l = l.try_add(&cx.try_mul(cy)?.try_mul(&s)?.try_mul(&v)?)?;
            }
        }
        let mut r = Scalar::zero();
        for (ky, cy) in h.delta_mono(y)?.iter() {
            for (kz, cz) in h.delta_mono(z)?.iter() {
                let s = sigma.eval_mono(&ky[0], &kz[0])?;
                if s.is_zero() {
                    continue;
                }
                let v = form::eval(&**sigma, &Element::basis(x.clone()), &p.mul_mono(&ky[1], &kz[1])?)?;
                r = r.try_add(&cy.try_mul(cz)?.try_mul(&s)?.try_mul(&v)?)?;
            }
        }
        Ok((l != r).then(|| (l.to_string(), r.to_string())))
    }))?;

    check_inverse(&mut rep, sigma, w)?;
    Ok(rep.finish(t0))
}

/// The skew-pairing axioms for τ: H ⊗ U → k over a matched pair:
/// τ(h,1) = ε(h), τ(1,x) = ε(x), τ(h,xy) = τ(h₁,y₁)τ(y₂▷h₂,x), τ(gh,x) = τ(g₁,x₁)τ(h,x₂◁g₂),
/// nonzero values on group-likes and a two-sided convolution inverse.
pub fn verify_skew_pairing(mp: &MatchedPair, tau: &FormRef, w: Window) -> Result<Report> {
    let t0 = Instant::now();
    let (h, u) = (&*mp.h, &*mp.u);
    if !same(h, tau.left()) || !same(u, tau.right()) {
        return Err(Error::Mismatch(format!("{} is not a form on {} ⊗ {}", tau.name(), h.name, u.name)));
    }
    let (ph, pu) = (h.p(), u.p());
    let mut rep = Report::new("verify-skew-pairing", &tau.name()).with_window(w).param("pair", &mp.name);
    let hb = ph.enumerate_basis(w);
    let ub = pu.enumerate_basis(w);
    let (oh, ou) = (ph.one(), pu.one());

    rep.add_guarded("normalization-h", sweep("normalization-h", &hb, |m| ph.fmt_mono(m), |x| {
        let (l, r) = (tau.eval_mono(x, &ou)?, h.counit_mono(x));
        Ok((l != r).then(|| (format!("τ(h,1) = {l}"), r.to_string())))
    }))?;
    rep.add_guarded("normalization-u", sweep("normalization-u", &ub, |m| pu.fmt_mono(m), |x| {
        let (l, r) = (tau.eval_mono(&oh, x)?, u.counit_mono(x));
        Ok((l != r).then(|| (format!("τ(1,x) = {l}"), r.to_string())))
    }))?;

    let huu = tuples(&[(ph, hb.clone()), (pu, ub.clone()), (pu, ub.clone())], w.max_degree);
    rep.add_guarded("product-in-u", sweep("product-in-u", &huu, |t| label(&[ph, pu, pu], t), |t| {
        let (a, x, y) = (&t[0], &t[1], &t[2]);
        let l = form::eval(&**tau, &Element::basis(a.clone()), &pu.mul_mono(x, y)?)?;
        let mut r = Scalar::zero();
        for (ka, ca) in h.delta_mono(a)?.iter() {
            for (ky, cy) in u.delta_mono(y)?.iter() {
                let s = tau.eval_mono(&ka[0], &ky[0])?;
                if s.is_zero() {
                    continue;
                }
                let v = form::eval(&**tau, &mp.tri(&ky[1], &ka[1])?, &Element::basis(x.clone()))?;
                r = r.try_add(&ca.try_mul(cy)?.try_mul(&s)?.try_mul(&v)?)?;
            }
        }
        Ok((l != r).then(|| (l.to_string(), r.to_string())))
    }))?;

    let hhu = tuples(&[(ph, hb.clone()), (ph, hb.clone()), (pu, ub.clone())], w.max_degree);
    rep.add_guarded("product-in-h", sweep("product-in-h", &hhu, |t| label(&[ph, ph, pu], t), |t| {
        let (g, a, x) = (&t[0], &t[1], &t[2]);
        let l = form::eval(&**tau, &ph.mul_mono(g, a)?, &Element::basis(x.clone()))?;
        let mut r = Scalar::zero();
        for (kg, cg) in h.delta_mono(g)?.iter() {
            for (kx, cx) in u.delta_mono(x)?.iter() {
                let s = tau.eval_mono(&kg[0], &kx[0])?;
                if s.is_zero() {
                    continue;
                }
                let v = form::eval(&**tau, &Element::basis(a.clone()), &mp.tle(&kx[1], &kg[1])?)?;
                r = r.try_add(&cg.try_mul(cx)?.try_mul(&s)?.try_mul(&v)?)?;
            }
        }
        Ok((l != r).then(|| (l.to_string(), r.to_string())))
    }))?;

    let gl: Vec<Vec<Monomial>> = tuples(&[(ph, hb.clone()), (pu, ub.clone())], w.max_degree)
        .into_iter()
        .filter(|t| h.is_group_like_mono(&t[0]) && u.is_group_like_mono(&t[1]))
        .collect();
    rep.add_guarded("invertible-degree-0", sweep("invertible-degree-0", &gl, |t| label(&[ph, pu], t), |t| {
        let v = tau.eval_mono(&t[0], &t[1])?;
        Ok(v.is_zero().then(|| ("0".to_string(), "nonzero".to_string())))
    }))?;

    check_inverse(&mut rep, tau, w)?;
    Ok(rep.finish(t0))
}

/// τ̂(g⋈x, h⋈y) = τ(h,x) ε(g) ε(y) on E = H ⋈ U (generators of H first).
pub fn tau_hat(tau: &FormRef, e: Arc<HopfData>) -> Result<FormRef> {
    let (h, u) = (tau.left().clone(), tau.right().clone());
    let nh = h.p().ngens();
    if e.p().ngens() != nh + u.p().ngens() {
        return Err(Error::Mismatch(format!("{} is not built on {} ⋈ {}", e.name, h.name, u.name)));
    }
    let t = tau.clone();
    Ok(Closed::new(&format!("hat({})", tau.name()), e.clone(), e, move |m, n| {
        let (g, x) = split(m, nh);
        let (a, y) = split(n, nh);
        let c = &h.counit_mono(&g) * &u.counit_mono(&y);
        if c.is_zero() {
            return Ok(c);
        }
        Ok(&c * &t.eval_mono(&a, &x)?)
    }))
}

/// A Hopf algebra presented along an extraction: monomials of `hopf` correspond to the
/// ordered products Φ(m) in the algebra the extraction was read from.
#[derive(Clone)]
pub struct Relabel {
    pub hopf: Arc<HopfData>,
    pub ext: Arc<Extraction>,
}

impl Relabel {
    fn to_old(&self, m: &Monomial) -> Result<Element> {
        tensor::to_element(&self.ext.phi(m)?)
    }

    fn to_new(&self, e: &Element) -> Result<Element> {
        self.ext.phi_inv(&tensor::from_element(e))
    }
}

/// x ▷_τ h = τ(h₁,x₁) τ⁻¹(h₃,x₃) x₂▷h₂ and x ◁_τ h = τ(h₁,x₁) τ⁻¹(h₃,x₃) x₂◁h₂.
///
/// When `h_side` or `u_side` is given, the new pair lives on those Hopf algebras and the
/// actions are transported through their extractions (same coalgebra, new product).
pub fn deformed_actions(
    mp: &Arc<MatchedPair>,
    tau: &FormRef,
    h_side: Option<Relabel>,
    u_side: Option<Relabel>,
) -> Result<Arc<MatchedPair>> {
    if !same(&mp.h, tau.left()) || !same(&mp.u, tau.right()) {
        return Err(Error::Mismatch(format!("{} is not a form on {} ⊗ {}", tau.name(), mp.h.name, mp.u.name)));
    }
    let inv = convolution_inverse(tau.clone());
    let mk = |right: bool| -> Arc<ActFn> {
        let (mp, tau, inv, hs, us) = (mp.clone(), tau.clone(), inv.clone(), h_side.clone(), u_side.clone());
        Arc::new(move |x: &Monomial, a: &Monomial| {
            let xs = match &us {
                Some(r) => r.to_old(x)?,
                None => Element::basis(x.clone()),
            };
            let as_ = match &hs {
                Some(r) => r.to_old(a)?,
                None => Element::basis(a.clone()),
            };
            let mut out = Element::zero();
            for (xm, xc) in xs.iter() {
                for (am, ac) in as_.iter() {
                    let dx = mp.u.delta2_mono(xm)?;
                    let da = mp.h.delta2_mono(am)?;
                    for (kx, cx) in dx.iter() {
                        for (ka, ca) in da.iter() {
                            let s = tau.eval_mono(&ka[0], &kx[0])?;
                            if s.is_zero() {
                                continue;
                            }
                            let t = inv.eval_mono(&ka[2], &kx[2])?;
                            if t.is_zero() {
                                continue;
                            }
                            let v = if right { mp.tri(&kx[1], &ka[1])? } else { mp.tle(&kx[1], &ka[1])? };
                            let c = xc.try_mul(ac)?.try_mul(cx)?.try_mul(ca)?.try_mul(&s)?.try_mul(&t)?;
                            out.add_scaled(&v, &c);
                        }
                    }
                }
            }
            let side = if right { &hs } else { &us };
            match side {
                Some(r) => r.to_new(&out),
                None => Ok(out),
            }
        })
    };
    let h = h_side.as_ref().map(|r| r.hopf.clone()).unwrap_or_else(|| mp.h.clone());
    let u = u_side.as_ref().map(|r| r.hopf.clone()).unwrap_or_else(|| mp.u.clone());
    Ok(MatchedPair::new(&format!("{}^{}", mp.name, tau.name()), h, u, mk(true), mk(false)))
}

const EXTEND_DEPTH: usize = 256;

/// A pairing determined by its values on letter pairs through
/// τ(h, x·l) = τ(h₁,l₁) τ(l₂▷h₂, x) and τ(g·k, l) = τ(g₁,l₁) τ(k, l₂◁g₂).
pub struct Extended {
    name: String,
    mp: Arc<MatchedPair>,
    seeds: BTreeMap<(Letter, Letter), Scalar>,
    memo: DashMap<(Monomial, Monomial), Scalar>,
}

fn split_last(m: &Monomial) -> Option<(Monomial, Letter)> {
    let j = m.0.iter().rposition(|&e| e != 0)?;
    let l = if m.0[j] < 0 { Letter::inverse(j) } else { Letter::new(j) };
    let mut pre = m.clone();
    pre.0[j] -= if l.inv { -1 } else { 1 };
    Some((pre, l))
}

impl Extended {
    fn value(&self, a: &Monomial, x: &Monomial, depth: usize) -> Result<Scalar> {
        let (h, u) = (&self.mp.h, &self.mp.u);
        if x.is_one() {
            return Ok(h.counit_mono(a));
        }
        if a.is_one() {
            return Ok(u.counit_mono(x));
        }
        if depth > EXTEND_DEPTH {
            return Err(Error::Budget(EXTEND_DEPTH));
        }
        let key = (a.clone(), x.clone());
        if let Some(v) = self.memo.get(&key) {
            return Ok(v.clone());
        }
        let (xp, l) = split_last(x).expect("x is not 1");
        let lm = u.p().letter_mono(l);
        let mut acc = Scalar::zero();
        if !xp.is_one() {
            for (ka, ca) in h.delta_mono(a)?.iter() {
                for (kl, cl) in u.delta_mono(&lm)?.iter() {
                    let s = self.value(&ka[0], &kl[0], depth + 1)?;
                    if s.is_zero() {
                        continue;
                    }
                    for (m, c) in self.mp.tri(&kl[1], &ka[1])?.iter() {
                        let v = self.value(m, &xp, depth + 1)?;
                        acc = acc.try_add(&ca.try_mul(cl)?.try_mul(&s)?.try_mul(c)?.try_mul(&v)?)?;
                    }
                }
            }
        } else {
            let (ap, k) = split_last(a).expect("a is not 1");
            if ap.is_one() {
                acc = self.seeds.get(&(k, l)).cloned().ok_or_else(|| {
                    Error::Other(format!("no seed value for ({}, {})", h.p().letter_name(k), u.p().letter_name(l)))
                })?;
            } else {
                let km = h.p().letter_mono(k);
                for (ka, ca) in h.delta_mono(&ap)?.iter() {
                    for (kl, cl) in u.delta_mono(&lm)?.iter() {
                        let s = self.value(&ka[0], &kl[0], depth + 1)?;
                        if s.is_zero() {
                            continue;
                        }
                        for (m, c) in self.mp.tle(&kl[1], &ka[1])?.iter() {
                            let v = self.value(&km, m, depth + 1)?;
                            acc = acc.try_add(&ca.try_mul(cl)?.try_mul(&s)?.try_mul(c)?.try_mul(&v)?)?;
                        }
                    }
                }
            }
        }
        self.memo.insert(key, acc.clone());
        Ok(acc)
    }
}

impl Form for Extended {
    fn name(&self) -> String {
        self.name.clone()
    }
    fn left(&self) -> &Arc<HopfData> {
        &self.mp.h
    }
    fn right(&self) -> &Arc<HopfData> {
        &self.mp.u
    }
    fn eval_mono(&self, x: &Monomial, y: &Monomial) -> Result<Scalar> {
        self.value(x, y, 0)
    }
}

/// Extend seed values on letter pairs (inverse letters included) to all basis pairs.
/// The report is the skew-pairing check of the extension on the window: a seed set that
/// no pairing extends shows up as a failing axiom instance.
pub fn extend_pairing_from_generators(
    name: &str,
    seeds: BTreeMap<(Letter, Letter), Scalar>,
    mp: &Arc<MatchedPair>,
    w: Window,
) -> Result<(FormRef, Report)> {
    let t0 = Instant::now();
    let f: FormRef = Arc::new(Extended { name: name.into(), mp: mp.clone(), seeds, memo: DashMap::new() });
    let mut rep = Report::new("extend-pairing", name).with_window(w).param("pair", &mp.name);
    match verify_skew_pairing(mp, &f, w) {
        Ok(r) => rep.child(r),
        Err(e @ (Error::Other(_) | Error::Budget(_))) => rep.fail_reason("extension", e.to_string()),
        Err(e) => return Err(e),
    }
    Ok((f, rep.finish(t0)))
}

/// f = g on every window basis pair.
pub fn compare_forms(f: &dyn Form, g: &dyn Form, w: Window) -> Result<Report> {
    let t0 = Instant::now();
    let (pl, pr) = (f.left().p(), f.right().p());
    let mut rep = Report::new("compare-forms", &format!("{} vs {}", f.name(), g.name())).with_window(w);
    let pairs = tuples(&[(pl, pl.enumerate_basis(w)), (pr, pr.enumerate_basis(w))], w.max_degree);
    rep.add_guarded("values", sweep("values", &pairs, |t| label(&[pl, pr], t), |t| {
        let (l, r) = (f.eval_mono(&t[0], &t[1])?, g.eval_mono(&t[0], &t[1])?);
        Ok((l != r).then(|| (l.to_string(), r.to_string())))
    }))?;
    Ok(rep.finish(t0))
}
