//! Residual systems for skew pairings and ψ-maps with unknown values on generator pairs.
//!
//! A form is evaluated symbolically through its extension rules, every axiom instance on
//! the window gives a Laurent polynomial in the unknowns, and the distinct nonzero ones
//! make up the system. Branches of the case analysis are explored by substituting
//! assumptions such as `t_ba=0` or `lambda^2=1`.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::sync::Arc;
use std::time::Instant;

use dashmap::DashMap;
use rayon::prelude::*;
use serde::Serialize;

use crate::bicrossed::MatchedPair;
use crate::error::{Error, Result};
use crate::form::{convolution_inverse, eval, FormRef};
use crate::hopf::tuples;
use crate::lin::Lin;
use crate::pres::{Element, Letter, Monomial, Presentation, Window};
use crate::report::Report;
use crate::scalar::{parse_scalar, Scalar};

/// Exponent vectors over the unknowns.
pub type Exps = Vec<i32>;

/// A Laurent polynomial in the unknowns.
pub type Poly = Lin<Exps>;

#[derive(Clone, Debug)]
pub struct Unknowns {
    pub names: Vec<String>,
    /// Unknowns that are values on pairs of group-likes, hence invertible.
    pub invertible: Vec<bool>,
}

impl Unknowns {
    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn constant(&self, c: Scalar) -> Poly {
        Poly::term(vec![0; self.len()], c)
    }

    pub fn var(&self, i: usize) -> Poly {
        let mut e = vec![0; self.len()];
        e[i] = 1;
        Poly::basis(e)
    }

    pub fn fmt(&self, p: &Poly) -> String {
        if p.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        let terms: Vec<_> = p.iter().collect();
        for (k, (e, c)) in terms.into_iter().rev().enumerate() {
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &x)| x != 0)
                .map(|(i, &x)| if x == 1 { self.names[i].clone() } else { format!("{}^{}", self.names[i], x) })
                .collect();
            let neg = c.as_rational().is_some_and(|r| r < &num_rational::BigRational::from_integer(0.into()));
            let abs = if neg { -c.clone() } else { c.clone() };
            let coeff = abs.to_string();
            let coeff = if coeff.contains(['+', '-', ' ']) { format!("({coeff})") } else { coeff };
            let body = match (mono.is_empty(), abs.is_one()) {
                (true, _) => coeff,
                (false, true) => mono.join("*"),
                (false, false) => format!("{coeff}*{}", mono.join("*")),
            };
            match (k, neg) {
                (0, false) => out.push_str(&body),
                (0, true) => write!(out, "-{body}").unwrap(),
                (_, false) => write!(out, " + {body}").unwrap(),
                (_, true) => write!(out, " - {body}").unwrap(),
            }
        }
        out
    }
}

pub fn poly_mul(x: &Poly, y: &Poly) -> Result<Poly> {
    let mut out = Poly::zero();
    for (a, ca) in x.iter() {
        for (b, cb) in y.iter() {
            let e: Exps = a.iter().zip(b).map(|(i, j)| i + j).collect();
            out.add_term(e, ca.try_mul(cb)?);
        }
    }
    Ok(out)
}

pub fn poly_eval(p: &Poly, point: &[Scalar]) -> Result<Scalar> {
    let mut acc = Scalar::zero();
    for (e, c) in p.iter() {
        let mut t = c.clone();
        for (i, &x) in e.iter().enumerate() {
            if x != 0 {
                t = t.try_mul(&point[i].pow(x as i64)?)?;
            }
        }
        acc = acc.try_add(&t)?;
    }
    Ok(acc)
}

/// Divide out the largest monomial in the invertible unknowns and scale so that the
/// smallest term has coefficient 1.
pub fn normalize(u: &Unknowns, p: &Poly) -> Result<Poly> {
    let Some((first, _)) = p.iter().next() else { return Ok(p.clone()) };
    let mut shift = vec![0; u.len()];
    for i in 0..u.len() {
        if u.invertible[i] {
            shift[i] = p.keys().map(|e| e[i]).min().unwrap_or(0);
        }
    }
    let _ = first;
    let shifted: Poly = p.iter().map(|(e, c)| (e.iter().zip(&shift).map(|(a, s)| a - s).collect::<Exps>(), c.clone())).collect();
    let lead = shifted.iter().next().map(|(_, c)| c.clone()).unwrap_or_else(Scalar::one);
    let inv = lead.inv()?;
    Ok(shifted.scaled(&inv))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Target {
    SkewPairing,
    Psi,
}

/// A form on H ⊗ U with unknown values on pairs of (positive) generator letters,
/// evaluated symbolically through the extension rules.
pub struct SymForm {
    pub mp: Arc<MatchedPair>,
    pub unknowns: Unknowns,
    target: Target,
    /// σ and σ⁻¹ on H ⊗ H for ψ-maps.
    sigma: Option<(FormRef, FormRef)>,
    seeds: BTreeMap<(Letter, Letter), Poly>,
    memo: DashMap<(Monomial, Monomial), Poly>,
}

const SYM_DEPTH: usize = 256;

fn split_last(m: &Monomial) -> Option<(Monomial, Letter)> {
    let j = m.0.iter().rposition(|&e| e != 0)?;
    let l = if m.0[j] < 0 { Letter::inverse(j) } else { Letter::new(j) };
    let mut pre = m.clone();
    pre.0[j] -= if l.inv { -1 } else { 1 };
    Some((pre, l))
}

impl SymForm {
    /// Unknown `<prefix>_<x><y>` on each pair of generators, except the group-like pair,
    /// which gets `group_name`.
    pub fn new(mp: Arc<MatchedPair>, target: Target, sigma: Option<FormRef>) -> Result<Self> {
        let (ph, pu) = (mp.h.p(), mp.u.p());
        let prefix = match target {
            Target::SkewPairing => "t",
            Target::Psi => "p",
        };
        let group_name = match target {
            Target::SkewPairing => "lambda",
            Target::Psi => "zeta",
        };
        let mut names = Vec::new();
        let mut invertible = Vec::new();
        let mut pairs = Vec::new();
        for i in 0..ph.ngens() {
            for j in 0..pu.ngens() {
                let both = ph.is_group(i) && pu.is_group(j);
                names.push(if both { group_name.to_string() } else { format!("{prefix}_{}{}", ph.gens[i].name, pu.gens[j].name) });
                invertible.push(both);
                pairs.push((Letter::new(i), Letter::new(j)));
            }
        }
        let unknowns = Unknowns { names, invertible };
        let seeds = pairs.into_iter().enumerate().map(|(k, p)| (p, unknowns.var(k))).collect();
        let sigma = match (target, sigma) {
            (Target::Psi, Some(s)) => Some((s.clone(), convolution_inverse(s))),
            (Target::Psi, None) => return Err(Error::Other("ψ-maps need the cocycle σ".into())),
            (Target::SkewPairing, _) => None,
        };
        Ok(SymForm { mp, unknowns, target, sigma, seeds, memo: DashMap::new() })
    }

    pub fn value(&self, a: &Monomial, x: &Monomial) -> Result<Poly> {
        self.value_at(a, x, 0)
    }

    fn value_elem(&self, a: &Element, x: &Element, depth: usize) -> Result<Poly> {
        let mut out = Poly::zero();
        for (m, c) in a.iter() {
            for (n, d) in x.iter() {
                out.add_scaled(&self.value_at(m, n, depth)?, &c.try_mul(d)?);
            }
        }
        Ok(out)
    }

    fn value_at(&self, a: &Monomial, x: &Monomial, depth: usize) -> Result<Poly> {
        let (h, u) = (&self.mp.h, &self.mp.u);
        if x.is_one() {
            return Ok(self.unknowns.constant(h.counit_mono(a)));
        }
        if a.is_one() {
            return Ok(self.unknowns.constant(u.counit_mono(x)));
        }
        if depth > SYM_DEPTH {
            return Err(Error::Budget(SYM_DEPTH));
        }
        let key = (a.clone(), x.clone());
        if let Some(v) = self.memo.get(&key) {
            return Ok(v.clone());
        }
        let (xp, l) = split_last(x).expect("x ≠ 1");
        if l.inv {
            return Err(Error::Window(format!("value on {} needs an inverse letter outside the unknowns", u.p().fmt_mono(x))));
        }
        let mut out = Poly::zero();
        if !xp.is_one() {
            // τ(a, xp·l) = τ(a₁, l₁) τ(l₂▷a₂, xp)
            let dl = u.delta_mono(&u.p().letter_mono(l))?;
            for (ka, ca) in h.delta_mono(a)?.iter() {
                for (kl, cl) in dl.iter() {
                    let first = self.value_at(&ka[0], &kl[0], depth + 1)?;
                    if first.is_zero() {
                        continue;
                    }
                    let moved = self.mp.tri(&kl[1], &ka[1])?;
                    let second = self.value_elem(&moved, &Element::basis(xp.clone()), depth + 1)?;
                    out.add_scaled(&poly_mul(&first, &second)?, &ca.try_mul(cl)?);
                }
            }
        } else if let Some((ap, k)) = split_last(a).filter(|(ap, _)| !ap.is_one()) {
            if k.inv {
                return Err(Error::Window(format!("value on {} needs an inverse letter outside the unknowns", h.p().fmt_mono(a))));
            }
            let km = h.p().letter_mono(k);
            match &self.sigma {
                None => {
                    // τ(ap·k, l) = τ(ap₁, l₁) τ(k, l₂◁ap₂)
                    for (ka, ca) in h.delta_mono(&ap)?.iter() {
                        for (kl, cl) in u.delta_mono(x)?.iter() {
                            let first = self.value_at(&ka[0], &kl[0], depth + 1)?;
                            if first.is_zero() {
                                continue;
                            }
                            let moved = self.mp.tle(&kl[1], &ka[1])?;
                            let second = self.value_elem(&Element::basis(km.clone()), &moved, depth + 1)?;
                            out.add_scaled(&poly_mul(&first, &second)?, &ca.try_mul(cl)?);
                        }
                    }
                }
                Some((_, sinv)) => {
                    // ψ(ap·k, x) = σ⁻¹(ap₁, k₁) R(ap₂, k₂, x)
                    for (ka, ca) in h.delta_mono(&ap)?.iter() {
                        for (kk, ck) in h.delta_mono(&km)?.iter() {
                            let s = sinv.eval_mono(&ka[0], &kk[0])?;
                            if s.is_zero() {
                                continue;
                            }
                            let r = self.psi_rhs(&ka[1], &kk[1], x, depth + 1)?;
                            out.add_scaled(&r, &ca.try_mul(ck)?.try_mul(&s)?);
                        }
                    }
                }
            }
        } else {
            out = self.seeds.get(&(split_last(a).expect("a ≠ 1").1, l)).cloned().ok_or_else(|| {
                Error::Window(format!("no unknown for ({}, {})", h.p().fmt_mono(a), u.p().fmt_mono(x)))
            })?;
        }
        self.memo.insert(key, out.clone());
        Ok(out)
    }

    /// ψ(h₁,x₁) ψ(t₁, x₂◁h₂) σ(x₃▷h₃, (x₄◁h₄)▷t₂).
    fn psi_rhs(&self, hm: &Monomial, tm: &Monomial, x: &Monomial, depth: usize) -> Result<Poly> {
        let (h, u) = (&self.mp.h, &self.mp.u);
        let sigma = &self.sigma.as_ref().expect("ψ target").0;
        let mut out = Poly::zero();
        let dh = h.delta3_mono(hm)?;
        let dx = u.delta3_mono(x)?;
        let dt = h.delta_mono(tm)?;
        for (kh, ch) in dh.iter() {
            for (kx, cx) in dx.iter() {
                let p1 = self.value_at(&kh[0], &kx[0], depth)?;
                if p1.is_zero() {
                    continue;
                }
                let x2 = self.mp.tle(&kx[1], &kh[1])?;
                let x3 = self.mp.tri(&kx[2], &kh[2])?;
                if x3.is_zero() || x2.is_zero() {
                    continue;
                }
                let x4 = self.mp.tle(&kx[3], &kh[3])?;
                for (kt, ct) in dt.iter() {
                    let t2 = self.mp.tri_elem(&x4, &Element::basis(kt[1].clone()))?;
                    let s = eval(&**sigma, &x3, &t2)?;
                    if s.is_zero() {
                        continue;
                    }
                    let p2 = self.value_elem(&Element::basis(kt[0].clone()), &x2, depth)?;
                    out.add_scaled(&poly_mul(&p1, &p2)?, &ch.try_mul(cx)?.try_mul(ct)?.try_mul(&s)?);
                }
            }
        }
        Ok(out)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Residual {
    /// Normalized polynomial, printed.
    pub poly: String,
    /// Axiom instance that produced it first.
    pub at: String,
    #[serde(skip)]
    pub value: Poly,
}

#[derive(Clone, Debug, Serialize)]
pub struct ResidualSystem {
    pub target: Target,
    pub unknowns: Vec<String>,
    pub window: Window,
    pub instances: usize,
    pub residuals: Vec<Residual>,
    /// Unknowns forced to vanish by residuals that are powers of a single non-invertible unknown.
    pub forced_zero: Vec<String>,
    /// The residuals after setting the forced unknowns to zero, normalized and deduplicated.
    pub reduced: Vec<Residual>,
    #[serde(skip)]
    pub u: Option<Unknowns>,
}

impl ResidualSystem {
    fn unknowns(&self) -> &Unknowns {
        self.u.as_ref().expect("unknowns")
    }

    /// Whether some raw or reduced residual equals `p` up to the normalization.
    pub fn contains(&self, p: &Poly) -> Result<bool> {
        let n = normalize(self.unknowns(), p)?;
        Ok(self.residuals.iter().chain(&self.reduced).any(|r| r.value == n))
    }

    /// Whether `p` = 0 follows from the system: `p` is a residual, or `p` is a polynomial in
    /// one invertible unknown divisible by a residual in that unknown alone.
    pub fn implies(&self, p: &Poly) -> Result<bool> {
        if self.contains(p)? {
            return Ok(true);
        }
        let u = self.unknowns();
        let Some(v) = univariate(u, p) else { return Ok(false) };
        for r in self.residuals.iter().chain(&self.reduced) {
            if univariate(u, &r.value) == Some(v) && divides(&r.value, p, v)? {
                return Ok(true);
            }
        }
        Ok(false)
    }

    pub fn parse_poly(&self, s: &str, order: u32) -> Result<Poly> {
        parse_poly(self.unknowns(), s, order)
    }

    pub fn fmt_poly(&self, p: &Poly) -> String {
        self.unknowns().fmt(p)
    }
}

/// The two axiom families: products in U and products in H.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    /// (h, x, y): f(h, xy) = f(h₁, y₁) f(y₂▷h₂, x).
    UProduct,
    /// (g, h, x): f(gh, x) = f(g₁, x₁) f(h, x₂◁g₂) for skew pairings, and
    /// σ(h₁,t₁) ψ(h₂t₂, x) = ψ(h₁,x₁) ψ(t₁,x₂◁h₂) σ(x₃▷h₃,(x₄◁h₄)▷t₂) for ψ-maps.
    HProduct,
}

pub fn instance_label(sym: &SymForm, fam: Family, t: &[Monomial]) -> String {
    let (ph, pu) = (sym.mp.h.p(), sym.mp.u.p());
    match fam {
        Family::UProduct => format!("u-product ({}, {}, {})", ph.fmt_mono(&t[0]), pu.fmt_mono(&t[1]), pu.fmt_mono(&t[2])),
        Family::HProduct => format!("h-product ({}, {}, {})", ph.fmt_mono(&t[0]), ph.fmt_mono(&t[1]), pu.fmt_mono(&t[2])),
    }
}

/// LHS − RHS of one axiom instance.
pub fn instance_residual(sym: &SymForm, fam: Family, t: &[Monomial]) -> Result<Poly> {
    let mp = &sym.mp;
    let (h, u) = (&mp.h, &mp.u);
    let (ph, pu) = (h.p(), u.p());
    match (fam, &sym.sigma) {
        (Family::UProduct, _) => {
            let lhs = sym.value_elem(&Element::basis(t[0].clone()), &pu.mul_mono(&t[1], &t[2])?, 0)?;
            let mut rhs = Poly::zero();
            for (ka, ca) in h.delta_mono(&t[0])?.iter() {
                for (ky, cy) in u.delta_mono(&t[2])?.iter() {
                    let first = sym.value(&ka[0], &ky[0])?;
                    if first.is_zero() {
                        continue;
                    }
                    let moved = mp.tri(&ky[1], &ka[1])?;
                    let second = sym.value_elem(&moved, &Element::basis(t[1].clone()), 0)?;
                    rhs.add_scaled(&poly_mul(&first, &second)?, &ca.try_mul(cy)?);
                }
            }
            Ok(lhs.sub(&rhs))
        }
        (Family::HProduct, None) => {
            let lhs = sym.value_elem(&ph.mul_mono(&t[0], &t[1])?, &Element::basis(t[2].clone()), 0)?;
            let mut rhs = Poly::zero();
            for (kg, cg) in h.delta_mono(&t[0])?.iter() {
                for (kx, cx) in u.delta_mono(&t[2])?.iter() {
                    let first = sym.value(&kg[0], &kx[0])?;
                    if first.is_zero() {
                        continue;
                    }
                    let moved = mp.tle(&kx[1], &kg[1])?;
                    let second = sym.value_elem(&Element::basis(t[1].clone()), &moved, 0)?;
                    rhs.add_scaled(&poly_mul(&first, &second)?, &cg.try_mul(cx)?);
                }
            }
            Ok(lhs.sub(&rhs))
        }
        (Family::HProduct, Some((sigma, _))) => {
            let mut lhs = Poly::zero();
            for (ka, ca) in h.delta_mono(&t[0])?.iter() {
                for (kb, cb) in h.delta_mono(&t[1])?.iter() {
                    let s = sigma.eval_mono(&ka[0], &kb[0])?;
                    if s.is_zero() {
                        continue;
                    }
                    let v = sym.value_elem(&ph.mul_mono(&ka[1], &kb[1])?, &Element::basis(t[2].clone()), 0)?;
                    lhs.add_scaled(&v, &ca.try_mul(cb)?.try_mul(&s)?);
                }
            }
            let rhs = sym.psi_rhs(&t[0], &t[1], &t[2], 0)?;
            Ok(lhs.sub(&rhs))
        }
    }
}

/// The invertible unknown `p` depends on, when it depends on that one only.
fn univariate(u: &Unknowns, p: &Poly) -> Option<usize> {
    let mut var = None;
    for e in p.keys() {
        for (i, &x) in e.iter().enumerate() {
            if x != 0 {
                if !u.invertible[i] || var.is_some_and(|v| v != i) {
                    return None;
                }
                var = Some(i);
            }
        }
    }
    var
}

/// Univariate Laurent divisibility in unknown `v` (monomials are units).
fn divides(d: &Poly, p: &Poly, v: usize) -> Result<bool> {
    let dense = |q: &Poly| -> Vec<Scalar> {
        let lo = q.keys().map(|e| e[v]).min().unwrap_or(0);
        let hi = q.keys().map(|e| e[v]).max().unwrap_or(0);
        let mut out = vec![Scalar::zero(); (hi - lo + 1) as usize];
        for (e, c) in q.iter() {
            out[(e[v] - lo) as usize] = c.clone();
        }
        out
    };
    let dd = dense(d);
    let mut rem = dense(p);
    let lead = dd.last().expect("nonzero divisor").inv()?;
    while rem.len() >= dd.len() {
        let top = rem.last().expect("nonempty").try_mul(&lead)?;
        let off = rem.len() - dd.len();
        for (i, c) in dd.iter().enumerate() {
            rem[off + i] = rem[off + i].try_sub(&top.try_mul(c)?)?;
        }
        rem.pop();
    }
    Ok(rem.iter().all(|c| c.is_zero()))
}

/// Monomials of the window with no negative exponents.
fn monoid_basis(p: &Presentation, w: Window) -> Vec<Monomial> {
    p.enumerate_basis(w).into_iter().filter(|m| m.0.iter().all(|&e| e >= 0)).collect()
}

/// Every axiom instance on window tuples (total degree ≤ D, group exponents in [0, G]).
pub fn generate_constraints(sym: &SymForm, w: Window) -> Result<ResidualSystem> {
    let (ph, pu) = (sym.mp.h.p(), sym.mp.u.p());
    let hb = monoid_basis(ph, w);
    let ub = monoid_basis(pu, w);

    let huu = tuples(&[(ph, hb.clone()), (pu, ub.clone()), (pu, ub.clone())], w.max_degree);
    let hhu = tuples(&[(ph, hb.clone()), (ph, hb.clone()), (pu, ub.clone())], w.max_degree);
    let jobs: Vec<(Family, &Vec<Monomial>)> =
        huu.iter().map(|t| (Family::UProduct, t)).chain(hhu.iter().map(|t| (Family::HProduct, t))).collect();
    let found: Vec<(String, Result<Poly>)> = jobs
        .par_iter()
        .map(|(fam, t)| (instance_label(sym, *fam, t), instance_residual(sym, *fam, t)))
        .collect();

    let instances = found.len();
    let mut seen: BTreeMap<String, Residual> = BTreeMap::new();
    let mut order = Vec::new();
    for (label, r) in found {
        let p = match r {
            Ok(p) => p,
            Err(Error::Window(msg)) => return Err(Error::Window(format!("{label}: {msg}"))),
            Err(e) => return Err(e),
        };
        if p.is_zero() {
            continue;
        }
        let n = normalize(&sym.unknowns, &p)?;
        let key = sym.unknowns.fmt(&n);
        if !seen.contains_key(&key) {
            order.push(key.clone());
            seen.insert(key.clone(), Residual { poly: key, at: label, value: n });
        }
    }
    let mut residuals: Vec<Residual> = order.into_iter().map(|k| seen.remove(&k).expect("seen")).collect();
    residuals.sort_by(|a, b| a.at.cmp(&b.at).then_with(|| a.poly.cmp(&b.poly)));
    let (forced, reduced) = reduce_forced(&sym.unknowns, &residuals)?;
    Ok(ResidualSystem {
        target: sym.target,
        unknowns: sym.unknowns.names.clone(),
        window: w,
        instances,
        residuals,
        forced_zero: forced.into_iter().map(|i| sym.unknowns.names[i].clone()).collect(),
        reduced,
        u: Some(sym.unknowns.clone()),
    })
}

/// The single non-invertible unknown of a one-term residual, if that is all it has.
fn lone_unknown(u: &Unknowns, p: &Poly) -> Option<usize> {
    if p.len() != 1 {
        return None;
    }
    let e = p.keys().next()?;
    let mut hit = None;
    for (i, &x) in e.iter().enumerate() {
        if x != 0 && !u.invertible[i] {
            if hit.is_some() {
                return None;
            }
            hit = Some(i);
        }
    }
    hit
}

fn set_zero(p: &Poly, zero: &[bool]) -> Poly {
    p.iter().filter(|(e, _)| e.iter().enumerate().all(|(i, &x)| x == 0 || !zero[i])).map(|(e, c)| (e.clone(), c.clone())).collect()
}

/// t^k = 0 forces t = 0; substitute until nothing new is forced.
fn reduce_forced(u: &Unknowns, residuals: &[Residual]) -> Result<(Vec<usize>, Vec<Residual>)> {
    let mut zero = vec![false; u.len()];
    loop {
        let mut changed = false;
        for r in residuals {
            let p = set_zero(&r.value, &zero);
            if let Some(i) = lone_unknown(u, &p) {
                zero[i] = true;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    let mut seen: BTreeMap<String, Residual> = BTreeMap::new();
    for r in residuals {
        let p = set_zero(&r.value, &zero);
        if p.is_zero() {
            continue;
        }
        let n = normalize(u, &p)?;
        let key = u.fmt(&n);
        seen.entry(key.clone()).or_insert(Residual { poly: key, at: r.at.clone(), value: n });
    }
    let mut reduced: Vec<Residual> = seen.into_values().collect();
    reduced.sort_by(|a, b| a.at.cmp(&b.at).then_with(|| a.poly.cmp(&b.poly)));
    Ok(((0..u.len()).filter(|&i| zero[i]).collect(), reduced))
}

/// Values of the unknowns read off a concrete form.
pub fn values_of(sym: &SymForm, f: &FormRef) -> Result<Vec<Scalar>> {
    let (ph, pu) = (sym.mp.h.p(), sym.mp.u.p());
    let mut out = Vec::new();
    for i in 0..ph.ngens() {
        for j in 0..pu.ngens() {
            out.push(f.eval_mono(&ph.letter_mono(Letter::new(i)), &pu.letter_mono(Letter::new(j)))?);
        }
    }
    Ok(out)
}

/// Evaluate every residual at every sample point; a family passes when all vanish.
pub fn check_family(sys: &ResidualSystem, family: &str, samples: &[(String, Vec<Scalar>)]) -> Result<Report> {
    let t0 = Instant::now();
    let mut rep = Report::new("check-family", family).with_window(sys.window).param("samples", samples.len());
    let u = sys.unknowns();
    let max_deg = sys
        .residuals
        .iter()
        .flat_map(|r| r.value.keys().map(|e| e.iter().map(|x| x.unsigned_abs()).sum::<u32>()))
        .max()
        .unwrap_or(0);
    rep.note(format!("largest residual degree {max_deg}"));
    let items: Vec<(usize, usize)> = (0..samples.len()).flat_map(|s| (0..sys.residuals.len()).map(move |r| (s, r))).collect();
    rep.add_guarded("residuals-vanish", crate::report::sweep("residuals-vanish", &items, |(s, r)| {
        format!("{} at {}", sys.residuals[*r].poly, samples[*s].0)
    }, |(s, r)| {
        let v = poly_eval(&sys.residuals[*r].value, &samples[*s].1)?;
        Ok((!v.is_zero()).then(|| (v.to_string(), "0".to_string())))
    }))?;
    let _ = u;
    Ok(rep.finish(t0))
}

/// `lhs = rhs` with lhs a power of one unknown.
#[derive(Clone, Debug)]
pub struct Assumption {
    pub text: String,
    pub var: usize,
    pub power: i32,
    pub rhs: Poly,
}

fn parse_factor(u: &Unknowns, f: &str, order: u32) -> Result<Poly> {
    let f = f.trim();
    let (base, exp) = match f.split_once('^') {
        Some((b, e)) => (b.trim(), e.trim().trim_matches(|c| c == '(' || c == ')').parse::<i32>().map_err(|_| Error::Parse { pos: 0, msg: format!("bad exponent in {f}") })?),
        None => (f, 1),
    };
    if let Some(i) = u.index(base) {
        let mut e = vec![0; u.len()];
        e[i] = exp;
        return Ok(Poly::basis(e));
    }
    let s = parse_scalar(base, order)?;
    Ok(u.constant(s.pow(exp as i64)?))
}

/// Sums of products of scalars and unknowns, e.g. `t_ba - 2*lambda^2 + 1`.
pub fn parse_poly(u: &Unknowns, s: &str, order: u32) -> Result<Poly> {
    let s = s.replace(' ', "");
    let mut terms = Vec::new();
    let mut cur = String::new();
    let mut depth = 0;
    for (i, ch) in s.chars().enumerate() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            '+' | '-' if depth == 0 && i > 0 && !cur.ends_with('^') && !cur.ends_with('*') && !cur.ends_with('/') => {
                terms.push(std::mem::take(&mut cur));
            }
            _ => {}
        }
        cur.push(ch);
    }
    terms.push(cur);
    let mut out = Poly::zero();
    for t in terms.into_iter().filter(|t| !t.is_empty()) {
        let (sign, body) = match t.strip_prefix('-') {
            Some(b) => (-Scalar::one(), b.to_string()),
            None => (Scalar::one(), t.trim_start_matches('+').to_string()),
        };
        let mut p = u.constant(sign);
        for f in body.split('*') {
            p = poly_mul(&p, &parse_factor(u, f, order)?)?;
        }
        out.add_assign(&p);
    }
    Ok(out)
}

pub fn parse_assumption(u: &Unknowns, s: &str, order: u32) -> Result<Assumption> {
    let (l, r) = s.split_once('=').ok_or_else(|| Error::Parse { pos: 0, msg: format!("assumption {s} has no '='") })?;
    let lhs = parse_poly(u, l, order)?;
    let rhs = parse_poly(u, r, order)?;
    let (e, c) = match lhs.iter().collect::<Vec<_>>().as_slice() {
        [(e, c)] => ((*e).clone(), (*c).clone()),
        _ => return Err(Error::Parse { pos: 0, msg: format!("left side of {s} must be a power of one unknown") }),
    };
    let nz: Vec<usize> = (0..e.len()).filter(|&i| e[i] != 0).collect();
    if nz.len() != 1 || e[nz[0]] <= 0 || !c.is_one() {
        return Err(Error::Parse { pos: 0, msg: format!("left side of {s} must be a power of one unknown") });
    }
    let var = nz[0];
    if u.invertible[var] && rhs.is_zero() {
        return Err(Error::Constraint(format!("{} is a value on group-likes and cannot vanish", u.names[var])));
    }
    Ok(Assumption { text: s.to_string(), var, power: e[var], rhs })
}

/// Rewrite var^e with e ≥ power using the assumption (and e ≤ −power when rhs is a constant).
fn substitute(u: &Unknowns, p: &Poly, a: &Assumption) -> Result<Poly> {
    let const_rhs = a.rhs.iter().all(|(e, _)| e.iter().all(|&x| x == 0));
    let mut cur = p.clone();
    for _ in 0..64 {
        let mut next = Poly::zero();
        let mut changed = false;
        for (e, c) in cur.iter() {
            let x = e[a.var];
            if x >= a.power {
                let mut rest = e.clone();
                rest[a.var] -= a.power;
                next.add_assign(&poly_mul(&Poly::term(rest, c.clone()), &a.rhs)?);
                changed = true;
            } else if x <= -a.power && const_rhs && !a.rhs.is_zero() {
                let mut rest = e.clone();
                rest[a.var] += a.power;
                let k = a.rhs.coeff(&vec![0; u.len()]).inv()?;
                next.add_term(rest, c.try_mul(&k)?);
                changed = true;
            } else {
                next.add_term(e.clone(), c.clone());
            }
        }
        cur = next;
        if !changed {
            return Ok(cur);
        }
    }
    Err(Error::Budget(64))
}

#[derive(Clone, Debug, Serialize)]
pub struct BranchReport {
    pub assumptions: Vec<String>,
    /// Residuals that reduce to zero, with their original form.
    pub satisfied: Vec<String>,
    /// Reduced residuals that remain, normalized and deduplicated, with their instance.
    pub remaining: Vec<(String, String)>,
    /// Residuals that reduce to a nonzero constant.
    pub contradictions: Vec<(String, String)>,
}

/// Substitute the assumptions into every reduced residual.
pub fn vanishing_conditions(sys: &ResidualSystem, assumptions: &[Assumption]) -> Result<BranchReport> {
    let u = sys.unknowns();
    let mut satisfied = Vec::new();
    let mut remaining: BTreeMap<String, String> = BTreeMap::new();
    let mut contradictions = Vec::new();
    for r in &sys.reduced {
        let mut p = r.value.clone();
        for a in assumptions {
            p = substitute(u, &p, a)?;
        }
        if p.is_zero() {
            satisfied.push(r.poly.clone());
            continue;
        }
        let n = normalize(u, &p)?;
        if n.iter().all(|(e, _)| e.iter().all(|&x| x == 0)) || is_unit_monomial(u, &n) {
            contradictions.push((u.fmt(&p), r.at.clone()));
        } else {
            remaining.entry(u.fmt(&n)).or_insert_with(|| r.at.clone());
        }
    }
    Ok(BranchReport {
        assumptions: assumptions.iter().map(|a| a.text.clone()).collect(),
        satisfied,
        remaining: remaining.into_iter().collect(),
        contradictions,
    })
}

/// A single term in the invertible unknowns only.
fn is_unit_monomial(u: &Unknowns, p: &Poly) -> bool {
    p.len() == 1 && p.keys().all(|e| e.iter().enumerate().all(|(i, &x)| x == 0 || u.invertible[i]))
}

/// Residual system over E = H ⋈ U for the target. ψ-maps are taken over σ_α.
pub fn classify_target(target: Target, w: Window, alpha: &Scalar) -> Result<ResidualSystem> {
    let mp = crate::catalog::section5::section5_pair()?;
    let sigma = match target {
        Target::SkewPairing => None,
        Target::Psi => {
            if alpha.is_zero() {
                return Err(Error::Constraint("ψ-maps are classified over σ_α with α ≠ 0".into()));
            }
            Some(crate::catalog::forms::sigma_alpha(mp.h.clone(), alpha)?)
        }
    };
    let sym = SymForm::new(mp, target, sigma)?;
    generate_constraints(&sym, w)
}

/// Summary report: forced zeros and reduced residuals as notes, one entry per branch.
pub fn report_system(sys: &ResidualSystem, branches: &[BranchReport], started: Instant) -> Report {
    let target = match sys.target {
        Target::SkewPairing => "skew-pairing",
        Target::Psi => "psi",
    };
    let mut rep = Report::new("classify", target)
        .with_window(sys.window)
        .param("instances", sys.instances)
        .param("residuals", sys.residuals.len())
        .param("reduced", sys.reduced.len());
    rep.note(format!("forced zero: {}", sys.forced_zero.join(", ")));
    for r in &sys.reduced {
        rep.note(format!("{} = 0  [{}]", r.poly, r.at));
    }
    for b in branches {
        let tag = b.assumptions.join(", ");
        for (p, at) in &b.remaining {
            rep.note(format!("under {tag}: {p} = 0  [{at}]"));
        }
        for (p, at) in &b.contradictions {
            rep.note(format!("under {tag}: contradiction {p} = 0  [{at}]"));
        }
        if b.remaining.is_empty() && b.contradictions.is_empty() {
            rep.note(format!("under {tag}: every residual vanishes"));
        }
    }
    rep.finish(started)
}
