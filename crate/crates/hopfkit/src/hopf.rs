//! Hopf structures on presented algebras: Δ, ε, S (and S⁻¹) given on generators and
//! extended (anti)multiplicatively along canonical words.

use std::collections::HashMap;
use std::sync::Arc;
use std::time::Instant;

use dashmap::DashMap;

use crate::error::{Error, Result};
use crate::pres::{Element, GenKind, Letter, Monomial, Presentation, Window};
use crate::report::{sweep, Report};
use crate::scalar::Scalar;
use crate::tensor::{self, Key, Tensor};

pub struct HopfData {
    pub name: String,
    pub pres: Arc<Presentation>,
    delta: HashMap<Letter, Tensor>,
    counit: HashMap<Letter, Scalar>,
    antipode: HashMap<Letter, Element>,
    antipode_inv: Option<HashMap<Letter, Element>>,
    delta_memo: DashMap<Monomial, Tensor>,
    s_memo: DashMap<Monomial, Element>,
    sinv_memo: DashMap<Monomial, Element>,
}

impl std::fmt::Debug for HopfData {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "HopfData({})", self.name)
    }
}

/// Inverse of a monomial in group generators only.
pub fn group_inverse(p: &Presentation, m: &Monomial) -> Result<Element> {
    let mut w = p.word(m);
    w.reverse();
    for l in &mut w {
        if !p.is_group(l.gen) {
            return Err(Error::NotInvertible(p.fmt_mono(m)));
        }
        l.inv = !l.inv;
    }
    p.normal_form(&w)
}

pub struct HopfBuilder {
    name: String,
    pres: Arc<Presentation>,
    delta: HashMap<Letter, Tensor>,
    counit: HashMap<Letter, Scalar>,
    antipode: HashMap<Letter, Element>,
    antipode_inv: HashMap<Letter, Element>,
    errors: Vec<String>,
}

impl HopfBuilder {
    pub fn new(name: &str, pres: Arc<Presentation>) -> Self {
        HopfBuilder {
            name: name.into(),
            pres,
            delta: HashMap::new(),
            counit: HashMap::new(),
            antipode: HashMap::new(),
            antipode_inv: HashMap::new(),
            errors: Vec::new(),
        }
    }

    fn gen(&mut self, name: &str) -> Option<usize> {
        let i = self.pres.gen_index(name);
        if i.is_none() {
            self.errors.push(format!("unknown generator {name}"));
        }
        i
    }

    fn mono(&mut self, s: &str) -> Monomial {
        match self.pres.parse_mono(s) {
            Ok(m) => m,
            Err(e) => {
                self.errors.push(e.to_string());
                self.pres.one()
            }
        }
    }

    pub fn group_like(mut self, name: &str) -> Self {
        let Some(i) = self.gen(name) else { return self };
        for l in [Letter::new(i), Letter::inverse(i)] {
            let m = self.pres.letter_mono(l);
            let inv = self.pres.letter_mono(Letter { gen: i, inv: !l.inv });
            self.delta.insert(l, Tensor::basis(vec![m.clone(), m]));
            self.counit.insert(l, Scalar::one());
            self.antipode.insert(l, Element::basis(inv.clone()));
            self.antipode_inv.insert(l, Element::basis(inv));
        }
        self
    }

    /// Δx = x⊗right + left⊗x with group-like monomials left, right.
    pub fn skew_primitive(mut self, name: &str, left: &str, right: &str) -> Self {
        let Some(i) = self.gen(name) else { return self };
        let l = self.mono(left);
        let r = self.mono(right);
        let x = self.pres.gen_mono(i, 1);
        let p = self.pres.clone();
        let res = (|| -> Result<()> {
            let mut d = Tensor::basis(vec![x.clone(), r.clone()]);
            d.add_term(vec![l.clone(), x.clone()], Scalar::one());
            let li = group_inverse(&p, &l)?;
            let ri = group_inverse(&p, &r)?;
            let xe = Element::basis(x.clone());
            let s = p.mul(&p.mul(&li, &xe)?, &ri)?.scaled(&-Scalar::one());
            let sinv = p.mul(&p.mul(&ri, &xe)?, &li)?.scaled(&-Scalar::one());
            self.delta.insert(Letter::new(i), d);
            self.counit.insert(Letter::new(i), Scalar::zero());
            self.antipode.insert(Letter::new(i), s);
            self.antipode_inv.insert(Letter::new(i), sinv);
            Ok(())
        })();
        if let Err(e) = res {
            self.errors.push(e.to_string());
        }
        self
    }

    pub fn primitive(self, name: &str) -> Self {
        self.skew_primitive(name, "1", "1")
    }

    /// Arbitrary data for one letter.
    pub fn letter(mut self, l: Letter, delta: Tensor, counit: Scalar, s: Element, sinv: Option<Element>) -> Self {
        self.delta.insert(l, delta);
        self.counit.insert(l, counit);
        self.antipode.insert(l, s);
        if let Some(si) = sinv {
            self.antipode_inv.insert(l, si);
        }
        self
    }

    pub fn build(self) -> Result<Arc<HopfData>> {
        if let Some(e) = self.errors.first() {
            return Err(Error::Presentation(format!("{}: {e}", self.name)));
        }
        for l in self.pres.letters() {
            if !self.delta.contains_key(&l) || !self.counit.contains_key(&l) || !self.antipode.contains_key(&l) {
                return Err(Error::Presentation(format!("{}: no Hopf data for {}", self.name, self.pres.letter_name(l))));
            }
        }
        let all_inv = self.pres.letters().iter().all(|l| self.antipode_inv.contains_key(l));
        Ok(Arc::new(HopfData {
            name: self.name,
            pres: self.pres,
            delta: self.delta,
            counit: self.counit,
            antipode: self.antipode,
            antipode_inv: if all_inv { Some(self.antipode_inv) } else { None },
            delta_memo: DashMap::new(),
            s_memo: DashMap::new(),
            sinv_memo: DashMap::new(),
        }))
    }
}

impl HopfData {
    pub fn p(&self) -> &Presentation {
        &self.pres
    }

    pub fn builder(&self) -> HopfBuilder {
        HopfBuilder {
            name: self.name.clone(),
            pres: self.pres.clone(),
            delta: self.delta.clone(),
            counit: self.counit.clone(),
            antipode: self.antipode.clone(),
            antipode_inv: self.antipode_inv.clone().unwrap_or_default(),
            errors: Vec::new(),
        }
    }

    /// Copy of this Hopf data with Δ replaced on one generator (mutation probes).
    pub fn with_delta(&self, name: &str, delta: Tensor) -> Result<Arc<HopfData>> {
        let i = self.pres.gen_index(name).ok_or_else(|| Error::Unknown(format!("generator {name}")))?;
        let mut b = self.builder();
        b.name = format!("{}[mutated Δ({name})]", self.name);
        b.delta.insert(Letter::new(i), delta);
        b.build()
    }

    pub fn delta_letter(&self, l: Letter) -> &Tensor {
        &self.delta[&l]
    }

    pub fn has_antipode_inv(&self) -> bool {
        self.antipode_inv.is_some()
    }

    fn split_last(&self, m: &Monomial) -> Option<(Monomial, Letter)> {
        let j = m.0.iter().rposition(|&e| e != 0)?;
        let l = if m.0[j] < 0 { Letter::inverse(j) } else { Letter::new(j) };
        let mut pre = m.clone();
        pre.0[j] -= if l.inv { -1 } else { 1 };
        Some((pre, l))
    }

    pub fn delta_mono(&self, m: &Monomial) -> Result<Tensor> {
        if let Some(v) = self.delta_memo.get(m) {
            return Ok(v.clone());
        }
        let res = match self.split_last(m) {
            None => Tensor::basis(vec![m.clone(), m.clone()]),
            Some((pre, l)) => {
                let dp = self.delta_mono(&pre)?;
                tensor::mul(&[&self.pres, &self.pres], &dp, &self.delta[&l])?
            }
        };
        self.delta_memo.insert(m.clone(), res.clone());
        Ok(res)
    }

    pub fn delta(&self, e: &Element) -> Result<Tensor> {
        e.map_linear(|m| self.delta_mono(m))
    }

    /// Δ applied to slot `slot` of a tensor.
    pub fn delta_at(&self, t: &Tensor, slot: usize) -> Result<Tensor> {
        tensor::map_slots(t, slot, 1, |k| self.delta_mono(&k[0]))
    }

    /// (Δ⊗id)Δ(m): x₁⊗x₂⊗x₃.
    pub fn delta2_mono(&self, m: &Monomial) -> Result<Tensor> {
        self.delta_at(&self.delta_mono(m)?, 0)
    }

    /// x₁⊗x₂⊗x₃⊗x₄.
    pub fn delta3_mono(&self, m: &Monomial) -> Result<Tensor> {
        self.delta_at(&self.delta2_mono(m)?, 0)
    }

    pub fn counit_mono(&self, m: &Monomial) -> Scalar {
        let mut acc = Scalar::one();
        for l in self.pres.word(m) {
            acc = &acc * &self.counit[&l];
            if acc.is_zero() {
                break;
            }
        }
        acc
    }

    pub fn counit(&self, e: &Element) -> Scalar {
        let mut acc = Scalar::zero();
        for (m, c) in e.iter() {
            acc = &acc + &(&self.counit_mono(m) * c);
        }
        acc
    }

    pub fn antipode_mono(&self, m: &Monomial) -> Result<Element> {
        if let Some(v) = self.s_memo.get(m) {
            return Ok(v.clone());
        }
        let res = match self.split_last(m) {
            None => Element::basis(m.clone()),
            Some((pre, l)) => self.pres.mul(&self.antipode[&l], &self.antipode_mono(&pre)?)?,
        };
        self.s_memo.insert(m.clone(), res.clone());
        Ok(res)
    }

    pub fn antipode(&self, e: &Element) -> Result<Element> {
        e.map_linear(|m| self.antipode_mono(m))
    }

    pub fn antipode_inv_mono(&self, m: &Monomial) -> Result<Element> {
        let table = self.antipode_inv.as_ref().ok_or_else(|| Error::Other(format!("{}: no S⁻¹ data", self.name)))?;
        if let Some(v) = self.sinv_memo.get(m) {
            return Ok(v.clone());
        }
        let res = match self.split_last(m) {
            None => Element::basis(m.clone()),
            Some((pre, l)) => self.pres.mul(&table[&l], &self.antipode_inv_mono(&pre)?)?,
        };
        self.sinv_memo.insert(m.clone(), res.clone());
        Ok(res)
    }

    pub fn antipode_inv(&self, e: &Element) -> Result<Element> {
        e.map_linear(|m| self.antipode_inv_mono(m))
    }

    pub fn is_group_like_mono(&self, m: &Monomial) -> bool {
        m.0.iter().zip(&self.pres.gens).all(|(&e, g)| e == 0 || g.kind == GenKind::Group)
    }

    pub fn fmt_tensor(&self, t: &Tensor) -> String {
        let slots: Vec<&Presentation> = t.keys().next().map(|k| vec![&*self.pres; k.len()]).unwrap_or_default();
        tensor::fmt_tensor(&slots, t)
    }

    /// Multiply the slots of a 2-tensor: m(x⊗y) = xy.
    pub fn multiply_out(&self, t: &Tensor) -> Result<Element> {
        let mut out = Element::zero();
        for (k, c) in t.iter() {
            out.add_scaled(&self.pres.mul_mono(&k[0], &k[1])?, c);
        }
        Ok(out)
    }
}

/// Window used for the exhaustive Δ(xy) = Δ(x)Δ(y) sweep over all pairs.
pub const FULL_PAIR_WINDOW: Window = Window { max_degree: 2, group_bound: 1 };

pub fn verify_hopf(h: &HopfData, w: Window) -> Result<Report> {
    let t0 = Instant::now();
    let p = &*h.pres;
    let mut rep = Report::new("verify-hopf", &h.name).with_window(w);
    let basis = p.enumerate_basis(w);
    let pp = [p, p];
    let ppp = [p, p, p];
    let label = |m: &Monomial| p.fmt_mono(m);

    rep.add(sweep("coassociativity", &basis, label, |m| {
        let d = h.delta_mono(m)?;
        let l = h.delta_at(&d, 0)?;
        let r = h.delta_at(&d, 1)?;
        Ok((l != r).then(|| (tensor::fmt_tensor(&ppp, &l), tensor::fmt_tensor(&ppp, &r))))
    })?);

    rep.add(sweep("counit", &basis, label, |m| {
        let d = h.delta_mono(m)?;
        let l = tensor::to_element(&tensor::contract(&d, 0, 1, |k| Ok(h.counit_mono(&k[0])))?)?;
        let r = tensor::to_element(&tensor::contract(&d, 1, 1, |k| Ok(h.counit_mono(&k[0])))?)?;
        let me = Element::basis(m.clone());
        if l != me {
            return Ok(Some((format!("(ε⊗id)Δ = {}", p.fmt_elem(&l)), p.fmt_mono(m))));
        }
        Ok((r != me).then(|| (format!("(id⊗ε)Δ = {}", p.fmt_elem(&r)), p.fmt_mono(m))))
    })?);

    let letters = p.letters();
    let pairs: Vec<(Monomial, Letter)> =
        basis.iter().flat_map(|m| letters.iter().map(move |l| (m.clone(), *l))).collect();
    let pair_label = |(m, l): &(Monomial, Letter)| format!("{} · {}", p.fmt_mono(m), p.letter_name(*l));

    rep.add(sweep("delta-multiplicative", &pairs, pair_label, |(m, l)| {
        let prod = p.mul_letter(m, *l)?;
        let lhs = h.delta(&prod)?;
        let rhs = tensor::mul(&pp, &h.delta_mono(m)?, h.delta_letter(*l))?;
        Ok((lhs != rhs).then(|| (tensor::fmt_tensor(&pp, &lhs), tensor::fmt_tensor(&pp, &rhs))))
    })?);

    rep.add(sweep("counit-multiplicative", &pairs, pair_label, |(m, l)| {
        let lhs = h.counit(&p.mul_letter(m, *l)?);
        let rhs = &h.counit_mono(m) * &h.counit_mono(&p.letter_mono(*l));
        Ok((lhs != rhs).then(|| (lhs.to_string(), rhs.to_string())))
    })?);

    rep.add(sweep("antipode-antimultiplicative", &pairs, pair_label, |(m, l)| {
        let lhs = h.antipode(&p.mul_letter(m, *l)?)?;
        let rhs = p.mul(&h.antipode_mono(&p.letter_mono(*l))?, &h.antipode_mono(m)?)?;
        Ok((lhs != rhs).then(|| (p.fmt_elem(&lhs), p.fmt_elem(&rhs))))
    })?);

    rep.add(sweep("antipode", &basis, label, |m| {
        let d = h.delta_mono(m)?;
        let unit = p.unit().scaled(&h.counit_mono(m));
        let l = h.multiply_out(&tensor::map_slots(&d, 0, 1, |k| Ok(tensor::from_element(&h.antipode_mono(&k[0])?)))?)?;
        if l != unit {
            return Ok(Some((format!("S(x₁)x₂ = {}", p.fmt_elem(&l)), p.fmt_elem(&unit))));
        }
        let r = h.multiply_out(&tensor::map_slots(&d, 1, 1, |k| Ok(tensor::from_element(&h.antipode_mono(&k[0])?)))?)?;
        Ok((r != unit).then(|| (format!("x₁S(x₂) = {}", p.fmt_elem(&r)), p.fmt_elem(&unit))))
    })?);

    if h.has_antipode_inv() {
        rep.add(sweep("antipode-inverse", &basis, label, |m| {
            let me = Element::basis(m.clone());
            let a = h.antipode(&h.antipode_inv_mono(m)?)?;
            if a != me {
                return Ok(Some((format!("S(S⁻¹(x)) = {}", p.fmt_elem(&a)), p.fmt_mono(m))));
            }
            let b = h.antipode_inv(&h.antipode_mono(m)?)?;
            Ok((b != me).then(|| (format!("S⁻¹(S(x)) = {}", p.fmt_elem(&b)), p.fmt_mono(m))))
        })?);
    }

    let small = p.enumerate_basis(FULL_PAIR_WINDOW);
    let full: Vec<(Monomial, Monomial)> =
        small.iter().flat_map(|x| small.iter().map(move |y| (x.clone(), y.clone()))).collect();
    rep.add(sweep(
        "delta-multiplicative-pairs",
        &full,
        |(x, y)| format!("{} · {}", p.fmt_mono(x), p.fmt_mono(y)),
        |(x, y)| {
            let lhs = h.delta(&p.mul_mono(x, y)?)?;
            let rhs = tensor::mul(&pp, &h.delta_mono(x)?, &h.delta_mono(y)?)?;
            Ok((lhs != rhs).then(|| (tensor::fmt_tensor(&pp, &lhs), tensor::fmt_tensor(&pp, &rhs))))
        },
    )?);

    Ok(rep.finish(t0))
}

/// Keys of the tensor square restricted to a window (both factors in the window).
pub fn window_pairs(p: &Presentation, w: Window) -> Vec<Key> {
    let b = p.enumerate_basis(w);
    let mut out = Vec::new();
    for x in &b {
        for y in &b {
            if p.degree(x) + p.degree(y) <= w.max_degree {
                out.push(vec![x.clone(), y.clone()]);
            }
        }
    }
    out
}

/// Tuples drawn from the given bases (one basis per position) with total degree ≤ max.
pub fn tuples(bases: &[(&Presentation, Vec<Monomial>)], max: u32) -> Vec<Vec<Monomial>> {
    let mut out: Vec<(Vec<Monomial>, u32)> = vec![(Vec::new(), 0)];
    for (p, b) in bases {
        let mut next = Vec::new();
        for (t, d) in &out {
            for m in b {
                let dm = d + p.degree(m);
                if dm <= max {
                    let mut nt = t.clone();
                    nt.push(m.clone());
                    next.push((nt, dm));
                }
            }
        }
        out = next;
    }
    out.into_iter().map(|(t, _)| t).collect()
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct TensorTermJson {
    pub monomials: Vec<String>,
    pub coeff: String,
}

/// Presentation JSON with the generator data of Δ, ε, S and S⁻¹ appended.
#[derive(Clone, Debug, serde::Serialize)]
pub struct HopfJson {
    pub name: String,
    pub presentation: crate::pres::PresentationJson,
    pub delta: std::collections::BTreeMap<String, Vec<TensorTermJson>>,
    pub counit: std::collections::BTreeMap<String, String>,
    pub antipode: std::collections::BTreeMap<String, Vec<crate::pres::TermJson>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub antipode_inv: Option<std::collections::BTreeMap<String, Vec<crate::pres::TermJson>>>,
}

impl HopfData {
    pub fn to_json(&self) -> HopfJson {
        let p = self.p();
        let name = |l: &Letter| p.letter_name(*l);
        let delta = self
            .delta
            .iter()
            .map(|(l, t)| {
                let terms = t.iter().map(|(k, c)| TensorTermJson { monomials: k.iter().map(|m| p.fmt_mono(m)).collect(), coeff: c.to_string() });
                (name(l), terms.collect())
            })
            .collect();
        let counit = self.counit.iter().map(|(l, c)| (name(l), c.to_string())).collect();
        let antipode = self.antipode.iter().map(|(l, e)| (name(l), crate::pres::elem_to_json(p, e))).collect();
        let antipode_inv =
            self.antipode_inv.as_ref().map(|m| m.iter().map(|(l, e)| (name(l), crate::pres::elem_to_json(p, e))).collect());
        HopfJson { name: self.name.clone(), presentation: p.to_json(), delta, counit, antipode, antipode_inv }
    }
}
