//! Matched pairs (H, U, ▷, ◁) with ▷: U⊗H → H and ◁: U⊗H → U, their bicrossed products
//! H ⋈ U, the twisting map ω and the reversed pair.

use std::sync::Arc;
use std::time::Instant;

use dashmap::DashMap;

use crate::algebra::Algebra;
use crate::error::{Error, Result};
use crate::hopf::{HopfBuilder, HopfData};
use crate::pres::{Builder, Element, Letter, Monomial, Presentation, Window};
use crate::report::{sweep, Report};
use crate::tensor::{self, Key, Tensor};

pub type ActFn = dyn Fn(&Monomial, &Monomial) -> Result<Element> + Send + Sync;

pub struct MatchedPair {
    pub name: String,
    pub h: Arc<HopfData>,
    pub u: Arc<HopfData>,
    right: Arc<ActFn>,
    left: Arc<ActFn>,
    memo_r: DashMap<(Monomial, Monomial), Element>,
    memo_l: DashMap<(Monomial, Monomial), Element>,
}

impl std::fmt::Debug for MatchedPair {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "MatchedPair({})", self.name)
    }
}

impl MatchedPair {
    /// `right(x, a)` is x▷a ∈ H, `left(x, a)` is x◁a ∈ U, for basis monomials x ∈ U, a ∈ H.
    pub fn new(name: &str, h: Arc<HopfData>, u: Arc<HopfData>, right: Arc<ActFn>, left: Arc<ActFn>) -> Arc<Self> {
        Arc::new(MatchedPair { name: name.into(), h, u, right, left, memo_r: DashMap::new(), memo_l: DashMap::new() })
    }

    pub fn right_fn(&self) -> Arc<ActFn> {
        self.right.clone()
    }

    pub fn left_fn(&self) -> Arc<ActFn> {
        self.left.clone()
    }

    /// x ▷ a.
    pub fn tri(&self, x: &Monomial, a: &Monomial) -> Result<Element> {
        let k = (x.clone(), a.clone());
        if let Some(v) = self.memo_r.get(&k) {
            return Ok(v.clone());
        }
        let v = (self.right)(x, a)?;
        self.memo_r.insert(k, v.clone());
        Ok(v)
    }

    /// x ◁ a.
    pub fn tle(&self, x: &Monomial, a: &Monomial) -> Result<Element> {
        let k = (x.clone(), a.clone());
        if let Some(v) = self.memo_l.get(&k) {
            return Ok(v.clone());
        }
        let v = (self.left)(x, a)?;
        self.memo_l.insert(k, v.clone());
        Ok(v)
    }

    pub fn tri_elem(&self, x: &Element, a: &Element) -> Result<Element> {
        bilinear(x, a, |m, n| self.tri(m, n))
    }

    pub fn tle_elem(&self, x: &Element, a: &Element) -> Result<Element> {
        bilinear(x, a, |m, n| self.tle(m, n))
    }

    /// ω(x ⊗ a) = x₁▷a₁ ⊗ x₂◁a₂, keys [H, U].
    pub fn omega_mono(&self, x: &Monomial, a: &Monomial) -> Result<Tensor> {
        let dx = self.u.delta_mono(x)?;
        let da = self.h.delta_mono(a)?;
        let mut out = Tensor::zero();
        for (kx, cx) in dx.iter() {
            for (ka, ca) in da.iter() {
                let r = self.tri(&kx[0], &ka[0])?;
                if r.is_zero() {
                    continue;
                }
                let l = self.tle(&kx[1], &ka[1])?;
                out.add_scaled(&tensor::outer(&tensor::from_element(&r), &tensor::from_element(&l)), &cx.try_mul(ca)?);
            }
        }
        Ok(out)
    }

    pub fn omega(&self, x: &Element, a: &Element) -> Result<Tensor> {
        let mut out = Tensor::zero();
        for (m, c) in x.iter() {
            for (n, d) in a.iter() {
                out.add_scaled(&self.omega_mono(m, n)?, &c.try_mul(d)?);
            }
        }
        Ok(out)
    }
}

fn bilinear(x: &Element, a: &Element, f: impl Fn(&Monomial, &Monomial) -> Result<Element>) -> Result<Element> {
    let mut out = Element::zero();
    for (m, c) in x.iter() {
        for (n, d) in a.iter() {
            out.add_scaled(&f(m, n)?, &c.try_mul(d)?);
        }
    }
    Ok(out)
}

/// Both actions trivial: the tensor product H ⊗ U.
pub fn trivial_pair(h: Arc<HopfData>, u: Arc<HopfData>) -> Arc<MatchedPair> {
    let (h1, u1) = (h.clone(), u.clone());
    let right: Arc<ActFn> = Arc::new(move |x, a| Ok(Element::term(a.clone(), u1.counit_mono(x))));
    let left: Arc<ActFn> = Arc::new(move |x, a| Ok(Element::term(x.clone(), h1.counit_mono(a))));
    MatchedPair::new(&format!("{}⊗{}", h.name, u.name), h, u, right, left)
}

/// U acting on H by `act`, with ◁ trivial: the smash product H ⋊ U.
pub fn semidirect_pair(name: &str, h: Arc<HopfData>, u: Arc<HopfData>, act: Arc<ActFn>) -> Arc<MatchedPair> {
    let h1 = h.clone();
    let left: Arc<ActFn> = Arc::new(move |x, a| Ok(Element::term(x.clone(), h1.counit_mono(a))));
    MatchedPair::new(name, h, u, act, left)
}

/// A copy of the pair with x▷a replaced at one basis pair (mutation probes).
pub fn override_right(mp: &MatchedPair, x: Monomial, a: Monomial, value: Element) -> Arc<MatchedPair> {
    let base = mp.right_fn();
    let right: Arc<ActFn> = Arc::new(move |m, n| if *m == x && *n == a { Ok(value.clone()) } else { base(m, n) });
    MatchedPair::new(&format!("{}[mutated ▷]", mp.name), mp.h.clone(), mp.u.clone(), right, mp.left_fn())
}

/// Tuples (x, y, z) over three bases with total degree within the window.
fn triples(b1: &[Monomial], d1: impl Fn(&Monomial) -> u32, b2: &[Monomial], d2: impl Fn(&Monomial) -> u32, b3: &[Monomial], d3: impl Fn(&Monomial) -> u32, max: u32) -> Vec<(Monomial, Monomial, Monomial)> {
    let mut out = Vec::new();
    for x in b1 {
        for y in b2 {
            let dxy = d1(x) + d2(y);
            if dxy > max {
                continue;
            }
            for z in b3 {
                if dxy + d3(z) <= max {
                    out.push((x.clone(), y.clone(), z.clone()));
                }
            }
        }
    }
    out
}

fn pairs(b1: &[Monomial], d1: impl Fn(&Monomial) -> u32, b2: &[Monomial], d2: impl Fn(&Monomial) -> u32, max: u32) -> Vec<(Monomial, Monomial)> {
    let mut out = Vec::new();
    for x in b1 {
        for y in b2 {
            if d1(x) + d2(y) <= max {
                out.push((x.clone(), y.clone()));
            }
        }
    }
    out
}

pub fn verify_matched_pair(mp: &MatchedPair, w: Window) -> Result<Report> {
    let t0 = Instant::now();
    let (h, u) = (&*mp.h, &*mp.u);
    let (ph, pu) = (h.p(), u.p());
    let mut rep = Report::new("verify-matched-pair", &mp.name).with_window(w);
    let hb = ph.enumerate_basis(w);
    let ub = pu.enumerate_basis(w);
    let dh = |m: &Monomial| ph.degree(m);
    let du = |m: &Monomial| pu.degree(m);
    let hh = [ph, ph];
    let uu = [pu, pu];
    let uh = [pu, ph];
    let fh = |e: &Element| ph.fmt_elem(e);
    let fu = |e: &Element| pu.fmt_elem(e);
    let one_h = ph.one();
    let one_u = pu.one();

    rep.add(sweep("normalization-right", &ub, |x| pu.fmt_mono(x), |x| {
        let l = mp.tri(x, &one_h)?;
        let r = ph.unit().scaled(&u.counit_mono(x));
        Ok((l != r).then(|| (format!("x▷1 = {}", fh(&l)), fh(&r))))
    })?);
    rep.add(sweep("normalization-left", &hb, |a| ph.fmt_mono(a), |a| {
        let l = mp.tle(&one_u, a)?;
        let r = pu.unit().scaled(&h.counit_mono(a));
        Ok((l != r).then(|| (format!("1◁a = {}", fu(&l)), fu(&r))))
    })?);
    rep.add(sweep("unit-acts-trivially", &hb, |a| ph.fmt_mono(a), |a| {
        let l = mp.tri(&one_u, a)?;
        Ok((l != Element::basis(a.clone())).then(|| (format!("1▷a = {}", fh(&l)), ph.fmt_mono(a))))
    })?);
    rep.add(sweep("acted-by-unit", &ub, |x| pu.fmt_mono(x), |x| {
        let l = mp.tle(x, &one_h)?;
        Ok((l != Element::basis(x.clone())).then(|| (format!("x◁1 = {}", fu(&l)), pu.fmt_mono(x))))
    })?);

    let uuh = triples(&ub, du, &ub, du, &hb, dh, w.max_degree);
    let lbl_uuh = |(x, y, a): &(Monomial, Monomial, Monomial)| format!("({}, {}, {})", pu.fmt_mono(x), pu.fmt_mono(y), ph.fmt_mono(a));
    rep.add(sweep("module-right", &uuh, lbl_uuh, |(x, y, a)| {
        let l = mp.tri_elem(&pu.mul_mono(x, y)?, &Element::basis(a.clone()))?;
        let r = mp.tri_elem(&Element::basis(x.clone()), &mp.tri(y, a)?)?;
        Ok((l != r).then(|| (fh(&l), fh(&r))))
    })?);

    let uhh = triples(&ub, du, &hb, dh, &hb, dh, w.max_degree);
    let lbl_uhh = |(x, a, b): &(Monomial, Monomial, Monomial)| format!("({}, {}, {})", pu.fmt_mono(x), ph.fmt_mono(a), ph.fmt_mono(b));
    rep.add(sweep("module-left", &uhh, lbl_uhh, |(x, a, b)| {
        let l = mp.tle_elem(&Element::basis(x.clone()), &ph.mul_mono(a, b)?)?;
        let r = mp.tle_elem(&mp.tle(x, a)?, &Element::basis(b.clone()))?;
        Ok((l != r).then(|| (fu(&l), fu(&r))))
    })?);

    let uhp = pairs(&ub, du, &hb, dh, w.max_degree);
    let lbl_uh = |(x, a): &(Monomial, Monomial)| format!("({}, {})", pu.fmt_mono(x), ph.fmt_mono(a));
    rep.add(sweep("module-coalgebra-right", &uhp, lbl_uh, |(x, a)| {
        let v = mp.tri(x, a)?;
        let l = h.delta(&v)?;
        let mut r = Tensor::zero();
        for (kx, cx) in u.delta_mono(x)?.iter() {
            for (ka, ca) in h.delta_mono(a)?.iter() {
                let t1 = tensor::from_element(&mp.tri(&kx[0], &ka[0])?);
                let t2 = tensor::from_element(&mp.tri(&kx[1], &ka[1])?);
                r.add_scaled(&tensor::outer(&t1, &t2), &cx.try_mul(ca)?);
            }
        }
        if l != r {
            return Ok(Some((tensor::fmt_tensor(&hh, &l), tensor::fmt_tensor(&hh, &r))));
        }
        let e = h.counit(&v);
        let e2 = &u.counit_mono(x) * &h.counit_mono(a);
        Ok((e != e2).then(|| (format!("ε(x▷a) = {e}"), e2.to_string())))
    })?);
    rep.add(sweep("module-coalgebra-left", &uhp, lbl_uh, |(x, a)| {
        let v = mp.tle(x, a)?;
        let l = u.delta(&v)?;
        let mut r = Tensor::zero();
        for (kx, cx) in u.delta_mono(x)?.iter() {
            for (ka, ca) in h.delta_mono(a)?.iter() {
                let t1 = tensor::from_element(&mp.tle(&kx[0], &ka[0])?);
                let t2 = tensor::from_element(&mp.tle(&kx[1], &ka[1])?);
                r.add_scaled(&tensor::outer(&t1, &t2), &cx.try_mul(ca)?);
            }
        }
        if l != r {
            return Ok(Some((tensor::fmt_tensor(&uu, &l), tensor::fmt_tensor(&uu, &r))));
        }
        let e = u.counit(&v);
        let e2 = &u.counit_mono(x) * &h.counit_mono(a);
        Ok((e != e2).then(|| (format!("ε(x◁a) = {e}"), e2.to_string())))
    })?);

    rep.add(sweep("compatibility-right", &uhh, lbl_uhh, |(x, a, b)| {
        let l = mp.tri_elem(&Element::basis(x.clone()), &ph.mul_mono(a, b)?)?;
        let mut r = Element::zero();
        for (kx, cx) in u.delta_mono(x)?.iter() {
            for (ka, ca) in h.delta_mono(a)?.iter() {
                let first = mp.tri(&kx[0], &ka[0])?;
                if first.is_zero() {
                    continue;
                }
                let inner = mp.tle(&kx[1], &ka[1])?;
                let second = mp.tri_elem(&inner, &Element::basis(b.clone()))?;
                r.add_scaled(&ph.mul(&first, &second)?, &cx.try_mul(ca)?);
            }
        }
        Ok((l != r).then(|| (fh(&l), fh(&r))))
    })?);
    rep.add(sweep("compatibility-left", &uuh, lbl_uuh, |(y, x, a)| {
        let l = mp.tle_elem(&pu.mul_mono(y, x)?, &Element::basis(a.clone()))?;
        let mut r = Element::zero();
        for (kx, cx) in u.delta_mono(x)?.iter() {
            for (ka, ca) in h.delta_mono(a)?.iter() {
                let inner = mp.tri(&kx[0], &ka[0])?;
                if inner.is_zero() {
                    continue;
                }
                let first = mp.tle_elem(&Element::basis(y.clone()), &inner)?;
                let second = mp.tle(&kx[1], &ka[1])?;
                r.add_scaled(&pu.mul(&first, &second)?, &cx.try_mul(ca)?);
            }
        }
        Ok((l != r).then(|| (fu(&l), fu(&r))))
    })?);
    rep.add(sweep("symmetry", &uhp, lbl_uh, |(y, a)| {
        let mut l = Tensor::zero();
        let mut r = Tensor::zero();
        for (ky, cy) in u.delta_mono(y)?.iter() {
            for (ka, ca) in h.delta_mono(a)?.iter() {
                let c = cy.try_mul(ca)?;
                let l1 = tensor::from_element(&mp.tle(&ky[0], &ka[0])?);
                let l2 = tensor::from_element(&mp.tri(&ky[1], &ka[1])?);
                l.add_scaled(&tensor::outer(&l1, &l2), &c);
                let r1 = tensor::from_element(&mp.tle(&ky[1], &ka[1])?);
                let r2 = tensor::from_element(&mp.tri(&ky[0], &ka[0])?);
                r.add_scaled(&tensor::outer(&r1, &r2), &c);
            }
        }
        Ok((l != r).then(|| (tensor::fmt_tensor(&uh, &l), tensor::fmt_tensor(&uh, &r))))
    })?);
    Ok(rep.finish(t0))
}

/// U_{>0} ▷ H = 0 and U ◁ H_{>0} = 0 on the window.
pub fn verify_action_zero(mp: &MatchedPair, w: Window) -> Result<Report> {
    let t0 = Instant::now();
    let (ph, pu) = (mp.h.p(), mp.u.p());
    let mut rep = Report::new("action-zero", &mp.name).with_window(w);
    let hb = ph.enumerate_basis(w);
    let ub = pu.enumerate_basis(w);
    let all = pairs(&ub, |m| pu.degree(m), &hb, |m| ph.degree(m), w.max_degree);
    let lbl = |(x, a): &(Monomial, Monomial)| format!("({}, {})", pu.fmt_mono(x), ph.fmt_mono(a));
    let pos_u: Vec<_> = all.iter().filter(|(x, _)| pu.degree(x) > 0).cloned().collect();
    rep.add(sweep("positive-U-acts-by-zero", &pos_u, lbl, |(x, a)| {
        let v = mp.tri(x, a)?;
        Ok((!v.is_zero()).then(|| (ph.fmt_elem(&v), "0".into())))
    })?);
    let pos_h: Vec<_> = all.iter().filter(|(_, a)| ph.degree(a) > 0).cloned().collect();
    rep.add(sweep("positive-H-acts-by-zero", &pos_h, lbl, |(x, a)| {
        let v = mp.tle(x, a)?;
        Ok((!v.is_zero()).then(|| (pu.fmt_elem(&v), "0".into())))
    })?);
    Ok(rep.finish(t0))
}

fn check_disjoint(h: &Presentation, u: &Presentation) -> Result<()> {
    for g in &u.gens {
        if h.gen_index(&g.name).is_some() {
            return Err(Error::Presentation(format!("generator {} occurs in both {} and {}", g.name, h.name, u.name)));
        }
    }
    Ok(())
}

/// The E-monomial h⋈u.
pub fn join(h: &Monomial, u: &Monomial) -> Monomial {
    Monomial(h.0.iter().chain(u.0.iter()).copied().collect())
}

/// Split an E-monomial into its H and U parts.
pub fn split(m: &Monomial, nh: usize) -> (Monomial, Monomial) {
    (Monomial(m.0[..nh].to_vec()), Monomial(m.0[nh..].to_vec()))
}

fn join_tensor(t: &Tensor) -> Element {
    t.iter().map(|(k, c)| (join(&k[0], &k[1]), c.clone())).collect()
}

fn shift(l: Letter, by: usize) -> Letter {
    Letter { gen: l.gen + by, inv: l.inv }
}

/// H ⋈ U as a presentation on the generators of H followed by those of U: the relations of
/// both factors and x·l = ω(x ⊗ l) for every U-letter x and H-letter l.
pub fn bicrossed_presentation(mp: &MatchedPair, name: &str) -> Result<Arc<Presentation>> {
    let (ph, pu) = (mp.h.p(), mp.u.p());
    check_disjoint(ph, pu)?;
    let nh = ph.ngens();
    let n = nh + pu.ngens();
    let order = match (ph.order, pu.order) {
        (1, o) | (o, 1) => o,
        (a, b) if a == b => a,
        (a, b) => return Err(Error::Scalar(format!("{name}: factors over different cyclotomic fields ({a}, {b})"))),
    };
    let mut b = Builder::new(name, order);
    for g in ph.gens.iter().chain(pu.gens.iter()) {
        b = b.generator(g.clone());
    }
    for ((l1, l2), rhs) in ph.pair_rules() {
        b = b.letter_rule(*l1, *l2, crate::pres::embed_elem(rhs, 0, n));
    }
    for ((l1, l2), rhs) in pu.pair_rules() {
        b = b.letter_rule(shift(*l1, nh), shift(*l2, nh), crate::pres::embed_elem(rhs, nh, n));
    }
    for i in 0..ph.ngens() {
        if let Some((k, rhs)) = ph.power_rule(i) {
            b = b.power_elem(i, *k, crate::pres::embed_elem(rhs, 0, n));
        }
    }
    for i in 0..pu.ngens() {
        if let Some((k, rhs)) = pu.power_rule(i) {
            b = b.power_elem(i + nh, *k, crate::pres::embed_elem(rhs, nh, n));
        }
    }
    for x in pu.letters() {
        for l in ph.letters() {
            let w = mp.omega_mono(&pu.letter_mono(x), &ph.letter_mono(l))?;
            b = b.letter_rule(shift(x, nh), l, join_tensor(&w));
        }
    }
    b.build().map_err(|e| {
        Error::Presentation(format!("{e}; the product is still available through BicrossedAlg"))
    })
}

/// H ⋈ U with the tensor-product coalgebra and H, U embedded as Hopf subalgebras.
pub fn bicrossed_product(mp: &MatchedPair) -> Result<Arc<HopfData>> {
    let name = format!("{}⋈{}", mp.h.name, mp.u.name);
    bicrossed_product_named(mp, &name)
}

pub fn bicrossed_product_named(mp: &MatchedPair, name: &str) -> Result<Arc<HopfData>> {
    let p = bicrossed_presentation(mp, name)?;
    let nh = mp.h.p().ngens();
    let n = p.ngens();
    let mut hb = HopfBuilder::new(name, p.clone());
    let emb_t = |t: &Tensor, off: usize| -> Tensor {
        t.iter().map(|(k, c)| (k.iter().map(|m| crate::pres::embed(m, off, n)).collect::<Key>(), c.clone())).collect()
    };
    for (src, off) in [(&mp.h, 0usize), (&mp.u, nh)] {
        for l in src.p().letters() {
            let m = src.p().letter_mono(l);
            let sinv = if src.has_antipode_inv() {
                Some(crate::pres::embed_elem(&src.antipode_inv_mono(&m)?, off, n))
            } else {
                None
            };
            hb = hb.letter(
                shift(l, off),
                emb_t(src.delta_letter(l), off),
                src.counit_mono(&m),
                crate::pres::embed_elem(&src.antipode_mono(&m)?, off, n),
                sinv,
            );
        }
    }
    hb.build()
}

/// H ⋈ U as a multiplication routine on keys [H, U]:
/// (a⋈x)(b⋈y) = a(x₁▷b₁) ⋈ (x₂◁b₂)y.
pub struct BicrossedAlg {
    pub mp: Arc<MatchedPair>,
}

impl Algebra for BicrossedAlg {
    fn name(&self) -> String {
        format!("{}⋈{}", self.mp.h.name, self.mp.u.name)
    }
    fn slots(&self) -> Vec<Arc<Presentation>> {
        vec![self.mp.h.pres.clone(), self.mp.u.pres.clone()]
    }
    fn mul_keys(&self, x: &[Monomial], y: &[Monomial]) -> Result<Tensor> {
        let (ph, pu) = (self.mp.h.p(), self.mp.u.p());
        let w = self.mp.omega_mono(&x[1], &y[0])?;
        let mut out = Tensor::zero();
        for (k, c) in w.iter() {
            let l = tensor::from_element(&ph.mul_mono(&x[0], &k[0])?);
            let r = tensor::from_element(&pu.mul_mono(&k[1], &y[1])?);
            out.add_scaled(&tensor::outer(&l, &r), c);
        }
        Ok(out)
    }
}

/// (U, H, ▷̃, ◁̃) with a▷̃x = S_U(S_U⁻¹(x)◁S_H⁻¹(a)) and a◁̃x = S_H(S_U⁻¹(x)▷S_H⁻¹(a)).
pub fn reverse_pair(mp: &Arc<MatchedPair>) -> Result<Arc<MatchedPair>> {
    if !mp.h.has_antipode_inv() || !mp.u.has_antipode_inv() {
        return Err(Error::NotInvertible(format!("{}: antipode inverses are required", mp.name)));
    }
    let m1 = mp.clone();
    let right: Arc<ActFn> = Arc::new(move |a, x| {
        let xi = m1.u.antipode_inv_mono(x)?;
        let ai = m1.h.antipode_inv_mono(a)?;
        m1.u.antipode(&m1.tle_elem(&xi, &ai)?)
    });
    let m2 = mp.clone();
    let left: Arc<ActFn> = Arc::new(move |a, x| {
        let xi = m2.u.antipode_inv_mono(x)?;
        let ai = m2.h.antipode_inv_mono(a)?;
        m2.h.antipode(&m2.tri_elem(&xi, &ai)?)
    });
    Ok(MatchedPair::new(&format!("rev({})", mp.name), mp.u.clone(), mp.h.clone(), right, left))
}

/// reverse ∘ reverse returns the original actions on the window.
pub fn verify_double_reverse(mp: &Arc<MatchedPair>, w: Window) -> Result<Report> {
    let t0 = Instant::now();
    let rr = reverse_pair(&reverse_pair(mp)?)?;
    let (ph, pu) = (mp.h.p(), mp.u.p());
    let mut rep = Report::new("reverse-roundtrip", &mp.name).with_window(w);
    let all = pairs(&pu.enumerate_basis(w), |m| pu.degree(m), &ph.enumerate_basis(w), |m| ph.degree(m), w.max_degree);
    let lbl = |(x, a): &(Monomial, Monomial)| format!("({}, {})", pu.fmt_mono(x), ph.fmt_mono(a));
    rep.add(sweep("right-action", &all, lbl, |(x, a)| {
        let (l, r) = (rr.tri(x, a)?, mp.tri(x, a)?);
        Ok((l != r).then(|| (ph.fmt_elem(&l), ph.fmt_elem(&r))))
    })?);
    rep.add(sweep("left-action", &all, lbl, |(x, a)| {
        let (l, r) = (rr.tle(x, a)?, mp.tle(x, a)?);
        Ok((l != r).then(|| (pu.fmt_elem(&l), pu.fmt_elem(&r))))
    })?);
    Ok(rep.finish(t0))
}

/// Inside E = H ⋈ U: a⋈x = Σ y·t over y⊗t = ω̃(a⊗x), and x·a = Σ y·t over ω̃(ω(x⊗a)).
pub fn verify_reverse_match(mp: &Arc<MatchedPair>, e: &HopfData, w: Window) -> Result<Report> {
    let t0 = Instant::now();
    let rev = reverse_pair(mp)?;
    let (ph, pu) = (mp.h.p(), mp.u.p());
    let pe = e.p();
    let nh = ph.ngens();
    let n = pe.ngens();
    let mut rep = Report::new("reverse-match", &mp.name).with_window(w);
    let all = pairs(&ph.enumerate_basis(w), |m| ph.degree(m), &pu.enumerate_basis(w), |m| pu.degree(m), w.max_degree);
    let lbl = |(a, x): &(Monomial, Monomial)| format!("({}, {})", ph.fmt_mono(a), pu.fmt_mono(x));
    // ω̃ has keys [U, H]; multiply y·t in E
    let mult_rev = |t: &Tensor| -> Result<Element> {
        let mut out = Element::zero();
        for (k, c) in t.iter() {
            let y = crate::pres::embed(&k[0], nh, n);
            let tt = crate::pres::embed(&k[1], 0, n);
            out.add_scaled(&pe.mul_mono(&y, &tt)?, c);
        }
        Ok(out)
    };
    rep.add(sweep("a-then-x", &all, lbl, |(a, x)| {
        let l = Element::basis(join(a, x));
        let r = mult_rev(&rev.omega_mono(a, x)?)?;
        Ok((l != r).then(|| (pe.fmt_elem(&l), pe.fmt_elem(&r))))
    })?);
    rep.add(sweep("x-then-a", &all, lbl, |(a, x)| {
        let l = pe.mul_mono(&crate::pres::embed(x, nh, n), &crate::pres::embed(a, 0, n))?;
        let om = mp.omega_mono(x, a)?;
        let mut r = Element::zero();
        for (k, c) in om.iter() {
            r.add_scaled(&mult_rev(&rev.omega_mono(&k[0], &k[1])?)?, c);
        }
        Ok((l != r).then(|| (pe.fmt_elem(&l), pe.fmt_elem(&r))))
    })?);
    Ok(rep.finish(t0))
}
