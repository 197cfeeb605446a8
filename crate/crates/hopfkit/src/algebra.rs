//! Algebras whose underlying space is a tensor product of presented algebras' bases:
//! presentations themselves, cocycle twists, twisted tensor products. Any of them can be
//! turned back into a presentation by ordered products of generators.

use std::sync::Arc;
use std::time::Instant;

use dashmap::DashMap;

use crate::error::{Error, Result};
use crate::form::FormRef;
use crate::hopf::HopfData;
use crate::pres::{Builder, Element, GenKind, Letter, Monomial, Presentation, Window};
use crate::report::{sweep, Report};
use crate::scalar::Scalar;
use crate::tensor::{self, Key, Tensor};

pub trait Algebra: Send + Sync {
    fn name(&self) -> String;
    /// Presentations whose canonical monomials index the basis, one per key slot.
    fn slots(&self) -> Vec<Arc<Presentation>>;
    fn mul_keys(&self, x: &[Monomial], y: &[Monomial]) -> Result<Tensor>;

    fn width(&self) -> usize {
        self.slots().len()
    }

    fn unit_key(&self) -> Key {
        self.slots().iter().map(|p| p.one()).collect()
    }

    fn key_degree(&self, k: &[Monomial]) -> u32 {
        self.slots().iter().zip(k).map(|(p, m)| p.degree(m)).sum()
    }

    fn fmt_key(&self, k: &[Monomial]) -> String {
        let s = self.slots();
        let refs: Vec<&Presentation> = s.iter().map(|p| &**p).collect();
        tensor::fmt_key(&refs, k)
    }
}

pub type AlgRef = Arc<dyn Algebra>;

pub fn mul(a: &dyn Algebra, x: &Tensor, y: &Tensor) -> Result<Tensor> {
    let mut out = Tensor::zero();
    for (kx, cx) in x.iter() {
        for (ky, cy) in y.iter() {
            out.add_scaled(&a.mul_keys(kx, ky)?, &cx.try_mul(cy)?);
        }
    }
    Ok(out)
}

/// Format a tensor whose keys concatenate keys of the given algebras.
pub fn fmt_multi(algs: &[&dyn Algebra], t: &Tensor) -> String {
    crate::pres::fmt_lin(t, |k| {
        let mut parts = Vec::new();
        let mut at = 0;
        for a in algs {
            let w = a.width();
            if at + w > k.len() {
                return format!("{k:?}");
            }
            parts.push(a.fmt_key(&k[at..at + w]));
            at += w;
        }
        parts.join(" | ")
    })
}

/// Basis keys with total degree ≤ D and group exponents in [−G, G].
pub fn basis(a: &dyn Algebra, w: Window) -> Vec<Key> {
    let mut out: Vec<Key> = vec![Vec::new()];
    for p in a.slots() {
        let b = p.enumerate_basis(w);
        let mut next = Vec::new();
        for k in &out {
            let d: u32 = k.iter().zip(a.slots()).map(|(m, q)| q.degree(m)).sum();
            for m in &b {
                if d + p.degree(m) <= w.max_degree {
                    let mut nk = k.clone();
                    nk.push(m.clone());
                    next.push(nk);
                }
            }
        }
        out = next;
    }
    out.sort_by(|x, y| a.key_degree(x).cmp(&a.key_degree(y)).then_with(|| x.cmp(y)));
    out
}

/// A presented algebra.
pub struct PresAlg(pub Arc<Presentation>);

pub fn pres_alg(p: Arc<Presentation>) -> AlgRef {
    Arc::new(PresAlg(p))
}

impl Algebra for PresAlg {
    fn name(&self) -> String {
        self.0.name.clone()
    }
    fn slots(&self) -> Vec<Arc<Presentation>> {
        vec![self.0.clone()]
    }
    fn mul_keys(&self, x: &[Monomial], y: &[Monomial]) -> Result<Tensor> {
        Ok(tensor::from_element(&self.0.mul_mono(&x[0], &y[0])?))
    }
}

/// _σH: x.y = σ(x₁, y₁) x₂y₂.
pub struct CocycleLeft {
    pub h: Arc<HopfData>,
    pub sigma: FormRef,
    memo: DashMap<(Monomial, Monomial), Tensor>,
}

pub fn cocycle_left(h: Arc<HopfData>, sigma: FormRef) -> AlgRef {
    Arc::new(CocycleLeft { h, sigma, memo: DashMap::new() })
}

impl Algebra for CocycleLeft {
    fn name(&self) -> String {
        format!("_{{{}}}{}", self.sigma.name(), self.h.name)
    }
    fn slots(&self) -> Vec<Arc<Presentation>> {
        vec![self.h.pres.clone()]
    }
    fn mul_keys(&self, x: &[Monomial], y: &[Monomial]) -> Result<Tensor> {
        let key = (x[0].clone(), y[0].clone());
        if let Some(v) = self.memo.get(&key) {
            return Ok(v.clone());
        }
        let p = self.h.p();
        let dx = self.h.delta_mono(&x[0])?;
        let dy = self.h.delta_mono(&y[0])?;
        let mut out = Element::zero();
        for (kx, cx) in dx.iter() {
            for (ky, cy) in dy.iter() {
                let s = self.sigma.eval_mono(&kx[0], &ky[0])?;
                if !s.is_zero() {
                    out.add_scaled(&p.mul_mono(&kx[1], &ky[1])?, &cx.try_mul(cy)?.try_mul(&s)?);
                }
            }
        }
        let t = tensor::from_element(&out);
        self.memo.insert(key, t.clone());
        Ok(t)
    }
}

/// H^σ: x.y = σ(x₁, y₁) x₂y₂ σ⁻¹(x₃, y₃).
pub struct CocycleHopf {
    pub h: Arc<HopfData>,
    pub sigma: FormRef,
    pub sigma_inv: FormRef,
    memo: DashMap<(Monomial, Monomial), Tensor>,
}

pub fn cocycle_hopf(h: Arc<HopfData>, sigma: FormRef, sigma_inv: FormRef) -> AlgRef {
    Arc::new(CocycleHopf { h, sigma, sigma_inv, memo: DashMap::new() })
}

impl Algebra for CocycleHopf {
    fn name(&self) -> String {
        format!("{}^{{{}}}", self.h.name, self.sigma.name())
    }
    fn slots(&self) -> Vec<Arc<Presentation>> {
        vec![self.h.pres.clone()]
    }
    fn mul_keys(&self, x: &[Monomial], y: &[Monomial]) -> Result<Tensor> {
        let key = (x[0].clone(), y[0].clone());
        if let Some(v) = self.memo.get(&key) {
            return Ok(v.clone());
        }
        let p = self.h.p();
        let dx = self.h.delta2_mono(&x[0])?;
        let dy = self.h.delta2_mono(&y[0])?;
        let mut out = Element::zero();
        for (kx, cx) in dx.iter() {
            for (ky, cy) in dy.iter() {
                let s = self.sigma.eval_mono(&kx[0], &ky[0])?;
                if s.is_zero() {
                    continue;
                }
                let t = self.sigma_inv.eval_mono(&kx[2], &ky[2])?;
                if !t.is_zero() {
                    out.add_scaled(&p.mul_mono(&kx[1], &ky[1])?, &cx.try_mul(cy)?.try_mul(&s)?.try_mul(&t)?);
                }
            }
        }
        let t = tensor::from_element(&out);
        self.memo.insert(key, t.clone());
        Ok(t)
    }
}

/// A linear map θ: R ⊗ A → A ⊗ R.
pub trait TwistMap: Send + Sync {
    fn name(&self) -> String;
    fn a(&self) -> &AlgRef;
    fn r(&self) -> &AlgRef;
    /// θ(r ⊗ a), keys are an A-key followed by an R-key.
    fn apply(&self, r: &[Monomial], a: &[Monomial]) -> Result<Tensor>;
}

pub type TwistRef = Arc<dyn TwistMap>;

/// A #_θ R with (a ⊗ r)(a' ⊗ r') = a θ(r ⊗ a') r'.
pub struct TwistedTensor {
    pub theta: TwistRef,
    memo: DashMap<(Key, Key), Tensor>,
}

pub fn twisted_tensor(theta: TwistRef) -> Arc<TwistedTensor> {
    Arc::new(TwistedTensor { theta, memo: DashMap::new() })
}

impl TwistedTensor {
    pub fn a(&self) -> &AlgRef {
        self.theta.a()
    }
    pub fn r(&self) -> &AlgRef {
        self.theta.r()
    }
    pub fn split<'k>(&self, k: &'k [Monomial]) -> (&'k [Monomial], &'k [Monomial]) {
        k.split_at(self.a().width())
    }
}

impl Algebra for TwistedTensor {
    fn name(&self) -> String {
        format!("{} #[{}] {}", self.a().name(), self.theta.name(), self.r().name())
    }
    fn slots(&self) -> Vec<Arc<Presentation>> {
        let mut s = self.a().slots();
        s.extend(self.r().slots());
        s
    }
    fn mul_keys(&self, x: &[Monomial], y: &[Monomial]) -> Result<Tensor> {
        let key = (x.to_vec(), y.to_vec());
        if let Some(v) = self.memo.get(&key) {
            return Ok(v.clone());
        }
        let wa = self.a().width();
        let (xa, xr) = x.split_at(wa);
        let (ya, yr) = y.split_at(wa);
        let th = self.theta.apply(xr, ya)?;
        let mut out = Tensor::zero();
        for (k, c) in th.iter() {
            let (ka, kr) = k.split_at(wa);
            let left = self.a().mul_keys(xa, ka)?;
            if left.is_zero() {
                continue;
            }
            let right = self.r().mul_keys(kr, yr)?;
            out.add_scaled(&tensor::outer(&left, &right), c);
        }
        self.memo.insert(key, out.clone());
        Ok(out)
    }
}

/// The presentation of an algebra read off along the basis Φ(m) = ordered product of letters.
pub struct Extraction {
    pub alg: AlgRef,
    pub pres: Arc<Presentation>,
    offsets: Vec<usize>,
    phi_memo: DashMap<Monomial, Tensor>,
    inv_scale: Vec<Option<Scalar>>,
}

const PHI_INV_BUDGET: usize = 100_000;

impl Extraction {
    pub fn new(alg: AlgRef, name: &str) -> Result<Arc<Extraction>> {
        let slots = alg.slots();
        let mut offsets = Vec::new();
        let mut b = Builder::new(name, 1);
        let mut order = 1u32;
        let mut total = 0;
        for p in &slots {
            offsets.push(total);
            total += p.ngens();
            if p.order != 1 {
                if order != 1 && order != p.order {
                    return Err(Error::Scalar(format!("{name}: slots over different cyclotomic fields")));
                }
                order = p.order;
            }
            for g in &p.gens {
                if b.gens().iter().any(|h| h.name == g.name) {
                    return Err(Error::Presentation(format!("{name}: generator {} appears in two slots", g.name)));
                }
                b = b.generator(g.clone());
            }
        }
        let gens = b.gens().to_vec();
        let scratch = placeholder(name, &gens, order)?;
        let mut ext = Extraction { alg, pres: scratch, offsets, phi_memo: DashMap::new(), inv_scale: vec![None; total] };
        // scale of Φ(g⁻¹) so that Φ(g)Φ(g⁻¹) = 1
        for (i, g) in gens.iter().enumerate() {
            if g.kind == GenKind::Group {
                let kp = ext.raw_key(i, 1);
                let kn = ext.raw_key(i, -1);
                let prod = ext.alg.mul_keys(&kp, &kn)?;
                let unit = ext.alg.unit_key();
                let c = prod.coeff(&unit);
                if prod.len() != 1 || c.is_zero() {
                    return Err(Error::NotInvertible(format!("{name}: {} has no inverse of the form c·{}⁻¹", g.name, g.name)));
                }
                ext.inv_scale[i] = Some(c.inv()?);
            }
        }
        let mut b = Builder::new(name, order);
        for g in &gens {
            b = b.generator(g.clone());
        }
        let letters = ext.pres.letters();
        for &l1 in &letters {
            for &l2 in &letters {
                if l1.gen > l2.gen {
                    let prod = mul(&*ext.alg, &ext.phi_letter(l1)?, &ext.phi_letter(l2)?)?;
                    b = b.letter_rule(l1, l2, ext.phi_inv(&prod)?);
                }
            }
        }
        for (s, p) in slots.iter().enumerate() {
            for j in 0..p.ngens() {
                if let Some((n, _)) = p.power_rule(j) {
                    let i = ext.offsets[s] + j;
                    let below = ext.phi(&ext.pres.gen_mono(i, *n as i32 - 1))?;
                    let prod = mul(&*ext.alg, &below, &ext.phi_letter(Letter::new(i))?)?;
                    b = b.power_elem(i, *n, ext.phi_inv(&prod)?);
                }
            }
        }
        ext.pres = b.build()?;
        ext.phi_memo.clear();
        Ok(Arc::new(ext))
    }

    fn raw_key(&self, i: usize, e: i32) -> Key {
        let slots = self.alg.slots();
        let mut k: Key = slots.iter().map(|p| p.one()).collect();
        let s = self.offsets.iter().rposition(|&o| o <= i).expect("offset");
        k[s].0[i - self.offsets[s]] = e;
        k
    }

    pub fn key_of(&self, m: &Monomial) -> Key {
        let slots = self.alg.slots();
        slots
            .iter()
            .zip(&self.offsets)
            .map(|(p, &o)| Monomial(m.0[o..o + p.ngens()].to_vec()))
            .collect()
    }

    pub fn mono_of(&self, k: &[Monomial]) -> Monomial {
        Monomial(k.iter().flat_map(|m| m.0.iter().copied()).collect())
    }

    pub fn phi_letter(&self, l: Letter) -> Result<Tensor> {
        let k = self.raw_key(l.gen, if l.inv { -1 } else { 1 });
        Ok(match (&self.inv_scale[l.gen], l.inv) {
            (Some(c), true) => Tensor::term(k, c.clone()),
            _ => Tensor::basis(k),
        })
    }

    /// Φ(m) for a canonical monomial of the extracted presentation.
    pub fn phi(&self, m: &Monomial) -> Result<Tensor> {
        if let Some(v) = self.phi_memo.get(m) {
            return Ok(v.clone());
        }
        let Some(j) = m.0.iter().rposition(|&e| e != 0) else {
            return Ok(Tensor::basis(self.alg.unit_key()));
        };
        let l = if m.0[j] < 0 { Letter::inverse(j) } else { Letter::new(j) };
        let mut pre = m.clone();
        pre.0[j] -= if l.inv { -1 } else { 1 };
        let res = mul(&*self.alg, &self.phi(&pre)?, &self.phi_letter(l)?)?;
        self.phi_memo.insert(m.clone(), res.clone());
        Ok(res)
    }

    pub fn phi_elem(&self, e: &Element) -> Result<Tensor> {
        e.map_linear(|m| self.phi(m))
    }

    /// Coordinates in the Φ-basis, peeling off the leading term of highest degree.
    pub fn phi_inv(&self, t: &Tensor) -> Result<Element> {
        let mut rest = t.clone();
        let mut out = Element::zero();
        for _ in 0..PHI_INV_BUDGET {
            let lead = rest.iter().max_by(|(x, _), (y, _)| {
                self.alg.key_degree(x).cmp(&self.alg.key_degree(y)).then_with(|| x.cmp(y))
            });
            let Some((k, c)) = lead.map(|(k, c)| (k.clone(), c.clone())) else {
                return Ok(out);
            };
            let m = self.mono_of(&k);
            let img = self.phi(&m)?;
            let lc = img.coeff(&k);
            if lc.is_zero() {
                return Err(Error::NotInvertible(format!("Φ({}) has no leading term", self.alg.fmt_key(&k))));
            }
            let f = c.try_div(&lc)?;
            rest.add_scaled(&img, &-f.clone());
            out.add_term(m, f);
        }
        Err(Error::Budget(PHI_INV_BUDGET))
    }

    /// Φ(m)·Φ(l) = Φ(m·l) for every window monomial m and letter l.
    pub fn verify(&self, w: Window) -> Result<Report> {
        let t0 = Instant::now();
        let p = &*self.pres;
        let mut rep = Report::new("extraction", &p.name).with_window(w);
        let pairs: Vec<(Monomial, Letter)> =
            p.enumerate_basis(w).into_iter().flat_map(|m| p.letters().into_iter().map(move |l| (m.clone(), l))).collect();
        rep.add(sweep(
            "phi-multiplicative",
            &pairs,
            |(m, l)| format!("{} · {}", p.fmt_mono(m), p.letter_name(*l)),
            |(m, l)| {
                let lhs = mul(&*self.alg, &self.phi(m)?, &self.phi_letter(*l)?)?;
                let rhs = self.phi_elem(&p.mul_letter(m, *l)?)?;
                Ok((lhs != rhs).then(|| (fmt_multi(&[&*self.alg], &lhs), fmt_multi(&[&*self.alg], &rhs))))
            },
        )?);
        Ok(rep.finish(t0))
    }

    /// Map a tensor of algebra keys (several copies side by side) to Φ-coordinates slot-group by slot-group.
    pub fn to_pres(&self, t: &Tensor, groups: usize) -> Result<Tensor> {
        let w = self.alg.width();
        let mut cur = t.clone();
        for g in 0..groups {
            cur = tensor::map_slots(&cur, g, w, |k| Ok(tensor::from_element(&self.phi_inv(&Tensor::basis(k.to_vec()))?)))?;
        }
        Ok(cur)
    }
}

/// A presentation with the right generators and every out-of-order pair commuting, used
/// only for its letter and monomial bookkeeping while the real rules are computed.
fn placeholder(name: &str, gens: &[crate::pres::Generator], order: u32) -> Result<Arc<Presentation>> {
    let mut b = Builder::new(name, order);
    for g in gens {
        b = b.generator(g.clone());
    }
    let n = gens.len();
    for i in 0..n {
        for j in 0..i {
            b = b.commute(&gens[i].name, &gens[j].name);
        }
    }
    b.build()
}

/// Same generators, and equal normal forms of every out-of-order letter pair and of every
/// power x^N where either side has a power rule.
pub fn presentation_match(found: &Presentation, expected: &Presentation) -> Result<Report> {
    let t0 = Instant::now();
    let mut rep = Report::new("presentation-match", &format!("{} vs {}", found.name, expected.name));
    let names = |p: &Presentation| p.gens.iter().map(|g| (g.name.clone(), g.kind)).collect::<Vec<_>>();
    if names(found) != names(expected) {
        rep.fail_reason("generators", format!("{:?} vs {:?}", names(found), names(expected)));
        return Ok(rep.finish(t0));
    }
    let letters = found.letters();
    let mut words: Vec<Vec<Letter>> = Vec::new();
    for &a in &letters {
        for &b in &letters {
            if a.gen > b.gen {
                words.push(vec![a, b]);
            }
        }
    }
    for i in 0..found.ngens() {
        let n = [found.power_rule(i), expected.power_rule(i)].iter().flatten().map(|(n, _)| *n).max();
        if let Some(n) = n {
            words.push(vec![Letter::new(i); n as usize]);
        }
    }
    rep.add(sweep(
        "relations",
        &words,
        |w| w.iter().map(|l| found.letter_name(*l)).collect::<Vec<_>>().join("·"),
        |w| {
            let l = found.normal_form(w)?;
            let r = expected.normal_form(w)?;
            Ok((l != r).then(|| (found.fmt_elem(&l), expected.fmt_elem(&r))))
        },
    )?);
    Ok(rep.finish(t0))
}
