//! Catalog items by name: parameter schemas, validation, default windows and JSON export.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;
use serde_json::{json, Value};

use crate::algebra::{cocycle_left, pres_alg, twisted_tensor, Extraction, TwistRef};
use crate::bicrossed::{trivial_pair, MatchedPair};
use crate::catalog::forms::{eta_alpha, psi_zeta, sigma_alpha, sigma_lambda_kx, tau_lambda, tau_xi_beta, weyl_psi};
use crate::catalog::section5::{
    deformation_pres, e_def_hopf, e_hopf, h_alpha_pres, h_hopf, l_alpha_hopf, section5_pair, u_hopf, Abl, HaReading,
};
use crate::catalog::unrolled::{a_abc_pres, check_ell, kx_hopf, l_a00_hopf, unrolled_hopf, uq_hopf};
use crate::error::{Error, Result};
use crate::form::{materialize, FormRef};
use crate::galois::theta_from_psi;
use crate::hopf::{HopfBuilder, HopfData};
use crate::pres::{Builder, Presentation, Window};
use crate::scalar::{parse_scalar, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Kind {
    Hopf,
    Algebra,
    Form,
    MatchedPair,
    TwistingMap,
}

#[derive(Clone, Debug, Serialize)]
pub struct ParamSpec {
    pub name: &'static str,
    pub default: &'static str,
    pub constraint: &'static str,
}

#[derive(Clone, Debug, Serialize)]
pub struct ItemSpec {
    pub name: &'static str,
    pub kind: Kind,
    pub params: Vec<ParamSpec>,
    pub about: &'static str,
}

const fn p(name: &'static str, default: &'static str, constraint: &'static str) -> ParamSpec {
    ParamSpec { name, default, constraint }
}

const ABL: &str = "α(1+λ⁴)=0, β(1−λ²)=0, λ≠0";

pub fn list() -> Vec<ItemSpec> {
    use Kind::*;
    let abl = || vec![p("alpha", "0", ABL), p("beta", "0", ABL), p("lambda", "1", ABL)];
    let ell = || p("ell", "2", "integer ≥ 2; q is a primitive 2ℓ-th root of unity");
    vec![
        ItemSpec { name: "H", kind: Hopf, params: vec![], about: "k[b,c] # kZ, h b = −b h, h c = −c h" },
        ItemSpec { name: "U", kind: Hopf, params: vec![], about: "k[a] # kZ, g a = −a g" },
        ItemSpec { name: "E", kind: Hopf, params: vec![], about: "the smash product k[a,b,c] # kZ²" },
        ItemSpec { name: "E_def", kind: Hopf, params: abl(), about: "E^λ_{α,β}" },
        ItemSpec { name: "A_def", kind: Algebra, params: abl(), about: "A^λ_{α,β}, a right E-Galois object" },
        ItemSpec { name: "H_alpha", kind: Algebra, params: vec![p("alpha", "1", "any")], about: "H_α = _σH for σ = σ_α" },
        ItemSpec { name: "L_alpha", kind: Hopf, params: vec![p("alpha", "1", "any")], about: "L_α = H^σ for σ = σ_α" },
        ItemSpec { name: "Uq", kind: Hopf, params: vec![ell()], about: "small quantum sl₂ Ū_q" },
        ItemSpec { name: "A_abc", kind: Algebra, params: vec![ell(), p("a", "1", "any"), p("b", "0", "any"), p("c", "0", "any")], about: "Ū_q-Galois object A_(a,b,c)" },
        ItemSpec { name: "L_a00", kind: Hopf, params: vec![ell(), p("a", "1", "any")], about: "lifting L_(a,0,0)" },
        ItemSpec { name: "unrolled", kind: Hopf, params: vec![ell(), p("a", "1", "any")], about: "L_(a,0,0) ⋊ k[X], X▷E = 2E, X▷F = −2F" },
        ItemSpec { name: "kX", kind: Hopf, params: vec![], about: "k[X] with X primitive" },
        ItemSpec { name: "weyl", kind: Algebra, params: vec![], about: "A₁ = k[y] #_τ k[x] with τ(x,y)=1" },
        ItemSpec { name: "section5", kind: MatchedPair, params: vec![], about: "(H, U, ▷, ◁) with g▷b = −c, U_{>0}▷H = 0" },
        ItemSpec { name: "sigma_alpha", kind: Form, params: vec![p("alpha", "1", "any")], about: "Hopf 2-cocycle σ_α on H" },
        ItemSpec { name: "eta_alpha", kind: Form, params: vec![p("alpha", "1", "any")], about: "η with σ_α = e^η" },
        ItemSpec { name: "tau_lambda", kind: Form, params: vec![p("lambda", "1", "λ≠0")], about: "skew pairing τ_λ(h^p,g^q) = λ^{pq}" },
        ItemSpec { name: "tau_xi_beta", kind: Form, params: vec![p("xi", "1", "ξ²=1"), p("beta", "1", "any")], about: "skew pairing τ^β_ξ" },
        ItemSpec { name: "psi_zeta", kind: Form, params: vec![p("zeta", "q", "ζ⁴=−1")], about: "ψ_ζ(h^p,g^q) = ζ^{pq} over σ_α" },
        ItemSpec { name: "sigma_lambda", kind: Form, params: vec![p("lambda", "1", "λ≠0")], about: "σ_λ(X^n,X^m) = δ_{n,m} n! λ^n on k[X]" },
        ItemSpec { name: "weyl_tau", kind: Form, params: vec![], about: "τ(y^m,x^n) = δ_{m,n} n! on k[y] ⊗ k[x]" },
        ItemSpec { name: "theta_zeta", kind: TwistingMap, params: vec![p("alpha", "1", "α(1+ζ⁴)=0"), p("zeta", "q", "ζ⁴=−1")], about: "θ_ζ on H_α ⊗ U" },
        ItemSpec { name: "theta_beta", kind: TwistingMap, params: vec![p("xi", "1", "ξ²=1"), p("beta", "1", "any")], about: "θ^β_ξ on H ⊗ U" },
    ]
}

pub fn spec(name: &str) -> Result<ItemSpec> {
    list().into_iter().find(|s| s.name == name).ok_or_else(|| Error::Unknown(format!("catalog item {name}")))
}

pub enum Built {
    Hopf(Arc<HopfData>),
    Algebra(Arc<Presentation>),
    Form(FormRef),
    Pair(Arc<MatchedPair>),
    Twist(TwistRef),
}

pub struct Item {
    pub spec: ItemSpec,
    pub params: BTreeMap<String, Scalar>,
    pub built: Built,
    pub window: Window,
    /// Identities downstream checks are expected to confirm.
    pub expected: Vec<String>,
}

/// Parameter values by name, parsed over Q(q) with q a primitive `order`-th root.
pub struct Params {
    raw: BTreeMap<String, String>,
    order: u32,
}

impl Params {
    pub fn new(raw: BTreeMap<String, String>, order: u32) -> Self {
        Params { raw, order }
    }

    fn get(&self, s: &ItemSpec, name: &str, order: u32) -> Result<Scalar> {
        let text = self.raw.get(name).map(String::as_str).or_else(|| s.params.iter().find(|p| p.name == name).map(|p| p.default));
        let text = text.ok_or_else(|| Error::Unknown(format!("parameter {name}")))?;
        parse_scalar(text, order)
    }

    fn ell(&self) -> Result<u32> {
        let text = self.raw.get("ell").map(String::as_str).unwrap_or("2");
        let ell: u32 = text.parse().map_err(|_| Error::Constraint(format!("ℓ must be an integer, got {text}")))?;
        check_ell(ell)?;
        if self.order > 1 && self.order != 2 * ell {
            return Err(Error::Constraint(format!("cyclotomic order {} does not match 2ℓ = {}", self.order, 2 * ell)));
        }
        Ok(ell)
    }
}

fn nonzero(v: &Scalar, what: &str) -> Result<()> {
    if v.is_zero() {
        return Err(Error::Constraint(format!("{what} must be nonzero")));
    }
    Ok(())
}

fn xi_ok(xi: &Scalar) -> Result<()> {
    if !(&xi.pow(2)? - &Scalar::one()).is_zero() {
        return Err(Error::Constraint(format!("ξ²=1 fails for ξ={xi}")));
    }
    Ok(())
}

fn zeta_ok(zeta: &Scalar) -> Result<()> {
    if !(&zeta.pow(4)? + &Scalar::one()).is_zero() {
        return Err(Error::Constraint(format!("ζ⁴=−1 fails for ζ={zeta}")));
    }
    Ok(())
}

/// k[y] with y primitive.
pub fn ky_hopf() -> Result<Arc<HopfData>> {
    let p = Builder::new("k[y]", 1).poly("y", 1).build()?;
    HopfBuilder::new("k[y]", p).primitive("y").build()
}

/// The Weyl algebra as k[y] #_θ k[x] for θ from the pairing τ(x,y)=1.
pub fn weyl_algebra() -> Result<Arc<Extraction>> {
    let ky = ky_hopf()?;
    let kx = kx_hopf()?;
    let mp = trivial_pair(ky.clone(), kx.clone());
    let theta = theta_from_psi(mp, weyl_psi(ky.clone(), kx.clone()), pres_alg(ky.pres.clone()), pres_alg(kx.pres.clone()));
    Extraction::new(twisted_tensor(theta), "weyl")
}

pub fn build(name: &str, raw: &BTreeMap<String, String>, order: u32) -> Result<Item> {
    let spec = spec(name)?;
    for k in raw.keys() {
        if !spec.params.iter().any(|p| p.name == k) {
            return Err(Error::Unknown(format!("parameter {k} for {name}")));
        }
    }
    let ps = Params::new(raw.clone(), order);
    let mut params = BTreeMap::new();
    let mut get = |n: &str, order: u32| -> Result<Scalar> {
        let v = ps.get(&spec, n, order)?;
        params.insert(n.to_string(), v.clone());
        Ok(v)
    };
    let w5 = Window::new(4, 4);
    let wf = Window::new(4, 2);
    let mut expected = Vec::new();
    let (built, window) = match name {
        "H" => (Built::Hopf(h_hopf()?), w5),
        "U" => (Built::Hopf(u_hopf()?), w5),
        "E" => {
            expected.push("bicrossed product of section5 matches this presentation".into());
            (Built::Hopf(e_hopf()?), w5)
        }
        "E_def" | "A_def" => {
            let abl = Abl::new(get("alpha", order)?, get("beta", order)?, get("lambda", order)?)?;
            if name == "E_def" {
                expected.push("deformed bicrossed product matches this presentation".into());
                (Built::Hopf(e_def_hopf(&abl)?), w5)
            } else {
                expected.push("twisted tensor product H_α #_θ U matches this presentation".into());
                (Built::Algebra(deformation_pres(&abl, true, HaReading::Computed)?), w5)
            }
        }
        "H_alpha" => (Built::Algebra(h_alpha_pres(&get("alpha", order)?)?), w5),
        "L_alpha" => {
            expected.push("H^σ for σ = σ_α matches this presentation".into());
            (Built::Hopf(l_alpha_hopf(&get("alpha", order)?)?), w5)
        }
        "Uq" | "L_a00" | "unrolled" | "A_abc" => {
            let ell = ps.ell()?;
            get("ell", 1)?;
            let n = 2 * ell;
            let w = Window::new(2 * ell, 2);
            match name {
                "Uq" => (Built::Hopf(uq_hopf(ell)?), w),
                "L_a00" => (Built::Hopf(l_a00_hopf(ell, &get("a", n)?)?), w),
                "unrolled" => {
                    expected.push("semidirect product L_(a,0,0) ⋊ k[X] matches this presentation".into());
                    (Built::Hopf(unrolled_hopf(ell, &get("a", n)?)?), w)
                }
                _ => {
                    let (a, b, c) = (get("a", n)?, get("b", n)?, get("c", n)?);
                    expected.push("the X-action is well defined iff b = c = 0".into());
                    (Built::Algebra(a_abc_pres(ell, &a, &b, &c)?), w)
                }
            }
        }
        "kX" => (Built::Hopf(kx_hopf()?), Window::new(4, 0)),
        "weyl" => {
            expected.push("x y → y x + 1".into());
            (Built::Algebra(weyl_algebra()?.pres.clone()), Window::new(4, 0))
        }
        "section5" => (Built::Pair(section5_pair()?), Window::new(3, 2)),
        "sigma_alpha" => (Built::Form(sigma_alpha(h_hopf()?, &get("alpha", order)?)?), wf),
        "eta_alpha" => {
            expected.push("e^η equals sigma_alpha".into());
            (Built::Form(eta_alpha(h_hopf()?, &get("alpha", order)?)?), wf)
        }
        "tau_lambda" => {
            let l = get("lambda", order)?;
            nonzero(&l, "λ")?;
            (Built::Form(tau_lambda(h_hopf()?, u_hopf()?, &l)), wf)
        }
        "tau_xi_beta" => {
            let (xi, beta) = (get("xi", order)?, get("beta", order)?);
            xi_ok(&xi)?;
            (Built::Form(tau_xi_beta(h_hopf()?, u_hopf()?, &xi, &beta)), wf)
        }
        "psi_zeta" => {
            let z = get("zeta", order.max(8))?;
            zeta_ok(&z)?;
            (Built::Form(psi_zeta(h_hopf()?, u_hopf()?, &z)), wf)
        }
        "sigma_lambda" => {
            let l = get("lambda", order)?;
            nonzero(&l, "λ")?;
            (Built::Form(sigma_lambda_kx(kx_hopf()?, &l)), Window::new(4, 0))
        }
        "weyl_tau" => (Built::Form(weyl_psi(ky_hopf()?, kx_hopf()?)), Window::new(4, 0)),
        "theta_zeta" => {
            let (alpha, zeta) = (get("alpha", order.max(8))?, get("zeta", order.max(8))?);
            zeta_ok(&zeta)?;
            let mp = section5_pair()?;
            let s = sigma_alpha(mp.h.clone(), &alpha)?;
            let a = cocycle_left(mp.h.clone(), s);
            let psi = psi_zeta(mp.h.clone(), mp.u.clone(), &zeta);
            let r = pres_alg(mp.u.pres.clone());
            (Built::Twist(theta_from_psi(mp, psi, a, r)), Window::new(2, 1))
        }
        "theta_beta" => {
            let (xi, beta) = (get("xi", order)?, get("beta", order)?);
            xi_ok(&xi)?;
            let mp = section5_pair()?;
            let psi = tau_xi_beta(mp.h.clone(), mp.u.clone(), &xi, &beta);
            let (a, r) = (pres_alg(mp.h.pres.clone()), pres_alg(mp.u.pres.clone()));
            (Built::Twist(theta_from_psi(mp, psi, a, r)), Window::new(2, 1))
        }
        _ => return Err(Error::Unknown(format!("catalog item {name}"))),
    };
    Ok(Item { spec, params, built, window, expected })
}

impl Item {
    /// JSON for `catalog build`: presentations (with Hopf data), form tables on the default
    /// window, or the generator tables of a matched pair.
    pub fn to_json(&self) -> Result<Value> {
        let params: BTreeMap<&String, String> = self.params.iter().map(|(k, v)| (k, v.to_string())).collect();
        let mut out = json!({
            "item": self.spec.name,
            "kind": self.spec.kind,
            "params": params,
            "window": self.window,
            "expected": self.expected,
        });
        let body = match &self.built {
            Built::Hopf(h) => json!({ "hopf": h.to_json() }),
            Built::Algebra(p) => json!({ "presentation": p.to_json() }),
            Built::Form(f) => json!({ "form": form_json(f, self.window)? }),
            Built::Pair(mp) => json!({ "matched_pair": pair_json(mp)? }),
            Built::Twist(t) => json!({ "twisting_map": t.name() }),
        };
        for (k, v) in body.as_object().expect("object") {
            out[k] = v.clone();
        }
        Ok(out)
    }
}

pub fn form_json(f: &FormRef, w: Window) -> Result<Value> {
    let (l, r) = (f.left(), f.right());
    let table = materialize(&**f, w)?;
    let values: Vec<Value> = table
        .iter()
        .filter(|(_, v)| !v.is_zero())
        .map(|((x, y), v)| json!([l.p().fmt_mono(x), r.p().fmt_mono(y), v.to_string()]))
        .collect();
    Ok(json!({ "name": f.name(), "left": l.name, "right": r.name, "window": w, "nonzero": values }))
}

fn pair_json(mp: &MatchedPair) -> Result<Value> {
    let (ph, pu) = (mp.h.p(), mp.u.p());
    let mut right = Vec::new();
    let mut left = Vec::new();
    for x in pu.letters() {
        let xm = pu.letter_mono(x);
        for a in ph.letters() {
            let am = ph.letter_mono(a);
            right.push(json!([pu.fmt_mono(&xm), ph.fmt_mono(&am), ph.fmt_elem(&mp.tri(&xm, &am)?)]));
            left.push(json!([pu.fmt_mono(&xm), ph.fmt_mono(&am), pu.fmt_elem(&mp.tle(&xm, &am)?)]));
        }
    }
    Ok(json!({ "name": mp.name, "h": mp.h.to_json(), "u": mp.u.to_json(), "right_action": right, "left_action": left }))
}
