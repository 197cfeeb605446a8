//! H = k[b,c]#k⟨h⟩, U = k[a]#k⟨g⟩, E = H⋈U and their deformations.
//! Generator order is H-block then U-block: b, c, h, a, g.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::hopf::{HopfBuilder, HopfData};
use crate::bicrossed::{ActFn, MatchedPair};
use crate::pres::{Builder, Element, Monomial, Presentation};
use crate::scalar::Scalar;

fn s(v: i64) -> Scalar {
    Scalar::from_int(v)
}

pub fn common_order(xs: &[&Scalar]) -> Result<u32> {
    let mut n = 1;
    for x in xs {
        let o = x.order();
        if o != 1 {
            if n != 1 && n != o {
                return Err(Error::Scalar(format!("parameters live in different cyclotomic fields ({n} and {o})")));
            }
            n = o;
        }
    }
    Ok(n)
}

pub fn h_pres_with(name: &str, alpha_rhs: Option<(Scalar, bool)>) -> Result<Arc<Presentation>> {
    // alpha_rhs: (α, with_h4) gives bc − cb = α or α(1 − h⁴)
    let order = alpha_rhs.as_ref().map(|(a, _)| a.order()).unwrap_or(1);
    let b = Builder::new(name, order).poly("b", 1).poly("c", 1).group("h").qcomm("h", "b", s(-1)).qcomm("h", "c", s(-1));
    let b = match alpha_rhs {
        None => b.commute("b", "c"),
        Some((a, with_h4)) => {
            let mut rhs = vec![(Scalar::one(), "b c"), (-a.clone(), "1")];
            if with_h4 {
                rhs.push((a, "h^4"));
            }
            b.rule("c", "b", &rhs)
        }
    };
    b.build()
}

pub fn h_pres() -> Result<Arc<Presentation>> {
    h_pres_with("H", None)
}

/// H_α: bc − cb = α.
pub fn h_alpha_pres(alpha: &Scalar) -> Result<Arc<Presentation>> {
    h_pres_with(&format!("H_alpha[{alpha}]"), Some((alpha.clone(), false)))
}

/// L_α: bc − cb = α(1 − h⁴).
pub fn l_alpha_pres(alpha: &Scalar) -> Result<Arc<Presentation>> {
    h_pres_with(&format!("L_alpha[{alpha}]"), Some((alpha.clone(), true)))
}

/// L_α with the relation bc − cb = α(1 − h²) read literally.
pub fn l_alpha_h2_pres(alpha: &Scalar) -> Result<Arc<Presentation>> {
    Builder::new(&format!("L_alpha_h2[{alpha}]"), alpha.order())
        .poly("b", 1)
        .poly("c", 1)
        .group("h")
        .qcomm("h", "b", s(-1))
        .qcomm("h", "c", s(-1))
        .rule("c", "b", &[(Scalar::one(), "b c"), (-alpha.clone(), "1"), (alpha.clone(), "h^2")])
        .build()
}

pub fn h_like_hopf(name: &str, p: Arc<Presentation>) -> Result<Arc<HopfData>> {
    HopfBuilder::new(name, p).skew_primitive("b", "h^2", "1").skew_primitive("c", "h^2", "1").group_like("h").build()
}

pub fn h_hopf() -> Result<Arc<HopfData>> {
    h_like_hopf("H", h_pres()?)
}

pub fn l_alpha_hopf(alpha: &Scalar) -> Result<Arc<HopfData>> {
    let p = l_alpha_pres(alpha)?;
    h_like_hopf(&p.name.clone(), p)
}

pub fn u_pres() -> Result<Arc<Presentation>> {
    Builder::new("U", 1).poly("a", 1).group("g").qcomm("g", "a", s(-1)).build()
}

pub fn u_hopf() -> Result<Arc<HopfData>> {
    HopfBuilder::new("U", u_pres()?).skew_primitive("a", "g^2", "1").group_like("g").build()
}

/// Parameters (α, β, λ) of the deformations, validated against α(1+λ⁴)=0 and β(1−λ²)=0.
#[derive(Clone, Debug, PartialEq)]
pub struct Abl {
    pub alpha: Scalar,
    pub beta: Scalar,
    pub lambda: Scalar,
}

impl Abl {
    pub fn new(alpha: Scalar, beta: Scalar, lambda: Scalar) -> Result<Self> {
        common_order(&[&alpha, &beta, &lambda])?;
        if lambda.is_zero() {
            return Err(Error::Constraint("λ must be nonzero".into()));
        }
        let l2 = lambda.pow(2)?;
        let l4 = lambda.pow(4)?;
        if !(&alpha * &(&Scalar::one() + &l4)).is_zero() {
            return Err(Error::Constraint(format!("α(1+λ⁴)=0 fails for α={alpha}, λ={lambda}")));
        }
        if !(&beta * &(&Scalar::one() - &l2)).is_zero() {
            return Err(Error::Constraint(format!("β(1−λ²)=0 fails for β={beta}, λ={lambda}")));
        }
        Ok(Abl { alpha, beta, lambda })
    }

    pub fn order(&self) -> u32 {
        common_order(&[&self.alpha, &self.beta, &self.lambda]).unwrap_or(1)
    }

    pub fn tag(&self) -> String {
        format!("alpha={},beta={},lambda={}", self.alpha, self.beta, self.lambda)
    }
}

/// How the h–a relation of the deformations is read.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HaReading {
    /// ah = −λ² ha, the relation produced by every construction of these algebras.
    Computed,
    /// ha = −λ² ah, as printed.
    Printed,
}

/// E^λ_{α,β} (is_a = false) or A^λ_{α,β} (is_a = true).
pub fn deformation_pres(p: &Abl, is_a: bool, reading: HaReading) -> Result<Arc<Presentation>> {
    let Abl { alpha, beta, lambda } = p;
    let l2 = lambda.pow(2)?;
    let l4 = lambda.pow(4)?;
    let name = format!("{}[{}]{}", if is_a { "A_def" } else { "E_def" }, p.tag(), if reading == HaReading::Printed { "[printed ha]" } else { "" });
    let mut b = Builder::new(&name, p.order())
        .poly("b", 1)
        .poly("c", 1)
        .group("h")
        .poly("a", 1)
        .group("g")
        .qcomm("h", "b", s(-1))
        .qcomm("h", "c", s(-1))
        .qcomm("g", "a", s(-1))
        .conj("g", &[("b", &[("c", -l2.clone())]), ("c", &[("b", -l2.clone())])]);
    b = match reading {
        HaReading::Computed => b.qcomm("a", "h", -l2.clone()),
        HaReading::Printed => b.qcomm("h", "a", -l2.clone()),
    };
    if is_a {
        b = b
            .qcomm("g", "h", lambda.clone())
            .rule("a", "b", &[(l4.clone(), "b a"), (beta.clone(), "1")])
            .rule("a", "c", &[(l4.clone(), "c a"), (beta.clone(), "1")])
            .rule("c", "b", &[(Scalar::one(), "b c"), (-alpha.clone(), "1")]);
    } else {
        b = b
            .commute("g", "h")
            .rule("a", "b", &[(l4.clone(), "b a"), (beta.clone(), "1"), (-beta.clone(), "h^2 g^2")])
            .rule("a", "c", &[(l4.clone(), "c a"), (beta.clone(), "1"), (-beta.clone(), "h^2 g^2")])
            .rule("c", "b", &[(Scalar::one(), "b c"), (-alpha.clone(), "1"), (alpha.clone(), "h^4")]);
    }
    b.build()
}

pub fn e_like_hopf(name: &str, p: Arc<Presentation>) -> Result<Arc<HopfData>> {
    HopfBuilder::new(name, p)
        .skew_primitive("b", "h^2", "1")
        .skew_primitive("c", "h^2", "1")
        .group_like("h")
        .skew_primitive("a", "g^2", "1")
        .group_like("g")
        .build()
}

/// E of the basic matched pair, written directly by its relations.
pub fn e_pres() -> Result<Arc<Presentation>> {
    Builder::new("E", 1)
        .poly("b", 1)
        .poly("c", 1)
        .group("h")
        .poly("a", 1)
        .group("g")
        .commute("b", "c")
        .qcomm("h", "b", s(-1))
        .qcomm("h", "c", s(-1))
        .commute("a", "b")
        .commute("a", "c")
        .qcomm("h", "a", s(-1))
        .conj("g", &[("b", &[("c", s(-1))]), ("c", &[("b", s(-1))])])
        .commute("g", "h")
        .qcomm("g", "a", s(-1))
        .build()
}

pub fn e_hopf() -> Result<Arc<HopfData>> {
    e_like_hopf("E", e_pres()?)
}

pub fn e_def_hopf(p: &Abl) -> Result<Arc<HopfData>> {
    let pres = deformation_pres(p, false, HaReading::Computed)?;
    e_like_hopf(&pres.name.clone(), pres)
}

/// The matched pair (H, U, ▷, ◁) in closed form:
/// g^q ▷ b^r c^s h^p = (−1)^{q(r+s)} b^{r'} c^{s'} h^p with (r', s') swapped for odd q,
/// a^n g^q ▷ − = 0 for n > 0, and a^n g^q ◁ b^r c^s h^p = δ_{r+s,0} (−1)^{np} a^n g^q.
pub fn section5_pair() -> Result<Arc<MatchedPair>> {
    let h = h_hopf()?;
    let u = u_hopf()?;
    let right: Arc<ActFn> = Arc::new(|x: &Monomial, a: &Monomial| {
        let (n, q) = (x.0[0], x.0[1]);
        if n > 0 {
            return Ok(Element::zero());
        }
        let (r, s, p) = (a.0[0], a.0[1], a.0[2]);
        let sign = if (q * (r + s)).rem_euclid(2) == 1 { -1 } else { 1 };
        let m = if q.rem_euclid(2) == 1 { Monomial(vec![s, r, p]) } else { Monomial(vec![r, s, p]) };
        Ok(Element::term(m, Scalar::from_int(sign)))
    });
    let left: Arc<ActFn> = Arc::new(|x: &Monomial, a: &Monomial| {
        let (r, s, p) = (a.0[0], a.0[1], a.0[2]);
        if r + s != 0 {
            return Ok(Element::zero());
        }
        let sign = if (x.0[0] * p).rem_euclid(2) == 1 { -1 } else { 1 };
        Ok(Element::term(x.clone(), Scalar::from_int(sign)))
    });
    Ok(MatchedPair::new("section5", h, u, right, left))
}
