//! Ū_q(sl₂), its Galois objects A_(a,b,c), the liftings L_(a,0,0) and the unrolled versions.
//! q is a primitive 2ℓ-th root of unity.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::hopf::{HopfBuilder, HopfData};
use crate::pres::{Builder, Presentation};
use crate::scalar::Scalar;

pub fn check_ell(ell: u32) -> Result<()> {
    if ell < 2 {
        return Err(Error::Constraint(format!("ℓ must be at least 2, got {ell}")));
    }
    Ok(())
}

pub fn q_of(ell: u32) -> Result<Scalar> {
    check_ell(ell)?;
    Scalar::root(2 * ell)
}

/// 1/(q − q⁻¹).
pub fn inv_q_diff(q: &Scalar) -> Result<Scalar> {
    (q - &q.inv()?).inv()
}

/// Ū_q(sl₂) when a = 1, or the lifting L_(a,0,0): EF − FE = a(K − K⁻¹)/(q − q⁻¹), E^ℓ = F^ℓ = 0.
pub fn uq_pres(ell: u32, a: &Scalar) -> Result<Arc<Presentation>> {
    let q = q_of(ell)?;
    let n = 2 * ell;
    let k = &a.clone() * &inv_q_diff(&q)?;
    let name = if a.is_one() { format!("Uq_sl2[l={ell}]") } else { format!("L_(a,0,0)[l={ell},a={a}]") };
    Builder::new(&name, n)
        .poly("E", 1)
        .poly("F", 1)
        .group("K")
        .qcomm("K", "E", q.pow(2)?)
        .qcomm("K", "F", q.pow(-2)?)
        .rule("F", "E", &[(Scalar::one(), "E F"), (-k.clone(), "K"), (k, "K^-1")])
        .power("E", ell, &[])
        .power("F", ell, &[])
        .build()
}

pub fn uq_like_hopf(p: Arc<Presentation>) -> Result<Arc<HopfData>> {
    HopfBuilder::new(&p.name.clone(), p)
        .skew_primitive("E", "1", "K")
        .skew_primitive("F", "K^-1", "1")
        .group_like("K")
        .build()
}

pub fn uq_hopf(ell: u32) -> Result<Arc<HopfData>> {
    uq_like_hopf(uq_pres(ell, &Scalar::one())?)
}

pub fn l_a00_hopf(ell: u32, a: &Scalar) -> Result<Arc<HopfData>> {
    uq_like_hopf(uq_pres(ell, a)?)
}

/// A_(a,b,c): ge = q²eg, gf = q⁻²fg, ef − fe = ag − g⁻¹/(q − q⁻¹), e^ℓ = b, f^ℓ = c.
pub fn a_abc_pres(ell: u32, a: &Scalar, b: &Scalar, c: &Scalar) -> Result<Arc<Presentation>> {
    let q = q_of(ell)?;
    let k = inv_q_diff(&q)?;
    Builder::new(&format!("A_(a,b,c)[l={ell},a={a},b={b},c={c}]"), 2 * ell)
        .poly("e", 1)
        .poly("f", 1)
        .group("g")
        .qcomm("g", "e", q.pow(2)?)
        .qcomm("g", "f", q.pow(-2)?)
        .rule("f", "e", &[(Scalar::one(), "e f"), (-a.clone(), "g"), (k, "g^-1")])
        .power("e", ell, &[(b.clone(), "1")])
        .power("f", ell, &[(c.clone(), "1")])
        .build()
}

/// Ū_q(sl₂) ⋊ k[X] (or L_(a,0,0) ⋊ k[X]) written directly: [X,E] = 2E, [X,F] = −2F, [X,K] = 0.
pub fn unrolled_pres(ell: u32, a: &Scalar) -> Result<Arc<Presentation>> {
    let q = q_of(ell)?;
    let k = &a.clone() * &inv_q_diff(&q)?;
    Builder::new(&format!("UqX_sl2[l={ell},a={a}]"), 2 * ell)
        .poly("E", 1)
        .poly("F", 1)
        .group("K")
        .poly("X", 1)
        .qcomm("K", "E", q.pow(2)?)
        .qcomm("K", "F", q.pow(-2)?)
        .rule("F", "E", &[(Scalar::one(), "E F"), (-k.clone(), "K"), (k, "K^-1")])
        .power("E", ell, &[])
        .power("F", ell, &[])
        .rule("X", "E", &[(Scalar::one(), "E X"), (Scalar::from_int(2), "E")])
        .rule("X", "F", &[(Scalar::one(), "F X"), (Scalar::from_int(-2), "F")])
        .commute("X", "K")
        .build()
}

pub fn unrolled_hopf(ell: u32, a: &Scalar) -> Result<Arc<HopfData>> {
    let p = unrolled_pres(ell, a)?;
    HopfBuilder::new(&p.name.clone(), p)
        .skew_primitive("E", "1", "K")
        .skew_primitive("F", "K^-1", "1")
        .group_like("K")
        .primitive("X")
        .build()
}

/// k[X] with X primitive.
pub fn kx_hopf() -> Result<Arc<HopfData>> {
    let p = Builder::new("k[X]", 1).poly("X", 1).build()?;
    HopfBuilder::new("k[X]", p).primitive("X").build()
}
