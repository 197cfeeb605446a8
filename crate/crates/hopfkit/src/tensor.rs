//! Tensor elements: linear combinations of tuples of monomials, one per slot.
//! Tensors of multi-slot objects flatten by concatenating their keys.

use crate::error::{Error, Result};
use crate::lin::Lin;
use crate::pres::{fmt_lin, Element, Monomial, Presentation};
use crate::scalar::Scalar;

pub type Key = Vec<Monomial>;
pub type Tensor = Lin<Key>;

pub fn from_element(e: &Element) -> Tensor {
    e.iter().map(|(m, c)| (vec![m.clone()], c.clone())).collect()
}

/// Collapse a one-slot tensor to an element.
pub fn to_element(t: &Tensor) -> Result<Element> {
    let mut e = Element::zero();
    for (k, c) in t.iter() {
        if k.len() != 1 {
            return Err(Error::Mismatch(format!("expected one slot, got {}", k.len())));
        }
        e.add_term(k[0].clone(), c.clone());
    }
    Ok(e)
}

pub fn concat(a: &[Monomial], b: &[Monomial]) -> Key {
    let mut k = a.to_vec();
    k.extend_from_slice(b);
    k
}

/// x ⊗ y for tensors of any slot counts.
pub fn outer(x: &Tensor, y: &Tensor) -> Tensor {
    let mut out = Tensor::zero();
    for (a, c) in x.iter() {
        for (b, d) in y.iter() {
            out.add_term(concat(a, b), c * d);
        }
    }
    out
}

/// Product of pure tensors slot by slot: (a⊗b)(c⊗d) = ac⊗bd.
pub fn mul_keys(slots: &[&Presentation], x: &[Monomial], y: &[Monomial]) -> Result<Tensor> {
    if x.len() != slots.len() || y.len() != slots.len() {
        return Err(Error::Mismatch("tensor slot count".into()));
    }
    let mut acc = Tensor::basis(Vec::new());
    for (i, p) in slots.iter().enumerate() {
        let e = p.mul_mono(&x[i], &y[i])?;
        acc = outer(&acc, &from_element(&e));
        if acc.is_zero() {
            break;
        }
    }
    Ok(acc)
}

pub fn mul(slots: &[&Presentation], x: &Tensor, y: &Tensor) -> Result<Tensor> {
    let mut out = Tensor::zero();
    for (a, c) in x.iter() {
        for (b, d) in y.iter() {
            out.add_scaled(&mul_keys(slots, a, b)?, &(c * d));
        }
    }
    Ok(out)
}

/// Permute slots: output slot i is input slot perm[i].
pub fn permute(t: &Tensor, perm: &[usize]) -> Tensor {
    t.iter().map(|(k, c)| (perm.iter().map(|&i| k[i].clone()).collect::<Key>(), c.clone())).collect()
}

pub fn flip(t: &Tensor) -> Tensor {
    permute(t, &[1, 0])
}

/// Apply a linear map to slots [from, from+width) of every key.
pub fn map_slots(t: &Tensor, from: usize, width: usize, mut f: impl FnMut(&[Monomial]) -> Result<Tensor>) -> Result<Tensor> {
    let mut out = Tensor::zero();
    for (k, c) in t.iter() {
        let img = f(&k[from..from + width])?;
        for (ik, ic) in img.iter() {
            let mut nk = k[..from].to_vec();
            nk.extend_from_slice(ik);
            nk.extend_from_slice(&k[from + width..]);
            out.add_term(nk, c * ic);
        }
    }
    Ok(out)
}

/// Contract slots [from, from+width) against a scalar-valued map.
pub fn contract(t: &Tensor, from: usize, width: usize, mut f: impl FnMut(&[Monomial]) -> Result<Scalar>) -> Result<Tensor> {
    let mut out = Tensor::zero();
    for (k, c) in t.iter() {
        let v = f(&k[from..from + width])?;
        if v.is_zero() {
            continue;
        }
        let mut nk = k[..from].to_vec();
        nk.extend_from_slice(&k[from + width..]);
        out.add_term(nk, c * &v);
    }
    Ok(out)
}

pub fn fmt_key(slots: &[&Presentation], k: &[Monomial]) -> String {
    if slots.len() != k.len() {
        return format!("{k:?}");
    }
    k.iter().zip(slots).map(|(m, p)| p.fmt_mono(m)).collect::<Vec<_>>().join(" ⊗ ")
}

pub fn fmt_tensor(slots: &[&Presentation], t: &Tensor) -> String {
    fmt_lin(t, |k| fmt_key(slots, k))
}
