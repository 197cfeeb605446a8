//! Closed formulas for the cocycles, pairings and ψ-maps of the catalog.

use std::sync::Arc;

use crate::error::Result;
use crate::form::{Closed, FormRef};
use crate::hopf::HopfData;
use crate::pres::Monomial;
use crate::scalar::Scalar;

fn sign(e: i64) -> Scalar {
    Scalar::from_int(if e.rem_euclid(2) == 1 { -1 } else { 1 })
}

/// σ_α(b^n c^m h^p, b^r c^s h^q) = δ_{n,s} δ_{m,r} (−1)^m (−1)^{p(n+m)} n! m! (α/2)^{n+m} on H ⊗ H.
pub fn sigma_alpha(h: Arc<HopfData>, alpha: &Scalar) -> Result<FormRef> {
    let half = alpha.try_div(&Scalar::from_int(2))?;
    Ok(Closed::new(&format!("sigma_alpha[{alpha}]"), h.clone(), h, move |x: &Monomial, y: &Monomial| {
        let (n, m, p) = (x.0[0] as i64, x.0[1] as i64, x.0[2] as i64);
        let (r, s) = (y.0[0] as i64, y.0[1] as i64);
        if n != s || m != r {
            return Ok(Scalar::zero());
        }
        let c = &(&sign(m) * &sign(p * (n + m))) * &(&Scalar::factorial(n as u64) * &Scalar::factorial(m as u64));
        Ok(&c * &half.pow(n + m)?)
    }))
}

/// η(b h^p, c h^q) = (−1)^p α/2, η(c h^p, b h^q) = −(−1)^p α/2, zero elsewhere; σ_α = e^η.
pub fn eta_alpha(h: Arc<HopfData>, alpha: &Scalar) -> Result<FormRef> {
    let half = alpha.try_div(&Scalar::from_int(2))?;
    Ok(Closed::new(&format!("eta_alpha[{alpha}]"), h.clone(), h, move |x: &Monomial, y: &Monomial| {
        let p = x.0[2] as i64;
        let v = match ((x.0[0], x.0[1]), (y.0[0], y.0[1])) {
            ((1, 0), (0, 1)) => &sign(p) * &half,
            ((0, 1), (1, 0)) => -(&sign(p) * &half),
            _ => Scalar::zero(),
        };
        Ok(v)
    }))
}

fn group_only(m: &Monomial, group: &[usize]) -> bool {
    m.0.iter().enumerate().all(|(i, &e)| e == 0 || group.contains(&i))
}

/// τ(h^p, g^q) = λ^{pq} on H ⊗ U, zero off the group-likes.
pub fn tau_lambda(h: Arc<HopfData>, u: Arc<HopfData>, lambda: &Scalar) -> FormRef {
    group_pairing(&format!("tau_lambda[{lambda}]"), h, u, lambda)
}

/// ψ_ζ(h^p, g^q) = ζ^{pq}.
pub fn psi_zeta(h: Arc<HopfData>, u: Arc<HopfData>, zeta: &Scalar) -> FormRef {
    group_pairing(&format!("psi_zeta[{zeta}]"), h, u, zeta)
}

fn group_pairing(name: &str, h: Arc<HopfData>, u: Arc<HopfData>, base: &Scalar) -> FormRef {
    let base = base.clone();
    Closed::new(name, h, u, move |x: &Monomial, y: &Monomial| {
        if !group_only(x, &[2]) || !group_only(y, &[1]) {
            return Ok(Scalar::zero());
        }
        base.pow(x.0[2] as i64 * y.0[1] as i64)
    })
}

/// τ^β_ξ(b^r c^s h^p, a^n g^q) = δ_{r+s,n} (−1)^{qn} ξ^{pq} n! β^n.
pub fn tau_xi_beta(h: Arc<HopfData>, u: Arc<HopfData>, xi: &Scalar, beta: &Scalar) -> FormRef {
    let (xi, beta) = (xi.clone(), beta.clone());
    Closed::new(&format!("tau_xi_beta[xi={xi},beta={beta}]"), h, u, move |x: &Monomial, y: &Monomial| {
        let (r, s, p) = (x.0[0] as i64, x.0[1] as i64, x.0[2] as i64);
        let (n, q) = (y.0[0] as i64, y.0[1] as i64);
        if r + s != n {
            return Ok(Scalar::zero());
        }
        let v = &(&sign(q * n) * &xi.pow(p * q)?) * &Scalar::factorial(n as u64);
        Ok(&v * &beta.pow(n)?)
    })
}

/// σ_λ(X^n, X^m) = δ_{n,m} n! λ^n on k[X].
pub fn sigma_lambda_kx(kx: Arc<HopfData>, lambda: &Scalar) -> FormRef {
    let lambda = lambda.clone();
    Closed::new(&format!("sigma_lambda[{lambda}]"), kx.clone(), kx, move |x: &Monomial, y: &Monomial| {
        let (n, m) = (x.0[0] as i64, y.0[0] as i64);
        if n != m {
            return Ok(Scalar::zero());
        }
        Ok(&Scalar::factorial(n as u64) * &lambda.pow(n)?)
    })
}

/// ψ(y^m, x^n) = δ_{m,n} n! on k[y] ⊗ k[x]; θ_ψ on the trivial pair gives the Weyl algebra.
pub fn weyl_psi(ky: Arc<HopfData>, kx: Arc<HopfData>) -> FormRef {
    Closed::new("weyl", ky, kx, move |x: &Monomial, y: &Monomial| {
        let (m, n) = (x.0[0] as i64, y.0[0] as i64);
        Ok(if m == n { Scalar::factorial(n as u64) } else { Scalar::zero() })
    })
}
