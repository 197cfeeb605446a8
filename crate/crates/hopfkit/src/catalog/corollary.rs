//! End-to-end reproduction of the four deformation cases over E = H ⋈ U: certify the form,
//! deform the matched pair, build the twisted tensor product, match both against the
//! expected presentations and certify the Galois property.

use std::time::Instant;

use crate::algebra::{cocycle_hopf, cocycle_left, pres_alg, presentation_match, twisted_tensor, AlgRef, Extraction, TwistRef};
use crate::bicrossed::{bicrossed_presentation, verify_matched_pair};
use crate::catalog::forms::{psi_zeta, sigma_alpha, tau_lambda, tau_xi_beta};
use crate::catalog::section5::{deformation_pres, e_hopf, l_alpha_hopf, section5_pair, Abl, HaReading};
use crate::deform::{deformed_actions, verify_cocycle, verify_skew_pairing, Relabel};
use crate::error::{Error, Result};
use crate::form::{convolution_inverse, counit_form, FormRef};
use crate::galois::{galois_certificate, psi_conditions_check, regular_comodule, theta_from_psi, KappaSearch};
use crate::pres::Window;
use crate::report::Report;
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub enum Case {
    /// τ = τ_λ.
    OneA { lambda: Scalar },
    /// τ = τ^β_ξ with ξ = ±1.
    OneB { beta: Scalar, xi: Scalar },
    /// ψ = ψ_ζ over σ_α, α ≠ 0.
    TwoA { alpha: Scalar, zeta: Scalar },
    /// α = 0: ψ = τ^β_λ.
    TwoB { beta: Scalar, lambda: Scalar },
}

impl Case {
    pub fn label(&self) -> &'static str {
        match self {
            Case::OneA { .. } => "1a",
            Case::OneB { .. } => "1b",
            Case::TwoA { .. } => "2a",
            Case::TwoB { .. } => "2b",
        }
    }

    /// The expected deformation parameters (α, β, λ).
    pub fn abl(&self) -> Result<Abl> {
        let z = Scalar::zero;
        match self {
            Case::OneA { lambda } => Abl::new(z(), z(), lambda.clone()),
            Case::OneB { beta, xi } => Abl::new(z(), beta.clone(), xi.clone()),
            Case::TwoA { alpha, zeta } => {
                if alpha.is_zero() {
                    return Err(Error::Constraint("case 2a needs α ≠ 0".into()));
                }
                Abl::new(alpha.clone(), z(), zeta.clone())
            }
            Case::TwoB { beta, lambda } => Abl::new(z(), beta.clone(), lambda.clone()),
        }
    }
}

/// Run one case. `w` is the window of every sweep; the defaults use D=2, G=1.
pub fn verify_corollary(case: &Case, w: Window) -> Result<Report> {
    let t0 = Instant::now();
    let abl = case.abl()?;
    let mp = section5_pair()?;
    let (h, u) = (mp.h.clone(), mp.u.clone());
    let mut rep = Report::new("summarize-corollary", case.label()).with_window(w).param("params", abl.tag());

    let (psi, sigma): (FormRef, Option<FormRef>) = match case {
        Case::OneA { lambda } => (tau_lambda(h.clone(), u.clone(), lambda), None),
        Case::OneB { beta, xi } => (tau_xi_beta(h.clone(), u.clone(), xi, beta), None),
        Case::TwoA { alpha, zeta } => (psi_zeta(h.clone(), u.clone(), zeta), Some(sigma_alpha(h.clone(), alpha)?)),
        Case::TwoB { beta, lambda } => (tau_xi_beta(h.clone(), u.clone(), lambda, beta), None),
    };

    // the form itself
    match (case, &sigma) {
        (Case::OneA { .. } | Case::OneB { .. }, _) => rep.child(verify_skew_pairing(&mp, &psi, w)?),
        (_, Some(s)) => {
            rep.child(verify_cocycle(s, w)?);
            rep.child(psi_conditions_check(&mp, &psi, s, &counit_form(u.clone(), u.clone()), w)?);
        }
        (_, None) => {
            let eh = counit_form(h.clone(), h.clone());
            rep.child(psi_conditions_check(&mp, &psi, &eh, &counit_form(u.clone(), u.clone()), w)?);
        }
    }

    // E-side: the deformed pair, on L_α when σ is present
    let h_side = match (&sigma, case) {
        (Some(s), Case::TwoA { alpha, .. }) => {
            let twisted = cocycle_hopf(h.clone(), s.clone(), convolution_inverse(s.clone()));
            let ext = Extraction::new(twisted, "L_alpha")?;
            let l = l_alpha_hopf(alpha)?;
            rep.child(presentation_match(&ext.pres, &l.pres)?);
            Some(Relabel { hopf: l, ext })
        }
        _ => None,
    };
    let dp = deformed_actions(&mp, &psi, h_side, None)?;
    rep.child(verify_matched_pair(&dp, w)?);
    let found = bicrossed_presentation(&dp, &format!("E[{}]", psi.name()))?;
    rep.child(presentation_match(&found, &*deformation_pres(&abl, false, HaReading::Computed)?)?);

    // A-side: H_α #_θ U
    let a: AlgRef = match &sigma {
        Some(s) => cocycle_left(h.clone(), s.clone()),
        None => pres_alg(h.pres.clone()),
    };
    let r = pres_alg(u.pres.clone());
    let theta: TwistRef = theta_from_psi(mp.clone(), psi.clone(), a.clone(), r.clone());
    let tt = twisted_tensor(theta.clone());
    let ext = Extraction::new(tt, &format!("A[{}]", psi.name()))?;
    rep.child(ext.verify(w)?);
    rep.child(presentation_match(&ext.pres, &*deformation_pres(&abl, true, HaReading::Computed)?)?);

    let ca = regular_comodule(a, h.clone());
    let cr = regular_comodule(r, u.clone());
    rep.child(galois_certificate(&theta, &ca, &cr, &e_hopf()?, w, KappaSearch::default())?);
    Ok(rep.finish(t0))
}
