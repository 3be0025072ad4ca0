//! JSON form of a stability report. Every quantity appears in absolute
//! units and, next to it, in R units (or in `√(πρG)` for frequencies).

use ellipsoid_core::stability::{det_u_closed, phi_closed, s1_closed, s2_closed, tr_u_closed, ClosedForms};
use ellipsoid_core::{Family, Result, StabilityReport};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComplexValue {
    pub re: f64,
    pub im: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Units {
    pub rho: f64,
    pub grav: f64,
    #[serde(rename = "R")]
    pub r: f64,
    #[serde(rename = "T")]
    pub t: f64,
    pub pi_rho_g: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportJson {
    pub family: String,
    pub e: f64,
    pub verdict: String,
    pub units: Units,
    pub s1: Option<f64>,
    pub s2: Option<f64>,
    pub phi: Option<f64>,
    #[serde(rename = "trU")]
    pub tr_u: Option<f64>,
    #[serde(rename = "detU")]
    pub det_u: Option<f64>,
    #[serde(rename = "s1_over_R")]
    pub s1_over_r: Option<f64>,
    #[serde(rename = "s2_over_R")]
    pub s2_over_r: Option<f64>,
    #[serde(rename = "phi_over_R")]
    pub phi_over_r: Option<f64>,
    #[serde(rename = "trU_over_R")]
    pub tr_u_over_r: Option<f64>,
    #[serde(rename = "detU_over_R2")]
    pub det_u_over_r2: Option<f64>,
    pub arnold_eigenvalues: Vec<f64>,
    #[serde(rename = "arnold_eigenvalues_over_R")]
    pub arnold_eigenvalues_over_r: Vec<f64>,
    pub hessian_eigenvalues: Vec<f64>,
    #[serde(rename = "hessian_eigenvalues_over_R")]
    pub hessian_eigenvalues_over_r: Vec<f64>,
    pub lh_eigenvalues: Vec<ComplexValue>,
    pub lh_eigenvalues_over_sqrt_pi_rho_g: Vec<ComplexValue>,
    pub definiteness_margin: f64,
    pub correction_included: bool,
}

impl ReportJson {
    pub fn from_report(rep: &StabilityReport) -> Result<Self> {
        let p = rep.params;
        let r = p.r();
        let e = rep.e;
        // Dimensionless values come straight from e so they do not depend on ρ, G.
        let (s1r, s2r) = match rep.family {
            Family::MacLaurin => (Some(s1_closed(e)?), Some(s2_closed(e)?)),
            _ => (None, None),
        };
        let (phir, trr, detr) = if rep.family.is_transversal() {
            (Some(phi_closed(e)?), Some(tr_u_closed(e)?), Some(det_u_closed(e)?))
        } else {
            (None, None, None)
        };
        let (s1, s2, phi, tr_u, det_u) = match rep.closed {
            ClosedForms::None => (None, None, None, None, None),
            ClosedForms::MacLaurin { s1, s2 } => (Some(s1), Some(s2), None, None, None),
            ClosedForms::Transversal { phi, tr_u, det_u, .. } => (None, None, Some(phi), Some(tr_u), Some(det_u)),
        };
        let lh: Vec<ComplexValue> =
            rep.lh_eigenvalues.iter().flatten().map(|z| ComplexValue { re: z.re, im: z.im }).collect();
        let w = p.pi_rho_g().sqrt();
        Ok(ReportJson {
            family: rep.family.name().to_string(),
            e,
            verdict: rep.verdict.name().to_string(),
            units: Units { rho: p.rho, grav: p.grav, r, t: p.t(), pi_rho_g: p.pi_rho_g() },
            s1,
            s2,
            phi,
            tr_u,
            det_u,
            s1_over_r: s1r,
            s2_over_r: s2r,
            phi_over_r: phir,
            tr_u_over_r: trr,
            det_u_over_r2: detr,
            arnold_eigenvalues: rep.arnold_eigenvalues.clone(),
            arnold_eigenvalues_over_r: rep.arnold_eigenvalues.iter().map(|x| x / r).collect(),
            hessian_eigenvalues: rep.hessian_eigenvalues.clone(),
            hessian_eigenvalues_over_r: rep.hessian_eigenvalues.iter().map(|x| x / r).collect(),
            lh_eigenvalues_over_sqrt_pi_rho_g: lh.iter().map(|z| ComplexValue { re: z.re / w, im: z.im / w }).collect(),
            lh_eigenvalues: lh,
            definiteness_margin: rep.definiteness_margin,
            correction_included: rep.correction_included,
        })
    }
}
