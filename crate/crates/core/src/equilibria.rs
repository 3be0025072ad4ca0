//! Relative-equilibrium conditions and the three symmetric families:
//! the sphere, MacLaurin spheroids and the two transversal branches.

use num_complex::Complex64;

use crate::eval_closed;
use crate::inertia::{momentum, Momentum};
use crate::kinematics::{dot, invariants_of, unit, Mat3, PhysicalParams, Spheroid, SpheroidKind, VelocityPair};
use crate::numerics::Scalar;
use crate::potential::{potential_derivs, PotentialDerivs};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    Spherical,
    MacLaurin,
    TransversalPlus,
    TransversalMinus,
}

impl Family {
    pub const ALL: [Family; 4] =
        [Family::Spherical, Family::MacLaurin, Family::TransversalPlus, Family::TransversalMinus];

    pub fn name(&self) -> &'static str {
        match self {
            Family::Spherical => "spherical",
            Family::MacLaurin => "maclaurin",
            Family::TransversalPlus => "transversal+",
            Family::TransversalMinus => "transversal-",
        }
    }

    /// `+1` for the plus branch, `−1` for the minus branch, `0` otherwise.
    pub fn branch_sign(&self) -> f64 {
        match self {
            Family::TransversalPlus => 1.0,
            Family::TransversalMinus => -1.0,
            _ => 0.0,
        }
    }

    pub fn is_transversal(&self) -> bool {
        matches!(self, Family::TransversalPlus | Family::TransversalMinus)
    }
}

impl core::str::FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Family> {
        match s {
            "spherical" | "sphere" => Ok(Family::Spherical),
            "maclaurin" => Ok(Family::MacLaurin),
            "transversal+" | "transversal-plus" => Ok(Family::TransversalPlus),
            "transversal-" | "transversal-minus" => Ok(Family::TransversalMinus),
            _ => Err(Error::InvalidArgument("unknown family")),
        }
    }
}

/// Names of the isotropy groups of configuration, momentum and point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Isotropy {
    pub g_f: &'static str,
    pub g_mu: &'static str,
    pub g_pf: &'static str,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EquilibriumState {
    pub family: Family,
    pub sph: Spheroid,
    pub xi: VelocityPair,
    pub lambda: f64,
    pub mu: Momentum,
    /// `Ω` (MacLaurin) or `ω±` (transversal); zero for the sphere.
    pub omega: f64,
    /// `Ω²/(πρG)` or `ω²/(πρG)`, computed from `e` alone.
    pub omega2_over_pi_rho_g: f64,
    /// `f±` for transversal states.
    pub f_ratio: Option<f64>,
    pub derivs: PotentialDerivs,
    pub params: PhysicalParams,
    pub isotropy: Isotropy,
}

impl EquilibriumState {
    pub fn config(&self) -> Mat3 {
        self.sph.matrix()
    }

    pub fn ecc(&self) -> f64 {
        self.sph.ecc()
    }

    /// Largest component of the relative-equilibrium residual, in units of `R`.
    pub fn residual_over_r(&self) -> f64 {
        let (m, d) = re_residual(&self.config(), &self.xi, self.lambda, &self.derivs, &self.params);
        (m.max_abs() / self.params.r()).max(d.abs())
    }
}

/// Right-hand side of the relative-equilibrium equations at `F`:
/// the matrix condition (zero at equilibria) and `det F − 1`.
/// `derivs` must be evaluated at `F`.
pub fn re_residual(
    f: &Mat3,
    xi: &VelocityPair,
    lambda: f64,
    derivs: &PotentialDerivs,
    params: &PhysicalParams,
) -> (Mat3, f64) {
    let (i1, _, _) = invariants_of(f);
    let ft = f.transpose();
    let d = f.det();
    let finv = f.inverse().unwrap_or(Mat3::ZERO);
    let (l, r) = (xi.xi_l, xi.xi_r);
    let potential = ft * (2.0 * derivs.v1) + (ft * i1 - ft * *f * ft) * (2.0 * derivs.v2) - finv * (lambda * d);
    let fl = finv.mul_vec(l);
    let ftr = finv.transpose().mul_vec(r);
    let kinetic = ft * (dot(l, l) + dot(r, r)) - ft * Mat3::outer(l, l) - Mat3::outer(r, r) * ft
        + (Mat3::outer(fl, ftr) - finv * dot(l, ftr)) * (2.0 * d);
    (potential - kinetic * params.t(), d - 1.0)
}

fn check_ecc(e: f64) -> Result<()> {
    if !(e > 0.0 && e <= crate::kinematics::MAX_ECCENTRICITY) {
        return Err(Error::Domain("eccentricity must lie in (0, 0.999]"));
    }
    Ok(())
}

fn maclaurin_omega2_generic<S: Scalar>(ctx: S::Ctx) -> S {
    let e = S::e(ctx);
    let numer = S::one_minus_e2_pow(ctx, 0.5) * S::poly(ctx, &[3.0, 0.0, -2.0]) * S::asin_e(ctx) * 2.0
        - e * S::one_minus_e2_pow(ctx, 1.0) * 6.0;
    numer.div_e_pow(ctx, 3)
}

/// `Ω²/(πρG)` along the MacLaurin family.
pub fn maclaurin_omega2_over_pi_rho_g(e: f64) -> Result<f64> {
    check_ecc(e)?;
    Ok(eval_closed!(e, maclaurin_omega2_generic))
}

fn transversal_omega2_generic<S: Scalar>(ctx: S::Ctx, s: f64) -> S {
    let e = S::e(ctx);
    let bracket = e.clone() * 3.0 + S::poly(ctx, &[-3.0, 0.0, 1.0]) * S::atanh_e(ctx);
    let em = S::poly(ctx, &[-s, 1.0]);
    let ep = S::poly(ctx, &[s, 1.0]);
    em.clone() * em * ep * bracket.div_e_pow(ctx, 5) * (-s)
}

/// `ω±²/(πρG)` along the transversal branch with sign `s = ±1`.
pub fn transversal_omega2_over_pi_rho_g(e: f64, s: f64) -> Result<f64> {
    check_ecc(e)?;
    Ok(eval_closed!(e, transversal_omega2_generic, s))
}

/// `f± = (1 ± e)/√(1 − e²)`.
pub fn transversal_f(e: f64, s: f64) -> f64 {
    (1.0 + s * e) / libm::sqrt(1.0 - e * e)
}

/// The spherical equilibrium `F = I`, `ξ = 0`, `λ = 2V₁ + 4V₂`.
pub fn spherical(params: &PhysicalParams) -> EquilibriumState {
    let sph = Spheroid::sphere();
    let derivs = potential_derivs(&sph, params);
    EquilibriumState {
        family: Family::Spherical,
        sph,
        xi: VelocityPair::zero(),
        lambda: 2.0 * derivs.v1 + 4.0 * derivs.v2,
        mu: Momentum::default(),
        omega: 0.0,
        omega2_over_pi_rho_g: 0.0,
        f_ratio: None,
        derivs,
        params: *params,
        isotropy: Isotropy { g_f: "Z2 ⋉ SO(3)^D", g_mu: "Z2 ⋉ (SO(3) × SO(3))", g_pf: "Z2 ⋉ SO(3)^D" },
    }
}

/// MacLaurin spheroid of eccentricity `e`, with the symmetric velocity
/// representative `ξ = (Ω/2·e₃, −Ω/2·e₃)`.
pub fn maclaurin(e: f64, params: &PhysicalParams) -> Result<EquilibriumState> {
    let sph = Spheroid::oblate(e)?;
    let w2 = maclaurin_omega2_over_pi_rho_g(e)?;
    let omega = libm::sqrt(w2 * params.pi_rho_g());
    let derivs = potential_derivs(&sph, params);
    let c = sph.c();
    let xi = VelocityPair::new([0.0, 0.0, 0.5 * omega], [0.0, 0.0, -0.5 * omega]);
    Ok(EquilibriumState {
        family: Family::MacLaurin,
        sph,
        xi,
        lambda: 2.0 * c * c * derivs.v1 + 4.0 * c * derivs.v2,
        mu: momentum(&sph.matrix(), &xi, params),
        omega,
        omega2_over_pi_rho_g: w2,
        f_ratio: None,
        derivs,
        params: *params,
        isotropy: Isotropy { g_f: "Z2 ⋉ O(2)_e3^D", g_mu: "(SO(2)_e3 × SO(2)_e3)~", g_pf: "O(2)_e3~" },
    })
}

/// `λ` for a transversal spheroid that zeroes the residual:
/// `2((1−e²)^{1/3}V₁ + (1−e²)^{−1/3}(2−e²)V₂)`.
pub fn transversal_lambda(e: f64, d: &PotentialDerivs) -> f64 {
    let q = 1.0 - e * e;
    2.0 * (libm::cbrt(q) * d.v1 + (2.0 - e * e) / libm::cbrt(q) * d.v2)
}

/// The same expression with the opposite sign on the `V₂` factor, `(e²−2)`;
/// it does not satisfy the equilibrium equations and is kept for comparison.
pub fn transversal_lambda_rejected(e: f64, d: &PotentialDerivs) -> f64 {
    let q = 1.0 - e * e;
    2.0 * (libm::cbrt(q) * d.v1 + (e * e - 2.0) / libm::cbrt(q) * d.v2)
}

/// Transversal spheroid of eccentricity `e` on the branch `family`,
/// with `n = e₂` and `ξ = ω(n, f·n)`.
pub fn transversal(e: f64, family: Family, params: &PhysicalParams) -> Result<EquilibriumState> {
    if !family.is_transversal() {
        return Err(Error::InvalidArgument("not a transversal family"));
    }
    let s = family.branch_sign();
    let sph = Spheroid::prolate(e)?;
    let w2 = transversal_omega2_over_pi_rho_g(e, s)?;
    let omega = libm::sqrt(w2 * params.pi_rho_g());
    let f = transversal_f(e, s);
    let derivs = potential_derivs(&sph, params);
    let n = unit(1);
    let xi = VelocityPair::new(n.map(|x| omega * x), n.map(|x| omega * f * x));
    Ok(EquilibriumState {
        family,
        sph,
        xi,
        lambda: transversal_lambda(e, &derivs),
        mu: momentum(&sph.matrix(), &xi, params),
        omega,
        omega2_over_pi_rho_g: w2,
        f_ratio: Some(f),
        derivs,
        params: *params,
        isotropy: Isotropy { g_f: "Z2 ⋉ O(2)_e3^D", g_mu: "SO(2)_n × SO(2)_n", g_pf: "Z2(n)" },
    })
}

/// Constructs the state of any family; `e` is ignored for the sphere.
pub fn state(family: Family, e: f64, params: &PhysicalParams) -> Result<EquilibriumState> {
    match family {
        Family::Spherical => Ok(spherical(params)),
        Family::MacLaurin => maclaurin(e, params),
        _ => transversal(e, family, params),
    }
}

/// Numerical evidence that no further spheroidal equilibria exist at the
/// semi-axis `a` of `diag(a, a, 1/a²)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NonexistenceEvidence {
    pub a: f64,
    /// `|(a⁶ − 1)(V₁ + a²V₂)|/R` for the non-rotating case.
    pub static_gap: f64,
    /// `g` values forced by comparing the two equatorial equations.
    pub g_forced: [Complex64; 2],
    /// `g±` solving the two off-diagonal equations.
    pub g_offdiag: [Complex64; 2],
    /// Smallest distance between a forced and an off-diagonal `g`.
    pub rotating_gap: f64,
}

pub fn no_other_symmetric_re_evidence(a: f64, params: &PhysicalParams) -> Result<NonexistenceEvidence> {
    if !(a > 0.0) || a == 1.0 {
        return Err(Error::Domain("semi-axis must be positive and different from 1"));
    }
    let a6 = libm::pow(a, 6.0);
    let (kind, e) = if a > 1.0 {
        (SpheroidKind::Oblate, libm::sqrt(1.0 - 1.0 / a6))
    } else {
        (SpheroidKind::Prolate, libm::sqrt(1.0 - a6))
    };
    let sph = Spheroid::new(kind, e)?;
    let d = potential_derivs(&sph, params);
    let static_gap = ((a6 - 1.0) * (d.v1 + a * a * d.v2) / params.r()).abs();
    let a3 = a * a * a;
    let root_f = Complex64::new(1.0 - a6, 0.0).sqrt();
    let g_forced = [(1.0 + root_f) / a3, (1.0 - root_f) / a3];
    let root_o = Complex64::new(1.0 - 10.0 * a6 + 9.0 * a6 * a6, 0.0).sqrt();
    let g_offdiag = [(1.0 + 3.0 * a6 + root_o) / (4.0 * a3), (1.0 + 3.0 * a6 - root_o) / (4.0 * a3)];
    let mut rotating_gap = f64::INFINITY;
    for gf in g_forced {
        for go in g_offdiag {
            rotating_gap = rotating_gap.min((gf - go).norm());
        }
    }
    Ok(NonexistenceEvidence { a, static_gap, g_forced, g_offdiag, rotating_gap })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn family_parsing() {
        for f in Family::ALL {
            assert_eq!(f.name().parse::<Family>().unwrap(), f);
        }
        assert!("jacobi".parse::<Family>().is_err());
    }

    #[test]
    fn f_ratios() {
        assert!((transversal_f(0.6, 1.0) - 2.0).abs() < 1e-15);
        assert!((transversal_f(0.6, -1.0) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn domain_errors() {
        let p = PhysicalParams::default();
        assert!(maclaurin(0.0, &p).is_err());
        assert!(maclaurin(0.9995, &p).is_err());
        assert!(transversal(0.5, Family::MacLaurin, &p).is_err());
        assert!(no_other_symmetric_re_evidence(1.0, &p).is_err());
    }
}
