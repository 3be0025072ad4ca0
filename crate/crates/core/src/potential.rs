//! Self-gravitating potential of a homogeneous ellipsoid and the integral
//! family `J(k, r) = ∫₀^∞ s^r / Δ^k ds`, `Δ = √(s³ + I₁s² + I₂s + 1)`.

use crate::eval_closed;
use crate::kinematics::{invariants_of, Config3, Mat3, PhysicalParams, Spheroid, SpheroidKind};
use crate::numerics::{integrate, QuadratureSpec, Scalar};
use crate::{Error, Result};

/// The `(k, r)` pairs that enter `V` and its first two derivatives.
pub const SUPPORTED_PAIRS: [(u32, u32); 6] = [(1, 0), (3, 1), (3, 2), (5, 2), (5, 3), (5, 4)];

/// `V` and its partial derivatives with respect to the invariants `I₁, I₂`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PotentialDerivs {
    pub v: f64,
    pub v1: f64,
    pub v2: f64,
    pub v11: f64,
    pub v12: f64,
    pub v22: f64,
}

impl PotentialDerivs {
    /// Assembles the derivatives from the six `J` values.
    pub fn from_j(j: &JValues, r: f64) -> Self {
        PotentialDerivs {
            v: -r * j.j10,
            v1: 0.5 * r * j.j32,
            v2: 0.5 * r * j.j31,
            v11: -0.75 * r * j.j54,
            v12: -0.75 * r * j.j53,
            v22: -0.75 * r * j.j52,
        }
    }

    /// Every field divided by `R`.
    pub fn over_r(&self, r: f64) -> Self {
        PotentialDerivs {
            v: self.v / r,
            v1: self.v1 / r,
            v2: self.v2 / r,
            v11: self.v11 / r,
            v12: self.v12 / r,
            v22: self.v22 / r,
        }
    }
}

/// The six `J(k, r)` values behind [`PotentialDerivs`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JValues {
    pub j10: f64,
    pub j31: f64,
    pub j32: f64,
    pub j52: f64,
    pub j53: f64,
    pub j54: f64,
}

impl JValues {
    fn try_from_fn<F: FnMut(u32, u32) -> Result<f64>>(mut f: F) -> Result<Self> {
        Ok(JValues { j10: f(1, 0)?, j31: f(3, 1)?, j32: f(3, 2)?, j52: f(5, 2)?, j53: f(5, 3)?, j54: f(5, 4)? })
    }
}

/// `Δ(F, s)`; the constant term of the cubic is 1 whatever `det F` is.
pub fn delta(f: &Config3, s: f64) -> Result<f64> {
    let (i1, i2, _) = invariants_of(f.matrix());
    delta_from_invariants(i1, i2, s)
}

fn delta_from_invariants(i1: f64, i2: f64, s: f64) -> Result<f64> {
    if !(s >= 0.0) {
        return Err(Error::Domain("delta needs s ≥ 0"));
    }
    let rad = ((s + i1) * s + i2) * s + 1.0;
    if !(rad > 0.0) {
        return Err(Error::Domain("delta radicand is not positive"));
    }
    Ok(libm::sqrt(rad))
}

fn check_pair(k: u32, r: u32) -> Result<()> {
    if 3 * k <= 2 * (r + 1) {
        return Err(Error::UnsupportedPair { k, r });
    }
    Ok(())
}

/// `s^r/Δ^k`, rewritten for large `s` as `s^{r−3k/2} q^{−k/2}` with
/// `q = 1 + I₁/s + I₂/s² + 1/s³` to stay clear of overflow.
fn j_integrand(i1: f64, i2: f64, k: u32, r: u32, s: f64) -> f64 {
    if s <= 1.0 {
        let rad = ((s + i1) * s + i2) * s + 1.0;
        libm::pow(s, r as f64) / libm::pow(rad, 0.5 * k as f64)
    } else {
        let u = 1.0 / s;
        let q = 1.0 + u * (i1 + u * (i2 + u));
        libm::pow(s, r as f64 - 1.5 * k as f64) * libm::pow(q, -0.5 * k as f64)
    }
}

/// `J(k, r)` by quadrature of the defining `s`-integral for invariants `I₁, I₂`.
pub fn j_quad_invariants(i1: f64, i2: f64, k: u32, r: u32, spec: &QuadratureSpec) -> Result<f64> {
    check_pair(k, r)?;
    integrate(|s| j_integrand(i1, i2, k, r, s), 0.0, f64::INFINITY, spec)
}

/// `J(k, r)` for a spheroid through the finite `x`-integral
/// `2(1−e²)^{-p} ∫₀¹ (1−x²)^r x^{3(k−1)−2r} (1−e²x²)^{−ν} dx`,
/// with `ν = k/2, p = (2(r+1)−3k)/6` (oblate) or `ν = k, p = (2(r+1)−3k)/3` (prolate).
pub fn j_quad_xform(sph: &Spheroid, k: u32, r: u32, spec: &QuadratureSpec) -> Result<f64> {
    check_pair(k, r)?;
    let m = 3 * (k as i64 - 1) - 2 * r as i64;
    if m < 0 {
        return Err(Error::UnsupportedPair { k, r });
    }
    let e = sph.ecc();
    let e2 = e * e;
    let expo = (2.0 * (r as f64 + 1.0) - 3.0 * k as f64) / 6.0;
    let (nu, pref) = match sph.kind() {
        SpheroidKind::Sphere | SpheroidKind::Oblate => (0.5 * k as f64, libm::pow(1.0 - e2, -expo)),
        SpheroidKind::Prolate => (k as f64, libm::pow(1.0 - e2, -2.0 * expo)),
    };
    let body = integrate(
        |x| libm::pow(1.0 - x * x, r as f64) * libm::pow(x, m as f64) * libm::pow(1.0 - e2 * x * x, -nu),
        0.0,
        1.0,
        spec,
    )?;
    Ok(2.0 * pref * body)
}

/// `J(k, r)` for a spheroid by quadrature of the `s`-integral, cross-checked
/// against [`j_quad_xform`] (the two must agree to ten times the tolerance).
pub fn j_quad(sph: &Spheroid, k: u32, r: u32, spec: &QuadratureSpec) -> Result<f64> {
    let (i1, i2, _) = invariants_of(&sph.matrix());
    let v = j_quad_invariants(i1, i2, k, r, spec)?;
    if let Ok(x) = j_quad_xform(sph, k, r, spec) {
        let tol = spec.abs_tol.max(spec.rel_tol * v.abs());
        if (x - v).abs() > 10.0 * tol {
            return Err(Error::Domain("s-form and x-form quadratures of J disagree"));
        }
    }
    Ok(v)
}

// Closed forms. Each J is 2·(1−e²)^{-p}·L where
// L = sign/den · (1−e²)^extra · [B(e)·P(e) + W(e)·Q(e)] / e^shift,
// with B = arcsin e, W = √(1−e²) (oblate) or B = artanh e, W = 1 (prolate).
struct ClosedJ {
    p: &'static [f64],
    q: &'static [f64],
    den: f64,
    shift: usize,
    extra: f64,
}

const OBLATE: [ClosedJ; 6] = [
    ClosedJ { p: &[1.0], q: &[], den: 1.0, shift: 1, extra: 0.0 },
    ClosedJ { p: &[15.0, 0.0, -12.0], q: &[0.0, -15.0, 0.0, 2.0], den: 8.0, shift: 7, extra: 0.0 },
    ClosedJ { p: &[-15.0, 0.0, 24.0, 0.0, -8.0], q: &[0.0, 15.0, 0.0, -14.0], den: 8.0, shift: 7, extra: 0.0 },
    ClosedJ {
        p: &[3465.0, 0.0, -5040.0, 0.0, 1680.0],
        q: &[0.0, -3465.0, 0.0, 2730.0, 0.0, -168.0, 0.0, -16.0],
        den: 384.0,
        shift: 13,
        extra: 0.0,
    },
    ClosedJ {
        p: &[-1155.0, 0.0, 2520.0, 0.0, -1680.0, 0.0, 320.0],
        q: &[0.0, 1155.0, 0.0, -1750.0, 0.0, 616.0, 0.0, -16.0],
        den: 128.0,
        shift: 13,
        extra: 0.0,
    },
    ClosedJ {
        p: &[1155.0, 0.0, -3360.0, 0.0, 3360.0, 0.0, -1280.0, 0.0, 128.0],
        q: &[0.0, -1155.0, 0.0, 2590.0, 0.0, -1736.0, 0.0, 304.0],
        den: 128.0,
        shift: 13,
        extra: 0.0,
    },
];

const PROLATE: [ClosedJ; 6] = [
    ClosedJ { p: &[1.0], q: &[], den: 1.0, shift: 1, extra: 0.0 },
    ClosedJ { p: &[-15.0, 0.0, 18.0, 0.0, -3.0], q: &[0.0, 15.0, 0.0, -13.0], den: 8.0, shift: 7, extra: -1.0 },
    ClosedJ { p: &[15.0, 0.0, -6.0, 0.0, -1.0], q: &[0.0, -15.0, 0.0, 1.0], den: 8.0, shift: 7, extra: 0.0 },
    ClosedJ {
        p: &[3465.0, 0.0, -8820.0, 0.0, 7350.0, 0.0, -2100.0, 0.0, 105.0],
        q: &[0.0, -3465.0, 0.0, 7665.0, 0.0, -5103.0, 0.0, 919.0],
        den: 384.0,
        shift: 13,
        extra: -2.0,
    },
    ClosedJ {
        p: &[-1155.0, 0.0, 2100.0, 0.0, -1050.0, 0.0, 100.0, 0.0, 5.0],
        q: &[0.0, 1155.0, 0.0, -1715.0, 0.0, 581.0, 0.0, -5.0],
        den: 128.0,
        shift: 13,
        extra: -1.0,
    },
    ClosedJ {
        p: &[1155.0, 0.0, -1260.0, 0.0, 210.0, 0.0, 20.0, 0.0, 3.0],
        q: &[0.0, -1155.0, 0.0, 875.0, 0.0, -21.0, 0.0, -3.0],
        den: 128.0,
        shift: 13,
        extra: 0.0,
    },
];

fn pair_index(k: u32, r: u32) -> Result<usize> {
    SUPPORTED_PAIRS.iter().position(|&p| p == (k, r)).ok_or(Error::UnsupportedPair { k, r })
}

fn j_closed_generic<S: Scalar>(ctx: S::Ctx, prolate: bool, idx: usize) -> S {
    let (k, r) = SUPPORTED_PAIRS[idx];
    let form = if prolate { &PROLATE[idx] } else { &OBLATE[idx] };
    let (base, weight) =
        if prolate { (S::atanh_e(ctx), S::cst(ctx, 1.0)) } else { (S::asin_e(ctx), S::one_minus_e2_pow(ctx, 0.5)) };
    let numer = base * S::poly(ctx, form.p) + weight * S::poly(ctx, form.q);
    let l = numer.div_e_pow(ctx, form.shift) * (1.0 / form.den);
    let l = if form.extra != 0.0 { l * S::one_minus_e2_pow(ctx, form.extra) } else { l };
    let expo = (2.0 * (r as f64 + 1.0) - 3.0 * k as f64) / 6.0;
    let pref = S::one_minus_e2_pow(ctx, if prolate { -2.0 * expo } else { -expo });
    pref * l * 2.0
}

/// Elementary closed form of `J(k, r)` for the supported pairs; below the
/// series switch the same expression is evaluated as a power series in `e`.
pub fn j_closed(sph: &Spheroid, k: u32, r: u32) -> Result<f64> {
    let idx = pair_index(k, r)?;
    let prolate = sph.kind() == SpheroidKind::Prolate;
    Ok(eval_closed!(sph.ecc(), j_closed_generic, prolate, idx))
}

/// All six `J` values of a spheroid in closed form.
pub fn j_values(sph: &Spheroid) -> JValues {
    JValues::try_from_fn(|k, r| j_closed(sph, k, r)).expect("supported pairs")
}

/// `V` and its derivatives for a spheroid, from the closed forms.
pub fn potential_derivs(sph: &Spheroid, params: &PhysicalParams) -> PotentialDerivs {
    PotentialDerivs::from_j(&j_values(sph), params.r())
}

/// `V` and its derivatives at an arbitrary configuration, by quadrature.
pub fn potential_derivs_quad(f: &Mat3, params: &PhysicalParams, spec: &QuadratureSpec) -> Result<PotentialDerivs> {
    let (i1, i2, _) = invariants_of(f);
    let j = JValues::try_from_fn(|k, r| j_quad_invariants(i1, i2, k, r, spec))?;
    Ok(PotentialDerivs::from_j(&j, params.r()))
}

/// `V(F) = −R·J(1, 0)` at an arbitrary configuration.
pub fn potential_value(f: &Mat3, params: &PhysicalParams, spec: &QuadratureSpec) -> Result<f64> {
    let (i1, i2, _) = invariants_of(f);
    Ok(-params.r() * j_quad_invariants(i1, i2, 1, 0, spec)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn delta_values() {
        assert_eq!(delta(&Config3::identity(), 0.0).unwrap(), 1.0);
        assert!((delta(&Config3::identity(), 3.0).unwrap() - 8.0).abs() < 1e-14);
        let s = Spheroid::oblate(0.7).unwrap();
        let (a, c) = (s.a(), s.c());
        let x = 0.9;
        let want = libm::sqrt((a * a + x) * (a * a + x) * (c * c + x));
        assert!((delta(&s.config(), x).unwrap() - want).abs() < 1e-14);
        assert!(delta(&Config3::identity(), -1.0).is_err());
    }

    #[test]
    fn unsupported_pairs() {
        let s = Spheroid::oblate(0.5).unwrap();
        assert_eq!(j_closed(&s, 3, 3), Err(Error::UnsupportedPair { k: 3, r: 3 }));
        assert!(j_quad(&s, 1, 1, &QuadratureSpec::default()).is_err());
    }
}
