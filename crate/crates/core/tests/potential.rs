use ellipsoid_core::kinematics::{PhysicalParams, Spheroid, SpheroidKind};
use ellipsoid_core::numerics::{integrate, QuadratureSpec};
use ellipsoid_core::potential::{j_closed, j_quad, j_quad_xform, potential_derivs, SUPPORTED_PAIRS};

fn beta(a: f64, b: f64) -> f64 {
    libm::exp(libm::lgamma(a) + libm::lgamma(b) - libm::lgamma(a + b))
}

/// Spherical J(k, r) = B(r+1, 3k/2 − r − 1).
fn j_sphere(k: u32, r: u32) -> f64 {
    beta(r as f64 + 1.0, 1.5 * k as f64 - r as f64 - 1.0)
}

/// Hypergeometric expansion of the x-form: term-by-term Beta integrals of
/// the binomial series of (1 − e²x²)^{−ν}.
fn j_binomial(kind: SpheroidKind, e: f64, k: u32, r: u32) -> f64 {
    let m = (3 * (k - 1) - 2 * r) as f64;
    let (nu, p) = match kind {
        SpheroidKind::Prolate => (k as f64, (2.0 * (r as f64 + 1.0) - 3.0 * k as f64) / 3.0),
        _ => (0.5 * k as f64, (2.0 * (r as f64 + 1.0) - 3.0 * k as f64) / 6.0),
    };
    let mut sum = 0.0;
    let mut coef = 1.0;
    for n in 0..400 {
        let term = coef * 0.5 * beta((m + 2.0 * n as f64 + 1.0) / 2.0, r as f64 + 1.0) * libm::pow(e, 2.0 * n as f64);
        sum += term;
        if term.abs() < 1e-18 * sum.abs() {
            break;
        }
        coef *= (nu + n as f64) / (n as f64 + 1.0);
    }
    2.0 * libm::pow(1.0 - e * e, -p) * sum
}

fn grid() -> Vec<f64> {
    let mut g = vec![0.01];
    g.extend((1..=19).map(|i| 0.05 * i as f64));
    g
}

#[test]
fn beta_quadrature_example() {
    let spec = QuadratureSpec::default();
    let v = integrate(|s| s * s / libm::pow(1.0 + s, 4.5), 0.0, f64::INFINITY, &spec).unwrap();
    assert!((v - 16.0 / 105.0).abs() < 1e-13);
    // Independent refinement: composite trapezoid on the x-form of the same integral.
    let n = 200_000;
    let h = 1.0 / n as f64;
    let trap: f64 = (1..n)
        .map(|i| {
            let x = i as f64 * h;
            2.0 * (1.0 - x * x) * (1.0 - x * x) * x * x
        })
        .sum::<f64>()
        * h;
    assert!((trap - 16.0 / 105.0).abs() < 1e-9);
}

#[test]
fn sphere_values() {
    let sph = Spheroid::sphere();
    let spec = QuadratureSpec::default();
    for (k, r) in SUPPORTED_PAIRS {
        let want = j_sphere(k, r);
        assert!((j_closed(&sph, k, r).unwrap() - want).abs() < 1e-14 * want, "closed J({k},{r})");
        assert!((j_quad(&sph, k, r, &spec).unwrap() - want).abs() < 1e-11 * want, "quad J({k},{r})");
    }
    assert_eq!(j_sphere(1, 0), 2.0);
    assert!((j_sphere(3, 2) - 16.0 / 105.0).abs() < 1e-15);
    assert!((j_sphere(3, 1) - 4.0 / 35.0).abs() < 1e-15);
    let p = PhysicalParams::default();
    let d = potential_derivs(&sph, &p);
    let r = p.r();
    assert!((d.v + 2.0 * r).abs() < 1e-14 * r);
    assert!((d.v1 - 8.0 * r / 105.0).abs() < 1e-14 * r);
    assert!((d.v2 - 2.0 * r / 35.0).abs() < 1e-14 * r);
    assert!((d.v1 + d.v2 - 2.0 * r / 15.0).abs() < 1e-14 * r);
}

#[test]
fn closed_forms_match_quadrature_on_grid() {
    let spec = QuadratureSpec::default();
    for kind in [SpheroidKind::Oblate, SpheroidKind::Prolate] {
        for e in grid() {
            let sph = Spheroid::new(kind, e).unwrap();
            for (k, r) in SUPPORTED_PAIRS {
                let c = j_closed(&sph, k, r).unwrap();
                let q = j_quad(&sph, k, r, &spec).unwrap();
                assert!((c - q).abs() <= 1e-9 * q, "{kind:?} e={e} J({k},{r}): closed {c} quad {q}");
            }
        }
    }
}

#[test]
fn closed_forms_match_binomial_series() {
    for kind in [SpheroidKind::Oblate, SpheroidKind::Prolate] {
        for i in 1..=80 {
            let e = 0.01 * i as f64;
            let sph = Spheroid::new(kind, e).unwrap();
            for (k, r) in SUPPORTED_PAIRS {
                let c = j_closed(&sph, k, r).unwrap();
                let b = j_binomial(kind, e, k, r);
                assert!((c - b).abs() <= 5e-12 * b, "{kind:?} e={e} J({k},{r}): closed {c} series {b}");
            }
        }
    }
}

#[test]
fn xform_agrees_with_sform() {
    let spec = QuadratureSpec::default();
    for kind in [SpheroidKind::Oblate, SpheroidKind::Prolate] {
        let sph = Spheroid::new(kind, 0.5).unwrap();
        for (k, r) in SUPPORTED_PAIRS {
            let x = j_quad_xform(&sph, k, r, &spec).unwrap();
            let b = j_binomial(kind, 0.5, k, r);
            assert!((x - b).abs() < 1e-11 * b);
        }
    }
}

#[test]
fn continuity_at_zero() {
    for (k, r) in SUPPORTED_PAIRS {
        let o = j_closed(&Spheroid::oblate(1e-6).unwrap(), k, r).unwrap();
        let p = j_closed(&Spheroid::prolate(1e-6).unwrap(), k, r).unwrap();
        let s = j_sphere(k, r);
        assert!((o - s).abs() < 1e-8 * s && (p - s).abs() < 1e-8 * s);
    }
}

#[test]
fn signs_on_grid() {
    let p = PhysicalParams::default();
    for kind in [SpheroidKind::Oblate, SpheroidKind::Prolate] {
        for e in grid() {
            let d = potential_derivs(&Spheroid::new(kind, e).unwrap(), &p);
            assert!(d.v < 0.0 && d.v1 > 0.0 && d.v2 > 0.0);
            assert!(d.v11 < 0.0 && d.v12 < 0.0 && d.v22 < 0.0);
        }
    }
}
