mod common;

use common::{config, rel, rotation, Lcg};
use ellipsoid_core::equilibria::{maclaurin, spherical, state, Family};
use ellipsoid_core::inertia::{
    d2_locked_inertia, d_locked_inertia, d_v2aug, hess_v2aug, locked_inertia, locked_inertia_form, momentum, v2aug,
};
use ellipsoid_core::kinematics::{Mat3, PhysicalParams, Spheroid, VelocityPair};
use ellipsoid_core::numerics::QuadratureSpec;
use ellipsoid_core::potential::potential_derivs_quad;
use proptest::prelude::*;

fn tight() -> QuadratureSpec {
    QuadratureSpec::new(1e-16, 5e-14, 8000).unwrap()
}

fn configs() -> Vec<Mat3> {
    let mut rng = Lcg(7);
    let mut v = vec![Mat3::IDENTITY, Spheroid::oblate(0.6).unwrap().matrix(), Spheroid::prolate(0.8).unwrap().matrix()];
    for _ in 0..3 {
        v.push(Mat3::IDENTITY + rng.mat3() * 0.3);
    }
    v
}

#[test]
fn trace_and_block_forms_agree() {
    let p = PhysicalParams::new(1.7, 0.4).unwrap();
    let mut rng = Lcg(11);
    for f in configs() {
        let block = locked_inertia(&f, &p);
        for _ in 0..100 {
            let (x, y) = (rng.vec6(), rng.vec6());
            let a = block.form(&x, &y);
            let b = locked_inertia_form(&f, &VelocityPair::from_array(x), &VelocityPair::from_array(y), &p);
            assert!((a - b).abs() <= 1e-12 * (a.abs().max(b.abs()).max(p.t())));
        }
    }
}

#[test]
fn momentum_is_inertia_times_velocity() {
    let p = PhysicalParams::default();
    let mut rng = Lcg(3);
    for f in configs() {
        let xi = rng.vec6();
        let m = momentum(&f, &VelocityPair::from_array(xi), &p).to_array();
        let want = locked_inertia(&f, &p).apply(&xi);
        for i in 0..6 {
            assert!((m[i] - want[i]).abs() < 1e-13 * (1.0 + want[i].abs()));
        }
    }
}

#[test]
fn kernel_is_isotropy_algebra() {
    let p = PhysicalParams::default();
    let f = Spheroid::oblate(0.7).unwrap().matrix();
    let h = VelocityPair::new([0.0, 0.0, 1.0], [0.0, 0.0, 1.0]);
    assert!(locked_inertia_form(&f, &h, &h, &p).abs() < 1e-15);
    let ev = locked_inertia(&f, &p).to_sym().eigenvalues();
    assert!(ev[0].abs() < 1e-14 && ev[1] > 1e-3);
}

proptest! {
    #![proptest_config(config(50))]

    #[test]
    fn inertia_form_is_equivariant(
        x in proptest::array::uniform6(-1.0f64..1.0),
        y in proptest::array::uniform6(-1.0f64..1.0),
        ax in proptest::array::uniform3(-1.0f64..1.0),
        bx in proptest::array::uniform3(-1.0f64..1.0),
        ta in -3.0f64..3.0,
        tb in -3.0f64..3.0,
    ) {
        let p = PhysicalParams::default();
        let f = Spheroid::prolate(0.5).unwrap().matrix() + Mat3::from_fn(|i, j| 0.1 * (i as f64 - j as f64));
        let (l, r) = (rotation(ax, ta), rotation(bx, tb));
        let (xi, eta) = (VelocityPair::from_array(x), VelocityPair::from_array(y));
        let rot = |v: &VelocityPair| VelocityPair::new(l.mul_vec(v.xi_l), r.mul_vec(v.xi_r));
        let a = locked_inertia_form(&f, &xi, &eta, &p);
        let b = locked_inertia_form(&(l * f * r.transpose()), &rot(&xi), &rot(&eta), &p);
        prop_assert!((a - b).abs() < 1e-12 * (1.0 + a.abs()));
    }

    #[test]
    fn d_locked_inertia_matches_fd(
        a in proptest::collection::vec(-1.0f64..1.0, 9),
        x in proptest::array::uniform6(-1.0f64..1.0),
        y in proptest::array::uniform6(-1.0f64..1.0),
    ) {
        let p = PhysicalParams::default();
        let f = Spheroid::oblate(0.4).unwrap().matrix();
        let a = Mat3::from_slice(&a);
        let (xi, eta) = (VelocityPair::from_array(x), VelocityPair::from_array(y));
        let h = 1e-5;
        let fd = (locked_inertia_form(&(f + a * h), &xi, &eta, &p) - locked_inertia_form(&(f - a * h), &xi, &eta, &p)) / (2.0 * h);
        let an = d_locked_inertia(&f, &a, &xi, &eta, &p);
        prop_assert!((fd - an).abs() <= 1e-7 * an.abs().max(1e-3));
    }

    #[test]
    fn d2_locked_inertia_matches_fd(
        a in proptest::collection::vec(-1.0f64..1.0, 9),
        b in proptest::collection::vec(-1.0f64..1.0, 9),
        x in proptest::array::uniform6(-1.0f64..1.0),
    ) {
        let p = PhysicalParams::default();
        let f = Spheroid::prolate(0.6).unwrap().matrix();
        let (a, b) = (Mat3::from_slice(&a), Mat3::from_slice(&b));
        let xi = VelocityPair::from_array(x);
        let h = 1e-5;
        let fd = (d_locked_inertia(&(f + b * h), &a, &xi, &xi, &p) - d_locked_inertia(&(f - b * h), &a, &xi, &xi, &p)) / (2.0 * h);
        let an = d2_locked_inertia(&a, &b, &xi, &p);
        prop_assert!((fd - an).abs() <= 1e-6 * an.abs().max(1e-3));
        prop_assert!((an - d2_locked_inertia(&b, &a, &xi, &p)).abs() < 1e-12 * (1.0 + an.abs()));
    }
}

#[test]
fn maclaurin_second_variation_of_inertia() {
    let p = PhysicalParams::default();
    let st = maclaurin(0.6, &p).unwrap();
    let (a, c) = (st.sph.a(), st.sph.c());
    let s1 = Mat3::diag([1.0, 1.0, -2.0 * c / a]);
    let s2 = Mat3::diag([1.0, -1.0, 0.0]);
    let want = 4.0 * p.t() * st.omega * st.omega;
    assert!(rel(d2_locked_inertia(&s1, &s1, &st.xi, &p), want) < 1e-12);
    assert!(d2_locked_inertia(&s2, &s1, &st.xi, &p).abs() < 1e-12);
}

#[test]
fn gradient_at_sphere_without_multiplier() {
    let p = PhysicalParams::default();
    let sp = spherical(&p);
    let g = d_v2aug(&Mat3::IDENTITY, &VelocityPair::zero(), 0.0, &sp.derivs, &p);
    let lam = 2.0 * sp.derivs.v1 + 4.0 * sp.derivs.v2;
    assert!((g - Mat3::IDENTITY * lam).max_abs() < 1e-13 * lam);
    assert!(rel(lam, 8.0 * p.r() / 21.0) < 1e-14);
}

#[test]
fn gradient_vanishes_at_equilibria() {
    let p = PhysicalParams::default();
    for fam in Family::ALL {
        for e in [0.2, 0.5, 0.8] {
            let st = state(fam, e, &p).unwrap();
            let g = d_v2aug(&st.config(), &st.xi, st.lambda, &st.derivs, &p);
            assert!(g.max_abs() <= 1e-10 * p.r(), "{fam:?} e={e}: {}", g.max_abs());
        }
    }
}

/// Random near-equilibrium probes: analytic gradient and Hessian against
/// central differences of the twice-augmented potential.
#[test]
fn gradient_and_hessian_match_finite_differences() {
    let p = PhysicalParams::default();
    let spec = tight();
    let mut rng = Lcg(2024);
    for fam in Family::ALL {
        for _ in 0..5 {
            let e = 0.3 + 0.3 * (rng.next() + 1.0);
            let st = state(fam, e, &p).unwrap();
            let f = st.config() + rng.mat3() * 0.02;
            let xi = VelocityPair::from_array(core::array::from_fn(|i| st.xi.to_array()[i] + 0.02 * rng.next()));
            let lam = st.lambda;
            let d = potential_derivs_quad(&f, &p, &spec).unwrap();
            let val = |m: &Mat3| v2aug(m, &xi, lam, &p, &spec).unwrap();

            let g = d_v2aug(&f, &xi, lam, &d, &p);
            let (a, b) = (rng.mat3(), rng.mat3());
            let h = 1e-4;
            let fd1 = (val(&(f + a * h)) - val(&(f - a * h))) / (2.0 * h);
            let an1 = g.frob(&a);
            assert!((fd1 - an1).abs() <= 1e-5 * an1.abs().max(p.r() * 1e-2), "{fam:?} grad {fd1} vs {an1}");

            let h = 2e-3;
            let fd2 = (val(&(f + a * h + b * h)) - val(&(f + a * h - b * h)) - val(&(f - a * h + b * h))
                + val(&(f - a * h - b * h)))
                / (4.0 * h * h);
            let an2 = hess_v2aug(&f, &xi, lam, &a, &b, &d, &p);
            assert!((fd2 - an2).abs() <= 1e-5 * an2.abs().max(p.r()), "{fam:?} hess {fd2} vs {an2}");
        }
    }
}
