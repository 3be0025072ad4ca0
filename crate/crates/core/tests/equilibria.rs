mod common;

use common::rel;
use ellipsoid_core::equilibria::{
    maclaurin, no_other_symmetric_re_evidence, re_residual, spherical, state, transversal, transversal_f,
    transversal_lambda_rejected, Family,
};
use ellipsoid_core::inertia::locked_inertia;
use ellipsoid_core::kinematics::{PhysicalParams, Spheroid, VelocityPair};
use ellipsoid_core::numerics::QuadratureSpec;
use ellipsoid_core::potential::j_quad;

fn grid() -> impl Iterator<Item = f64> {
    (1..=19).map(|i| i as f64 * 0.05)
}

fn params() -> PhysicalParams {
    PhysicalParams::new(2.5, 0.7).unwrap()
}

#[test]
fn residuals_vanish_on_grid() {
    let p = params();
    for fam in Family::ALL {
        for e in grid() {
            let st = state(fam, e, &p).unwrap();
            let (m, d) = re_residual(&st.config(), &st.xi, st.lambda, &st.derivs, &p);
            assert!(m.max_abs() <= 1e-10 * p.r(), "{fam:?} e={e}: {}", m.max_abs());
            assert!(d.abs() < 1e-14);
            assert!(st.omega2_over_pi_rho_g >= 0.0);
        }
    }
    let sp = spherical(&p);
    let (m, _) = re_residual(&sp.config(), &sp.xi, sp.lambda, &sp.derivs, &p);
    assert!(m.max_abs() <= 1e-12 * p.r());
}

#[test]
fn rejected_transversal_multiplier_leaves_residual() {
    let p = params();
    for fam in [Family::TransversalPlus, Family::TransversalMinus] {
        for e in grid() {
            let st = state(fam, e, &p).unwrap();
            let lam = transversal_lambda_rejected(e, &st.derivs);
            let (m, _) = re_residual(&st.config(), &st.xi, lam, &st.derivs, &p);
            assert!(m.max_abs() > 1e-3 * p.r(), "{fam:?} e={e}");
        }
    }
}

#[test]
fn perturbed_rotation_is_detected() {
    let p = params();
    let st = maclaurin(0.5, &p).unwrap();
    let w = 1.01 * st.omega;
    let xi = VelocityPair::new([0.0, 0.0, 0.5 * w], [0.0, 0.0, -0.5 * w]);
    let (m, _) = re_residual(&st.config(), &xi, st.lambda, &st.derivs, &p);
    assert!(m.norm() > 1e-4 * p.r());
}

#[test]
fn maclaurin_law_matches_quadrature() {
    let spec = QuadratureSpec::default();
    for e in grid() {
        let st = maclaurin(e, &PhysicalParams::default()).unwrap();
        let sph = Spheroid::oblate(e).unwrap();
        let j32 = j_quad(&sph, 3, 2, &spec).unwrap();
        let j31 = j_quad(&sph, 3, 1, &spec).unwrap();
        let want = 2.0 * e * e * (j32 + j31 / (1.0 - e * e).cbrt());
        assert!(rel(st.omega2_over_pi_rho_g, want) < 1e-9, "e={e}");
    }
    let w = maclaurin(0.5, &PhysicalParams::default()).unwrap().omega2_over_pi_rho_g;
    assert!((w - 0.137_993_6).abs() < 1e-6);
}

#[test]
fn momenta_match_block_inertia() {
    let p = params();
    for fam in Family::ALL {
        let st = state(fam, 0.7, &p).unwrap();
        let want = locked_inertia(&st.config(), &p).apply(&st.xi.to_array());
        let got = st.mu.to_array();
        for i in 0..6 {
            assert!((got[i] - want[i]).abs() <= 1e-13 * (1.0 + want[i].abs()));
        }
    }
    let st = maclaurin(0.3, &p).unwrap();
    let m = 2.0 * p.t() * st.omega / (1.0f64 - 0.09).cbrt();
    let mu = st.mu.to_array();
    assert!(rel(mu[2], m) < 1e-13 && rel(mu[5], -m) < 1e-13);
    assert_eq!(spherical(&p).mu.to_array(), [0.0; 6]);
}

#[test]
fn spherical_multiplier() {
    let p = params();
    assert!(rel(spherical(&p).lambda, 8.0 * p.r() / 21.0) < 1e-14);
}

#[test]
fn branch_symmetry() {
    let p = PhysicalParams::default();
    assert!((transversal_f(0.6, 1.0) * transversal_f(0.6, -1.0) - 1.0).abs() < 1e-15);
    for e in grid() {
        let plus = transversal(e, Family::TransversalPlus, &p).unwrap();
        let minus = transversal(e, Family::TransversalMinus, &p).unwrap();
        let (fp, fm) = (plus.f_ratio.unwrap(), minus.f_ratio.unwrap());
        assert!(rel(fp * fm, 1.0) < 1e-12);
        assert!(rel(plus.omega2_over_pi_rho_g * fp, minus.omega2_over_pi_rho_g * fm) < 1e-12);
        assert!(rel(plus.omega2_over_pi_rho_g / minus.omega2_over_pi_rho_g, fm / fp) < 1e-12);

        // Transposing F and swapping the two velocities maps one branch onto the other.
        let swapped = VelocityPair::new(plus.xi.xi_r, plus.xi.xi_l);
        let ft = plus.config().transpose();
        let (m, _) = re_residual(&ft, &swapped, plus.lambda, &plus.derivs, &p);
        assert!(m.max_abs() <= 1e-10 * p.r());
        for i in 0..6 {
            assert!((swapped.to_array()[i] - minus.xi.to_array()[i]).abs() < 1e-12);
        }
    }
}

#[test]
fn no_other_symmetric_equilibria() {
    let p = PhysicalParams::default();
    for a in [1.2, 0.8] {
        assert!(no_other_symmetric_re_evidence(a, &p).unwrap().static_gap > 1e-3);
    }
    for a in [0.7, 1.3] {
        assert!(no_other_symmetric_re_evidence(a, &p).unwrap().rotating_gap > 0.01);
    }
}
