mod common;

use common::rel;
use ellipsoid_core::equilibria::{maclaurin, state, Family};
use ellipsoid_core::inertia::d_locked_inertia;
use ellipsoid_core::kinematics::{ad, alg_dot, Mat3, PhysicalParams, VelocityPair};
use ellipsoid_core::numerics::{complex_det, Complex64};
use ellipsoid_core::stability::*;

fn params() -> PhysicalParams {
    PhysicalParams::new(1.3, 0.8).unwrap()
}

fn grid(lo: usize, hi: usize) -> impl Iterator<Item = f64> {
    (lo..=hi).map(|i| i as f64 * 0.01)
}

fn sym_rel(a: f64, b: f64, scale: f64) -> f64 {
    (a - b).abs() / scale
}

#[test]
fn spherical_spectrum() {
    let p = params();
    let r = stability_report(Family::Spherical, 0.0, &p).unwrap();
    let k = 2.0 * p.r() / 15.0;
    let want = [4.0, 8.0, 8.0, 8.0, 12.0];
    for (got, w) in r.hessian_eigenvalues.iter().zip(want) {
        assert!(rel(*got, w * k) < 1e-10, "{got} vs {}", w * k);
    }
    assert_eq!(r.arnold.dim(), 0);
    assert_eq!(r.verdict, Verdict::NonlinearlyStable);
}

#[test]
fn maclaurin_locked_inertia_on_p_and_t() {
    let p = params();
    for e in [0.3, 0.6, 0.9] {
        let m = restricted_locked_inertia(Family::MacLaurin, e, &p).unwrap();
        let q = 1.0 - e * e;
        let d = (2.0 - e * e) / q.cbrt();
        let o = -2.0 * q.powf(1.0 / 6.0);
        let want = [
            [4.0 / q.cbrt(), 0.0, 0.0, 0.0, 0.0],
            [0.0, d, o, 0.0, 0.0],
            [0.0, o, d, 0.0, 0.0],
            [0.0, 0.0, 0.0, d, o],
            [0.0, 0.0, 0.0, o, d],
        ];
        for i in 0..5 {
            for j in 0..5 {
                assert!((m.get(i, j) - p.t() * want[i][j]).abs() < 1e-13 * p.t());
            }
        }
    }
}

#[test]
fn p_and_t_are_inertia_orthogonal() {
    let p = params();
    for fam in [Family::TransversalPlus, Family::TransversalMinus] {
        let m = restricted_locked_inertia(fam, 0.5, &p).unwrap();
        for i in 0..2 {
            for j in 2..5 {
                assert!(m.get(i, j).abs() < 1e-14 * p.t());
            }
        }
    }
}

#[test]
fn isotropy_direction_is_in_the_kernel() {
    let p = params();
    let st = maclaurin(0.7, &p).unwrap();
    let b = bases_for(Family::MacLaurin, 0.7).unwrap();
    let h = VelocityPair::from_array(b.g_f.algebra()[0]);
    for s in b.slice.tangent() {
        assert!(d_locked_inertia(&st.config(), s, &st.xi, &h, &p).abs() < 1e-14);
    }
}

#[test]
fn q_mu_dimensions_and_projection() {
    let p = params();
    for fam in [Family::MacLaurin, Family::TransversalPlus, Family::TransversalMinus] {
        for e in [0.2, 0.5, 0.8] {
            let b = bases_for(fam, e).unwrap();
            let q = b.q_mu.algebra();
            assert_eq!(q.len(), if fam == Family::MacLaurin { 4 } else { 2 });
            let mu = state(fam, e, &p).unwrap().mu.to_array();
            for g in q {
                for h in b.g_f.algebra() {
                    assert!(alg_dot(h, &ad(g, &mu)).abs() < 1e-12 * (1.0 + alg_dot(&mu, &mu).sqrt()));
                }
            }
            if fam != Family::MacLaurin {
                // t₁ − κ t₂ and t₃.
                let k = kappa_for(e, fam).unwrap();
                let t = b.t.algebra();
                for i in 0..6 {
                    assert!((q[0][i] - (t[0][i] - k * t[1][i])).abs() < 1e-12);
                    assert!((q[1][i] - t[2][i]).abs() < 1e-15);
                }
            } else {
                assert_eq!(b.sigma_int.tangent(), b.slice.tangent());
            }
        }
    }
}

#[test]
fn transversal_internal_variations() {
    for fam in [Family::TransversalPlus, Family::TransversalMinus] {
        for e in [0.3, 0.6, 0.9] {
            let b = bases_for(fam, e).unwrap();
            let v = b.sigma_int.tangent();
            let s = b.slice.tangent();
            // The first two variations have no generator part.
            assert!((v[0] - s[0]).max_abs() < 1e-12 && (v[1] - s[1]).max_abs() < 1e-12);
            let eps = transversal_sigma_epsilon(e);
            let a = state(fam, e, &PhysicalParams::default()).unwrap().sph.a();
            let want = Mat3::from_slice(&[
                0.0,
                1.0 + std::f64::consts::SQRT_2 * a * eps,
                0.0,
                1.0 - std::f64::consts::SQRT_2 * a * eps,
                0.0,
                0.0,
                0.0,
                0.0,
                0.0,
            ]);
            let d = (v[2] - want).max_abs().min((v[2] - want.transpose()).max_abs());
            assert!(d < 1e-12, "{fam:?} e={e}: {:?}", v[2]);
        }
    }
}

#[test]
fn maclaurin_forms_match_closed_forms() {
    let p = params();
    for e in grid(5, 99).step_by(5).chain([0.999]) {
        let ar = arnold_form(Family::MacLaurin, e, &p).unwrap();
        let (a1, a2) = maclaurin_arnold_closed(e, &p).unwrap();
        let want = [[a1, -a2, 0.0, 0.0], [-a2, a1, 0.0, 0.0], [0.0, 0.0, a1, -a2], [0.0, 0.0, -a2, a1]];
        for i in 0..4 {
            for j in 0..4 {
                assert!(sym_rel(ar.get(i, j), want[i][j], a1) < 1e-9, "e={e} Ar[{i}{j}]");
            }
        }
        let h = restricted_hessian(Family::MacLaurin, e, &p).unwrap();
        let (s1, s2) = (s1_closed(e).unwrap() * p.r(), s2_closed(e).unwrap() * p.r());
        let want = [s1, s2, s2];
        for i in 0..3 {
            for j in 0..3 {
                let w = if i == j { want[i] } else { 0.0 };
                assert!(sym_rel(h.total.get(i, j), w, p.r()) < 1e-9, "e={e} H[{i}{j}]");
            }
        }
        let b = [1.0, 0.0, 0.0];
        let c = maclaurin_correction_closed(e, &p, &b, &b).unwrap();
        assert!(rel(h.correction.get(0, 0), c) < 1e-9);
        for (i, j) in [(0, 1), (1, 1), (1, 2), (2, 2)] {
            assert!(h.correction.get(i, j).abs() < 1e-9 * c);
        }
    }
}

#[test]
fn transversal_forms_match_closed_forms() {
    let p = params();
    for fam in [Family::TransversalPlus, Family::TransversalMinus] {
        for e in grid(5, 95).step_by(5) {
            let ar = arnold_form(fam, e, &p).unwrap();
            let want = transversal_arnold_closed(e, fam, &p).unwrap();
            let sc = want[0].abs().max(want[1].abs());
            assert!(sym_rel(ar.get(0, 0), want[0], sc) < 1e-9, "{fam:?} e={e}");
            assert!(sym_rel(ar.get(1, 1), want[1], sc) < 1e-9);
            assert!(ar.get(0, 1).abs() < 1e-9 * sc);

            let h = restricted_hessian(fam, e, &p).unwrap();
            let u = u_closed(e).unwrap();
            let phi = phi_closed(e).unwrap();
            let r = p.r();
            for i in 0..2 {
                for j in 0..2 {
                    assert!(sym_rel(h.total.get(i, j), u[i][j] * r, r) < 1e-9, "{fam:?} e={e} U[{i}{j}]");
                }
                assert!(h.total.get(i, 2).abs() < 1e-9 * r);
            }
            assert!(sym_rel(h.total.get(2, 2), phi * r, r) < 1e-9);
            let tr = tr_u_closed(e).unwrap();
            let det = det_u_closed(e).unwrap();
            assert!(sym_rel(tr, u[0][0] + u[1][1], 1.0) < 1e-9);
            assert!(sym_rel(det, u[0][0] * u[1][1] - u[0][1] * u[0][1], 1.0) < 1e-9);

            for (i, j) in [(0, 0), (0, 1), (1, 1), (0, 2), (2, 2)] {
                let mut a = [0.0; 3];
                let mut b = [0.0; 3];
                a[i] = 1.0;
                b[j] = 1.0;
                let c = transversal_correction_closed(e, fam, &p, &a, &b).unwrap();
                let sc = transversal_correction_closed(e, fam, &p, &[1.0, 0.0, 0.0], &[1.0, 0.0, 0.0]).unwrap().abs();
                assert!(sym_rel(h.correction.get(i, j), c, sc) < 1e-9, "{fam:?} e={e} corr[{i}{j}]");
            }
        }
    }
}

#[test]
fn correction_term_on_tangent_vectors() {
    let p = params();
    let b = bases_for(Family::MacLaurin, 0.5).unwrap();
    let v = b.sigma_int.tangent();
    let st = maclaurin(0.5, &p).unwrap();
    let c = correction_term(Family::MacLaurin, 0.5, &v[0], &v[0], &p).unwrap();
    assert!(rel(c, 8.0 * p.t() * st.omega * st.omega) < 1e-12);
    assert!(correction_term(Family::MacLaurin, 0.5, &v[1], &v[2], &p).unwrap().abs() < 1e-13);
}

#[test]
fn signs_across_grid() {
    for e in grid(1, 99) {
        assert!(s1_closed(e).unwrap() > 0.0, "S1 at {e}");
        assert!(tr_u_closed(e).unwrap() > 0.0, "trU at {e}");
        assert!(det_u_closed(e).unwrap() > 0.0, "detU at {e}");
        assert!(phi_closed(e).unwrap() > 0.0, "phi at {e}");
    }
    assert!(s2_closed(0.9).unwrap() > 0.0 && s2_closed(0.96).unwrap() < 0.0);
    let changes = grid(1, 99)
        .collect::<Vec<_>>()
        .windows(2)
        .filter(|w| s2_closed(w[0]).unwrap().signum() != s2_closed(w[1]).unwrap().signum())
        .count();
    assert_eq!(changes, 1);
    assert!(s2_closed(0.94).unwrap() > 0.0 && s2_closed(0.96).unwrap() < 0.0);
}

#[test]
fn e0_root() {
    let r = find_e0(&params()).unwrap();
    assert!((r.e0 - 0.952887).abs() < 1e-5);
    assert!((r.axis_ratio - 0.303327).abs() < 1e-5);
    assert!((r.e0 - 0.952_886_702_034_254).abs() < 1e-12);
    assert!(r.s2_at_root.abs() < 1e-13);
    assert!(r.bracket_width < 1e-12);
}

#[test]
fn verdicts() {
    let p = params();
    for i in 10..=94 {
        let e = i as f64 * 0.01;
        assert_eq!(stability_report(Family::MacLaurin, e, &p).unwrap().verdict, Verdict::NonlinearlyStable, "e={e}");
    }
    for e in [0.96, 0.97, 0.98] {
        assert_eq!(stability_report(Family::MacLaurin, e, &p).unwrap().verdict, Verdict::Unstable, "e={e}");
    }
    let e0 = find_e0(&p).unwrap().e0;
    assert_eq!(stability_report(Family::MacLaurin, e0 - 0.01, &p).unwrap().verdict, Verdict::NonlinearlyStable);
    assert_eq!(stability_report(Family::MacLaurin, e0 + 0.01, &p).unwrap().verdict, Verdict::Unstable);
    for i in 10..=90 {
        let e = i as f64 * 0.01;
        let a = stability_report(Family::TransversalPlus, e, &p).unwrap();
        let b = stability_report(Family::TransversalMinus, e, &p).unwrap();
        assert_eq!(a.verdict, Verdict::NonlinearlyStable, "e={e}");
        assert_eq!(a.verdict, b.verdict);
    }
}

#[test]
fn linearized_spectrum() {
    let p = params();
    for e in [0.3, 0.6, 0.94, 0.96, 0.98] {
        let sp = linearized_eigenvalues(e, &p).unwrap();
        for c in &sp.checks {
            assert!(c.passes(), "e={e}: {c:?}");
        }
        // Closed forms and numerical eigenvalues coincide as multisets.
        let mut used = [false; 10];
        for z in &sp.closed_form {
            let k = (0..10)
                .filter(|&k| !used[k])
                .min_by(|&a, &b| (sp.numerical[a] - z).norm().total_cmp(&(sp.numerical[b] - z).norm()))
                .unwrap();
            assert!((sp.numerical[k] - z).norm() < 1e-6 * (1.0 + z.norm()), "e={e}: {z} vs {}", sp.numerical[k]);
            used[k] = true;
        }
        let lh = sp.lh.to_complex();
        for z in &sp.closed_form {
            let d = complex_det(&lh.shifted(*z)).norm();
            assert!(d <= 1e-8 * lh.norm().powi(10), "e={e}: full det {d}");
        }
    }
    let e3 = |e: f64| linearized_eigenvalues(e, &p).unwrap().closed_form[6];
    assert!(e3(0.94).re == 0.0 && e3(0.94).im != 0.0);
    assert!(e3(0.96).im == 0.0 && e3(0.96).re != 0.0);
    let e0 = find_e0(&p).unwrap().e0;
    let om = maclaurin(e0, &p).unwrap().omega;
    assert!(e3(e0).norm() < 1e-6 * om);
}

#[test]
fn quarter_metric_epsilon3_fails_determinant_test() {
    // ε₃ built with 4T instead of the slice metric 2T is not an eigenvalue.
    let p = params();
    let e = 0.6;
    let sp = linearized_eigenvalues(e, &p).unwrap();
    let s2 = s2_closed(e).unwrap() * p.r();
    let wrong = Complex64::new(0.0, (s2 / (4.0 * p.t())).sqrt());
    let n = sp.lh.dim();
    let block: Vec<f64> = (4..n).flat_map(|i| (4..n).map(move |j| (i, j))).map(|(i, j)| sp.lh.get(i, j)).collect();
    let m = ellipsoid_core::numerics::SmallMatrix::new(6, block).unwrap().to_complex();
    let d = complex_det(&m.shifted(wrong)).norm();
    assert!(d > 1e-8 * m.norm().powi(6));
    assert!(rel(epsilon3_squared(s2, &p), -s2 / (2.0 * p.t())) < 1e-15);
}

#[test]
fn arnold_conditioning_at_small_eccentricity() {
    // The Arnold eigenvalue ratio decays like e⁶, so below e ≈ 0.04 the
    // relative definiteness threshold can no longer certify it.
    let p = params();
    let r = stability_report(Family::MacLaurin, 0.01, &p).unwrap();
    let ev = &r.arnold_eigenvalues;
    assert!(ev[0] > 0.0 && ev[0] / ev[3] < 1e-10);
    assert_eq!(r.verdict, Verdict::Inconclusive);
    assert!(r.hessian_eigenvalues[0] > 0.0);
}
