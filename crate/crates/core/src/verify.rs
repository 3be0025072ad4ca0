//! Oracle suites: every analytic quantity is compared against an
//! independent route (quadrature, finite differences, closed forms,
//! assembled forms). The CLI `verify` command prints the resulting table.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::equilibria::{
    maclaurin, re_residual, spherical, state, transversal, transversal_lambda_rejected, EquilibriumState, Family,
};
use crate::inertia::{d_v2aug, hess_v2aug, locked_inertia, locked_inertia_form, momentum, v2aug};
use crate::kinematics::{Mat3, PhysicalParams, Spheroid, SpheroidKind, VelocityPair};
use crate::numerics::{
    complex_det, fd_gradient, fd_hessian, find_root, integrate, Complex64, QuadratureSpec, SmallMatrix, SmallSymMatrix,
};
use crate::potential::{j_closed, j_quad, potential_derivs, potential_derivs_quad, SUPPORTED_PAIRS};
use crate::stability::{
    arnold_form, det_u_closed, find_e0, linearized_eigenvalues, maclaurin_arnold_closed, maclaurin_correction_closed,
    phi_closed, restricted_hessian, restricted_locked_inertia, s1_closed, s2_closed, stability_report, tr_u_closed,
    transversal_arnold_closed, transversal_correction_closed, u_closed, Verdict,
};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Suite {
    Numerics,
    Potential,
    Inertia,
    Equilibria,
    Stability,
}

impl Suite {
    pub const ALL: [Suite; 5] =
        [Suite::Numerics, Suite::Potential, Suite::Inertia, Suite::Equilibria, Suite::Stability];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::Numerics => "numerics",
            Suite::Potential => "potential",
            Suite::Inertia => "inertia",
            Suite::Equilibria => "equilibria",
            Suite::Stability => "stability",
        }
    }
}

impl core::str::FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Suite> {
        Suite::ALL.into_iter().find(|x| x.name() == s).ok_or(Error::InvalidArgument("unknown suite"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyOptions {
    /// Run only this suite.
    pub only: Option<Suite>,
    /// Relative perturbation applied to every oracle value. Non-zero values
    /// exist to demonstrate that the suite detects errors.
    pub perturbation: f64,
    pub params: PhysicalParams,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { only: None, perturbation: 0.0, params: PhysicalParams::default() }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub suite: Suite,
    pub name: String,
    /// Scaled discrepancy; NaN when the computation itself failed.
    pub error: f64,
    pub tolerance: f64,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.error <= self.tolerance
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed())
    }
}

/// The eccentricity grid `{0.05, 0.10, …, 0.95}`.
pub fn grid() -> impl Iterator<Item = f64> {
    (1..=19).map(|i| i as f64 * 0.05)
}

struct Collector {
    suite: Suite,
    perturbation: f64,
    checks: Vec<Check>,
}

impl Collector {
    /// Records `max |got − want·(1+δ)| / scale` over the supplied triples.
    fn compare<I>(&mut self, name: String, tol: f64, items: I)
    where
        I: IntoIterator<Item = Result<(f64, f64, f64)>>,
    {
        let mut worst = 0.0f64;
        for it in items {
            match it {
                Ok((got, want, scale)) => {
                    let err = (got - want * (1.0 + self.perturbation)).abs() / scale;
                    worst = if err.is_nan() { f64::NAN } else { worst.max(err) };
                }
                Err(_) => worst = f64::NAN,
            }
            if worst.is_nan() {
                break;
            }
        }
        self.checks.push(Check { suite: self.suite, name, error: worst, tolerance: tol });
    }

    /// Records a predicate as error 0 (holds) or 1 (fails).
    fn holds(&mut self, name: String, ok: Result<bool>) {
        let error = match ok {
            Ok(true) => 0.0,
            Ok(false) => 1.0,
            Err(_) => f64::NAN,
        };
        self.checks.push(Check { suite: self.suite, name, error, tolerance: 0.5 });
    }
}

fn rel_triple(got: f64, want: f64) -> Result<(f64, f64, f64)> {
    Ok((got, want, want.abs().max(f64::MIN_POSITIVE)))
}

/// Deterministic probe values in `[−1, 1]` from a Weyl sequence.
fn probe(k: usize) -> f64 {
    let x = (k as f64 + 1.0) * 0.618_033_988_749_894_9;
    2.0 * (x - libm::floor(x)) - 1.0
}

fn probe_mat(k: usize) -> Mat3 {
    Mat3::from_fn(|i, j| probe(k * 9 + i * 3 + j))
}

fn numerics_suite(c: &mut Collector) {
    let spec = QuadratureSpec::default();
    c.compare(
        String::from("quadrature ∫₀^∞ ds/(1+s²) = π/2"),
        1e-12,
        [integrate(|s| 1.0 / (1.0 + s * s), 0.0, f64::INFINITY, &spec)
            .and_then(|v| rel_triple(v, core::f64::consts::FRAC_PI_2))],
    );
    c.compare(
        String::from("quadrature ∫₀^∞ s²e^{−s} ds = 2"),
        1e-12,
        [integrate(|s| s * s * libm::exp(-s), 0.0, f64::INFINITY, &spec).and_then(|v| rel_triple(v, 2.0))],
    );
    c.compare(
        String::from("Brent root of cos x = x"),
        1e-14,
        [find_root(|x| libm::cos(x) - x, 0.0, 1.0, 1e-15).and_then(|v| rel_triple(v, 0.739_085_133_215_160_6))],
    );
    c.compare(
        String::from("Jacobi eigenvalues of tridiag(−1, 2, −1), n = 6"),
        1e-13,
        (1..=6).map(|k| {
            let m = SmallSymMatrix::from_fn(6, |i, j| match i.abs_diff(j) {
                0 => 2.0,
                1 => -1.0,
                _ => 0.0,
            })?;
            let want = 2.0 - 2.0 * libm::cos(k as f64 * core::f64::consts::PI / 7.0);
            Ok((m.eigenvalues()[k - 1], want, 4.0))
        }),
    );
    c.compare(
        String::from("complex determinant of a rotation-shift"),
        1e-14,
        [SmallMatrix::from_fn(2, |i, j| match (i, j) {
            (0, 0) | (1, 1) => Complex64::new(0.0, 0.0),
            (0, 1) => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(1.0, 0.0),
        })
        .map(|m| (complex_det(&m.shifted(Complex64::new(0.0, 1.0))).norm(), 0.0, 1.0))],
    );
}

fn potential_suite(c: &mut Collector, p: &PhysicalParams) {
    let spec = QuadratureSpec::default();
    for kind in [SpheroidKind::Oblate, SpheroidKind::Prolate] {
        for (k, r) in SUPPORTED_PAIRS {
            c.compare(
                format!("J({k},{r}) closed form vs quadrature, {kind:?}"),
                1e-9,
                grid().map(move |e| {
                    let sph = Spheroid::new(kind, e)?;
                    rel_triple(j_closed(&sph, k, r)?, j_quad(&sph, k, r, &spec)?)
                }),
            );
        }
    }
    let d = potential_derivs(&Spheroid::sphere(), p);
    c.compare(String::from("sphere: V₁ + V₂ = 2R/15"), 1e-14, [rel_triple(d.v1 + d.v2, 2.0 * p.r() / 15.0)]);
    c.compare(String::from("sphere: V₁ = 8R/105"), 1e-14, [rel_triple(d.v1, 8.0 * p.r() / 105.0)]);
    c.compare(String::from("sphere: V = −2R"), 1e-14, [rel_triple(d.v, -2.0 * p.r())]);
}

fn near_equilibria(p: &PhysicalParams) -> Vec<(Family, Mat3, VelocityPair, f64)> {
    let mut out = Vec::new();
    let mut k = 0;
    for fam in Family::ALL {
        for i in 0..5 {
            let e = 0.25 + 0.15 * i as f64;
            let Ok(st) = state(fam, e, p) else { continue };
            let f = st.config() + probe_mat(k) * 0.02;
            let x = st.xi.to_array();
            let xi = VelocityPair::from_array(core::array::from_fn(|j| x[j] + 0.02 * probe(100 + 6 * k + j)));
            out.push((fam, f, xi, st.lambda));
            k += 1;
        }
    }
    out
}

fn inertia_suite(c: &mut Collector, p: &PhysicalParams) {
    let spec = QuadratureSpec::new(1e-16, 5e-14, 8000).unwrap_or_default();
    let probes = near_equilibria(p);
    c.compare(
        String::from("locked inertia: block form vs trace form"),
        1e-12,
        probes.iter().enumerate().map(|(k, (_, f, xi, _))| {
            let eta = VelocityPair::from_array(core::array::from_fn(|j| probe(500 + 6 * k + j)));
            let got = locked_inertia(f, p).form(&xi.to_array(), &eta.to_array());
            let want = locked_inertia_form(f, xi, &eta, p);
            Ok((got, want, p.t() * (1.0 + want.abs())))
        }),
    );
    c.compare(
        String::from("momentum: explicit formula vs 𝕀(F)ξ"),
        1e-12,
        probes.iter().flat_map(|(_, f, xi, _)| {
            let m = momentum(f, xi, p).to_array();
            let w = locked_inertia(f, p).apply(&xi.to_array());
            (0..6).map(move |i| Ok((m[i], w[i], p.t() * (1.0 + w[i].abs()))))
        }),
    );
    for fam in Family::ALL {
        let mine: Vec<_> = probes.iter().filter(|x| x.0 == fam).collect();
        let mut grads = Vec::new();
        let mut hessians = Vec::new();
        for (k, (_, f, xi, lam)) in mine.iter().enumerate() {
            let (a, b) = (probe_mat(40 + 2 * k), probe_mat(41 + 2 * k));
            let val = |m: &Mat3| v2aug(m, xi, *lam, p, &spec).unwrap_or(f64::NAN);
            let d = match potential_derivs_quad(f, p, &spec) {
                Ok(d) => d,
                Err(e) => {
                    grads.push(Err(e));
                    continue;
                }
            };
            let g = fd_gradient(|t: &[f64]| val(&(*f + a * t[0])), &[0.0], 1e-4)[0];
            let an = d_v2aug(f, xi, *lam, &d, p).frob(&a);
            grads.push(Ok((an, g, g.abs().max(1e-2 * p.r()))));
            let h = fd_hessian(|t: &[f64]| val(&(*f + a * t[0] + b * t[1])), &[0.0, 0.0], &[1e-3, 1e-3])[1];
            let an = hess_v2aug(f, xi, *lam, &a, &b, &d, p);
            hessians.push(Ok((an, h, h.abs().max(p.r()))));
        }
        c.compare(format!("∇V^λ_ξ vs central differences, {}", fam.name()), 1e-5, grads);
        c.compare(format!("∇²V^λ_ξ vs central differences, {}", fam.name()), 1e-5, hessians);
    }
}

fn residual_of(st: &EquilibriumState, lam: f64) -> f64 {
    re_residual(&st.config(), &st.xi, lam, &st.derivs, &st.params).0.max_abs() / st.params.r()
}

fn equilibria_suite(c: &mut Collector, p: &PhysicalParams) {
    for fam in Family::ALL {
        c.compare(
            format!("RE residual ≤ 1e-10·R, {}", fam.name()),
            1e-10,
            grid().map(|e| state(fam, e, p).map(|st| (residual_of(&st, st.lambda), 0.0, 1.0))),
        );
    }
    for fam in [Family::TransversalPlus, Family::TransversalMinus] {
        c.holds(
            format!("rejected multiplier sign leaves a residual, {}", fam.name()),
            grid()
                .map(|e| state(fam, e, p).map(|st| residual_of(&st, transversal_lambda_rejected(e, &st.derivs)) > 1e-3))
                .try_fold(true, |acc, r| r.map(|ok| acc && ok)),
        );
    }
    let spec = QuadratureSpec::default();
    c.compare(
        String::from("Ω²/(πρG) closed form vs 2e²(J(3,2) + (1−e²)^{−1/3}J(3,1)) by quadrature"),
        1e-9,
        grid().map(|e| {
            let st = maclaurin(e, p)?;
            let sph = Spheroid::oblate(e)?;
            let want =
                2.0 * e * e * (j_quad(&sph, 3, 2, &spec)? + j_quad(&sph, 3, 1, &spec)? / libm::cbrt(1.0 - e * e));
            rel_triple(st.omega2_over_pi_rho_g, want)
        }),
    );
    c.compare(
        String::from("branch symmetry f₊f₋ = 1"),
        1e-12,
        grid().map(|e| {
            let (a, b) = (transversal(e, Family::TransversalPlus, p)?, transversal(e, Family::TransversalMinus, p)?);
            rel_triple(a.f_ratio.unwrap_or(f64::NAN) * b.f_ratio.unwrap_or(f64::NAN), 1.0)
        }),
    );
    c.compare(
        String::from("branch symmetry ω₊²f₊ = ω₋²f₋"),
        1e-12,
        grid().map(|e| {
            let (a, b) = (transversal(e, Family::TransversalPlus, p)?, transversal(e, Family::TransversalMinus, p)?);
            rel_triple(
                a.omega2_over_pi_rho_g * a.f_ratio.unwrap_or(f64::NAN),
                b.omega2_over_pi_rho_g * b.f_ratio.unwrap_or(f64::NAN),
            )
        }),
    );
    c.compare(String::from("spherical λ = 8R/21"), 1e-14, [rel_triple(spherical(p).lambda, 8.0 * p.r() / 21.0)]);
}

fn stability_suite(c: &mut Collector, p: &PhysicalParams) {
    let r = p.r();
    c.compare(
        String::from("spherical Hessian spectrum {4, 8, 8, 8, 12}·2R/15"),
        1e-10,
        [4.0, 8.0, 8.0, 8.0, 12.0].into_iter().enumerate().map(|(i, k)| {
            let rep = stability_report(Family::Spherical, 0.0, p)?;
            rel_triple(rep.hessian_eigenvalues[i], k * 2.0 * r / 15.0)
        }),
    );
    c.holds(
        String::from("spherical verdict NonlinearlyStable"),
        stability_report(Family::Spherical, 0.0, p).map(|x| x.verdict == Verdict::NonlinearlyStable),
    );
    c.compare(
        String::from("MacLaurin 𝕀̂₀ on (p, t₁…t₄) vs closed matrix"),
        1e-13,
        grid().flat_map(|e| {
            let q = 1.0 - e * e;
            let (d, o) = ((2.0 - e * e) / libm::cbrt(q), -2.0 * libm::pow(q, 1.0 / 6.0));
            let want = [4.0 / libm::cbrt(q), d, o, d, o];
            let idx = [(0, 0), (1, 1), (1, 2), (3, 3), (3, 4)];
            let m = restricted_locked_inertia(Family::MacLaurin, e, p);
            (0..5).map(move |k| m.as_ref().map(|m| (m.get(idx[k].0, idx[k].1), p.t() * want[k], p.t())).map_err(|e| *e))
        }),
    );
    c.compare(
        String::from("MacLaurin Arnold form vs A₁, A₂ blocks"),
        1e-9,
        grid().flat_map(|e| {
            let ar = arnold_form(Family::MacLaurin, e, p);
            let cl = maclaurin_arnold_closed(e, p);
            let pattern = [(0, 0, 1.0, 0), (0, 1, -1.0, 1), (2, 2, 1.0, 0), (2, 3, -1.0, 1), (0, 2, 0.0, 0)];
            pattern.into_iter().map(move |(i, j, s, which)| {
                let ar = ar.as_ref().map_err(|e| *e)?;
                let (a1, a2) = cl.as_ref().map_err(|e| *e).copied()?;
                Ok((ar.get(i, j), s * if which == 0 { a1 } else { a2 }, a1))
            })
        }),
    );
    c.compare(
        String::from("MacLaurin restricted Hessian vs diag(S₁, S₂, S₂)"),
        1e-9,
        grid().flat_map(|e| {
            let h = restricted_hessian(Family::MacLaurin, e, p);
            (0..9).map(move |k| {
                let h = h.as_ref().map_err(|e| *e)?;
                let (i, j) = (k / 3, k % 3);
                let want = match (i == j, i) {
                    (true, 0) => s1_closed(e)? * r,
                    (true, _) => s2_closed(e)? * r,
                    _ => 0.0,
                };
                Ok((h.total.get(i, j), want, r))
            })
        }),
    );
    c.compare(
        String::from("MacLaurin correction term vs 8TΩ²a₁b₁"),
        1e-9,
        grid().map(|e| {
            let h = restricted_hessian(Family::MacLaurin, e, p)?;
            let one = [1.0, 0.0, 0.0];
            rel_triple(h.correction.get(0, 0), maclaurin_correction_closed(e, p, &one, &one)?)
        }),
    );
    for fam in [Family::TransversalPlus, Family::TransversalMinus] {
        c.compare(
            format!("transversal Arnold form vs closed diagonal, {}", fam.name()),
            1e-9,
            grid().flat_map(move |e| {
                (0..2).map(move |i| {
                    let ar = arnold_form(fam, e, p)?;
                    rel_triple(ar.get(i, i), transversal_arnold_closed(e, fam, p)?[i])
                })
            }),
        );
        c.compare(
            format!("transversal restricted Hessian vs [[U, 0], [0, φ]], {}", fam.name()),
            1e-9,
            grid().flat_map(move |e| {
                (0..9).map(move |k| {
                    let h = restricted_hessian(fam, e, p)?;
                    let (i, j) = (k / 3, k % 3);
                    let u = u_closed(e)?;
                    let want = match (i, j) {
                        (2, 2) => phi_closed(e)?,
                        (i, j) if i < 2 && j < 2 => u[i][j],
                        _ => 0.0,
                    };
                    Ok((h.total.get(i, j), want * r, r))
                })
            }),
        );
        c.compare(
            format!("transversal correction term vs closed form, {}", fam.name()),
            1e-9,
            grid().flat_map(move |e| {
                [(0, 0), (0, 1), (1, 1)].into_iter().map(move |(i, j)| {
                    let h = restricted_hessian(fam, e, p)?;
                    let (mut a, mut b) = ([0.0; 3], [0.0; 3]);
                    a[i] = 1.0;
                    b[j] = 1.0;
                    let scale = transversal_correction_closed(e, fam, p, &[1.0, 0.0, 0.0], &[1.0, 0.0, 0.0])?.abs();
                    Ok((h.correction.get(i, j), transversal_correction_closed(e, fam, p, &a, &b)?, scale))
                })
            }),
        );
    }
    c.compare(
        String::from("tr U and det U closed forms vs U entries"),
        1e-9,
        grid().flat_map(|e| {
            [0, 1].into_iter().map(move |k| {
                let u = u_closed(e)?;
                if k == 0 {
                    Ok((tr_u_closed(e)?, u[0][0] + u[1][1], 1.0))
                } else {
                    Ok((det_u_closed(e)?, u[0][0] * u[1][1] - u[0][1] * u[1][0], 1.0))
                }
            })
        }),
    );
    let fine = || (1..=99).map(|i| i as f64 * 0.01);
    c.holds(String::from("S₁ > 0 on (0, 1)"), fine().try_fold(true, |a, e| s1_closed(e).map(|v| a && v > 0.0)));
    c.holds(
        String::from("tr U > 0, det U > 0, φ > 0 on (0, 1)"),
        fine().try_fold(true, |a, e| Ok(a && tr_u_closed(e)? > 0.0 && det_u_closed(e)? > 0.0 && phi_closed(e)? > 0.0)),
    );
    c.holds(
        String::from("S₂ changes sign exactly once, inside (0.94, 0.96)"),
        (|| {
            let vals: Vec<f64> = fine().map(s2_closed).collect::<Result<_>>()?;
            let changes: Vec<usize> = (1..vals.len()).filter(|&i| (vals[i] > 0.0) != (vals[i - 1] > 0.0)).collect();
            Ok(changes.len() == 1 && s2_closed(0.94)? > 0.0 && s2_closed(0.96)? < 0.0)
        })(),
    );
    let e0 = find_e0(p);
    c.compare(String::from("e₀ = 0.952887 ± 1e-5"), 1e-5, [e0.map(|x| (x.e0, 0.952_887, 1.0))]);
    c.compare(String::from("√(1 − e₀²) = 0.303327 ± 1e-5"), 1e-5, [e0.map(|x| (x.axis_ratio, 0.303_327, 1.0))]);
    let mac_stable = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 0.94];
    c.holds(
        String::from("MacLaurin NonlinearlyStable for e ∈ {0.1, …, 0.9, 0.94}"),
        mac_stable.iter().try_fold(true, |a, &e| {
            stability_report(Family::MacLaurin, e, p).map(|x| a && x.verdict == Verdict::NonlinearlyStable)
        }),
    );
    c.holds(
        String::from("MacLaurin Unstable for e ∈ {0.96, 0.97, 0.98}"),
        [0.96, 0.97, 0.98].iter().try_fold(true, |a, &e| {
            stability_report(Family::MacLaurin, e, p).map(|x| a && x.verdict == Verdict::Unstable)
        }),
    );
    for fam in [Family::TransversalPlus, Family::TransversalMinus] {
        c.holds(
            format!("{} NonlinearlyStable for e ∈ {{0.1, …, 0.9}}", fam.name()),
            (1..=9).try_fold(true, |a, i| {
                stability_report(fam, i as f64 * 0.1, p).map(|x| a && x.verdict == Verdict::NonlinearlyStable)
            }),
        );
    }
    let mut det_points = Vec::from([0.3, 0.6, 0.9, 0.94, 0.96, 0.98]);
    if let Ok(x) = e0 {
        det_points.push(x.e0);
    }
    c.compare(
        String::from("closed-form L_h eigenvalues: |det(block − εI)| / ‖block‖ⁿ"),
        1e-8,
        det_points.into_iter().flat_map(|e| match linearized_eigenvalues(e, p) {
            Ok(sp) => sp.checks.into_iter().map(|k| Ok((k.det_abs / k.scale, 0.0, 1.0))).collect::<Vec<_>>(),
            Err(err) => Vec::from([Err(err)]),
        }),
    );
    c.holds(
        String::from("ε₃ imaginary at 0.94, zero at e₀ (within 1e-6·Ω), real at 0.96"),
        (|| {
            let e3 = |e: f64| linearized_eigenvalues(e, p).map(|s| s.closed_form[6]);
            let at0 = e0?.e0;
            let om = maclaurin(at0, p)?.omega;
            let (a, b, z) = (e3(0.94)?, e3(0.96)?, e3(at0)?);
            Ok(a.re == 0.0 && a.im > 0.0 && b.im == 0.0 && b.re.abs() > 0.0 && z.norm() < 1e-6 * om)
        })(),
    );
}

/// Runs one suite.
pub fn run_suite(suite: Suite, opts: &VerifyOptions) -> Vec<Check> {
    let mut c = Collector { suite, perturbation: opts.perturbation, checks: Vec::new() };
    let p = &opts.params;
    match suite {
        Suite::Numerics => numerics_suite(&mut c),
        Suite::Potential => potential_suite(&mut c, p),
        Suite::Inertia => inertia_suite(&mut c, p),
        Suite::Equilibria => equilibria_suite(&mut c, p),
        Suite::Stability => stability_suite(&mut c, p),
    }
    c.checks
}

/// Runs the selected suites in order.
pub fn run(opts: &VerifyOptions) -> VerifyReport {
    let mut checks = Vec::new();
    for s in Suite::ALL {
        if opts.only.is_none_or(|o| o == s) {
            checks.extend(run_suite(s, opts));
        }
    }
    VerifyReport { checks }
}
