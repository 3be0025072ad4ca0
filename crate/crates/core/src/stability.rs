//! Nonlinear stability of the symmetric equilibria by the singular reduced
//! energy-momentum method: algebra splittings, `q^μ`, internal variations
//! `Σ_int`, Arnold form, correction term and restricted Hessian, plus the
//! linearized spectrum of the MacLaurin family.
//!
//! Everything is assembled from the general definitions. The closed forms
//! further down are kept as independent cross-checks.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::equilibria::{
    maclaurin_omega2_over_pi_rho_g, state, transversal_omega2_over_pi_rho_g, EquilibriumState, Family,
};
use crate::eval_closed;
use crate::inertia::{d_locked_inertia, hess_v2aug, locked_inertia};
use crate::kinematics::{
    ad, alg, alg_add, alg_dot, alg_scale, generator6, unit, Alg6, Mat3, PhysicalParams, VelocityPair,
};
use crate::numerics::{
    cholesky, complex_det, find_root_detailed, is_positive_definite, least_squares, solve, Scalar, SmallMatrix,
    SmallSymMatrix,
};
use crate::{Error, Result};

/// Relative tolerance for declaring a linearized eigenvalue non-imaginary.
pub const REAL_PART_TOL: f64 = 1e-10;

/// Relative tolerance of the determinant test on claimed eigenvalues.
pub const DET_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasisLabel {
    GF,
    P,
    T,
    QMu,
    Slice,
    SigmaInt,
}

#[derive(Debug, Clone, PartialEq)]
pub enum BasisVectors {
    /// Elements of `so(3) × so(3)` as `(ξ_L, ξ_R)` 6-vectors.
    Algebra(Vec<Alg6>),
    /// Tangent vectors at the configuration.
    Tangent(Vec<Mat3>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SubspaceBasis {
    pub label: BasisLabel,
    pub vectors: BasisVectors,
}

impl SubspaceBasis {
    pub fn len(&self) -> usize {
        match &self.vectors {
            BasisVectors::Algebra(v) => v.len(),
            BasisVectors::Tangent(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn algebra(&self) -> &[Alg6] {
        match &self.vectors {
            BasisVectors::Algebra(v) => v,
            BasisVectors::Tangent(_) => &[],
        }
    }

    pub fn tangent(&self) -> &[Mat3] {
        match &self.vectors {
            BasisVectors::Tangent(v) => v,
            BasisVectors::Algebra(_) => &[],
        }
    }
}

/// All subspaces used by the method at one equilibrium.
#[derive(Debug, Clone, PartialEq)]
pub struct Bases {
    pub g_f: SubspaceBasis,
    pub p: SubspaceBasis,
    pub t: SubspaceBasis,
    pub q_mu: SubspaceBasis,
    pub slice: SubspaceBasis,
    pub sigma_int: SubspaceBasis,
}

const S2: f64 = core::f64::consts::FRAC_1_SQRT_2;

fn sym_unit(i: usize, j: usize) -> Mat3 {
    Mat3::unit(i, j) + Mat3::unit(j, i)
}

/// `(g_F, p, t, slice)` for a family at configuration semi-axes `(a, c)`.
fn raw_bases(family: Family, a: f64, c: f64) -> (Vec<Alg6>, Vec<Alg6>, Vec<Alg6>, Vec<Mat3>) {
    let z = [0.0; 3];
    let e = unit;
    let diag_pair = |i: usize| alg_scale(&alg(e(i), e(i)), S2);
    let anti_pair = |i: usize| alg_scale(&alg(e(i), e(i).map(|x| -x)), S2);
    let axisym_slice = vec![Mat3::diag([1.0, 1.0, -2.0 * c / a]), Mat3::diag([1.0, -1.0, 0.0]), sym_unit(0, 1)];
    match family {
        Family::Spherical => (
            (0..3).map(diag_pair).collect(),
            (0..3).map(anti_pair).collect(),
            Vec::new(),
            vec![
                Mat3::diag([1.0, 0.0, -1.0]),
                Mat3::diag([0.0, 1.0, -1.0]),
                sym_unit(0, 1),
                sym_unit(0, 2),
                sym_unit(1, 2),
            ],
        ),
        Family::MacLaurin => (
            vec![diag_pair(2)],
            vec![anti_pair(2)],
            vec![alg(e(0), z), alg(z, e(0)), alg(e(1), z), alg(z, e(1))],
            axisym_slice,
        ),
        Family::TransversalPlus | Family::TransversalMinus => (
            vec![diag_pair(2)],
            vec![alg(e(1), z), alg(z, e(1))],
            vec![alg(e(0), z), alg(z, e(0)), anti_pair(2)],
            axisym_slice,
        ),
    }
}

fn pair(v: &Alg6) -> VelocityPair {
    VelocityPair::from_array(*v)
}

/// Everything assembled from the general definitions at one equilibrium.
#[derive(Debug, Clone)]
struct Assembly {
    st: EquilibriumState,
    f: Mat3,
    h: Vec<Alg6>,
    p: Vec<Alg6>,
    t: Vec<Alg6>,
    pt: Vec<Alg6>,
    slice: Vec<Mat3>,
    /// `𝕀̂₀` on `p ⊕ t`, row-major.
    i0: Vec<f64>,
    mu: Alg6,
    q: Vec<Alg6>,
    sigma: Vec<Mat3>,
    /// Residual of the linear system defining `Σ_int`.
    sigma_residual: f64,
}

impl Assembly {
    fn new(family: Family, e: f64, params: &PhysicalParams) -> Result<Self> {
        let st = state(family, e, params)?;
        let f = st.config();
        let (h, p, t, slice) = raw_bases(family, st.sph.a(), st.sph.c());
        let pt: Vec<Alg6> = p.iter().chain(t.iter()).copied().collect();
        let li = locked_inertia(&f, params);
        let n = pt.len();
        let mut i0 = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                i0[i * n + j] = li.form(&pt[i], &pt[j]);
            }
        }
        let mu = st.mu.to_array();
        let q = null_combinations(&h, &t, &mu);
        let mut asm = Assembly { st, f, h, p, t, pt, slice, i0, mu, q, sigma: Vec::new(), sigma_residual: 0.0 };
        asm.build_sigma()?;
        Ok(asm)
    }

    fn params(&self) -> &PhysicalParams {
        &self.st.params
    }

    fn d_inertia(&self, a: &Mat3, w: &Alg6) -> f64 {
        d_locked_inertia(&self.f, a, &self.st.xi, &pair(w), self.params())
    }

    /// `Σ_int`: each slice vector plus the generator combination from `q^μ`
    /// that makes `(D𝕀·v)(ξ)` annihilate `g_F ⊕ t`.
    fn build_sigma(&mut self) -> Result<()> {
        let gens: Vec<Mat3> = self.q.iter().map(|g| generator6(g, &self.f)).collect();
        let cons: Vec<Alg6> = self.h.iter().chain(self.t.iter()).copied().collect();
        let (rows, cols) = (cons.len(), gens.len());
        let scale = self.params().t() * (1.0 + libm::sqrt(alg_dot(&self.st.xi.to_array(), &self.st.xi.to_array())));
        let mut sigma = Vec::with_capacity(self.slice.len());
        let mut worst = 0.0f64;
        for s in &self.slice {
            let rhs: Vec<f64> = cons.iter().map(|w| -self.d_inertia(s, w)).collect();
            if cols == 0 {
                worst = worst.max(rhs.iter().fold(0.0f64, |m, x| m.max(x.abs())));
                sigma.push(*s);
                continue;
            }
            let mut mg = vec![0.0; rows * cols];
            for (i, w) in cons.iter().enumerate() {
                for (k, g) in gens.iter().enumerate() {
                    mg[i * cols + k] = self.d_inertia(g, w);
                }
            }
            let (sol, resid) = least_squares(&mg, rows, cols, &rhs)?;
            worst = worst.max(resid);
            let mut v = *s;
            for (k, g) in gens.iter().enumerate() {
                v += *g * sol[k];
            }
            sigma.push(v);
        }
        if worst > 1e-9 * scale {
            return Err(Error::Domain("internal variations are inconsistent"));
        }
        self.sigma = sigma;
        self.sigma_residual = worst;
        Ok(())
    }

    fn coords(&self, v: &Alg6) -> Vec<f64> {
        self.pt.iter().map(|b| alg_dot(v, b)).collect()
    }

    /// `𝕀̂₀⁻¹ρ` for `ρ` in the annihilator of `g_F`, identified with a vector.
    fn i0_inv(&self, rho: &Alg6) -> Result<Alg6> {
        let c = solve(&self.i0, &self.coords(rho))?;
        Ok(self.pt.iter().zip(c).fold([0.0; 6], |acc, (b, ci)| alg_add(&acc, &alg_scale(b, ci))))
    }

    fn proj_pt(&self, x: &Alg6) -> Alg6 {
        self.pt.iter().fold([0.0; 6], |acc, b| alg_add(&acc, &alg_scale(b, alg_dot(x, b))))
    }

    fn arnold(&self) -> Result<SmallSymMatrix> {
        let n = self.q.len();
        if n == 0 {
            return SmallSymMatrix::new(0, Vec::new());
        }
        let imu = self.i0_inv(&self.mu)?;
        let mut m = vec![0.0; n * n];
        for j in 0..n {
            let co = alg_scale(&ad(&self.q[j], &self.mu), -1.0);
            let lam = alg_add(&self.i0_inv(&co)?, &self.proj_pt(&ad(&self.q[j], &imu)));
            for i in 0..n {
                let ci = alg_scale(&ad(&self.q[i], &self.mu), -1.0);
                m[i * n + j] = alg_dot(&ci, &lam);
            }
        }
        SmallSymMatrix::from_fn(n, |i, j| m[i * n + j])
    }

    /// `(D𝕀·v)(ξ)` restricted to `p ⊕ t`.
    fn covector(&self, v: &Mat3) -> Vec<f64> {
        self.pt.iter().map(|b| self.d_inertia(v, b)).collect()
    }

    fn correction(&self, a: &Mat3, b: &Mat3) -> Result<f64> {
        if self.pt.is_empty() {
            return Ok(0.0);
        }
        let ca = self.covector(a);
        let x = solve(&self.i0, &self.covector(b))?;
        Ok(ca.iter().zip(x).map(|(u, v)| u * v).sum())
    }

    fn hessian(&self, a: &Mat3, b: &Mat3) -> f64 {
        hess_v2aug(&self.f, &self.st.xi, self.st.lambda, a, b, &self.st.derivs, self.params())
    }

    fn restricted(&self) -> Result<RestrictedHessian> {
        let n = self.sigma.len();
        let mut hm = vec![0.0; n * n];
        let mut cm = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                hm[i * n + j] = self.hessian(&self.sigma[i], &self.sigma[j]);
                cm[i * n + j] = self.correction(&self.sigma[i], &self.sigma[j])?;
            }
        }
        Ok(RestrictedHessian {
            hessian: SmallSymMatrix::from_fn(n, |i, j| hm[i * n + j])?,
            correction: SmallSymMatrix::from_fn(n, |i, j| cm[i * n + j])?,
            total: SmallSymMatrix::from_fn(n, |i, j| hm[i * n + j] + cm[i * n + j])?,
        })
    }

    fn bases(&self) -> Bases {
        let alg = |label, v: &Vec<Alg6>| SubspaceBasis { label, vectors: BasisVectors::Algebra(v.clone()) };
        let tan = |label, v: &Vec<Mat3>| SubspaceBasis { label, vectors: BasisVectors::Tangent(v.clone()) };
        Bases {
            g_f: alg(BasisLabel::GF, &self.h),
            p: alg(BasisLabel::P, &self.p),
            t: alg(BasisLabel::T, &self.t),
            q_mu: alg(BasisLabel::QMu, &self.q),
            slice: tan(BasisLabel::Slice, &self.slice),
            sigma_int: tan(BasisLabel::SigmaInt, &self.sigma),
        }
    }
}

/// Basis of `{γ ∈ t : ⟨h, ad*_γ μ⟩ = 0 ∀h ∈ g_F}`. Pivots are taken from
/// the last column backwards so that free directions keep leading `t`
/// vectors with unit coefficient.
fn null_combinations(h: &[Alg6], t: &[Alg6], mu: &Alg6) -> Vec<Alg6> {
    let nt = t.len();
    let mut rows: Vec<Vec<f64>> = h.iter().map(|hh| t.iter().map(|tk| -alg_dot(hh, &ad(tk, mu))).collect()).collect();
    let scale = libm::sqrt(alg_dot(mu, mu));
    let tol = 1e-12 * scale.max(f64::MIN_POSITIVE);
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut used = vec![false; rows.len()];
    for col in (0..nt).rev() {
        let best =
            (0..rows.len()).filter(|&r| !used[r]).max_by(|&x, &y| rows[x][col].abs().total_cmp(&rows[y][col].abs()));
        let Some(r) = best else { break };
        if rows[r][col].abs() <= tol {
            continue;
        }
        let pv = rows[r][col];
        for v in rows[r].iter_mut() {
            *v /= pv;
        }
        for other in 0..rows.len() {
            if other != r {
                let fct = rows[other][col];
                if fct != 0.0 {
                    for k in 0..nt {
                        rows[other][k] -= fct * rows[r][k];
                    }
                }
            }
        }
        used[r] = true;
        pivots.push((r, col));
    }
    let is_pivot = |k: usize| pivots.iter().any(|&(_, c)| c == k);
    (0..nt)
        .filter(|&k| !is_pivot(k))
        .map(|k| pivots.iter().fold(t[k], |acc, &(r, c)| alg_add(&acc, &alg_scale(&t[c], -rows[r][k]))))
        .collect()
}

/// The subspaces `g_F, p, t, q^μ`, slice and `Σ_int` at the equilibrium
/// of `family` with eccentricity `e`. Directions do not depend on `ρ, G`.
pub fn bases_for(family: Family, e: f64) -> Result<Bases> {
    Ok(Assembly::new(family, e, &PhysicalParams::default())?.bases())
}

pub fn q_mu(family: Family, e: f64) -> Result<SubspaceBasis> {
    Ok(bases_for(family, e)?.q_mu)
}

/// `𝕀̂₀`, the locked inertia restricted to `p ⊕ t` (in that basis order).
pub fn restricted_locked_inertia(family: Family, e: f64, params: &PhysicalParams) -> Result<SmallSymMatrix> {
    let asm = Assembly::new(family, e, params)?;
    let n = asm.pt.len();
    SmallSymMatrix::new(n, asm.i0.clone())
}

/// Arnold form on the `q^μ` basis returned by [`q_mu`].
pub fn arnold_form(family: Family, e: f64, params: &PhysicalParams) -> Result<SmallSymMatrix> {
    Assembly::new(family, e, params)?.arnold()
}

/// Correction term `corr_ξ(A, B)` for tangent vectors at the equilibrium.
pub fn correction_term(family: Family, e: f64, a: &Mat3, b: &Mat3, params: &PhysicalParams) -> Result<f64> {
    Assembly::new(family, e, params)?.correction(a, b)
}

/// Second variation on `Σ_int`, split into its two contributions.
#[derive(Debug, Clone, PartialEq)]
pub struct RestrictedHessian {
    /// Hessian of the twice-augmented potential.
    pub hessian: SmallSymMatrix,
    pub correction: SmallSymMatrix,
    /// `hessian + correction`, the form tested for definiteness.
    pub total: SmallSymMatrix,
}

/// Restricted Hessian on the `Σ_int` basis returned by [`bases_for`].
pub fn restricted_hessian(family: Family, e: f64, params: &PhysicalParams) -> Result<RestrictedHessian> {
    Assembly::new(family, e, params)?.restricted()
}

// Closed forms. All functions of `e` alone are in units of `R`.

fn s1_generic<S: Scalar>(ctx: S::Ctx) -> S {
    let e = S::e(ctx);
    let t1 = e * S::poly(ctx, &[27.0, 0.0, -45.0, 0.0, 18.0]);
    let t2 = S::one_minus_e2_pow(ctx, 0.5) * S::poly(ctx, &[27.0, 0.0, -36.0, 0.0, 8.0]) * S::asin_e(ctx);
    (t1 - t2).div_e_pow(ctx, 5) * 2.0
}

fn s2_generic<S: Scalar>(ctx: S::Ctx) -> S {
    let e = S::e(ctx);
    let t1 = e * S::poly(ctx, &[3.0, 0.0, 1.0, 0.0, -4.0]);
    let t2 = S::one_minus_e2_pow(ctx, 0.5) * S::poly(ctx, &[3.0, 0.0, 2.0, 0.0, -4.0]) * S::asin_e(ctx);
    (t1 - t2).div_e_pow(ctx, 5)
}

fn u_generic<S: Scalar>(ctx: S::Ctx, which: usize) -> S {
    let e = S::e(ctx);
    let at = S::atanh_e(ctx);
    let num = match which {
        0 => e * S::poly(ctx, &[-27.0, 0.0, 27.0]) + S::poly(ctx, &[27.0, 0.0, -36.0, 0.0, 17.0]) * at,
        1 => S::poly(ctx, &[-9.0, 0.0, 9.0]) * (e * 3.0 - S::poly(ctx, &[3.0, 0.0, -1.0]) * at),
        _ => e * S::poly(ctx, &[-6.0, 0.0, 8.0]) + S::poly(ctx, &[6.0, 0.0, -10.0, 0.0, 4.0]) * at,
    };
    num.div_e_pow(ctx, 5)
}

fn tr_u_generic<S: Scalar>(ctx: S::Ctx) -> S {
    let e = S::e(ctx);
    let at = S::atanh_e(ctx);
    (e * S::poly(ctx, &[-33.0, 0.0, 35.0]) + S::poly(ctx, &[33.0, 0.0, -46.0, 0.0, 21.0]) * at).div_e_pow(ctx, 5)
}

fn det_u_generic<S: Scalar>(ctx: S::Ctx) -> S {
    let at = S::atanh_e(ctx);
    let a0 = S::poly(ctx, &[0.0, 0.0, -567.0, 0.0, 1080.0, 0.0, -513.0]);
    let a1 = S::poly(ctx, &[0.0, 1134.0, 0.0, -2538.0, 0.0, 1662.0, 0.0, -242.0]) * at.clone();
    let a2 = S::poly(ctx, &[-567.0, 0.0, 1458.0, 0.0, -1212.0, 0.0, 334.0, 0.0, -13.0]) * at.clone() * at;
    (a0 + a1 + a2).div_e_pow(ctx, 10)
}

fn check_open(e: f64) -> Result<()> {
    if !(e > 0.0 && e <= crate::kinematics::MAX_ECCENTRICITY) {
        return Err(Error::Domain("eccentricity must lie in (0, 0.999]"));
    }
    Ok(())
}

/// `S₁/R`, first diagonal entry of the MacLaurin restricted Hessian.
pub fn s1_closed(e: f64) -> Result<f64> {
    check_open(e)?;
    Ok(eval_closed!(e, s1_generic))
}

/// `S₂/R`; changes sign at `e₀`.
pub fn s2_closed(e: f64) -> Result<f64> {
    check_open(e)?;
    Ok(eval_closed!(e, s2_generic))
}

/// The transversal 2×2 block `U/R = [[x, y], [y, z]]/e⁵`.
pub fn u_closed(e: f64) -> Result<[[f64; 2]; 2]> {
    check_open(e)?;
    let x = eval_closed!(e, u_generic, 0);
    let y = eval_closed!(e, u_generic, 1);
    let z = eval_closed!(e, u_generic, 2);
    Ok([[x, y], [y, z]])
}

/// `tr U / R`.
pub fn tr_u_closed(e: f64) -> Result<f64> {
    check_open(e)?;
    Ok(eval_closed!(e, tr_u_generic))
}

/// `det U / R²`.
pub fn det_u_closed(e: f64) -> Result<f64> {
    check_open(e)?;
    Ok(eval_closed!(e, det_u_generic))
}

/// `φ/R`, the isolated transversal diagonal entry.
pub fn phi_closed(e: f64) -> Result<f64> {
    check_open(e)?;
    let sph = crate::kinematics::Spheroid::prolate(e)?;
    let d = crate::potential::potential_derivs(&sph, &PhysicalParams::default()).over_r(PhysicalParams::default().r());
    let q = 1.0 - e * e;
    let q23 = libm::cbrt(q * q);
    Ok(2.0 / q23 * (q23 * (3.0 + e * e) * d.v1 + (3.0 + 2.0 * e * e - e * e * e * e) * d.v2))
}

/// MacLaurin Arnold blocks `(A₁, A₂)`, absolute units.
pub fn maclaurin_arnold_closed(e: f64, params: &PhysicalParams) -> Result<(f64, f64)> {
    let w2 = maclaurin_omega2_over_pi_rho_g(e)? * params.pi_rho_g();
    let q = 1.0 - e * e;
    let e4 = e * e * e * e;
    let a1 = (8.0 - e4 - 4.0 * e * e) * params.t() * w2 / (e4 * libm::cbrt(q));
    let a2 = 8.0 * libm::pow(q, 1.0 / 6.0) * params.t() * w2 / e4;
    Ok((a1, a2))
}

/// Diagonal of the transversal Arnold form on `{t₁ − κt₂, t₃}`.
///
/// The closed form is stated for the `+` branch. The `−` branch is its
/// image under transposition, which swaps `t₁ ↔ t₂`, so its first entry
/// picks up a factor `1/κ₊²`; both are written in terms of `ω₊`.
pub fn transversal_arnold_closed(e: f64, family: Family, params: &PhysicalParams) -> Result<[f64; 2]> {
    if !family.is_transversal() {
        return Err(Error::InvalidArgument("not a transversal family"));
    }
    let w2 = transversal_omega2_over_pi_rho_g(e, 1.0)? * params.pi_rho_g();
    let q = 1.0 - e * e;
    let t = params.t();
    let first = 3.0 * e * e * e * e * (2.0 + e) * t * w2 / (2.0 * (2.0 - e) * libm::pow(q, 5.0 / 3.0));
    let k = kappa(e);
    Ok([
        if family == Family::TransversalPlus { first } else { first / (k * k) },
        4.0 * (1.0 + e) * (2.0 - e) * (2.0 + e) * t * w2 / (e * e * libm::cbrt(q * q)),
    ])
}

/// `κ` of the `+` branch, with `q^μ = span{t₁ − κt₂, t₃}`.
pub fn kappa(e: f64) -> f64 {
    -(e - 1.0) * (e + 2.0) / ((e - 2.0) * libm::sqrt(1.0 - e * e))
}

/// `κ` for either transversal branch; the `−` branch has `1/κ₊`.
pub fn kappa_for(e: f64, family: Family) -> Result<f64> {
    match family {
        Family::TransversalPlus => Ok(kappa(e)),
        Family::TransversalMinus => Ok(1.0 / kappa(e)),
        _ => Err(Error::InvalidArgument("not a transversal family")),
    }
}

/// `ε` in the third transversal internal variation `a₃(E₁₂ + E₂₁ ± …)`.
pub fn transversal_sigma_epsilon(e: f64) -> f64 {
    -e / (core::f64::consts::SQRT_2 * libm::pow(1.0 - e * e, 1.0 / 6.0))
}

/// MacLaurin correction term in `Σ_int` coordinates: `8TΩ²a₁b₁`.
pub fn maclaurin_correction_closed(e: f64, params: &PhysicalParams, a: &[f64; 3], b: &[f64; 3]) -> Result<f64> {
    let w2 = maclaurin_omega2_over_pi_rho_g(e)? * params.pi_rho_g();
    Ok(8.0 * params.t() * w2 * a[0] * b[0])
}

/// Transversal correction term in `Σ_int` coordinates, written with `ω₊`
/// for both branches (the slice basis is invariant under transposition).
pub fn transversal_correction_closed(
    e: f64,
    family: Family,
    params: &PhysicalParams,
    a: &[f64; 3],
    b: &[f64; 3],
) -> Result<f64> {
    if !family.is_transversal() {
        return Err(Error::InvalidArgument("not a transversal family"));
    }
    let w2 = transversal_omega2_over_pi_rho_g(e, 1.0)? * params.pi_rho_g();
    let form = (9.0 - 5.0 * e * e) / (e * e - 1.0) * a[0] * b[0] - 3.0 * (a[0] * b[1] + a[1] * b[0]) - a[1] * b[1];
    Ok(8.0 * params.t() * w2 / (e - 1.0) * form)
}

/// Location of the MacLaurin stability boundary.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct E0Result {
    pub e0: f64,
    /// `c/a = √(1 − e₀²)`.
    pub axis_ratio: f64,
    pub bracket_width: f64,
    pub iterations: usize,
    /// `S₂(e₀)/R`.
    pub s2_at_root: f64,
}

/// Root of `S₂` in `(0.9, 0.99)`. The boundary is independent of `ρ, G`;
/// `params` is only validated.
pub fn find_e0(params: &PhysicalParams) -> Result<E0Result> {
    find_e0_with_tol(params, 1e-15)
}

/// [`find_e0`] with a caller-chosen bracket width.
pub fn find_e0_with_tol(params: &PhysicalParams, tol: f64) -> Result<E0Result> {
    PhysicalParams::new(params.rho, params.grav)?;
    let s2 = |e: f64| s2_closed(e).unwrap_or(f64::NAN);
    let r = find_root_detailed(s2, 0.9, 0.99, tol)?;
    Ok(E0Result {
        e0: r.root,
        axis_ratio: libm::sqrt(1.0 - r.root * r.root),
        bracket_width: r.bracket_width(),
        iterations: r.iterations,
        s2_at_root: s2(r.root),
    })
}

/// `|det(block − εI)|` for one claimed eigenvalue.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeterminantCheck {
    pub eigenvalue: Complex64,
    /// 0 for the `q^μ` block, 1 for the `Σ_int ⊕ Sl*` block.
    pub block: usize,
    pub det_abs: f64,
    /// `‖block‖_F^n`.
    pub scale: f64,
}

impl DeterminantCheck {
    pub fn passes(&self) -> bool {
        self.det_abs <= DET_TOL * self.scale
    }
}

/// Spectrum of the linearized Hamiltonian field on the symplectic normal
/// space of a MacLaurin spheroid.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearizedSpectrum {
    /// `ε₁± (×2), ε₂±, ε₃± (×2)` from the closed forms.
    pub closed_form: Vec<Complex64>,
    /// Eigenvalues computed from the assembled blocks.
    pub numerical: Vec<Complex64>,
    /// The 10×10 matrix `L_h = ω_N⁻¹·d²h`.
    pub lh: SmallMatrix<f64>,
    pub checks: Vec<DeterminantCheck>,
}

impl LinearizedSpectrum {
    pub fn all_checks_pass(&self) -> bool {
        self.checks.iter().all(DeterminantCheck::passes)
    }

    /// Largest `|Re ε|` among the numerically computed eigenvalues.
    pub fn max_real_part(&self) -> f64 {
        self.numerical.iter().fold(0.0f64, |m, z| m.max(z.re.abs()))
    }
}

fn pm_root(x: f64) -> [Complex64; 2] {
    if x >= 0.0 {
        let s = libm::sqrt(x);
        [Complex64::new(0.0, s), Complex64::new(0.0, -s)]
    } else {
        let s = libm::sqrt(-x);
        [Complex64::new(s, 0.0), Complex64::new(-s, 0.0)]
    }
}

/// `ε₃²` from `S₂` and the slice metric entry `2T` of the `s₂, s₃` directions.
pub fn epsilon3_squared(s2: f64, params: &PhysicalParams) -> f64 {
    -s2 / (2.0 * params.t())
}

fn sub_block(m: &[f64], n: usize, r0: usize, len: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(len * len);
    for i in 0..len {
        for j in 0..len {
            out.push(m[(r0 + i) * n + r0 + j]);
        }
    }
    out
}

fn det_check(block: &[f64], n: usize, which: usize, eps: Complex64) -> Result<DeterminantCheck> {
    let m = SmallMatrix::new(n, block.to_vec())?.to_complex();
    let det_abs = complex_det(&m.shifted(eps)).norm();
    let scale = libm::pow(m.norm(), n as f64);
    Ok(DeterminantCheck { eigenvalue: eps, block: which, det_abs, scale })
}

/// Linearized spectrum of the MacLaurin spheroid of eccentricity `e`.
pub fn linearized_eigenvalues(e: f64, params: &PhysicalParams) -> Result<LinearizedSpectrum> {
    let asm = Assembly::new(Family::MacLaurin, e, params)?;
    let omega = asm.st.omega;
    if !(omega > 0.0) {
        return Err(Error::Domain("MacLaurin spheroid must rotate"));
    }
    let t = params.t();
    let nq = asm.q.len();
    let ns = asm.sigma.len();
    let ar = asm.arnold()?;
    let xi: Vec<f64> = (0..nq * nq).map(|k| -alg_dot(&asm.mu, &ad(&asm.q[k / nq], &asm.q[k % nq]))).collect();
    let xi_inv = crate::numerics::inverse(&xi, nq)?;
    let mut top = vec![0.0; nq * nq];
    for i in 0..nq {
        for j in 0..nq {
            top[i * nq + j] = (0..nq).map(|k| xi_inv[i * nq + k] * ar.get(k, j)).sum();
        }
    }
    // Metric on the slice, diagonal in the chosen basis.
    let r1: Vec<f64> = (0..ns).map(|i| t * asm.slice[i].frob(&asm.slice[i])).collect();
    let hs = asm.restricted()?.total;
    let n = nq + 2 * ns;
    let mut lh = vec![0.0; n * n];
    for i in 0..nq {
        for j in 0..nq {
            lh[i * n + j] = top[i * nq + j];
        }
    }
    for i in 0..ns {
        lh[(nq + i) * n + nq + ns + i] = -1.0 / r1[i];
        for j in 0..ns {
            lh[(nq + ns + i) * n + nq + j] = hs.get(i, j);
        }
    }

    let s1 = s1_closed(e)? * params.r();
    let s2 = s2_closed(e)? * params.r();
    let mut closed = Vec::with_capacity(n);
    let eps1 = pm_root((8.0 + e * e) * omega * omega / (4.0 * e * e));
    closed.extend_from_slice(&eps1);
    closed.extend_from_slice(&eps1);
    closed.extend_from_slice(&pm_root(s1 / ((6.0 - 4.0 * e * e) * t)));
    let eps3 = pm_root(-epsilon3_squared(s2, params));
    closed.extend_from_slice(&eps3);
    closed.extend_from_slice(&eps3);

    let b0 = sub_block(&lh, n, 0, nq);
    let b1 = sub_block(&lh, n, nq, 2 * ns);
    let mut checks = Vec::with_capacity(n);
    for (k, z) in closed.iter().enumerate() {
        checks.push(if k < 4 { det_check(&b0, nq, 0, *z)? } else { det_check(&b1, 2 * ns, 1, *z)? });
    }

    // Numerical spectrum. The q^μ block is similar to the skew matrix
    // Lᵀ Ξ⁻¹ L with Ar = L Lᵀ; the other block squares to −R₁⁻¹Hs.
    let mut numerical = Vec::with_capacity(n);
    let l = cholesky(ar.entries(), nq)?;
    let mut k = vec![0.0; nq * nq];
    for i in 0..nq {
        for j in 0..nq {
            let mut s = 0.0;
            for a in 0..nq {
                for b in 0..nq {
                    s += l[a * nq + i] * xi_inv[a * nq + b] * l[b * nq + j];
                }
            }
            k[i * nq + j] = s;
        }
    }
    let ktk = SmallSymMatrix::from_fn(nq, |i, j| (0..nq).map(|a| k[a * nq + i] * k[a * nq + j]).sum())?;
    // Each pair ±iσ of the skew matrix shows up twice as σ² here.
    for s in ktk.eigenvalues().into_iter().step_by(2) {
        let [p, m] = pm_root(s.max(0.0));
        numerical.push(p);
        numerical.push(m);
    }
    let scaled = SmallSymMatrix::from_fn(ns, |i, j| hs.get(i, j) / libm::sqrt(r1[i] * r1[j]))?;
    for s in scaled.eigenvalues() {
        let [p, m] = pm_root(s);
        numerical.push(p);
        numerical.push(m);
    }
    Ok(LinearizedSpectrum { closed_form: closed, numerical, lh: SmallMatrix::new(n, lh)?, checks })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    NonlinearlyStable,
    Unstable,
    Inconclusive,
}

impl Verdict {
    pub fn name(&self) -> &'static str {
        match self {
            Verdict::NonlinearlyStable => "NonlinearlyStable",
            Verdict::Unstable => "Unstable",
            Verdict::Inconclusive => "Inconclusive",
        }
    }
}

/// Closed-form diagnostics, absolute units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ClosedForms {
    None,
    MacLaurin { s1: f64, s2: f64 },
    Transversal { phi: f64, u: [[f64; 2]; 2], tr_u: f64, det_u: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct StabilityReport {
    pub family: Family,
    pub e: f64,
    pub params: PhysicalParams,
    pub arnold: SmallSymMatrix,
    pub arnold_eigenvalues: Vec<f64>,
    pub hessian_restricted: SmallSymMatrix,
    pub hessian_eigenvalues: Vec<f64>,
    pub correction_included: bool,
    pub closed: ClosedForms,
    /// MacLaurin only.
    pub lh_eigenvalues: Option<Vec<Complex64>>,
    /// `min eig / max(1, max |eig|)` of the restricted Hessian in R units.
    pub definiteness_margin: f64,
    pub verdict: Verdict,
}

impl StabilityReport {
    pub fn s1(&self) -> Option<f64> {
        match self.closed {
            ClosedForms::MacLaurin { s1, .. } => Some(s1),
            _ => None,
        }
    }

    pub fn s2(&self) -> Option<f64> {
        match self.closed {
            ClosedForms::MacLaurin { s2, .. } => Some(s2),
            _ => None,
        }
    }
}

fn margin(ev: &[f64]) -> f64 {
    let big = ev.iter().fold(1.0f64, |m, x| m.max(x.abs()));
    ev.iter().fold(f64::INFINITY, |m, &x| m.min(x)) / big
}

/// Full stability analysis. `e` is ignored for the sphere.
pub fn stability_report(family: Family, e: f64, params: &PhysicalParams) -> Result<StabilityReport> {
    let asm = Assembly::new(family, e, params)?;
    let e = asm.st.ecc();
    let arnold = asm.arnold()?;
    let arnold_eigenvalues = arnold.eigenvalues();
    let hs = asm.restricted()?.total;
    let hessian_eigenvalues = hs.eigenvalues();
    let r = params.r();
    let closed = match family {
        Family::Spherical => ClosedForms::None,
        Family::MacLaurin => ClosedForms::MacLaurin { s1: s1_closed(e)? * r, s2: s2_closed(e)? * r },
        _ => {
            let u = u_closed(e)?;
            ClosedForms::Transversal {
                phi: phi_closed(e)? * r,
                u: [[u[0][0] * r, u[0][1] * r], [u[1][0] * r, u[1][1] * r]],
                tr_u: tr_u_closed(e)? * r,
                det_u: det_u_closed(e)? * r * r,
            }
        }
    };
    // Definiteness is judged in R units so verdicts do not depend on ρ, G.
    let in_r = |ev: &[f64]| ev.iter().map(|x| x / r).collect::<Vec<f64>>();
    let stable = is_positive_definite(&in_r(&arnold_eigenvalues)) && is_positive_definite(&in_r(&hessian_eigenvalues));
    let lh = if family == Family::MacLaurin { Some(linearized_eigenvalues(e, params)?) } else { None };
    let verdict = if stable {
        Verdict::NonlinearlyStable
    } else {
        match &lh {
            Some(sp) => {
                let big = sp.numerical.iter().fold(0.0f64, |m, z| m.max(z.norm()));
                if sp.max_real_part() > REAL_PART_TOL * big {
                    Verdict::Unstable
                } else {
                    Verdict::Inconclusive
                }
            }
            None => Verdict::Inconclusive,
        }
    };
    Ok(StabilityReport {
        family,
        e,
        params: *params,
        arnold,
        arnold_eigenvalues,
        hessian_restricted: hs,
        definiteness_margin: margin(&in_r(&hessian_eigenvalues)),
        hessian_eigenvalues,
        correction_included: true,
        closed,
        lh_eigenvalues: lh.map(|s| s.numerical),
        verdict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_forms_agree_across_switch() {
        let e = 0.7;
        let d = s2_generic::<f64>(e) - s2_generic::<crate::numerics::Series>(()).eval(e);
        assert!(d.abs() < 1e-11);
        let d = det_u_generic::<f64>(0.74) - det_u_generic::<crate::numerics::Series>(()).eval(0.74);
        assert!(d.abs() < 1e-8);
    }

    #[test]
    fn pivoting_keeps_leading_vectors() {
        let t = [[1.0, 0.0, 0.0, 0.0, 0.0, 0.0], [0.0, 0.0, 0.0, 1.0, 0.0, 0.0]];
        let h = [[0.0; 6]];
        assert_eq!(null_combinations(&h, &t, &[0.0; 6]).len(), 2);
    }
}
