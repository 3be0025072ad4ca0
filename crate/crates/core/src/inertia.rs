//! Locked inertia tensor, momentum map and the twice-augmented potential
//! `V^λ_ξ(F) = V(F) − ½⟨ξ, 𝕀(F)ξ⟩ − λ det F` with its derivatives.

use crate::kinematics::{generator, hat, invariants_of, Mat3, PhysicalParams, Vec3, VelocityPair};
use crate::numerics::{QuadratureSpec, SmallSymMatrix};
use crate::potential::{potential_value, PotentialDerivs};
use crate::Result;

/// `i_A = tr(A)·I − A`.
pub fn i_op(a: &Mat3) -> Mat3 {
    Mat3::IDENTITY * a.trace() - *a
}

/// The locked inertia tensor as a 6×6 matrix on `(ξ_L | ξ_R)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LockedInertiaMatrix(pub [[f64; 6]; 6]);

impl LockedInertiaMatrix {
    pub fn apply(&self, xi: &[f64; 6]) -> [f64; 6] {
        core::array::from_fn(|i| (0..6).map(|j| self.0[i][j] * xi[j]).sum())
    }

    /// `⟨ξ, 𝕀η⟩`.
    pub fn form(&self, xi: &[f64; 6], eta: &[f64; 6]) -> f64 {
        let m = self.apply(eta);
        (0..6).map(|i| xi[i] * m[i]).sum()
    }

    pub fn to_sym(&self) -> SmallSymMatrix {
        SmallSymMatrix::from_fn(6, |i, j| self.0[i][j]).expect("6 ≤ 10")
    }
}

/// Block form `T·[[i_S, −2 det F·F^{−T}], [−2 det F·F^{−1}, i_C]]`
/// with `S = FFᵀ`, `C = FᵀF`.
pub fn locked_inertia(f: &Mat3, params: &PhysicalParams) -> LockedInertiaMatrix {
    let s = *f * f.transpose();
    let c = f.transpose() * *f;
    let d = f.det();
    let finv = f.inverse().unwrap_or(Mat3::ZERO);
    let blocks = [[i_op(&s), finv.transpose() * (-2.0 * d)], [finv * (-2.0 * d), i_op(&c)]];
    let t = params.t();
    let mut m = [[0.0; 6]; 6];
    for (bi, row) in blocks.iter().enumerate() {
        for (bj, b) in row.iter().enumerate() {
            for i in 0..3 {
                for j in 0..3 {
                    m[3 * bi + i][3 * bj + j] = t * b.0[i][j];
                }
            }
        }
    }
    LockedInertiaMatrix(m)
}

/// Trace form `⟨ξ, 𝕀(F)η⟩ = T·tr(ξ_M(F)ᵀ η_M(F))`.
pub fn locked_inertia_form(f: &Mat3, xi: &VelocityPair, eta: &VelocityPair, params: &PhysicalParams) -> f64 {
    params.t() * generator(xi, f).frob(&generator(eta, f))
}

/// Angular momentum `j` and circulation `c`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Momentum {
    pub j: Vec3,
    pub c: Vec3,
}

impl Momentum {
    pub fn to_array(&self) -> [f64; 6] {
        let (j, c) = (self.j, self.c);
        [j[0], j[1], j[2], c[0], c[1], c[2]]
    }
}

/// `(j, c) = T·(i_S ξ_L − 2 det F·F^{−T}ξ_R, i_C ξ_R − 2 det F·F^{−1}ξ_L)`.
pub fn momentum(f: &Mat3, xi: &VelocityPair, params: &PhysicalParams) -> Momentum {
    let t = params.t();
    let s = *f * f.transpose();
    let c = f.transpose() * *f;
    let d = f.det();
    let finv = f.inverse().unwrap_or(Mat3::ZERO);
    let a = i_op(&s).mul_vec(xi.xi_l);
    let b = finv.transpose().mul_vec(xi.xi_r);
    let j = core::array::from_fn(|i| t * (a[i] - 2.0 * d * b[i]));
    let a = i_op(&c).mul_vec(xi.xi_r);
    let b = finv.mul_vec(xi.xi_l);
    let cc = core::array::from_fn(|i| t * (a[i] - 2.0 * d * b[i]));
    Momentum { j, c: cc }
}

/// Directional derivative `⟨η, (D𝕀(F)·A)ξ⟩`.
pub fn d_locked_inertia(f: &Mat3, a: &Mat3, xi: &VelocityPair, eta: &VelocityPair, params: &PhysicalParams) -> f64 {
    let t = params.t();
    t * (generator(xi, a).frob(&generator(eta, f)) + generator(xi, f).frob(&generator(eta, a)))
}

/// Second derivative `⟨ξ, (D²𝕀(F)(A, B))ξ⟩ = T tr(4ξ̂_R Bᵀ ξ̂_L A − 2ξ̂_L² A Bᵀ − 2ξ̂_R² BᵀA)`.
pub fn d2_locked_inertia(a: &Mat3, b: &Mat3, xi: &VelocityPair, params: &PhysicalParams) -> f64 {
    let l = hat(xi.xi_l);
    let r = hat(xi.xi_r);
    let bt = b.transpose();
    let m = (r * bt * l * *a) * 4.0 - (l * l * *a * bt) * 2.0 - (r * r * bt * *a) * 2.0;
    params.t() * m.trace()
}

/// Value of the twice-augmented potential (potential by quadrature).
pub fn v2aug(f: &Mat3, xi: &VelocityPair, lambda: f64, params: &PhysicalParams, spec: &QuadratureSpec) -> Result<f64> {
    let v = potential_value(f, params, spec)?;
    Ok(v - 0.5 * locked_inertia_form(f, xi, xi, params) - lambda * f.det())
}

/// Gradient of `V^λ_ξ` as the matrix `G` with `dV^λ_ξ·δF = tr(Gᵀ δF)`;
/// `derivs` must be evaluated at `F`.
pub fn d_v2aug(f: &Mat3, xi: &VelocityPair, lambda: f64, derivs: &PotentialDerivs, params: &PhysicalParams) -> Mat3 {
    let (i1, _, _) = invariants_of(f);
    let potential = (*f * derivs.v1 + (*f * i1 - *f * f.transpose() * *f) * derivs.v2) * 2.0;
    let l = hat(xi.xi_l);
    let r = hat(xi.xi_r);
    let x = l * *f - *f * r;
    let kinetic = (x * r - l * x) * params.t();
    let finv_t = f.inverse().unwrap_or(Mat3::ZERO).transpose();
    potential - kinetic - finv_t * (lambda * f.det())
}

/// `d²V(F)(A, B)` in terms of the invariant derivatives.
pub fn d2_potential(f: &Mat3, a: &Mat3, b: &Mat3, d: &PotentialDerivs) -> f64 {
    let (i1, _, _) = invariants_of(f);
    let ft = f.transpose();
    let bt = b.transpose();
    let at = a.transpose();
    let tr_fta = (ft * *a).trace();
    let tr_fbt = (*f * bt).trace();
    let tr_fftfbt = (*f * ft * *f * bt).trace();
    let tr_ftfta = (ft * *f * ft * *a).trace();
    2.0 * (bt * *a).trace() * (d.v1 + i1 * d.v2)
        - 2.0 * (*b * ft * *f * at + *f * bt * *f * at + *f * ft * *b * at).trace() * d.v2
        + 4.0 * tr_fta * tr_fbt * (d.v2 + d.v11 + 2.0 * i1 * d.v12 + i1 * i1 * d.v22)
        - 4.0 * tr_fftfbt * tr_fta * (d.v12 + i1 * d.v22)
        - 4.0 * tr_ftfta * tr_fbt * (d.v12 + i1 * d.v22)
        + 4.0 * tr_ftfta * tr_fftfbt * d.v22
}

/// Second variation `d²V^λ_ξ(F)(A, B)`; `derivs` must be evaluated at `F`.
pub fn hess_v2aug(
    f: &Mat3,
    xi: &VelocityPair,
    lambda: f64,
    a: &Mat3,
    b: &Mat3,
    derivs: &PotentialDerivs,
    params: &PhysicalParams,
) -> f64 {
    let finv = f.inverse().unwrap_or(Mat3::ZERO);
    let det_term = f.det() * ((finv * *b).trace() * (finv * *a).trace() - (finv * *b * finv * *a).trace());
    d2_potential(f, a, b, derivs) - 0.5 * d2_locked_inertia(a, b, xi, params) - lambda * det_term
}
