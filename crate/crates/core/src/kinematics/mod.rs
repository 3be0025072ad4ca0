//! Configurations, symmetry generators and the kinetic metric.

mod mat3;

use core::f64::consts::PI;

pub use mat3::{cross, dot, unit, Mat3, Vec3};

use crate::{Error, Result};

/// Largest eccentricity accepted anywhere in the crate.
pub const MAX_ECCENTRICITY: f64 = 0.999;

/// Density `rho` and gravitational constant `grav`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalParams {
    pub rho: f64,
    pub grav: f64,
}

impl Default for PhysicalParams {
    fn default() -> Self {
        PhysicalParams { rho: 1.0, grav: 1.0 }
    }
}

impl PhysicalParams {
    pub fn new(rho: f64, grav: f64) -> Result<Self> {
        if !(rho > 0.0 && rho.is_finite()) || !(grav > 0.0 && grav.is_finite()) {
            return Err(Error::Domain("density and gravitational constant must be positive"));
        }
        Ok(PhysicalParams { rho, grav })
    }

    /// Metric constant `T = 4πρ/15`.
    pub fn t(&self) -> f64 {
        4.0 * PI * self.rho / 15.0
    }

    /// Potential constant `R = 8π²Gρ²/15`.
    pub fn r(&self) -> f64 {
        8.0 * PI * PI * self.grav * self.rho * self.rho / 15.0
    }

    /// `πρG`, the unit of squared angular velocities.
    pub fn pi_rho_g(&self) -> f64 {
        PI * self.rho * self.grav
    }
}

/// A configuration `F ∈ GL⁺(3)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Config3(Mat3);

impl Config3 {
    pub fn new(f: Mat3) -> Result<Self> {
        let d = f.det();
        if !(d > 0.0) || !d.is_finite() {
            return Err(Error::Domain("configuration must have positive determinant"));
        }
        Ok(Config3(f))
    }

    pub fn identity() -> Self {
        Config3(Mat3::IDENTITY)
    }

    pub fn matrix(&self) -> &Mat3 {
        &self.0
    }

    pub fn is_unimodular(&self) -> bool {
        (self.0.det() - 1.0).abs() <= 1e-12
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SpheroidKind {
    Sphere,
    Oblate,
    Prolate,
}

/// Unimodular spheroid `diag(a, a, c)`, `a²c = 1`, parameterized by eccentricity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Spheroid {
    kind: SpheroidKind,
    ecc: f64,
}

impl Spheroid {
    pub fn new(kind: SpheroidKind, ecc: f64) -> Result<Self> {
        if !(0.0..=MAX_ECCENTRICITY).contains(&ecc) {
            return Err(Error::Domain("eccentricity must lie in [0, 0.999]"));
        }
        match kind {
            SpheroidKind::Sphere if ecc != 0.0 => Err(Error::Domain("a sphere has zero eccentricity")),
            SpheroidKind::Oblate | SpheroidKind::Prolate if ecc == 0.0 => {
                Err(Error::Domain("a spheroid with zero eccentricity is a sphere"))
            }
            _ => Ok(Spheroid { kind, ecc }),
        }
    }

    pub fn sphere() -> Self {
        Spheroid { kind: SpheroidKind::Sphere, ecc: 0.0 }
    }

    pub fn oblate(e: f64) -> Result<Self> {
        Self::new(SpheroidKind::Oblate, e)
    }

    pub fn prolate(e: f64) -> Result<Self> {
        Self::new(SpheroidKind::Prolate, e)
    }

    pub fn kind(&self) -> SpheroidKind {
        self.kind
    }

    pub fn ecc(&self) -> f64 {
        self.ecc
    }

    /// Equatorial semi-axis `a`.
    pub fn a(&self) -> f64 {
        let q = 1.0 - self.ecc * self.ecc;
        match self.kind {
            SpheroidKind::Sphere => 1.0,
            SpheroidKind::Oblate => libm::pow(q, -1.0 / 6.0),
            SpheroidKind::Prolate => libm::pow(q, 1.0 / 6.0),
        }
    }

    /// Polar semi-axis `c`.
    pub fn c(&self) -> f64 {
        let q = 1.0 - self.ecc * self.ecc;
        match self.kind {
            SpheroidKind::Sphere => 1.0,
            SpheroidKind::Oblate => libm::cbrt(q),
            SpheroidKind::Prolate => 1.0 / libm::cbrt(q),
        }
    }

    pub fn matrix(&self) -> Mat3 {
        let (a, c) = (self.a(), self.c());
        Mat3::diag([a, a, c])
    }

    pub fn config(&self) -> Config3 {
        Config3(self.matrix())
    }
}

/// Angular velocity `xi_l` and vorticity `xi_r`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct VelocityPair {
    pub xi_l: Vec3,
    pub xi_r: Vec3,
}

impl VelocityPair {
    pub fn new(xi_l: Vec3, xi_r: Vec3) -> Self {
        VelocityPair { xi_l, xi_r }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_array(v: [f64; 6]) -> Self {
        VelocityPair { xi_l: [v[0], v[1], v[2]], xi_r: [v[3], v[4], v[5]] }
    }

    pub fn to_array(&self) -> [f64; 6] {
        let (l, r) = (self.xi_l, self.xi_r);
        [l[0], l[1], l[2], r[0], r[1], r[2]]
    }
}

/// Elements of the Lie algebra ℝ³⊕ℝ³ as flat 6-vectors.
pub type Alg6 = [f64; 6];

pub fn alg(l: Vec3, r: Vec3) -> Alg6 {
    [l[0], l[1], l[2], r[0], r[1], r[2]]
}

pub fn alg_dot(a: &Alg6, b: &Alg6) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn alg_scale(a: &Alg6, s: f64) -> Alg6 {
    a.map(|x| x * s)
}

pub fn alg_add(a: &Alg6, b: &Alg6) -> Alg6 {
    core::array::from_fn(|i| a[i] + b[i])
}

/// Adjoint action on ℝ³⊕ℝ³: componentwise cross product.
pub fn ad(g: &Alg6, x: &Alg6) -> Alg6 {
    let l = cross([g[0], g[1], g[2]], [x[0], x[1], x[2]]);
    let r = cross([g[3], g[4], g[5]], [x[3], x[4], x[5]]);
    alg(l, r)
}

/// `hat(v)·w = v × w`.
pub fn hat(v: Vec3) -> Mat3 {
    Mat3([[0.0, -v[2], v[1]], [v[2], 0.0, -v[0]], [-v[1], v[0], 0.0]])
}

/// Inverse of [`hat`]; rejects matrices that are not skew to 1e-12.
pub fn vee(m: &Mat3) -> Result<Vec3> {
    let sym = *m + m.transpose();
    if sym.max_abs() > 1e-12 * m.max_abs().max(1.0) {
        return Err(Error::NotSkew);
    }
    Ok([m.0[2][1], m.0[0][2], m.0[1][0]])
}

/// Principal invariants `(I1, I2, I3)` of `S = FFᵀ`.
pub fn invariants(f: &Config3) -> (f64, f64, f64) {
    invariants_of(f.matrix())
}

/// [`invariants`] for a bare matrix.
pub fn invariants_of(f: &Mat3) -> (f64, f64, f64) {
    let s = *f * f.transpose();
    let i1 = s.trace();
    let i2 = 0.5 * (i1 * i1 - (s * s).trace());
    (i1, i2, s.det())
}

/// Kinetic metric `T·tr(AᵀB)`.
pub fn metric_pair(a: &Mat3, b: &Mat3, params: &PhysicalParams) -> f64 {
    params.t() * a.frob(b)
}

/// Infinitesimal generator `hat(ξ_L)F − F·hat(ξ_R)`.
pub fn generator(xi: &VelocityPair, f: &Mat3) -> Mat3 {
    hat(xi.xi_l) * *f - *f * hat(xi.xi_r)
}

/// Generator of a flat algebra element.
pub fn generator6(xi: &Alg6, f: &Mat3) -> Mat3 {
    generator(&VelocityPair::from_array(*xi), f)
}
