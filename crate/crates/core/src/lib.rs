//! Symmetric relative equilibria of Dirichlet's self-gravitating fluid
//! ellipsoid (spherical, MacLaurin, transversal) and their nonlinear
//! stability through the singular reduced energy-momentum method.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]

extern crate alloc;

mod error;

pub mod equilibria;
pub mod inertia;
pub mod kinematics;
pub mod numerics;
pub mod potential;
pub mod stability;
pub mod verify;

pub use equilibria::{EquilibriumState, Family};
pub use error::{Error, Result};
pub use kinematics::{Config3, Mat3, PhysicalParams, Spheroid, SpheroidKind, Vec3, VelocityPair};
pub use potential::PotentialDerivs;
pub use stability::{StabilityReport, Verdict};
