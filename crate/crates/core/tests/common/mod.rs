#![allow(dead_code)]

use ellipsoid_core::kinematics::Mat3;
use proptest::test_runner::{Config, RngSeed};

pub fn config(cases: u32) -> Config {
    Config { cases, rng_seed: RngSeed::Fixed(0x5eed), failure_persistence: None, ..Config::default() }
}

/// Rotation about `axis` (need not be normalized) by `angle`.
pub fn rotation(axis: [f64; 3], angle: f64) -> Mat3 {
    let n = (axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]).sqrt().max(1e-12);
    let k = [axis[0] / n, axis[1] / n, axis[2] / n];
    let kx = ellipsoid_core::kinematics::hat(k);
    Mat3::IDENTITY + kx * angle.sin() + kx * kx * (1.0 - angle.cos())
}

pub fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(a.abs()).max(1e-300)
}

/// Tiny deterministic generator for loops that want plain numbers.
pub struct Lcg(pub u64);

impl Lcg {
    pub fn next(&mut self) -> f64 {
        self.0 = self.0.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        ((self.0 >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0
    }

    pub fn vec3(&mut self) -> [f64; 3] {
        [self.next(), self.next(), self.next()]
    }

    pub fn vec6(&mut self) -> [f64; 6] {
        core::array::from_fn(|_| self.next())
    }

    pub fn mat3(&mut self) -> Mat3 {
        Mat3::from_fn(|_, _| self.next())
    }
}
