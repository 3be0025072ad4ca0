use alloc::collections::BinaryHeap;
use core::cmp::Ordering;

use crate::{Error, Result};

/// Tolerances and budget for [`integrate`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec { abs_tol: 1e-12, rel_tol: 1e-12, max_subdivisions: 2000 }
    }
}

impl QuadratureSpec {
    pub fn new(abs_tol: f64, rel_tol: f64, max_subdivisions: usize) -> Result<Self> {
        if !(abs_tol > 0.0) || !(rel_tol > 0.0) {
            return Err(Error::InvalidArgument("quadrature tolerances must be positive"));
        }
        if max_subdivisions < 1 {
            return Err(Error::InvalidArgument("max_subdivisions must be at least 1"));
        }
        Ok(QuadratureSpec { abs_tol, rel_tol, max_subdivisions })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult {
    pub value: f64,
    pub error: f64,
    pub subdivisions: usize,
}

// Kronrod 15-point nodes; odd indices (1,3,5) together with 7 are the Gauss 7 nodes.
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Segment {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut resk = fc * WGK[7];
    let mut resg = fc * WG[3];
    let mut resabs = resk.abs();
    let mut fv1 = [0.0; 7];
    let mut fv2 = [0.0; 7];
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        resk += WGK[j] * (f1 + f2);
        resabs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            resg += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * resk;
    let mut resasc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        resasc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let value = resk * half;
    resabs *= half.abs();
    resasc *= half.abs();
    let mut error = ((resk - resg) * half).abs();
    if resasc != 0.0 && error != 0.0 {
        let scale = libm::pow(200.0 * error / resasc, 1.5);
        error = resasc * if scale < 1.0 { scale } else { 1.0 };
    }
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        let floor = 50.0 * f64::EPSILON * resabs;
        if floor > error {
            error = floor;
        }
    }
    Segment { a, b, value, error }
}

fn adapt<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, spec: &QuadratureSpec) -> Result<QuadratureResult> {
    let first = gk15(f, a, b);
    let mut value = first.value;
    let mut error = first.error;
    let mut heap = BinaryHeap::new();
    heap.push(first);
    let mut subdivisions = 1;
    loop {
        let target = spec.abs_tol.max(spec.rel_tol * value.abs());
        if error <= target {
            return Ok(QuadratureResult { value, error, subdivisions });
        }
        if subdivisions >= spec.max_subdivisions {
            return Err(Error::NonConvergence { subdivisions, error });
        }
        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            return Err(Error::NonConvergence { subdivisions, error });
        }
        let left = gk15(f, worst.a, mid);
        let right = gk15(f, mid, worst.b);
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        subdivisions += 1;
        // Resum occasionally so the running totals do not drift.
        if subdivisions % 64 == 0 {
            value = heap.iter().map(|s| s.value).sum();
            error = heap.iter().map(|s| s.error).sum();
        }
    }
}

/// Adaptive Gauss-Kronrod (7/15) integration of `f` over `(a, b)`.
///
/// `b` may be `f64::INFINITY`; the half-line is then mapped onto `(0, 1)`
/// by `s = a + t/(1-t)` followed by `t = 1 - (1-u)^2`, which keeps an
/// `s^{-3/2}` tail bounded at `u = 1`.
pub fn integrate_detailed<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, spec: &QuadratureSpec) -> Result<QuadratureResult> {
    if a.is_nan() || b.is_nan() || a.is_infinite() {
        return Err(Error::InvalidArgument("integration limits must be finite on the left"));
    }
    if b == f64::INFINITY {
        let g = |u: f64| {
            let w = 1.0 - u;
            let s = a + 1.0 / (w * w) - 1.0;
            f(s) * 2.0 / (w * w * w)
        };
        adapt(&g, 0.0, 1.0, spec)
    } else if b.is_infinite() {
        Err(Error::InvalidArgument("lower infinite limit is not supported"))
    } else if b < a {
        let r = adapt(&f, b, a, spec)?;
        Ok(QuadratureResult { value: -r.value, ..r })
    } else if b == a {
        Ok(QuadratureResult { value: 0.0, error: 0.0, subdivisions: 0 })
    } else {
        adapt(&f, a, b, spec)
    }
}

/// Integral of `f` over `(a, b)`; see [`integrate_detailed`].
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, spec: &QuadratureSpec) -> Result<f64> {
    integrate_detailed(f, a, b, spec).map(|r| r.value)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn elementary() {
        let spec = QuadratureSpec::default();
        let v = integrate(|s| 1.0 / libm::pow(1.0 + s, 1.5), 0.0, f64::INFINITY, &spec).unwrap();
        assert!((v - 2.0).abs() < 1e-12);
        let v = integrate(|x| x * x, 0.0, 1.0, &spec).unwrap();
        assert!((v - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn reversed_limits_flip_sign() {
        let spec = QuadratureSpec::default();
        let v = integrate(libm::exp, 1.0, 0.0, &spec).unwrap();
        assert!((v + (core::f64::consts::E - 1.0)).abs() < 1e-13);
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let spec = QuadratureSpec::new(1e-14, 1e-14, 3).unwrap();
        let r = integrate(|x| libm::sin(1.0 / x), 1e-6, 1.0, &spec);
        assert!(matches!(r, Err(Error::NonConvergence { .. })));
    }

    #[test]
    fn spec_validation() {
        assert!(QuadratureSpec::new(0.0, 1e-3, 10).is_err());
        assert!(QuadratureSpec::new(1e-3, 1e-3, 0).is_err());
    }
}
