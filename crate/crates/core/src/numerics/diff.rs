use alloc::vec::Vec;

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FdOrder {
    Gradient,
    Hessian,
}

#[derive(Debug, Clone, PartialEq)]
pub enum FdResult {
    Gradient(Vec<f64>),
    /// Row-major `n×n`.
    Hessian(Vec<f64>),
}

const GRADIENT_STEP: f64 = 1e-6;
const HESSIAN_STEP: f64 = 1e-4;

/// Central-difference gradient with a uniform absolute step.
pub fn fd_gradient<F: Fn(&[f64]) -> f64>(f: F, x: &[f64], step: f64) -> Vec<f64> {
    let mut p = x.to_vec();
    (0..x.len())
        .map(|i| {
            p[i] = x[i] + step;
            let fp = f(&p);
            p[i] = x[i] - step;
            let fm = f(&p);
            p[i] = x[i];
            (fp - fm) / (2.0 * step)
        })
        .collect()
}

/// Central-difference Hessian; coordinate `i` uses the step `steps[i]`.
pub fn fd_hessian<F: Fn(&[f64]) -> f64>(f: F, x: &[f64], steps: &[f64]) -> Vec<f64> {
    let n = x.len();
    let mut h = alloc::vec![0.0; n * n];
    let mut p = x.to_vec();
    let f0 = f(x);
    for i in 0..n {
        let hi = steps[i];
        p[i] = x[i] + hi;
        let fp = f(&p);
        p[i] = x[i] - hi;
        let fm = f(&p);
        p[i] = x[i];
        h[i * n + i] = (fp - 2.0 * f0 + fm) / (hi * hi);
        for j in 0..i {
            let hj = steps[j];
            let mut eval = |si: f64, sj: f64| {
                p[i] = x[i] + si * hi;
                p[j] = x[j] + sj * hj;
                let v = f(&p);
                p[i] = x[i];
                p[j] = x[j];
                v
            };
            let v = (eval(1.0, 1.0) - eval(1.0, -1.0) - eval(-1.0, 1.0) + eval(-1.0, -1.0)) / (4.0 * hi * hj);
            h[i * n + j] = v;
            h[j * n + i] = v;
        }
    }
    h
}

/// Finite-difference first or second derivative of `f` at `x`.
///
/// Without an explicit step the defaults are `1e-6` for gradients and
/// `1e-4·max(1, |x_i|)` per coordinate for Hessians.
pub fn fd_derivative<F: Fn(&[f64]) -> f64>(f: F, x: &[f64], order: FdOrder, step: Option<f64>) -> Result<FdResult> {
    if let Some(s) = step {
        if !(s > 0.0) {
            return Err(Error::InvalidArgument("finite-difference step must be positive"));
        }
    }
    Ok(match order {
        FdOrder::Gradient => FdResult::Gradient(fd_gradient(f, x, step.unwrap_or(GRADIENT_STEP))),
        FdOrder::Hessian => {
            let steps: Vec<f64> = match step {
                Some(s) => alloc::vec![s; x.len()],
                None => x.iter().map(|v| HESSIAN_STEP * v.abs().max(1.0)).collect(),
            };
            FdResult::Hessian(fd_hessian(f, x, &steps))
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_hessian() {
        let f = |x: &[f64]| x.iter().map(|v| v * v).sum::<f64>();
        let FdResult::Hessian(h) = fd_derivative(f, &[0.0, 0.0, 0.0], FdOrder::Hessian, None).unwrap() else {
            panic!()
        };
        for i in 0..3 {
            for j in 0..3 {
                let want = if i == j { 2.0 } else { 0.0 };
                assert!((h[i * 3 + j] - want).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn cubic_gradient() {
        let g = fd_gradient(|x| x[0] * x[0] * x[0], &[1.0], 1e-5);
        assert!((g[0] - 3.0).abs() < 1e-9);
    }

    #[test]
    fn rejects_bad_step() {
        assert!(fd_derivative(|x| x[0], &[0.0], FdOrder::Gradient, Some(0.0)).is_err());
    }
}
