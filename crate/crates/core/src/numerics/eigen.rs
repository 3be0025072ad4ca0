use alloc::vec::Vec;

use crate::{Error, Result};

pub const MAX_DIM: usize = 10;

/// Dense symmetric matrix of dimension 0..=10 (the empty form is allowed), stored in full row-major form.
#[derive(Debug, Clone, PartialEq)]
pub struct SmallSymMatrix {
    n: usize,
    data: Vec<f64>,
}

impl SmallSymMatrix {
    /// Builds from row-major entries, checking symmetry to 1e-12 relative.
    pub fn new(n: usize, entries: Vec<f64>) -> Result<Self> {
        if n > MAX_DIM || entries.len() != n * n {
            return Err(Error::InvalidArgument("symmetric matrix must be n×n with n ≤ 10"));
        }
        let scale = entries.iter().fold(0.0f64, |m, x| m.max(x.abs())).max(f64::MIN_POSITIVE);
        for i in 0..n {
            for j in 0..i {
                if (entries[i * n + j] - entries[j * n + i]).abs() > 1e-12 * scale {
                    return Err(Error::InvalidArgument("matrix is not symmetric"));
                }
            }
        }
        Ok(SmallSymMatrix { n, data: entries })
    }

    /// Builds `m[i][j] = f(i, j)` and symmetrizes by averaging.
    pub fn from_fn<F: FnMut(usize, usize) -> f64>(n: usize, mut f: F) -> Result<Self> {
        if n > MAX_DIM {
            return Err(Error::InvalidArgument("symmetric matrix must be n×n with n ≤ 10"));
        }
        let mut data = alloc::vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                data[i * n + j] = f(i, j);
            }
        }
        for i in 0..n {
            for j in 0..i {
                let m = 0.5 * (data[i * n + j] + data[j * n + i]);
                data[i * n + j] = m;
                data[j * n + i] = m;
            }
        }
        Ok(SmallSymMatrix { n, data })
    }

    pub fn identity(n: usize) -> Result<Self> {
        Self::from_fn(n, |i, j| if i == j { 1.0 } else { 0.0 })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    pub fn entries(&self) -> &[f64] {
        &self.data
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.data.chunks(self.n).map(|r| r.to_vec()).collect()
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0f64, |m, x| m.max(x.abs()))
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        sym_eigenvalues(self)
    }
}

/// Eigenvalues in ascending order by cyclic Jacobi rotations.
pub fn sym_eigenvalues(m: &SmallSymMatrix) -> Vec<f64> {
    let n = m.n;
    let mut a = m.data.clone();
    let off = |a: &[f64]| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += a[i * n + j] * a[i * n + j];
                }
            }
        }
        s
    };
    let total: f64 = a.iter().map(|x| x * x).sum();
    for _sweep in 0..100 {
        if off(&a) <= f64::EPSILON * f64::EPSILON * total * 1e-4 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + libm::sqrt(theta * theta + 1.0));
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / libm::sqrt(t * t + 1.0);
                let s = t * c;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut ev: Vec<f64> = (0..n).map(|i| a[i * n + i]).collect();
    ev.sort_by(|x, y| x.total_cmp(y));
    ev
}

/// Positive definiteness with the relative threshold
/// `min eig > 1e-10 · max(1, max |eig|)`.
pub fn is_positive_definite(eigenvalues: &[f64]) -> bool {
    if eigenvalues.is_empty() {
        return true;
    }
    let big = eigenvalues.iter().fold(1.0f64, |m, x| m.max(x.abs()));
    let small = eigenvalues.iter().fold(f64::INFINITY, |m, &x| m.min(x));
    small > 1e-10 * big
}
