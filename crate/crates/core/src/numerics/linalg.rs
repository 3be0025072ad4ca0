use alloc::vec::Vec;

use num_complex::Complex64;

use super::eigen::MAX_DIM;
use crate::{Error, Result};

/// Dense square matrix of dimension 1..=10 with real or complex entries.
#[derive(Debug, Clone, PartialEq)]
pub struct SmallMatrix<T> {
    n: usize,
    data: Vec<T>,
}

impl<T: Copy> SmallMatrix<T> {
    pub fn new(n: usize, entries: Vec<T>) -> Result<Self> {
        if n == 0 || n > MAX_DIM || entries.len() != n * n {
            return Err(Error::InvalidArgument("matrix must be n×n with 1 ≤ n ≤ 10"));
        }
        Ok(SmallMatrix { n, data: entries })
    }

    pub fn from_fn<F: FnMut(usize, usize) -> T>(n: usize, mut f: F) -> Result<Self> {
        if n == 0 || n > MAX_DIM {
            return Err(Error::InvalidArgument("matrix must be n×n with 1 ≤ n ≤ 10"));
        }
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        Ok(SmallMatrix { n, data })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        self.data[i * self.n + j]
    }

    pub fn entries(&self) -> &[T] {
        &self.data
    }
}

impl SmallMatrix<f64> {
    pub fn to_complex(&self) -> SmallMatrix<Complex64> {
        SmallMatrix { n: self.n, data: self.data.iter().map(|&x| Complex64::new(x, 0.0)).collect() }
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0f64, |m, x| m.max(x.abs()))
    }
}

impl SmallMatrix<Complex64> {
    /// `self − z·I`.
    pub fn shifted(&self, z: Complex64) -> Self {
        let mut out = self.clone();
        for i in 0..self.n {
            out.data[i * self.n + i] -= z;
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::InvalidArgument("dimension mismatch"));
        }
        let n = self.n;
        Self::from_fn(n, |i, j| (0..n).map(|k| self.get(i, k) * other.get(k, j)).sum())
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        libm::sqrt(self.data.iter().map(|z| z.norm_sqr()).sum())
    }
}

/// Determinant by Gaussian elimination with partial pivoting in complex arithmetic.
pub fn complex_det(m: &SmallMatrix<Complex64>) -> Complex64 {
    let n = m.n;
    let mut a = m.data.clone();
    let mut det = Complex64::new(1.0, 0.0);
    for col in 0..n {
        let mut piv = col;
        for r in col + 1..n {
            if a[r * n + col].norm() > a[piv * n + col].norm() {
                piv = r;
            }
        }
        if a[piv * n + col].norm() == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        if piv != col {
            for k in 0..n {
                a.swap(col * n + k, piv * n + k);
            }
            det = -det;
        }
        let p = a[col * n + col];
        det *= p;
        for r in col + 1..n {
            let factor = a[r * n + col] / p;
            if factor.norm() == 0.0 {
                continue;
            }
            for k in col..n {
                let v = a[col * n + k];
                a[r * n + k] -= factor * v;
            }
        }
    }
    det
}

/// Solves `a·x = b` for a row-major `n×n` matrix by partial-pivot elimination.
pub fn solve(a: &[f64], b: &[f64]) -> Result<Vec<f64>> {
    let n = b.len();
    if a.len() != n * n {
        return Err(Error::InvalidArgument("dimension mismatch"));
    }
    let mut m = a.to_vec();
    let mut x = b.to_vec();
    let scale = m.iter().fold(0.0f64, |s, v| s.max(v.abs()));
    for col in 0..n {
        let mut piv = col;
        for r in col + 1..n {
            if m[r * n + col].abs() > m[piv * n + col].abs() {
                piv = r;
            }
        }
        if m[piv * n + col].abs() <= 1e-14 * scale {
            return Err(Error::Singular);
        }
        if piv != col {
            for k in 0..n {
                m.swap(col * n + k, piv * n + k);
            }
            x.swap(col, piv);
        }
        for r in col + 1..n {
            let f = m[r * n + col] / m[col * n + col];
            for k in col..n {
                m[r * n + k] -= f * m[col * n + k];
            }
            x[r] -= f * x[col];
        }
    }
    for col in (0..n).rev() {
        let mut s = x[col];
        for k in col + 1..n {
            s -= m[col * n + k] * x[k];
        }
        x[col] = s / m[col * n + col];
    }
    Ok(x)
}

/// Inverse of a row-major `n×n` matrix.
pub fn inverse(a: &[f64], n: usize) -> Result<Vec<f64>> {
    let mut out = alloc::vec![0.0; n * n];
    for j in 0..n {
        let mut e = alloc::vec![0.0; n];
        e[j] = 1.0;
        let col = solve(a, &e)?;
        for i in 0..n {
            out[i * n + j] = col[i];
        }
    }
    Ok(out)
}

/// Lower Cholesky factor `L` with `a = L·Lᵀ`; fails unless `a` is
/// positive definite.
pub fn cholesky(a: &[f64], n: usize) -> Result<Vec<f64>> {
    if a.len() != n * n {
        return Err(Error::InvalidArgument("dimension mismatch"));
    }
    let mut l = alloc::vec![0.0; n * n];
    for j in 0..n {
        let d = a[j * n + j] - (0..j).map(|k| l[j * n + k] * l[j * n + k]).sum::<f64>();
        if !(d > 0.0) {
            return Err(Error::Singular);
        }
        let d = libm::sqrt(d);
        l[j * n + j] = d;
        for i in j + 1..n {
            let s = a[i * n + j] - (0..j).map(|k| l[i * n + k] * l[j * n + k]).sum::<f64>();
            l[i * n + j] = s / d;
        }
    }
    Ok(l)
}

/// Least-squares solution of the `rows×cols` system `a·x ≈ b` (row-major,
/// `rows ≥ cols`) by Householder QR. Returns the solution and the residual
/// norm.
pub fn least_squares(a: &[f64], rows: usize, cols: usize, b: &[f64]) -> Result<(Vec<f64>, f64)> {
    if a.len() != rows * cols || b.len() != rows || rows < cols {
        return Err(Error::InvalidArgument("dimension mismatch"));
    }
    let mut m = a.to_vec();
    let mut y = b.to_vec();
    let scale = m.iter().fold(0.0f64, |s, v| s.max(v.abs()));
    for k in 0..cols {
        let norm = libm::sqrt((k..rows).map(|i| m[i * cols + k] * m[i * cols + k]).sum());
        if norm <= 1e-13 * scale {
            return Err(Error::Singular);
        }
        let alpha = if m[k * cols + k] > 0.0 { -norm } else { norm };
        let mut v: Vec<f64> = (k..rows).map(|i| m[i * cols + k]).collect();
        v[0] -= alpha;
        let vnorm2: f64 = v.iter().map(|x| x * x).sum();
        if vnorm2 == 0.0 {
            continue;
        }
        for j in k..cols {
            let dot: f64 = (k..rows).map(|i| v[i - k] * m[i * cols + j]).sum();
            let f = 2.0 * dot / vnorm2;
            for i in k..rows {
                m[i * cols + j] -= f * v[i - k];
            }
        }
        let dot: f64 = (k..rows).map(|i| v[i - k] * y[i]).sum();
        let f = 2.0 * dot / vnorm2;
        for i in k..rows {
            y[i] -= f * v[i - k];
        }
    }
    let mut x = alloc::vec![0.0; cols];
    for k in (0..cols).rev() {
        let mut s = y[k];
        for j in k + 1..cols {
            s -= m[k * cols + j] * x[j];
        }
        x[k] = s / m[k * cols + k];
    }
    let resid = libm::sqrt(y[cols..].iter().map(|r| r * r).sum());
    Ok((x, resid))
}
