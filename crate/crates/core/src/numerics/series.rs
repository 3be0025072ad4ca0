//! Truncated power series in the eccentricity and a small abstraction that
//! lets one closed-form expression be evaluated either in `f64` or as a
//! series.
//!
//! Several closed forms in this crate have the shape `P(e)/e^k` where the
//! numerator cancels to `O(e^k)`. In `f64` that cancellation destroys the
//! leading digits for small `e`; done on series coefficients it is exact
//! up to rounding of the coefficients themselves.

use core::ops::{Add, Mul, Neg, Sub};

/// Number of retained coefficients.
pub const TERMS: usize = 128;

/// Below this eccentricity closed forms are evaluated through [`Series`].
pub const SERIES_SWITCH: f64 = 0.75;

/// Power series `Σ c_n e^n` truncated after [`TERMS`] coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    c: [f64; TERMS],
}

impl Series {
    pub fn zero() -> Self {
        Series { c: [0.0; TERMS] }
    }

    pub fn constant(v: f64) -> Self {
        let mut s = Self::zero();
        s.c[0] = v;
        s
    }

    /// The variable `e` itself.
    pub fn var() -> Self {
        let mut s = Self::zero();
        s.c[1] = 1.0;
        s
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.c
    }

    /// `arcsin(e)`.
    pub fn asin() -> Self {
        let mut s = Self::zero();
        // (2n)!/(4^n (n!)^2) built incrementally.
        let mut central = 1.0;
        let mut n = 0;
        while 2 * n + 1 < TERMS {
            s.c[2 * n + 1] = central / (2 * n + 1) as f64;
            central *= (2 * n + 1) as f64 / (2 * n + 2) as f64;
            n += 1;
        }
        s
    }

    /// `artanh(e)`.
    pub fn atanh() -> Self {
        let mut s = Self::zero();
        let mut n = 1;
        while n < TERMS {
            s.c[n] = 1.0 / n as f64;
            n += 2;
        }
        s
    }

    /// `(1 − e²)^p` by the binomial series.
    pub fn one_minus_e2_pow(p: f64) -> Self {
        let mut s = Self::zero();
        let mut coef = 1.0;
        let mut n = 0;
        while 2 * n < TERMS {
            s.c[2 * n] = coef;
            coef *= -(p - n as f64) / (n + 1) as f64;
            n += 1;
        }
        s
    }

    /// Divides by `e^k`, discarding the low coefficients (which the caller
    /// guarantees vanish analytically).
    pub fn shift_down(&self, k: usize) -> Self {
        let mut s = Self::zero();
        for i in k..TERMS {
            s.c[i - k] = self.c[i];
        }
        s
    }

    /// Largest magnitude among the first `k` coefficients; the residue that
    /// [`Series::shift_down`] would drop.
    pub fn low_residue(&self, k: usize) -> f64 {
        self.c[..k].iter().fold(0.0f64, |m, x| m.max(x.abs()))
    }

    pub fn eval(&self, e: f64) -> f64 {
        self.c.iter().rev().fold(0.0, |acc, &c| acc * e + c)
    }
}

impl Add for Series {
    type Output = Series;
    fn add(mut self, rhs: Series) -> Series {
        for i in 0..TERMS {
            self.c[i] += rhs.c[i];
        }
        self
    }
}

impl Sub for Series {
    type Output = Series;
    fn sub(mut self, rhs: Series) -> Series {
        for i in 0..TERMS {
            self.c[i] -= rhs.c[i];
        }
        self
    }
}

impl Neg for Series {
    type Output = Series;
    fn neg(mut self) -> Series {
        for c in self.c.iter_mut() {
            *c = -*c;
        }
        self
    }
}

impl Mul for Series {
    type Output = Series;
    fn mul(self, rhs: Series) -> Series {
        let mut out = Series::zero();
        for i in 0..TERMS {
            if self.c[i] == 0.0 {
                continue;
            }
            for j in 0..TERMS - i {
                out.c[i + j] += self.c[i] * rhs.c[j];
            }
        }
        out
    }
}

impl Mul<f64> for Series {
    type Output = Series;
    fn mul(mut self, rhs: f64) -> Series {
        for c in self.c.iter_mut() {
            *c *= rhs;
        }
        self
    }
}

impl Add<f64> for Series {
    type Output = Series;
    fn add(mut self, rhs: f64) -> Series {
        self.c[0] += rhs;
        self
    }
}

/// Arithmetic over functions of the eccentricity `e`: either plain values
/// at a fixed `e` (`f64`) or truncated series in `e` ([`Series`]).
pub trait Scalar:
    Sized
    + Clone
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + Mul<f64, Output = Self>
    + Add<f64, Output = Self>
{
    /// Context carrying the point of evaluation (unused for series).
    type Ctx: Copy;
    fn cst(ctx: Self::Ctx, v: f64) -> Self;
    fn e(ctx: Self::Ctx) -> Self;
    fn asin_e(ctx: Self::Ctx) -> Self;
    fn atanh_e(ctx: Self::Ctx) -> Self;
    fn one_minus_e2_pow(ctx: Self::Ctx, p: f64) -> Self;
    /// Exact division by `e^k` of a quantity known to be `O(e^k)`.
    fn div_e_pow(self, ctx: Self::Ctx, k: usize) -> Self;

    /// `e^n` for small `n`.
    fn e_pow(ctx: Self::Ctx, n: u32) -> Self {
        let mut r = Self::cst(ctx, 1.0);
        for _ in 0..n {
            r = r * Self::e(ctx);
        }
        r
    }

    /// Polynomial in `e` with coefficients in ascending order.
    fn poly(ctx: Self::Ctx, coeffs: &[f64]) -> Self {
        let e = Self::e(ctx);
        coeffs.iter().rev().fold(Self::cst(ctx, 0.0), |acc, &c| acc * e.clone() + c)
    }
}

impl Scalar for f64 {
    type Ctx = f64;
    fn cst(_: f64, v: f64) -> f64 {
        v
    }
    fn e(e: f64) -> f64 {
        e
    }
    fn asin_e(e: f64) -> f64 {
        libm::asin(e)
    }
    fn atanh_e(e: f64) -> f64 {
        libm::atanh(e)
    }
    fn one_minus_e2_pow(e: f64, p: f64) -> f64 {
        libm::pow(1.0 - e * e, p)
    }
    fn div_e_pow(self, e: f64, k: usize) -> f64 {
        self / libm::pow(e, k as f64)
    }
}

impl Scalar for Series {
    type Ctx = ();
    fn cst(_: (), v: f64) -> Series {
        Series::constant(v)
    }
    fn e(_: ()) -> Series {
        Series::var()
    }
    fn asin_e(_: ()) -> Series {
        Series::asin()
    }
    fn atanh_e(_: ()) -> Series {
        Series::atanh()
    }
    fn one_minus_e2_pow(_: (), p: f64) -> Series {
        Series::one_minus_e2_pow(p)
    }
    fn div_e_pow(self, _: (), k: usize) -> Series {
        self.shift_down(k)
    }
}

/// Evaluates a closed form written generically over [`Scalar`] at `e`,
/// switching to the series representation below [`SERIES_SWITCH`].
#[macro_export]
macro_rules! eval_closed {
    ($e:expr, $f:ident $(, $arg:expr)*) => {{
        let e: f64 = $e;
        if e >= $crate::numerics::series::SERIES_SWITCH {
            $f::<f64>(e $(, $arg)*)
        } else {
            $f::<$crate::numerics::Series>(() $(, $arg)*).eval(e)
        }
    }};
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn elementary_series_match_libm() {
        for &e in &[0.05, 0.3, 0.5, 0.75] {
            assert!((Series::asin().eval(e) - libm::asin(e)).abs() < 1e-15);
            assert!((Series::atanh().eval(e) - libm::atanh(e)).abs() < 1e-15);
            assert!((Series::one_minus_e2_pow(1.0 / 3.0).eval(e) - libm::pow(1.0 - e * e, 1.0 / 3.0)).abs() < 1e-15);
            assert!((Series::one_minus_e2_pow(-2.5).eval(e) - libm::pow(1.0 - e * e, -2.5)).abs() < 1e-13);
        }
    }

    #[test]
    fn product_and_shift() {
        // (asin e − e)/e^3 → 1/6 at e = 0.
        let s = (Series::asin() - Series::var()).shift_down(3);
        assert!((s.eval(0.0) - 1.0 / 6.0).abs() < 1e-16);
        let e: f64 = 0.2;
        let direct = (libm::asin(e) - e) / (e * e * e);
        assert!((s.eval(e) - direct).abs() < 1e-12);
        let p = Series::one_minus_e2_pow(0.5) * Series::one_minus_e2_pow(0.5);
        assert!((p.eval(0.4) - 0.84).abs() < 1e-15);
    }

    fn generic_bracket<S: Scalar>(ctx: S::Ctx) -> S {
        (S::asin_e(ctx) - S::e(ctx)).div_e_pow(ctx, 3)
    }

    #[test]
    fn switch_macro_agrees_on_both_sides() {
        let e = 0.6;
        let direct = generic_bracket::<f64>(e);
        let series = generic_bracket::<Series>(()).eval(e);
        assert!((direct - series).abs() < 1e-12);
        let d = |e: f64| (libm::asin(e) - e) / (e * e * e);
        assert!((eval_closed!(0.6, generic_bracket) - d(0.6)).abs() < 1e-15);
    }
}
