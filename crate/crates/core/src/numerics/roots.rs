use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootResult {
    pub root: f64,
    /// Final bracket; `f` changes sign across it (or vanishes at `root`).
    pub bracket: (f64, f64),
    pub iterations: usize,
}

impl RootResult {
    pub fn bracket_width(&self) -> f64 {
        (self.bracket.1 - self.bracket.0).abs()
    }
}

const MAX_ITER: usize = 200;

/// Brent's method: bisection safeguarded inverse quadratic / secant steps.
///
/// Terminates once the sign-change bracket is no wider than
/// `max(tol, 4·eps·|root|)`.
pub fn find_root_detailed<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, tol: f64) -> Result<RootResult> {
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument("root tolerance must be positive"));
    }
    let (mut a, mut b) = (lo, hi);
    let (mut fa, mut fb) = (f(a), f(b));
    if fa == 0.0 {
        return Ok(RootResult { root: a, bracket: (a, a), iterations: 0 });
    }
    if fb == 0.0 {
        return Ok(RootResult { root: b, bracket: (b, b), iterations: 0 });
    }
    if !(fa * fb < 0.0) {
        return Err(Error::NoSignChange { lo, hi });
    }
    let (mut c, mut fc) = (a, fa);
    let mut d = b - a;
    let mut e = d;
    for it in 1..=MAX_ITER {
        if fb * fc > 0.0 {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let width = (c - b).abs();
        if fb == 0.0 || width <= tol.max(4.0 * f64::EPSILON * b.abs()) {
            let bracket = if b < c { (b, c) } else { (c, b) };
            let bracket = if fb == 0.0 { (b, b) } else { bracket };
            return Ok(RootResult { root: b, bracket, iterations: it });
        }
        let tol1 = 2.0 * f64::EPSILON * b.abs() + 0.5 * tol;
        let m = 0.5 * (c - b);
        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * m * s;
                q = 1.0 - s;
            } else {
                let qa = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * m * qa * (qa - r) - (b - a) * (r - 1.0));
                q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            } else {
                p = -p;
            }
            if 2.0 * p < (3.0 * m * q - (tol1 * q).abs()).min((e * q).abs()) {
                e = d;
                d = p / q;
            } else {
                d = m;
                e = m;
            }
        } else {
            d = m;
            e = m;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol1 {
            d
        } else if m > 0.0 {
            tol1
        } else {
            -tol1
        };
        fb = f(b);
    }
    Err(Error::Domain("root finder exceeded its iteration budget"))
}

/// Root of `f` in `[lo, hi]`; see [`find_root_detailed`].
pub fn find_root<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, tol: f64) -> Result<f64> {
    find_root_detailed(f, lo, hi, tol).map(|r| r.root)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sqrt2_and_half_pi() {
        let r = find_root_detailed(|x| x * x - 2.0, 1.0, 2.0, 1e-12).unwrap();
        assert!((r.root - core::f64::consts::SQRT_2).abs() < 1e-12);
        assert!(r.bracket_width() <= 1e-12);
        let r = find_root(libm::cos, 1.0, 2.0, 1e-13).unwrap();
        assert!((r - core::f64::consts::FRAC_PI_2).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_bracket() {
        assert_eq!(find_root(|x| x * x + 1.0, -1.0, 1.0, 1e-10), Err(Error::NoSignChange { lo: -1.0, hi: 1.0 }));
    }

    #[test]
    fn endpoint_root() {
        assert_eq!(find_root(|x| x - 1.0, 1.0, 2.0, 1e-10).unwrap(), 1.0);
    }
}
