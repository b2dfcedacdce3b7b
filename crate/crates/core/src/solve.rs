//! Bracketing scalar solvers.

use crate::error::{Error, Result};

const MAX_ITER: usize = 200;

/// Root of `f` in `[lo, hi]` by bisection. `f(lo)` and `f(hi)` must differ in
/// sign (or one of them be zero). Stops once the bracket is narrower than
/// `xtol`, returning its lower end if that end evaluates to an exact zero and
/// the midpoint otherwise.
pub fn bisect<F>(mut lo: f64, mut hi: f64, xtol: f64, mut f: F) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let mut f_lo = f(lo)?;
    if f_lo == 0.0 {
        return Ok(lo);
    }
    let f_hi = f(hi)?;
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if f_lo.signum() == f_hi.signum() {
        return Err(Error::domain("bisection bracket does not change sign"));
    }
    for _ in 0..MAX_ITER {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= xtol || mid == lo || mid == hi {
            return Ok(mid);
        }
        let f_mid = f(mid)?;
        if f_mid == 0.0 {
            return Ok(mid);
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Err(Error::NonConvergence("bisection"))
}

/// Maximiser of a unimodal `f` on `[lo, hi]` by golden-section search.
pub fn golden_section_max<F>(mut lo: f64, mut hi: f64, xtol: f64, mut f: F) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut a = hi - inv_phi * (hi - lo);
    let mut b = lo + inv_phi * (hi - lo);
    let mut fa = f(a)?;
    let mut fb = f(b)?;
    for _ in 0..MAX_ITER {
        if hi - lo <= xtol {
            return Ok(0.5 * (lo + hi));
        }
        // ties keep the lower sub-interval
        if fa >= fb {
            hi = b;
            b = a;
            fb = fa;
            a = hi - inv_phi * (hi - lo);
            fa = f(a)?;
        } else {
            lo = a;
            a = b;
            fa = fb;
            b = lo + inv_phi * (hi - lo);
            fb = f(b)?;
        }
    }
    Err(Error::NonConvergence("golden-section search"))
}
