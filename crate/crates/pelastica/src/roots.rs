//! Bracketed scalar root finding: Newton steps safeguarded by bisection.

use crate::{Error, Result};

/// Find the root of a strictly monotone `f` on `[lo, hi]`.
///
/// `f` returns (value, derivative). A Newton step is taken whenever it stays
/// inside the current bracket and the derivative magnitude is reasonable;
/// otherwise the step falls back to bisection. `f(lo)` and `f(hi)` must
/// bracket zero (either order).
pub fn newton_bisect<F>(mut f: F, lo: f64, hi: f64, x_tol: f64, f_tol: f64) -> Result<f64>
where
    F: FnMut(f64) -> (f64, f64),
{
    let (mut lo, mut hi) = (lo, hi);
    let (flo, _) = f(lo);
    if flo.abs() <= f_tol {
        return Ok(lo);
    }
    let (fhi, _) = f(hi);
    if fhi.abs() <= f_tol {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() {
        return Err(Error::Domain(format!(
            "newton_bisect: no sign change on [{lo}, {hi}] (f: {flo:.3e}, {fhi:.3e})"
        )));
    }
    let increasing = fhi > 0.0;
    let mut x = 0.5 * (lo + hi);
    for _ in 0..200 {
        let (fx, dfx) = f(x);
        if fx.abs() <= f_tol {
            return Ok(x);
        }
        if (fx > 0.0) == increasing {
            hi = x;
        } else {
            lo = x;
        }
        if hi - lo <= x_tol.max(4.0 * f64::EPSILON * x.abs()) {
            return Ok(0.5 * (lo + hi));
        }
        let newton_ok = dfx.is_finite() && dfx.abs() > 1e-8 && dfx.abs() < 1e8;
        let mut next = if newton_ok { x - fx / dfx } else { f64::NAN };
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        x = next;
    }
    Err(Error::Tolerance(format!(
        "newton_bisect: no convergence, bracket [{lo}, {hi}]"
    )))
}

/// Expand `hi` geometrically until `f(hi)` meets or passes `target`.
///
/// `f` must be increasing. Returns a bracket `(lo, hi)` with
/// `f(lo) <= target <= f(hi)`.
pub fn bracket_upward<F>(mut f: F, start: f64, target: f64) -> Result<(f64, f64)>
where
    F: FnMut(f64) -> f64,
{
    let mut lo = start;
    let mut hi = if start > 0.0 { 2.0 * start } else { 1.0 };
    for _ in 0..200 {
        if f(hi) >= target {
            return Ok((lo, hi));
        }
        lo = hi;
        hi *= 2.0;
    }
    Err(Error::Domain(format!(
        "bracket_upward: target {target} not reached from {start}"
    )))
}
