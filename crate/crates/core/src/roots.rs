//! Bracketed scalar root finding: bisection down to a coarse width, then
//! Newton polishing that never leaves the bracket.

use crate::error::{Error, Result};

/// Bisection stops once the bracket is narrower than this.
pub const BISECTION_WIDTH: f64 = 1e-6;
/// Newton stops once the step is smaller than this.
pub const NEWTON_STEP_TOL: f64 = 1e-12;
const MAX_NEWTON: usize = 100;

/// Sub-intervals of `[lo, hi]` (split into `pieces` equal parts) on which
/// `f` changes sign. Non-finite samples break brackets.
pub fn scan_brackets(f: impl Fn(f64) -> f64, lo: f64, hi: f64, pieces: usize) -> Vec<(f64, f64)> {
    let step = (hi - lo) / pieces as f64;
    let mut out = Vec::new();
    let mut x0 = lo;
    let mut f0 = f(x0);
    for i in 1..=pieces {
        let x1 = if i == pieces { hi } else { lo + step * i as f64 };
        let f1 = f(x1);
        if f0.is_finite() && f1.is_finite() && (f0 == 0.0 || f0.signum() != f1.signum()) {
            out.push((x0, x1));
        }
        x0 = x1;
        f0 = f1;
    }
    out
}

/// Root of `f` in `[lo, hi]`, which must bracket a sign change.
///
/// Bisection narrows the bracket to [`BISECTION_WIDTH`]; Newton steps with
/// derivative `df` then refine to [`NEWTON_STEP_TOL`], falling back to a
/// bisection step whenever Newton would leave the bracket.
pub fn bisect_newton(
    f: impl Fn(f64) -> f64,
    df: impl Fn(f64) -> f64,
    mut lo: f64,
    mut hi: f64,
) -> Result<f64> {
    let mut flo = f(lo);
    let fhi = f(hi);
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if !(flo.is_finite() && fhi.is_finite()) || flo.signum() == fhi.signum() {
        return Err(Error::NoRoot(format!(
            "no sign change on [{lo:.6e}, {hi:.6e}]"
        )));
    }
    while hi - lo > BISECTION_WIDTH {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    let mut x = 0.5 * (lo + hi);
    for _ in 0..MAX_NEWTON {
        let fx = f(x);
        if fx == 0.0 {
            return Ok(x);
        }
        if fx.signum() == flo.signum() {
            lo = x;
        } else {
            hi = x;
        }
        let d = df(x);
        let mut next = x - fx / d;
        if !next.is_finite() || next < lo || next > hi {
            next = 0.5 * (lo + hi);
        }
        if (next - x).abs() < NEWTON_STEP_TOL {
            return Ok(next);
        }
        x = next;
    }
    Err(Error::NoConvergence(format!("Newton polish stalled near {x:.15e}")))
}
