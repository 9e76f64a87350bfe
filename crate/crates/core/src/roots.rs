//! Bracketing root finders shared by the density, radius and pressure solvers.

use crate::error::{FlowError, Result};

pub(crate) const MAX_BISECTIONS: usize = 200;

/// Bisection on `[lo, hi]`; `f(lo)` and `f(hi)` must not share a strict sign.
///
/// Returns the final bracket so callers can pick the side they need.
pub(crate) fn bisect_bracket<F>(mut f: F, mut lo: f64, mut hi: f64, rel_tol: f64) -> Result<(f64, f64)>
where
    F: FnMut(f64) -> f64,
{
    let mut f_lo = f(lo);
    let f_hi = f(hi);
    if f_lo == 0.0 {
        return Ok((lo, lo));
    }
    if f_hi == 0.0 {
        return Ok((hi, hi));
    }
    if f_lo.signum() == f_hi.signum() || f_lo.is_nan() || f_hi.is_nan() {
        return Err(FlowError::BracketFailure(format!(
            "no sign change on [{lo}, {hi}] (f = {f_lo}, {f_hi})"
        )));
    }
    for _ in 0..MAX_BISECTIONS {
        let mid = 0.5 * (lo + hi);
        if (hi - lo).abs() <= rel_tol * lo.abs().max(hi.abs()) || mid == lo || mid == hi {
            return Ok((lo, hi));
        }
        let f_mid = f(mid);
        if f_mid.is_nan() {
            return Err(FlowError::BracketFailure(format!("NaN at {mid}")));
        }
        if f_mid == 0.0 {
            return Ok((mid, mid));
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Err(FlowError::BracketFailure(format!(
        "bisection did not converge in {MAX_BISECTIONS} steps on [{lo}, {hi}]"
    )))
}

pub(crate) fn bisect<F>(f: F, lo: f64, hi: f64, rel_tol: f64) -> Result<f64>
where
    F: FnMut(f64) -> f64,
{
    bisect_bracket(f, lo, hi, rel_tol).map(|(a, b)| 0.5 * (a + b))
}

/// A few safeguarded Newton steps; a step is kept only if it stays inside
/// `[lo, hi]` and does not increase `|f|`.
pub(crate) fn newton_polish<F, D>(f: F, df: D, mut x: f64, lo: f64, hi: f64, steps: usize) -> f64
where
    F: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    let mut fx = f(x);
    for _ in 0..steps {
        let d = df(x);
        if fx == 0.0 || d == 0.0 || !d.is_finite() {
            break;
        }
        let next = x - fx / d;
        if !(next >= lo && next <= hi) {
            break;
        }
        let f_next = f(next);
        if f_next.abs() > fx.abs() {
            break;
        }
        x = next;
        fx = f_next;
    }
    x
}
