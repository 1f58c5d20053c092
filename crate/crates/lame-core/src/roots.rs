//! Bracketed scalar root finding (Brent's method).

use crate::{Error, Result};

/// A refined root together with the bracket that isolated it.
#[derive(Debug, Clone, PartialEq)]
pub struct BracketedRoot {
    /// Location of the root.
    pub value: f64,
    /// Sign-change interval the refinement started from.
    pub bracket: (f64, f64),
    /// `|f(value)|` at the returned location.
    pub residual: f64,
    /// Number of Brent iterations spent.
    pub iterations: usize,
}

const MAX_ITER: usize = 200;

/// Brent's method on a bracket `[lo, hi]` with `f(lo) f(hi) <= 0`.
///
/// Combines bisection, secant and inverse quadratic interpolation; each step
/// keeps a valid bracket, so convergence is guaranteed for continuous `f`.
/// `tol` is an absolute tolerance on the root location; machine-precision
/// relative accuracy is added automatically.
///
/// # Errors
///
/// * [`Error::InvalidBracket`] if the endpoint values share a strict sign;
/// * [`Error::NoConvergence`] if the interval does not shrink below the
///   tolerance within an iteration cap (practically unreachable).
pub fn find_root_bracketed(
    f: impl Fn(f64) -> f64,
    lo: f64,
    hi: f64,
    tol: f64,
) -> Result<BracketedRoot> {
    let (mut a, mut b) = (lo, hi);
    let (mut fa, mut fb) = (f(a), f(b));
    if fa == 0.0 {
        return Ok(BracketedRoot {
            value: a,
            bracket: (lo, hi),
            residual: 0.0,
            iterations: 0,
        });
    }
    if fb == 0.0 {
        return Ok(BracketedRoot {
            value: b,
            bracket: (lo, hi),
            residual: 0.0,
            iterations: 0,
        });
    }
    if fa.signum() == fb.signum() {
        return Err(Error::InvalidBracket {
            lo,
            hi,
            flo: fa,
            fhi: fb,
        });
    }

    // c is the previous iterate; (b, fb) is always the best approximation.
    let (mut c, mut fc) = (a, fa);
    let mut d = b - a;
    let mut e = b - a;

    for iter in 1..=MAX_ITER {
        if fb.abs() > fc.abs() {
            // Make b the best iterate, keep the bracket [b, c].
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol1 = 2.0 * f64::EPSILON * b.abs() + 0.5 * tol;
        let xm = 0.5 * (c - b);
        if xm.abs() <= tol1 || fb == 0.0 {
            return Ok(BracketedRoot {
                value: b,
                bracket: (lo, hi),
                residual: fb.abs(),
                iterations: iter,
            });
        }
        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            // Attempt interpolation: secant if two points, inverse quadratic
            // if three distinct ones are available.
            let s = fb / fa;
            let (mut p, mut q) = if a == c {
                (2.0 * xm * s, 1.0 - s)
            } else {
                let q0 = fa / fc;
                let r = fb / fc;
                (
                    s * (2.0 * xm * q0 * (q0 - r) - (b - a) * (r - 1.0)),
                    (q0 - 1.0) * (r - 1.0) * (s - 1.0),
                )
            };
            if p > 0.0 {
                q = -q;
            }
            p = p.abs();
            let accept = 2.0 * p < (3.0 * xm * q - (tol1 * q).abs()).min((e * q).abs());
            if accept {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol1 { d } else { tol1.copysign(xm) };
        fb = f(b);
        if (fb > 0.0) == (fc > 0.0) {
            // Root no longer between b and c: move c to the old a.
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
    }
    Err(Error::NoConvergence(MAX_ITER))
}
